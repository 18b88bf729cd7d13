use std::collections::BTreeMap;

use super::cycles::{enumerate_cycles, ColoredCycleOnTree};
use crate::error::Result;

/// Maps a cycle to the element of `𝓛_2` it folds from: while some edge is
/// entered downward a second time, the excursion below it is moved onto a
/// fresh copy of the subtree, hung from the same vertex.
pub fn unfold(gc: &ColoredCycleOnTree) -> ColoredCycleOnTree {
    let mut cur = gc.clone();
    let colors = gc.step_colors();
    while let Some((n, m)) = first_reentry(&cur) {
        let walk = cur.walk();
        let mut fresh = cur.num_vertices();
        let mut map = vec![usize::MAX; cur.num_vertices()];
        let mut next = walk.to_vec();
        for slot in next.iter_mut().take(m).skip(n + 1) {
            let v = *slot;
            if map[v] == usize::MAX {
                map[v] = fresh;
                fresh += 1;
            }
            *slot = map[v];
        }
        cur = ColoredCycleOnTree::from_walk(&next, &colors).expect("copying an excursion keeps a tree walk");
    }
    cur
}

/// `(n, m)`: step `n` re-enters an edge downward from `v = walk[n]`, and `m`
/// is the first later time the walk is back at `v`.
fn first_reentry(gc: &ColoredCycleOnTree) -> Option<(usize, usize)> {
    let walk = gc.walk();
    let mut entered = vec![false; gc.num_vertices()];
    for n in 0..gc.len() {
        let (v, w) = (walk[n], walk[n + 1]);
        if gc.parent(w) == Some(v) {
            if entered[w] {
                let m = (n + 1..walk.len()).find(|&t| walk[t] == v).expect("closed walk returns");
                return Some((n, m));
            }
            entered[w] = true;
        }
    }
    None
}

/// Groups `𝓛^(γ)` by unfolded image, keyed by the image.
pub fn unfold_fibers(gamma: &[u32]) -> Result<BTreeMap<ColoredCycleOnTree, Vec<ColoredCycleOnTree>>> {
    let mut fibers: BTreeMap<ColoredCycleOnTree, Vec<ColoredCycleOnTree>> = BTreeMap::new();
    for c in enumerate_cycles(gamma, None)? {
        fibers.entry(unfold(&c)).or_default().push(c);
    }
    Ok(fibers)
}
