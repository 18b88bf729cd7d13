//! Closed colored walks on rooted plane trees.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Default cap on visited search nodes.
pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

/// A rooted plane tree with a closed walk from the root.
///
/// Vertices are numbered in order of first visit (vertex 0 is the root), so
/// a vertex's children, read in increasing id, are in plane order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredCycleOnTree {
    parent: Vec<usize>,
    color: Vec<u32>,
    walk: Vec<usize>,
}

impl ColoredCycleOnTree {
    /// Builds from a vertex walk and its step colors, renumbering vertices by
    /// first visit. Fails if the walk is not a closed walk on a tree with
    /// single-colored edges.
    pub fn from_walk(walk: &[usize], colors: &[u32]) -> Result<Self> {
        if walk.is_empty() || walk.len() != colors.len() + 1 || walk[0] != *walk.last().expect("nonempty") {
            return Err(Error::domain("a cycle needs a closed walk with one color per step"));
        }
        let max = *walk.iter().max().expect("nonempty");
        let mut id = vec![usize::MAX; max + 1];
        id[walk[0]] = 0;
        let mut parent = vec![0usize];
        let mut color = vec![0u32];
        let mut depth = vec![0usize];
        let mut new_walk = Vec::with_capacity(walk.len());
        new_walk.push(0);
        for (n, w) in walk.windows(2).enumerate() {
            let (a, b) = (id[w[0]], w[1]);
            let c = colors[n];
            let nb = if id[b] == usize::MAX {
                id[b] = parent.len();
                parent.push(a);
                color.push(c);
                depth.push(depth[a] + 1);
                id[b]
            } else {
                let nb = id[b];
                let ok = (parent[nb] == a && nb != 0 && color[nb] == c) || (parent[a] == nb && a != 0 && color[a] == c);
                if !ok {
                    return Err(Error::domain(format!("step {n} does not follow a tree edge of color {c}")));
                }
                nb
            };
            new_walk.push(nb);
        }
        Ok(ColoredCycleOnTree { parent, color, walk: new_walk })
    }

    /// Length `L` of the walk.
    pub fn len(&self) -> usize {
        self.walk.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn num_edges(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn walk(&self) -> &[usize] {
        &self.walk
    }

    /// Parent of a non-root vertex.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    /// Color of the edge above a non-root vertex.
    pub fn edge_color(&self, v: usize) -> u32 {
        self.color[v]
    }

    pub fn step_colors(&self) -> Vec<u32> {
        (0..self.len()).map(|n| self.color[self.step_edge(n)]).collect()
    }

    /// The edge used by step `n` (0-based), named by its lower endpoint.
    pub fn step_edge(&self, n: usize) -> usize {
        let (a, b) = (self.walk[n], self.walk[n + 1]);
        if b != 0 && self.parent[b] == a {
            b
        } else {
            a
        }
    }

    /// Number of steps along each edge (index = lower endpoint; entry 0 unused).
    pub fn visits(&self) -> Vec<usize> {
        let mut v = vec![0; self.parent.len()];
        for n in 0..self.len() {
            v[self.step_edge(n)] += 1;
        }
        v
    }

    /// Every edge traversed exactly twice.
    pub fn is_double(&self) -> bool {
        self.visits().iter().skip(1).all(|&c| c == 2)
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (1..self.parent.len()).filter(|&w| self.parent[w] == v).collect()
    }
}

#[derive(Clone)]
struct State {
    parent: Vec<usize>,
    color: Vec<u32>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    walk: Vec<usize>,
}

impl State {
    fn root() -> Self {
        State { parent: vec![0], color: vec![0], depth: vec![0], children: vec![vec![]], walk: vec![0] }
    }

    fn finish(&self) -> ColoredCycleOnTree {
        ColoredCycleOnTree { parent: self.parent.clone(), color: self.color.clone(), walk: self.walk.clone() }
    }
}

struct Search<'a> {
    gamma: &'a [u32],
    /// `deadline[n]`: first chain boundary `≥ n`.
    deadline: Vec<usize>,
    nodes: &'a AtomicU64,
    cap: u64,
}

impl Search<'_> {
    /// Depth-first extension of `s` up to `stop` steps; states reaching
    /// `stop` are handed to `out` in search order.
    fn run(&self, s: &mut State, stop: usize, out: &mut dyn FnMut(&State)) -> Result<()> {
        let n = s.walk.len() - 1;
        if n == stop {
            out(s);
            return Ok(());
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            return Err(Error::resource("cycle enumeration nodes", self.cap));
        }
        let c = self.gamma[n];
        let cur = *s.walk.last().expect("nonempty");
        let budget = self.deadline[n + 1] - (n + 1);

        if cur != 0 && s.color[cur] == c && s.depth[cur] - 1 <= budget {
            s.walk.push(s.parent[cur]);
            self.run(s, stop, out)?;
            s.walk.pop();
        }
        for i in 0..s.children[cur].len() {
            let ch = s.children[cur][i];
            if s.color[ch] == c && s.depth[ch] <= budget {
                s.walk.push(ch);
                self.run(s, stop, out)?;
                s.walk.pop();
            }
        }
        if s.depth[cur] < budget {
            let v = s.parent.len();
            s.parent.push(cur);
            s.color.push(c);
            s.depth.push(s.depth[cur] + 1);
            s.children.push(Vec::new());
            s.children[cur].push(v);
            s.walk.push(v);
            self.run(s, stop, out)?;
            s.walk.pop();
            s.children[cur].pop();
            s.children.pop();
            s.depth.pop();
            s.color.pop();
            s.parent.pop();
        }
        Ok(())
    }
}

/// Options for [`enumerate_cycles_with`].
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub exec: Execution,
    /// Prefix length at which the search is split between workers.
    pub split_depth: usize,
    pub node_cap: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { exec: Execution::default(), split_depth: 4, node_cap: DEFAULT_NODE_CAP }
    }
}

/// All elements of `𝓛^(γ)` (or of the chain set `𝓛^(γ)_𝐋` when `chain`
/// is given), in depth-first order.
pub fn enumerate_cycles(gamma: &[u32], chain: Option<&[usize]>) -> Result<Vec<ColoredCycleOnTree>> {
    enumerate_cycles_with(gamma, chain, EnumOptions::default())
}

pub fn enumerate_cycles_with(gamma: &[u32], chain: Option<&[usize]>, opts: EnumOptions) -> Result<Vec<ColoredCycleOnTree>> {
    let l = gamma.len();
    let mut bounds: Vec<usize> = match chain {
        Some(lens) => {
            if lens.iter().sum::<usize>() != l {
                return Err(Error::domain("chain lengths must sum to the word length"));
            }
            lens.iter()
                .scan(0, |acc, &x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        }
        None => vec![l],
    };
    bounds.push(l);
    let mut deadline = vec![l; l + 1];
    for (n, d) in deadline.iter_mut().enumerate() {
        *d = *bounds.iter().find(|&&b| b >= n).expect("l bounds everything");
    }
    let nodes = AtomicU64::new(0);
    let search = Search { gamma, deadline, nodes: &nodes, cap: opts.node_cap };

    let split = opts.split_depth.min(l);
    let mut frontier = Vec::new();
    search.run(&mut State::root(), split, &mut |s| frontier.push(s.clone()))?;

    let parts = opts.exec.try_map(frontier, |mut s| {
        let mut found = Vec::new();
        search.run(&mut s, l, &mut |s| found.push(s.finish())).map(|_| found)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_cycles(&[1, 1], None).unwrap().len(), 1);
        assert_eq!(enumerate_cycles(&[1, 1, 1, 1], None).unwrap().len(), 3);
        assert!(enumerate_cycles(&[1, 2, 1, 2], None).unwrap().is_empty());
        assert_eq!(enumerate_cycles(&[1, 1, 1, 1], Some(&[2, 2])).unwrap().len(), 2);
        assert_eq!(enumerate_cycles(&[], None).unwrap().len(), 1);
        assert!(enumerate_cycles(&[1], None).unwrap().is_empty());
    }

    #[test]
    fn x6_has_twelve_cycles() {
        let all = enumerate_cycles(&[1; 6], None).unwrap();
        assert_eq!(all.len(), 12);
        assert_eq!(all.iter().filter(|c| c.is_double()).count(), 5);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = [1, 1, 2, 2, 1, 1, 2, 2, 1, 1];
        let a = enumerate_cycles_with(&g, None, EnumOptions { exec: Execution::Sequential, ..Default::default() }).unwrap();
        let b = enumerate_cycles_with(&g, None, EnumOptions { exec: Execution::Parallel, split_depth: 2, ..Default::default() })
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn node_cap_is_enforced() {
        let r = enumerate_cycles_with(&[1; 12], None, EnumOptions { node_cap: 10, ..Default::default() });
        assert!(matches!(r, Err(Error::Resource { .. })));
    }

    #[test]
    fn from_walk_canonicalizes() {
        let c = ColoredCycleOnTree::from_walk(&[5, 9, 5, 7, 5], &[1, 1, 1, 1]).unwrap();
        assert_eq!(c.walk(), &[0, 1, 0, 2, 0]);
        assert!(c.is_double());
        assert!(ColoredCycleOnTree::from_walk(&[0, 1, 0], &[1, 2]).is_err());
    }
}
