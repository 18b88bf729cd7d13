use super::{StarTestGraph, UnionFind};
use crate::word::Letter;

/// A connected component of the edges of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyComponent {
    pub family: u32,
    pub edge_ids: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Single-family connected components, ordered by their first edge.
pub fn family_components(t: &StarTestGraph, family_of: &dyn Fn(Letter) -> u32) -> Vec<FamilyComponent> {
    let n = t.num_vertices();
    let fam: Vec<u32> = t.edges().iter().map(|e| family_of(e.label)).collect();
    let mut families: Vec<u32> = fam.clone();
    families.sort_unstable();
    families.dedup();

    let mut out: Vec<(usize, FamilyComponent)> = Vec::new();
    for f in families {
        let mut uf = UnionFind::new(n);
        for (e, &fe) in t.edges().iter().zip(&fam) {
            if fe == f {
                uf.union(e.src, e.dst);
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut local: Vec<(usize, FamilyComponent)> = Vec::new();
        for (i, (e, &fe)) in t.edges().iter().zip(&fam).enumerate() {
            if fe != f {
                continue;
            }
            let r = uf.find(e.src);
            if slot[r] == usize::MAX {
                slot[r] = local.len();
                local.push((i, FamilyComponent { family: f, edge_ids: Vec::new(), vertices: Vec::new() }));
            }
            local[slot[r]].1.edge_ids.push(i);
        }
        for (_, c) in &mut local {
            let mut vs: Vec<usize> = c.edge_ids.iter().flat_map(|&i| [t.edges()[i].src, t.edges()[i].dst]).collect();
            vs.sort_unstable();
            vs.dedup();
            c.vertices = vs;
        }
        out.extend(local);
    }
    out.sort_by_key(|(first, _)| *first);
    out.into_iter().map(|(_, c)| c).collect()
}

/// Whether the component/shared-vertex incidence graph is a tree.
pub fn is_free_product(t: &StarTestGraph, family_of: &dyn Fn(Letter) -> u32) -> bool {
    let comps = family_components(t, family_of);
    is_free_product_of(t.num_vertices(), &comps)
}

pub(crate) fn is_free_product_of(n: usize, comps: &[FamilyComponent]) -> bool {
    if comps.is_empty() {
        return true;
    }
    let mut count = vec![0usize; n];
    for c in comps {
        for &v in &c.vertices {
            count[v] += 1;
        }
    }
    let k = comps.len();
    let mut node_of_vertex = vec![usize::MAX; n];
    let mut nodes = k;
    for v in 0..n {
        if count[v] >= 2 {
            node_of_vertex[v] = nodes;
            nodes += 1;
        }
    }
    let mut uf = UnionFind::new(nodes);
    let mut edges = 0;
    for (ci, c) in comps.iter().enumerate() {
        for &v in &c.vertices {
            if node_of_vertex[v] != usize::MAX {
                edges += 1;
                if !uf.union(ci, node_of_vertex[v]) {
                    return false;
                }
            }
        }
    }
    uf.count() == 1 && edges + 1 == nodes
}
