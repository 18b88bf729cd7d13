use serde::Serialize;

use super::{StarTestGraph, UnionFind};

/// Two-edge-connected components and the bridge tree joining them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoEdgeStructure {
    /// Vertex sets, ordered by least vertex.
    pub components: Vec<Vec<usize>>,
    /// Edge ids of the bridges, ascending.
    pub bridges: Vec<usize>,
    /// One `(component, component)` edge per bridge, in bridge order.
    pub component_tree: Vec<(usize, usize)>,
    /// Leaves of the bridge tree; 2 when there is a single component.
    pub leaf_count: usize,
}

/// Bridges of the underlying undirected multigraph; parallel edges and loops
/// are never bridges.
pub fn two_edge_structure(t: &StarTestGraph) -> TwoEdgeStructure {
    let n = t.num_vertices();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in t.edges().iter().enumerate() {
        if !e.is_loop() {
            adj[e.src].push((e.dst, i));
            adj[e.dst].push((e.src, i));
        }
    }

    // Iterative lowlink DFS keyed on the entering edge id.
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_bridge = vec![false; t.num_edges()];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (v, via, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let (w, id) = adj[v][*next];
                *next += 1;
                if id == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, id, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }

    let mut uf = UnionFind::new(n);
    for (i, e) in t.edges().iter().enumerate() {
        if !is_bridge[i] {
            uf.union(e.src, e.dst);
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_id = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        if root_id[r] == usize::MAX {
            root_id[r] = components.len();
            components.push(Vec::new());
        }
        comp_of[v] = root_id[r];
        components[root_id[r]].push(v);
    }

    let bridges: Vec<usize> = (0..t.num_edges()).filter(|&i| is_bridge[i]).collect();
    let component_tree: Vec<(usize, usize)> = bridges
        .iter()
        .map(|&i| {
            let e = t.edges()[i];
            (comp_of[e.src], comp_of[e.dst])
        })
        .collect();
    let leaf_count = if components.len() == 1 {
        2
    } else {
        let mut deg = vec![0usize; components.len()];
        for &(a, b) in &component_tree {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.iter().filter(|&&d| d == 1).count()
    };
    TwoEdgeStructure { components, bridges, component_tree, leaf_count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;

    const X: Letter = Letter::X(1);

    #[test]
    fn doubled_edge_has_no_bridge() {
        let t = StarTestGraph::from_triples(2, &[(0, 1, X), (1, 0, X)]).unwrap();
        let s = two_edge_structure(&t);
        assert!(s.bridges.is_empty());
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.leaf_count, 2);
    }

    #[test]
    fn edge_plus_doubled_edge() {
        let t = StarTestGraph::from_triples(3, &[(0, 1, X), (1, 2, X), (2, 1, X)]).unwrap();
        let s = two_edge_structure(&t);
        assert_eq!(s.bridges, vec![0]);
        assert_eq!(s.components, vec![vec![0], vec![1, 2]]);
        assert_eq!(s.leaf_count, 2);
    }

    #[test]
    fn three_star() {
        let t = StarTestGraph::from_triples(4, &[(0, 1, X), (0, 2, X), (3, 0, X)]).unwrap();
        let s = two_edge_structure(&t);
        assert_eq!(s.bridges.len(), 3);
        assert_eq!(s.leaf_count, 3);
    }

    #[test]
    fn loops_are_not_bridges() {
        let t = StarTestGraph::from_triples(2, &[(0, 0, X), (0, 1, X)]).unwrap();
        let s = two_edge_structure(&t);
        assert_eq!(s.bridges, vec![1]);
        assert_eq!(s.leaf_count, 2);
    }
}
