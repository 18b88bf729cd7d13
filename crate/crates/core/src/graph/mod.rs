//! *-test graphs: connected directed multigraphs with labeled edges.

mod bridges;
mod fat_tree;
mod free_product;
mod partition;

pub use bridges::{two_edge_structure, TwoEdgeStructure};
pub use fat_tree::{fat_tree_profile, limit_injective_trace, FatEdge, FatTreeProfile};
pub(crate) use free_product::is_free_product_of as is_free_product_of_components;
pub use free_product::{family_components, is_free_product, FamilyComponent};
pub(crate) use partition::mobius_of_sizes;
pub use partition::{
    bell_number, Combine, for_each_partition, injective_from_trace, partition_mobius, set_partitions, trace_from_injective,
    VertexPartition,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::word::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Letter,
    pub star: bool,
}

impl Edge {
    pub fn new(src: usize, dst: usize, label: Letter) -> Self {
        Edge { src, dst, label, star: false }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// A finite connected oriented multigraph with vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarTestGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl StarTestGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a *-test graph needs at least one vertex"));
        }
        if let Some(e) = edges.iter().find(|e| e.src >= n || e.dst >= n) {
            return Err(Error::domain(format!("edge ({}, {}) leaves the vertex set 0..{n}", e.src, e.dst)));
        }
        let g = StarTestGraph { n, edges };
        if !g.is_connected() {
            return Err(Error::domain("a *-test graph must be connected"));
        }
        Ok(g)
    }

    /// Convenience constructor for unlabeled-star edges `(src, dst, label)`.
    pub fn from_triples(n: usize, edges: &[(usize, usize, Letter)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(s, d, l)| Edge::new(s, d, l)).collect())
    }

    /// Directed cycle `0 → 1 → ... → 0` carrying the given labels.
    pub fn cycle(labels: &[Letter]) -> Result<Self> {
        let n = labels.len().max(1);
        Self::new(n, labels.iter().enumerate().map(|(i, &l)| Edge::new(i, (i + 1) % n, l)).collect())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.src, e.dst);
        }
        uf.count() == 1
    }

    /// Identifies the vertices of each block; block `b` becomes vertex `b`.
    pub fn quotient(&self, pi: &VertexPartition) -> Result<StarTestGraph> {
        if pi.num_elements() != self.n {
            return Err(Error::domain(format!(
                "partition of {} elements applied to a graph with {} vertices",
                pi.num_elements(),
                self.n
            )));
        }
        let map = pi.block_of();
        Ok(StarTestGraph {
            n: pi.num_blocks(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge { src: map[e.src], dst: map[e.dst], ..*e })
                .collect(),
        })
    }

    /// Connected and balanced (in-degree = out-degree everywhere).
    pub fn is_cyclic(&self) -> bool {
        let mut bal = vec![0i64; self.n];
        for e in &self.edges {
            bal[e.src] += 1;
            bal[e.dst] -= 1;
        }
        bal.iter().all(|&b| b == 0)
    }

    /// True when the graph is one directed cycle through every vertex once.
    pub fn is_simple_cycle(&self) -> bool {
        if self.edges.len() != self.n {
            return false;
        }
        let mut outd = vec![0usize; self.n];
        let mut ind = vec![0usize; self.n];
        for e in &self.edges {
            outd[e.src] += 1;
            ind[e.dst] += 1;
        }
        outd.iter().chain(&ind).all(|&d| d == 1)
    }

    /// Labels along the unique circuit of a simple cycle, starting at vertex 0.
    pub fn cycle_word(&self) -> Option<Vec<Letter>> {
        if !self.is_simple_cycle() {
            return None;
        }
        let mut next = vec![0usize; self.n];
        for (i, e) in self.edges.iter().enumerate() {
            next[e.src] = i;
        }
        let mut out = Vec::with_capacity(self.n);
        let mut v = 0;
        for _ in 0..self.n {
            let e = &self.edges[next[v]];
            out.push(e.label);
            v = e.dst;
        }
        Some(out)
    }

    /// The connected subgraph spanned by the given edges, with vertices
    /// renumbered by first appearance; also returns the old ids.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> Result<(StarTestGraph, Vec<usize>)> {
        let mut ids: Vec<usize> = Vec::new();
        let mut map = vec![usize::MAX; self.n];
        let mut edges = Vec::with_capacity(edge_ids.len());
        for &i in edge_ids {
            let e = self.edges[i];
            for v in [e.src, e.dst] {
                if map[v] == usize::MAX {
                    map[v] = ids.len();
                    ids.push(v);
                }
            }
            edges.push(Edge { src: map[e.src], dst: map[e.dst], ..e });
        }
        Ok((StarTestGraph::new(ids.len(), edges)?, ids))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.n,
            "edges": self.edges.iter().map(|e| json!([e.src, e.dst, e.label.to_string(), e.star])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::parse(0, format!("graph JSON: {m}"));
        let n = v.get("vertices").and_then(Value::as_u64).ok_or_else(|| bad("missing integer \"vertices\""))? as usize;
        let arr = v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing array \"edges\""))?;
        let mut edges = Vec::with_capacity(arr.len());
        for e in arr {
            let t = e.as_array().filter(|t| t.len() == 3 || t.len() == 4).ok_or_else(|| bad("edge must be [src, dst, label, star]"))?;
            let src = t[0].as_u64().ok_or_else(|| bad("edge source must be an integer"))? as usize;
            let dst = t[1].as_u64().ok_or_else(|| bad("edge target must be an integer"))? as usize;
            let label = Letter::parse(t[2].as_str().ok_or_else(|| bad("edge label must be a string"))?)?;
            let star = match t.get(3) {
                None => false,
                Some(s) => s.as_bool().ok_or_else(|| bad("star flag must be a boolean"))?,
            };
            edges.push(Edge { src, dst, label, star });
        }
        StarTestGraph::new(n, edges)
    }
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), sets: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }
}
