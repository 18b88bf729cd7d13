use std::collections::BTreeMap;

use serde::Serialize;

use super::StarTestGraph;
use crate::error::{Error, Result};
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::word::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FatEdge {
    pub u: usize,
    pub v: usize,
    pub multiplicity: usize,
    /// Distinct labels carried by the parallel edges, sorted.
    pub labels: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FatTreeProfile {
    pub edges: Vec<FatEdge>,
}

impl FatTreeProfile {
    fn colored(&self) -> bool {
        self.edges.iter().all(|e| e.multiplicity % 2 == 0 && e.labels.len() == 1)
    }

    /// `(q_1, q_2, ...)`: number of undirected edges of multiplicity `2k`.
    pub fn type_vector(&self) -> Option<Vec<usize>> {
        if !self.colored() {
            return None;
        }
        let kmax = self.edges.iter().map(|e| e.multiplicity / 2).max().unwrap_or(0);
        let mut q = vec![0; kmax];
        for e in &self.edges {
            q[e.multiplicity / 2 - 1] += 1;
        }
        Some(q)
    }

    /// Per-label type vectors.
    pub fn type_by_label(&self) -> Option<BTreeMap<Letter, Vec<usize>>> {
        if !self.colored() {
            return None;
        }
        let mut out: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
        for e in &self.edges {
            let q = out.entry(e.labels[0]).or_default();
            let k = e.multiplicity / 2;
            if q.len() < k {
                q.resize(k, 0);
            }
            q[k - 1] += 1;
        }
        Some(out)
    }
}

/// Profile of `T` when its underlying simple graph is a loop-free tree.
pub fn fat_tree_profile(t: &StarTestGraph) -> Option<FatTreeProfile> {
    if t.edges().iter().any(|e| e.is_loop()) {
        return None;
    }
    let mut by_pair: BTreeMap<(usize, usize), FatEdge> = BTreeMap::new();
    for e in t.edges() {
        let (u, v) = (e.src.min(e.dst), e.src.max(e.dst));
        let f = by_pair.entry((u, v)).or_insert(FatEdge { u, v, multiplicity: 0, labels: Vec::new() });
        f.multiplicity += 1;
        if let Err(pos) = f.labels.binary_search(&e.label) {
            f.labels.insert(pos, e.label);
        }
    }
    // Connected by construction, so a tree iff |E| = |V| − 1.
    (by_pair.len() + 1 == t.num_vertices()).then(|| FatTreeProfile { edges: by_pair.into_values().collect() })
}

/// Limiting injective trace of heavy Wigner matrices on `T`.
pub fn limit_injective_trace(t: &StarTestGraph, params: &HeavyParams) -> Result<MomentPolynomial> {
    let Some(profile) = fat_tree_profile(t) else {
        return Ok(MomentPolynomial::zero());
    };
    if !profile.colored() {
        return Ok(MomentPolynomial::zero());
    }
    let mut acc = MomentPolynomial::one();
    for e in &profile.edges {
        let j = match e.labels[0] {
            Letter::X(j) => j,
            l => return Err(Error::domain(format!("label {l} is not a heavy Wigner matrix"))),
        };
        acc = &acc * &params.a(j, (e.multiplicity / 2) as u32)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const X1: Letter = Letter::X(1);
    const X2: Letter = Letter::X(2);

    fn sym() -> HeavyParams {
        HeavyParams::symbolic([1, 2], 3).unwrap()
    }

    fn multi(m: usize, l: Letter) -> StarTestGraph {
        let e: Vec<_> = (0..m).map(|i| if i % 2 == 0 { (0, 1, l) } else { (1, 0, l) }).collect();
        StarTestGraph::from_triples(2, &e).unwrap()
    }

    #[test]
    fn fat_tree_types() {
        assert_eq!(fat_tree_profile(&multi(2, X1)).unwrap().type_vector(), Some(vec![1]));
        assert_eq!(fat_tree_profile(&multi(6, X1)).unwrap().type_vector(), Some(vec![0, 0, 1]));
        let tri = StarTestGraph::from_triples(3, &[(0, 1, X1), (1, 2, X1), (2, 0, X1)]).unwrap();
        assert!(fat_tree_profile(&tri).is_none());
    }

    #[test]
    fn limits() {
        assert_eq!(limit_injective_trace(&multi(2, X1), &sym()).unwrap(), MomentPolynomial::a(1, 1));
        assert_eq!(limit_injective_trace(&multi(4, X2), &sym()).unwrap(), MomentPolynomial::a(2, 2));
        assert!(limit_injective_trace(&multi(3, X1), &sym()).unwrap().is_zero());
        let tri = StarTestGraph::from_triples(3, &[(0, 1, X1), (1, 2, X1), (2, 0, X1)]).unwrap();
        assert!(limit_injective_trace(&tri, &sym()).unwrap().is_zero());
        let mixed = StarTestGraph::from_triples(2, &[(0, 1, X1), (1, 0, X2)]).unwrap();
        assert!(limit_injective_trace(&mixed, &sym()).unwrap().is_zero());
        let looped = StarTestGraph::from_triples(1, &[(0, 0, X1), (0, 0, X1)]).unwrap();
        assert!(limit_injective_trace(&looped, &sym()).unwrap().is_zero());
        assert!(matches!(
            limit_injective_trace(&multi(8, X1), &sym()),
            Err(Error::Truncation { needed_k: 4, .. })
        ));
        let point = StarTestGraph::from_triples(1, &[]).unwrap();
        assert_eq!(limit_injective_trace(&point, &sym()).unwrap(), MomentPolynomial::one());
    }

    #[test]
    fn path_of_two_colors() {
        let t = StarTestGraph::from_triples(3, &[(0, 1, X1), (1, 0, X1), (1, 2, X2), (2, 1, X2), (1, 2, X2), (2, 1, X2)])
            .unwrap();
        assert_eq!(limit_injective_trace(&t, &sym()).unwrap(), &MomentPolynomial::a(1, 1) * &MomentPolynomial::a(2, 2));
        let by = fat_tree_profile(&t).unwrap().type_by_label().unwrap();
        assert_eq!(by[&X2], vec![0, 1]);
    }
}
