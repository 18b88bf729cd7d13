//! Models for the matrices `y_j` that accompany the heavy Wigner letters.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::One;

use crate::error::{Error, Result};
use crate::graph::{injective_from_trace, limit_injective_trace, trace_from_injective, Edge, StarTestGraph, UnionFind};
use crate::params::HeavyParams;
use crate::poly::{MomentPolynomial, Symbol};
use crate::rational::Q;
use crate::word::{Letter, YWord};

/// Moment functional of commuting diagonal matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagonalMoments {
    /// `φ_y(w)` is the symbol `m[w]`.
    Symbolic,
    /// Per letter, `φ(y_j^n)` for `n = 1, 2, ...`; words mixing letters are
    /// not covered.
    Table(BTreeMap<u32, Vec<Q>>),
}

impl DiagonalMoments {
    pub fn single(letter: u32, moments: Vec<Q>) -> Self {
        DiagonalMoments::Table(BTreeMap::from([(letter, moments)]))
    }

    /// Law `δ_c` for `y_letter`, tabulated up to degree `max_degree`.
    pub fn dirac(letter: u32, c: Q, max_degree: usize) -> Self {
        let mut v = Vec::with_capacity(max_degree);
        let mut p = Q::one();
        for _ in 0..max_degree {
            p *= &c;
            v.push(p.clone());
        }
        Self::single(letter, v)
    }

    pub fn phi(&self, w: &YWord) -> Result<MomentPolynomial> {
        if w.is_empty() {
            return Ok(MomentPolynomial::one());
        }
        let w = w.canonical();
        match self {
            DiagonalMoments::Symbolic => Ok(MomentPolynomial::symbol(Symbol::M(w))),
            DiagonalMoments::Table(t) => {
                let j = w.0[0];
                if w.0.iter().any(|&l| l != j) {
                    return Err(Error::Unsupported(format!("no joint moment table for {w}")));
                }
                let m = t.get(&j).ok_or_else(|| Error::domain(format!("no moments for y{j}")))?;
                m.get(w.len() - 1)
                    .map(|v| MomentPolynomial::constant(v.clone()))
                    .ok_or_else(|| Error::domain(format!("moment table of y{j} stops before degree {}", w.len())))
            }
        }
    }
}

/// Limiting traffic distribution of the y family.
pub trait TrafficOracle: Send + Sync {
    /// `τ[T]` for a graph whose labels are y letters.
    fn trace(&self, t: &StarTestGraph) -> Result<MomentPolynomial>;
}

/// Traffic distribution of independent heavy Wigner matrices standing in for
/// the y letters (`y_j` is driven by the parameters of `x_{map(j)}`).
pub struct HeavyWignerTraffic {
    pub params: HeavyParams,
    pub letter_map: BTreeMap<u32, u32>,
}

impl TrafficOracle for HeavyWignerTraffic {
    fn trace(&self, t: &StarTestGraph) -> Result<MomentPolynomial> {
        let mut edges = Vec::with_capacity(t.num_edges());
        for e in t.edges() {
            let label = match e.label {
                Letter::Y(j) => Letter::X(*self.letter_map.get(&j).ok_or_else(|| Error::domain(format!("y{j} is not mapped")))?),
                l => l,
            };
            edges.push(Edge { label, ..*e });
        }
        let relabeled = StarTestGraph::new(t.num_vertices(), edges)?;
        trace_from_injective(&relabeled, |q| limit_injective_trace(q, &self.params))
    }
}

/// Traffic distribution of diagonal matrices: every graph collapses to one vertex.
pub struct DiagonalTraffic(pub DiagonalMoments);

impl TrafficOracle for DiagonalTraffic {
    fn trace(&self, t: &StarTestGraph) -> Result<MomentPolynomial> {
        self.0.phi(&YWord(t.edges().iter().map(|e| e.label.index()).collect()))
    }
}

#[derive(Clone, Default)]
pub enum YModel {
    /// No y letters may occur.
    #[default]
    None,
    Diagonal(DiagonalMoments),
    Traffic(Arc<dyn TrafficOracle>),
}

impl fmt::Debug for YModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YModel::None => write!(f, "None"),
            YModel::Diagonal(d) => write!(f, "Diagonal({d:?})"),
            YModel::Traffic(_) => write!(f, "Traffic(..)"),
        }
    }
}

/// A graph whose edges carry y words; an empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, YWord)>,
}

impl YGraph {
    /// Single-letter *-test graph: identity edges are contracted and each
    /// word becomes a directed path.
    pub fn expand(&self) -> Result<StarTestGraph> {
        let mut uf = UnionFind::new(self.n);
        for (s, d, w) in &self.edges {
            if w.is_empty() {
                uf.union(*s, *d);
            }
        }
        let mut id = vec![usize::MAX; self.n];
        let mut n = 0;
        for v in 0..self.n {
            let r = uf.find(v);
            if id[r] == usize::MAX {
                id[r] = n;
                n += 1;
            }
            id[v] = id[r];
        }
        let mut edges = Vec::new();
        for (s, d, w) in &self.edges {
            if w.is_empty() {
                continue;
            }
            let mut cur = id[*s];
            for (i, &j) in w.0.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    id[*d]
                } else {
                    n += 1;
                    n - 1
                };
                edges.push(Edge::new(cur, next, Letter::Y(j)));
                cur = next;
            }
        }
        StarTestGraph::new(n, edges)
    }

    fn quotient(&self, rgs: &[usize], blocks: usize) -> YGraph {
        YGraph { n: blocks, edges: self.edges.iter().map(|(s, d, w)| (rgs[*s], rgs[*d], w.clone())).collect() }
    }

    fn all_letters(&self) -> YWord {
        YWord(self.edges.iter().flat_map(|(_, _, w)| w.0.iter().copied()).collect())
    }
}

impl YModel {
    fn require_empty(w: &YWord) -> Result<()> {
        if w.is_empty() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("y letters ({w}) need a y model")))
        }
    }

    /// `φ_y` of a pure y word.
    pub fn phi_y(&self, w: &YWord) -> Result<MomentPolynomial> {
        match self {
            YModel::None => Self::require_empty(w).map(|_| MomentPolynomial::one()),
            YModel::Diagonal(d) => d.phi(w),
            YModel::Traffic(o) => {
                if w.is_empty() {
                    return Ok(MomentPolynomial::one());
                }
                o.trace(&StarTestGraph::cycle(&w.letters().collect::<Vec<_>>())?)
            }
        }
    }

    /// `τ[G]` of a connected word-labeled graph.
    pub fn tau(&self, g: &YGraph) -> Result<MomentPolynomial> {
        match self {
            YModel::None => {
                for (_, _, w) in &g.edges {
                    Self::require_empty(w)?;
                }
                Ok(MomentPolynomial::one())
            }
            YModel::Diagonal(d) => d.phi(&g.all_letters()),
            YModel::Traffic(o) => o.trace(&g.expand()?),
        }
    }

    /// `τ⁰[G]` of a connected word-labeled graph.
    pub fn tau_injective(&self, g: &YGraph) -> Result<MomentPolynomial> {
        match self {
            YModel::None | YModel::Diagonal(_) => {
                if g.n > 1 {
                    // An edge between distinct vertices of a diagonal matrix vanishes.
                    Ok(MomentPolynomial::zero())
                } else {
                    self.tau(g)
                }
            }
            YModel::Traffic(_) => {
                let mut acc = MomentPolynomial::zero();
                let mut err = None;
                crate::graph::for_each_partition(g.n, &[], |rgs, blocks| {
                    if err.is_some() {
                        return;
                    }
                    let sizes = block_sizes(rgs, blocks);
                    let mu = crate::graph::mobius_of_sizes(&sizes);
                    match self.tau(&g.quotient(rgs, blocks)) {
                        Ok(v) => acc += &v.scale(&Q::from_integer(mu)),
                        Err(e) => err = Some(e),
                    }
                });
                err.map_or(Ok(acc), Err)
            }
        }
    }
}

fn block_sizes(rgs: &[usize], blocks: usize) -> Vec<usize> {
    let mut s = vec![0; blocks];
    for &b in rgs {
        s[b] += 1;
    }
    s
}

/// Convenience: injective trace of a traffic oracle on a single-letter graph.
pub fn oracle_injective(o: &dyn TrafficOracle, t: &StarTestGraph) -> Result<MomentPolynomial> {
    injective_from_trace(t, |q| o.trace(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn diagonal_tables() {
        let d = DiagonalMoments::single(1, vec![q(0), q(1), q(0), q(3)]);
        assert_eq!(d.phi(&YWord(vec![1; 4])).unwrap(), MomentPolynomial::int(3));
        assert_eq!(d.phi(&YWord::default()).unwrap(), MomentPolynomial::one());
        assert!(d.phi(&YWord(vec![1; 5])).is_err());
        assert!(d.phi(&YWord(vec![1, 2])).is_err());
        let s = DiagonalMoments::Symbolic;
        assert_eq!(s.phi(&YWord(vec![2, 1])).unwrap(), s.phi(&YWord(vec![1, 2])).unwrap());
    }

    #[test]
    fn expansion_contracts_identities() {
        let g = YGraph { n: 3, edges: vec![(0, 1, YWord::default()), (1, 2, YWord(vec![1, 2])), (2, 0, YWord(vec![1]))] };
        let t = g.expand().unwrap();
        assert_eq!(t.num_vertices(), 3);
        assert_eq!(t.num_edges(), 3);
        assert!(t.is_cyclic());
    }

    #[test]
    fn heavy_traffic_matches_moments() {
        let params = HeavyParams::symbolic([1], 2).unwrap();
        let o = HeavyWignerTraffic { params, letter_map: BTreeMap::from([(1, 1)]) };
        let m = YModel::Traffic(Arc::new(o));
        assert_eq!(m.phi_y(&YWord(vec![1, 1])).unwrap(), MomentPolynomial::a(1, 1));
        let four = m.phi_y(&YWord(vec![1; 4])).unwrap();
        assert_eq!(four.to_string(), "2*a[1,1]^2 + a[1,2]");
    }
}
