//! Finite-N traffic traces `τ_N[T]` and `τ_N⁰[T]`.

use std::collections::BTreeMap;
use std::ops::Mul;

use num::{One, Zero};
use serde::Serialize;

use super::matrix::{operator_norm, DenseMatrix, SymMatrix};
use super::traces::{normalized_trace, Bindings};
use crate::error::{Error, Result};
use crate::graph::{injective_from_trace, two_edge_structure, StarTestGraph};
use crate::word::{Letter, Word};

/// Default cap on `N^|V|` for direct sums.
pub const DEFAULT_LABELING_CAP: u64 = 100_000_000;

/// `Σ_φ ∏_e M_e(φ(src), φ(dst))` over all labelings `φ: V → [N]`, or only
/// injective ones. Not normalized.
pub fn labeling_sum<T>(t: &StarTestGraph, mats: &BTreeMap<Letter, DenseMatrix<T>>, injective: bool, cap: u64) -> Result<T>
where
    T: Clone + Zero + One + Mul<Output = T>,
{
    let n = mats.values().next().map(DenseMatrix::n).ok_or_else(|| Error::domain("no matrices bound"))?;
    if mats.values().any(|m| m.n() != n) {
        return Err(Error::Dimension("bound matrices differ in size".into()));
    }
    let edges: Vec<(usize, usize, &DenseMatrix<T>)> = t
        .edges()
        .iter()
        .map(|e| mats.get(&e.label).map(|m| (e.src, e.dst, m)).ok_or_else(|| Error::domain(format!("no matrix bound to {}", e.label))))
        .collect::<Result<_>>()?;
    let v = t.num_vertices();
    let count = (n as u64).checked_pow(v as u32).filter(|&c| c <= cap);
    if count.is_none() {
        return Err(Error::resource("labelings N^|V|", cap));
    }
    let mut phi = vec![0usize; v];
    let mut acc = T::zero();
    loop {
        let distinct = !injective || (0..v).all(|a| (a + 1..v).all(|b| phi[a] != phi[b]));
        if distinct {
            let mut p = T::one();
            for (s, d, m) in &edges {
                p = p * m.get(phi[*s], phi[*d]).clone();
            }
            acc = acc + p;
        }
        let mut k = 0;
        loop {
            if k == v {
                return Ok(acc);
            }
            phi[k] += 1;
            if phi[k] < n {
                break;
            }
            phi[k] = 0;
            k += 1;
        }
    }
}

/// `τ_N[T]` (or `τ_N⁰[T]`) of real symmetric matrices.
///
/// A simple cycle is read as a normalized word trace; injective traces go
/// through Möbius inversion over quotients; anything else is summed
/// directly under `cap`.
pub fn empirical_traffic_trace(b: &Bindings, t: &StarTestGraph, injective: bool, cap: u64) -> Result<f64> {
    if injective {
        return injective_from_trace(t, |q| empirical_traffic_trace(b, q, false, cap));
    }
    if let Some(word) = t.cycle_word() {
        return normalized_trace(b, &Word(word));
    }
    let dense: BTreeMap<Letter, DenseMatrix<f64>> = b.iter().map(|(l, m)| (*l, m.to_dense())).collect();
    let n = dense.values().next().map(DenseMatrix::n).ok_or_else(|| Error::domain("no matrices bound"))?;
    Ok(labeling_sum(t, &dense, false, cap)? / n as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MsBound {
    pub lhs: f64,
    pub bound: f64,
    /// Leaves of the bridge tree.
    pub r: usize,
    pub satisfied: bool,
}

/// `|τ_N[T]| ≤ N^{r/2 − 1} ∏_e ‖M_e‖`, norms by power iteration.
pub fn ms_bound_check(t: &StarTestGraph, b: &Bindings, cap: u64) -> Result<MsBound> {
    let n = b.values().next().map(SymMatrix::n).ok_or_else(|| Error::domain("no matrices bound"))?;
    let lhs = empirical_traffic_trace(b, t, false, cap)?.abs();
    let norms: BTreeMap<Letter, f64> = b.iter().map(|(l, m)| (*l, operator_norm(m, 1e-12))).collect();
    let r = two_edge_structure(t).leaf_count;
    let mut bound = (n as f64).powf(r as f64 / 2.0 - 1.0);
    for e in t.edges() {
        bound *= norms[&e.label];
    }
    Ok(MsBound { lhs, bound, r, satisfied: lhs <= bound * (1.0 + 1e-9) })
}
