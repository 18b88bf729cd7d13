//! Set partitions as restricted-growth strings, and Möbius inversion between
//! traces and injective traces.

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use super::StarTestGraph;
use crate::error::{Error, Result};
use crate::poly::MomentPolynomial;
use crate::rational::Q;

/// A partition of `0..n`, stored as its restricted-growth string: element
/// `i` lies in block `rgs[i]` and blocks are numbered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPartition {
    rgs: Vec<usize>,
    blocks: usize,
}

impl VertexPartition {
    pub fn singletons(n: usize) -> Self {
        VertexPartition { rgs: (0..n).collect(), blocks: n }
    }

    pub fn single_block(n: usize) -> Self {
        VertexPartition { rgs: vec![0; n], blocks: usize::from(n > 0) }
    }

    /// Normalizes any labeling of `0..n` into block form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let rgs: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        VertexPartition { blocks: remap.len(), rgs }
    }

    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut lab = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::domain("partition blocks must be nonempty"));
            }
            for &v in block {
                if v >= n || lab[v] != usize::MAX {
                    return Err(Error::domain(format!("vertex {v} is out of range or repeated")));
                }
                lab[v] = b;
            }
        }
        if lab.contains(&usize::MAX) {
            return Err(Error::domain("blocks do not cover the vertex set"));
        }
        Ok(Self::from_labels(&lab))
    }

    pub fn num_elements(&self) -> usize {
        self.rgs.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self) -> &[usize] {
        &self.rgs
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (v, &b) in self.rgs.iter().enumerate() {
            out[b].push(v);
        }
        out
    }

    /// `σ ∘ π`: first merge by `self`, then merge blocks by `sigma`.
    pub fn compose(&self, sigma: &VertexPartition) -> Result<Self> {
        if sigma.num_elements() != self.blocks {
            return Err(Error::domain("outer partition must act on the blocks"));
        }
        Ok(Self::from_labels(&self.rgs.iter().map(|&b| sigma.rgs[b]).collect::<Vec<_>>()))
    }
}

impl Serialize for VertexPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let n = blocks.iter().map(Vec::len).sum();
        VertexPartition::from_blocks(n, blocks).map_err(serde::de::Error::custom)
    }
}

pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("nonempty"));
        for v in &row {
            let s = next.last().expect("nonempty").saturating_add(*v);
            next.push(s);
        }
        row = next;
    }
    row[0]
}

/// Visits every restricted-growth string of length `n` extending `prefix`,
/// in lexicographic order. The callback gets the string and its block count.
pub fn for_each_partition<F: FnMut(&[usize], usize)>(n: usize, prefix: &[usize], mut f: F) {
    if prefix.len() > n {
        return;
    }
    let mut a = vec![0usize; n];
    a[..prefix.len()].copy_from_slice(prefix);
    // max[i] = largest block index among a[..i]
    let mut maxb = vec![0usize; n + 1];
    let mut m = 0usize;
    for (i, &x) in prefix.iter().enumerate() {
        if i > 0 {
            m = m.max(x);
        }
        maxb[i + 1] = m;
    }
    if n == 0 {
        f(&a, 0);
        return;
    }
    fn rec<F: FnMut(&[usize], usize)>(i: usize, a: &mut Vec<usize>, maxb: &mut Vec<usize>, f: &mut F) {
        let n = a.len();
        if i == n {
            f(a, maxb[n] + 1);
            return;
        }
        let top = if i == 0 { 0 } else { maxb[i] + 1 };
        for b in 0..=top {
            a[i] = b;
            maxb[i + 1] = if i == 0 { 0 } else { maxb[i].max(b) };
            rec(i + 1, a, maxb, f);
        }
    }
    rec(prefix.len(), &mut a, &mut maxb, &mut f);
}

/// All partitions of `0..n` in lexicographic restricted-growth order.
pub fn set_partitions(n: usize) -> Vec<VertexPartition> {
    let mut out = Vec::new();
    for_each_partition(n, &[], |rgs, blocks| out.push(VertexPartition { rgs: rgs.to_vec(), blocks }));
    out
}

/// `∏_B (−1)^{|B|−1} (|B|−1)!`.
pub fn partition_mobius(pi: &VertexPartition) -> BigInt {
    let mut sizes = vec![0usize; pi.num_blocks()];
    for &b in pi.block_of() {
        sizes[b] += 1;
    }
    mobius_of_sizes(&sizes)
}

pub(crate) fn mobius_of_sizes(sizes: &[usize]) -> BigInt {
    let mut acc = BigInt::from(1);
    for &s in sizes {
        for i in 1..s {
            acc *= BigInt::from(i);
        }
        if s % 2 == 0 {
            acc = -acc;
        }
    }
    acc
}

/// Values that can be combined with integer coefficients.
pub trait Combine: Clone {
    fn zero() -> Self;
    fn add_scaled(&mut self, other: &Self, c: &BigInt);
}

impl Combine for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add_scaled(&mut self, other: &Self, c: &BigInt) {
        *self += other * Q::from_integer(c.clone());
    }
}

impl Combine for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&mut self, other: &Self, c: &BigInt) {
        *self += other * num::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
    }
}

impl Combine for MomentPolynomial {
    fn zero() -> Self {
        MomentPolynomial::zero()
    }
    fn add_scaled(&mut self, other: &Self, c: &BigInt) {
        *self += &other.scale(&Q::from_integer(c.clone()));
    }
}

fn over_quotients<V, F>(t: &StarTestGraph, mut oracle: F, weight: impl Fn(&VertexPartition) -> BigInt) -> Result<V>
where
    V: Combine,
    F: FnMut(&StarTestGraph) -> Result<V>,
{
    let mut acc = V::zero();
    let mut err = None;
    for_each_partition(t.num_vertices(), &[], |rgs, blocks| {
        if err.is_some() {
            return;
        }
        let pi = VertexPartition { rgs: rgs.to_vec(), blocks };
        let w = weight(&pi);
        match t.quotient(&pi).and_then(|q| oracle(&q)) {
            Ok(v) => acc.add_scaled(&v, &w),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// `τ⁰[T] = Σ_π τ[T^π] µ(π)`.
pub fn injective_from_trace<V, F>(t: &StarTestGraph, trace: F) -> Result<V>
where
    V: Combine,
    F: FnMut(&StarTestGraph) -> Result<V>,
{
    over_quotients(t, trace, partition_mobius)
}

/// `τ[T] = Σ_π τ⁰[T^π]`.
pub fn trace_from_injective<V, F>(t: &StarTestGraph, injective: F) -> Result<V>
where
    V: Combine,
    F: FnMut(&StarTestGraph) -> Result<V>,
{
    over_quotients(t, injective, |_| BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers_match_enumeration() {
        let bells = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bells.iter().enumerate() {
            assert_eq!(bell_number(n), b);
            assert_eq!(set_partitions(n).len() as u128, b);
        }
    }

    #[test]
    fn lexicographic_and_distinct() {
        let ps = set_partitions(5);
        for w in ps.windows(2) {
            assert!(w[0].block_of() < w[1].block_of());
        }
        assert_eq!(ps[0], VertexPartition::single_block(5));
        assert_eq!(ps.last().unwrap(), &VertexPartition::singletons(5));
    }

    #[test]
    fn prefix_enumeration_splits_the_lattice() {
        let mut total = 0;
        for p in set_partitions(3) {
            for_each_partition(7, p.block_of(), |_, _| total += 1);
        }
        assert_eq!(total as u128, bell_number(7));
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(partition_mobius(&VertexPartition::singletons(4)), BigInt::from(1));
        let pair = VertexPartition::from_blocks(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert_eq!(partition_mobius(&pair), BigInt::from(-1));
        assert_eq!(partition_mobius(&VertexPartition::single_block(3)), BigInt::from(2));
        assert_eq!(partition_mobius(&VertexPartition::single_block(4)), BigInt::from(-6));
    }

    #[test]
    fn from_blocks_validates() {
        assert!(VertexPartition::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(VertexPartition::from_blocks(2, vec![vec![0, 1], vec![1]]).is_err());
        let p = VertexPartition::from_blocks(3, vec![vec![2], vec![0, 1]]).unwrap();
        assert_eq!(p.blocks(), vec![vec![0, 1], vec![2]]);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, "[[0,1],[2]]");
        let back: VertexPartition = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
