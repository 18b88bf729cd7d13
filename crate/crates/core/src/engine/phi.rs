use super::cycles::{enumerate_cycles_with, EnumOptions};
use super::weights::{hw_weight, traffic_weight};
use super::ymodel::{YGraph, YModel};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{bell_number, family_components, for_each_partition, limit_injective_trace, set_partitions, Edge, StarTestGraph, UnionFind};
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::word::{InterleavedWord, Letter, YWord};

/// Default cap on the number of partitions summed by the partition oracle.
pub const DEFAULT_PARTITION_CAP: u64 = 1_000_000;

/// `Φ(P)` by summing `ω_HW · ω_TR` over `𝓛^(γ)`.
pub fn phi(p: &InterleavedWord, params: &HeavyParams, y: &YModel) -> Result<MomentPolynomial> {
    phi_with(p, params, y, EnumOptions::default())
}

pub fn phi_with(p: &InterleavedWord, params: &HeavyParams, y: &YModel, opts: EnumOptions) -> Result<MomentPolynomial> {
    if p.gamma.is_empty() {
        return y.phi_y(&p.y_only);
    }
    sum_over_cycles(&p.gamma, None, &p.slots, params, y, opts)
}

fn sum_over_cycles(
    gamma: &[u32],
    chain: Option<&[usize]>,
    slots: &[YWord],
    params: &HeavyParams,
    y: &YModel,
    opts: EnumOptions,
) -> Result<MomentPolynomial> {
    let cycles = enumerate_cycles_with(gamma, chain, opts)?;
    let terms = opts.exec.try_map(cycles, |c| {
        let w = hw_weight(&c, params)?;
        if w.is_zero() {
            return Ok(w);
        }
        Ok(&w * &traffic_weight(&c, slots, y)?)
    })?;
    Ok(terms.into_iter().sum())
}

/// `Φ^(K)(P_1, ..., P_K)` by summing over chains `𝓛^(γ)_𝐋`.
pub fn phi_k(words: &[InterleavedWord], params: &HeavyParams, y: &YModel) -> Result<MomentPolynomial> {
    phi_k_with(words, params, y, EnumOptions::default())
}

pub fn phi_k_with(words: &[InterleavedWord], params: &HeavyParams, y: &YModel, opts: EnumOptions) -> Result<MomentPolynomial> {
    let mut heavy: Vec<InterleavedWord> = Vec::new();
    let mut diag = YWord::default();
    for w in words.iter().filter(|w| !w.is_empty()) {
        if w.gamma.is_empty() {
            diag = diag.concat(&w.y_only);
        } else {
            heavy.push(w.clone());
        }
    }
    if !diag.is_empty() {
        match y {
            // Diagonal entries multiply into any other argument.
            YModel::Diagonal(_) => match heavy.first_mut() {
                Some(first) => {
                    let last = first.slots.last_mut().expect("heavy word");
                    *last = last.concat(&diag);
                }
                None => return y.phi_y(&diag),
            },
            YModel::None => return y.phi_y(&diag),
            YModel::Traffic(_) => {
                return Err(Error::Unsupported("pure y arguments in Hadamard moments need a diagonal model".into()))
            }
        }
    }
    if heavy.is_empty() {
        return Ok(MomentPolynomial::one());
    }
    let gamma: Vec<u32> = heavy.iter().flat_map(|w| w.gamma.iter().copied()).collect();
    let slots: Vec<YWord> = heavy.iter().flat_map(|w| w.slots.iter().cloned()).collect();
    let lens: Vec<usize> = heavy.iter().map(InterleavedWord::len).collect();
    sum_over_cycles(&gamma, Some(&lens), &slots, params, y, opts)
}

/// `Φ(P)` as a sum over partitions of the vertices of the cycle graph of `P`,
/// keeping quotients that are free products.
pub fn phi_bruteforce(p: &InterleavedWord, params: &HeavyParams, y: &YModel) -> Result<MomentPolynomial> {
    phi_bruteforce_with(p, params, y, DEFAULT_PARTITION_CAP, Execution::default())
}

pub fn phi_bruteforce_with(
    p: &InterleavedWord,
    params: &HeavyParams,
    y: &YModel,
    cap: u64,
    exec: Execution,
) -> Result<MomentPolynomial> {
    phi_k_bruteforce_with(std::slice::from_ref(p), params, y, cap, exec)
}

/// Partition oracle for `Φ^(K)`: the cycle graphs of the arguments share
/// their base vertex, and pure y arguments become loops there.
pub fn phi_k_bruteforce_with(
    args: &[InterleavedWord],
    params: &HeavyParams,
    y: &YModel,
    cap: u64,
    exec: Execution,
) -> Result<MomentPolynomial> {
    let args: Vec<&InterleavedWord> = args.iter().filter(|w| !w.is_empty()).collect();
    match args.as_slice() {
        [] => return Ok(MomentPolynomial::one()),
        [p] if p.is_empty() || p.len() == 0 => return y.phi_y(&p.y_only),
        _ => {}
    }
    // In an argument at offset o, vertex o+2n starts x-edge n and o+2n+1
    // ends it; slot n joins o+2n+1 to o+2n+2. Every argument starts at 0.
    // Identity slots are contracted up front: they vanish unless merged.
    let mut offsets = Vec::with_capacity(args.len());
    let mut total = 0;
    for p in &args {
        offsets.push(total);
        total += 2 * p.len();
    }
    let mut uf = UnionFind::new(total.max(1));
    for (p, &o) in args.iter().zip(&offsets) {
        let l = p.len();
        if l > 0 {
            uf.union(o, 0);
        }
        for (n, s) in p.slots.iter().enumerate().take(l) {
            if s.is_empty() {
                uf.union(o + 2 * n + 1, o + (2 * n + 2) % (2 * l));
            }
        }
    }
    let mut id = vec![usize::MAX; total.max(1)];
    let mut m = 0;
    for v in 0..total.max(1) {
        let r = uf.find(v);
        if id[r] == usize::MAX {
            id[r] = m;
            m += 1;
        }
        id[v] = id[r];
    }
    let bell = bell_number(m);
    if bell > cap as u128 {
        return Err(Error::resource(format!("Bell({m}) partitions"), cap));
    }
    let mut edges = Vec::new();
    let mut words = Vec::new();
    for (p, &o) in args.iter().zip(&offsets) {
        let l = p.len();
        if l == 0 {
            edges.push(Edge::new(id[0], id[0], Letter::Y(words.len() as u32)));
            words.push(p.y_only.clone());
            continue;
        }
        for n in 0..l {
            edges.push(Edge::new(id[o + 2 * n], id[o + 2 * n + 1], Letter::X(p.gamma[n])));
            if !p.slots[n].is_empty() {
                edges.push(Edge::new(id[o + 2 * n + 1], id[o + (2 * n + 2) % (2 * l)], Letter::Y(words.len() as u32)));
                words.push(p.slots[n].clone());
            }
        }
    }
    let base = StarTestGraph::new(m, edges)?;

    let prefixes = set_partitions(m.min(5));
    let parts = exec.try_map(prefixes, |prefix| {
        let mut acc = MomentPolynomial::zero();
        let mut err = None;
        for_each_partition(m, prefix.block_of(), |rgs, blocks| {
            if err.is_some() {
                return;
            }
            match score(&base, rgs, blocks, &words, params, y) {
                Ok(v) => acc += &v,
                Err(e) => err = Some(e),
            }
        });
        err.map_or(Ok(acc), Err)
    })?;
    Ok(parts.into_iter().sum())
}

fn family(l: Letter) -> u32 {
    match l {
        Letter::X(j) => j,
        Letter::Y(_) => 0,
    }
}

fn score(
    base: &StarTestGraph,
    rgs: &[usize],
    blocks: usize,
    words: &[YWord],
    params: &HeavyParams,
    y: &YModel,
) -> Result<MomentPolynomial> {
    let edges: Vec<Edge> = base.edges().iter().map(|e| Edge { src: rgs[e.src], dst: rgs[e.dst], ..*e }).collect();
    let q = StarTestGraph::new(blocks, edges)?;
    let comps = family_components(&q, &family);
    if !crate::graph::is_free_product_of_components(blocks, &comps) {
        return Ok(MomentPolynomial::zero());
    }
    let mut acc = MomentPolynomial::one();
    for c in &comps {
        let v = if c.family == 0 {
            let local = |v: usize| c.vertices.binary_search(&v).expect("component vertex");
            let g = YGraph {
                n: c.vertices.len(),
                edges: c
                    .edge_ids
                    .iter()
                    .map(|&i| {
                        let e = q.edges()[i];
                        (local(e.src), local(e.dst), words[e.label.index() as usize].clone())
                    })
                    .collect(),
            };
            y.tau_injective(&g)?
        } else {
            let (sub, _) = q.edge_subgraph(&c.edge_ids)?;
            limit_injective_trace(&sub, params)?
        };
        if v.is_zero() {
            return Ok(v);
        }
        acc = &acc * &v;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ymodel::DiagonalMoments;
    use crate::poly::Symbol;

    fn w(s: &str) -> InterleavedWord {
        InterleavedWord::parse(s).unwrap()
    }

    #[test]
    fn golden_pure_x() {
        let p = HeavyParams::symbolic([1, 2], 3).unwrap();
        let n = YModel::None;
        for (word, expect) in [
            ("x1", "0"),
            ("x1^2", "a[1,1]"),
            ("x1^4", "2*a[1,1]^2 + a[1,2]"),
            ("x1^6", "5*a[1,1]^3 + 6*a[1,1]*a[1,2] + a[1,3]"),
            ("x1^2 x2^2 x1^2 x2^2", "3*a[1,1]^2*a[2,1]^2 + a[1,1]^2*a[2,2] + a[1,2]*a[2,1]^2 + a[1,2]*a[2,2]"),
            ("x1 x2", "0"),
            ("1", "1"),
        ] {
            assert_eq!(phi(&w(word), &p, &n).unwrap().to_string(), expect, "tree {word}");
            assert_eq!(phi_bruteforce(&w(word), &p, &n).unwrap().to_string(), expect, "partition {word}");
        }
    }

    #[test]
    fn hadamard_examples() {
        let p = HeavyParams::symbolic([1], 2).unwrap();
        let n = YModel::None;
        assert_eq!(phi_k(&[w("x1^2"), w("x1^2")], &p, &n).unwrap().to_string(), "a[1,1]^2 + a[1,2]");
        assert!(phi_k(&[w("x1"), w("x1")], &p, &n).unwrap().is_zero());
        assert_eq!(phi_k(&[w("1"), w("1")], &p, &n).unwrap(), MomentPolynomial::one());
        assert_eq!(phi_k(&[w("x1^4")], &p, &n).unwrap(), phi(&w("x1^4"), &p, &n).unwrap());
        assert_eq!(phi_k(&[w("x1^2"), w("1"), w("x1^2")], &p, &n).unwrap(), phi_k(&[w("x1^2"), w("x1^2")], &p, &n).unwrap());
    }

    #[test]
    fn diagonal_worked_example() {
        let p = HeavyParams::symbolic([1], 2).unwrap();
        let y = YModel::Diagonal(DiagonalMoments::Symbolic);
        let m = |k: usize| MomentPolynomial::symbol(Symbol::M(YWord(vec![1; k])));
        let a = |k| MomentPolynomial::a(1, k);
        let expect = &(&(&(&a(1) * &a(1)) * &(&m(2) * &m(2))) + &(&(&a(1) * &a(1)) * &m(4))) + &(&a(2) * &m(4));
        let word = w("x1^2 y1^2 x1^2 y1^2");
        assert_eq!(phi(&word, &p, &y).unwrap(), expect);
        assert_eq!(phi_bruteforce(&word, &p, &y).unwrap(), expect);
        let xyxy = w("x1 y1 x1 y1");
        assert_eq!(phi(&xyxy, &p, &y).unwrap(), &a(1) * &(&m(1) * &m(1)));
    }

    #[test]
    fn partition_cap() {
        let p = HeavyParams::symbolic([1], 8).unwrap();
        let r = phi_bruteforce_with(&w("x1^16"), &p, &YModel::None, 1000, Execution::Sequential);
        assert!(matches!(r, Err(Error::Resource { .. })));
    }

    #[test]
    fn hadamard_partition_matches_tree() {
        let p = HeavyParams::symbolic([1, 2], 4).unwrap();
        let d = YModel::Diagonal(DiagonalMoments::Symbolic);
        for (args, y) in [
            (vec!["x1^2", "x1^2"], &YModel::None),
            (vec!["x1^2", "x2^2"], &YModel::None),
            (vec!["x1 x2^2 x1", "x2^2"], &YModel::None),
            (vec!["x2^2 x1^2", "x2^2"], &YModel::None),
            (vec!["x1^2", "x1^2", "x1^2"], &YModel::None),
            (vec!["x1 y1 x1", "y1^2"], &d),
            (vec!["x1^2 y1", "x1^2"], &d),
            (vec!["y1", "y1^2"], &d),
        ] {
            let ws: Vec<InterleavedWord> = args.iter().map(|a| w(a)).collect();
            let tree = phi_k(&ws, &p, y).unwrap();
            let part = phi_k_bruteforce_with(&ws, &p, y, DEFAULT_PARTITION_CAP, Execution::Sequential).unwrap();
            assert_eq!(tree, part, "{args:?}");
        }
    }
}
