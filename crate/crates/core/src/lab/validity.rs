//! Positivity test for parameter sequences.
//!
//! `(a_k)` can only be a parameter if the even-indexed form
//! `Σ_{j,k} a_{(j+k)/2+1} y_j y_k` (terms with `j + k` odd dropped) is
//! nonnegative. The form splits into the Hankel blocks `[a_{i+j+1}]` and
//! `[a_{i+j+2}]`; each must be positive semidefinite.

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Q;

/// Largest `m` accepted by [`validate_parameter`].
pub const MAX_VALIDATION_ORDER: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minor {
    /// 1 for `[a_{i+j+1}]`, 2 for `[a_{i+j+2}]`.
    pub block: u8,
    /// Row and column indices (0-based) of the principal submatrix.
    pub indices: Vec<usize>,
    #[serde(serialize_with = "crate::rational::serialize_q_rows")]
    pub matrix: Vec<Vec<Q>>,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub det: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterValidity {
    pub valid: bool,
    /// Block sizes actually tested (limited by the sequence length).
    pub sizes: [usize; 2],
    /// First negative principal minor, by size, then block, then indices.
    pub witness: Option<Minor>,
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut d = Q::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let sub = &f * &a[c][k];
                a[r][k] -= sub;
            }
        }
    }
    d
}

/// Checks the blocks of order `m` (truncated to what `a` determines):
/// every principal minor must be nonnegative.
pub fn validate_parameter(a: &[Q], m: usize) -> Result<ParameterValidity> {
    if m > MAX_VALIDATION_ORDER {
        return Err(Error::resource("validation order", MAX_VALIDATION_ORDER as u64));
    }
    if a.is_empty() {
        return Err(Error::domain("empty parameter sequence"));
    }
    // Block b (offset b) of size s needs a_{2s - 2 + b}.
    let size = |off: usize| (1..=m).rev().find(|&s| 2 * s - 2 + off <= a.len()).unwrap_or(0);
    let sizes = [size(1), size(2)];
    let blocks: Vec<Vec<Vec<Q>>> = [1usize, 2]
        .iter()
        .zip(sizes)
        .map(|(&off, s)| (0..s).map(|i| (0..s).map(|j| a[i + j + off - 1].clone()).collect()).collect())
        .collect();
    for k in 1..=sizes[0].max(sizes[1]) {
        for (b, block) in blocks.iter().enumerate() {
            let s = block.len();
            if k > s {
                continue;
            }
            for mask in subsets_of_size(s, k) {
                let sub: Vec<Vec<Q>> = mask.iter().map(|&i| mask.iter().map(|&j| block[i][j].clone()).collect()).collect();
                let d = det(&sub);
                if d.is_negative() {
                    let witness = Minor { block: b as u8 + 1, indices: mask, matrix: sub, det: d };
                    return Ok(ParameterValidity { valid: false, sizes, witness: Some(witness) });
                }
            }
        }
    }
    Ok(ParameterValidity { valid: true, sizes, witness: None })
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    #[test]
    fn one_two_one_is_rejected() {
        let v = validate_parameter(&[q(1), q(2), q(1)], 2).unwrap();
        assert!(!v.valid);
        let w = v.witness.unwrap();
        assert_eq!(w.det, q(-3));
        assert_eq!(w.matrix, vec![vec![q(1), q(2)], vec![q(2), q(1)]]);
        assert_eq!(w.block, 1);
    }

    #[test]
    fn constant_sequences_are_accepted() {
        for a in [q(0), q_frac(1, 2), q(1), q(7)] {
            assert!(validate_parameter(&vec![a.clone(); 4], 2).unwrap().valid);
            assert!(validate_parameter(&vec![a.clone(); 9], 5).unwrap().valid);
        }
    }

    #[test]
    fn trivial_parameter() {
        assert!(validate_parameter(&[q(3), q(0), q(0), q(0)], 2).unwrap().valid);
        assert!(!validate_parameter(&[q(-1), q(0), q(0), q(0)], 2).unwrap().valid);
        // A positive a_3 after a_2 = 0 is impossible.
        assert!(!validate_parameter(&[q(1), q(0), q(1), q(1)], 2).unwrap().valid);
    }

    #[test]
    fn truncated_levy_is_valid() {
        let a: Vec<Q> = (1..=9).map(|k| q_frac(1, 2 * k - 1)).collect();
        assert!(validate_parameter(&a, 4).unwrap().valid);
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![q(0), q(1)], vec![q(1), q(0)]]), q(-1));
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(3, 0), vec![Vec::<usize>::new()]);
    }
}
