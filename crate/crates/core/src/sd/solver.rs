use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num::BigInt;

use super::decomp::all_decompositions;
use super::key::{MomentKey, Normalized};
use crate::engine::YModel;
use crate::error::{Error, Result};
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::rational::Q;
use crate::word::{Word, YWord};

/// Memoized Schwinger–Dyson evaluation of `Φ^(K)`.
///
/// The memo sits behind a mutex that is never held across a recursive call,
/// so one solver can be shared between threads.
pub struct SdSolver {
    params: HeavyParams,
    y: YModel,
    memo: Mutex<HashMap<MomentKey, MomentPolynomial>>,
}

impl SdSolver {
    pub fn new(params: HeavyParams, y: YModel) -> Result<Self> {
        if matches!(y, YModel::Traffic(_)) {
            return Err(Error::Unsupported("the recursion needs diagonal y matrices".into()));
        }
        Ok(SdSolver { params, y, memo: Mutex::new(HashMap::new()) })
    }

    pub fn params(&self) -> &HeavyParams {
        &self.params
    }

    pub fn clear_memo(&self) {
        self.memo.lock().expect("memo lock").clear();
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    /// `Φ^(K)(words)`.
    pub fn phi(&self, words: &[Word]) -> Result<MomentPolynomial> {
        self.eval(MomentKey::normalize(words))
    }

    fn eval(&self, n: Normalized) -> Result<MomentPolynomial> {
        match n {
            Normalized::Zero => Ok(MomentPolynomial::zero()),
            Normalized::Diagonal(w) => self.phi_y(&w),
            Normalized::Key(k) => self.eval_key(&k),
        }
    }

    fn phi_y(&self, w: &YWord) -> Result<MomentPolynomial> {
        self.y.phi_y(w)
    }

    fn eval_key(&self, key: &MomentKey) -> Result<MomentPolynomial> {
        if let Some(v) = self.memo.lock().expect("memo lock").get(key) {
            return Ok(v.clone());
        }
        let v = self.expand(key)?;
        self.memo.lock().expect("memo lock").insert(key.clone(), v.clone());
        Ok(v)
    }

    fn expand(&self, key: &MomentKey) -> Result<MomentPolynomial> {
        let j = key.pivot();
        let words = key.words();
        // Group identical (L, R) pairs before recursing.
        let mut groups: BTreeMap<usize, BTreeMap<(Normalized, Normalized), u64>> = BTreeMap::new();
        for d in all_decompositions(&words, j)? {
            let l = MomentKey::normalize(&d.l);
            let r = MomentKey::normalize(&d.r);
            if l == Normalized::Zero || r == Normalized::Zero {
                continue;
            }
            *groups.entry(d.k).or_default().entry((l, r)).or_default() += 1;
        }
        let mut acc = MomentPolynomial::zero();
        for (k, terms) in groups {
            let mut inner = MomentPolynomial::zero();
            for ((l, r), count) in terms {
                let lv = self.eval(l)?;
                if lv.is_zero() {
                    continue;
                }
                let rv = self.eval(r)?;
                inner += &(&lv * &rv).scale(&Q::from_integer(BigInt::from(count)));
            }
            if !inner.is_zero() {
                acc += &(&self.params.a(j, k as u32)? * &inner);
            }
        }
        Ok(acc)
    }
}

/// One-shot `Φ^(K)` through the recursion.
pub fn sd_phi(words: &[Word], params: &HeavyParams, y: &YModel) -> Result<MomentPolynomial> {
    SdSolver::new(params.clone(), y.clone())?.phi(words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::DiagonalMoments;
    use crate::poly::Symbol;
    use crate::word::parse_word;

    fn ws(s: &[&str]) -> Vec<Word> {
        s.iter().map(|w| parse_word(w).unwrap()).collect()
    }

    #[test]
    fn golden() {
        let s = SdSolver::new(HeavyParams::symbolic([1, 2], 3).unwrap(), YModel::None).unwrap();
        for (w, want) in [
            (vec!["x1"], "0"),
            (vec!["x1^2"], "a[1,1]"),
            (vec!["x1^4"], "2*a[1,1]^2 + a[1,2]"),
            (vec!["x1^6"], "5*a[1,1]^3 + 6*a[1,1]*a[1,2] + a[1,3]"),
            (vec!["x1^2 x2^2 x1^2 x2^2"], "3*a[1,1]^2*a[2,1]^2 + a[1,1]^2*a[2,2] + a[1,2]*a[2,1]^2 + a[1,2]*a[2,2]"),
            (vec!["x2^2", "x2^2"], "a[2,1]^2 + a[2,2]"),
            (vec!["1", "1", "1"], "1"),
        ] {
            assert_eq!(s.phi(&ws(&w)).unwrap().to_string(), want, "{w:?}");
        }
    }

    #[test]
    fn hadamard_is_not_rotation_invariant() {
        let s = SdSolver::new(HeavyParams::symbolic([1, 2], 3).unwrap(), YModel::None).unwrap();
        let a = s.phi(&ws(&["x1 x2^2 x1", "x2^2"])).unwrap();
        let b = s.phi(&ws(&["x2^2 x1^2", "x2^2"])).unwrap();
        assert_eq!(a.to_string(), "a[1,1]*a[2,1]^2");
        assert_eq!(b.to_string(), "a[1,1]*a[2,1]^2 + a[1,1]*a[2,2]");
    }

    #[test]
    fn diagonal_example() {
        let y = YModel::Diagonal(DiagonalMoments::Symbolic);
        let v = sd_phi(&ws(&["x1^2 y1^2 x1^2 y1^2"]), &HeavyParams::symbolic([1], 2).unwrap(), &y).unwrap();
        let m = |k| MomentPolynomial::symbol(Symbol::M(YWord(vec![1; k])));
        let a = |k| MomentPolynomial::a(1, k);
        let want = &(&(&(&a(1) * &a(1)) * &(&m(2) * &m(2))) + &(&(&a(1) * &a(1)) * &m(4))) + &(&a(2) * &m(4));
        assert_eq!(v, want);
    }

    #[test]
    fn truncation_only_when_needed() {
        let p = HeavyParams::symbolic([1], 1).unwrap();
        assert!(matches!(sd_phi(&ws(&["x1^4"]), &p, &YModel::None), Err(Error::Truncation { needed_k: 2, .. })));
        assert!(sd_phi(&ws(&["x1 x2"]), &p, &YModel::None).unwrap().is_zero());
    }

    #[test]
    fn memo_is_transparent() {
        let s = SdSolver::new(HeavyParams::symbolic([1, 2], 4).unwrap(), YModel::None).unwrap();
        let w = ws(&["x1^2 x2 x1^2 x2 x1^2 x2^2"]);
        let a = s.phi(&w).unwrap();
        assert!(s.memo_len() > 0);
        s.clear_memo();
        assert_eq!(s.phi(&w).unwrap(), a);
    }
}
