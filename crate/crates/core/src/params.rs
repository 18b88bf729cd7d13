use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{MomentPolynomial, Symbol};
use crate::rational::Q;
use crate::word::{Letter, Word};

/// Parameter sequence of a single matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamSeq {
    /// `a[j,1..=k_max]` kept as symbols.
    Symbolic { k_max: u32 },
    /// Exact values `a_1, a_2, ...`; the length is the truncation order.
    Values(Vec<Q>),
}

/// Truncated parameters `(a_{j,k})` of the heavy Wigner matrices `x_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeavyParams {
    entries: BTreeMap<u32, ParamSeq>,
}

impl HeavyParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbolic(indices: impl IntoIterator<Item = u32>, k_max: u32) -> Result<Self> {
        let mut p = Self::new();
        for j in indices {
            p.set(j, ParamSeq::Symbolic { k_max })?;
        }
        Ok(p)
    }

    /// Symbolic parameters covering every heavy letter of `words`, truncated
    /// just high enough for them.
    pub fn symbolic_for(words: &[Word]) -> Self {
        let mut need: BTreeMap<u32, usize> = BTreeMap::new();
        for w in words {
            for l in &w.0 {
                if let Letter::X(j) = l {
                    *need.entry(*j).or_default() += 1;
                }
            }
        }
        let mut p = Self::new();
        for (j, n) in need {
            let k_max = ((n / 2).max(1)) as u32;
            p.entries.insert(j, ParamSeq::Symbolic { k_max });
        }
        p
    }

    pub fn numeric(indices: impl IntoIterator<Item = u32>, values: Vec<Q>) -> Result<Self> {
        let mut p = Self::new();
        for j in indices {
            p.set(j, ParamSeq::Values(values.clone()))?;
        }
        Ok(p)
    }

    /// `(a, 0, 0, ...)`: the classical Wigner case.
    pub fn trivial(indices: impl IntoIterator<Item = u32>, a: Q, k_max: u32) -> Result<Self> {
        let mut v = vec![Q::zero(); k_max.max(1) as usize];
        v[0] = a;
        Self::numeric(indices, v)
    }

    pub fn with(mut self, j: u32, seq: ParamSeq) -> Result<Self> {
        self.set(j, seq)?;
        Ok(self)
    }

    pub fn set(&mut self, j: u32, seq: ParamSeq) -> Result<()> {
        match &seq {
            ParamSeq::Symbolic { k_max } if *k_max == 0 => return Err(Error::domain("k_max must be at least 1")),
            ParamSeq::Values(v) if v.is_empty() => return Err(Error::domain("empty parameter sequence")),
            ParamSeq::Values(v) if v[0].is_negative() => {
                return Err(Error::domain(format!("a[{j},1] must be nonnegative")))
            }
            _ => {}
        }
        self.entries.insert(j, seq);
        Ok(())
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn seq(&self, j: u32) -> Option<&ParamSeq> {
        self.entries.get(&j)
    }

    pub fn k_max(&self, j: u32) -> Option<u32> {
        self.entries.get(&j).map(|s| match s {
            ParamSeq::Symbolic { k_max } => *k_max,
            ParamSeq::Values(v) => v.len() as u32,
        })
    }

    pub fn is_symbolic(&self) -> bool {
        self.entries.values().any(|s| matches!(s, ParamSeq::Symbolic { .. }))
    }

    /// `a_{j,k}` as a polynomial (a symbol or a constant).
    pub fn a(&self, j: u32, k: u32) -> Result<MomentPolynomial> {
        let seq = self.entries.get(&j).ok_or_else(|| Error::domain(format!("no parameters for x{j}")))?;
        if k == 0 {
            return Err(Error::domain("parameter index k starts at 1"));
        }
        match seq {
            ParamSeq::Symbolic { k_max } => {
                if k > *k_max {
                    return Err(Error::Truncation { matrix: j, needed_k: k, k_max: *k_max });
                }
                Ok(MomentPolynomial::a(j, k))
            }
            ParamSeq::Values(v) => v
                .get(k as usize - 1)
                .map(|c| MomentPolynomial::constant(c.clone()))
                .ok_or(Error::Truncation { matrix: j, needed_k: k, k_max: v.len() as u32 }),
        }
    }

    /// Numeric value of `a[j,k]` when available.
    pub fn value(&self, j: u32, k: u32) -> Option<Q> {
        match self.entries.get(&j)? {
            ParamSeq::Values(v) => v.get((k as usize).checked_sub(1)?).cloned(),
            ParamSeq::Symbolic { .. } => None,
        }
    }

    /// Evaluates a symbolic polynomial at these (numeric) parameters.
    pub fn substitute(&self, p: &MomentPolynomial) -> MomentPolynomial {
        p.substitute(&|s| match s {
            Symbol::A { matrix, k } => self.value(*matrix, *k).map(MomentPolynomial::constant),
            _ => None,
        })
    }
}
