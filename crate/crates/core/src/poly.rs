//! Exact multivariate polynomials over the parameter symbols `a[j,k]` and
//! diagonal moment symbols `m[...]`, with rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Q};
use crate::word::YWord;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// `a[j,k]`, the k-th parameter of matrix `x_j`.
    A { matrix: u32, k: u32 },
    /// `m[w]`, the diagonal moment of a canonical y multiset.
    M(YWord),
}

impl Symbol {
    pub fn a(matrix: u32, k: u32) -> Self {
        Symbol::A { matrix, k }
    }

    pub fn parse(s: &str) -> Result<Symbol> {
        let bad = || Error::parse(0, format!("bad symbol {s:?}"));
        let t = s.trim();
        if let Some(body) = t.strip_prefix("a[").and_then(|r| r.strip_suffix(']')) {
            let (j, k) = body.split_once(',').ok_or_else(bad)?;
            return Ok(Symbol::a(j.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?));
        }
        if let Some(body) = t.strip_prefix("m[").and_then(|r| r.strip_suffix(']')) {
            let w = crate::word::parse_word(body)?;
            let mut ys = Vec::new();
            for l in w.0 {
                match l {
                    crate::word::Letter::Y(j) => ys.push(j),
                    _ => return Err(bad()),
                }
            }
            return Ok(Symbol::M(YWord(ys).canonical()));
        }
        Err(bad())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::A { matrix, k } => write!(f, "a[{matrix},{k}]"),
            Symbol::M(w) => write!(f, "m[{w}]"),
        }
    }
}

/// Power product of symbols; sorted by symbol, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn symbol(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut m: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (s, e) in powers {
            if e > 0 {
                *m.entry(s).or_default() += e;
            }
        }
        Monomial(m.into_iter().collect())
    }

    pub fn powers(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

// Graded order: higher total degree first, then symbols ascending with larger
// exponents first. Gives renderings such as `2*a[1,1]^2 + a[1,2]`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            for (x, y) in self.0.iter().zip(&other.0) {
                let c = x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1));
                if c != Ordering::Equal {
                    return c;
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{s}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical polynomial: no zero coefficients, monomials in graded order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MomentPolynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl MomentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(crate::rational::q(n))
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::symbol(s), Q::one());
        p
    }

    pub fn a(j: u32, k: u32) -> Self {
        Self::symbol(Symbol::a(j, k))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MomentPolynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes every symbol; missing symbols are an error.
    pub fn eval(&self, value: &dyn Fn(&Symbol) -> Option<Q>) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.powers() {
                let v = value(s).ok_or_else(|| Error::domain(format!("no value for symbol {s}")))?;
                t *= num::pow(v, *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes the symbols for which `value` returns `Some`.
    pub fn substitute(&self, value: &dyn Fn(&Symbol) -> Option<MomentPolynomial>) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (s, e) in m.powers() {
                let f = value(s).unwrap_or_else(|| Self::symbol(s.clone()));
                t = &t * &f.pow(*e);
            }
            acc += &t;
        }
        acc
    }

    /// Σ over `a[j,k]` factors of `2k · exponent`, per matrix index.
    pub fn x_weights(m: &Monomial) -> BTreeMap<u32, u32> {
        let mut w = BTreeMap::new();
        for (s, e) in m.powers() {
            if let Symbol::A { matrix, k } = s {
                *w.entry(*matrix).or_default() += 2 * k * e;
            }
        }
        w
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let pj: PolyJson = serde_json::from_value(v.clone()).map_err(|e| Error::parse(0, e.to_string()))?;
        pj.try_into()
    }
}

impl fmt::Display for MomentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&MomentPolynomial> for MomentPolynomial {
    fn add_assign(&mut self, rhs: &MomentPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &MomentPolynomial {
    type Output = MomentPolynomial;
    fn add(self, rhs: &MomentPolynomial) -> MomentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &MomentPolynomial {
    type Output = MomentPolynomial;
    fn neg(self) -> MomentPolynomial {
        MomentPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub for &MomentPolynomial {
    type Output = MomentPolynomial;
    fn sub(self, rhs: &MomentPolynomial) -> MomentPolynomial {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Mul for &MomentPolynomial {
    type Output = MomentPolynomial;
    fn mul(self, rhs: &MomentPolynomial) -> MomentPolynomial {
        let mut out = MomentPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl std::iter::Sum for MomentPolynomial {
    fn sum<I: Iterator<Item = MomentPolynomial>>(iter: I) -> Self {
        let mut acc = MomentPolynomial::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    monomial: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl From<&MomentPolynomial> for PolyJson {
    fn from(p: &MomentPolynomial) -> Self {
        PolyJson {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    coeff: format_rational(c),
                    monomial: m.powers().iter().map(|(s, e)| (s.to_string(), *e)).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MomentPolynomial {
    type Error = Error;
    fn try_from(pj: PolyJson) -> Result<Self> {
        let mut p = MomentPolynomial::zero();
        for t in pj.terms {
            let c = parse_rational(&t.coeff)?;
            let m = t
                .monomial
                .iter()
                .map(|(s, e)| Ok((Symbol::parse(s)?, *e)))
                .collect::<Result<Vec<_>>>()?;
            p.add_term(Monomial::from_powers(m), c);
        }
        Ok(p)
    }
}

impl Serialize for MomentPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MomentPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pj = PolyJson::deserialize(d)?;
        pj.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn a(j: u32, k: u32) -> MomentPolynomial {
        MomentPolynomial::a(j, k)
    }

    #[test]
    fn renders_in_graded_order() {
        let p = &(&a(1, 1) * &a(1, 1)).scale(&q(2)) + &a(1, 2);
        assert_eq!(p.to_string(), "2*a[1,1]^2 + a[1,2]");
        let six = &(&a(1, 1).pow(3).scale(&q(5)) + &(&a(1, 1) * &a(1, 2)).scale(&q(6))) + &a(1, 3);
        assert_eq!(six.to_string(), "5*a[1,1]^3 + 6*a[1,1]*a[1,2] + a[1,3]");
        assert_eq!(MomentPolynomial::zero().to_string(), "0");
        assert_eq!((&MomentPolynomial::one() - &a(1, 1)).to_string(), "-a[1,1] + 1");
    }

    #[test]
    fn ring_laws() {
        let x = &a(1, 1) + &MomentPolynomial::int(2);
        let y = &a(2, 1) - &a(1, 2);
        assert_eq!(&x * &y, &y * &x);
        assert!((&x - &x).is_zero());
        assert_eq!(&(&x * &y) + &(&x * &x), &x * &(&x + &y));
    }

    #[test]
    fn json_round_trip() {
        let p = &(&a(1, 1) * &a(1, 1)).scale(&q(2)) + &a(1, 2);
        let v = p.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"terms":[{"coeff":"2","monomial":{"a[1,1]":2}},{"coeff":"1","monomial":{"a[1,2]":1}}]}"#
        );
        assert_eq!(MomentPolynomial::from_json(&v).unwrap(), p);
        let m = MomentPolynomial::symbol(Symbol::M(YWord(vec![1, 1, 2])));
        assert_eq!(m.to_string(), "m[y1^2 y2]");
        assert_eq!(MomentPolynomial::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let x = &a(1, 1) + &a(1, 2).pow(2);
        let y = &a(1, 2) - &MomentPolynomial::int(3);
        let val = |s: &Symbol| match s {
            Symbol::A { k, .. } => Some(q(*k as i64 + 1)),
            _ => None,
        };
        let lhs = (&x * &y).eval(&val).unwrap();
        assert_eq!(lhs, x.eval(&val).unwrap() * y.eval(&val).unwrap());
    }
}
