//! Formal power series `G(K) = Σ_m c_K[m] λ^{-(K+m)}` of a single heavy matrix.

use serde::Serialize;
use serde_json::{json, Value};

use super::solver::SdSolver;
use crate::engine::YModel;
use crate::error::{Error, Result};
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::rational::{binomial, Q};
use crate::word::{Letter, Word};

/// Guard on `K_max + order`.
pub const MAX_SERIES_SIZE: usize = 200;

/// `c_K[m]` for `K = 0..=k_max`, `m = 0..=order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTable {
    pub matrix: u32,
    pub order: usize,
    coeffs: Vec<Vec<MomentPolynomial>>,
}

impl SeriesTable {
    pub fn k_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize, m: usize) -> &MomentPolynomial {
        &self.coeffs[k][m]
    }

    pub fn row(&self, k: usize) -> &[MomentPolynomial] {
        &self.coeffs[k]
    }

    pub fn to_json(&self, k: usize) -> Value {
        let coefficients: Vec<Value> =
            self.coeffs[k].iter().enumerate().map(|(m, v)| json!({"m": m, "value": v.to_json()})).collect();
        json!({"K": k, "coefficients": coefficients})
    }
}

/// Iterates the series recursion for letter `x_j`, by increasing `K + m`.
///
/// `G(0)` is the constant 1 and the compositions defining `G(K)` allow
/// empty parts. Rows up to `k_max + order / 2` are filled internally.
pub fn series_g(params: &HeavyParams, j: u32, k_max: usize, order: usize) -> Result<SeriesTable> {
    if k_max + order > MAX_SERIES_SIZE {
        return Err(Error::resource("series K_max + order", MAX_SERIES_SIZE as u64));
    }
    let rows = k_max + order / 2 + 1;
    let mut c: Vec<Vec<Option<MomentPolynomial>>> = vec![vec![None; order + 1]; rows];
    for m in 0..=order {
        c[0][m] = Some(if m == 0 { MomentPolynomial::one() } else { MomentPolynomial::zero() });
    }
    let a: Vec<MomentPolynomial> =
        (1..=order / 2).map(|k| params.a(j, k as u32)).collect::<Result<_>>()?;
    for s in 1..rows + order {
        for kk in 1..rows {
            if kk > s || s - kk > order {
                continue;
            }
            let m = s - kk;
            // Entries beyond this budget never feed the requested rows.
            if 2 * kk + m > 2 * k_max + order {
                continue;
            }
            let get = |c: &Vec<Vec<Option<MomentPolynomial>>>, k: usize, m: usize| -> MomentPolynomial {
                c[k][m].clone().expect("filled by lower total degree")
            };
            let mut v = get(&c, kk - 1, m);
            for k in 1..=m / 2 {
                let mut conv = MomentPolynomial::zero();
                for p in 0..=m - 2 * k {
                    let x = get(&c, k, p);
                    if x.is_zero() {
                        continue;
                    }
                    conv += &(&x * &get(&c, k + kk - 1, m - 2 * k - p));
                }
                if conv.is_zero() {
                    continue;
                }
                let b = Q::from_integer(binomial((kk + k - 2) as u64, (kk - 1) as u64));
                v += &(&a[k - 1] * &conv).scale(&b);
            }
            c[kk][m] = Some(v);
        }
    }
    let coeffs = c.into_iter().take(k_max + 1).map(|r| r.into_iter().map(|v| v.expect("within budget")).collect()).collect();
    Ok(SeriesTable { matrix: j, order, coeffs })
}

/// Outcome of comparing the series with the recursion on explicit tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub degree: usize,
    pub k_max: usize,
    pub checked: usize,
    pub mismatch: Option<SeriesMismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesMismatch {
    pub k: usize,
    pub m: usize,
    pub series: MomentPolynomial,
    pub direct: MomentPolynomial,
}

impl SeriesReport {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn compositions(m: usize, parts: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if cur.len() + 1 == parts {
            cur.push(left);
            let r = f(cur);
            cur.pop();
            return r;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, parts, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    rec(m, parts, &mut Vec::new(), f)
}

/// Checks `c_K[m] = Σ_{n_1+…+n_K=m} Φ^(K)(x^{n_1}, …, x^{n_K})` for
/// `K ≤ k_max`, `m ≤ degree`.
pub fn series_vs_sd_report(params: &HeavyParams, j: u32, degree: usize, k_max: usize) -> Result<SeriesReport> {
    let table = series_g(params, j, k_max, degree)?;
    let solver = SdSolver::new(params.clone(), YModel::None)?;
    let x = Letter::X(j);
    let mut checked = 0;
    for k in 1..=k_max {
        for m in 0..=degree {
            let mut direct = MomentPolynomial::zero();
            compositions(m, k, &mut |ns| {
                let words: Vec<Word> = ns.iter().map(|&n| Word::power(x, n)).collect();
                direct += &solver.phi(&words)?;
                Ok(())
            })?;
            checked += 1;
            if &direct != table.coeff(k, m) {
                let mismatch = SeriesMismatch { k, m, series: table.coeff(k, m).clone(), direct };
                return Ok(SeriesReport { degree, k_max, checked, mismatch: Some(mismatch) });
            }
        }
    }
    Ok(SeriesReport { degree, k_max, checked, mismatch: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn first_coefficients() {
        let p = HeavyParams::symbolic([1], 3).unwrap();
        let t = series_g(&p, 1, 2, 6).unwrap();
        assert_eq!(t.coeff(0, 0), &MomentPolynomial::one());
        assert_eq!(t.coeff(1, 0), &MomentPolynomial::one());
        assert!(t.coeff(1, 1).is_zero());
        assert_eq!(t.coeff(1, 2).to_string(), "a[1,1]");
        assert_eq!(t.coeff(1, 4).to_string(), "2*a[1,1]^2 + a[1,2]");
        assert_eq!(t.coeff(1, 6).to_string(), "5*a[1,1]^3 + 6*a[1,1]*a[1,2] + a[1,3]");
        assert_eq!(t.coeff(2, 2).to_string(), "2*a[1,1]");
        assert_eq!(t.coeff(2, 0), &MomentPolynomial::one());
    }

    #[test]
    fn catalan() {
        let p = HeavyParams::trivial([1], q(1), 6).unwrap();
        let t = series_g(&p, 1, 1, 12).unwrap();
        let even: Vec<String> = (0..=6).map(|k| t.coeff(1, 2 * k).to_string()).collect();
        assert_eq!(even, ["1", "1", "2", "5", "14", "42", "132"]);
    }

    #[test]
    fn agrees_with_recursion() {
        let p = HeavyParams::symbolic([1], 4).unwrap();
        let r = series_vs_sd_report(&p, 1, 8, 3).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.checked, 27);
        let r0 = series_vs_sd_report(&p, 1, 0, 1).unwrap();
        assert!(r0.ok());
    }

    #[test]
    fn json_shape() {
        let p = HeavyParams::symbolic([1], 1).unwrap();
        let v = series_g(&p, 1, 1, 2).unwrap().to_json(1);
        assert_eq!(v["K"], 1);
        assert_eq!(v["coefficients"][2]["m"], 2);
    }
}
