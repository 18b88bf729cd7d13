use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use rand::Rng as _;
use rand_distr::{Distribution, Geometric, Pareto, StandardNormal};
use serde::{Deserialize, Serialize};

use super::matrix::{DenseMatrix, SymMatrix};
use super::rng::{rng, Rng};
use crate::error::{Error, Result};
use crate::params::{HeavyParams, ParamSeq};
use crate::rational::{parse_rational, q, Q};

/// Centered weight law of the network ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightLaw {
    /// `±1` with equal probability.
    Rademacher,
    /// Standard normal.
    Gaussian,
    /// Uniform on `[-√3, √3]` (unit variance).
    Uniform,
}

impl WeightLaw {
    /// `∫ z^{2k} dµ(z)`.
    pub fn even_moment(self, k: u32) -> Q {
        match self {
            WeightLaw::Rademacher => Q::one(),
            WeightLaw::Gaussian => (1..=k).fold(Q::one(), |acc, i| acc * q(2 * i as i64 - 1)),
            WeightLaw::Uniform => Q::new(num::pow(num::BigInt::from(3), k as usize), num::BigInt::from(2 * k as i64 + 1)),
        }
    }

    fn sample(self, r: &mut Rng) -> f64 {
        match self {
            WeightLaw::Rademacher => {
                if r.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            WeightLaw::Gaussian => StandardNormal.sample(r),
            WeightLaw::Uniform => (r.gen::<f64>() * 2.0 - 1.0) * 3f64.sqrt(),
        }
    }
}

/// Entry sampler of a user-supplied ensemble: `(rng, N) -> entry`.
pub type EntrySampler = Arc<dyn Fn(&mut Rng, usize) -> f64 + Send + Sync>;

/// A user-supplied ensemble with its parameter table.
#[derive(Clone)]
pub struct CustomEnsemble {
    pub name: String,
    pub params: Vec<Q>,
    pub sampler: EntrySampler,
}

impl fmt::Debug for CustomEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomEnsemble").field("name", &self.name).field("params", &self.params).finish()
    }
}

impl PartialEq for CustomEnsemble {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    /// Centered adjacency matrix `A − (α/N)(J − I)` of `G(N, α/N)`.
    ErdosRenyi { alpha: f64 },
    /// Adjacency of `G(N, α/N)` with i.i.d. centered edge weights.
    Network { alpha: f64, weights: WeightLaw },
    /// Symmetric Pareto entries `x` (`P(|x| > t) = t^{-α}`, `t ≥ 1`),
    /// mapped to `x / (Bσ_N) · 1{|x| ≤ Bσ_N}` with `σ_N = N^{1/α}`.
    TruncatedLevy { alpha_stable: f64, cutoff: f64 },
    #[serde(skip)]
    Custom(CustomEnsemble),
}

/// Exact value of a float as written in decimal (`0.1` is `1/10`).
fn decimal(x: f64) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::domain(format!("non-finite value {x}")));
    }
    parse_rational(&x.to_string())
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            EnsembleSpec::ErdosRenyi { alpha } | EnsembleSpec::Network { alpha, .. } => positive("alpha", *alpha),
            EnsembleSpec::TruncatedLevy { alpha_stable, cutoff } => {
                if !(alpha_stable.is_finite() && *alpha_stable > 0.0 && *alpha_stable < 2.0) {
                    return Err(Error::domain(format!("stability index must lie in (0, 2), got {alpha_stable}")));
                }
                positive("cutoff", *cutoff)
            }
            EnsembleSpec::Custom(c) => {
                if c.params.is_empty() {
                    Err(Error::domain("custom ensemble needs a parameter table"))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            EnsembleSpec::ErdosRenyi { .. } => "erdos_renyi".into(),
            EnsembleSpec::Network { .. } => "network".into(),
            EnsembleSpec::TruncatedLevy { .. } => "truncated_levy".into(),
            EnsembleSpec::Custom(c) => c.name.clone(),
        }
    }

    /// One off-diagonal entry of the `N × N` ensemble.
    pub fn sample_entry(&self, n: usize, r: &mut Rng) -> Result<f64> {
        match self {
            EnsembleSpec::ErdosRenyi { alpha } => {
                let p = alpha / n as f64;
                Ok(if r.gen::<f64>() < p { 1.0 - p } else { -p })
            }
            EnsembleSpec::Network { alpha, weights } => {
                let p = alpha / n as f64;
                Ok(if r.gen::<f64>() < p { weights.sample(r) } else { 0.0 })
            }
            EnsembleSpec::TruncatedLevy { alpha_stable, cutoff } => {
                let pareto = Pareto::new(1.0, *alpha_stable).map_err(|e| Error::domain(e.to_string()))?;
                let scale = cutoff * (n as f64).powf(1.0 / alpha_stable);
                Ok(levy_entry(&pareto, scale, r))
            }
            EnsembleSpec::Custom(c) => Ok((c.sampler)(r, n)),
        }
    }
}

fn levy_entry(pareto: &Pareto<f64>, scale: f64, r: &mut Rng) -> f64 {
    let x: f64 = pareto.sample(r);
    let sign = if r.gen::<bool>() { 1.0 } else { -1.0 };
    if x <= scale {
        sign * x / scale
    } else {
        0.0
    }
}

/// Closed-form parameter sequence `a_1, ..., a_{k_max}`.
pub fn ensemble_sequence(spec: &EnsembleSpec, k_max: u32) -> Result<Vec<Q>> {
    spec.validate()?;
    let ks = 1..=k_max;
    match spec {
        EnsembleSpec::ErdosRenyi { alpha } => Ok(vec![decimal(*alpha)?; k_max as usize]),
        EnsembleSpec::Network { alpha, weights } => {
            let a = decimal(*alpha)?;
            Ok(ks.map(|k| &a * weights.even_moment(k)).collect())
        }
        EnsembleSpec::TruncatedLevy { alpha_stable, cutoff } => {
            let al = decimal(*alpha_stable)?;
            // B^α is exact when α is an integer.
            let b_pow = if al.is_integer() {
                num::pow(decimal(*cutoff)?, al.to_integer().try_into().expect("α < 2"))
            } else {
                decimal(cutoff.powf(*alpha_stable))?
            };
            Ok(ks.map(|k| &al / ((q(2 * k as i64) - &al) * &b_pow)).collect())
        }
        EnsembleSpec::Custom(c) => {
            if c.params.len() < k_max as usize {
                return Err(Error::domain(format!("custom ensemble lists only {} parameters", c.params.len())));
            }
            Ok(c.params[..k_max as usize].to_vec())
        }
    }
}

/// The ensemble's parameter for each of the given heavy letters.
pub fn ensemble_parameter(spec: &EnsembleSpec, indices: impl IntoIterator<Item = u32>, k_max: u32) -> Result<HeavyParams> {
    let seq = ensemble_sequence(spec, k_max)?;
    let mut p = HeavyParams::new();
    for j in indices {
        p.set(j, ParamSeq::Values(seq.clone()))?;
    }
    Ok(p)
}

/// One draw of an ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSample {
    pub n: usize,
    pub seed: u64,
    pub spec: EnsembleSpec,
    pub matrix: SymMatrix,
}

/// Upper-triangle pairs `i < j` hit by independent `p`-coins, in order.
fn bernoulli_pairs(n: usize, p: f64, r: &mut Rng) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if p <= 0.0 || n < 2 {
        return out;
    }
    let total = (n * (n - 1) / 2) as u64;
    let geo = (p < 1.0).then(|| Geometric::new(p).expect("0 < p < 1"));
    let (mut i, mut row_start, mut row_len) = (0usize, 0u64, (n - 1) as u64);
    let mut t = 0u64;
    loop {
        t += geo.as_ref().map_or(0, |g| g.sample(r));
        if t >= total {
            break;
        }
        while t >= row_start + row_len {
            row_start += row_len;
            i += 1;
            row_len -= 1;
        }
        out.push((i, i + 1 + (t - row_start) as usize));
        t += 1;
    }
    out
}

/// Deterministic in `(spec, n, seed)`.
pub fn sample_matrix(spec: &EnsembleSpec, n: usize, seed: u64) -> Result<MatrixSample> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::domain("N must be at least 2"));
    }
    let mut r = rng(seed);
    let matrix = match spec {
        EnsembleSpec::ErdosRenyi { alpha } | EnsembleSpec::Network { alpha, .. } => {
            let p = alpha / n as f64;
            if p > 1.0 {
                return Err(Error::domain(format!("alpha / N = {p} exceeds 1")));
            }
            let pairs = bernoulli_pairs(n, p, &mut r);
            match spec {
                EnsembleSpec::Network { weights, .. } => {
                    let entries: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, weights.sample(&mut r))).collect();
                    SymMatrix::sparse_from_upper(n, &entries, 0.0)
                }
                _ => {
                    let entries: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
                    SymMatrix::sparse_from_upper(n, &entries, p)
                }
            }
        }
        EnsembleSpec::TruncatedLevy { alpha_stable, cutoff } => {
            let pareto = Pareto::new(1.0, *alpha_stable).map_err(|e| Error::domain(e.to_string()))?;
            let scale = cutoff * (n as f64).powf(1.0 / alpha_stable);
            symmetric_dense(n, || levy_entry(&pareto, scale, &mut r))
        }
        EnsembleSpec::Custom(c) => symmetric_dense(n, || (c.sampler)(&mut r, n)),
    };
    Ok(MatrixSample { n, seed, spec: spec.clone(), matrix })
}

/// Fills `i ≤ j` in row order and mirrors.
fn symmetric_dense(n: usize, mut draw: impl FnMut() -> f64) -> SymMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = draw();
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    SymMatrix::Dense(DenseMatrix::from_rows(rows).expect("square"))
}

impl MatrixSample {
    pub fn is_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.matrix.get(i, i).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    #[test]
    fn closed_form_parameters() {
        assert_eq!(ensemble_sequence(&EnsembleSpec::ErdosRenyi { alpha: 2.0 }, 4).unwrap(), vec![q(2); 4]);
        assert_eq!(
            ensemble_sequence(&EnsembleSpec::TruncatedLevy { alpha_stable: 1.0, cutoff: 1.0 }, 3).unwrap(),
            vec![q(1), q_frac(1, 3), q_frac(1, 5)]
        );
        let net = EnsembleSpec::Network { alpha: 1.5, weights: WeightLaw::Rademacher };
        assert_eq!(ensemble_sequence(&net, 3).unwrap(), vec![q_frac(3, 2); 3]);
        let g = EnsembleSpec::Network { alpha: 1.0, weights: WeightLaw::Gaussian };
        assert_eq!(ensemble_sequence(&g, 3).unwrap(), vec![q(1), q(3), q(15)]);
        assert!(ensemble_sequence(&EnsembleSpec::ErdosRenyi { alpha: -1.0 }, 2).is_err());
    }

    #[test]
    fn erdos_renyi_values() {
        let s = sample_matrix(&EnsembleSpec::ErdosRenyi { alpha: 1.0 }, 4, 11).unwrap();
        assert!(s.matrix.is_symmetric());
        assert!(s.is_zero_diagonal());
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let v = s.matrix.get(i, j);
                    assert!(v == -0.25 || v == 0.75, "{v}");
                }
            }
        }
        assert!(sample_matrix(&EnsembleSpec::ErdosRenyi { alpha: 5.0 }, 4, 0).is_err());
    }

    #[test]
    fn deterministic() {
        for spec in [
            EnsembleSpec::ErdosRenyi { alpha: 2.0 },
            EnsembleSpec::Network { alpha: 2.0, weights: WeightLaw::Gaussian },
            EnsembleSpec::TruncatedLevy { alpha_stable: 1.2, cutoff: 2.0 },
        ] {
            let a = sample_matrix(&spec, 50, 3).unwrap();
            assert_eq!(a, sample_matrix(&spec, 50, 3).unwrap());
            assert_ne!(a.matrix, sample_matrix(&spec, 50, 4).unwrap().matrix);
            assert!(a.matrix.is_symmetric());
        }
    }

    #[test]
    fn pair_sampler_covers_everything_at_p_one() {
        let pairs = bernoulli_pairs(5, 1.0, &mut rng(0));
        assert_eq!(pairs.len(), 10);
        assert_eq!(pairs[0], (0, 1));
        assert_eq!(pairs[9], (3, 4));
    }

    #[test]
    fn json_round_trip() {
        let s = EnsembleSpec::Network { alpha: 1.0, weights: WeightLaw::Uniform };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"kind":"network","alpha":1.0,"weights":"uniform"}"#);
        assert_eq!(serde_json::from_str::<EnsembleSpec>(&j).unwrap(), s);
        let e: EnsembleSpec = serde_json::from_str(r#"{"kind": "erdos_renyi", "alpha": 1.0}"#).unwrap();
        assert_eq!(e, EnsembleSpec::ErdosRenyi { alpha: 1.0 });
    }
}
