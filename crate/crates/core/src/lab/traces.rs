use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::ensemble::{sample_matrix, EnsembleSpec};
use super::matrix::SymMatrix;
use super::rng::letter_seed;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::word::{Letter, Word};

/// Matrices bound to letters for one replicate.
pub type Bindings = BTreeMap<Letter, SymMatrix>;

fn lookup<'a>(b: &'a Bindings, l: Letter) -> Result<&'a SymMatrix> {
    b.get(&l).ok_or_else(|| Error::domain(format!("no matrix bound to {l}")))
}

fn common_dim(b: &Bindings) -> Result<usize> {
    let mut dims = b.values().map(SymMatrix::n);
    let n = dims.next().ok_or_else(|| Error::domain("no matrices bound"))?;
    if dims.any(|m| m != n) {
        return Err(Error::Dimension("bound matrices differ in size".into()));
    }
    Ok(n)
}

/// Diagonal of the matrix product `M_1 ⋯ M_L` spelled by `w`.
///
/// Entry `i` is `⟨M_h ⋯ M_1 e_i, M_{h+1} ⋯ M_L e_i⟩` with `h = L / 2`, which
/// uses symmetry of every factor.
pub fn word_diagonal(b: &Bindings, w: &Word) -> Result<Vec<f64>> {
    let n = common_dim(b)?;
    let ms: Vec<&SymMatrix> = w.0.iter().map(|&l| lookup(b, l)).collect::<Result<_>>()?;
    let l = ms.len();
    if l == 0 {
        return Ok(vec![1.0; n]);
    }
    if l == 1 {
        return Ok((0..n).map(|i| ms[0].get(i, i)).collect());
    }
    let h = l / 2;
    let mut out = vec![0.0; n];
    let (mut u, mut v, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for (i, o) in out.iter_mut().enumerate() {
        ms[0].column(i, &mut u);
        for m in &ms[1..h] {
            m.matvec(&u, &mut tmp);
            std::mem::swap(&mut u, &mut tmp);
        }
        ms[l - 1].column(i, &mut v);
        for m in ms[h..l - 1].iter().rev() {
            m.matvec(&v, &mut tmp);
            std::mem::swap(&mut v, &mut tmp);
        }
        *o = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    }
    Ok(out)
}

/// `(1/N) Tr[P_1 ∘ ⋯ ∘ P_K]`; a single word gives the normalized trace.
pub fn hadamard_trace(b: &Bindings, words: &[Word]) -> Result<f64> {
    let n = common_dim(b)?;
    let mut acc = vec![1.0; n];
    for w in words {
        for (a, d) in acc.iter_mut().zip(word_diagonal(b, w)?) {
            *a *= d;
        }
    }
    Ok(neumaier(acc.iter().copied()) / n as f64)
}

pub fn normalized_trace(b: &Bindings, w: &Word) -> Result<f64> {
    hadamard_trace(b, std::slice::from_ref(w))
}

/// Compensated sum.
pub fn neumaier(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Sample mean and standard error over replicates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub replicates: usize,
}

impl Estimate {
    pub fn from_values(values: &[f64]) -> Estimate {
        let r = values.len();
        let mean = neumaier(values.iter().copied()) / r as f64;
        let stderr = if r < 2 {
            f64::NAN
        } else {
            let var = neumaier(values.iter().map(|v| (v - mean) * (v - mean))) / (r - 1) as f64;
            (var / r as f64).sqrt()
        };
        Estimate { mean, stderr, replicates: r }
    }
}

/// Estimate of `Φ^(K)(words)` from replicate bindings.
pub fn empirical_phi(replicates: &[Bindings], words: &[Word], exec: Execution) -> Result<Estimate> {
    if replicates.is_empty() {
        return Err(Error::domain("no replicates"));
    }
    let values = exec.try_map(replicates.iter().collect(), |b| hadamard_trace(b, words))?;
    Ok(Estimate::from_values(&values))
}

/// A Monte Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub spec: EnsembleSpec,
    pub n: usize,
    pub replicates: usize,
    pub base_seed: u64,
    /// Diagonals of fixed diagonal matrices bound to `y_j`.
    pub diagonal_y: BTreeMap<u32, Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationResult {
    pub mean: f64,
    pub stderr: f64,
    pub replicates: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    /// Per-replicate values, in replicate order.
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// Bindings of replicate `r`: an independent draw for every heavy letter.
pub fn replicate_bindings(cfg: &SimulationConfig, heavy: &BTreeSet<u32>, r: u64) -> Result<Bindings> {
    let mut b = Bindings::new();
    for &j in heavy {
        b.insert(Letter::X(j), sample_matrix(&cfg.spec, cfg.n, letter_seed(cfg.base_seed, r, j))?.matrix);
    }
    for (&j, d) in &cfg.diagonal_y {
        if d.len() != cfg.n {
            return Err(Error::Dimension(format!("diagonal of y{j} has length {}, expected {}", d.len(), cfg.n)));
        }
        b.insert(Letter::Y(j), SymMatrix::Diagonal(d.clone()));
    }
    Ok(b)
}

/// Samples replicates one at a time (memory stays at one draw per worker)
/// and estimates `Φ^(K)(words)`.
pub fn simulate(cfg: &SimulationConfig, words: &[Word], exec: Execution) -> Result<SimulationResult> {
    if cfg.replicates == 0 {
        return Err(Error::domain("at least one replicate is needed"));
    }
    let heavy: BTreeSet<u32> = words.iter().flat_map(|w| w.0.iter()).filter(|l| l.is_x()).map(|l| l.index()).collect();
    let values = exec.try_map((0..cfg.replicates as u64).collect(), |r| {
        let b = replicate_bindings(cfg, &heavy, r)?;
        if b.is_empty() {
            return Ok(1.0);
        }
        hadamard_trace(&b, words)
    })?;
    let e = Estimate::from_values(&values);
    Ok(SimulationResult { mean: e.mean, stderr: e.stderr, replicates: e.replicates, n: cfg.n, seed: cfg.base_seed, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::matrix::DenseMatrix;
    use crate::word::parse_word;

    fn dense(rows: Vec<Vec<f64>>) -> SymMatrix {
        SymMatrix::Dense(DenseMatrix::from_rows(rows).unwrap())
    }

    fn naive_trace(ms: &[&DenseMatrix<f64>]) -> f64 {
        let n = ms[0].n();
        let mut p = DenseMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 });
        for m in ms {
            p = DenseMatrix::from_fn(n, |i, j| (0..n).map(|k| p.get(i, k) * m.get(k, j)).sum());
        }
        (0..n).map(|i| p.get(i, i)).sum::<f64>() / n as f64
    }

    #[test]
    fn word_traces_match_naive_products() {
        let a = dense(vec![vec![1.0, 2.0, 0.0], vec![2.0, -1.0, 3.0], vec![0.0, 3.0, 0.5]]);
        let s = SymMatrix::sparse_from_upper(3, &[(0, 2, 1.0)], 0.5);
        let y = SymMatrix::Diagonal(vec![2.0, 0.0, -1.0]);
        let b: Bindings = [(Letter::X(1), a.clone()), (Letter::X(2), s.clone()), (Letter::Y(1), y.clone())].into();
        let (da, ds, dy) = (a.to_dense(), s.to_dense(), y.to_dense());
        for (w, ms) in [
            ("x1", vec![&da]),
            ("x1^2", vec![&da, &da]),
            ("x1 x2 y1", vec![&da, &ds, &dy]),
            ("x1^2 y1 x2 x1 x2", vec![&da, &da, &dy, &ds, &da, &ds]),
        ] {
            let got = normalized_trace(&b, &parse_word(w).unwrap()).unwrap();
            assert!((got - naive_trace(&ms)).abs() < 1e-9, "{w}");
        }
        assert_eq!(normalized_trace(&b, &Word::identity()).unwrap(), 1.0);
    }

    #[test]
    fn hadamard_of_squares() {
        let a = dense(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let b: Bindings = [(Letter::X(1), a)].into();
        let w = parse_word("x1^2").unwrap();
        assert_eq!(hadamard_trace(&b, &[w.clone(), w]).unwrap(), 1.0);
    }

    #[test]
    fn simulation_is_reproducible() {
        let cfg = SimulationConfig {
            spec: EnsembleSpec::ErdosRenyi { alpha: 1.0 },
            n: 200,
            replicates: 6,
            base_seed: 5,
            diagonal_y: BTreeMap::new(),
        };
        let w = [parse_word("x1^2").unwrap()];
        let a = simulate(&cfg, &w, Execution::Sequential).unwrap();
        let b = simulate(&cfg, &w, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!((a.mean - 1.0).abs() < 0.3);
    }
}
