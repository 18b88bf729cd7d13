//! Cross-engine consistency suite.

use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;
use serde::Serialize;

use crate::engine::{
    enumerate_cycles, hw_weight, phi_k_bruteforce_with, phi_k_with, unfold, unfold_fibers, ColoredCycleOnTree,
    DiagonalMoments, EnumOptions, YModel, DEFAULT_PARTITION_CAP,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lab::validate_parameter;
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::rational::{q, q_frac, Q};
use crate::sd::{series_vs_sd_report, SdSolver};
use crate::word::{InterleavedWord, Letter, Word};

/// Largest degree accepted by [`run_verify`].
pub const MAX_VERIFY_DEGREE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Tree,
    Partition,
    Sd,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Tree, Engine::Partition, Engine::Sd];
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Tree => "tree",
            Engine::Partition => "partition",
            Engine::Sd => "sd",
        })
    }
}

/// Evaluates `Φ^(K)(words)` with one engine.
pub fn evaluate(
    engine: Engine,
    words: &[Word],
    params: &HeavyParams,
    y: &YModel,
    solver: Option<&SdSolver>,
    exec: Execution,
) -> Result<MomentPolynomial> {
    let iws: Vec<InterleavedWord> = words.iter().map(InterleavedWord::from_word).collect();
    match engine {
        Engine::Tree => phi_k_with(&iws, params, y, EnumOptions { exec, ..Default::default() }),
        Engine::Partition => phi_k_bruteforce_with(&iws, params, y, DEFAULT_PARTITION_CAP, exec),
        Engine::Sd => match solver {
            Some(s) => s.phi(words),
            None => SdSolver::new(params.clone(), y.clone())?.phi(words),
        },
    }
}

/// All words over `alphabet` of length `1..=max_len`, by length then
/// lexicographically, whose y runs have length at most `max_y_run`.
pub fn words_up_to(alphabet: &[Letter], max_len: usize, max_y_run: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in alphabet {
                let mut v = w.clone();
                v.push(l);
                let run = v.iter().rev().take_while(|l| !l.is_x()).count();
                if run <= max_y_run {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned().map(Word));
        layer = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn pass(name: &str, checked: usize) -> Check {
        Check { name: name.into(), passed: true, checked, counterexample: None, detail: None }
    }

    fn fail(name: &str, checked: usize, detail: String) -> Check {
        Check { name: name.into(), passed: false, checked, counterexample: None, detail: Some(detail) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    /// The first failing word, if any check has one.
    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.checks.iter().find_map(|c| c.counterexample.as_ref())
    }
}

/// Compares the three engines word by word and stops at the first
/// disagreement. `tree_params` replaces the parameters of the tree engine
/// only (used as a negative control).
pub fn compare_engines(
    name: &str,
    words: &[Word],
    params: &HeavyParams,
    tree_params: Option<&HeavyParams>,
    y: &YModel,
    exec: Execution,
) -> Result<Check> {
    let solver = SdSolver::new(params.clone(), y.clone())?;
    for (i, w) in words.iter().enumerate() {
        let one = std::slice::from_ref(w);
        let tree = evaluate(Engine::Tree, one, tree_params.unwrap_or(params), y, None, exec)?;
        let part = evaluate(Engine::Partition, one, params, y, None, exec)?;
        let sd = evaluate(Engine::Sd, one, params, y, Some(&solver), exec)?;
        if tree != part || tree != sd {
            let values = [("tree", &tree), ("partition", &part), ("sd", &sd)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            return Ok(Check {
                name: name.into(),
                passed: false,
                checked: i + 1,
                counterexample: Some(Counterexample { word: w.to_string(), values }),
                detail: None,
            });
        }
    }
    Ok(Check::pass(name, words.len()))
}

fn catalan(k: u64) -> BigInt {
    crate::rational::binomial(2 * k, k) / BigInt::from(k + 1)
}

fn check_catalan(degree: usize, exec: Execution) -> Result<Check> {
    let name = "catalan";
    let a = q(2);
    let p = HeavyParams::trivial([1], a.clone(), (degree / 2).max(1) as u32)?;
    let solver = SdSolver::new(p.clone(), YModel::None)?;
    let mut checked = 0;
    for k in 1..=degree / 2 {
        let w = Word::power(Letter::X(1), 2 * k);
        let want = MomentPolynomial::constant(Q::from_integer(catalan(k as u64)) * num::pow(a.clone(), k));
        for e in Engine::ALL {
            let got = evaluate(e, std::slice::from_ref(&w), &p, &YModel::None, Some(&solver), exec)?;
            if got != want {
                return Ok(Check::fail(name, checked, format!("{e} gives {got} for {w}, expected {want}")));
            }
        }
        let doubles = enumerate_cycles(&vec![1; 2 * k], None)?.iter().filter(|c| c.is_double()).count();
        if BigInt::from(doubles) != catalan(k as u64) {
            return Ok(Check::fail(name, checked, format!("{doubles} double cycles of length {}", 2 * k)));
        }
        checked += 1;
    }
    Ok(Check::pass(name, checked))
}

fn check_odd_vanishing(words: &[Word], params: &HeavyParams, exec: Execution) -> Result<Check> {
    let name = "odd_degree_vanishing";
    let mut checked = 0;
    for w in words {
        let odd = [1, 2].iter().any(|&j| w.x_count(j) % 2 == 1);
        if !odd {
            continue;
        }
        let v = evaluate(Engine::Tree, std::slice::from_ref(w), params, &YModel::None, None, exec)?;
        if !v.is_zero() {
            return Ok(Check::fail(name, checked, format!("{w} gives {v}")));
        }
        checked += 1;
    }
    Ok(Check::pass(name, checked))
}

/// Fibers of the unfolding map over every `γ` of length `≤ max_len` on two
/// colors: images are double, the map is idempotent, and the weights summed
/// fiber by fiber reproduce `Φ`.
pub fn check_unfold_fibers(max_len: usize, exec: Execution) -> Result<Check> {
    let name = "unfold_fibers";
    let params = HeavyParams::symbolic([1, 2], (max_len / 2).max(1) as u32)?;
    let mut checked = 0;
    for w in words_up_to(&[Letter::X(1), Letter::X(2)], max_len, 0) {
        let gamma: Vec<u32> = w.0.iter().map(|l| l.index()).collect();
        let all = enumerate_cycles(&gamma, None)?;
        let fibers = unfold_fibers(&gamma)?;
        let total: usize = fibers.values().map(Vec::len).sum();
        if total != all.len() {
            return Ok(Check::fail(name, checked, format!("fibers of {w} cover {total} of {} cycles", all.len())));
        }
        let mut sum = MomentPolynomial::zero();
        for (image, fiber) in &fibers {
            if !image.is_double() || unfold(image) != *image {
                return Ok(Check::fail(name, checked, format!("bad image {:?} for {w}", image.walk())));
            }
            for c in fiber {
                sum += &hw_weight(c, &params)?;
            }
        }
        let phi = evaluate(Engine::Tree, std::slice::from_ref(&w), &params, &YModel::None, None, exec)?;
        if sum != phi {
            return Ok(Check::fail(name, checked, format!("fiber sum {sum} differs from {phi} for {w}")));
        }
        checked += 1;
    }
    Ok(Check::pass(name, checked))
}

fn check_validity_spots() -> Result<Check> {
    let name = "parameter_validity";
    let bad = validate_parameter(&[q(1), q(2), q(1)], 2)?;
    match &bad.witness {
        Some(m) if !bad.valid && m.det == q(-3) => {}
        _ => return Ok(Check::fail(name, 0, "(1, 2, 1) was not rejected with the -3 minor".into())),
    }
    for a in [q(0), q_frac(1, 2), q(1), q(3)] {
        if !validate_parameter(&vec![a.clone(); 4], 2)?.valid {
            return Ok(Check::fail(name, 1, format!("constant sequence {a} rejected")));
        }
    }
    Ok(Check::pass(name, 5))
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub degree: usize,
    /// Parameters of `x1` and `x2`.
    pub params: HeavyParams,
    /// Replaces the parameters seen by the tree engine.
    pub tree_params: Option<HeavyParams>,
    /// Total degree of the sweep with a symbolic diagonal `y1`; 0 skips it.
    pub y_degree: usize,
    pub exec: Execution,
}

impl VerifyConfig {
    pub fn symbolic(degree: usize) -> Result<Self> {
        Ok(VerifyConfig {
            degree,
            params: HeavyParams::symbolic([1, 2], (degree / 2).max(1) as u32)?,
            tree_params: None,
            y_degree: degree.min(6),
            exec: Execution::default(),
        })
    }
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.degree > MAX_VERIFY_DEGREE {
        return Err(Error::resource("verify degree", MAX_VERIFY_DEGREE as u64));
    }
    let xs = [Letter::X(1), Letter::X(2)];
    let words = words_up_to(&xs, cfg.degree, 0);
    let mut checks = vec![compare_engines("engines", &words, &cfg.params, cfg.tree_params.as_ref(), &YModel::None, cfg.exec)?];
    if cfg.y_degree > 0 {
        let yw = words_up_to(&[Letter::X(1), Letter::X(2), Letter::Y(1)], cfg.y_degree, 2);
        let y = YModel::Diagonal(DiagonalMoments::Symbolic);
        checks.push(compare_engines("engines_diagonal_y", &yw, &cfg.params, cfg.tree_params.as_ref(), &y, cfg.exec)?);
    }
    let series = series_vs_sd_report(&cfg.params, 1, cfg.degree, 3)?;
    checks.push(match series.mismatch {
        None => Check::pass("series_vs_sd", series.checked),
        Some(m) => Check::fail("series_vs_sd", series.checked, format!("c_{}[{}]: series {} vs direct {}", m.k, m.m, m.series, m.direct)),
    });
    checks.push(check_catalan(cfg.degree, cfg.exec)?);
    checks.push(check_odd_vanishing(&words, &cfg.params, cfg.exec)?);
    checks.push(check_unfold_fibers(cfg.degree.min(6), cfg.exec)?);
    checks.push(check_validity_spots()?);
    Ok(VerifyReport { passed: checks.iter().all(|c| c.passed), checks })
}

/// Double cycles are fixed points of the unfolding; exposed for callers that
/// only need the image set.
pub fn double_cycles(gamma: &[u32]) -> Result<Vec<ColoredCycleOnTree>> {
    Ok(enumerate_cycles(gamma, None)?.into_iter().filter(ColoredCycleOnTree::is_double).collect())
}
