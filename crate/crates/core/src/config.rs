//! Parameter and y-model files, and inline parameter strings.
//!
//! File schema:
//!
//! ```json
//! {"matrices": [{"name": "x1", "a": ["1", "1/3", "1/5"]}],
//!  "y": {"kind": "diagonal", "moments": ["0", "1", "0", "3"]}}
//! ```
//!
//! `a` may also be the string `"symbolic"` (with an optional `"kmax"`).
//! `y.kind` is one of `diagonal` (a moment table for `y.name`, default `y1`,
//! or a `"letters"` map of tables), `symbolic`, or `heavy_wigner` (an
//! independent heavy Wigner matrix with parameter `a` for every y letter).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::engine::{DiagonalMoments, HeavyWignerTraffic, YModel};
use crate::error::{Error, Result};
use crate::params::{HeavyParams, ParamSeq};
use crate::rational::{parse_rational, Q};
use crate::word::Letter;

/// Heavy letters standing in for y letters of a `heavy_wigner` y model
/// start at this index.
pub const HIDDEN_INDEX_BASE: u32 = 1 << 30;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    #[serde(default)]
    matrices: Vec<MatrixEntry>,
    #[serde(default)]
    y: Option<YSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixEntry {
    name: String,
    a: SeqSpec,
    #[serde(default)]
    kmax: Option<u32>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeqSpec {
    Values(Vec<String>),
    Keyword(String),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum YSpec {
    Diagonal {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        moments: Option<Vec<String>>,
        #[serde(default)]
        letters: Option<BTreeMap<String, Vec<String>>>,
    },
    Symbolic,
    HeavyWigner {
        a: Vec<String>,
    },
}

fn rationals(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn letter_index(name: &str, want_x: bool) -> Result<u32> {
    let l = Letter::parse(name)?;
    if l.is_x() != want_x {
        return Err(Error::domain(format!("{name} is not a{} letter", if want_x { "n x" } else { " y" })));
    }
    Ok(l.index())
}

/// Parameters and y model described by a parsed JSON file.
pub fn load_model(v: &Value) -> Result<(HeavyParams, YModel)> {
    let f: ParamFile = serde_json::from_value(v.clone()).map_err(|e| Error::parse(0, format!("parameter file: {e}")))?;
    let mut params = HeavyParams::new();
    for m in &f.matrices {
        let j = letter_index(&m.name, true)?;
        let seq = match &m.a {
            SeqSpec::Values(vals) => ParamSeq::Values(rationals(vals)?),
            SeqSpec::Keyword(k) if k == "symbolic" => ParamSeq::Symbolic { k_max: m.kmax.unwrap_or(6) },
            SeqSpec::Keyword(k) => parse_inline(k, m.kmax.unwrap_or(6))?,
        };
        params.set(j, seq)?;
    }
    let y = match f.y {
        None => YModel::None,
        Some(YSpec::Symbolic) => YModel::Diagonal(DiagonalMoments::Symbolic),
        Some(YSpec::Diagonal { name, moments, letters }) => {
            let mut table = BTreeMap::new();
            if let Some(ms) = moments {
                table.insert(letter_index(name.as_deref().unwrap_or("y1"), false)?, rationals(&ms)?);
            }
            for (n, ms) in letters.unwrap_or_default() {
                table.insert(letter_index(&n, false)?, rationals(&ms)?);
            }
            if table.is_empty() {
                return Err(Error::domain("diagonal y model needs moments"));
            }
            YModel::Diagonal(DiagonalMoments::Table(table))
        }
        Some(YSpec::HeavyWigner { a }) => {
            let seq = ParamSeq::Values(rationals(&a)?);
            let mut hp = HeavyParams::new();
            let mut letter_map = BTreeMap::new();
            for j in 1..=16u32 {
                hp.set(HIDDEN_INDEX_BASE + j, seq.clone())?;
                letter_map.insert(j, HIDDEN_INDEX_BASE + j);
            }
            YModel::Traffic(Arc::new(HeavyWignerTraffic { params: hp, letter_map }))
        }
    };
    Ok((params, y))
}

/// Inline sequences: `trivial:a` = `(a, 0, 0, …)`, `const:a` = `(a, a, …)`,
/// `list:a1,a2,…`, each of length `k_max` (lists keep their own length).
pub fn parse_inline(s: &str, k_max: u32) -> Result<ParamSeq> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| Error::parse(0, format!("expected kind:value, got {s:?}")))?;
    let len = k_max.max(1) as usize;
    let at = |e: Error| match e {
        Error::Parse { msg, .. } => Error::parse(kind.len() + 1, msg),
        e => e,
    };
    match kind {
        "trivial" => {
            let a = parse_rational(rest).map_err(at)?;
            let mut v = vec![Q::from_integer(0.into()); len];
            v[0] = a;
            Ok(ParamSeq::Values(v))
        }
        "const" => Ok(ParamSeq::Values(vec![parse_rational(rest).map_err(at)?; len])),
        "list" => Ok(ParamSeq::Values(rest.split(',').map(parse_rational).collect::<Result<_>>().map_err(at)?)),
        _ => Err(Error::parse(0, format!("unknown parameter kind {kind:?} (expected trivial, const or list)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::phi;
    use crate::rational::{q, q_frac};
    use crate::word::InterleavedWord;
    use serde_json::json;

    #[test]
    fn documented_schema() {
        let v = json!({"matrices": [{"name": "x1", "a": ["1", "1/3", "1/5"]}],
                       "y": {"kind": "diagonal", "moments": ["0", "1", "0", "3"]}});
        let (p, y) = load_model(&v).unwrap();
        assert_eq!(p.value(1, 2), Some(q_frac(1, 3)));
        let w = InterleavedWord::parse("x1^2 y1^2 x1^2 y1^2").unwrap();
        // a1^2 m2^2 + a1^2 m4 + a2 m4 = 1 + 3 + 1
        assert_eq!(phi(&w, &p, &y).unwrap().as_constant(), Some(q(5)));
    }

    #[test]
    fn symbolic_and_errors() {
        let (p, y) = load_model(&json!({"matrices": [{"name": "x2", "a": "symbolic", "kmax": 3}], "y": {"kind": "symbolic"}})).unwrap();
        assert_eq!(p.k_max(2), Some(3));
        assert!(matches!(y, YModel::Diagonal(DiagonalMoments::Symbolic)));
        assert!(load_model(&json!({"matrices": [{"name": "y1", "a": ["1"]}]})).is_err());
        assert!(load_model(&json!({"bogus": 1})).is_err());
    }

    #[test]
    fn heavy_y() {
        let (p, y) = load_model(&json!({"matrices": [{"name": "x1", "a": "const:1"}], "y": {"kind": "heavy_wigner", "a": ["1", "1"]}})).unwrap();
        let w = InterleavedWord::parse("y1^4").unwrap();
        assert_eq!(phi(&w, &p, &y).unwrap().as_constant(), Some(q(3)));
    }

    #[test]
    fn inline() {
        assert_eq!(parse_inline("trivial:2", 3).unwrap(), ParamSeq::Values(vec![q(2), q(0), q(0)]));
        assert_eq!(parse_inline("const:1/2", 2).unwrap(), ParamSeq::Values(vec![q_frac(1, 2); 2]));
        assert_eq!(parse_inline("list:1,2", 9).unwrap(), ParamSeq::Values(vec![q(1), q(2)]));
        assert!(matches!(parse_inline("const:x", 2), Err(Error::Parse { pos: 6, .. })));
        assert!(parse_inline("nope:1", 2).is_err());
    }
}
