use serde::Serialize;

use super::phi::phi_k;
use super::ymodel::YModel;
use crate::error::Result;
use crate::params::HeavyParams;
use crate::poly::MomentPolynomial;
use crate::word::{InterleavedWord, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessDefect {
    pub f: MomentPolynomial,
    pub g: MomentPolynomial,
}

/// `f = Φ(x̊² ẙ² x̊² ẙ²)` with `x̊² = x² − Φ(x²)`, and `g = Φ^(2)(y², y²) − Φ(y²)²`.
///
/// `partner` is either a y letter (evaluated through `y`) or a second heavy
/// letter.
pub fn freeness_defect(params: &HeavyParams, y: &YModel, x: u32, partner: Letter) -> Result<FreenessDefect> {
    freeness_defect_by(x, partner, &|ws| {
        let iws: Vec<InterleavedWord> = ws.iter().map(InterleavedWord::from_word).collect();
        phi_k(&iws, params, y)
    })
}

/// As [`freeness_defect`], with `Φ^(K)` supplied by `phi_k`.
pub fn freeness_defect_by(x: u32, partner: Letter, phi_k: &dyn Fn(&[Word]) -> Result<MomentPolynomial>) -> Result<FreenessDefect> {
    let xx = Word::power(Letter::X(x), 2);
    let yy = Word::power(partner, 2);
    let eval = |w: &Word| phi_k(std::slice::from_ref(w));
    let phi_xx = eval(&xx)?;
    let phi_yy = eval(&yy)?;

    // Each centered factor is `w - Φ(w)`; expand the product of four.
    let factors = [(&xx, &phi_xx), (&yy, &phi_yy), (&xx, &phi_xx), (&yy, &phi_yy)];
    let mut f = MomentPolynomial::zero();
    for mask in 0u32..16 {
        let mut word = Word::identity();
        let mut coeff = MomentPolynomial::one();
        for (i, (w, c)) in factors.iter().enumerate() {
            if mask & (1 << i) != 0 {
                word = word.concat(w);
            } else {
                coeff = &coeff * &-*c;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        f += &(&coeff * &eval(&word)?);
    }

    let g = &phi_k(&[yy.clone(), yy])? - &(&phi_yy * &phi_yy);
    Ok(FreenessDefect { f, g })
}
