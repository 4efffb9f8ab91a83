//! Structural checks on a normal form: positivity of some `κ` behind every
//! cubic coefficient, and vanishing of low curve coefficients along
//! positive Levi directions for curves of high contact.

use num_traits::{Signed, Zero};

use super::{NormalForm, Triple};
use crate::contact::compose;
use crate::error::{Error, Result};
use crate::series::Order;
use crate::CurveJet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Check {
    pub consistent: bool,
    /// First nonzero `λ_{jkℓ}` (in key order) none of whose `κ` is positive.
    pub offending_triple: Option<Triple>,
}

/// Every nonzero `λ_{jkℓ}` needs `max(κ_j, κ_k, κ_ℓ) > 0`.
pub fn lemma1_check(nf: &NormalForm) -> Lemma1Check {
    let positive = |j: usize| nf.kappa(j).is_some_and(|k| k.is_positive());
    let offending_triple = nf
        .lambda
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, _)| *t)
        .find(|&(j, k, l)| !(positive(j) || positive(k) || positive(l)));
    Lemma1Check {
        consistent: offending_triple.is_none(),
        offending_triple,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Check {
    /// All `κ ≥ 0` and `ν(r∘γ) > 4M`.
    pub hypothesis_met: bool,
    /// `c_i^s = 0` for `i < M` along every `s` with `κ_s > 0`.
    pub coefficients_vanish: bool,
    /// `ν(r∘γ)` for the reassembled normal form.
    pub bound_witness: Order,
    /// One-based components `s` with `κ_s > 0` and some `c_i^s ≠ 0`, `i < M`.
    pub nonvanishing: Vec<usize>,
    /// The hypothesis forces the vanishing, and any nonvanishing low
    /// coefficient caps the order at `4M − 2`.
    pub implication_holds: bool,
    pub truncation: u32,
}

/// Checks the lemma on one curve written in the normal-form coordinates.
/// The curve must have `γ¹ ≡ 0`.
pub fn lemma2_check(nf: &NormalForm, curve: &CurveJet) -> Result<Lemma2Check> {
    let n = nf.dim();
    let curve = curve.with_dimension(n)?;
    let m = curve.multiplicity();
    if !curve.coeff_rows()[0].iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument(
            "the first curve component must vanish identically".into(),
        ));
    }
    // Terms past the normal form's degree enter at t-degree ≥ (d + 1)M.
    let truncation = (6 * m).min((nf.degree + 1) * m - 1);
    let trace = compose(nf.reassemble().as_poly(), &curve, truncation)?;
    let order = trace.min_order();
    let mut nonvanishing = Vec::new();
    for (i, k) in nf.kappa.iter().enumerate() {
        if !k.is_positive() {
            continue;
        }
        let s = i + 2;
        let low = (0..m).any(|c| curve.coeff(s - 1, c).is_ok_and(|v| !v.is_zero()));
        if low {
            nonvanishing.push(s);
        }
    }
    let coefficients_vanish = nonvanishing.is_empty();
    let all_nonnegative = nf.kappa.iter().all(|k| !k.is_negative());
    let hypothesis_met = all_nonnegative && order.exceeds(4 * m);
    let capped = !order.exceeds(4 * m - 2);
    let implication_holds = (!hypothesis_met || coefficients_vanish) && (coefficients_vanish || capped);
    Ok(Lemma2Check {
        hypothesis_met,
        coefficients_vanish,
        bound_witness: order,
        nonvanishing,
        implication_holds,
        truncation,
    })
}
