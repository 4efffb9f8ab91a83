//! Regular curves built from the jets of a singular one.
//!
//! For `γ` of multiplicity `M` with coefficient vectors `c_i`, the lifts are
//! `γ̂ = c₀t`, `γ̃ = c₀t + c_M t²` and `ζ = c₀t + c_M t² + c_{2M} t³`. Their
//! low-order mixed derivatives at 0 are rescaled copies of the derivatives
//! `D^{aM,bM}[r∘γ](0)`, except that `D^{3M,M}` also carries the block
//! `B(r;γ)` built from the intermediate coefficients `c_i`, `0 < i < M`.

use std::fmt;

use num_rational::BigRational;

use crate::contact::{compose, mixed_derivative};
use crate::error::{Error, Result};
use crate::faa::{evaluate_term, expand, DerivativeTerm};
use crate::jet::Jet;
use crate::poly::Poly;
use crate::scalar::{factorial, RealScalar, Scalar};
use crate::series::Order;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftKind {
    Hat,
    Tilde,
    Zeta,
}

impl LiftKind {
    /// Number of jet blocks `c₀, c_M, c_{2M}` the lift reads.
    fn blocks(self) -> u32 {
        match self {
            LiftKind::Hat => 1,
            LiftKind::Tilde => 2,
            LiftKind::Zeta => 3,
        }
    }

    /// The lift used to realize regular contact above `target`.
    pub fn for_target(target: u32) -> Option<Self> {
        match target {
            2 => Some(LiftKind::Hat),
            3 => Some(LiftKind::Tilde),
            4 => Some(LiftKind::Zeta),
            _ => None,
        }
    }
}

impl fmt::Display for LiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftKind::Hat => "hat",
            LiftKind::Tilde => "tilde",
            LiftKind::Zeta => "zeta",
        })
    }
}

impl std::str::FromStr for LiftKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hat" => Ok(LiftKind::Hat),
            "tilde" => Ok(LiftKind::Tilde),
            "zeta" => Ok(LiftKind::Zeta),
            other => Err(Error::InvalidArgument(format!("unknown lift kind `{other}`"))),
        }
    }
}

/// The regular curve `Σ_{k<blocks} c_{kM} t^{k+1}`.
pub fn lift_curve<S: Scalar>(curve: &Jet<S>, kind: LiftKind) -> Result<Jet<S>> {
    let m = curve.multiplicity();
    let mut components = vec![vec![S::zero()]; curve.dim()];
    for k in 0..kind.blocks() {
        let c = curve.coeff_vector(k * m)?;
        for (comp, v) in components.iter_mut().zip(c) {
            comp.push(v);
        }
    }
    Jet::from_polynomials(&components)
}

/// `B(r;γ)` under both constant conventions.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction<S> {
    /// `½ (3M)! M! Σ r_{z_j z_ℓ z̄_k}(0) c̄₀^k Σ_{i=1}^{M-1} c_i^j c_{M-i}^ℓ`.
    pub paper_convention: S,
    /// Sum of the matching terms of the reduced `D^{3M,M}` expansion, each
    /// with the coefficient the expansion produces.
    pub oracle_convention: S,
    /// `M = 1`, where the defining sum is empty.
    pub trivial: bool,
}

/// The `∇^{2,1}(∂^{M+i}γ, ∂^{2M-i}γ; ∂̄^M γ̄)` terms, `0 < i < M`, of
/// `D^{3M,M}[r∘γ]` modulo multiplicity-vanishing terms.
pub fn obstruction_terms(m: u32) -> Result<Vec<DerivativeTerm>> {
    let reduced = expand(3 * m, m)?.reduce_mod_mv(m);
    Ok(reduced
        .terms()
        .filter(|t| {
            t.shape.antiholomorphic == [m]
                && t.shape.holomorphic.len() == 2
                && t.shape.holomorphic.iter().all(|&s| s > m && s < 2 * m)
        })
        .collect())
}

pub fn obstruction_b<S: Scalar>(r: &Poly<S>, curve: &Jet<S>) -> Result<Obstruction<S>> {
    let m = curve.multiplicity();
    if r.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            found: curve.dim(),
        });
    }
    if m == 1 {
        return Ok(Obstruction {
            paper_convention: S::zero(),
            oracle_convention: S::zero(),
            trivial: true,
        });
    }
    let n = r.dim();
    let c0: Vec<S> = curve.coeff_vector(0)?;
    let cs: Vec<Vec<S>> = (1..m).map(|i| curve.coeff_vector(i)).collect::<Result<_>>()?;
    let mut inner = S::zero();
    for j in 0..n {
        for l in 0..n {
            let pair = (1..m).fold(S::zero(), |acc, i| {
                acc + cs[i as usize - 1][j].clone() * cs[(m - i) as usize - 1][l].clone()
            });
            if pair.is_zero() {
                continue;
            }
            for (k, c0k) in c0.iter().enumerate() {
                if c0k.is_zero() {
                    continue;
                }
                let d = r.derivative_at_origin(&[j, l], &[k]);
                inner = inner + d * c0k.conj() * pair.clone();
            }
        }
    }
    let scale = BigRational::from_integer(factorial(3 * m) * factorial(m)) / BigRational::from_integer(2.into());
    let paper = S::from_real(S::Real::from_rational(&scale)) * inner;
    let mut oracle = S::zero();
    for term in obstruction_terms(m)? {
        oracle = oracle + evaluate_term(&term, r, curve)?;
    }
    Ok(Obstruction {
        paper_convention: paper,
        oracle_convention: oracle,
        trivial: false,
    })
}

const ALLOWED: [(u32, u32); 7] = [(1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (2, 2), (3, 1)];

fn is_allowed(a: u32, b: u32) -> bool {
    ALLOWED.contains(&(a, b)) || ALLOWED.contains(&(b, a))
}

/// Lowest degree `2 ≤ k ≤ max` carrying a pure (holomorphic or
/// antiholomorphic) term of `r`.
pub fn pure_term_degree<S: Scalar>(r: &Poly<S>, max: u32) -> Option<u32> {
    r.terms()
        .filter(|(m, _)| {
            let d = m.degree();
            d >= 2 && d <= max && (m.is_pure_holomorphic() || m.conj().is_pure_holomorphic())
        })
        .map(|(m, _)| m.degree())
        .min()
}

/// Left minus right side of the derivative-matching identity for `(a, b)`:
/// `(aM)!(bM)!/(a!b!) · D^{a,b}[r∘ζ](0) − D^{aM,bM}[r∘γ](0)`, with `B(r;γ)`
/// (oracle convention) added back for `(3,1)` and its conjugate for `(1,3)`.
pub fn lift_identity_residual<S: Scalar>(r: &Poly<S>, curve: &Jet<S>, a: u32, b: u32) -> Result<S> {
    if !is_allowed(a, b) {
        return Err(Error::InvalidArgument(format!("no lift identity for ({a}, {b})")));
    }
    let m = curve.multiplicity();
    if a == 0 || b == 0 {
        if let Some(d) = pure_term_degree(r, 4 * m) {
            return Err(Error::PureTermsPresent { degree: d });
        }
    }
    let zeta = lift_curve(curve, LiftKind::Zeta)?;
    let scale = BigRational::from_integer(factorial(a * m) * factorial(b * m))
        / BigRational::from_integer(factorial(a) * factorial(b));
    let lhs = S::from_real(S::Real::from_rational(&scale)) * mixed_derivative(r, &zeta, a, b)?;
    let rhs = mixed_derivative(r, curve, a * m, b * m)?;
    let correction = match (a, b) {
        (3, 1) => obstruction_b(r, curve)?.oracle_convention,
        (1, 3) => obstruction_b(r, curve)?.oracle_convention.conj(),
        _ => S::zero(),
    };
    Ok(lhs - rhs + correction)
}

/// Why no regular witness was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessDiagnostic<S> {
    /// `ν(r∘γ) > target·M` could not be certified at the given truncation.
    Precondition { nu_trace: Order, needed: u32 },
    /// The obstruction blocks the `ζ` construction.
    Obstructed { obstruction: Obstruction<S> },
    /// The lift was built but direct composition shows `D^{a,b}[r∘lift](0) ≠ 0`
    /// with `a + b ≤ target`.
    VerificationFailed { pair: (u32, u32), order: Order },
}

impl<S: fmt::Display> fmt::Display for WitnessDiagnostic<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessDiagnostic::Precondition { nu_trace, needed } => {
                write!(f, "precondition not met: nu(r∘γ) = {nu_trace}, need > {needed}")
            }
            WitnessDiagnostic::Obstructed { obstruction } => write!(
                f,
                "obstruction B(r;γ) is nonzero (paper {}, oracle {})",
                obstruction.paper_convention, obstruction.oracle_convention
            ),
            WitnessDiagnostic::VerificationFailed { pair, order } => write!(
                f,
                "lift verification failed: D^{{{},{}}} ≠ 0, nu(r∘lift) = {order}",
                pair.0, pair.1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOutcome<S> {
    pub kind: LiftKind,
    pub witness: Option<Jet<S>>,
    pub lift_order: Option<Order>,
    pub diagnostic: Option<WitnessDiagnostic<S>>,
}

/// Builds `γ̂`, `γ̃` or `ζ` (for `target` 2, 3, 4) from a singular curve with
/// `ν(r∘γ) > target·M` and returns it only after direct composition
/// confirms `ν(r∘lift) > target`.
pub fn construct_regular_witness<S: Scalar>(
    r: &Poly<S>,
    curve: &Jet<S>,
    target: u32,
    truncation: u32,
) -> Result<WitnessOutcome<S>> {
    let kind = LiftKind::for_target(target)
        .ok_or_else(|| Error::InvalidArgument(format!("target must be 2, 3 or 4, got {target}")))?;
    let m = curve.multiplicity();
    let needed = target * m;
    let empty = |diagnostic| WitnessOutcome {
        kind,
        witness: None,
        lift_order: None,
        diagnostic: Some(diagnostic),
    };
    let nu_trace = compose(r, curve, truncation.max(needed))?.min_order();
    if !nu_trace.exceeds(needed) {
        return Ok(empty(WitnessDiagnostic::Precondition { nu_trace, needed }));
    }
    if kind == LiftKind::Zeta {
        let obstruction = obstruction_b(r, curve)?;
        if !obstruction.oracle_convention.is_zero() {
            return Ok(empty(WitnessDiagnostic::Obstructed { obstruction }));
        }
    }
    let lift = lift_curve(curve, kind)?;
    let trace = compose(r, &lift, target)?;
    let order = trace.min_order();
    if let Some((&pair, _)) = trace.nonzero().min_by_key(|(&(p, q), _)| (p + q, std::cmp::Reverse(p))) {
        return Ok(WitnessOutcome {
            kind,
            witness: None,
            lift_order: Some(order),
            diagnostic: Some(WitnessDiagnostic::VerificationFailed { pair, order }),
        });
    }
    Ok(WitnessOutcome {
        kind,
        witness: Some(lift),
        lift_order: Some(order),
        diagnostic: None,
    })
}

/// Every allowed `(a, b)` pair, conjugates included, in a fixed order.
pub fn identity_pairs() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for &(a, b) in &ALLOWED {
        out.push((a, b));
        if a != b {
            out.push((b, a));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::parse::{parse_curve, parse_hermitian};
    use crate::GaussianRational;
    use num_traits::Zero;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    #[test]
    fn lift_examples() {
        let gamma = parse_curve("0; t^3; t^2").unwrap();
        assert_eq!(
            lift_curve(&gamma, LiftKind::Hat).unwrap(),
            parse_curve("0; 0; t").unwrap()
        );
        assert_eq!(
            lift_curve(&gamma, LiftKind::Zeta).unwrap(),
            parse_curve("0; 0; t").unwrap()
        );
        let gamma = parse_curve("0; t^2 + t^3; t^4").unwrap();
        assert_eq!(
            lift_curve(&gamma, LiftKind::Zeta).unwrap(),
            parse_curve("0; t; t^2").unwrap()
        );
        assert_eq!(
            lift_curve(&gamma, LiftKind::Tilde).unwrap(),
            parse_curve("0; t; t^2").unwrap()
        );
        let short = Jet::from_components(&[vec![g(0), g(0), g(1)]], 3).unwrap();
        assert!(lift_curve(&short, LiftKind::Hat).is_ok());
        assert!(matches!(
            lift_curve(&short, LiftKind::Tilde),
            Err(Error::InsufficientJet { .. })
        ));
    }

    #[test]
    fn obstruction_on_example_surface() {
        let r = models::example_surface();
        let gamma = parse_curve(models::SINGULAR_CURVE).unwrap();
        let b = obstruction_b(&r, &gamma).unwrap();
        assert_eq!(b.paper_convention, g(-720));
        assert_eq!(b.oracle_convention, g(-720));
        assert!(!b.trivial);
    }

    #[test]
    fn obstruction_vanishes_without_intermediate_coefficients() {
        let r = models::example_surface();
        let gamma = parse_curve("0; t^2; t^4 + t^6").unwrap();
        let b = obstruction_b(&r, &gamma).unwrap();
        assert!(b.paper_convention.is_zero() && b.oracle_convention.is_zero());
        let regular = parse_curve("0; t; 0").unwrap();
        assert!(obstruction_b(&r, &regular).unwrap().trivial);
    }

    #[test]
    fn three_one_mismatch_is_the_obstruction() {
        let r = models::example_surface();
        let gamma = parse_curve(models::SINGULAR_CURVE).unwrap();
        assert!(lift_identity_residual(&r, &gamma, 3, 1).unwrap().is_zero());
        assert!(lift_identity_residual(&r, &gamma, 1, 3).unwrap().is_zero());
        for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            assert!(lift_identity_residual(&r, &gamma, a, b).unwrap().is_zero(), "({a},{b})");
        }
    }

    #[test]
    fn pure_identities_need_normalized_coordinates() {
        let r = parse_hermitian("Re(z1) + Re(z2^2) + abs2(z2)", None).unwrap();
        let gamma = parse_curve("t^2; t^2").unwrap();
        assert_eq!(
            lift_identity_residual(&r, &gamma, 1, 0),
            Err(Error::PureTermsPresent { degree: 2 })
        );
        let r = parse_hermitian("Re(z1) + abs2(z2) + Re(z1*conj(z2)^2)", None).unwrap();
        let gamma = parse_curve("t^2 + 3*t^4 - t^6; t^2 + t^3").unwrap();
        for a in 1..=3 {
            assert!(lift_identity_residual(&r, &gamma, a, 0).unwrap().is_zero());
            assert!(lift_identity_residual(&r, &gamma, 0, a).unwrap().is_zero());
        }
        assert!(lift_identity_residual(&r, &gamma, 2, 3).is_err());
    }

    #[test]
    fn witness_examples() {
        let r = parse_hermitian("Re(z1) + abs2(z2)^2", Some(3)).unwrap();
        let gamma = parse_curve("0; t^2; 0").unwrap();
        let out = construct_regular_witness(&r, &gamma, 4, 12).unwrap();
        assert!(out.witness.is_none());
        assert!(matches!(out.diagnostic, Some(WitnessDiagnostic::Precondition { .. })));

        let r = parse_hermitian("Re(z1) + abs2(z2)^3", Some(3)).unwrap();
        let out = construct_regular_witness(&r, &gamma, 4, 16).unwrap();
        assert_eq!(out.witness, Some(parse_curve("0; t; 0").unwrap()));
        assert_eq!(out.lift_order, Some(Order::AtLeast(5)));
        assert!(compose(&r, out.witness.as_ref().unwrap(), 10).unwrap().min_order() == Order::Finite(6));

        let r = models::example_surface();
        let gamma = parse_curve(models::SINGULAR_CURVE).unwrap();
        let out = construct_regular_witness(&r, &gamma, 4, 40).unwrap();
        assert!(out.witness.is_none());
        match out.diagnostic {
            Some(WitnessDiagnostic::Obstructed { obstruction }) => assert_eq!(obstruction.paper_convention, g(-720)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lower_targets_lift_the_example_curve() {
        // ν(r∘γ) is unbounded along the singular curve, and γ̂ = γ̃ = (0,0,t)
        // meets the surface to order 4 > 3.
        let r = models::example_surface();
        let gamma = parse_curve(models::SINGULAR_CURVE).unwrap();
        for target in [2, 3] {
            let out = construct_regular_witness(&r, &gamma, target, 40).unwrap();
            assert_eq!(out.witness, Some(parse_curve("0; 0; t").unwrap()), "target {target}");
        }
    }

    #[test]
    fn obstruction_term_family() {
        assert!(obstruction_terms(1).unwrap().is_empty());
        let terms = obstruction_terms(3).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].shape.holomorphic, vec![5, 4]);
        assert_eq!(obstruction_terms(4).unwrap().len(), 2);
    }
}
