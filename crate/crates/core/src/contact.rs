//! Composition `r∘γ`, vanishing orders and order of contact.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::poly::Poly;
use crate::scalar::{factorial_in, Scalar};
use crate::series::{Order, Trace};

/// `(t^p)`-coefficients of one holomorphic series, truncated.
type Series<S> = Vec<S>;

fn series_mul<S: Scalar>(a: &Series<S>, b: &Series<S>, n: usize) -> Series<S> {
    let mut out = vec![S::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

/// Lowest `t`-degree at which any unknown jet coefficient can enter a
/// monomial with the given exponents, or `None` when the jet is exact.
fn unknown_onset(exponents: &[u32], orders: &[u32], known: Option<u32>) -> Option<u32> {
    let k = known?;
    let mut onset: Option<u32> = None;
    let base: u32 = exponents.iter().zip(orders).map(|(&e, &o)| e * o).sum();
    for (q, &e) in exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let start = base - orders[q] + k + 1;
        onset = Some(onset.map_or(start, |s| s.min(start)));
    }
    onset
}

/// `r(γ(t), conj γ(t))` through total degree `truncation`.
pub fn compose<S: Scalar>(r: &Poly<S>, curve: &Jet<S>, truncation: u32) -> Result<Trace<S>> {
    let n = r.dim();
    if curve.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: curve.dim(),
        });
    }
    if !r.constant_term().is_zero() {
        return Err(Error::NotBasedAtOrigin);
    }
    let top = truncation as usize;
    let comps = curve.components();
    let known = curve.known_degree();
    // Orders of each component within the trusted data; an identically zero
    // component is only known to vanish past the trusted degree.
    let orders: Vec<u32> = comps
        .iter()
        .map(|c| {
            c.iter()
                .position(|v| !v.is_zero())
                .map_or(known.map_or(u32::MAX / 4, |k| k + 1), |p| p as u32)
        })
        .collect();
    let base = |exps: &[u32]| -> u32 { exps.iter().zip(&orders).map(|(&e, &o)| e * o).sum() };
    for (m, _) in r.terms() {
        let holo = unknown_onset(&m.z, &orders, known).map(|o| o + base(&m.zb));
        let anti = unknown_onset(&m.zb, &orders, known).map(|o| o + base(&m.z));
        if let Some(onset) = holo.into_iter().chain(anti).min() {
            if onset <= truncation {
                return Err(Error::InsufficientJet {
                    needed: truncation as usize,
                    available: known.unwrap_or(0) as usize,
                });
            }
        }
    }
    let series: Vec<Series<S>> = comps
        .iter()
        .map(|c| {
            let mut s: Series<S> = c.iter().take(top + 1).cloned().collect();
            s.resize(top + 1, S::zero());
            s
        })
        .collect();
    let mut powers: Vec<Vec<Series<S>>> = series
        .iter()
        .map(|s| {
            let mut one = vec![S::zero(); top + 1];
            one[0] = S::one();
            vec![one, s.clone()]
        })
        .collect();
    let mut products: HashMap<Vec<u32>, Series<S>> = HashMap::new();
    let mut product = |exps: &Vec<u32>| -> Series<S> {
        if let Some(p) = products.get(exps) {
            return p.clone();
        }
        let mut acc = vec![S::zero(); top + 1];
        acc[0] = S::one();
        for (q, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let cache = &mut powers[q];
            while cache.len() <= e as usize {
                let next = series_mul(cache.last().unwrap(), &series[q], top);
                cache.push(next);
            }
            acc = series_mul(&acc, &cache[e as usize], top);
        }
        products.insert(exps.clone(), acc.clone());
        acc
    };
    let mut out = Trace::zero(truncation);
    for (m, c) in r.terms() {
        let h = product(&m.z);
        let a = product(&m.zb);
        for (p, x) in h.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (q, y) in a.iter().enumerate().take(top + 1 - p) {
                if !y.is_zero() {
                    out.add_at(p as u32, q as u32, c.clone() * x.clone() * y.conj());
                }
            }
        }
    }
    Ok(out)
}

/// An order of contact `ν(r∘γ)/ν(γ)`, or a lower bound for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContactValue {
    Exact(BigRational),
    AtLeast(BigRational),
}

impl ContactValue {
    pub fn value(&self) -> &BigRational {
        match self {
            ContactValue::Exact(v) | ContactValue::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ContactValue::Exact(_))
    }

    /// Ordering used for best-witness selection: larger value first, and a
    /// lower bound ahead of an exact value of the same size.
    pub fn rank(&self) -> (BigRational, bool) {
        (self.value().clone(), !self.is_exact())
    }
}

impl fmt::Display for ContactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContactValue::Exact(v) => write!(f, "{v}"),
            ContactValue::AtLeast(v) => write!(f, "at_least {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContactReport {
    pub nu_curve: u32,
    pub nu_trace: Order,
    pub contact: ContactValue,
    /// `(a₀, b₀)` with `a₀ + b₀ = ν(r∘γ)` and `D^{a₀,b₀}(0) ≠ 0`; of the
    /// candidates, the one with the largest `a₀`.
    pub first_nonzero: Option<(u32, u32)>,
    pub truncation: u32,
}

pub fn contact_report<S: Scalar>(r: &Poly<S>, curve: &Jet<S>, truncation: u32) -> Result<ContactReport> {
    let trace = compose(r, curve, truncation)?;
    Ok(report_from_trace(&trace, curve.multiplicity()))
}

pub(crate) fn report_from_trace<S: Scalar>(trace: &Trace<S>, nu_curve: u32) -> ContactReport {
    let nu_trace = trace.min_order();
    let ratio = BigRational::new(BigInt::from(nu_trace.value()), BigInt::from(nu_curve));
    let contact = match nu_trace {
        Order::Finite(_) => ContactValue::Exact(ratio),
        Order::AtLeast(_) => ContactValue::AtLeast(ratio),
    };
    let first_nonzero = match nu_trace {
        Order::Finite(v) => trace
            .nonzero()
            .map(|(&k, _)| k)
            .filter(|&(p, q)| p + q == v)
            .max_by_key(|&(p, _)| p),
        Order::AtLeast(_) => None,
    };
    ContactReport {
        nu_curve,
        nu_trace,
        contact,
        first_nonzero,
        truncation: trace.truncation(),
    }
}

/// `D^{a,b}[r∘γ](0) = a! b! a_{ab}`.
pub fn mixed_derivative<S: Scalar>(r: &Poly<S>, curve: &Jet<S>, a: u32, b: u32) -> Result<S> {
    let trace = compose(r, curve, a + b)?;
    let c = trace.coeff(a, b).unwrap_or_else(S::zero);
    Ok(c * factorial_in::<S>(a) * factorial_in::<S>(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Violation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Violation => "violation",
        })
    }
}

/// Outcome of the leading-term test along one curve: if `r∘γ` has no pure
/// terms up to its vanishing order `T > 1`, pseudoconvexity forces `T = 2K`
/// with a positive `|t|^{2K}` coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct TangencyTest<S> {
    pub applicable: bool,
    pub order: Order,
    pub even: bool,
    pub leading_diag: S,
    pub verdict: Verdict,
}

pub fn tangency_psc_test<S: Scalar>(r: &Poly<S>, curve: &Jet<S>, truncation: u32) -> Result<TangencyTest<S>> {
    let trace = compose(r, curve, truncation)?;
    let order = trace.min_order();
    let t = order.value();
    let (applicable, even, leading) = match order {
        Order::Finite(t) => {
            let pure_free = (0..=t).all(|a| trace.coeff(a, 0).is_none_or(|c| c.is_zero()));
            let lead = if t % 2 == 0 {
                trace.coeff(t / 2, t / 2).unwrap_or_else(S::zero)
            } else {
                S::zero()
            };
            (pure_free && t > 1, t % 2 == 0, lead)
        }
        Order::AtLeast(_) => (false, t % 2 == 0, S::zero()),
    };
    let positive = leading.is_real() && leading.re() > S::Real::zero();
    let verdict = if applicable && (!even || !positive) {
        Verdict::Violation
    } else {
        Verdict::Pass
    };
    Ok(TangencyTest {
        applicable,
        order,
        even,
        leading_diag: leading,
        verdict,
    })
}

/// `ν(r∘γ)` read straight from a report, as a rational for comparisons.
pub fn order_as_rational(order: Order) -> BigRational {
    BigRational::new(BigInt::from(order.value()), BigInt::one())
}
