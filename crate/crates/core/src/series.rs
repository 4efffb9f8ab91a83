//! Truncated bivariate series in `t, t̄`.

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// Vanishing order of a truncated object: either exact, or only bounded below
/// because every coefficient inside the truncation is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    AtLeast(u32),
}

impl Order {
    pub fn value(&self) -> u32 {
        match *self {
            Order::Finite(k) | Order::AtLeast(k) => k,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// True when the order is known to exceed `k`.
    pub fn exceeds(&self, k: u32) -> bool {
        match *self {
            Order::Finite(v) => v > k,
            Order::AtLeast(v) => v > k,
        }
    }

    /// Ranking used when picking best witnesses: by value, with a lower
    /// bound beating an exact order of the same value.
    pub fn rank(&self) -> (u32, bool) {
        (self.value(), !self.is_finite())
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::AtLeast(k) => write!(f, "at_least {k}"),
        }
    }
}

/// `Σ a_{pq} t^p t̄^q` known through total degree `truncation`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<S> {
    truncation: u32,
    coeffs: BTreeMap<(u32, u32), S>,
}

impl<S: Scalar> Trace<S> {
    pub fn zero(truncation: u32) -> Self {
        Trace {
            truncation,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a series, discarding zeros and anything beyond the truncation.
    pub fn from_coeffs<I>(truncation: u32, coeffs: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), S)>,
    {
        let mut s = Self::zero(truncation);
        for (k, c) in coeffs {
            s.add_at(k.0, k.1, c);
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Accumulates into `a_{pq}`; ignored when `p + q` exceeds the truncation.
    pub fn add_at(&mut self, p: u32, q: u32, c: S) {
        if p + q > self.truncation || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((p, q)).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&(p, q));
        }
    }

    /// `a_{pq}`, or `None` when `p + q` lies beyond the truncation.
    pub fn coeff(&self, p: u32, q: u32) -> Option<S> {
        if p + q > self.truncation {
            None
        } else {
            Some(self.coeffs.get(&(p, q)).cloned().unwrap_or_else(S::zero))
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(u32, u32), &S)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `min{p + q : a_{pq} ≠ 0}`, or `at_least N+1` for a zero series.
    pub fn min_order(&self) -> Order {
        self.coeffs
            .keys()
            .map(|&(p, q)| p + q)
            .min()
            .map_or(Order::AtLeast(self.truncation + 1), Order::Finite)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation.min(other.truncation);
        let mut out = Self::zero(n);
        for (&(p, q), c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_at(p, q, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation.min(other.truncation);
        let mut out = Self::zero(n);
        for (&(p1, q1), c1) in &self.coeffs {
            for (&(p2, q2), c2) in &other.coeffs {
                if p1 + q1 + p2 + q2 <= n {
                    out.add_at(p1 + p2, q1 + q2, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(
            self.truncation,
            self.coeffs.iter().map(|(k, v)| (*k, v.clone() * c.clone())),
        )
    }

    /// `a_{qp} = conj(a_{pq})` throughout.
    pub fn is_hermitian_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(&(p, q), c)| self.coeff(q, p).map(|m| m == c.conj()).unwrap_or(true))
    }

    /// Reads a one-variable polynomial in `(t, t̄)` as a series truncated at `truncation`.
    pub fn from_poly(p: &Poly<S>, truncation: u32) -> Self {
        assert_eq!(p.dim(), 1, "trace series come from one-variable polynomials");
        Self::from_coeffs(truncation, p.terms().map(|(m, c)| ((m.z[0], m.zb[0]), c.clone())))
    }

    pub fn to_poly(&self) -> Poly<S> {
        let mut out = Poly::zero(1);
        for (&(p, q), c) in &self.coeffs {
            out.add_term(Monomial::new(vec![p], vec![q]), c.clone());
        }
        out
    }
}
