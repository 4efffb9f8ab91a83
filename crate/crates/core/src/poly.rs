//! Polynomials in `z_1..z_n` and `z̄_1..z̄_n`.
//!
//! A monomial `z^α z̄^β` is stored as the exponent pair `(α, β)`. `Re`, `Im`
//! and `|·|²` never appear in the representation: they are expanded into
//! this basis when a polynomial is built. Terms are kept in graded
//! lexicographic order on `(α, β)` so iteration and display are
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{factorial_in, Scalar};

/// Exponent pair of `z^α z̄^β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub z: Vec<u32>,
    pub zb: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            z: vec![0; n],
            zb: vec![0; n],
        }
    }

    pub fn new(z: Vec<u32>, zb: Vec<u32>) -> Self {
        debug_assert_eq!(z.len(), zb.len());
        Monomial { z, zb }
    }

    /// `z_j` (zero-based `j`).
    pub fn var(n: usize, j: usize) -> Self {
        let mut m = Self::one(n);
        m.z[j] = 1;
        m
    }

    /// `z̄_j` (zero-based `j`).
    pub fn conj_var(n: usize, j: usize) -> Self {
        let mut m = Self::one(n);
        m.zb[j] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn holomorphic_degree(&self) -> u32 {
        self.z.iter().sum()
    }

    pub fn antiholomorphic_degree(&self) -> u32 {
        self.zb.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.holomorphic_degree() + self.antiholomorphic_degree()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Nonconstant and free of `z̄`.
    pub fn is_pure_holomorphic(&self) -> bool {
        self.antiholomorphic_degree() == 0 && self.holomorphic_degree() > 0
    }

    /// The monomial obtained by swapping `z` and `z̄`.
    pub fn conj(&self) -> Self {
        Monomial {
            z: self.zb.clone(),
            zb: self.z.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            zb: self.zb.iter().zip(&other.zb).map(|(a, b)| a + b).collect(),
        }
    }

    /// `α! β!`, the factor relating a Taylor coefficient to the derivative at 0.
    pub fn factorial_weight<S: Scalar>(&self) -> S {
        self.z
            .iter()
            .chain(&self.zb)
            .fold(S::one(), |acc, &e| acc * factorial_in::<S>(e))
    }

    fn padded(&self, n: usize) -> Self {
        let mut z = self.z.clone();
        let mut zb = self.zb.clone();
        z.resize(n, 0);
        zb.resize(n, 0);
        Monomial { z, zb }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.z.cmp(&self.z))
            .then_with(|| other.zb.cmp(&self.zb))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `z, z̄` over a scalar field. Not necessarily real-valued.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    n: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    /// `z_j` (zero-based `j`).
    pub fn var(n: usize, j: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::var(n, j), S::one());
        p
    }

    /// `z̄_j` (zero-based `j`).
    pub fn conj_var(n: usize, j: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Monomial::conj_var(n, j), S::one());
        p
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut p = Self::zero(m.dim());
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.dim(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Accumulates `c · m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.dim(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one(self.n))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Complex conjugate of the function: `conj(Σ c z^α z̄^β) = Σ c̄ z^β z̄^α`.
    pub fn conj(&self) -> Self {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        self.filter(|m| m.degree() <= max_degree)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product with every term above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &Self, max_degree: Option<u32>) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in product");
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(d) = max_degree {
                    if ma.degree() + mb.degree() > d {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow_truncated(&self, e: u32, max_degree: Option<u32>) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul_truncated(self, max_degree);
        }
        acc
    }

    /// Formal Wirtinger derivative `∂/∂z_index` or `∂/∂z̄_index` (zero-based index).
    pub fn derive(&self, index: usize, conjugated: bool) -> Result<Self> {
        if index >= self.n {
            return Err(Error::IndexOutOfRange { index, dim: self.n });
        }
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut d = m.clone();
            let slot = if conjugated { &mut d.zb[index] } else { &mut d.z[index] };
            if *slot == 0 {
                continue;
            }
            let e = *slot;
            *slot -= 1;
            out.add_term(d, c.clone() * S::from_int(e as i64));
        }
        Ok(out)
    }

    /// Value at `point`, with `z̄` replaced by the conjugate of `z`.
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.n, "dimension mismatch in evaluation");
        let conj: Vec<S> = point.iter().map(Scalar::conj).collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for j in 0..self.n {
                v = v * point[j].pow(m.z[j]) * conj[j].pow(m.zb[j]);
            }
            acc = acc + v;
        }
        acc
    }

    /// Replaces each of the `2n` variable slots by a polynomial: `images[j]`
    /// for `z_j` and `images[n + j]` for `z̄_j`. All images must share one
    /// dimension. Terms above `max_degree` are dropped along the way, which
    /// is exact whenever no image has a constant term.
    pub fn substitute(&self, images: &[Poly<S>], max_degree: Option<u32>) -> Self {
        assert_eq!(images.len(), 2 * self.n, "need one image per variable slot");
        let target = images.first().map(|p| p.n).unwrap_or(0);
        let mut powers: Vec<Vec<Poly<S>>> = images.iter().map(|p| vec![Poly::one(p.n), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(target, c.clone());
            for (slot, &e) in m.z.iter().chain(&m.zb).enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[slot];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_truncated(&images[slot], max_degree);
                    cache.push(next);
                }
                acc = acc.mul_truncated(&cache[e as usize], max_degree);
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Pullback through a holomorphic map `z = map(w)`: `z_j ↦ map_j(w)` and
    /// `z̄_j ↦ conj(map_j)(w̄)`.
    pub fn pullback(&self, map: &[Poly<S>], max_degree: Option<u32>) -> Self {
        assert_eq!(map.len(), self.n);
        let mut images: Vec<Poly<S>> = map.to_vec();
        images.extend(map.iter().map(Poly::conj));
        self.substitute(&images, max_degree)
    }

    /// Embeds into `m ≥ n` variables.
    pub fn with_dimension(&self, m: usize) -> Result<Self> {
        if m < self.n {
            let used = self.used_dimension();
            if used > m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: used,
                });
            }
        }
        Ok(Poly {
            n: m,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut k2 = k.padded(m.max(self.n));
                    k2.z.truncate(m);
                    k2.zb.truncate(m);
                    (k2, c.clone())
                })
                .collect(),
        })
    }

    /// Number of leading variables actually referenced.
    pub fn used_dimension(&self) -> usize {
        self.terms
            .keys()
            .map(|m| {
                (0..m.dim())
                    .rev()
                    .find(|&j| m.z[j] > 0 || m.zb[j] > 0)
                    .map_or(0, |j| j + 1)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn map_coeffs<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Poly<T> {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Derivative `r_{z_{j_1}…z_{j_a} z̄_{k_1}…z̄_{k_b}}(0)` for the given index
    /// multisets, read off as `α! β! c_{αβ}`.
    pub fn derivative_at_origin(&self, holo: &[usize], anti: &[usize]) -> S {
        let mut m = Monomial::one(self.n);
        for &j in holo {
            m.z[j] += 1;
        }
        for &k in anti {
            m.zb[k] += 1;
        }
        match self.terms.get(&m) {
            Some(c) => c.clone() * m.factorial_weight::<S>(),
            None => S::zero(),
        }
    }

    /// Substitutes `z ↦ z + shift` (and `z̄ ↦ z̄ + conj(shift)`).
    pub fn translate(&self, shift: &[S]) -> Self {
        let n = self.n;
        let mut images = Vec::with_capacity(2 * n);
        for (j, s) in shift.iter().enumerate() {
            let mut p = Poly::var(n, j);
            p.add_term(Monomial::one(n), s.clone());
            images.push(p);
        }
        for (j, s) in shift.iter().enumerate() {
            let mut p = Poly::conj_var(n, j);
            p.add_term(Monomial::one(n), s.conj());
            images.push(p);
        }
        self.substitute(&images, None)
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;

    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;

    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;

    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        self.mul_truncated(rhs, None)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;

    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

/// True iff the coefficient map describes a real-valued function:
/// `c_{βα} = conj(c_{αβ})` for every key, absent keys counting as zero.
pub fn hermitian_check<S: Scalar>(terms: &BTreeMap<Monomial, S>) -> bool {
    terms.iter().all(|(m, c)| {
        let mirrored = terms.get(&m.conj()).cloned().unwrap_or_else(S::zero);
        mirrored == c.conj()
    })
}

/// A real-valued polynomial, such as a defining function.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian<S>(Poly<S>);

impl<S: Scalar> Hermitian<S> {
    pub fn new(p: Poly<S>) -> Result<Self> {
        if hermitian_check(p.term_map()) {
            Ok(Hermitian(p))
        } else {
            Err(Error::NotRealValued)
        }
    }

    /// `(p + conj p) / 2`, i.e. `Re p`.
    pub fn real_part(p: &Poly<S>) -> Self {
        let half = S::from_ratio(1, 2);
        Hermitian((p + &p.conj()).scale(&half))
    }

    pub fn as_poly(&self) -> &Poly<S> {
        &self.0
    }

    pub fn into_poly(self) -> Poly<S> {
        self.0
    }

    pub fn with_dimension(&self, m: usize) -> Result<Self> {
        Ok(Hermitian(self.0.with_dimension(m)?))
    }

    pub fn scale_real(&self, c: &S::Real) -> Self {
        Hermitian(self.0.scale(&S::from_real(c.clone())))
    }

    pub fn map_coeffs<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Hermitian<T> {
        Hermitian(self.0.map_coeffs(f))
    }
}

impl<S> Deref for Hermitian<S> {
    type Target = Poly<S>;

    fn deref(&self) -> &Poly<S> {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RealScalar;
    use crate::GaussianRational;
    use num_complex::Complex;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn z(n: usize, j: usize) -> Poly<GaussianRational> {
        Poly::var(n, j)
    }

    fn zb(n: usize, j: usize) -> Poly<GaussianRational> {
        Poly::conj_var(n, j)
    }

    #[test]
    fn derivative_of_modulus_squared() {
        let p = &z(3, 1) * &zb(3, 1);
        assert_eq!(p.derive(1, false).unwrap(), zb(3, 1));
    }

    #[test]
    fn conjugate_derivative_of_real_part() {
        // Re(z2² z̄3) = ½(z2² z̄3 + z̄2² z3)
        let t = &(&z(3, 1) * &z(3, 1)) * &zb(3, 2);
        let p = Hermitian::real_part(&t);
        let expected = (&z(3, 1) * &z(3, 1)).scale(&q(1, 2));
        assert_eq!(p.derive(2, true).unwrap(), expected);
    }

    #[test]
    fn derivative_of_re_z1() {
        let p = Hermitian::real_part(&z(3, 0));
        assert_eq!(p.derive(0, false).unwrap(), Poly::constant(3, q(1, 2)));
    }

    #[test]
    fn derivative_index_out_of_range() {
        let p = z(2, 0);
        assert!(matches!(
            p.derive(2, false),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn hermitian_check_cases() {
        let n = 3;
        let m = Monomial::new(vec![0, 1, 0], vec![0, 1, 0]);
        let mut ok = BTreeMap::new();
        ok.insert(m.clone(), q(1, 1));
        assert!(hermitian_check(&ok));
        let mut bad = BTreeMap::new();
        bad.insert(m, GaussianRational::imag_unit());
        assert!(!hermitian_check(&bad));
        let lone = Poly::<GaussianRational>::var(n, 0);
        assert!(!hermitian_check(lone.term_map()));
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::new(vec![2, 0], vec![0, 0]);
        let b = Monomial::new(vec![0, 0], vec![0, 1]);
        assert!(b < a);
        let c = Monomial::new(vec![1, 0], vec![0, 0]);
        assert!(c < b, "z1 precedes z̄2 within a degree");
    }

    #[test]
    fn eval_real_on_hermitian() {
        let p = Hermitian::real_part(&(&(&z(2, 0) * &z(2, 0)) * &zb(2, 1)));
        let pt = vec![
            Complex::new(
                <BigRational as RealScalar>::from_ratio(1, 3),
                <BigRational as RealScalar>::from_ratio(2, 1),
            ),
            Complex::new(
                <BigRational as RealScalar>::from_ratio(-5, 7),
                <BigRational as RealScalar>::from_ratio(1, 2),
            ),
        ];
        assert!(p.eval(&pt).is_real());
    }

    #[test]
    fn pullback_identity_is_noop() {
        let p = Hermitian::real_part(&(&z(2, 0) * &zb(2, 1)));
        let id = vec![z(2, 0), z(2, 1)];
        assert_eq!(p.pullback(&id, None), *p.as_poly());
    }
}
