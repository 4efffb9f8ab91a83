//! Holomorphic curve jets `γ(t) = (t^M Σ_i c_i^1 t^i, …, t^M Σ_i c_i^n t^i)`.

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::{factorial_in, Scalar};

/// A curve through the origin with multiplicity `M` and coefficients
/// `c_i^q`, `i = 0..=L`.
///
/// A truncated jet only vouches for `c_0..c_L`; asking for anything beyond is
/// an error. A polynomial jet is a complete curve whose coefficients past `L`
/// are exactly zero; its `L` is the last nonzero index.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    multiplicity: u32,
    jet_length: u32,
    coeffs: Vec<Vec<S>>,
    polynomial: bool,
}

impl<S: Scalar> Jet<S> {
    /// `coeffs[q][i] = c_i^q`; all rows must have the same length `L + 1`.
    pub fn new(multiplicity: u32, coeffs: Vec<Vec<S>>, polynomial: bool) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::InvalidArgument("multiplicity must be positive".into()));
        }
        let len = coeffs.first().map(Vec::len).unwrap_or(0);
        if len == 0 || coeffs.iter().any(|row| row.len() != len) {
            return Err(Error::InvalidArgument(
                "jet rows must be nonempty and of equal length".into(),
            ));
        }
        if coeffs.iter().all(|row| row[0].is_zero()) {
            return Err(Error::ZeroCurve);
        }
        let mut coeffs = coeffs;
        if polynomial {
            // Trailing zero columns carry no information for an exact curve.
            let keep = (0..len)
                .rposition(|i| coeffs.iter().any(|row| !row[i].is_zero()))
                .map_or(1, |i| i + 1);
            coeffs.iter_mut().for_each(|row| row.truncate(keep));
        }
        let len = coeffs[0].len();
        Ok(Jet {
            multiplicity,
            jet_length: (len - 1) as u32,
            coeffs,
            polynomial,
        })
    }

    /// Canonical jet from raw components given as `t`-coefficient lists
    /// (`components[q][k]` multiplies `t^k`), trusted through `known_degree`.
    pub fn from_components(components: &[Vec<S>], known_degree: u32) -> Result<Self> {
        Self::build(components, known_degree, false)
    }

    /// Jet of a polynomial curve; every coefficient is known.
    pub fn from_polynomials(components: &[Vec<S>]) -> Result<Self> {
        let degree = components
            .iter()
            .filter_map(|c| c.iter().rposition(|v| !v.is_zero()))
            .max()
            .unwrap_or(0) as u32;
        Self::build(components, degree, true)
    }

    fn build(components: &[Vec<S>], known_degree: u32, polynomial: bool) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::ZeroCurve);
        }
        for (q, c) in components.iter().enumerate() {
            if c.iter().skip(known_degree as usize + 1).any(|v| !v.is_zero()) {
                return Err(Error::InvalidArgument(format!(
                    "component {} has terms beyond the known degree {known_degree}",
                    q + 1
                )));
            }
            if c.first().is_some_and(|v| !v.is_zero()) {
                return Err(Error::CurveNotThroughOrigin { component: q + 1 });
            }
        }
        let lowest = components
            .iter()
            .filter_map(|c| c.iter().position(|v| !v.is_zero()))
            .min()
            .ok_or(Error::ZeroCurve)? as u32;
        let length = known_degree - lowest;
        let coeffs = components
            .iter()
            .map(|c| {
                (0..=length)
                    .map(|i| c.get((lowest + i) as usize).cloned().unwrap_or_else(S::zero))
                    .collect()
            })
            .collect();
        Self::new(lowest, coeffs, polynomial)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn jet_length(&self) -> u32 {
        self.jet_length
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    pub fn is_regular(&self) -> bool {
        self.multiplicity == 1
    }

    /// Highest trusted `t`-degree, `None` for polynomial curves.
    pub fn known_degree(&self) -> Option<u32> {
        (!self.polynomial).then_some(self.multiplicity + self.jet_length)
    }

    /// `c_i^q` with zero-based component `q`.
    pub fn coeff(&self, q: usize, i: u32) -> Result<S> {
        if i <= self.jet_length {
            Ok(self.coeffs[q][i as usize].clone())
        } else if self.polynomial {
            Ok(S::zero())
        } else {
            Err(Error::InsufficientJet {
                needed: (self.multiplicity + i) as usize,
                available: (self.multiplicity + self.jet_length) as usize,
            })
        }
    }

    /// The vector `(c_i^1, …, c_i^n)`.
    pub fn coeff_vector(&self, i: u32) -> Result<Vec<S>> {
        (0..self.dim()).map(|q| self.coeff(q, i)).collect()
    }

    pub fn coeff_rows(&self) -> &[Vec<S>] {
        &self.coeffs
    }

    /// Coefficient of `t^k` in component `q`.
    pub fn t_coeff(&self, q: usize, k: u32) -> Result<S> {
        if k < self.multiplicity {
            Ok(S::zero())
        } else {
            self.coeff(q, k - self.multiplicity)
        }
    }

    /// `t`-coefficient lists through the trusted (or full) degree.
    pub fn components(&self) -> Vec<Vec<S>> {
        let top = self.multiplicity + self.jet_length;
        (0..self.dim())
            .map(|q| (0..=top).map(|k| self.t_coeff(q, k).expect("within jet")).collect())
            .collect()
    }

    /// Components as one-variable polynomials in `t`.
    pub fn component_polys(&self) -> Vec<Poly<S>> {
        self.components()
            .into_iter()
            .map(|c| {
                let mut p = Poly::zero(1);
                for (k, v) in c.into_iter().enumerate() {
                    p.add_term(Monomial::new(vec![k as u32], vec![0]), v);
                }
                p
            })
            .collect()
    }

    /// `γ(t^k)`: multiplicity `kM`, coefficients moved to stretched indices.
    pub fn reparametrize(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "reparametrization power must be positive".into(),
            ));
        }
        let length = k * (self.jet_length + 1) - 1;
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                let mut out = vec![S::zero(); length as usize + 1];
                for (i, c) in row.iter().enumerate() {
                    out[i * k as usize] = c.clone();
                }
                out
            })
            .collect();
        Self::new(self.multiplicity * k, coeffs, self.polynomial)
    }

    /// `(∂^k γ)(0) = k! · (coefficient vector of t^k)`.
    pub fn derivative_at_zero(&self, k: u32) -> Result<Vec<S>> {
        let scale: S = factorial_in(k);
        (0..self.dim())
            .map(|q| Ok(self.t_coeff(q, k)? * scale.clone()))
            .collect()
    }

    /// The same curve in `m ≥ n` coordinates, extra components zero.
    pub fn with_dimension(&self, m: usize) -> Result<Self> {
        if m < self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m, vec![S::zero(); self.jet_length as usize + 1]);
        Ok(Jet { coeffs, ..self.clone() })
    }

    pub fn map_coeffs<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Jet<T> {
        Jet {
            multiplicity: self.multiplicity,
            jet_length: self.jet_length,
            coeffs: self.coeffs.iter().map(|row| row.iter().map(&f).collect()).collect(),
            polynomial: self.polynomial,
        }
    }

    /// Components as arbitrary-dimension series evaluated at `t`, used when
    /// shifting base points in tests and numerics.
    pub fn eval(&self, t: &S) -> Vec<S> {
        self.components()
            .into_iter()
            .map(|c| c.iter().rev().fold(S::zero(), |acc, v| acc * t.clone() + v.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational;
    use num_traits::Zero;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    fn poly(coeffs: &[i64]) -> Vec<GaussianRational> {
        coeffs.iter().map(|&c| g(c)).collect()
    }

    #[test]
    fn cusp_curve_has_multiplicity_two() {
        let jet = Jet::from_polynomials(&[poly(&[0]), poly(&[0, 0, 0, 1]), poly(&[0, 0, 1])]).unwrap();
        assert_eq!(jet.multiplicity(), 2);
        assert_eq!(jet.coeff_vector(0).unwrap(), poly(&[0, 0, 1]));
        assert_eq!(jet.coeff_vector(1).unwrap(), poly(&[0, 1, 0]));
    }

    #[test]
    fn line_is_regular() {
        let jet = Jet::from_polynomials(&[poly(&[0]), poly(&[0, 1]), poly(&[0])]).unwrap();
        assert_eq!(jet.multiplicity(), 1);
        assert!(jet.is_regular());
        assert_eq!(jet.coeff_vector(0).unwrap(), poly(&[0, 1, 0]));
    }

    #[test]
    fn multiplicity_with_higher_terms() {
        let jet = Jet::from_polynomials(&[poly(&[0, 0, 1, 1]), poly(&[0]), poly(&[0])]).unwrap();
        assert_eq!(jet.multiplicity(), 2);
        assert_eq!(jet.coeff_vector(0).unwrap(), poly(&[1, 0, 0]));
        assert_eq!(jet.coeff_vector(1).unwrap(), poly(&[1, 0, 0]));
    }

    #[test]
    fn multiplicity_errors() {
        assert_eq!(
            Jet::<GaussianRational>::from_polynomials(&[poly(&[0]), poly(&[0, 0])]),
            Err(Error::ZeroCurve)
        );
        assert_eq!(
            Jet::from_polynomials(&[poly(&[1, 1]), poly(&[0])]),
            Err(Error::CurveNotThroughOrigin { component: 1 })
        );
    }

    #[test]
    fn reparametrize_line() {
        let jet = Jet::from_polynomials(&[poly(&[0]), poly(&[0, 1]), poly(&[0])]).unwrap();
        let sq = jet.reparametrize(2).unwrap();
        assert_eq!(sq.multiplicity(), 2);
        assert_eq!(sq.components()[1][2], g(1));
        assert_eq!(jet.reparametrize(1).unwrap(), jet);
    }

    #[test]
    fn derivatives_at_zero() {
        let jet = Jet::from_polynomials(&[poly(&[0]), poly(&[0, 0, 0, 1]), poly(&[0, 0, 1])]).unwrap();
        assert_eq!(jet.derivative_at_zero(2).unwrap(), poly(&[0, 0, 2]));
        assert_eq!(jet.derivative_at_zero(1).unwrap(), poly(&[0, 0, 0]));
        assert_eq!(jet.derivative_at_zero(3).unwrap(), poly(&[0, 6, 0]));
    }

    #[test]
    fn derivative_pattern_at_multiples_of_multiplicity() {
        // M = 2: ∂^{2M}γ(0) = (2M)! c_M, checked against direct differentiation.
        let comps = [poly(&[0, 0, 1, 2, 3, 4]), poly(&[0, 0, 0, 5, 0, 7])];
        let jet = Jet::from_polynomials(&comps).unwrap();
        for k in 0..=5u32 {
            // differentiate t^j k times and evaluate at 0: only j = k survives, with k!
            let direct: Vec<GaussianRational> = comps
                .iter()
                .map(|c| c.get(k as usize).cloned().unwrap_or_else(|| g(0)) * factorial_in::<GaussianRational>(k))
                .collect();
            assert_eq!(jet.derivative_at_zero(k).unwrap(), direct);
        }
        assert_eq!(jet.derivative_at_zero(4).unwrap(), vec![g(72), g(0)]);
    }

    #[test]
    fn truncated_jet_refuses_unknown_coefficients() {
        let jet = Jet::from_components(&[poly(&[0, 1, 2])], 2).unwrap();
        assert_eq!(jet.jet_length(), 1);
        assert!(jet.derivative_at_zero(2).is_ok());
        assert!(matches!(
            jet.derivative_at_zero(3),
            Err(Error::InsufficientJet {
                needed: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn derivatives_below_multiplicity_vanish() {
        for m in 1..=4u32 {
            let mut c = vec![g(0); m as usize];
            c.extend([g(3), g(-1), g(2)]);
            let jet = Jet::from_polynomials(&[c.clone(), c]).unwrap();
            for k in 0..m {
                assert!(jet.derivative_at_zero(k).unwrap().iter().all(|v| v.is_zero()));
            }
        }
    }
}
