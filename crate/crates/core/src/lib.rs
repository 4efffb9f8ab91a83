//! Order-of-contact invariants of holomorphic curves against real
//! hypersurfaces given by polynomial defining functions, in exact
//! arithmetic.
//!
//! Polynomials, trace series and curve jets are generic over a [`Scalar`]
//! field. The aliases below fix the exact instance used by every analysis
//! and the floating instance used by the Levi-form sampler.

pub mod contact;
pub mod error;
pub mod faa;
pub mod jet;
pub mod lift;
pub mod models;
pub mod normal;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod series;

use num_complex::Complex;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use jet::Jet;
pub use poly::{Hermitian, Monomial, Poly};
pub use scalar::{RealScalar, Scalar};
pub use series::{Order, Trace};

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;
pub type Polynomial = Poly<GaussianRational>;
pub type HermitianPolynomial = Hermitian<GaussianRational>;
pub type TraceSeries = Trace<GaussianRational>;
pub type CurveJet = Jet<GaussianRational>;

pub type Complex64 = Complex<f64>;
pub type FloatPolynomial = Poly<Complex64>;
pub type FloatHermitian = Hermitian<Complex64>;
pub type FloatJet = Jet<Complex64>;
