//! Coefficient fields.
//!
//! Everything algebraic in this crate is written against [`Scalar`], a
//! complex field with conjugation. The exact instance is
//! `Complex<BigRational>` (Gaussian rationals); `Complex<f64>` and
//! `Complex<f32>` exist so the same polynomials can be evaluated
//! numerically by the Levi-form sampler.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Real subfield underlying a [`Scalar`].
pub trait RealScalar:
    Clone
    + Debug
    + PartialOrd
    + Num
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    fn from_rational(q: &BigRational) -> Self;
}

impl RealScalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

macro_rules! impl_real_float {
    ($f:ty) => {
        impl RealScalar for $f {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $f / den as $f
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn abs_val(&self) -> Self {
                self.abs()
            }

            fn from_rational(q: &BigRational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $f
            }
        }
    };
}

impl_real_float!(f32);
impl_real_float!(f64);

/// A complex coefficient field closed under conjugation.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Real: RealScalar;

    fn conj(&self) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn norm_sqr(&self) -> Self::Real;

    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_real(Self::Real::from_ratio(num, den))
    }

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn imag_unit() -> Self {
        Self::from_parts(Self::Real::zero(), Self::Real::one())
    }

    fn is_real(&self) -> bool {
        self.im().is_zero()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T: RealScalar> Scalar for Complex<T> {
    type Real = T;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn re(&self) -> T {
        self.re.clone()
    }

    fn im(&self) -> T {
        self.im.clone()
    }

    fn from_parts(re: T, im: T) -> Self {
        Complex::new(re, im)
    }

    fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n!` embedded in any scalar field.
pub fn factorial_in<S: Scalar>(n: u32) -> S {
    let mut acc = S::one();
    for k in 2..=n {
        acc = acc * S::from_int(k as i64);
    }
    acc
}

/// Exact rational from a big integer.
pub fn rational_from_int(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// Lossy conversion of an exact Gaussian rational.
pub fn to_complex_f64(z: &Complex<BigRational>) -> Complex<f64> {
    Complex::new(RealScalar::to_f64(&z.re), RealScalar::to_f64(&z.im))
}

/// Embed an exact Gaussian rational in another scalar field.
pub fn convert_exact<S: Scalar>(z: &Complex<BigRational>) -> S {
    S::from_parts(S::Real::from_rational(&z.re), S::Real::from_rational(&z.im))
}
