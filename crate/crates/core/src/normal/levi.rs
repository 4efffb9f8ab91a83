//! Levi form on the complex tangent space and a seeded sampler that looks
//! for negative directions near the origin.

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{to_complex_f64, Scalar};
use crate::{Complex64, HermitianPolynomial};

/// `∂r/∂z_j` at `q` for every `j`.
pub fn gradient<S: Scalar>(r: &Poly<S>, q: &[S]) -> Result<Vec<S>> {
    (0..r.dim()).map(|j| Ok(r.derive(j, false)?.eval(q))).collect()
}

fn largest_index<S: Scalar>(g: &[S]) -> Option<usize> {
    let mut best: Option<(usize, S::Real)> = None;
    for (j, v) in g.iter().enumerate() {
        let m = v.norm_sqr();
        if m.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| m > *b) {
            best = Some((j, m));
        }
    }
    best.map(|(j, _)| j)
}

/// `ξ^{(j)} = e_j − (r_{z_j}(q)/r_{z_m}(q)) e_m`, `j ≠ m`, where `m` indexes the
/// largest gradient component. Each vector annihilates `∂r(q)`.
pub fn tangent_basis<S: Scalar>(r: &Poly<S>, q: &[S]) -> Result<Vec<Vec<S>>> {
    let g = gradient(r, q)?;
    tangent_basis_from_gradient(&g)
}

fn tangent_basis_from_gradient<S: Scalar>(g: &[S]) -> Result<Vec<Vec<S>>> {
    let m = largest_index(g).ok_or(Error::DegenerateGradient)?;
    let n = g.len();
    Ok((0..n)
        .filter(|&j| j != m)
        .map(|j| {
            let mut v = vec![S::zero(); n];
            v[j] = S::one();
            v[m] = -(g[j].clone() / g[m].clone());
            v
        })
        .collect())
}

/// Precomputed derivatives of a floating copy of `r`.
struct Numeric {
    r: Poly<Complex64>,
    grad: Vec<Poly<Complex64>>,
    hess: Vec<Vec<Poly<Complex64>>>,
}

impl Numeric {
    fn new(r: &HermitianPolynomial) -> Result<Self> {
        let r = r.as_poly().map_coeffs(to_complex_f64);
        let n = r.dim();
        let grad: Vec<_> = (0..n).map(|j| r.derive(j, false)).collect::<Result<_>>()?;
        let hess = grad
            .iter()
            .map(|gj| (0..n).map(|k| gj.derive(k, true)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(Numeric { r, grad, hess })
    }

    fn gradient(&self, q: &[Complex64]) -> Vec<Complex64> {
        self.grad.iter().map(|p| p.eval(q)).collect()
    }

    /// Hermitian matrix of the Levi form restricted to `basis`.
    fn levi_matrix(&self, q: &[Complex64], basis: &[Vec<Complex64>]) -> DMatrix<Complex64> {
        let n = q.len();
        let h: Vec<Vec<Complex64>> = self
            .hess
            .iter()
            .map(|row| row.iter().map(|p| p.eval(q)).collect())
            .collect();
        let d = basis.len();
        DMatrix::from_fn(d, d, |a, b| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    acc += h[j][k] * basis[a][j] * basis[b][k].conj();
                }
            }
            acc
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeviVerdict {
    NoViolationFound,
    Violation,
}

impl std::fmt::Display for LeviVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LeviVerdict::NoViolationFound => "no-violation-found",
            LeviVerdict::Violation => "violation",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeviSample {
    /// Smallest eigenvalue seen; `None` when no surface point was located or
    /// the tangent space is trivial.
    pub min_eigenvalue: Option<f64>,
    pub witness_point: Option<Vec<Complex64>>,
    pub verdict: LeviVerdict,
    pub located: usize,
    pub failures: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeviConfig {
    pub radius: f64,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

impl Default for LeviConfig {
    fn default() -> Self {
        LeviConfig {
            radius: 0.3,
            samples: 500,
            tol: 1e-9,
            seed: 0,
            threads: 0,
        }
    }
}

const NEWTON_STEPS: usize = 60;
const NEWTON_TARGET: f64 = 1e-12;

/// Draws the `index`-th surface point: tangential coordinates from a ball of
/// the given radius, a small offset along `i·v`, then a Newton solve along
/// the real normal direction `v`.
fn sample_point(num: &Numeric, m: usize, v: &[Complex64], config: &LeviConfig, index: u64) -> Option<Vec<Complex64>> {
    let n = v.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    let dirs: Vec<usize> = (0..n).filter(|&j| j != m).collect();
    if !dirs.is_empty() {
        let mut raw: Vec<f64> = (0..2 * dirs.len()).map(|_| gaussian(&mut rng)).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let scale = config.radius * rng.random::<f64>().sqrt() / norm;
        raw.iter_mut().for_each(|x| *x *= scale);
        for (k, &j) in dirs.iter().enumerate() {
            p[j] = Complex64::new(raw[2 * k], raw[2 * k + 1]);
        }
    }
    let eta = config.radius * 0.25 * (2.0 * rng.random::<f64>() - 1.0);
    for j in 0..n {
        p[j] += Complex64::new(0.0, eta) * v[j];
    }
    let mut tau = 0.0;
    for _ in 0..NEWTON_STEPS {
        let q: Vec<Complex64> = p.iter().zip(v).map(|(a, b)| a + b * tau).collect();
        let f = num.r.eval(&q).re;
        if f.abs() < NEWTON_TARGET {
            return Some(q);
        }
        let g = num.gradient(&q);
        let df = 2.0 * g.iter().zip(v).map(|(a, b)| a * b).sum::<Complex64>().re;
        if df.abs() < 1e-14 {
            return None;
        }
        tau -= f / df;
        if !tau.is_finite() || tau.abs() > 10.0 * config.radius.max(1.0) {
            return None;
        }
    }
    None
}

/// Standard normal deviate by Box-Muller.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Minimum Levi eigenvalue over sampled points of `{r = 0}` near 0. The
/// tangent basis is not orthonormalized, so eigenvalues carry the Levi
/// form's signs but not its magnitudes.
pub fn levi_sample(r: &HermitianPolynomial, config: &LeviConfig) -> Result<LeviSample> {
    if config.tol.is_nan() || config.radius.is_nan() || config.tol <= 0.0 || config.radius <= 0.0 {
        return Err(Error::InvalidArgument("radius and tol must be positive".into()));
    }
    let num = Numeric::new(r)?;
    let n = r.dim();
    let g0 = num.gradient(&vec![Complex64::new(0.0, 0.0); n]);
    let m = largest_index(&g0).ok_or(Error::DegenerateGradient)?;
    let gm = g0[m];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[m] = gm.conj() / gm.norm();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Option<(f64, Vec<Complex64>)>> = pool.install(|| {
        (0..config.samples as u64)
            .into_par_iter()
            .map(|idx| {
                let q = sample_point(&num, m, &v, config, idx)?;
                let basis = tangent_basis_from_gradient(&num.gradient(&q)).ok()?;
                if basis.is_empty() {
                    return Some((f64::INFINITY, q));
                }
                let levi = num.levi_matrix(&q, &basis);
                let eig = levi.symmetric_eigen();
                let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
                Some((min, q))
            })
            .collect()
    });
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut failures = 0;
    let mut located = 0;
    for res in results {
        match res {
            None => failures += 1,
            Some((min, q)) => {
                located += 1;
                if min.is_finite() && best.as_ref().is_none_or(|(b, _)| min < *b) {
                    best = Some((min, q));
                }
            }
        }
    }
    let verdict = match &best {
        Some((min, _)) if *min < -config.tol => LeviVerdict::Violation,
        _ => LeviVerdict::NoViolationFound,
    };
    Ok(LeviSample {
        min_eigenvalue: best.as_ref().map(|(v, _)| *v),
        witness_point: best.map(|(_, q)| q),
        verdict,
        located,
        failures,
        seed: config.seed,
    })
}
