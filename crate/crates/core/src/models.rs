//! Reference surfaces and curves used across tests and the CLI.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jet::Jet;
use crate::parse::{parse_curve, parse_hermitian};
use crate::poly::{Hermitian, Monomial, Poly};
use crate::scalar::Scalar;
use crate::{GaussianRational, HermitianPolynomial};

/// A real hypersurface in `ℂ³` whose regular type is 4 while the singular
/// curve `(0, t³, t²)` lies inside it.
pub const EXAMPLE_SURFACE: &str = "Re(z1) + abs2(z2)*Re(z2^2 - z3^3) + abs2(z3)*Re(z3^2) - Re(z2^2*conj(z3))";

/// The same surface written out term by term.
pub const EXAMPLE_SURFACE_REWRITE: &str = "Re(z1) + 1/2*z2^3*conj(z2) + 1/2*z2*conj(z2)^3 \
     - 1/2*abs2(z2)*(z3^3+conj(z3)^3) + abs2(z3)*Re(z3^2) - Re(z2^2*conj(z3))";

pub const SINGULAR_CURVE: &str = "0; t^3; t^2";
pub const REGULAR_CURVE: &str = "0; t; 0";
pub const DIAGONAL_CURVE: &str = "0; t; t";

pub fn example_surface() -> HermitianPolynomial {
    parse_hermitian(EXAMPLE_SURFACE, Some(3)).expect("built-in surface parses")
}

pub fn curve(text: &str) -> Jet<GaussianRational> {
    parse_curve(text).expect("built-in curve parses")
}

/// Shape of a seeded random defining function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSurface {
    pub dim: usize,
    pub max_degree: u32,
    pub terms: usize,
    /// Allow pure (anti)holomorphic terms of degree ≥ 2.
    pub pure: bool,
    /// Add `2Re Σ g_j z_j` with random `g ≠ 0`; otherwise add `2Re z₁`.
    pub random_gradient: bool,
}

impl Default for RandomSurface {
    fn default() -> Self {
        RandomSurface {
            dim: 3,
            max_degree: 5,
            terms: 8,
            pure: false,
            random_gradient: false,
        }
    }
}

fn small_gaussian(rng: &mut ChaCha8Rng, bound: i64, max_den: i64) -> GaussianRational {
    loop {
        let re = rng.random_range(-bound..=bound);
        let im = rng.random_range(-bound..=bound);
        if re == 0 && im == 0 {
            continue;
        }
        let den = rng.random_range(1..=max_den);
        return GaussianRational::new(
            BigRational::new(re.into(), den.into()),
            BigRational::new(im.into(), den.into()),
        );
    }
}

/// A real polynomial `2Re(linear) + Re(Σ random terms)` with small
/// Gaussian-rational coefficients, reproducible from `seed`.
pub fn random_surface(seed: u64, shape: &RandomSurface) -> HermitianPolynomial {
    let n = shape.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Poly::zero(n);
    if shape.random_gradient {
        for j in 0..n {
            if j == 0 || rng.random_bool(0.5) {
                p.add_term(Monomial::var(n, j), small_gaussian(&mut rng, 2, 2));
            }
        }
    } else {
        p.add_term(Monomial::var(n, 0), GaussianRational::one());
    }
    let p = &p + &p.conj();
    let mut extra = Poly::zero(n);
    for _ in 0..shape.terms {
        let degree = rng.random_range(2..=shape.max_degree.max(2));
        let holo = if shape.pure {
            rng.random_range(0..=degree)
        } else {
            rng.random_range(1..degree)
        };
        let mut m = Monomial::one(n);
        for _ in 0..holo {
            m.z[rng.random_range(0..n)] += 1;
        }
        for _ in holo..degree {
            m.zb[rng.random_range(0..n)] += 1;
        }
        extra.add_term(m, small_gaussian(&mut rng, 3, 3));
    }
    let extra = Hermitian::real_part(&extra)
        .into_poly()
        .scale(&GaussianRational::from_int(2));
    Hermitian::new(&p + &extra).expect("real part is real")
}

/// Adds a random Hermitian block `Σ h_{jk} z_j z̄_k` with integer entries in
/// `[-3, 3]` to `r`, so the Levi form at 0 has a random signature.
pub fn with_random_levi_block(seed: u64, r: &HermitianPolynomial) -> HermitianPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
    let n = r.dim();
    let mut quad = Poly::zero(n);
    for j in 0..n {
        for k in j..n {
            let re = rng.random_range(-3i64..=3);
            let im = if j == k { 0 } else { rng.random_range(-3i64..=3) };
            let c = GaussianRational::new(
                BigRational::from_integer(re.into()),
                BigRational::from_integer(im.into()),
            );
            if c.is_zero() {
                continue;
            }
            quad.add_term(Monomial::var(n, j).mul(&Monomial::conj_var(n, k)), c.clone());
            if j != k {
                quad.add_term(Monomial::var(n, k).mul(&Monomial::conj_var(n, j)), c.conj());
            }
        }
    }
    Hermitian::new(r.as_poly() + &quad).expect("Hermitian block is real")
}

/// A polynomial curve of exact multiplicity `m` with `jet_len + 1`
/// coefficients per component in the box `|Re|, |Im| ≤ 2`. With
/// `tangential` the first component is zero.
pub fn random_curve(seed: u64, dim: usize, m: u32, jet_len: u32, tangential: bool) -> Jet<GaussianRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = usize::from(tangential);
    loop {
        let coeffs: Vec<Vec<GaussianRational>> = (0..dim)
            .map(|q| {
                (0..=jet_len)
                    .map(|_| {
                        if q < first || rng.random_bool(0.3) {
                            GaussianRational::zero()
                        } else {
                            small_gaussian(&mut rng, 2, 1)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(jet) = Jet::new(m, coeffs, true) {
            return jet;
        }
    }
}

/// A pseudoconvex model with a singular curve of high contact.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoconvexInstance {
    pub name: String,
    pub surface: HermitianPolynomial,
    pub curve: Jet<GaussianRational>,
}

/// `2Re z₁` plus squared moduli of holomorphic functions, each paired with
/// a curve of multiplicity `M ∈ {2, 3}` on which those functions vanish to
/// high order. Every surface is plurisubharmonic in `z'`, hence
/// pseudoconvex, and already in normal form.
pub fn pseudoconvex_instances() -> Vec<PseudoconvexInstance> {
    let mut out = Vec::new();
    let mut push = |name: String, surface: &str, curve: String| {
        let n = surface.matches("z4").count().min(1) + 3;
        let curve = parse_curve(&curve)
            .expect("instance curve parses")
            .with_dimension(n)
            .expect("dimension");
        out.push(PseudoconvexInstance {
            name,
            surface: parse_hermitian(surface, Some(n)).expect("instance surface parses"),
            curve,
        });
    };
    for m in [2u32, 3] {
        let variants = [
            format!("(t^{m} + t^{})", m + 1),
            format!("(t^{m} + 2*t^{} - i*t^{})", m + 1, m + 2),
        ];
        for (k, f) in variants.iter().enumerate() {
            let g = format!("(2*t^{m} - i*t^{})", m + 1);
            push(
                format!("fold-{m}-{k}"),
                "2*Re(z1) + abs2(z2 + z3^2) + abs2(z3)^3",
                format!("0; -{f}^2; {f}"),
            );
            push(
                format!("product-{m}-{k}"),
                "2*Re(z1) + abs2(z2 + z3*z4) + abs2(z3)^3 + abs2(z4)^3",
                format!("0; -{f}*{g}; {f}; {g}"),
            );
            push(
                format!("weighted-{m}-{k}"),
                "2*Re(z1) + abs2(z2) + abs2(z3)^3 + abs2(z3*z4^2) + abs2(z4)^4",
                format!("0; {}*t^{}; {f}; {g}", k + 1, 2 * m + 1),
            );
        }
    }
    out
}
