//! Holomorphic coordinate changes bringing a defining function to
//!
//! `r = 2Re z₁ + Σ κ_j |z_j|² + Re Σ λ_{jkℓ} z_j z_k z̄_ℓ + (remainder)`
//!
//! with exact coefficients, plus the Levi-form sampler and the structural
//! checks that consume a normal form.

pub mod congruence;
pub mod lemmas;
pub mod levi;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Hermitian, Monomial, Poly};
use crate::scalar::Scalar;
use crate::{GaussianRational, HermitianPolynomial, Polynomial};

pub use congruence::{diagonalize, Congruence};
pub use lemmas::{lemma1_check, lemma2_check, Lemma1Check, Lemma2Check};
pub use levi::{levi_sample, tangent_basis, LeviConfig, LeviSample, LeviVerdict};

/// Holomorphic polynomial change of coordinates `u = forward(z)` with
/// `z = inverse(u)`, both exact through `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloTransform {
    n: usize,
    degree: u32,
    forward: Vec<Polynomial>,
    inverse: Vec<Polynomial>,
}

impl HoloTransform {
    pub fn identity(n: usize, degree: u32) -> Self {
        let vars: Vec<Polynomial> = (0..n).map(|j| Poly::var(n, j)).collect();
        HoloTransform {
            n,
            degree,
            forward: vars.clone(),
            inverse: vars,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// New coordinates as polynomials in the old ones.
    pub fn forward(&self) -> &[Polynomial] {
        &self.forward
    }

    /// Old coordinates as polynomials in the new ones.
    pub fn inverse(&self) -> &[Polynomial] {
        &self.inverse
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(j, p)| *p == Poly::var(self.n, j))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &HoloTransform) -> HoloTransform {
        let d = Some(self.degree.min(next.degree));
        HoloTransform {
            n: self.n,
            degree: self.degree.min(next.degree),
            forward: next
                .forward
                .iter()
                .map(|p| holo_substitute(p, &self.forward, d))
                .collect(),
            inverse: self
                .inverse
                .iter()
                .map(|p| holo_substitute(p, &next.inverse, d))
                .collect(),
        }
    }

    /// Rewrites a function of the old coordinates in the new ones.
    pub fn push(&self, r: &Polynomial) -> Polynomial {
        r.pullback(&self.inverse, Some(self.degree))
    }

    /// Rewrites a function of the new coordinates in the old ones.
    pub fn pull(&self, r: &Polynomial) -> Polynomial {
        r.pullback(&self.forward, Some(self.degree))
    }

    /// Linear part of `forward` is invertible and both maps fix 0.
    fn linear_part(&self) -> Vec<Vec<GaussianRational>> {
        self.forward
            .iter()
            .map(|p| (0..self.n).map(|k| p.coeff(&Monomial::var(self.n, k))).collect())
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.forward
            .iter()
            .chain(&self.inverse)
            .all(|p| p.constant_term().is_zero())
            && congruence::invert(&self.linear_part()).is_some()
    }
}

/// Substitutes holomorphic images for `z` in a holomorphic polynomial.
fn holo_substitute(p: &Polynomial, images: &[Polynomial], max_degree: Option<u32>) -> Polynomial {
    let n = images.first().map_or(p.dim(), Poly::dim);
    let mut all = images.to_vec();
    all.extend((0..p.dim()).map(|j| Poly::conj_var(n, j)));
    p.substitute(&all, max_degree)
}

fn gradient_at_origin(r: &Polynomial) -> Vec<GaussianRational> {
    let n = r.dim();
    (0..n).map(|j| r.coeff(&Monomial::var(n, j))).collect()
}

/// Index of the largest-modulus entry, ties to the smallest index.
fn pivot_index(g: &[GaussianRational]) -> Option<usize> {
    let mut best: Option<(usize, BigRational)> = None;
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

/// `w₁ = Σ g_j z_j`, `w' = (z_j)_{j≠m}`, so that `r = 2Re w₁ + O(2)`.
fn linear_normalization(r: &Polynomial, degree: u32) -> Result<HoloTransform> {
    let n = r.dim();
    let g = gradient_at_origin(r);
    let m = pivot_index(&g).ok_or(Error::DegenerateGradient)?;
    let others: Vec<usize> = (0..n).filter(|&j| j != m).collect();
    let mut forward = vec![Poly::zero(n); n];
    for (j, gj) in g.iter().enumerate() {
        forward[0].add_term(Monomial::var(n, j), gj.clone());
    }
    for (slot, &j) in others.iter().enumerate() {
        forward[slot + 1] = Poly::var(n, j);
    }
    let mut inverse = vec![Poly::zero(n); n];
    let inv_gm = GaussianRational::one() / g[m].clone();
    inverse[m].add_term(Monomial::var(n, 0), inv_gm.clone());
    for (slot, &j) in others.iter().enumerate() {
        inverse[j] = Poly::var(n, slot + 1);
        inverse[m].add_term(Monomial::var(n, slot + 1), -(g[j].clone() * inv_gm.clone()));
    }
    Ok(HoloTransform {
        n,
        degree,
        forward,
        inverse,
    })
}

/// Pure holomorphic part of degree exactly `k`.
fn pure_part(r: &Polynomial, k: u32) -> Polynomial {
    r.filter(|m| m.antiholomorphic_degree() == 0 && m.holomorphic_degree() == k)
}

/// Coordinates with `r_{z₁}(0) = 1`, `r_{z_j}(0) = 0` for `j ≥ 2` and no pure
/// (anti)holomorphic terms of degree `2..=d`: a linear normalization, then
/// `z₁ ↦ z₁ + P_k(z)` absorbing the degree-`k` pure part for `k = 2..=d`.
/// Returns the transform and `r` rewritten in the new coordinates, truncated
/// at degree `d`.
pub fn good_coords(r: &HermitianPolynomial, d: u32) -> Result<(HoloTransform, HermitianPolynomial)> {
    if d < 2 {
        return Err(Error::InvalidArgument("degree must be at least 2".into()));
    }
    let n = r.dim();
    let mut transform = linear_normalization(r.as_poly(), d)?;
    if transform.is_identity() {
        transform = HoloTransform::identity(n, d);
    }
    let mut rho = transform.push(r.as_poly());
    for k in 2..=d {
        let p = pure_part(&rho, k);
        if p.is_zero() {
            continue;
        }
        // new₁ = old₁ + P(old); invert by the fixed point old₁ = new₁ − P(old).
        let mut forward: Vec<Polynomial> = (0..n).map(|j| Poly::var(n, j)).collect();
        forward[0] = &forward[0] + &p;
        let mut old = forward.clone();
        old[0] = Poly::var(n, 0);
        for _ in 0..d {
            let next = &Poly::var(n, 0) - &holo_substitute(&p, &old, Some(d));
            if next == old[0] {
                break;
            }
            old[0] = next;
        }
        let step = HoloTransform {
            n,
            degree: d,
            forward,
            inverse: old,
        };
        rho = step.push(&rho);
        transform = transform.then(&step);
    }
    let rho = Hermitian::new(rho.truncate(d))?;
    Ok((transform, rho))
}

/// Tri-state pseudoconvexity verdict carried by a normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PscStatus {
    YesBySampling,
    ViolationFound,
    Unknown,
}

impl std::fmt::Display for PscStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PscStatus::YesBySampling => "yes-by-sampling",
            PscStatus::ViolationFound => "violation-found",
            PscStatus::Unknown => "unknown",
        })
    }
}

/// Index triple `(j, k, ℓ)`, one-based, with `j ≤ k`.
pub type Triple = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    /// `κ_2, …, κ_n`.
    pub kappa: Vec<BigRational>,
    /// `λ_{jkℓ}` for `j ≤ k`; the entry for `(k, j, ℓ)` is the same number.
    pub lambda: BTreeMap<Triple, GaussianRational>,
    /// Everything past the cubic model, in the final coordinates.
    pub remainder: HermitianPolynomial,
    /// The remainder in graph variables: slot `z₁` holds `x = Re z₁`, slot
    /// `z̄₁` holds `y = Im z₁`.
    pub graph_remainder: Polynomial,
    /// Real unit `h` with `r ∘ transform⁻¹ = h · (normal form)` through `degree`.
    pub multiplier: Polynomial,
    pub transform: HoloTransform,
    pub psc: PscStatus,
    pub degree: u32,
}

impl NormalForm {
    pub fn dim(&self) -> usize {
        self.transform.dim()
    }

    /// `κ_j` for one-based `j ≥ 2`.
    pub fn kappa(&self, j: usize) -> Option<&BigRational> {
        j.checked_sub(2).and_then(|i| self.kappa.get(i))
    }

    /// `λ_{jkℓ}`, symmetric in `j, k`.
    pub fn lambda(&self, j: usize, k: usize, l: usize) -> GaussianRational {
        let key = (j.min(k), j.max(k), l);
        self.lambda.get(&key).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// `2Re z₁ + Σ κ_j|z_j|² + Re Σ λ_{jkℓ} z_j z_k z̄_ℓ + remainder`.
    pub fn reassemble(&self) -> HermitianPolynomial {
        let n = self.dim();
        let mut p = Poly::var(n, 0);
        p.add_term(Monomial::conj_var(n, 0), GaussianRational::one());
        for (i, k) in self.kappa.iter().enumerate() {
            let j = i + 1;
            p.add_term(
                Monomial::var(n, j).mul(&Monomial::conj_var(n, j)),
                GaussianRational::from_real(k.clone()),
            );
        }
        p = &p + &cubic_block(n, &self.lambda);
        p = &p + self.remainder.as_poly();
        Hermitian::new(p).expect("normal form is real-valued by construction")
    }

    /// `(h · reassembly) ∘ forward`, which equals the input through `degree`.
    pub fn pullback(&self) -> Polynomial {
        let product = self
            .multiplier
            .mul_truncated(self.reassemble().as_poly(), Some(self.degree));
        self.transform.pull(&product)
    }

    /// Every graph remainder term carries a factor of `y = Im z₁` or has
    /// `(z', z̄')`-degree at least 4, and none involves `x = Re z₁`.
    pub fn remainder_admissible(&self) -> bool {
        self.graph_remainder.terms().all(|(m, _)| {
            let tangential = m.degree() - m.z[0] - m.zb[0];
            m.z[0] == 0 && (m.zb[0] >= 1 || tangential >= 4)
        })
    }

    pub fn levi_signature(&self) -> (usize, usize, usize) {
        let pos = self.kappa.iter().filter(|k| k.is_positive()).count();
        let neg = self.kappa.iter().filter(|k| k.is_negative()).count();
        (pos, neg, self.kappa.len() - pos - neg)
    }

    /// Upgrades an `Unknown` status with a sampling verdict.
    pub fn certify(&mut self, sample: &LeviSample) {
        if self.psc == PscStatus::Unknown {
            self.psc = match sample.verdict {
                LeviVerdict::Violation => PscStatus::ViolationFound,
                LeviVerdict::NoViolationFound => PscStatus::YesBySampling,
            };
        }
    }
}

/// `Re Σ_{j,k,ℓ} λ_{jkℓ} z_j z_k z̄_ℓ` over all ordered `(j, k)`.
fn cubic_block(n: usize, lambda: &BTreeMap<Triple, GaussianRational>) -> Polynomial {
    let half = GaussianRational::from_ratio(1, 2);
    let mut p = Poly::zero(n);
    for (&(j, k, l), c) in lambda {
        let weight = if j == k { half.clone() } else { GaussianRational::one() };
        let m = Monomial::var(n, j - 1)
            .mul(&Monomial::var(n, k - 1))
            .mul(&Monomial::conj_var(n, l - 1));
        p.add_term(m.conj(), c.conj() * weight.clone());
        p.add_term(m, c.clone() * weight);
    }
    p
}

/// Graph variables: `w₁ ↦ x + iy`, `w̄₁ ↦ x − iy` with `x` in slot `z₁` and
/// `y` in slot `z̄₁`.
fn to_graph(p: &Polynomial, d: u32) -> Polynomial {
    let n = p.dim();
    let i = GaussianRational::imag_unit();
    let mut images: Vec<Polynomial> = (0..n).map(|j| Poly::var(n, j)).collect();
    images.extend((0..n).map(|j| Poly::conj_var(n, j)));
    let y = Poly::conj_var(n, 0);
    images[0] = &Poly::var(n, 0) + &y.scale(&i);
    images[n] = &Poly::var(n, 0) - &y.scale(&i);
    p.substitute(&images, Some(d))
}

/// Back from graph variables: `x = (z₁ + z̄₁)/2`, `y = (z₁ − z̄₁)/(2i)`.
fn from_graph(p: &Polynomial) -> Polynomial {
    let n = p.dim();
    let half = GaussianRational::from_ratio(1, 2);
    let minus_half_i = GaussianRational::new(BigRational::zero(), -BigRational::new(1.into(), 2.into()));
    let mut images: Vec<Polynomial> = (0..n).map(|j| Poly::var(n, j)).collect();
    images.extend((0..n).map(|j| Poly::conj_var(n, j)));
    let z1 = Poly::var(n, 0);
    let zb1 = Poly::conj_var(n, 0);
    images[0] = (&z1 + &zb1).scale(&half);
    images[n] = (&z1 - &zb1).scale(&minus_half_i);
    p.substitute(&images, None)
}

/// Replaces the `x` slot by `value`.
fn substitute_x(p: &Polynomial, value: &Polynomial, d: u32) -> Polynomial {
    let n = p.dim();
    let mut images: Vec<Polynomial> = (0..n).map(|j| Poly::var(n, j)).collect();
    images.extend((0..n).map(|j| Poly::conj_var(n, j)));
    images[0] = value.clone();
    p.substitute(&images, Some(d))
}

/// Coefficients of `x^k` in a graph polynomial.
fn x_coefficients(p: &Polynomial) -> Vec<Polynomial> {
    let n = p.dim();
    let mut out: Vec<Polynomial> = Vec::new();
    for (m, c) in p.terms() {
        let k = m.z[0] as usize;
        while out.len() <= k {
            out.push(Poly::zero(n));
        }
        let mut rest = m.clone();
        rest.z[0] = 0;
        out[k].add_term(rest, c.clone());
    }
    out
}

/// Exact normal form through degree `d ≥ 2`: good coordinates, a formal
/// implicit solve of `ρ(x, y, w') = 0` for `x`, then an exact congruence
/// diagonalizing the Hermitian quadratic block in `w'`.
pub fn to_normal_form(r: &HermitianPolynomial, d: u32) -> Result<NormalForm> {
    let n = r.dim();
    let (good, rho) = good_coords(r, d)?;
    let rho_g = to_graph(rho.as_poly(), d);
    let two_x = Poly::var(n, 0).scale(&GaussianRational::from_int(2));
    let g = &rho_g - &two_x;
    let minus_half = GaussianRational::from_ratio(-1, 2);
    let mut phi = Poly::zero(n);
    for _ in 0..d {
        let next = substitute_x(&g, &phi, d).scale(&minus_half);
        if next == phi {
            break;
        }
        phi = next;
    }
    // ρ − ρ|_{x=φ} = (x − φ) Σ_k ρ_k Σ_i x^i φ^{k−1−i}, and 2(x − φ) is the normal form.
    let coeffs = x_coefficients(&rho_g);
    let x = Poly::var(n, 0);
    let mut h = Poly::zero(n);
    for (k, rk) in coeffs.iter().enumerate().skip(1) {
        let mut inner = Poly::zero(n);
        for i in 0..k {
            let term = x
                .pow_truncated(i as u32, Some(d))
                .mul_truncated(&phi.pow_truncated((k - 1 - i) as u32, Some(d)), Some(d));
            inner = &inner + &term;
        }
        h = &h + &rk.mul_truncated(&inner, Some(d));
    }
    h = h
        .scale(&GaussianRational::from_ratio(1, 2))
        .truncate(d.saturating_sub(1));
    let f = phi.scale(&GaussianRational::from_int(-2));

    let k_mat: Vec<Vec<GaussianRational>> = (1..n)
        .map(|j| {
            (1..n)
                .map(|k| f.coeff(&Monomial::var(n, j).mul(&Monomial::conj_var(n, k))))
                .collect()
        })
        .collect();
    let cg = diagonalize(&k_mat);
    let a: Vec<Vec<GaussianRational>> = cg
        .transform
        .iter()
        .map(|row| row.iter().map(Scalar::conj).collect())
        .collect();
    let a_inv = congruence::invert(&a).ok_or_else(|| Error::InvalidArgument("singular congruence".into()))?;
    let linear = |mat: &Vec<Vec<GaussianRational>>| -> Vec<Polynomial> {
        let mut maps = vec![Poly::var(n, 0)];
        for row in mat {
            let mut p = Poly::zero(n);
            for (k, c) in row.iter().enumerate() {
                p.add_term(Monomial::var(n, k + 1), c.clone());
            }
            maps.push(p);
        }
        maps
    };
    let rotation = HoloTransform {
        n,
        degree: d,
        forward: linear(&a_inv),
        inverse: linear(&a),
    };
    let transform = if rotation.is_identity() {
        good
    } else {
        good.then(&rotation)
    };

    // The rotation leaves x and y alone, so it acts on graph polynomials as on z'.
    let mut images = rotation.inverse.clone();
    images[0] = Poly::var(n, 0);
    let mut conj_images: Vec<Polynomial> = rotation.inverse.iter().map(Poly::conj).collect();
    conj_images[0] = Poly::conj_var(n, 0);
    images.extend(conj_images);
    let f_u = f.substitute(&images, Some(d));
    let h_u = h.substitute(&images, Some(d));

    let kappa: Vec<BigRational> = cg.diagonal.clone();
    let mut lambda = BTreeMap::new();
    for (m, c) in f_u.terms() {
        if m.z[0] != 0 || m.zb[0] != 0 || m.holomorphic_degree() != 2 || m.antiholomorphic_degree() != 1 {
            continue;
        }
        let mut idx: Vec<usize> = Vec::new();
        for (j, &e) in m.z.iter().enumerate() {
            idx.extend(std::iter::repeat_n(j + 1, e as usize));
        }
        let l = m.zb.iter().position(|&e| e == 1).expect("one antiholomorphic factor") + 1;
        let value = if idx[0] == idx[1] {
            c.clone() * GaussianRational::from_int(2)
        } else {
            c.clone()
        };
        lambda.insert((idx[0], idx[1], l), value);
    }
    let mut model = Poly::zero(n);
    for (i, k) in kappa.iter().enumerate() {
        let j = i + 1;
        model.add_term(
            Monomial::var(n, j).mul(&Monomial::conj_var(n, j)),
            GaussianRational::from_real(k.clone()),
        );
    }
    model = &model + &cubic_block(n, &lambda);
    let graph_remainder = &f_u - &model;
    let remainder = Hermitian::new(from_graph(&graph_remainder))?;
    let multiplier = from_graph(&h_u);
    let psc = if kappa.iter().any(|k| k.is_negative()) {
        PscStatus::ViolationFound
    } else {
        PscStatus::Unknown
    };
    Ok(NormalForm {
        kappa,
        lambda,
        remainder,
        graph_remainder,
        multiplier,
        transform,
        psc,
        degree: d,
    })
}
