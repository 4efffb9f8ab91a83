//! Chain-rule expansion of `D^{a,b}[r∘γ]` for holomorphic `γ`.
//!
//! `D^{a,b}[r∘γ]` is a sum of terms `∇^{p,q}[r](∂^{j_1}γ, …, ∂^{j_p}γ,
//! ∂̄^{k_1}γ̄, …, ∂̄^{k_q}γ̄)`: a `(p, q)` mixed derivative tensor of `r`
//! contracted against curve derivatives. Because mixed partials of `r`
//! commute, a term is determined by the two multisets of slot orders, and
//! terms with equal multisets are merged. Coefficients are produced by
//! formal differentiation, never from closed formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::poly::{Monomial, Poly};
use crate::scalar::{factorial, RealScalar, Scalar};

/// Slot orders of one `∇`-term, each list sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotShape {
    pub holomorphic: Vec<u32>,
    pub antiholomorphic: Vec<u32>,
}

impl SlotShape {
    pub fn new(mut holomorphic: Vec<u32>, mut antiholomorphic: Vec<u32>) -> Self {
        holomorphic.sort_unstable_by(|a, b| b.cmp(a));
        antiholomorphic.sort_unstable_by(|a, b| b.cmp(a));
        SlotShape {
            holomorphic,
            antiholomorphic,
        }
    }

    /// The smallest slot order, if any slot exists.
    pub fn min_slot(&self) -> Option<u32> {
        self.holomorphic.iter().chain(&self.antiholomorphic).copied().min()
    }

    /// Member of the multiplicity-vanishing class for multiplicity `m`.
    pub fn is_multiplicity_vanishing(&self, m: u32) -> bool {
        self.min_slot().is_some_and(|s| s < m)
    }

    pub fn swapped(&self) -> Self {
        SlotShape {
            holomorphic: self.antiholomorphic.clone(),
            antiholomorphic: self.holomorphic.clone(),
        }
    }
}

impl fmt::Display for SlotShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∇^{{{},{}}}[r](", self.holomorphic.len(), self.antiholomorphic.len())?;
        let parts: Vec<String> = self
            .holomorphic
            .iter()
            .map(|j| format!("∂^{j}γ"))
            .chain(self.antiholomorphic.iter().map(|k| format!("∂̄^{k}γ̄")))
            .collect();
        write!(f, "{})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTerm {
    pub shape: SlotShape,
    pub coefficient: BigRational,
}

impl fmt::Display for DerivativeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficient.is_one() {
            write!(f, "{}", self.shape)
        } else {
            write!(f, "{} {}", self.coefficient, self.shape)
        }
    }
}

/// `D^{a,b}[r∘γ]` as a combination of `∇`-terms.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalExpansion {
    a: u32,
    b: u32,
    terms: BTreeMap<SlotShape, BigRational>,
}

impl FormalExpansion {
    fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(SlotShape::new(vec![], vec![]), BigRational::one());
        FormalExpansion { a: 0, b: 0, terms }
    }

    pub fn orders(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = DerivativeTerm> + '_ {
        self.terms.iter().map(|(s, c)| DerivativeTerm {
            shape: s.clone(),
            coefficient: c.clone(),
        })
    }

    pub fn coefficient(&self, shape: &SlotShape) -> BigRational {
        self.terms.get(shape).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn shapes(&self) -> impl Iterator<Item = &SlotShape> {
        self.terms.keys()
    }

    /// One more `∂/∂t` (or `∂/∂t̄` when `conjugate`): the derivative either
    /// lands on `r`, opening a new first-order slot, or raises one existing
    /// slot on the matching side by one.
    fn differentiate(&self, conjugate: bool) -> Self {
        let mut out: BTreeMap<SlotShape, BigRational> = BTreeMap::new();
        let mut push = |shape: SlotShape, c: BigRational| {
            let e = out.entry(shape).or_insert_with(BigRational::zero);
            *e += c;
        };
        for (shape, c) in &self.terms {
            let (side, other) = if conjugate {
                (&shape.antiholomorphic, &shape.holomorphic)
            } else {
                (&shape.holomorphic, &shape.antiholomorphic)
            };
            let assemble = |new_side: Vec<u32>| {
                if conjugate {
                    SlotShape::new(other.clone(), new_side)
                } else {
                    SlotShape::new(new_side, other.clone())
                }
            };
            let mut opened = side.clone();
            opened.push(1);
            push(assemble(opened), c.clone());
            for idx in 0..side.len() {
                let mut raised = side.clone();
                raised[idx] += 1;
                push(assemble(raised), c.clone());
            }
        }
        out.retain(|_, c| !c.is_zero());
        FormalExpansion {
            a: self.a + u32::from(!conjugate),
            b: self.b + u32::from(conjugate),
            terms: out,
        }
    }

    /// Drops every term with a slot of order below `m`.
    pub fn reduce_mod_mv(&self, m: u32) -> Self {
        FormalExpansion {
            a: self.a,
            b: self.b,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| !s.is_multiplicity_vanishing(m))
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of all terms evaluated at `t = 0`.
    pub fn evaluate<S: Scalar>(&self, r: &Poly<S>, curve: &Jet<S>) -> Result<S> {
        let mut acc = S::zero();
        for term in self.terms() {
            acc = acc + evaluate_term(&term, r, curve)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for FormalExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^{{{},{}}}[r∘γ] = ", self.a, self.b)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), FormalExpansion>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FormalExpansion>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Full expansion of `D^{a,b}[r∘γ]`, `a + b ≥ 1`.
pub fn expand(a: u32, b: u32) -> Result<FormalExpansion> {
    if a + b == 0 {
        return Err(Error::InvalidArgument("expansion needs a + b ≥ 1".into()));
    }
    Ok(expand_cached(a, b))
}

fn expand_cached(a: u32, b: u32) -> FormalExpansion {
    if a == 0 && b == 0 {
        return FormalExpansion::identity();
    }
    if let Some(hit) = cache().lock().expect("expansion cache poisoned").get(&(a, b)) {
        return hit.clone();
    }
    // t and t̄ derivatives commute; build the t-derivatives first.
    let result = if b > 0 {
        expand_cached(a, b - 1).differentiate(true)
    } else {
        expand_cached(a - 1, 0).differentiate(false)
    };
    cache()
        .lock()
        .expect("expansion cache poisoned")
        .entry((a, b))
        .or_insert_with(|| result.clone());
    result
}

/// Contracts the `r`-derivative tensor at `γ(0) = 0` against the curve
/// derivatives named by the term's slots, times the term coefficient.
pub fn evaluate_term<S: Scalar>(term: &DerivativeTerm, r: &Poly<S>, curve: &Jet<S>) -> Result<S> {
    let n = r.dim();
    if curve.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: curve.dim(),
        });
    }
    let mut vectors: Vec<Vec<S>> = Vec::new();
    for &j in &term.shape.holomorphic {
        vectors.push(curve.derivative_at_zero(j)?);
    }
    for &k in &term.shape.antiholomorphic {
        vectors.push(curve.derivative_at_zero(k)?.iter().map(Scalar::conj).collect());
    }
    let p = term.shape.holomorphic.len();
    if vectors.iter().any(|v| v.iter().all(|x| x.is_zero())) {
        return Ok(S::zero());
    }
    let slots = vectors.len();
    let mut total = S::zero();
    let mut idx = vec![0usize; slots];
    'outer: loop {
        let mut m = Monomial::one(n);
        let mut weight = S::one();
        for (s, &j) in idx.iter().enumerate() {
            if s < p {
                m.z[j] += 1;
            } else {
                m.zb[j] += 1;
            }
            weight = weight * vectors[s][j].clone();
        }
        if !weight.is_zero() {
            let c = r.coeff(&m);
            if !c.is_zero() {
                total = total + c * m.factorial_weight::<S>() * weight;
            }
        }
        for s in (0..slots).rev() {
            idx[s] += 1;
            if idx[s] < n {
                continue 'outer;
            }
            idx[s] = 0;
        }
        break;
    }
    let coeff = S::from_real(S::Real::from_rational(&term.coefficient));
    Ok(coeff * total)
}

/// Named combinatorial constants of the `D^{aM,bM}` expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstantKind {
    E0,
    F0,
    F1,
    F2,
    G,
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstantKind::E0 => "E0",
            ConstantKind::F0 => "F0",
            ConstantKind::F1 => "F1",
            ConstantKind::F2 => "F2",
            ConstantKind::G => "G",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ConstantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E0" => Ok(ConstantKind::E0),
            "F0" => Ok(ConstantKind::F0),
            "F1" => Ok(ConstantKind::F1),
            "F2" => Ok(ConstantKind::F2),
            "G" => Ok(ConstantKind::G),
            other => Err(Error::InvalidArgument(format!("unknown constant kind `{other}`"))),
        }
    }
}

/// The printed closed form of a constant next to the coefficient the
/// expansion actually produces for the same term.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantComparison {
    pub kind: ConstantKind,
    pub multiplicity: u32,
    pub index: u32,
    /// Orders `(a, b)` of the expanded derivative `D^{aM,bM}`.
    pub derivative: (u32, u32),
    pub shape: SlotShape,
    pub paper_value: BigRational,
    pub oracle_value: BigRational,
}

impl ConstantComparison {
    pub fn agrees(&self) -> bool {
        self.paper_value == self.oracle_value
    }

    /// `oracle / paper`, when the printed value is nonzero.
    pub fn ratio(&self) -> Option<BigRational> {
        (!self.paper_value.is_zero()).then(|| &self.oracle_value / &self.paper_value)
    }

    /// Whether the term's slots are all equal on each side, where the
    /// multiset and ordered-slot conventions coincide.
    pub fn identical_slots(&self) -> bool {
        let same = |v: &[u32]| v.windows(2).all(|w| w[0] == w[1]);
        same(&self.shape.holomorphic) && same(&self.shape.antiholomorphic)
    }
}

fn ratio_of(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Closed-form value and expansion coefficient of a named constant.
/// `index` is only meaningful for [`ConstantKind::G`], where `0 ≤ index ≤ M`.
pub fn constants(kind: ConstantKind, m: u32, index: u32) -> Result<ConstantComparison> {
    if m == 0 {
        return Err(Error::InvalidArgument("multiplicity must be positive".into()));
    }
    if kind != ConstantKind::G && index != 0 {
        return Err(Error::InvalidArgument(format!("{kind} takes no index")));
    }
    if index > m {
        return Err(Error::InvalidArgument(format!("G index {index} exceeds M = {m}")));
    }
    let f = |k: u32| factorial(k);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let central = &half * ratio_of(f(2 * m), f(m) * f(m));
    let (derivative, shape, paper) = match kind {
        ConstantKind::E0 => ((2, 1), SlotShape::new(vec![m, m], vec![m]), central),
        ConstantKind::F0 => ((2, 2), SlotShape::new(vec![m, m], vec![2 * m]), central),
        ConstantKind::F1 => ((2, 2), SlotShape::new(vec![2 * m], vec![m, m]), central),
        ConstantKind::F2 => ((2, 2), SlotShape::new(vec![m, m], vec![m, m]), &central * &central),
        ConstantKind::G if index == m => (
            (3, 1),
            SlotShape::new(vec![m, m, m], vec![m]),
            BigRational::new(BigInt::one(), BigInt::from(6)) * ratio_of(f(3 * m), f(m) * f(m) * f(m)),
        ),
        ConstantKind::G => {
            let (first, second) = if index == 0 {
                (2 * m, m)
            } else {
                (m + index, 2 * m - index)
            };
            (
                (3, 1),
                SlotShape::new(vec![first, second], vec![m]),
                &half * ratio_of(f(3 * m), f(first) * f(second)),
            )
        }
    };
    let expansion = expand(derivative.0 * m, derivative.1 * m)?.reduce_mod_mv(m);
    let oracle = expansion.coefficient(&shape);
    Ok(ConstantComparison {
        kind,
        multiplicity: m,
        index,
        derivative,
        shape,
        paper_value: paper,
        oracle_value: oracle,
    })
}

/// Every named constant for multiplicity `m`, in a fixed order.
pub fn all_constants(m: u32) -> Result<Vec<ConstantComparison>> {
    let mut out = Vec::new();
    for kind in [ConstantKind::E0, ConstantKind::F0, ConstantKind::F1, ConstantKind::F2] {
        out.push(constants(kind, m, 0)?);
    }
    for i in 0..=m {
        out.push(constants(ConstantKind::G, m, i)?);
    }
    Ok(out)
}
