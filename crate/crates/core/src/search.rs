//! Bounded exploration of curve space for lower bounds on singular and
//! regular type, plus seeded random regular probes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::contact::{compose, ContactValue};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::Scalar;
use crate::series::{Order, Trace};
use crate::{CurveJet, GaussianRational, Polynomial};

/// Smallest truncation tried before widening to the configured one.
const FIRST_PASS: u32 = 8;

/// Vanishing order of `r∘γ`, composing cheaply first and widening the
/// truncation only while every known coefficient is zero. Coefficients up to
/// any truncation are exact, so this agrees with a single compose at `truncation`.
pub fn vanishing_order(r: &Polynomial, curve: &CurveJet, truncation: u32) -> Result<(Order, Trace<GaussianRational>)> {
    let mut t = truncation.min(FIRST_PASS);
    loop {
        let trace = compose(r, curve, t)?;
        let order = trace.min_order();
        if order.is_finite() || t == truncation {
            return Ok((order, trace));
        }
        t = (2 * t).min(truncation);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub max_mult: u32,
    pub jet_len: u32,
    pub coefficients: Vec<GaussianRational>,
    pub truncation: u32,
    /// Random regular probes per stratum.
    pub probes: u32,
    pub seed: u64,
    /// Largest enumeration size accepted.
    pub budget: u128,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Force `γ¹ ≡ 0` in the probes.
    pub tangent_only: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_mult: 2,
            jet_len: 2,
            coefficients: vec![GaussianRational::zero(), GaussianRational::from_int(1)],
            truncation: 40,
            probes: 200,
            seed: 0,
            budget: 1_000_000,
            threads: 0,
            tangent_only: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub curve: CurveJet,
    pub nu_trace: Order,
    pub contact: ContactValue,
}

impl Witness {
    fn new(curve: CurveJet, nu_trace: Order) -> Self {
        let ratio = BigRational::new(BigInt::from(nu_trace.value()), BigInt::from(curve.multiplicity()));
        let contact = if nu_trace.is_finite() {
            ContactValue::Exact(ratio)
        } else {
            ContactValue::AtLeast(ratio)
        };
        Witness {
            curve,
            nu_trace,
            contact,
        }
    }
}

type EntryKey = ((u32, usize), (BigRational, BigRational));

/// Nonzero coefficients as `((i, q), value)` in `i`-major order.
fn tie_key(curve: &CurveJet) -> (u32, Vec<EntryKey>) {
    let mut entries = Vec::new();
    for i in 0..=curve.jet_length() {
        for q in 0..curve.dim() {
            let c = curve.coeff(q, i).expect("within jet");
            if !c.is_zero() {
                entries.push(((i, q), (c.re.clone(), c.im.clone())));
            }
        }
    }
    (curve.multiplicity(), entries)
}

/// `Greater` when `a` is the better witness: larger value, a lower bound
/// before an exact value, then the smaller tie key.
fn compare_by<R: Ord>(a: &Witness, b: &Witness, rank: impl Fn(&Witness) -> R) -> Ordering {
    rank(a)
        .cmp(&rank(b))
        .then_with(|| tie_key(&b.curve).cmp(&tie_key(&a.curve)))
}

fn better_singular(a: Option<Witness>, b: Option<Witness>) -> Option<Witness> {
    pick(a, b, |a, b| compare_by(a, b, |w| w.contact.rank()))
}

fn better_regular(a: Option<Witness>, b: Option<Witness>) -> Option<Witness> {
    pick(a, b, |a, b| compare_by(a, b, |w| w.nu_trace.rank()))
}

fn pick(a: Option<Witness>, b: Option<Witness>, cmp: impl Fn(&Witness, &Witness) -> Ordering) -> Option<Witness> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if cmp(&a, &b) == Ordering::Less { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumSummary {
    /// Zero-based tangent components given order exactly 1.
    pub order_one: Vec<usize>,
    pub probes: u32,
    pub max_nu: Order,
    /// Probes with `D^{3,1}[r∘γ](0) ≠ 0`.
    pub nonzero_d31: u32,
    pub best: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSummary {
    pub seed: u64,
    pub probes_per_stratum: u32,
    pub tangent_only: bool,
    pub max_nu: Option<Order>,
    pub strata: Vec<StratumSummary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchCaps {
    pub truncation: u32,
    pub max_mult: u32,
    pub jet_len: u32,
    pub coefficient_count: usize,
    pub space_size: u128,
    pub enumerated: u64,
    pub budget: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeEstimate {
    pub singular_lower: Option<Witness>,
    pub regular_lower: Option<Witness>,
    pub regular_probe_max: ProbeSummary,
    pub caps: SearchCaps,
}

fn space_size(n: usize, config: &SearchConfig) -> u128 {
    let slots = (n as u32).saturating_mul(config.jet_len + 1);
    let per = (config.coefficients.len() as u128)
        .checked_pow(slots)
        .unwrap_or(u128::MAX);
    per.saturating_mul(config.max_mult as u128)
}

/// Decodes enumeration index `idx` into a coefficient matrix `[q][i]`.
fn decode(mut idx: u64, n: usize, len: usize, set: &[GaussianRational]) -> Vec<Vec<GaussianRational>> {
    let base = set.len() as u64;
    let mut rows = vec![Vec::with_capacity(len); n];
    for _ in 0..len {
        for row in rows.iter_mut() {
            row.push(set[(idx % base) as usize].clone());
            idx /= base;
        }
    }
    rows
}

/// Keeps one representative per gauge class: the first nonzero entry of
/// `c₀` must equal the first nonzero element of the coefficient set.
fn is_canonical(rows: &[Vec<GaussianRational>], canonical: &GaussianRational) -> bool {
    rows.iter().map(|r| &r[0]).find(|c| !c.is_zero()) == Some(canonical)
}

fn enumerate(r: &Polynomial, config: &SearchConfig) -> Result<(Option<Witness>, Option<Witness>, u64)> {
    let n = r.dim();
    let len = config.jet_len as usize + 1;
    let set = &config.coefficients;
    let Some(canonical) = set.iter().find(|c| !c.is_zero()).cloned() else {
        return Ok((None, None, 0));
    };
    let per_mult = (set.len() as u64).pow((n * len) as u32);
    let mut singular = None;
    let mut regular = None;
    let mut count = 0u64;
    for m in 1..=config.max_mult {
        let results: Vec<Result<Option<Witness>>> = (0..per_mult)
            .into_par_iter()
            .map(|idx| {
                let rows = decode(idx, n, len, set);
                if !is_canonical(&rows, &canonical) {
                    return Ok(None);
                }
                let curve = Jet::new(m, rows, true)?;
                let (order, _) = vanishing_order(r, &curve, config.truncation)?;
                Ok(Some(Witness::new(curve, order)))
            })
            .collect();
        for res in results {
            if let Some(w) = res? {
                count += 1;
                if m == 1 {
                    regular = better_regular(regular, Some(w.clone()));
                }
                singular = better_singular(singular, Some(w));
            }
        }
    }
    Ok((singular, regular, count))
}

const PROBE_BOX: i64 = 3;

fn box_value(rng: &mut ChaCha8Rng, nonzero: bool) -> GaussianRational {
    loop {
        let a = rng.random_range(-PROBE_BOX..=PROBE_BOX);
        let b = rng.random_range(-PROBE_BOX..=PROBE_BOX);
        if !nonzero || a != 0 || b != 0 {
            return GaussianRational::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        }
    }
}

/// Nonempty subsets of the tangent components `1..n` (zero-based), as the
/// components that get order exactly 1. Ordered by size, largest first,
/// then lexicographically.
fn strata(n: usize) -> Vec<Vec<usize>> {
    let tangent: Vec<usize> = (1..n).collect();
    let mut out: Vec<Vec<usize>> = (1u64..(1 << tangent.len()))
        .map(|mask| {
            tangent
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &q)| q)
                .collect()
        })
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

/// The `index`-th probe curve of a stratum. Components in `order_one` get a
/// nonzero `t` coefficient; the others start at `t²` (component 1 is zero
/// when `tangent_only`). Degrees run up to `1 + jet_len`.
pub fn probe_curve(
    n: usize,
    order_one: &[usize],
    jet_len: u32,
    tangent_only: bool,
    seed: u64,
    stream: u64,
) -> CurveJet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let top = 1 + jet_len as usize;
    let components: Vec<Vec<GaussianRational>> = (0..n)
        .map(|q| {
            let mut c = vec![GaussianRational::zero(); top + 1];
            if q == 0 && tangent_only {
                return c;
            }
            c[1] = if order_one.contains(&q) {
                box_value(&mut rng, true)
            } else {
                GaussianRational::zero()
            };
            for v in c.iter_mut().skip(2) {
                *v = box_value(&mut rng, false);
            }
            c
        })
        .collect();
    Jet::from_polynomials(&components).expect("a stratum component has order 1")
}

fn run_probes(r: &Polynomial, config: &SearchConfig) -> Result<ProbeSummary> {
    let n = r.dim();
    let mut out = Vec::new();
    let probes = config.probes as u64;
    for (s, order_one) in strata(n).into_iter().enumerate() {
        let results: Vec<Result<(Witness, bool)>> = (0..probes)
            .into_par_iter()
            .map(|k| {
                let stream = s as u64 * probes + k;
                let curve = probe_curve(n, &order_one, config.jet_len, config.tangent_only, config.seed, stream);
                let (order, trace) = vanishing_order(r, &curve, config.truncation.max(4))?;
                let d31 = trace.coeff(3, 1).is_some_and(|c| !c.is_zero());
                Ok((Witness::new(curve, order), d31))
            })
            .collect();
        let mut best = None;
        let mut nonzero_d31 = 0;
        for res in results {
            let (w, d31) = res?;
            nonzero_d31 += u32::from(d31);
            best = better_regular(best, Some(w));
        }
        out.push(StratumSummary {
            order_one,
            probes: config.probes,
            max_nu: best.as_ref().map_or(Order::Finite(0), |w| w.nu_trace),
            nonzero_d31,
            best,
        });
    }
    let max_nu = out
        .iter()
        .filter(|s| s.best.is_some())
        .map(|s| s.max_nu)
        .max_by_key(|o| o.rank());
    Ok(ProbeSummary {
        seed: config.seed,
        probes_per_stratum: config.probes,
        tangent_only: config.tangent_only,
        max_nu,
        strata: out,
    })
}

/// Exhaustive enumeration over the configured curve space followed by the
/// random regular probes. Results depend only on `r` and `config`, never on
/// the worker count.
pub fn search_type(r: &Polynomial, config: &SearchConfig) -> Result<TypeEstimate> {
    if config.max_mult == 0 {
        return Err(Error::InvalidArgument("max multiplicity must be positive".into()));
    }
    if config.truncation < 4 * config.max_mult {
        return Err(Error::InvalidArgument(format!(
            "truncation {} is below 4·M_max = {}",
            config.truncation,
            4 * config.max_mult
        )));
    }
    let n = r.dim();
    let size = space_size(n, config);
    if size > config.budget || size > u64::MAX as u128 {
        return Err(Error::SearchBudget {
            size,
            budget: config.budget,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| {
        let (singular, regular, enumerated) = enumerate(r, config)?;
        let probes = run_probes(r, config)?;
        Ok(TypeEstimate {
            singular_lower: singular,
            regular_lower: regular,
            regular_probe_max: probes,
            caps: SearchCaps {
                truncation: config.truncation,
                max_mult: config.max_mult,
                jet_len: config.jet_len,
                coefficient_count: config.coefficients.len(),
                space_size: size,
                enumerated,
                budget: config.budget,
            },
        })
    })
}
