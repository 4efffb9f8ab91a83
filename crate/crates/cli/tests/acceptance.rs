//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines come out in order; exits nonzero if any criterion fails.

use std::time::Instant;

use jetcontact::contact::{compose, contact_report, mixed_derivative, tangency_psc_test, Verdict};
use jetcontact::faa::{all_constants, expand, ConstantKind, SlotShape};
use jetcontact::lift::{
    construct_regular_witness, identity_pairs, lift_curve, lift_identity_residual, obstruction_b, LiftKind,
    WitnessDiagnostic,
};
use jetcontact::models::{
    self, pseudoconvex_instances, random_curve, random_surface, with_random_levi_block, RandomSurface,
};
use jetcontact::normal::{
    lemma1_check, lemma2_check, levi_sample, tangent_basis, to_normal_form, LeviConfig, LeviVerdict,
};
use jetcontact::parse::parse_hermitian;
use jetcontact::scalar::{factorial, factorial_in, to_complex_f64};
use jetcontact::search::{search_type, SearchConfig};
use jetcontact::{Complex64, GaussianRational, HermitianPolynomial, Order, Rational, Scalar, Trace};
use jetcontact_cli::run_cli;
use nalgebra::DMatrix;
use num_traits::Zero;
use std::collections::BTreeSet;

type Verdict_ = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict_);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_containment() -> Verdict_ {
    let trace =
        compose(&models::example_surface(), &models::curve(models::SINGULAR_CURVE), 40).map_err(|e| e.to_string())?;
    ensure(trace.is_zero(), "trace has nonzero coefficients")?;
    Ok(format!(
        "r∘(0,t³,t²) vanishes through t-degree 40, nu = {}",
        trace.min_order()
    ))
}

fn c2_regular_witness() -> Verdict_ {
    let r = models::example_surface();
    let curve = models::curve(models::REGULAR_CURVE);
    let rep = contact_report(&r, &curve, 12).map_err(|e| e.to_string())?;
    ensure(rep.nu_trace == Order::Finite(4), format!("nu = {}", rep.nu_trace))?;
    let half = GaussianRational::from_ratio(1, 2);
    let expected = Trace::from_coeffs(12, [((3, 1), half.clone()), ((1, 3), half)]);
    ensure(
        compose(&r, &curve, 12).unwrap() == expected,
        "trace differs from ½t³t̄ + ½tt̄³",
    )?;
    let est = search_type(
        &r,
        &SearchConfig {
            probes: 200,
            seed: 7,
            ..SearchConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let strata = &est.regular_probe_max.strata;
    ensure(strata.len() == 3, "expected three strata")?;
    for s in strata {
        ensure(s.probes == 200, "probe count")?;
        ensure(
            !s.max_nu.exceeds(4),
            format!("stratum {:?} reached {}", s.order_one, s.max_nu),
        )?;
        if s.order_one.len() == 1 {
            ensure(
                s.nonzero_d31 == 200,
                format!("stratum {:?}: D^(3,1) vanished", s.order_one),
            )?;
        }
    }
    Ok("nu = 4 with trace ½t³t̄ + ½tt̄³; 3×200 probes all ≤ 4, D^(3,1) ≠ 0 in cases 2/3".into())
}

fn c3_expansion_oracle() -> Verdict_ {
    let shape = RandomSurface {
        dim: 3,
        max_degree: 6,
        terms: 10,
        pure: true,
        random_gradient: true,
    };
    let mut checked = 0;
    for seed in 0..50u64 {
        let r = random_surface(seed, &shape);
        let m = 1 + (seed % 3) as u32;
        let curve = random_curve(1000 + seed, 3, m, 3, false);
        let trace = compose(&r, &curve, 6).map_err(|e| e.to_string())?;
        for a in 0..=6u32 {
            for b in 0..=6 - a {
                if a + b == 0 {
                    continue;
                }
                let lhs = expand(a, b).unwrap().evaluate(&r, &curve).map_err(|e| e.to_string())?;
                let rhs = trace.coeff(a, b).unwrap_or_else(GaussianRational::zero)
                    * factorial_in::<GaussianRational>(a)
                    * factorial_in::<GaussianRational>(b);
                ensure(lhs == rhs, format!("seed {seed}, ({a},{b})"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact comparisons, 0 failures"))
}

fn shapes(a: u32, b: u32, m: u32) -> BTreeSet<SlotShape> {
    expand(a * m, b * m)
        .unwrap()
        .reduce_mod_mv(m)
        .shapes()
        .cloned()
        .collect()
}

fn set(items: Vec<(Vec<u32>, Vec<u32>)>) -> BTreeSet<SlotShape> {
    items.into_iter().map(|(h, a)| SlotShape::new(h, a)).collect()
}

fn c4_mod_mv() -> Verdict_ {
    for m in [2u32, 3] {
        ensure(
            shapes(1, 1, m) == set(vec![(vec![m], vec![m])]),
            format!("(M,M) at M = {m}"),
        )?;
        ensure(
            shapes(2, 1, m) == set(vec![(vec![2 * m], vec![m]), (vec![m, m], vec![m])]),
            format!("(2M,M) at M = {m}"),
        )?;
        ensure(
            shapes(2, 2, m)
                == set(vec![
                    (vec![2 * m], vec![2 * m]),
                    (vec![m, m], vec![2 * m]),
                    (vec![2 * m], vec![m, m]),
                    (vec![m, m], vec![m, m]),
                ]),
            format!("(2M,2M) at M = {m}"),
        )?;
        let mut three_one = vec![
            (vec![3 * m], vec![m]),
            (vec![2 * m, m], vec![m]),
            (vec![m, m, m], vec![m]),
        ];
        for i in 1..m {
            three_one.push((vec![m + i, 2 * m - i], vec![m]));
        }
        ensure(shapes(3, 1, m) == set(three_one), format!("(3M,M) at M = {m}"))?;
    }
    let mut distinct = Vec::new();
    for m in [2u32, 3] {
        for c in all_constants(m).map_err(|e| e.to_string())? {
            if c.identical_slots() {
                ensure(
                    c.agrees(),
                    format!("{} at M = {m}: {} vs {}", c.kind, c.paper_value, c.oracle_value),
                )?;
            } else {
                ensure(c.kind == ConstantKind::G, "only G constants have distinct slots")?;
                distinct.push(format!(
                    "G_{}(M={m}) oracle/paper = {}",
                    c.index,
                    c.ratio().map_or("-".into(), |r| r.to_string())
                ));
            }
        }
    }
    c5_lift_identities().map_err(|e| format!("identity suite: {e}"))?;
    Ok(format!(
        "shapes match for M = 2, 3; E0, F0, F1, F2, G_M exact; {}",
        distinct.join(", ")
    ))
}

fn c5_lift_identities() -> Verdict_ {
    let shape = RandomSurface {
        dim: 3,
        max_degree: 4,
        terms: 9,
        pure: false,
        random_gradient: false,
    };
    let mut nonzero_b = 0;
    for seed in 0..30u64 {
        let m = 2 + (seed % 2) as u32;
        let r = random_surface(500 + seed, &shape);
        let curve = random_curve(900 + seed, 3, m, 2 * m, false);
        for (a, b) in identity_pairs() {
            let res = lift_identity_residual(&r, &curve, a, b).map_err(|e| e.to_string())?;
            ensure(res.is_zero(), format!("seed {seed}, ({a},{b}): residual {res}"))?;
        }
        let zeta = lift_curve(&curve, LiftKind::Zeta).unwrap();
        let scale = Rational::from_integer(factorial(3 * m) * factorial(m)) / Rational::from_integer(6.into());
        let lifted = GaussianRational::from_real(scale) * mixed_derivative(&r, &zeta, 3, 1).unwrap();
        let mismatch = mixed_derivative(&r, &curve, 3 * m, m).unwrap() - lifted;
        let b = obstruction_b(&r, &curve).unwrap();
        ensure(
            mismatch == b.oracle_convention,
            format!("seed {seed}: (3,1) mismatch ≠ B"),
        )?;
        nonzero_b += usize::from(!b.oracle_convention.is_zero());
    }
    Ok(format!(
        "30 instances, all residuals 0, (3,1) mismatch = B ({nonzero_b} with B ≠ 0)"
    ))
}

fn c6_obstruction() -> Verdict_ {
    let r = models::example_surface();
    let curve = models::curve(models::SINGULAR_CURVE);
    let b = obstruction_b(&r, &curve).map_err(|e| e.to_string())?;
    ensure(
        b.paper_convention == GaussianRational::from_int(-720),
        format!("paper B = {}", b.paper_convention),
    )?;
    ensure(!b.oracle_convention.is_zero(), "oracle B vanished")?;
    let outcome = construct_regular_witness(&r, &curve, 4, 40).map_err(|e| e.to_string())?;
    ensure(outcome.witness.is_none(), "a witness was returned")?;
    ensure(
        matches!(outcome.diagnostic, Some(WitnessDiagnostic::Obstructed { .. })),
        "diagnostic is not the obstruction",
    )?;
    Ok(format!(
        "B = {} (paper), {} (oracle); target 4 refused",
        b.paper_convention, b.oracle_convention
    ))
}

fn c7_pseudoconvex_models() -> Verdict_ {
    let instances = pseudoconvex_instances();
    ensure(instances.len() >= 10, "fewer than 10 instances")?;
    for inst in &instances {
        let m = inst.curve.multiplicity();
        let nf = to_normal_form(&inst.surface, 4).map_err(|e| e.to_string())?;
        ensure(lemma1_check(&nf).consistent, format!("{}: lemma 1", inst.name))?;
        let l2 = lemma2_check(&nf, &inst.curve).map_err(|e| e.to_string())?;
        ensure(
            l2.coefficients_vanish && l2.implication_holds,
            format!("{}: lemma 2", inst.name),
        )?;
        let nu = compose(&inst.surface, &inst.curve, 8 * m).unwrap().min_order();
        ensure(nu.exceeds(4 * m), format!("{}: nu = {nu}", inst.name))?;
        let b = obstruction_b(&inst.surface, &inst.curve).unwrap();
        ensure(
            b.paper_convention.is_zero() && b.oracle_convention.is_zero(),
            format!("{}: B ≠ 0", inst.name),
        )?;
    }
    Ok(format!("{} models, B = 0 in both conventions", instances.len()))
}

fn c8_pseudoconvexity_chain() -> Verdict_ {
    let r = models::example_surface();
    let nf = to_normal_form(&r, 5).map_err(|e| e.to_string())?;
    let l1 = lemma1_check(&nf);
    ensure(
        l1.offending_triple == Some((2, 2, 3)),
        format!("lemma 1 flagged {:?}", l1.offending_triple),
    )?;
    let t = tangency_psc_test(&r, &models::curve(models::DIAGONAL_CURVE), 12).unwrap();
    ensure(
        t.order == Order::Finite(3) && t.verdict == Verdict::Violation,
        format!("tangency order {}", t.order),
    )?;
    let config = LeviConfig {
        radius: 0.3,
        samples: 500,
        tol: 1e-9,
        ..LeviConfig::default()
    };
    let s = levi_sample(&r, &config).map_err(|e| e.to_string())?;
    ensure(s.verdict == LeviVerdict::Violation, "no negative Levi eigenvalue found")?;
    for text in ["2*Re(z1) + abs2(z2) + abs2(z3)", "Re(z1) + abs2(z2)^2"] {
        let c = parse_hermitian(text, None).unwrap();
        let s = levi_sample(&c, &config).map_err(|e| e.to_string())?;
        ensure(
            s.verdict == LeviVerdict::NoViolationFound,
            format!("control {text} flagged"),
        )?;
        ensure(
            lemma1_check(&to_normal_form(&c, 4).unwrap()).consistent,
            format!("control {text}: lemma 1"),
        )?;
    }
    Ok(format!(
        "lemma 1 flags (2,2,3); tangency order 3; min Levi eigenvalue {:.4}; controls clean",
        s.min_eigenvalue.unwrap_or(f64::NAN)
    ))
}

fn float_inertia(r: &HermitianPolynomial) -> (usize, usize, usize) {
    let n = r.dim();
    let zero = vec![GaussianRational::zero(); n];
    let basis: Vec<Vec<Complex64>> = tangent_basis(r.as_poly(), &zero)
        .unwrap()
        .iter()
        .map(|v| v.iter().map(to_complex_f64).collect())
        .collect();
    let h: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| to_complex_f64(&r.derivative_at_origin(&[j], &[k])))
                .collect()
        })
        .collect();
    let d = basis.len();
    let levi = DMatrix::from_fn(d, d, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                acc += h[j][k] * basis[a][j] * basis[b][k].conj();
            }
        }
        acc
    });
    let eig = levi.symmetric_eigen().eigenvalues;
    let pos = eig.iter().filter(|&&v| v > 1e-9).count();
    let neg = eig.iter().filter(|&&v| v < -1e-9).count();
    (pos, neg, d - pos - neg)
}

fn c9_normal_form() -> Verdict_ {
    let shape = RandomSurface {
        dim: 3,
        max_degree: 5,
        terms: 10,
        pure: true,
        random_gradient: true,
    };
    for seed in 0..20u64 {
        let r = with_random_levi_block(seed, &random_surface(seed, &shape));
        let nf = to_normal_form(&r, 5).map_err(|e| e.to_string())?;
        ensure(
            nf.pullback() == r.as_poly().truncate(5),
            format!("seed {seed}: round trip"),
        )?;
        ensure(nf.remainder_admissible(), format!("seed {seed}: remainder"))?;
        ensure(
            nf.levi_signature() == float_inertia(&r),
            format!("seed {seed}: inertia"),
        )?;
    }
    Ok("20 surfaces: exact round trip through degree 5, κ signs match float inertia".into())
}

fn c10_determinism() -> Verdict_ {
    let surface = models::EXAMPLE_SURFACE;
    let runs = |extra: &[&str]| -> Result<Vec<String>, String> {
        ["1", "2", "8"]
            .iter()
            .map(|t| {
                let mut args = vec!["jetcontact", "--threads", t];
                args.extend_from_slice(extra);
                let out = run_cli(args);
                if out.code == 0 {
                    Ok(out.stdout)
                } else {
                    Err(format!("exit {}: {}", out.code, out.stderr))
                }
            })
            .collect()
    };
    let search = runs(&[
        "search",
        "--surface",
        surface,
        "--coeffs",
        "0,1,i",
        "--probes",
        "100",
        "--seed",
        "3",
    ])?;
    ensure(
        search.iter().all(|s| *s == search[0]),
        "search output differs across thread counts",
    )?;
    let paper = runs(&["verify-paper", "--seed", "5"])?;
    ensure(
        paper.iter().all(|s| *s == paper[0]),
        "verify-paper output differs across thread counts",
    )?;
    Ok(format!(
        "search ({} bytes) and verify-paper ({} bytes) identical at 1, 2, 8 threads",
        search[0].len(),
        paper[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("singular curve contained in the surface", c1_containment),
        ("regular-type witness and stratified probes", c2_regular_witness),
        ("expansion oracle", c3_expansion_oracle),
        ("mod-MV structure and constants", c4_mod_mv),
        ("lift identities", c5_lift_identities),
        ("obstruction regression", c6_obstruction),
        ("pseudoconvex instances unobstructed", c7_pseudoconvex_models),
        ("pseudoconvexity chain", c8_pseudoconvexity_chain),
        ("normal-form round trip", c9_normal_form),
        ("determinism across thread counts", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
