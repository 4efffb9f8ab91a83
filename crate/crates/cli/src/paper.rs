//! Regression suite for the reference surface: containment of the singular
//! curve, the order-four regular witness, the chain-rule families, the
//! obstruction and the pseudoconvexity chain.

use jetcontact::contact::{compose, contact_report, tangency_psc_test, Verdict};
use jetcontact::faa::{all_constants, expand, SlotShape};
use jetcontact::lift::{
    construct_regular_witness, identity_pairs, lift_identity_residual, obstruction_b, WitnessDiagnostic,
};
use jetcontact::models::{self, pseudoconvex_instances};
use jetcontact::normal::{lemma1_check, levi_sample, to_normal_form, LeviConfig, LeviVerdict, PscStatus};
use jetcontact::parse::parse_hermitian;
use jetcontact::search::{search_type, SearchConfig};
use jetcontact::{GaussianRational, Order, Result, Scalar, Trace};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeSet;

use crate::report::{self, gaussian, order};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "pass": self.pass, "detail": self.detail })
    }
}

/// Runs every check in a fixed order. A core error aborts the suite, since
/// none of these inputs should produce one.
pub fn run(probes: u32, seed: u64, threads: usize) -> Result<Vec<Check>> {
    let r = models::example_surface();
    let singular = models::curve(models::SINGULAR_CURVE);
    let regular = models::curve(models::REGULAR_CURVE);
    let diagonal = models::curve(models::DIAGONAL_CURVE);
    let mut out = Vec::new();

    let trace = compose(&r, &singular, 40)?;
    out.push(Check {
        name: "singular_curve_in_surface",
        pass: trace.is_zero() && trace.min_order() == Order::AtLeast(41),
        detail: json!({ "nu_trace": order(trace.min_order()), "truncation": 40 }),
    });

    let rep = contact_report(&r, &regular, 12)?;
    let half = GaussianRational::from_ratio(1, 2);
    let expected = Trace::from_coeffs(12, [((3, 1), half.clone()), ((1, 3), half)]);
    let trace = compose(&r, &regular, 12)?;
    out.push(Check {
        name: "regular_witness_order_four",
        pass: rep.nu_trace == Order::Finite(4) && trace == expected,
        detail: json!({ "report": report::contact_report(&rep), "trace": report::trace(&trace) }),
    });

    let rewrite = parse_hermitian(models::EXAMPLE_SURFACE_REWRITE, Some(3))?;
    out.push(Check {
        name: "rewrite_same_coefficients",
        pass: rewrite == r,
        detail: Value::Null,
    });

    let config = SearchConfig {
        probes,
        seed,
        threads,
        ..SearchConfig::default()
    };
    let est = search_type(&r, &config)?;
    let strata = &est.regular_probe_max.strata;
    let probes_ok = strata.len() == 3
        && strata
            .iter()
            .all(|s| s.probes == probes && !s.max_nu.exceeds(4) && (s.order_one.len() != 1 || s.nonzero_d31 == probes));
    out.push(Check {
        name: "regular_probes_bounded",
        pass: probes_ok,
        detail: report::probes(&est.regular_probe_max),
    });
    let singular_found = est.singular_lower.as_ref().is_some_and(|w| !w.nu_trace.is_finite());
    let regular_found = est
        .regular_lower
        .as_ref()
        .is_some_and(|w| w.nu_trace == Order::Finite(4));
    out.push(Check {
        name: "search_witnesses",
        pass: singular_found && regular_found,
        detail: report::type_estimate(&est),
    });

    let mut shapes_ok = true;
    for m in [2u32, 3] {
        shapes_ok &= reduced_families_match(m)?;
    }
    out.push(Check {
        name: "reduced_shape_families",
        pass: shapes_ok,
        detail: json!({ "multiplicities": [2, 3] }),
    });

    let mut constants = Vec::new();
    let mut constants_ok = true;
    for m in [2u32, 3] {
        for c in all_constants(m)? {
            constants_ok &= !c.identical_slots() || c.agrees();
            constants.push(report::constant(&c));
        }
    }
    out.push(Check {
        name: "identical_slot_constants",
        pass: constants_ok,
        detail: json!({ "constants_comparison": constants }),
    });

    let b = obstruction_b(&r, &singular)?;
    let outcome = construct_regular_witness(&r, &singular, 4, 40)?;
    let blocked = outcome.witness.is_none() && matches!(outcome.diagnostic, Some(WitnessDiagnostic::Obstructed { .. }));
    out.push(Check {
        name: "obstruction_blocks_witness",
        pass: b.paper_convention == GaussianRational::from_int(-720) && !b.oracle_convention.is_zero() && blocked,
        detail: json!({ "obstruction": report::obstruction(&b), "witness": report::witness_outcome(&outcome) }),
    });

    let mut residuals = Vec::new();
    let mut residuals_ok = true;
    for (a, bb) in identity_pairs() {
        // Pure pairs need a defining function free of pure terms, which
        // the reference surface is, so every pair applies here.
        let res = lift_identity_residual(&r, &singular, a, bb)?;
        residuals_ok &= res.is_zero();
        residuals.push(json!({ "pair": [a, bb], "residual": gaussian(&res) }));
    }
    out.push(Check {
        name: "lift_identities_on_singular_curve",
        pass: residuals_ok,
        detail: Value::Array(residuals),
    });

    let instances = pseudoconvex_instances();
    let mut names = Vec::new();
    let mut models_ok = instances.len() >= 10;
    for inst in &instances {
        let b = obstruction_b(&inst.surface, &inst.curve)?;
        let m = inst.curve.multiplicity();
        let nu = compose(&inst.surface, &inst.curve, 8 * m)?.min_order();
        models_ok &= b.paper_convention.is_zero() && b.oracle_convention.is_zero() && nu.exceeds(4 * m);
        names.push(json!({ "name": inst.name, "nu_trace": order(nu) }));
    }
    out.push(Check {
        name: "pseudoconvex_models_unobstructed",
        pass: models_ok,
        detail: Value::Array(names),
    });

    let nf = to_normal_form(&r, 5)?;
    let l1 = lemma1_check(&nf);
    out.push(Check {
        name: "lemma1_flags_cubic",
        pass: l1.offending_triple == Some((2, 2, 3)),
        detail: json!({ "offending_triple": l1.offending_triple.map(|(j, k, l)| json!([j, k, l])) }),
    });

    let t = tangency_psc_test(&r, &diagonal, 12)?;
    out.push(Check {
        name: "tangency_odd_order",
        pass: t.order == Order::Finite(3) && !t.even && t.verdict == Verdict::Violation,
        detail: json!({ "order": order(t.order), "verdict": t.verdict.to_string() }),
    });

    let levi = LeviConfig {
        seed,
        threads,
        ..LeviConfig::default()
    };
    let s = levi_sample(&r, &levi)?;
    out.push(Check {
        name: "levi_negative_eigenvalue",
        pass: s.verdict == LeviVerdict::Violation,
        detail: json!({ "min_eigenvalue": s.min_eigenvalue, "verdict": s.verdict.to_string(), "located": s.located }),
    });

    let mut controls = Vec::new();
    let mut controls_ok = true;
    for text in ["2*Re(z1) + abs2(z2) + abs2(z3)", "Re(z1) + abs2(z2)^2"] {
        let c = parse_hermitian(text, None)?;
        let s = levi_sample(&c, &levi)?;
        let mut nf = to_normal_form(&c, 4)?;
        nf.certify(&s);
        let ok = s.verdict == LeviVerdict::NoViolationFound && nf.psc != PscStatus::ViolationFound;
        controls_ok &= ok;
        controls.push(json!({ "surface": text, "levi": s.verdict.to_string(), "psc_status": nf.psc.to_string() }));
    }
    out.push(Check {
        name: "positive_controls",
        pass: controls_ok,
        detail: Value::Array(controls),
    });

    Ok(out)
}

fn reduced_families_match(m: u32) -> Result<bool> {
    let shapes = |a: u32, b: u32| -> Result<BTreeSet<SlotShape>> {
        Ok(expand(a * m, b * m)?.reduce_mod_mv(m).shapes().cloned().collect())
    };
    let set = |items: Vec<(Vec<u32>, Vec<u32>)>| -> BTreeSet<SlotShape> {
        items.into_iter().map(|(h, a)| SlotShape::new(h, a)).collect()
    };
    let mut three_one = vec![
        (vec![3 * m], vec![m]),
        (vec![2 * m, m], vec![m]),
        (vec![m, m, m], vec![m]),
    ];
    for i in 1..m {
        three_one.push((vec![m + i, 2 * m - i], vec![m]));
    }
    Ok(shapes(1, 1)? == set(vec![(vec![m], vec![m])])
        && shapes(2, 1)? == set(vec![(vec![2 * m], vec![m]), (vec![m, m], vec![m])])
        && shapes(2, 2)?
            == set(vec![
                (vec![2 * m], vec![2 * m]),
                (vec![m, m], vec![2 * m]),
                (vec![2 * m], vec![m, m]),
                (vec![m, m], vec![m, m]),
            ])
        && shapes(3, 1)? == set(three_one))
}
