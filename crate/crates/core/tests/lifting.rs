use jetcontact::contact::{compose, mixed_derivative};
use jetcontact::lift::{
    construct_regular_witness, identity_pairs, lift_curve, lift_identity_residual, obstruction_b, LiftKind,
    WitnessDiagnostic,
};
use jetcontact::models::{self, pseudoconvex_instances, random_curve, random_surface, RandomSurface};
use jetcontact::normal::{lemma1_check, lemma2_check, levi_sample, to_normal_form, LeviConfig, LeviVerdict};
use jetcontact::scalar::factorial;
use jetcontact::{GaussianRational, Rational, Scalar};
use num_traits::Zero;

fn instance(seed: u64) -> (jetcontact::HermitianPolynomial, jetcontact::CurveJet) {
    let shape = RandomSurface {
        dim: 3,
        max_degree: 4,
        terms: 9,
        pure: false,
        random_gradient: false,
    };
    let m = 2 + (seed % 2) as u32;
    (
        random_surface(500 + seed, &shape),
        random_curve(900 + seed, 3, m, 2 * m, false),
    )
}

#[test]
fn lift_identities_hold_on_random_instances() {
    let mut nonzero_b = 0;
    for seed in 0..30u64 {
        let (r, curve) = instance(seed);
        let m = curve.multiplicity();
        for (a, b) in identity_pairs() {
            let res = lift_identity_residual(&r, &curve, a, b).unwrap();
            assert!(res.is_zero(), "seed {seed}, ({a},{b}): residual {res}");
        }
        let zeta = lift_curve(&curve, LiftKind::Zeta).unwrap();
        let scale = Rational::from_integer(factorial(3 * m) * factorial(m)) / Rational::from_integer(6.into());
        let lifted = GaussianRational::from_real(scale) * mixed_derivative(&r, &zeta, 3, 1).unwrap();
        let mismatch = mixed_derivative(&r, &curve, 3 * m, m).unwrap() - lifted;
        let b = obstruction_b(&r, &curve).unwrap();
        assert_eq!(mismatch, b.oracle_convention, "seed {seed}");
        nonzero_b += usize::from(!b.oracle_convention.is_zero());
    }
    assert!(nonzero_b > 0, "every random obstruction vanished");
}

#[test]
fn example_curve_is_obstructed() {
    let r = models::example_surface();
    let curve = models::curve(models::SINGULAR_CURVE);
    let b = obstruction_b(&r, &curve).unwrap();
    assert_eq!(b.paper_convention, GaussianRational::from_int(-720));
    assert_eq!(b.oracle_convention, GaussianRational::from_int(-720));
    let outcome = construct_regular_witness(&r, &curve, 4, 40).unwrap();
    assert!(outcome.witness.is_none());
    assert!(matches!(outcome.diagnostic, Some(WitnessDiagnostic::Obstructed { .. })));
    for target in [2, 3] {
        let outcome = construct_regular_witness(&r, &curve, target, 40).unwrap();
        let w = outcome.witness.expect("lower targets lift");
        assert!(compose(&r, &w, target).unwrap().is_zero());
    }
}

#[test]
fn pseudoconvex_models_have_no_obstruction() {
    let instances = pseudoconvex_instances();
    assert!(instances.len() >= 10);
    for inst in &instances {
        let m = inst.curve.multiplicity();
        assert!(m == 2 || m == 3, "{}", inst.name);
        let nf = to_normal_form(&inst.surface, 4).unwrap();
        assert!(nf.transform.is_identity(), "{}", inst.name);
        assert!(lemma1_check(&nf).consistent, "{}", inst.name);
        let l2 = lemma2_check(&nf, &inst.curve).unwrap();
        assert!(l2.coefficients_vanish && l2.implication_holds, "{}", inst.name);
        let nu = compose(&inst.surface, &inst.curve, 8 * m).unwrap().min_order();
        assert!(nu.exceeds(4 * m), "{}: nu = {nu}", inst.name);
        let b = obstruction_b(&inst.surface, &inst.curve).unwrap();
        assert!(
            b.paper_convention.is_zero() && b.oracle_convention.is_zero(),
            "{}",
            inst.name
        );
        let s = levi_sample(
            &inst.surface,
            &LeviConfig {
                samples: 100,
                ..LeviConfig::default()
            },
        )
        .unwrap();
        assert_eq!(s.verdict, LeviVerdict::NoViolationFound, "{}", inst.name);
    }
}
