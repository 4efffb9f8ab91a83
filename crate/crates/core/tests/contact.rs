use jetcontact::contact::{compose, contact_report, tangency_psc_test, ContactValue, Verdict};
use jetcontact::models::{self, random_curve, random_surface, RandomSurface};
use jetcontact::parse::parse_hermitian;
use jetcontact::search::{search_type, SearchConfig};
use jetcontact::{GaussianRational, Order, Rational, Scalar, Trace};
use proptest::prelude::*;

#[test]
fn singular_curve_lies_in_the_surface() {
    let trace = compose(&models::example_surface(), &models::curve(models::SINGULAR_CURVE), 40).unwrap();
    assert!(trace.is_zero());
    assert_eq!(trace.min_order(), Order::AtLeast(41));
}

#[test]
fn regular_witness_has_order_four() {
    let r = models::example_surface();
    let curve = models::curve(models::REGULAR_CURVE);
    let report = contact_report(&r, &curve, 12).unwrap();
    assert_eq!(report.nu_trace, Order::Finite(4));
    assert_eq!(report.contact, ContactValue::Exact(Rational::from_integer(4.into())));
    let half = GaussianRational::from_ratio(1, 2);
    let expected = Trace::from_coeffs(12, [((3, 1), half.clone()), ((1, 3), half)]);
    assert_eq!(compose(&r, &curve, 12).unwrap(), expected);
}

#[test]
fn regular_probes_never_exceed_four() {
    let r = models::example_surface();
    let config = SearchConfig {
        probes: 200,
        seed: 7,
        ..SearchConfig::default()
    };
    let est = search_type(&r, &config).unwrap();
    let strata = &est.regular_probe_max.strata;
    assert_eq!(strata.len(), 3);
    for s in strata {
        assert_eq!(s.probes, 200);
        assert!(!s.max_nu.exceeds(4), "{:?}: {}", s.order_one, s.max_nu);
        if s.order_one.len() == 1 {
            assert_eq!(s.nonzero_d31, 200, "{:?}", s.order_one);
        }
    }
    assert_eq!(est.regular_lower.unwrap().nu_trace, Order::Finite(4));
}

#[test]
fn diagonal_tangent_curve_has_odd_order() {
    let t = tangency_psc_test(&models::example_surface(), &models::curve(models::DIAGONAL_CURVE), 12).unwrap();
    assert_eq!(t.order, Order::Finite(3));
    assert!(!t.even);
    assert_eq!(t.verdict, Verdict::Violation);
}

fn shape() -> RandomSurface {
    RandomSurface {
        dim: 3,
        max_degree: 5,
        terms: 8,
        pure: true,
        random_gradient: true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn reparametrization_scales_both_orders(seed in 0u64..10_000, m in 1u32..=2, k in 2u32..=3) {
        let r = random_surface(seed, &shape());
        let curve = random_curve(seed + 1, 3, m, 2, true);
        let a = contact_report(&r, &curve, 12).unwrap();
        let b = contact_report(&r, &curve.reparametrize(k).unwrap(), 12 * k).unwrap();
        prop_assert_eq!(b.nu_curve, k * a.nu_curve);
        match a.nu_trace {
            Order::Finite(v) => {
                prop_assert_eq!(b.nu_trace, Order::Finite(k * v));
                prop_assert_eq!(b.contact.value(), a.contact.value());
            }
            // Zero through t-degree 12 means zero through 12k after t ↦ t^k.
            Order::AtLeast(_) => prop_assert_eq!(b.nu_trace, Order::AtLeast(12 * k + 1)),
        }
    }

    #[test]
    fn scaling_the_defining_function_keeps_contact(seed in 0u64..10_000, m in 1u32..=3) {
        let r = random_surface(seed, &shape());
        let r2 = r.scale_real(&Rational::from_integer(2.into()));
        let curve = random_curve(seed + 7, 3, m, 2, true);
        let a = contact_report(&r, &curve, 16).unwrap();
        let b = contact_report(&r2, &curve, 16).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn rewrite_describes_the_same_surface() {
    let a = parse_hermitian(models::EXAMPLE_SURFACE, Some(3)).unwrap();
    let b = parse_hermitian(models::EXAMPLE_SURFACE_REWRITE, Some(3)).unwrap();
    assert_eq!(a, b);
}
