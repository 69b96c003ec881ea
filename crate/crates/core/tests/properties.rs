//! Algebraic invariants under proptest.

use anline::huber::{refines, valuation_axiom_check, CoverSpec, Frac, HuberPair, Valuation};
use anline::literal::{format_series, parse_series};
use anline::region::{member, parse_region, random_region, Membership};
use anline::rings::{difference, divide_by_t_minus_u, laurent_split, random_module_element, RingElement};
use anline::scalar::rat;
use anline::series::Check;
use anline::{random, Backend, GaussRat, Poly, Real, Scalar, Truncation, WeightedSeries};
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-9i64..=9, -9i64..=9, 1i64..=4).prop_map(|(a, b, d)| GaussRat::new(rat(a, d), rat(b, d)))
}

fn coeffs(max: usize) -> impl Strategy<Value = Vec<GaussRat>> {
    prop::collection::vec(gauss(), 1..=max)
}

fn radius() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![Just((1, 2)), Just((3, 4)), Just((1, 1)), Just((3, 2)), Just((2, 1))]
}

fn ws(low: i64, c: Vec<GaussRat>, r: (i64, i64)) -> WeightedSeries {
    WeightedSeries::exact(low, c, rat(r.0, r.1)).unwrap()
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-3i64..=3, 1..=4).prop_map(|c| Poly::from_ints(&c))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x616e6c),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn product_is_commutative(a in coeffs(6), b in coeffs(6), la in -3i64..3, lb in -3i64..3, r in radius()) {
        let (f, g) = (ws(la, a, r), ws(lb, b, r));
        prop_assert!(f.mul(&g).unwrap().same_coefficients(&g.mul(&f).unwrap()));
    }

    #[test]
    fn product_is_associative(a in coeffs(4), b in coeffs(4), c in coeffs(4), r in radius()) {
        let (f, g, h) = (ws(0, a, r), ws(-1, b, r), ws(2, c, r));
        let left = f.mul(&g).unwrap().mul(&h).unwrap();
        let right = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert!(left.same_coefficients(&right));
    }

    #[test]
    fn norm_is_submultiplicative(a in coeffs(6), b in coeffs(6), la in -2i64..3, lb in -2i64..3, r in radius()) {
        let (f, g) = (ws(la, a, r), ws(lb, b, r));
        let lhs = f.mul(&g).unwrap().weighted_norm();
        let rhs = f.weighted_norm().mul(&g.weighted_norm());
        prop_assert_eq!(lhs.le(&rhs), Check::Holds);
    }

    #[test]
    fn norm_satisfies_triangle_inequality(a in coeffs(6), b in coeffs(6), r in radius()) {
        let (f, g) = (ws(-2, a, r), ws(0, b, r));
        let lhs = f.add(&g).unwrap().weighted_norm();
        prop_assert_eq!(lhs.le(&f.weighted_norm().add(&g.weighted_norm())), Check::Holds);
    }

    #[test]
    fn split_reassembles(c in coeffs(9), low in -6i64..=0) {
        let h = RingElement::two_sided(ws(low, c, (1, 1)), Real::ratio(3, 2), Real::ratio(1, 2)).unwrap();
        let (f, g) = laurent_split(&h).unwrap();
        let back = difference(&f, &g).unwrap();
        prop_assert!(back.series().trim().same_coefficients(&h.series().trim()));
        prop_assert!(f.series().support().iter().all(|&d| d >= 0));
        prop_assert!(g.series().support().iter().all(|&d| d < 0));
    }

    #[test]
    fn division_multiplies_back(seed in any::<u64>(), r in prop_oneof![Just((1, 4)), Just((1, 2)), Just((9, 10))]) {
        let mut rng = random::trial_rng(seed, 0, 0);
        let c = random_module_element(&mut rng, &Real::ratio(r.0, r.1), 6).unwrap();
        let b = c.mul_t_minus_u().unwrap();
        let d = divide_by_t_minus_u(&b, &Truncation::default()).unwrap();
        prop_assert!(d.quotient.mul_t_minus_u().unwrap().same_as(&b));
        prop_assert_eq!(d.within_bound, Check::Holds);
    }

    #[test]
    fn series_literal_roundtrip(c in coeffs(6), low in -4i64..4, r in radius()) {
        let s = ws(low, c, r);
        let back = parse_series(&format_series(&s), Backend::Exact, None).unwrap();
        prop_assert!(back.same_coefficients(&s));
        prop_assert_eq!(back.radius().cmp_value(s.radius()), std::cmp::Ordering::Equal);
    }

    #[test]
    fn normalization_preserves_membership(seed in any::<u64>(), re in -8i64..=8, im in -8i64..=8) {
        let mut rng = random::trial_rng(seed, 3, 0);
        let r = random_region(&mut rng);
        let z = Scalar::Exact(GaussRat::new(rat(re, 4), rat(im, 4)));
        let m = member(&r, &z, true);
        prop_assert_ne!(m, Membership::Undecided);
        prop_assert_eq!(member(&r.normalized(), &z, true), m);
    }

    #[test]
    fn region_text_roundtrip(seed in any::<u64>(), re in -8i64..=8, im in -8i64..=8) {
        let mut rng = random::trial_rng(seed, 4, 0);
        let r = random_region(&mut rng);
        let back = parse_region(&r.to_string()).unwrap();
        let z = Scalar::Exact(GaussRat::new(rat(re, 4), rat(im, 4)));
        prop_assert_eq!(member(&back, &z, true), member(&r, &z, true));
    }

    #[test]
    fn valuations_satisfy_axioms(
        re in -2i64..=2,
        im in -2i64..=2,
        g in prop_oneof![Just((1, 2)), Just((2, 3)), Just((1, 10))],
        pairs in prop::collection::vec((poly(), poly()), 1..12),
    ) {
        let z = GaussRat::from_ints(re, im);
        for v in [
            Valuation::order_at(z.clone(), rat(g.0, g.1)).unwrap(),
            Valuation::TrivialAtPrime(Some(z.clone())),
            Valuation::TrivialAtPrime(None),
        ] {
            let rep = valuation_axiom_check(&v, &pairs);
            prop_assert!(rep.passed(), "{v}: {rep:?}");
        }
    }

    #[test]
    fn valuation_text_roundtrip(re in -5i64..=5, im in -5i64..=5, d in 2i64..9) {
        let v = Valuation::order_at(GaussRat::from_ints(re, im), rat(1, d)).unwrap();
        prop_assert_eq!(v.to_string().parse::<Valuation>().unwrap(), v);
        let t = Valuation::TrivialAtPrime(Some(GaussRat::from_ints(re, im)));
        prop_assert_eq!(t.to_string().parse::<Valuation>().unwrap(), t);
    }

    #[test]
    fn frac_text_roundtrip(n in poly(), d in poly()) {
        prop_assume!(!d.is_zero());
        let f = Frac::new(n, d).unwrap();
        prop_assert_eq!(f.to_string().parse::<Frac>().unwrap(), f);
    }

    #[test]
    fn covers_refine_themselves(f in poly(), a in poly()) {
        let base = HuberPair::polynomial_ring();
        let enlarged = base.adjoin(&[Frac::poly(a)]).unwrap();
        for p in [base, enlarged] {
            let c = CoverSpec::two_piece(&p, &Frac::poly(f.clone()));
            if let Ok(c) = c {
                prop_assert!(c.well_formed());
                let r = refines(&c, &c);
                prop_assert!(r.holds(), "{}", c);
            }
        }
    }
}
