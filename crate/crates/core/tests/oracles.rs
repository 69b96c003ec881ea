//! Values computed by independent means and compared with the library.

use anline::berkovich::{gelfand_points, AlgebraDescriptor, SpectrumPoint};
use anline::certified::SqrtSum;
use anline::huber::{HuberPair, Valuation, Value};
use anline::random;
use anline::rings::{divide_by_t_minus_u, laurent_split, ModuleElement, RingElement};
use anline::roots::certified_roots;
use anline::scalar::{rat, rational_to_f64};
use anline::series::Check;
use anline::{GaussRat, NormValue, Poly, Real, Scalar, Truncation, WeightedSeries};
use num_complex::Complex64;
use num_rational::BigRational;

fn exact_eq(v: &NormValue, q: BigRational) -> bool {
    let w = NormValue::Certified(SqrtSum::rational(q));
    v.le(&w) == Check::Holds && w.le(v) == Check::Holds
}

fn series(low: i64, c: &[i64], r: BigRational) -> WeightedSeries {
    WeightedSeries::exact(low, c.iter().map(|&x| GaussRat::from_ints(x, 0)).collect(), r).unwrap()
}

#[test]
fn geometric_sum_norm() {
    // Σ_{n=0}^{10} (1/2)^n = 2047/1024
    let s = series(0, &[1; 11], rat(1, 2));
    assert!(exact_eq(&s.weighted_norm(), rat(2047, 1024)));
}

#[test]
fn norm_with_gaussian_moduli() {
    // |3+4i| + |1+i|·2 at r = 2
    let s = WeightedSeries::exact(0, vec![GaussRat::from_ints(3, 4), GaussRat::from_ints(1, 1)], rat(2, 1)).unwrap();
    let v = s.weighted_norm().to_f64();
    assert!((v - (5.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
}

#[test]
fn product_matches_brute_force_convolution() {
    for idx in 0..40 {
        let mut rng = random::trial_rng(7, 1, idx);
        let a = random::gauss_vec(&mut rng, 1 + (idx as usize % 7), 9, 5, 0.2);
        let b = random::gauss_vec(&mut rng, 1 + (idx as usize % 5), 9, 5, 0.2);
        let (la, lb) = (idx as i64 % 3 - 1, -(idx as i64 % 4));
        let mut conv = vec![GaussRat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                conv[i + j] = &conv[i + j] + &(x * y);
            }
        }
        let sa = WeightedSeries::exact(la, a, rat(3, 4)).unwrap();
        let sb = WeightedSeries::exact(lb, b, rat(3, 4)).unwrap();
        let p = sa.mul(&sb).unwrap();
        for (k, c) in conv.iter().enumerate() {
            assert_eq!(p.coeff(la + lb + k as i64), Scalar::Exact(c.clone()), "trial {idx} degree {k}");
        }
        assert!(p.coeff(la + lb - 1).is_zero());
        assert!(p.coeff(la + lb + conv.len() as i64).is_zero());
    }
}

#[test]
fn division_by_t_minus_u_closed_form() {
    // b = (T - U)(1 + U) = T + (T - 1)U - U²; quotient c = 1 + U
    let r = Real::ratio(1, 2);
    let b = ModuleElement::new(vec![series(1, &[1], rat(1, 2)), series(0, &[-1, 1], rat(1, 2)), series(0, &[-1], rat(1, 2))], r)
        .unwrap();
    let d = divide_by_t_minus_u(&b, &Truncation::default()).unwrap();
    let e = d.quotient.entries();
    assert_eq!(e.len(), 2);
    assert!(e[0].same_coefficients(&series(0, &[1], rat(1, 2))));
    assert!(e[1].same_coefficients(&series(0, &[1], rat(1, 2))));
    // ‖b‖ = 1/2 + 3/2 + 1, ‖c‖ = 2, bound = 3·2
    assert!(exact_eq(&d.norm_b, rat(3, 1)));
    assert!(exact_eq(&d.norm_c, rat(2, 1)));
    assert!(exact_eq(&d.bound, rat(6, 1)));
    assert_eq!(d.within_bound, Check::Holds);
}

#[test]
fn division_recovers_random_quotients() {
    for r in [rat(1, 4), rat(9, 10)] {
        for idx in 0..25 {
            let mut rng = random::trial_rng(11, 2, idx);
            let c = anline::rings::random_module_element(&mut rng, &Real::Exact(r.clone()), 5).unwrap();
            let b = c.mul_t_minus_u().unwrap();
            let d = divide_by_t_minus_u(&b, &Truncation::default()).unwrap();
            assert!(d.quotient.same_as(&c), "r={r} trial {idx}");
            assert_eq!(d.within_bound, Check::Holds);
        }
    }
}

#[test]
fn laurent_split_halves() {
    let h = RingElement::two_sided(series(-3, &[1, -2, 3, 4, 5, -6, 7], rat(1, 2)), Real::ratio(2, 1), Real::ratio(1, 2))
        .unwrap();
    let (f, g) = laurent_split(&h).unwrap();
    assert!(f.series().same_coefficients(&series(0, &[4, 5, -6, 7], rat(1, 2))));
    assert!(g.series().same_coefficients(&series(-3, &[-1, 2, -3], rat(1, 2))));
    // outer norm at 2: 4 + 10 + 24 + 56
    assert!(exact_eq(&f.ring_norm(None).unwrap(), rat(94, 1)));
    // inner norm at 1/2: 1·8 + 2·4 + 3·2
    assert!(exact_eq(&g.ring_norm(None).unwrap(), rat(22, 1)));
}

#[test]
fn order_valuation_values() {
    let v = Valuation::order_at(GaussRat::zero(), rat(1, 2)).unwrap();
    let f = Poly::from_ints(&[0, 0, 0, -1, 1]); // T³(T - 1)
    assert_eq!(v.value(&f), Value::Pow(3));
    assert_eq!(v.numeric(v.value(&f)), rat(1, 8));
    assert_eq!(v.value(&Poly::from_ints(&[5])), Value::one());
    assert_eq!(v.value(&Poly::zero()), Value::Zero);
    let at_i = Valuation::order_at(GaussRat::i(), rat(1, 3)).unwrap();
    let g = Poly::from_ints(&[1, 0, 1]).pow(2); // (T² + 1)²
    assert_eq!(at_i.numeric(at_i.value(&g)), rat(1, 9));
    let trivial = Valuation::TrivialAtPrime(Some(GaussRat::from_ints(1, 0)));
    assert_eq!(trivial.value(&Poly::from_ints(&[-1, 1])), Value::Zero);
    assert_eq!(trivial.value(&Poly::t()), Value::one());
}

#[test]
fn roots_of_unity() {
    let p = Poly::from_ints(&[-1, 0, 0, 0, 0, 1]);
    let roots = certified_roots(&p, 1e-10).unwrap();
    assert_eq!(roots.len(), 5);
    for k in 0..5 {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
        let z = Complex64::new(t.cos(), t.sin());
        let hit = roots.iter().find(|r| (r.to_complex64() - z).norm() < 1e-9);
        let hit = hit.unwrap_or_else(|| panic!("no root near {z}"));
        assert!(hit.radius_f64() <= 1e-10);
    }
}

#[test]
fn repeated_roots_are_counted_once() {
    // (T - 1)²(T + 2)(T - i)
    let p = Poly::from_ints(&[-1, 1])
        .pow(2)
        .mul(&Poly::from_ints(&[2, 1]))
        .mul(&Poly::linear_root(&GaussRat::i()));
    let roots = certified_roots(&p, 1e-10).unwrap();
    let expect = [Complex64::new(-2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)];
    assert_eq!(roots.len(), 3);
    for z in expect {
        assert!(roots.iter().any(|r| (r.to_complex64() - z).norm() <= r.radius_f64() + 1e-12));
    }
}

#[test]
fn spectrum_of_t_squared_plus_one() {
    let s = gelfand_points(&AlgebraDescriptor::quotient(Poly::from_ints(&[1, 0, 1]))).unwrap();
    let mut ims: Vec<f64> = s.points().iter().map(|p| p.z.to_complex64().im).collect();
    ims.sort_by(f64::total_cmp);
    assert_eq!(ims.len(), 2);
    assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
}

#[test]
fn evaluation_seminorm() {
    // |T² - 3T + 1| at 2 + i: (3+4i) - (6+3i) + 1 = -2 + i
    let x = SpectrumPoint::exact(GaussRat::from_ints(2, 1));
    let v = x.seminorm(&Poly::from_ints(&[1, -3, 1]));
    assert!((v.to_f64() - 5f64.sqrt()).abs() < 1e-14);
    assert_eq!(v.le(&NormValue::Certified(SqrtSum::sqrt_of(&rat(5, 1)))), Check::Holds);
}

#[test]
fn unit_ideal_certificate_combination() {
    let base = HuberPair::polynomial_ring();
    let gens = [Poly::from_ints(&[0, 1]), Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 0, 1])];
    let cert = base.unit_ideal(&gens).unwrap();
    assert!(cert.verify());
    let sum = cert
        .generators
        .iter()
        .zip(&cert.coefficients)
        .fold(Poly::zero(), |acc, (g, c)| acc.add(&g.mul(c)));
    assert!(sum.is_one());
    assert!(base.unit_ideal(&[Poly::from_ints(&[0, 1]), Poly::from_ints(&[0, 0, 1])]).is_err());
}

#[test]
fn rational_roundtrip_to_f64() {
    assert_eq!(rational_to_f64(&rat(2047, 1024)), 2047.0 / 1024.0);
}
