//! Evaluation-point model of the spectrum of a one-variable algebra
//! `ℂ[T]/(p)`, seminorm axiom checks, and rational subsets.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::certified::SqrtSum;
use crate::error::{Backend, Error, Result};
use crate::poly::Poly;
use crate::roots::{certified_roots, rounding_slack, CertifiedRoot};
use crate::scalar::{GaussRat, Scalar};
use crate::series::{Check, NormValue};

/// Radius bound used for spectrum points.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// `ℂ[T]/(relation)`; the zero relation is the free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDescriptor {
    relation: Poly,
}

impl AlgebraDescriptor {
    pub fn free() -> Self {
        AlgebraDescriptor { relation: Poly::zero() }
    }

    pub fn quotient(relation: Poly) -> Self {
        AlgebraDescriptor { relation }
    }

    pub fn relation(&self) -> &Poly {
        &self.relation
    }
}

/// The seminorm `f ↦ |f(z)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub z: Scalar,
    /// Certified distance to the true point, when `z` approximates a root.
    pub radius: Option<BigRational>,
}

impl SpectrumPoint {
    pub fn exact(z: GaussRat) -> Self {
        SpectrumPoint {
            z: Scalar::Exact(z),
            radius: None,
        }
    }

    /// `‖f‖ = |f(z)|`, exact for exact points.
    pub fn seminorm(&self, f: &Poly) -> NormValue {
        match &self.z {
            Scalar::Exact(z) => NormValue::Certified(f.eval(z).modulus_exact()),
            Scalar::Float(z) => NormValue::Approx(f.eval_f64(*z).norm()),
        }
    }

    /// Record `re im certified_radius`.
    pub fn record(&self) -> String {
        let c = self.z.to_complex64();
        let r = match (&self.z, &self.radius) {
            (Scalar::Exact(z), Some(r)) => crate::scalar::rational_to_f64(&(r + rounding_slack(z))),
            (_, Some(r)) => crate::scalar::rational_to_f64(r),
            (_, None) => 0.0,
        };
        format!("{:.17e} {:.17e} {:.3e}", c.re, c.im, r)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    /// Free algebra: every complex number is a point.
    AllOfC,
    /// The relation is a nonzero constant; the algebra is zero.
    Inconsistent,
    Points(Vec<SpectrumPoint>),
}

impl Spectrum {
    pub fn points(&self) -> &[SpectrumPoint] {
        match self {
            Spectrum::Points(p) => p,
            _ => &[],
        }
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spectrum::AllOfC => writeln!(f, "spectrum=all-of-C"),
            Spectrum::Inconsistent => writeln!(f, "spectrum=empty reason=inconsistent"),
            Spectrum::Points(ps) => {
                for p in ps {
                    writeln!(f, "{}", p.record())?;
                }
                Ok(())
            }
        }
    }
}

/// Points of `ℂ[T]/(p)`: the distinct roots of `p`, each with a certified
/// radius at most [`ROOT_TOLERANCE`].
pub fn gelfand_points(a: &AlgebraDescriptor) -> Result<Spectrum> {
    match a.relation.degree() {
        None => Ok(Spectrum::AllOfC),
        Some(0) => Ok(Spectrum::Inconsistent),
        Some(_) => {
            let roots = certified_roots(&a.relation, ROOT_TOLERANCE)?;
            Ok(Spectrum::Points(
                roots
                    .into_iter()
                    .map(|CertifiedRoot { center, radius }| SpectrumPoint {
                        z: Scalar::Exact(center),
                        radius: Some(radius),
                    })
                    .collect(),
            ))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomViolation {
    /// 1: `‖0‖ = 0`, `‖1‖ = 1`; 2: `‖a‖ ≤ |a|`; 3: multiplicativity;
    /// 4: triangle inequality.
    pub axiom: u8,
    pub a: Poly,
    pub b: Option<Poly>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeminormReport {
    pub checks: usize,
    pub undecided: usize,
    pub violations: Vec<AxiomViolation>,
}

impl SeminormReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.undecided == 0
    }
}

fn record_check(rep: &mut SeminormReport, c: Check, v: impl FnOnce() -> AxiomViolation) {
    rep.checks += 1;
    match c {
        Check::Holds => {}
        Check::Fails => rep.violations.push(v()),
        Check::Undecided => rep.undecided += 1,
    }
}

/// Checks axioms (1), (3), (4) for a candidate map on a finite sample, over
/// all pairs whose product or sum is itself sampled. Axiom (2) is checked
/// only against a caller-supplied norm.
pub fn seminorm_axiom_check(
    sample: &[(Poly, NormValue)],
    reference: Option<&dyn Fn(&Poly) -> NormValue>,
) -> SeminormReport {
    let mut rep = SeminormReport::default();
    let mut table: HashMap<&Poly, &NormValue> = HashMap::new();
    for (p, v) in sample {
        table.entry(p).or_insert(v);
    }
    let approx_eq = |x: &NormValue, y: &NormValue| match (x.le(y), y.le(x)) {
        (Check::Holds, Check::Holds) => Check::Holds,
        (Check::Undecided, _) | (_, Check::Undecided) => Check::Undecided,
        _ => Check::Fails,
    };
    for (p, v) in sample {
        if p.is_zero() {
            let zero = NormValue::zero(Backend::Exact);
            record_check(&mut rep, approx_eq(v, &zero), || AxiomViolation {
                axiom: 1,
                a: p.clone(),
                b: None,
                detail: format!("‖0‖ = {v}"),
            });
        }
        if p.is_one() {
            let one = NormValue::Certified(SqrtSum::rational(BigRational::from_integer(1.into())));
            record_check(&mut rep, approx_eq(v, &one), || AxiomViolation {
                axiom: 1,
                a: p.clone(),
                b: None,
                detail: format!("‖1‖ = {v}"),
            });
        }
        if let Some(norm) = reference {
            let bound = norm(p);
            record_check(&mut rep, v.le(&bound), || AxiomViolation {
                axiom: 2,
                a: p.clone(),
                b: None,
                detail: format!("‖a‖ = {v} > {bound}"),
            });
        }
    }
    for (i, (a, va)) in sample.iter().enumerate() {
        for (b, vb) in &sample[i..] {
            if let Some(vab) = table.get(&a.mul(b)) {
                let prod = va.mul(vb);
                record_check(&mut rep, approx_eq(vab, &prod), || AxiomViolation {
                    axiom: 3,
                    a: a.clone(),
                    b: Some(b.clone()),
                    detail: format!("‖ab‖ = {vab}, ‖a‖‖b‖ = {prod}"),
                });
            }
            if let Some(vs) = table.get(&a.add(b)) {
                let sum = va.add(vb);
                record_check(&mut rep, vs.le(&sum), || AxiomViolation {
                    axiom: 4,
                    a: a.clone(),
                    b: Some(b.clone()),
                    detail: format!("‖a+b‖ = {vs} > {sum}"),
                });
            }
        }
    }
    rep
}

/// `{x : ‖f_i(x)‖ ≤ ‖g(x)‖ for all i}` with `f_1, …, f_n, g` generating the
/// unit ideal of `ℂ[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubsetSpec {
    numerators: Vec<Poly>,
    denominator: Poly,
}

impl RationalSubsetSpec {
    pub fn new(numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        let g = numerators.iter().fold(denominator.clone(), |acc, f| acc.gcd(f));
        if !g.is_one() {
            return Err(Error::NotUnitIdeal { witness: g.to_string() });
        }
        Ok(RationalSubsetSpec {
            numerators,
            denominator,
        })
    }

    pub fn numerators(&self) -> &[Poly] {
        &self.numerators
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }
}

impl fmt::Display for RationalSubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, n) in self.numerators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "; {})", self.denominator)
    }
}

/// Whether `x` lies in the rational subset: `|f_i(z)|² ≤ |g(z)|²` exactly
/// for exact points.
pub fn rational_membership(x: &SpectrumPoint, r: &RationalSubsetSpec) -> bool {
    match &x.z {
        Scalar::Exact(z) => {
            let g = r.denominator.eval(z).norm_sqr();
            r.numerators.iter().all(|f| f.eval(z).norm_sqr() <= g)
        }
        Scalar::Float(z) => {
            let g = r.denominator.eval_f64(*z).norm();
            r.numerators.iter().all(|f| f.eval_f64(*z).norm() <= g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn q(n: i64) -> NormValue {
        NormValue::Certified(SqrtSum::rational(rat(n, 1)))
    }

    #[test]
    fn spectra() {
        let s = gelfand_points(&AlgebraDescriptor::quotient(p("T^2+1"))).unwrap();
        assert_eq!(s.points().len(), 2);
        let s = gelfand_points(&AlgebraDescriptor::quotient(p("T"))).unwrap();
        assert_eq!(s.points()[0].z, Scalar::Exact(GaussRat::zero()));
        assert_eq!(gelfand_points(&AlgebraDescriptor::free()).unwrap(), Spectrum::AllOfC);
        assert_eq!(
            gelfand_points(&AlgebraDescriptor::quotient(p("3"))).unwrap(),
            Spectrum::Inconsistent
        );
    }

    #[test]
    fn evaluation_passes() {
        let x = SpectrumPoint::exact(GaussRat::from_ints(2, 0));
        let sample: Vec<(Poly, NormValue)> = ["1", "T", "T+1", "T^2+T"]
            .iter()
            .map(|s| {
                let f = p(s);
                let v = x.seminorm(&f);
                (f, v)
            })
            .collect();
        let rep = seminorm_axiom_check(&sample, None);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.checks > 0);
    }

    #[test]
    fn degree_plus_one_is_not_multiplicative() {
        let sample = vec![(p("T"), q(2)), (p("T"), q(2)), (p("T^2"), q(3))];
        let rep = seminorm_axiom_check(&sample, None);
        assert!(rep.violations.iter().any(|v| v.axiom == 3));
    }

    #[test]
    fn mostly_zero_map() {
        let sample = vec![(p("1"), q(1)), (p("T"), q(0))];
        let rep = seminorm_axiom_check(&sample, None);
        assert!(rep.passed());
    }

    #[test]
    fn rational_subsets() {
        let disc = RationalSubsetSpec::new(vec![p("T")], p("1")).unwrap();
        let half = SpectrumPoint::exact(GaussRat::new(rat(1, 2), rat(0, 1)));
        assert!(rational_membership(&half, &disc));
        assert!(!rational_membership(&SpectrumPoint::exact(GaussRat::from_ints(2, 0)), &disc));
        let outside = RationalSubsetSpec::new(vec![p("1")], p("T")).unwrap();
        // 3/5 + 4/5 i has modulus exactly 1
        let z = SpectrumPoint::exact(GaussRat::new(rat(3, 5), rat(4, 5)));
        assert!(rational_membership(&z, &outside));
        assert!(matches!(
            RationalSubsetSpec::new(vec![p("T")], p("T^2")),
            Err(Error::NotUnitIdeal { .. })
        ));
    }
}
