//! The analytic rings of the line and the explicit maps between them.
//!
//! | ring            | elements                                   | norm at the witness                              |
//! |-----------------|--------------------------------------------|--------------------------------------------------|
//! | overconvergent  | `Σ_{n≥0} a_n Tⁿ`, witness `r > 1`          | `Σ |a_n| rⁿ`                                     |
//! | holomorphic     | `Σ_{n≥0} a_n Tⁿ`, every `r < 1`            | `Σ |a_n| rⁿ` at a queried `r`                    |
//! | outer tail      | `Σ_{n≤m} a_n Tⁿ`, witness `s < 1`          | `max(max_{0≤n≤m} |a_n|, Σ_{n≥0} |a_{-n}| s⁻ⁿ)`  |
//! | polynomial      | `ℂ[T]`, any radius                         | `Σ |a_n| rⁿ`                                     |
//! | two-sided       | Laurent series, witnesses `r > 1`, `s < 1` | nonnegative part at `r` plus negative part at `s` |
//!
//! Witness radii are always explicit data.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Backend, Error, Result};
use crate::random;
use crate::scalar::{GaussRat, Real, Scalar};
use crate::series::{Check, Coeffs, NormValue, Truncation, WeightedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Overconvergent,
    Holomorphic,
    OuterTail,
    Polynomial,
    TwoSided,
}

impl RingKind {
    pub fn tag(self) -> &'static str {
        match self {
            RingKind::Overconvergent => "overconvergent",
            RingKind::Holomorphic => "holomorphic",
            RingKind::OuterTail => "outer",
            RingKind::Polynomial => "polynomial",
            RingKind::TwoSided => "two-sided",
        }
    }
}

impl std::str::FromStr for RingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "overconvergent" | "closed-disc" => RingKind::Overconvergent,
            "holomorphic" | "open-disc" => RingKind::Holomorphic,
            "outer" | "outer-tail" => RingKind::OuterTail,
            "polynomial" | "poly" => RingKind::Polynomial,
            "two-sided" | "twosided" => RingKind::TwoSided,
            other => return Err(Error::Usage(format!("unknown ring tag `{other}`"))),
        })
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Bound on the weighted norm of the coefficients a holomorphic element
/// does not store, as a function of the queried radius `r < 1`.
#[derive(Clone)]
pub enum TailCertificate {
    /// Nothing is omitted.
    Exact,
    /// `|a_n| ≤ bound` for every omitted degree `n > last`. At `r < 1` the
    /// omitted mass is at most `bound · r^(last+1) / (1 - r)`.
    CoefficientBound { bound: Real, last: i64 },
    /// Caller-supplied bound; `None` means no bound at that radius.
    Custom(Arc<dyn Fn(&Real) -> Option<Real> + Send + Sync>),
}

impl fmt::Debug for TailCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailCertificate::Exact => f.write_str("Exact"),
            TailCertificate::CoefficientBound { bound, last } => {
                write!(f, "CoefficientBound {{ bound: {bound}, last: {last} }}")
            }
            TailCertificate::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl TailCertificate {
    pub fn at(&self, r: &Real) -> Option<Real> {
        match self {
            TailCertificate::Exact => Some(Real::zero(r.backend())),
            TailCertificate::CoefficientBound { bound, last } => {
                let one = Real::one(r.backend());
                let gap = match (&one, r) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
                    (a, b) => Real::Float(a.to_f64() - b.to_f64()),
                };
                let inv_gap = gap.recip().ok()?;
                Some(bound.mul(&r.powi(last + 1)).mul(&inv_gap))
            }
            TailCertificate::Custom(f) => f(r),
        }
    }
}

/// Which Banach stage an element inhabits.
#[derive(Clone, Debug)]
pub enum Witness {
    /// A single radius: `r > 1` (overconvergent) or `s < 1` (outer tail).
    Radius(Real),
    /// Outer `r > 1` for the nonnegative part, inner `s < 1` for the rest.
    Pair { outer: Real, inner: Real },
    /// The family over all `r < 1` of a holomorphic element.
    OpenDisc(TailCertificate),
    /// Polynomials carry every radius.
    AnyRadius,
}

#[derive(Clone, Debug)]
pub struct RingElement {
    series: WeightedSeries,
    kind: RingKind,
    witness: Witness,
}

fn nonnegative_support(s: &WeightedSeries, what: &str) -> Result<()> {
    if let Some((lo, _)) = s.support_bounds() {
        if lo < 0 {
            return Err(Error::Support(format!(
                "{what} needs support in degrees >= 0, found degree {lo}"
            )));
        }
    }
    Ok(())
}

impl RingElement {
    /// Element of the overconvergent ring with witness radius `r > 1`.
    pub fn overconvergent(series: WeightedSeries, witness: Real) -> Result<Self> {
        if !witness.gt_one() {
            return Err(Error::RingInvariant(format!(
                "overconvergent witness must exceed 1, got {witness}"
            )));
        }
        nonnegative_support(&series, "an overconvergent element")?;
        let series = series.with_radius(witness.clone())?;
        Ok(RingElement {
            series,
            kind: RingKind::Overconvergent,
            witness: Witness::Radius(witness),
        })
    }

    /// Element of the outer-tail ring with witness `s < 1`.
    pub fn outer_tail(series: WeightedSeries, witness: Real) -> Result<Self> {
        if !witness.lt_one() || !witness.is_positive() {
            return Err(Error::RingInvariant(format!(
                "outer-tail witness must lie in (0, 1), got {witness}"
            )));
        }
        let series = series.with_radius(witness.clone())?;
        Ok(RingElement {
            series,
            kind: RingKind::OuterTail,
            witness: Witness::Radius(witness),
        })
    }

    /// Holomorphic element on the open unit disc: a truncation plus a
    /// certificate for what was left out.
    pub fn holomorphic(series: WeightedSeries, tail: TailCertificate) -> Result<Self> {
        nonnegative_support(&series, "a holomorphic element")?;
        if series.tail().is_some() {
            return Err(Error::RingInvariant(
                "holomorphic elements carry their tail as a certificate, not a fixed bound".into(),
            ));
        }
        Ok(RingElement {
            series,
            kind: RingKind::Holomorphic,
            witness: Witness::OpenDisc(tail),
        })
    }

    pub fn polynomial(series: WeightedSeries) -> Result<Self> {
        if !series.is_polynomial() {
            return Err(Error::Support("not a polynomial".into()));
        }
        Ok(RingElement {
            series,
            kind: RingKind::Polynomial,
            witness: Witness::AnyRadius,
        })
    }

    /// Two-sided Laurent element with witnesses `outer > 1` and `inner < 1`.
    pub fn two_sided(series: WeightedSeries, outer: Real, inner: Real) -> Result<Self> {
        if !outer.gt_one() || !inner.lt_one() || !inner.is_positive() {
            return Err(Error::RingInvariant(format!(
                "two-sided witnesses need outer > 1 > inner > 0, got ({outer}, {inner})"
            )));
        }
        if series.tail().is_some() {
            return Err(Error::RingInvariant("two-sided elements carry no tail bound".into()));
        }
        let series = series.with_radius(outer.clone())?;
        Ok(RingElement {
            series,
            kind: RingKind::TwoSided,
            witness: Witness::Pair { outer, inner },
        })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn series(&self) -> &WeightedSeries {
        &self.series
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn backend(&self) -> Backend {
        self.series.backend()
    }

    /// The single witness radius, when the element has one.
    pub fn witness_radius(&self) -> Option<&Real> {
        match &self.witness {
            Witness::Radius(r) => Some(r),
            _ => None,
        }
    }

    /// Norm in the element's own Banach stage. `at` is required for
    /// holomorphic elements (`r < 1`) and optional for polynomials.
    pub fn ring_norm(&self, at: Option<&Real>) -> Result<NormValue> {
        let s = &self.series;
        match (&self.kind, &self.witness) {
            (RingKind::Overconvergent, _) => Ok(s.weighted_norm()),
            (RingKind::Polynomial, _) => match at {
                Some(r) => Ok(s.clone().with_radius(r.clone())?.weighted_norm()),
                None => Ok(s.weighted_norm()),
            },
            (RingKind::Holomorphic, Witness::OpenDisc(cert)) => {
                let r = at.ok_or(Error::MissingRadius)?;
                if !r.lt_one() || !r.is_positive() {
                    return Err(Error::RingInvariant(format!(
                        "holomorphic norms are taken at radii in (0, 1), got {r}"
                    )));
                }
                let r = r.convert(self.backend())?;
                let body = s.partial_norm_at(&r, i64::MIN, i64::MAX);
                let tail = cert.at(&r).ok_or_else(|| {
                    Error::RingInvariant(format!("tail certificate has no bound at r = {r}"))
                })?;
                Ok(body.add(&real_norm(&tail)))
            }
            (RingKind::OuterTail, Witness::Radius(w)) => {
                let m = s.high_degree().unwrap_or(0).max(0);
                let head = s.max_abs_coefficient(0, m);
                let mut sum = s.partial_norm_at(w, i64::MIN, 0);
                if let Some(t) = s.tail() {
                    sum = sum.add(&real_norm(t));
                }
                Ok(norm_max(&head, &sum))
            }
            (RingKind::TwoSided, Witness::Pair { outer, inner }) => {
                let pos = s.partial_norm_at(outer, 0, i64::MAX);
                let neg = s.partial_norm_at(inner, i64::MIN, -1);
                Ok(pos.add(&neg))
            }
            _ => Err(Error::RingInvariant("witness does not match ring".into())),
        }
    }
}

pub(crate) fn real_norm(t: &Real) -> NormValue {
    match t {
        Real::Exact(q) => NormValue::Certified(crate::certified::SqrtSum::rational(q.clone())),
        Real::Float(x) => NormValue::from_f64(*x),
    }
}

fn norm_max(a: &NormValue, b: &NormValue) -> NormValue {
    match (a, b) {
        (NormValue::Certified(x), NormValue::Certified(y)) => {
            if x.cmp_exact(y) == Ordering::Less {
                b.clone()
            } else {
                a.clone()
            }
        }
        (NormValue::NonFinite, _) | (_, NormValue::NonFinite) => NormValue::NonFinite,
        (x, y) => NormValue::Approx(x.to_f64().max(y.to_f64())),
    }
}

/// Laurent splitting `h ↦ (f, g)` with `f = Σ_{n≥0} a_n Tⁿ` and
/// `g = -Σ_{n≥1} a_{-n} T⁻ⁿ`, so that `f - g = h`.
pub fn laurent_split(h: &RingElement) -> Result<(RingElement, RingElement)> {
    let (outer, inner) = match (&h.kind, &h.witness) {
        (RingKind::TwoSided, Witness::Pair { outer, inner }) => (outer.clone(), inner.clone()),
        _ => return Err(Error::RingInvariant(format!("cannot split a {} element", h.kind))),
    };
    let s = h.series.trim();
    let f = s.window(0, i64::MAX);
    let g = s.window(i64::MIN, -1).neg();
    Ok((
        RingElement::overconvergent(f, outer)?,
        RingElement::outer_tail(g, inner)?,
    ))
}

/// Norm bounds of a splitting: `(‖f‖ ≤ ‖h‖, ‖g‖ ≤ ‖h‖)`.
pub fn split_bounds(h: &RingElement, f: &RingElement, g: &RingElement) -> Result<(Check, Check)> {
    let nh = h.ring_norm(None)?;
    Ok((f.ring_norm(None)?.le(&nh), g.ring_norm(None)?.le(&nh)))
}

/// The difference map `(f, g) ↦ f - g` into the two-sided ring.
pub fn difference(f: &RingElement, g: &RingElement) -> Result<RingElement> {
    let (outer, inner) = match (&f.witness, &g.witness) {
        (Witness::Radius(r), Witness::Radius(s)) if f.kind == RingKind::Overconvergent && g.kind == RingKind::OuterTail => {
            (r.clone(), s.clone())
        }
        _ => return Err(Error::RingInvariant("difference needs (overconvergent, outer tail)".into())),
    };
    if f.series.tail().is_some() || g.series.tail().is_some() {
        return Err(Error::RingInvariant("difference of elements with tail bounds".into()));
    }
    let gs = g.series.clone().with_radius(outer.clone())?;
    let d = f.series.sub(&gs)?.trim();
    RingElement::two_sided(d, outer, inner)
}

/// Result of testing whether `(f, g)` lies in the kernel of the difference.
#[derive(Clone, Debug, PartialEq)]
pub enum Recovery {
    /// `f = g` as Laurent series; the common value is a polynomial.
    Polynomial(WeightedSeries),
    /// The coefficients first differ in this degree.
    NotEqual { degree: i64 },
}

pub fn recover_polynomial(f: &RingElement, g: &RingElement) -> Result<Recovery> {
    if f.kind != RingKind::Overconvergent || g.kind != RingKind::OuterTail {
        return Err(Error::RingInvariant("recovery needs (overconvergent, outer tail)".into()));
    }
    if f.backend() != g.backend() {
        return Err(Error::BackendMismatch(f.backend(), g.backend()));
    }
    if let Some(n) = f.series.first_difference(&g.series) {
        return Ok(Recovery::NotEqual { degree: n });
    }
    if f.series.tail().is_some() || g.series.tail().is_some() {
        return Err(Error::Support("tail bounds prevent an exact comparison".into()));
    }
    Ok(Recovery::Polynomial(f.series.trim()))
}

/// An element `Σ bᵢ Uⁱ` of `E_n = ⊕ B·Uⁱ` with `B = ℂ{T/r}`, `r < 1`, and
/// norm `Σ ‖bᵢ‖_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    entries: Vec<WeightedSeries>,
    radius: Real,
}

impl ModuleElement {
    pub fn new(entries: Vec<WeightedSeries>, radius: Real) -> Result<Self> {
        if !radius.is_positive() || !radius.lt_one() {
            return Err(Error::RingInvariant(format!(
                "the base radius must lie in (0, 1), got {radius}"
            )));
        }
        let entries = entries
            .into_iter()
            .map(|b| {
                nonnegative_support(&b, "an entry of E_n")?;
                b.with_radius(radius.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleElement { entries, radius })
    }

    pub fn entries(&self) -> &[WeightedSeries] {
        &self.entries
    }

    pub fn radius(&self) -> &Real {
        &self.radius
    }

    pub fn backend(&self) -> Backend {
        self.radius.backend()
    }

    /// Index of the top `U` power, `None` for the empty element.
    pub fn u_degree(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn norm(&self) -> NormValue {
        self.entries
            .iter()
            .fold(NormValue::zero(self.backend()), |acc, b| acc.add(&b.weighted_norm()))
    }

    /// `Σ bᵢ(T) Tⁱ`, the evaluation at `U = T`.
    pub fn evaluate_at_t(&self) -> Result<WeightedSeries> {
        let mut acc = WeightedSeries::zero(self.radius.clone())?;
        for (i, b) in self.entries.iter().enumerate() {
            acc = acc.add(&b.shift(i as i64))?;
        }
        Ok(acc)
    }

    /// Multiplication by `T - U`.
    pub fn mul_t_minus_u(&self) -> Result<ModuleElement> {
        let n = self.entries.len();
        let zero = WeightedSeries::zero(self.radius.clone())?;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t_part = self.entries.get(i).map(|c| c.shift(1)).unwrap_or_else(|| zero.clone());
            let u_part = if i > 0 { self.entries[i - 1].clone() } else { zero.clone() };
            out.push(t_part.sub(&u_part)?);
        }
        ModuleElement::new(out, self.radius.clone())
    }

    /// Same element with trimmed entries and no trailing zero entries.
    pub fn normalized(&self) -> ModuleElement {
        let mut entries: Vec<WeightedSeries> = self.entries.iter().map(WeightedSeries::trim).collect();
        while entries.last().is_some_and(|b| b.is_zero()) {
            entries.pop();
        }
        ModuleElement {
            entries,
            radius: self.radius.clone(),
        }
    }

    /// Equality of coefficients (radii agree by construction).
    pub fn same_as(&self, other: &ModuleElement) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.entries.len() == b.entries.len()
            && a.entries.iter().zip(&b.entries).all(|(x, y)| x.same_coefficients(y))
    }
}

/// Quotient and bound data of a division by `T - U`.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotient: ModuleElement,
    pub norm_b: NormValue,
    pub norm_c: NormValue,
    /// `‖b‖ / (1 - r)`.
    pub bound: NormValue,
    /// `‖c‖ ≤ ‖b‖ / (1 - r)`.
    pub within_bound: Check,
}

fn one_minus(r: &Real) -> Real {
    match r {
        Real::Exact(q) => Real::Exact(num_rational::BigRational::from_integer(1.into()) - q),
        Real::Float(x) => Real::Float(1.0 - x),
    }
}

fn enforce_cap(s: WeightedSeries, trunc: &Truncation) -> Result<WeightedSeries> {
    let cap = trunc.cap as i64;
    match s.support_bounds() {
        Some((_, hi)) if hi > cap => {
            if !trunc.track_tail {
                return Err(Error::DegreeCapExceeded {
                    cap: trunc.cap,
                    degree: hi,
                });
            }
            let dropped = s.partial_norm_at(s.radius(), cap + 1, i64::MAX).upper();
            let tail = match s.tail() {
                Some(t) => t.add(&dropped),
                None => dropped,
            };
            s.window(i64::MIN, cap).with_tail(Some(tail))
        }
        _ => Ok(s),
    }
}

/// Divides a kernel element `b` of `E_{n+1}` by `T - U`:
/// `c_n = -b_{n+1}`, `c_i = T·c_{i+1} - b_{i+1}`, which unrolls to
/// `c_i = -Σ_{k=i+1}^{n+1} T^(k-i-1) b_k`.
pub fn divide_by_t_minus_u(b: &ModuleElement, trunc: &Truncation) -> Result<Division> {
    let residual = b.evaluate_at_t()?;
    if !residual.trim().is_empty() {
        return Err(Error::NotInKernel {
            residual: residual.weighted_norm().to_string(),
        });
    }
    let r = b.radius.clone();
    let top = b.entries.len();
    let mut quotient: Vec<WeightedSeries> = Vec::new();
    if top >= 2 {
        let n = top - 2;
        let mut c = vec![WeightedSeries::zero(r.clone())?; n + 1];
        c[n] = b.entries[n + 1].neg();
        for i in (0..n).rev() {
            c[i] = enforce_cap(c[i + 1].shift(1).sub(&b.entries[i + 1])?, trunc)?;
        }
        quotient = c;
    }
    let quotient = ModuleElement::new(quotient, r.clone())?;
    let norm_b = b.norm();
    let norm_c = quotient.norm();
    let k = one_minus(&r).recip()?;
    let bound = norm_b.scale(&k);
    let within_bound = norm_c.le(&bound);
    Ok(Division {
        quotient,
        norm_b,
        norm_c,
        bound,
        within_bound,
    })
}

/// One randomized division trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub degree: usize,
    pub norm_b: f64,
    pub norm_c: f64,
    pub ratio: f64,
    pub bound: f64,
    pub pass: bool,
}

impl fmt::Display for TrialRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial={} degree={} normB={:.12e} normC={:.12e} ratio={:.12e} bound={:.12e} pass={}",
            self.trial, self.degree, self.norm_b, self.norm_c, self.ratio, self.bound, self.pass
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrictnessReport {
    pub records: Vec<TrialRecord>,
}

impl StrictnessReport {
    pub fn max_ratio(&self) -> f64 {
        self.records.iter().map(|t| t.ratio).fold(0.0, f64::max)
    }

    pub fn violations(&self) -> usize {
        self.records.iter().filter(|t| !t.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }

    /// Concatenation; associative, so per-worker reports merge in any
    /// grouping.
    pub fn merge(mut self, other: StrictnessReport) -> StrictnessReport {
        self.records.extend(other.records);
        self
    }
}

/// Random `c′ = Σ c′ᵢ Uⁱ` with `U`-degree and `T`-degree at most `max_degree`.
pub fn random_module_element(
    rng: &mut random::TrialRng,
    radius: &Real,
    max_degree: usize,
) -> Result<ModuleElement> {
    use rand::Rng;
    let n = rng.random_range(0..=max_degree);
    let mut entries = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        let deg = rng.random_range(0..=max_degree);
        let coeffs = random::gauss_vec(rng, deg + 1, 5, 4, 0.3);
        let s = match radius {
            Real::Exact(_) => WeightedSeries::new(0, Coeffs::Exact(coeffs), radius.clone(), None)?,
            Real::Float(_) => WeightedSeries::new(
                0,
                Coeffs::Float(coeffs.iter().map(GaussRat::to_complex64).collect()),
                radius.clone(),
                None,
            )?,
        };
        entries.push(s);
    }
    ModuleElement::new(entries, radius.clone())
}

/// Runs `trials` randomized divisions at radius `r ∈ (0, 1)`; every kernel
/// element is built as `(T - U)·c′`, divided, and checked for exact
/// multiply-back and the `1/(1 - r)` bound.
pub fn strictness_certificate(
    r: &Real,
    trials: usize,
    max_degree: usize,
    seed: u64,
    trunc: &Truncation,
) -> Result<StrictnessReport> {
    if !r.is_positive() || !r.lt_one() {
        return Err(Error::Usage(format!("radius must lie in (0, 1), got {r}")));
    }
    let stream = match r {
        Real::Exact(q) => q.to_string().bytes().fold(7u64, |h, b| h.wrapping_mul(31).wrapping_add(u64::from(b))),
        Real::Float(x) => x.to_bits(),
    };
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialRecord> {
            let mut rng = random::trial_rng(seed, stream, trial as u64);
            let c_true = random_module_element(&mut rng, r, max_degree.min(trunc.cap))?;
            let b = c_true.mul_t_minus_u()?;
            let div = divide_by_t_minus_u(&b, trunc)?;
            let back = div.quotient.mul_t_minus_u()?;
            let exact_back = back.same_as(&b) && div.quotient.same_as(&c_true);
            let nb = div.norm_b.to_f64();
            let nc = div.norm_c.to_f64();
            Ok(TrialRecord {
                trial,
                degree: c_true.u_degree().unwrap_or(0),
                norm_b: nb,
                norm_c: nc,
                ratio: if nb > 0.0 { nc / nb } else { 0.0 },
                bound: one_minus(r).recip()?.to_f64(),
                pass: exact_back && div.within_bound.holds(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StrictnessReport { records })
}

/// Result of `T ↦ T⁻¹` together with the norms before and after.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub element: RingElement,
    pub norm_before: NormValue,
    pub norm_after: NormValue,
}

/// Variable inversion: an overconvergent element at `r′ > 1` becomes an
/// outer-tail element at `1/r′`, and an outer-tail element with support in
/// degrees ≤ 0 goes back.
pub fn invert_variable(x: &RingElement) -> Result<Inversion> {
    let w = x
        .witness_radius()
        .ok_or_else(|| Error::RingInvariant(format!("cannot invert a {} element", x.kind)))?;
    let inv = x.series.invert_variable()?;
    let element = match x.kind {
        RingKind::Overconvergent => RingElement::outer_tail(inv, w.recip()?)?,
        RingKind::OuterTail => {
            if let Some((_, hi)) = x.series.support_bounds() {
                if hi > 0 {
                    return Err(Error::Support(format!(
                        "inverting an outer-tail element with degree {hi} > 0 leaves the ring"
                    )));
                }
            }
            RingElement::overconvergent(inv, w.recip()?)?
        }
        other => return Err(Error::RingInvariant(format!("cannot invert a {other} element"))),
    };
    Ok(Inversion {
        norm_before: x.ring_norm(None)?,
        norm_after: element.ring_norm(None)?,
        element,
    })
}

/// Value and bound of the duality pairing.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub value: Scalar,
    pub modulus: NormValue,
    /// `r·‖f‖_r·‖g‖`.
    pub bound: NormValue,
    pub within_bound: Check,
}

/// `⟨f, g⟩ = Σ_{n≥0} a_n b_{-(n+1)}` for `f ∈ ℂ{T/r}` and `g` in the outer
/// tail ring at the same `r` with support in degrees ≤ -1.
pub fn dual_pairing(f: &WeightedSeries, g: &RingElement) -> Result<Pairing> {
    if g.kind != RingKind::OuterTail {
        return Err(Error::RingInvariant("pairing needs an outer-tail element".into()));
    }
    let w = g.witness_radius().expect("outer tail has a radius");
    if f.radius().cmp_value(w) != Ordering::Equal {
        return Err(Error::RadiusMismatch(format!(
            "f has radius {} but g has witness {w}",
            f.radius()
        )));
    }
    nonnegative_support(f, "the left argument of the pairing")?;
    if let Some((_, hi)) = g.series.support_bounds() {
        if hi > -1 {
            return Err(Error::Support(format!(
                "the right argument of the pairing needs support <= -1, found degree {hi}"
            )));
        }
    }
    if f.backend() != g.backend() {
        return Err(Error::BackendMismatch(f.backend(), g.backend()));
    }
    let mut value = Scalar::zero(f.backend());
    if let Some((_, top)) = f.support_bounds() {
        for n in 0..=top {
            let a = f.coeff(n);
            if a.is_zero() {
                continue;
            }
            value = value.try_add(&a.try_mul(&g.series.coeff(-(n + 1)))?)?;
        }
    }
    let modulus = match &value {
        Scalar::Exact(v) => NormValue::Certified(v.modulus_exact()),
        Scalar::Float(z) => NormValue::from_f64(z.norm()),
    };
    let bound = f.weighted_norm().mul(&g.ring_norm(None)?).scale(w);
    let within_bound = modulus.le(&bound);
    Ok(Pairing {
        value,
        modulus,
        bound,
        within_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::parse_series;
    use crate::scalar::rat;

    fn ex(s: &str, r: (i64, i64)) -> WeightedSeries {
        parse_series(s, Backend::Exact, Some(Real::ratio(r.0, r.1))).unwrap()
    }

    fn q(n: i64, d: i64) -> NormValue {
        NormValue::Certified(crate::certified::SqrtSum::rational(rat(n, d)))
    }

    #[test]
    fn outer_tail_norms() {
        let g = RingElement::outer_tail(ex("-1:1", (1, 2)), Real::ratio(1, 2)).unwrap();
        assert_eq!(g.ring_norm(None).unwrap(), q(2, 1));
        // max(|3|, |3|·1 + |1|·2) with the n = 0 term inside the sum
        let g = RingElement::outer_tail(ex("0:3 -1:1", (1, 2)), Real::ratio(1, 2)).unwrap();
        assert_eq!(g.ring_norm(None).unwrap(), q(5, 1));
        // positive degrees only enter through the max
        let g = RingElement::outer_tail(ex("2:7 -1:1", (1, 2)), Real::ratio(1, 2)).unwrap();
        assert_eq!(g.ring_norm(None).unwrap(), q(7, 1));
        let f = RingElement::overconvergent(ex("0:1 1:1", (2, 1)), Real::ratio(2, 1)).unwrap();
        assert_eq!(f.ring_norm(None).unwrap(), q(3, 1));
    }

    #[test]
    fn witness_invariants() {
        assert!(RingElement::overconvergent(ex("0:1", (1, 1)), Real::ratio(1, 1)).is_err());
        assert!(RingElement::overconvergent(ex("-1:1", (2, 1)), Real::ratio(2, 1)).is_err());
        assert!(RingElement::outer_tail(ex("0:1", (1, 1)), Real::ratio(3, 2)).is_err());
        assert!(RingElement::two_sided(ex("0:1", (2, 1)), Real::ratio(1, 2), Real::ratio(1, 2)).is_err());
    }

    #[test]
    fn holomorphic_needs_radius() {
        // 1/(1-T) truncated at degree 3 with |a_n| ≤ 1 beyond
        let s = ex("0:1 1:1 2:1 3:1", (1, 2));
        let h = RingElement::holomorphic(
            s,
            TailCertificate::CoefficientBound {
                bound: Real::ratio(1, 1),
                last: 3,
            },
        )
        .unwrap();
        assert!(matches!(h.ring_norm(None), Err(Error::MissingRadius)));
        // Σ (1/2)^n = 2 exactly: 15/8 stored + (1/2)^4 / (1/2) = 1/8
        assert_eq!(h.ring_norm(Some(&Real::ratio(1, 2))).unwrap(), q(2, 1));
        assert!(h.ring_norm(Some(&Real::ratio(1, 1))).is_err());
    }

    #[test]
    fn split_sign_convention() {
        let h = RingElement::two_sided(ex("1:1 0:1 -1:1", (2, 1)), Real::ratio(2, 1), Real::ratio(1, 2)).unwrap();
        let (f, g) = laurent_split(&h).unwrap();
        assert!(f.series().same_coefficients(&ex("0:1 1:1", (2, 1))));
        assert!(g.series().same_coefficients(&ex("-1:-1", (1, 2))));
        let (a, b) = split_bounds(&h, &f, &g).unwrap();
        assert!(a.holds() && b.holds());
        let back = difference(&f, &g).unwrap();
        assert!(back.series().same_coefficients(h.series()));
    }

    #[test]
    fn split_of_polynomial_has_empty_tail() {
        let h = RingElement::two_sided(ex("0:1 2:-3", (2, 1)), Real::ratio(2, 1), Real::ratio(1, 2)).unwrap();
        let (f, g) = laurent_split(&h).unwrap();
        assert!(g.series().is_zero());
        assert!(f.series().same_coefficients(h.series()));
    }

    #[test]
    fn recovery() {
        let f = RingElement::overconvergent(ex("0:1 1:1", (2, 1)), Real::ratio(2, 1)).unwrap();
        let g = RingElement::outer_tail(ex("0:1 1:1", (1, 2)), Real::ratio(1, 2)).unwrap();
        assert!(matches!(recover_polynomial(&f, &g).unwrap(), Recovery::Polynomial(_)));
        let g2 = RingElement::outer_tail(ex("0:1 1:1 -1:1", (1, 2)), Real::ratio(1, 2)).unwrap();
        assert_eq!(recover_polynomial(&f, &g2).unwrap(), Recovery::NotEqual { degree: -1 });
    }

    #[test]
    fn divide_t_minus_u() {
        let r = Real::ratio(1, 2);
        let b = ModuleElement::new(vec![ex("1:1", (1, 2)), ex("0:-1", (1, 2))], r.clone()).unwrap();
        let d = divide_by_t_minus_u(&b, &Truncation::default()).unwrap();
        assert_eq!(d.quotient.entries().len(), 1);
        assert!(d.quotient.entries()[0].same_coefficients(&ex("0:1", (1, 2))));
        assert_eq!(d.norm_c, q(1, 1));
        assert_eq!(d.bound, q(3, 1)); // (1 + r)/(1 - r)
        assert!(d.within_bound.holds());

        // T² - U² = (T - U)(T + U)
        let b = ModuleElement::new(vec![ex("2:1", (1, 2)), ex("0:0", (1, 2)), ex("0:-1", (1, 2))], r.clone()).unwrap();
        let d = divide_by_t_minus_u(&b, &Truncation::default()).unwrap();
        let want = ModuleElement::new(vec![ex("1:1", (1, 2)), ex("0:1", (1, 2))], r.clone()).unwrap();
        assert!(d.quotient.same_as(&want));

        let bad = ModuleElement::new(vec![ex("0:1", (1, 2))], r).unwrap();
        assert!(matches!(
            divide_by_t_minus_u(&bad, &Truncation::default()),
            Err(Error::NotInKernel { .. })
        ));
    }

    #[test]
    fn empty_certificate_is_vacuous() {
        let rep = strictness_certificate(&Real::ratio(1, 2), 0, 5, 0, &Truncation::default()).unwrap();
        assert!(rep.records.is_empty());
        assert!(rep.passed());
    }

    #[test]
    fn inversion_round_trip() {
        let x = RingElement::overconvergent(ex("0:1 1:1", (2, 1)), Real::ratio(2, 1)).unwrap();
        let inv = invert_variable(&x).unwrap();
        assert_eq!(inv.element.kind(), RingKind::OuterTail);
        assert!(inv.element.series().same_coefficients(&ex("0:1 -1:1", (1, 2))));
        assert!(inv.norm_before.approx_eq(&inv.norm_after));
        let back = invert_variable(&inv.element).unwrap();
        assert!(back.element.series().same_coefficients(x.series()));
    }

    #[test]
    fn pairing_examples() {
        let r = (1, 2);
        let g = RingElement::outer_tail(ex("-1:1", r), Real::ratio(1, 2)).unwrap();
        let p = dual_pairing(&ex("0:1", r), &g).unwrap();
        assert_eq!(p.value, Scalar::one(Backend::Exact));
        assert!(p.within_bound.holds());
        let p = dual_pairing(&ex("1:1", r), &g).unwrap();
        assert!(p.value.is_zero());
        let g0 = RingElement::outer_tail(ex("0:1", r), Real::ratio(1, 2)).unwrap();
        assert!(matches!(dual_pairing(&ex("0:1", r), &g0), Err(Error::Support(_))));
    }
}
