//! Truncated Laurent series with a weight radius and a certified tail.
//!
//! A [`WeightedSeries`] stores the coefficients `a_low ..= a_high` densely,
//! the radius `r` of its weighted ℓ¹ norm `Σ |a_n| rⁿ`, and an optional
//! bound on the weighted norm of every term that was never stored or was
//! dropped by truncation. The bound is carried through every operation.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::certified::{Interval, SqrtSum};
use crate::error::{Backend, Error, Result};
use crate::scalar::{rat_pow, GaussRat, Real, Scalar};

pub const DEFAULT_DEGREE_CAP: usize = 256;

/// Bits of precision used when an exact bound has to be rounded up to a
/// rational (tail bounds, scaled tails).
pub(crate) const TAIL_BITS: u32 = 96;

/// Dense coefficient storage, one vector per backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeffs {
    Exact(Vec<GaussRat>),
    Float(Vec<Complex64>),
}

impl Coeffs {
    pub fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn backend(&self) -> Backend {
        match self {
            Coeffs::Exact(_) => Backend::Exact,
            Coeffs::Float(_) => Backend::Float,
        }
    }

    fn is_zero_at(&self, i: usize) -> bool {
        match self {
            Coeffs::Exact(v) => v[i].is_zero(),
            Coeffs::Float(v) => v[i].re == 0.0 && v[i].im == 0.0,
        }
    }
}

/// Degree cap and tail policy for products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    /// Stored degrees must lie in `[-cap, cap]`.
    pub cap: usize,
    /// Fold dropped terms into the tail bound instead of failing.
    pub track_tail: bool,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            cap: DEFAULT_DEGREE_CAP,
            track_tail: false,
        }
    }
}

impl Truncation {
    pub fn with_cap(cap: usize) -> Self {
        Truncation {
            cap,
            track_tail: false,
        }
    }

    pub fn tracking(cap: usize) -> Self {
        Truncation {
            cap,
            track_tail: true,
        }
    }
}

/// Outcome of a certified or tolerance-based comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails,
    Undecided,
}

impl Check {
    pub fn holds(self) -> bool {
        self == Check::Holds
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Holds => "true",
            Check::Fails => "false",
            Check::Undecided => "undecided",
        })
    }
}

/// Relative tolerance for float-backend norm comparisons.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// A nonnegative real produced by a norm.
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    /// Exact value; enclosures of any width are available.
    Certified(SqrtSum),
    /// Rounded double-precision value.
    Approx(f64),
    /// Float overflow or NaN.
    NonFinite,
}

impl NormValue {
    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Exact => NormValue::Certified(SqrtSum::zero()),
            Backend::Float => NormValue::Approx(0.0),
        }
    }

    pub(crate) fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            NormValue::Approx(x)
        } else {
            NormValue::NonFinite
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, NormValue::NonFinite)
    }

    /// Certified enclosure (exact) or a degenerate interval at the rounded
    /// value (float). `None` for non-finite values.
    pub fn interval(&self, bits: u32) -> Option<Interval> {
        match self {
            NormValue::Certified(s) => Some(s.enclosure(bits)),
            NormValue::Approx(x) => Some(Interval::point_f64(*x)),
            NormValue::NonFinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Certified(s) => s.to_f64(),
            NormValue::Approx(x) => *x,
            NormValue::NonFinite => f64::INFINITY,
        }
    }

    /// A rational upper bound (exact) or the value itself (float).
    pub(crate) fn upper(&self) -> Real {
        match self {
            NormValue::Certified(s) => Real::Exact(s.enclosure(TAIL_BITS).hi),
            other => Real::Float(other.to_f64()),
        }
    }

    pub fn add(&self, other: &NormValue) -> NormValue {
        match (self, other) {
            (NormValue::Certified(a), NormValue::Certified(b)) => NormValue::Certified(a.add(b)),
            (NormValue::NonFinite, _) | (_, NormValue::NonFinite) => NormValue::NonFinite,
            (a, b) => NormValue::from_f64(a.to_f64() + b.to_f64()),
        }
    }

    pub fn mul(&self, other: &NormValue) -> NormValue {
        match (self, other) {
            (NormValue::Certified(a), NormValue::Certified(b)) => NormValue::Certified(a.mul(b)),
            (NormValue::NonFinite, _) | (_, NormValue::NonFinite) => NormValue::NonFinite,
            (a, b) => NormValue::from_f64(a.to_f64() * b.to_f64()),
        }
    }

    pub fn scale(&self, k: &Real) -> NormValue {
        match (self, k) {
            (NormValue::Certified(a), Real::Exact(q)) => NormValue::Certified(a.scale(q)),
            (NormValue::NonFinite, _) => NormValue::NonFinite,
            (a, k) => NormValue::from_f64(a.to_f64() * k.to_f64()),
        }
    }

    /// `self ≤ other`: exact when both are certified, relative tolerance
    /// [`FLOAT_REL_TOL`] otherwise.
    pub fn le(&self, other: &NormValue) -> Check {
        match (self, other) {
            (NormValue::NonFinite, _) | (_, NormValue::NonFinite) => Check::Undecided,
            (NormValue::Certified(a), NormValue::Certified(b)) => {
                if a.cmp_exact(b) == Ordering::Greater {
                    Check::Fails
                } else {
                    Check::Holds
                }
            }
            (a, b) => {
                let (x, y) = (a.to_f64(), b.to_f64());
                if x <= y + FLOAT_REL_TOL * x.abs().max(y.abs()) {
                    Check::Holds
                } else {
                    Check::Fails
                }
            }
        }
    }

    /// Exact equality for certified values, tolerance otherwise.
    pub fn approx_eq(&self, other: &NormValue) -> bool {
        self.le(other).holds() && other.le(self).holds()
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Certified(s) => match s.as_rational() {
                Some(q) => write!(f, "{q}"),
                None => {
                    let iv = s.enclosure(64);
                    write!(f, "{:.17e} in {iv}", s.to_f64())
                }
            },
            NormValue::Approx(x) => write!(f, "{x}"),
            NormValue::NonFinite => f.write_str("non-finite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSeries {
    low: i64,
    coeffs: Coeffs,
    radius: Real,
    tail: Option<Real>,
}

impl WeightedSeries {
    pub fn new(low: i64, coeffs: Coeffs, radius: Real, tail: Option<Real>) -> Result<Self> {
        let backend = coeffs.backend();
        if radius.backend() != backend {
            return Err(Error::BackendMismatch(backend, radius.backend()));
        }
        if !radius.is_positive() {
            return Err(Error::NonPositiveRadius(radius.to_string()));
        }
        if let Some(t) = &tail {
            if t.backend() != backend {
                return Err(Error::BackendMismatch(backend, t.backend()));
            }
            if t.cmp_value(&Real::zero(backend)) == Ordering::Less {
                return Err(Error::Usage(format!("tail bound must be nonnegative, got {t}")));
            }
        }
        Ok(WeightedSeries {
            low,
            coeffs,
            radius,
            tail,
        })
    }

    pub fn exact(low: i64, coeffs: Vec<GaussRat>, radius: BigRational) -> Result<Self> {
        WeightedSeries::new(low, Coeffs::Exact(coeffs), Real::Exact(radius), None)
    }

    pub fn float(low: i64, coeffs: Vec<Complex64>, radius: f64) -> Result<Self> {
        WeightedSeries::new(low, Coeffs::Float(coeffs), Real::Float(radius), None)
    }

    /// Builds a series from backend-tagged scalars; all must share the
    /// radius' backend.
    pub fn from_scalars(low: i64, coeffs: &[Scalar], radius: Real) -> Result<Self> {
        let backend = radius.backend();
        let c = match backend {
            Backend::Exact => Coeffs::Exact(
                coeffs
                    .iter()
                    .map(|s| match s {
                        Scalar::Exact(g) => Ok(g.clone()),
                        other => Err(Error::BackendMismatch(backend, other.backend())),
                    })
                    .collect::<Result<_>>()?,
            ),
            Backend::Float => Coeffs::Float(
                coeffs
                    .iter()
                    .map(|s| match s {
                        Scalar::Float(z) => Ok(*z),
                        other => Err(Error::BackendMismatch(backend, other.backend())),
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        WeightedSeries::new(low, c, radius, None)
    }

    pub fn zero(radius: Real) -> Result<Self> {
        let c = match radius.backend() {
            Backend::Exact => Coeffs::Exact(Vec::new()),
            Backend::Float => Coeffs::Float(Vec::new()),
        };
        WeightedSeries::new(0, c, radius, None)
    }

    /// `c·Tᵈ`.
    pub fn monomial(c: Scalar, degree: i64, radius: Real) -> Result<Self> {
        WeightedSeries::from_scalars(degree, &[c], radius)
    }

    pub fn with_tail(mut self, tail: Option<Real>) -> Result<Self> {
        self.tail = None;
        WeightedSeries::new(self.low, self.coeffs, self.radius, tail)
    }

    pub fn with_radius(self, radius: Real) -> Result<Self> {
        WeightedSeries::new(self.low, self.coeffs, radius, self.tail)
    }

    pub fn backend(&self) -> Backend {
        self.coeffs.backend()
    }

    pub fn radius(&self) -> &Real {
        &self.radius
    }

    pub fn tail(&self) -> Option<&Real> {
        self.tail.as_ref()
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn low_degree(&self) -> i64 {
        self.low
    }

    /// Highest stored degree, `None` when nothing is stored.
    pub fn high_degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: i64) -> Scalar {
        let idx = degree - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Scalar::zero(self.backend());
        }
        match &self.coeffs {
            Coeffs::Exact(v) => Scalar::Exact(v[idx as usize].clone()),
            Coeffs::Float(v) => Scalar::Float(v[idx as usize]),
        }
    }

    /// Degrees of nonzero stored coefficients, ascending.
    pub fn support(&self) -> Vec<i64> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs.is_zero_at(i))
            .map(|i| self.low + i as i64)
            .collect()
    }

    /// `(min, max)` degree of the nonzero coefficients.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let s = self.support();
        Some((*s.first()?, *s.last()?))
    }

    /// True when every stored coefficient vanishes and there is no tail.
    pub fn is_zero(&self) -> bool {
        self.support().is_empty() && self.tail.as_ref().is_none_or(|t| t.is_zero())
    }

    /// A genuine polynomial: no negative degrees and no tail.
    pub fn is_polynomial(&self) -> bool {
        self.tail.is_none() && self.support_bounds().is_none_or(|(lo, _)| lo >= 0)
    }

    /// Strips zero coefficients at both ends. Idempotent and norm-preserving.
    pub fn trim(&self) -> WeightedSeries {
        let (lo, hi) = match self.support_bounds() {
            Some(b) => b,
            None => {
                let mut z = WeightedSeries::zero(self.radius.clone()).expect("valid radius");
                z.tail = self.tail.clone();
                return z;
            }
        };
        let a = (lo - self.low) as usize;
        let b = (hi - self.low) as usize + 1;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[a..b].to_vec()),
            Coeffs::Float(v) => Coeffs::Float(v[a..b].to_vec()),
        };
        WeightedSeries {
            low: lo,
            coeffs,
            radius: self.radius.clone(),
            tail: self.tail.clone(),
        }
    }

    /// `Σ |a_n| rⁿ` over stored coefficients with degree in `[from, to]`,
    /// at an arbitrary radius.
    pub fn partial_norm_at(&self, radius: &Real, from: i64, to: i64) -> NormValue {
        match (&self.coeffs, radius) {
            (Coeffs::Exact(v), Real::Exact(r)) => {
                let mut acc = SqrtSum::zero();
                for (i, a) in v.iter().enumerate() {
                    let n = self.low + i as i64;
                    if n < from || n > to || a.is_zero() {
                        continue;
                    }
                    acc.add_assign(&a.modulus_exact().scale(&rat_pow(r, n)));
                }
                NormValue::Certified(acc)
            }
            (coeffs, radius) => {
                let r = radius.to_f64();
                let mut acc = 0.0;
                for i in 0..coeffs.len() {
                    let n = self.low + i as i64;
                    if n < from || n > to {
                        continue;
                    }
                    let m = match coeffs {
                        Coeffs::Exact(v) => v[i].to_complex64().norm(),
                        Coeffs::Float(v) => v[i].norm(),
                    };
                    if m != 0.0 {
                        acc += m * r.powi(n as i32);
                    }
                }
                NormValue::from_f64(acc)
            }
        }
    }

    /// `‖s‖_r = Σ |a_n| rⁿ + tail`.
    pub fn weighted_norm(&self) -> NormValue {
        let body = self.partial_norm_at(&self.radius, i64::MIN, i64::MAX);
        match &self.tail {
            None => body,
            Some(Real::Exact(t)) => body.add(&NormValue::Certified(SqrtSum::rational(t.clone()))),
            Some(t) => body.add(&NormValue::from_f64(t.to_f64())),
        }
    }

    fn check_backend(&self, other: &WeightedSeries) -> Result<()> {
        if self.backend() != other.backend() {
            return Err(Error::BackendMismatch(self.backend(), other.backend()));
        }
        Ok(())
    }

    /// Common radius for a binary operation: the smaller one. Moving a tail
    /// bound to a smaller radius is only sound for nonnegative support.
    fn common_radius(&self, other: &WeightedSeries) -> Result<Real> {
        match self.radius.cmp_value(&other.radius) {
            Ordering::Equal => Ok(self.radius.clone()),
            _ => {
                let r = self.radius.min(&other.radius);
                for s in [self, other] {
                    let shrinking = s.radius.cmp_value(&r) != Ordering::Equal;
                    let negative = s.support_bounds().is_some_and(|(lo, _)| lo < 0) || s.low < 0;
                    if shrinking && s.tail.is_some() && negative {
                        return Err(Error::RadiusMismatch(format!(
                            "cannot move the tail bound of a Laurent series from radius {} to {}",
                            s.radius, r
                        )));
                    }
                }
                Ok(r)
            }
        }
    }

    fn sum_tails(a: Option<&Real>, b: Option<&Real>) -> Option<Real> {
        match (a, b) {
            (None, None) => None,
            (Some(t), None) | (None, Some(t)) => Some(t.clone()),
            (Some(s), Some(t)) => Some(s.add(t)),
        }
    }

    fn combine(&self, other: &WeightedSeries, sign: i32) -> Result<WeightedSeries> {
        self.check_backend(other)?;
        let radius = self.common_radius(other)?;
        let tail = Self::sum_tails(self.tail.as_ref(), other.tail.as_ref());
        let (sl, ol) = (self.low, other.low);
        let (sh, oh) = (sl + self.len() as i64, ol + other.len() as i64);
        let (low, high) = if self.is_empty() {
            (ol, oh)
        } else if other.is_empty() {
            (sl, sh)
        } else {
            (sl.min(ol), sh.max(oh))
        };
        let n = (high - low).max(0) as usize;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                let mut out = vec![GaussRat::zero(); n];
                for (i, c) in a.iter().enumerate() {
                    let k = (sl + i as i64 - low) as usize;
                    out[k] = &out[k] + c;
                }
                for (i, c) in b.iter().enumerate() {
                    let k = (ol + i as i64 - low) as usize;
                    out[k] = if sign > 0 { &out[k] + c } else { &out[k] - c };
                }
                Coeffs::Exact(out)
            }
            (Coeffs::Float(a), Coeffs::Float(b)) => {
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                for (i, c) in a.iter().enumerate() {
                    out[(sl + i as i64 - low) as usize] += c;
                }
                for (i, c) in b.iter().enumerate() {
                    let k = (ol + i as i64 - low) as usize;
                    if sign > 0 {
                        out[k] += c;
                    } else {
                        out[k] -= c;
                    }
                }
                Coeffs::Float(out)
            }
            _ => unreachable!("backends checked"),
        };
        WeightedSeries::new(low, coeffs, radius, tail)
    }

    /// Coefficientwise sum; tail bounds add.
    pub fn add(&self, other: &WeightedSeries) -> Result<WeightedSeries> {
        self.combine(other, 1)
    }

    /// Coefficientwise difference; tail bounds still add.
    pub fn sub(&self, other: &WeightedSeries) -> Result<WeightedSeries> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> WeightedSeries {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|c| -c).collect()),
            Coeffs::Float(v) => Coeffs::Float(v.iter().map(|c| -c).collect()),
        };
        WeightedSeries {
            coeffs,
            ..self.clone()
        }
    }

    /// `λ·s`; the tail scales by a rational upper bound of `|λ|`.
    pub fn scale(&self, lambda: &Scalar) -> Result<WeightedSeries> {
        if lambda.backend() != self.backend() {
            return Err(Error::BackendMismatch(self.backend(), lambda.backend()));
        }
        let coeffs = match (&self.coeffs, lambda) {
            (Coeffs::Exact(v), Scalar::Exact(l)) => Coeffs::Exact(v.iter().map(|c| c * l).collect()),
            (Coeffs::Float(v), Scalar::Float(l)) => Coeffs::Float(v.iter().map(|c| c * l).collect()),
            _ => unreachable!("backends checked"),
        };
        let tail = self.tail.as_ref().map(|t| match (t, lambda) {
            (Real::Exact(q), Scalar::Exact(l)) => Real::Exact(q * l.modulus(TAIL_BITS).hi),
            (t, l) => Real::Float(t.to_f64() * l.modulus_f64()),
        });
        WeightedSeries::new(self.low, coeffs, self.radius.clone(), tail)
    }

    /// Multiplication by `Tᵏ`. The tail bound rescales by `rᵏ`.
    pub fn shift(&self, k: i64) -> WeightedSeries {
        let tail = self.tail.as_ref().map(|t| t.mul(&self.radius.powi(k)));
        WeightedSeries {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            radius: self.radius.clone(),
            tail,
        }
    }

    /// Cauchy product under the default truncation.
    pub fn mul(&self, other: &WeightedSeries) -> Result<WeightedSeries> {
        self.mul_with(other, &Truncation::default())
    }

    /// Cauchy product; degrees outside `[-cap, cap]` are dropped and their
    /// weighted mass folded into the tail, or reported as an error when tail
    /// tracking is off.
    pub fn mul_with(&self, other: &WeightedSeries, trunc: &Truncation) -> Result<WeightedSeries> {
        self.check_backend(other)?;
        let radius = self.common_radius(other)?;
        let backend = self.backend();
        let a = self.trim();
        let b = other.trim();
        let cap = trunc.cap as i64;

        let tail_from_inputs = {
            let an = a.clone().with_tail(None)?.with_radius(radius.clone())?;
            let bn = b.clone().with_tail(None)?.with_radius(radius.clone())?;
            match (&a.tail, &b.tail) {
                (None, None) => None,
                (ta, tb) => {
                    let zero = Real::zero(backend);
                    let ta = ta.clone().unwrap_or_else(|| zero.clone());
                    let tb = tb.clone().unwrap_or(zero);
                    let an = an.weighted_norm().upper();
                    let bn = bn.weighted_norm().upper();
                    Some(an.mul(&tb).add(&ta.mul(&bn)).add(&ta.mul(&tb)))
                }
            }
        };

        if a.is_empty() || b.is_empty() {
            let z = WeightedSeries::zero(radius)?;
            return z.with_tail(tail_from_inputs);
        }
        let low = a.low + b.low;
        let n = a.len() + b.len() - 1;
        let high = low + n as i64 - 1;
        if (low < -cap || high > cap) && !trunc.track_tail {
            let degree = if high > cap { high } else { low };
            return Err(Error::DegreeCapExceeded {
                cap: trunc.cap,
                degree,
            });
        }

        let full = match (&a.coeffs, &b.coeffs) {
            (Coeffs::Exact(x), Coeffs::Exact(y)) => {
                let mut out = vec![GaussRat::zero(); n];
                for (i, p) in x.iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    for (j, q) in y.iter().enumerate() {
                        if !q.is_zero() {
                            out[i + j] = &out[i + j] + &(p * q);
                        }
                    }
                }
                Coeffs::Exact(out)
            }
            (Coeffs::Float(x), Coeffs::Float(y)) => {
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                for (i, p) in x.iter().enumerate() {
                    for (j, q) in y.iter().enumerate() {
                        out[i + j] += p * q;
                    }
                }
                Coeffs::Float(out)
            }
            _ => unreachable!("backends checked"),
        };
        let product = WeightedSeries::new(low, full, radius.clone(), None)?;

        let keep_lo = low.max(-cap);
        let keep_hi = high.min(cap);
        let (kept, dropped) = if keep_lo == low && keep_hi == high {
            (product, None)
        } else {
            let below = product.partial_norm_at(&radius, i64::MIN, keep_lo - 1);
            let above = product.partial_norm_at(&radius, keep_hi + 1, i64::MAX);
            let mass = below.add(&above).upper();
            (product.window(keep_lo, keep_hi), Some(mass))
        };
        let tail = Self::sum_tails(tail_from_inputs.as_ref(), dropped.as_ref());
        kept.with_tail(tail)
    }

    /// Coefficients restricted to degrees `[from, to]` (empty when `from > to`).
    pub fn window(&self, from: i64, to: i64) -> WeightedSeries {
        let lo = from.max(self.low);
        let hi = to.min(self.low + self.len() as i64 - 1);
        let coeffs = if lo > hi {
            match &self.coeffs {
                Coeffs::Exact(_) => Coeffs::Exact(Vec::new()),
                Coeffs::Float(_) => Coeffs::Float(Vec::new()),
            }
        } else {
            let a = (lo - self.low) as usize;
            let b = (hi - self.low) as usize + 1;
            match &self.coeffs {
                Coeffs::Exact(v) => Coeffs::Exact(v[a..b].to_vec()),
                Coeffs::Float(v) => Coeffs::Float(v[a..b].to_vec()),
            }
        };
        WeightedSeries {
            low: if lo > hi { 0 } else { lo },
            coeffs,
            radius: self.radius.clone(),
            tail: None,
        }
    }

    /// Substitution `T ↦ T⁻¹`: the coefficient of `Tⁿ` moves to `T⁻ⁿ`.
    /// The radius becomes `1/r`, which keeps `Σ|a_n| rⁿ` unchanged.
    pub fn invert_variable(&self) -> Result<WeightedSeries> {
        let mut coeffs = self.coeffs.clone();
        match &mut coeffs {
            Coeffs::Exact(v) => v.reverse(),
            Coeffs::Float(v) => v.reverse(),
        }
        let low = match self.high_degree() {
            Some(h) => -h,
            None => 0,
        };
        WeightedSeries::new(low, coeffs, self.radius.recip()?, self.tail.clone())
    }

    /// Value of the stored truncation at `z`.
    ///
    /// Polynomials evaluate anywhere. Anything else (negative degrees or a
    /// tail) requires `|z| ≤ r`; then the tail bound also bounds the omitted
    /// remainder.
    pub fn eval(&self, z: &Scalar) -> Result<Scalar> {
        if z.backend() != self.backend() {
            return Err(Error::BackendMismatch(self.backend(), z.backend()));
        }
        if !self.is_polynomial() {
            let inside = match (z, &self.radius) {
                (Scalar::Exact(g), Real::Exact(r)) => g.norm_sqr() <= r * r,
                (z, r) => z.modulus_f64() <= r.to_f64(),
            };
            if !inside {
                return Err(Error::OutsideDisc {
                    modulus: format!("{:.6}", z.modulus_f64()),
                    radius: self.radius.to_string(),
                });
            }
        }
        let s = self.trim();
        if s.is_empty() {
            return Ok(Scalar::zero(self.backend()));
        }
        if s.low < 0 && z.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(match (&s.coeffs, z) {
            (Coeffs::Exact(v), Scalar::Exact(z)) => {
                let mut acc = GaussRat::zero();
                for c in v.iter().rev() {
                    acc = &(&acc * z) + c;
                }
                // acc = Σ a_n z^(n - low)
                let scale = if s.low >= 0 {
                    z.pow(s.low as u64)
                } else {
                    z.inv()?.pow(s.low.unsigned_abs())
                };
                Scalar::Exact(&acc * &scale)
            }
            (Coeffs::Float(v), Scalar::Float(z)) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in v.iter().rev() {
                    acc = acc * z + c;
                }
                Scalar::Float(acc * z.powi(s.low as i32))
            }
            _ => unreachable!("backends checked"),
        })
    }

    /// Converts every coefficient (and the radius and tail) to `backend`.
    pub fn convert(&self, backend: Backend) -> Result<WeightedSeries> {
        if backend == self.backend() {
            return Ok(self.clone());
        }
        let coeffs = match (&self.coeffs, backend) {
            (Coeffs::Exact(v), Backend::Float) => {
                Coeffs::Float(v.iter().map(GaussRat::to_complex64).collect())
            }
            (Coeffs::Float(v), Backend::Exact) => Coeffs::Exact(
                v.iter()
                    .map(|z| {
                        GaussRat::from_complex64(*z)
                            .ok_or_else(|| Error::Usage("non-finite coefficient".into()))
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => unreachable!(),
        };
        let tail = match &self.tail {
            Some(t) => Some(t.convert(backend)?),
            None => None,
        };
        WeightedSeries::new(self.low, coeffs, self.radius.convert(backend)?, tail)
    }

    /// Structural equality of the represented series: same nonzero
    /// coefficients and tails, radii ignored.
    pub fn same_coefficients(&self, other: &WeightedSeries) -> bool {
        let (a, b) = (self.trim(), other.trim());
        a.low == b.low && a.coeffs == b.coeffs
    }

    /// First degree where the coefficients differ.
    pub fn first_difference(&self, other: &WeightedSeries) -> Option<i64> {
        let lo = self.low.min(other.low);
        let hi = (self.low + self.len() as i64).max(other.low + other.len() as i64);
        (lo..hi).find(|&n| self.coeff(n) != other.coeff(n))
    }

    /// `max |a_n|` over stored degrees in `[from, to]`.
    pub fn max_abs_coefficient(&self, from: i64, to: i64) -> NormValue {
        match &self.window(from, to).coeffs {
            Coeffs::Exact(v) => {
                // the largest root is the root of the largest square
                let best = v.iter().map(GaussRat::norm_sqr).max().unwrap_or_else(BigRational::zero);
                NormValue::Certified(SqrtSum::sqrt_of(&best))
            }
            Coeffs::Float(v) => NormValue::from_f64(v.iter().map(|c| c.norm()).fold(0.0, f64::max)),
        }
    }
}

impl fmt::Display for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::format_series(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn ex(low: i64, c: &[(i64, i64)], r: BigRational) -> WeightedSeries {
        WeightedSeries::exact(low, c.iter().map(|&(a, b)| GaussRat::from_ints(a, b)).collect(), r)
            .unwrap()
    }

    #[test]
    fn norm_of_one_plus_t() {
        let s = ex(0, &[(1, 0), (1, 0)], rat_int(2));
        assert_eq!(s.weighted_norm(), NormValue::Certified(SqrtSum::rational(rat_int(3))));
        let z = WeightedSeries::zero(Real::ratio(7, 3)).unwrap();
        assert_eq!(z.weighted_norm().to_f64(), 0.0);
    }

    #[test]
    fn float_overflow_is_flagged() {
        let s = WeightedSeries::float(0, vec![Complex64::new(1e300, 0.0); 3], 1e200).unwrap();
        assert_eq!(s.weighted_norm(), NormValue::NonFinite);
    }

    #[test]
    fn product_and_laurent_support() {
        let a = ex(0, &[(1, 0), (1, 0)], rat(1, 1));
        let b = ex(0, &[(1, 0), (-1, 0)], rat(1, 1));
        let p = a.mul(&b).unwrap().trim();
        assert_eq!(p, ex(0, &[(1, 0), (0, 0), (-1, 0)], rat(1, 1)));
        let t = ex(1, &[(1, 0)], rat(1, 1));
        let tinv = ex(-1, &[(1, 0)], rat(1, 1));
        assert_eq!(t.mul(&tinv).unwrap().trim(), ex(0, &[(1, 0)], rat(1, 1)));
    }

    #[test]
    fn cap_is_loud_without_tail_tracking() {
        let a = ex(0, &[(1, 0); 4], rat(1, 2));
        let err = a.mul_with(&a, &Truncation::with_cap(4)).unwrap_err();
        assert!(matches!(err, Error::DegreeCapExceeded { cap: 4, degree: 6 }));
        let p = a.mul_with(&a, &Truncation::tracking(4)).unwrap();
        assert_eq!(p.high_degree(), Some(4));
        // dropped: 2 T^5 + T^6 at r = 1/2
        assert_eq!(p.tail(), Some(&Real::Exact(rat(2, 32) + rat(1, 64))));
        // norms are unchanged by truncation when the tail is counted
        assert!(p.weighted_norm().approx_eq(&a.mul(&a).unwrap().weighted_norm()));
    }

    #[test]
    fn tail_propagates_through_products() {
        let a = ex(0, &[(1, 0), (1, 0)], rat(1, 2))
            .with_tail(Some(Real::Exact(rat(1, 10))))
            .unwrap();
        let b = ex(0, &[(2, 0)], rat(1, 2));
        let p = a.mul(&b).unwrap();
        // ‖b‖·ta = 2/10
        assert_eq!(p.tail(), Some(&Real::Exact(rat(1, 5))));
        assert!(p.weighted_norm().le(&a.weighted_norm().mul(&b.weighted_norm())).holds());
    }

    #[test]
    fn eval_domain() {
        let p = ex(0, &[(1, 0), (0, 0), (1, 0)], rat(1, 2));
        let i = Scalar::Exact(GaussRat::i());
        assert!(p.eval(&i).unwrap().is_zero());
        let far = Scalar::from_ints(Backend::Exact, 5, 0);
        assert!(p.eval(&far).is_ok());
        let laurent = ex(-1, &[(1, 0), (1, 0)], rat(1, 2));
        assert!(matches!(laurent.eval(&far), Err(Error::OutsideDisc { .. })));
        assert!(matches!(
            laurent.eval(&Scalar::zero(Backend::Exact)),
            Err(Error::PoleAtZero)
        ));
    }

    #[test]
    fn mixed_radius_addition_coerces_down() {
        let a = ex(0, &[(1, 0)], rat(2, 1));
        let b = ex(0, &[(0, 0), (1, 0)], rat(1, 2));
        let s = a.add(&b).unwrap();
        assert_eq!(s.radius(), &Real::ratio(1, 2));
        let lt = ex(-1, &[(1, 0)], rat(2, 1)).with_tail(Some(Real::ratio(1, 4))).unwrap();
        assert!(matches!(lt.add(&b), Err(Error::RadiusMismatch(_))));
    }

    #[test]
    fn trim_is_idempotent() {
        let s = ex(-2, &[(0, 0), (1, 1), (0, 0), (2, 0), (0, 0)], rat(3, 2));
        let t = s.trim();
        assert_eq!(t.low_degree(), -1);
        assert_eq!(t.trim(), t);
        assert!(t.weighted_norm().approx_eq(&s.weighted_norm()));
    }

    #[test]
    fn inversion_reverses_support() {
        let s = ex(0, &[(1, 0), (2, 0), (3, 0)], rat(2, 1));
        let inv = s.invert_variable().unwrap();
        assert_eq!(inv.low_degree(), -2);
        assert_eq!(inv.coeff(-2), Scalar::from_ints(Backend::Exact, 3, 0));
        assert_eq!(inv.invert_variable().unwrap(), s);
        assert!(inv.weighted_norm().approx_eq(&s.weighted_norm()));
    }
}
