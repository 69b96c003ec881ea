//! Complex scalars in two backends.
//!
//! The exact backend works over the Gaussian rationals `ℚ(i)`; every ring
//! operation is closed and exact there. The float backend is a plain
//! `Complex64`. Real quantities (radii, tail bounds) come in the same two
//! flavours through [`Real`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::certified::{sqrt_enclosure, Interval, SqrtSum};
use crate::error::{Backend, Error, Result};

/// Converts a finite double to the rational it denotes exactly.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_f64(x)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of `ℚ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(rat_int(re), rat_int(im))
    }

    pub fn zero() -> Self {
        GaussRat::from_ints(0, 0)
    }

    pub fn one() -> Self {
        GaussRat::from_ints(1, 0)
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `|a|²`, exactly.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|a|` as an exact sum of square roots.
    pub fn modulus_exact(&self) -> SqrtSum {
        SqrtSum::sqrt_of(&self.norm_sqr())
    }

    /// Certified enclosure of `|a|` of width at most `2^-bits`.
    pub fn modulus(&self, bits: u32) -> Interval {
        sqrt_enclosure(&self.norm_sqr(), bits)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &GaussRat) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        GaussRat::new(&self.re * q, &self.im * q)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(GaussRat::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GaussRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = &self.re;
        let im = &self.im;
        if im.is_zero() {
            return write!(f, "{re}");
        }
        let im_part = if im.abs().is_one() {
            String::new()
        } else {
            im.abs().to_string()
        };
        if re.is_zero() {
            let sign = if im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_part}i");
        }
        let sign = if im.is_negative() { '-' } else { '+' };
        write!(f, "{re}{sign}{im_part}i")
    }
}

/// A backend-tagged complex number.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussRat),
    Float(Complex64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(GaussRat::zero()),
            Backend::Float => Scalar::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(GaussRat::one()),
            Backend::Float => Scalar::Float(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn from_ints(backend: Backend, re: i64, im: i64) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(GaussRat::from_ints(re, im)),
            Backend::Float => Scalar::Float(Complex64::new(re as f64, im as f64)),
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => g.to_complex64(),
            Scalar::Float(z) => *z,
        }
    }

    /// Moves the value to the exact backend. Doubles convert without loss.
    pub fn to_exact(&self) -> Result<GaussRat> {
        match self {
            Scalar::Exact(g) => Ok(g.clone()),
            Scalar::Float(z) => GaussRat::from_complex64(*z)
                .ok_or_else(|| Error::Usage(format!("non-finite scalar {z}"))),
        }
    }

    pub fn convert(&self, backend: Backend) -> Result<Scalar> {
        Ok(match backend {
            Backend::Exact => Scalar::Exact(self.to_exact()?),
            Backend::Float => Scalar::Float(self.to_complex64()),
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Modulus: a certified interval in the exact backend, a degenerate
    /// interval around the rounded value otherwise.
    pub fn modulus(&self, bits: u32) -> Interval {
        match self {
            Scalar::Exact(g) => g.modulus(bits),
            Scalar::Float(z) => Interval::point_f64(z.norm()),
        }
    }

    pub fn modulus_f64(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn pair<'a>(&'a self, other: &'a Scalar) -> Result<(&'a Scalar, &'a Scalar)> {
        if self.backend() != other.backend() {
            return Err(Error::BackendMismatch(self.backend(), other.backend()));
        }
        Ok((self, other))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.pair(other)? {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (a, b) => Scalar::Float(a.to_complex64() + b.to_complex64()),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.pair(other)? {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            (a, b) => Scalar::Float(a.to_complex64() - b.to_complex64()),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.pair(other)? {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            (a, b) => Scalar::Float(a.to_complex64() * b.to_complex64()),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => write!(f, "{g}"),
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.re == 0.0 {
                    write!(f, "{}i", z.im)
                } else if z.im < 0.0 {
                    write!(f, "{}-{}i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

/// A nonnegative-or-signed real in one of the two backends: radii, weights,
/// tail bounds.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    pub fn backend(&self) -> Backend {
        match self {
            Real::Exact(_) => Backend::Exact,
            Real::Float(_) => Backend::Float,
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Real::Exact(rat(n, d))
    }

    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Real::Exact(BigRational::zero()),
            Backend::Float => Real::Float(0.0),
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Real::Exact(BigRational::one()),
            Backend::Float => Real::Float(1.0),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => rational_to_f64(q),
            Real::Float(x) => *x,
        }
    }

    pub fn to_exact(&self) -> Result<BigRational> {
        match self {
            Real::Exact(q) => Ok(q.clone()),
            Real::Float(x) => {
                rational_from_f64(*x).ok_or_else(|| Error::Usage(format!("non-finite real {x}")))
            }
        }
    }

    pub fn convert(&self, backend: Backend) -> Result<Real> {
        Ok(match backend {
            Backend::Exact => Real::Exact(self.to_exact()?),
            Backend::Float => Real::Float(self.to_f64()),
        })
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_positive(),
            Real::Float(x) => *x > 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_zero(),
            Real::Float(x) => *x == 0.0,
        }
    }

    /// Exact comparison when both sides are exact; otherwise compares doubles.
    pub fn cmp_value(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            (a, b) => a.to_f64().partial_cmp(&b.to_f64()).unwrap_or(Ordering::Equal),
        }
    }

    pub fn lt_one(&self) -> bool {
        self.cmp_value(&Real::one(self.backend())) == Ordering::Less
    }

    pub fn gt_one(&self) -> bool {
        self.cmp_value(&Real::one(self.backend())) == Ordering::Greater
    }

    /// `self^n` for any integer `n`; the base must be nonzero when `n < 0`.
    pub fn powi(&self, n: i64) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(rat_pow(q, n)),
            Real::Float(x) => Real::Float(x.powi(n as i32)),
        }
    }

    pub fn recip(&self) -> Result<Real> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Real::Exact(q) => Real::Exact(q.recip()),
            Real::Float(x) => Real::Float(1.0 / x),
        })
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            (a, b) => Real::Float(a.to_f64() + b.to_f64()),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            (a, b) => Real::Float(a.to_f64() * b.to_f64()),
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if self.cmp_value(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Float(x) => write!(f, "{x}"),
        }
    }
}

/// `q^n` for a rational base and any integer exponent.
pub fn rat_pow(q: &BigRational, n: i64) -> BigRational {
    let base = if n < 0 { q.recip() } else { q.clone() };
    let mut e = n.unsigned_abs();
    let mut b = base;
    let mut acc = BigRational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_field_ops() {
        let a = GaussRat::new(rat(1, 2), rat(-3, 4));
        let b = GaussRat::from_ints(2, 5);
        let q = a.checked_div(&b).unwrap();
        assert_eq!(&q * &b, a);
        assert!(GaussRat::zero().inv().is_err());
        assert_eq!(GaussRat::i().pow(4), GaussRat::one());
        assert_eq!(GaussRat::from_ints(3, 4).norm_sqr(), rat_int(25));
    }

    #[test]
    fn modulus_interval_contains_value() {
        let a = GaussRat::from_ints(1, 1);
        let iv = a.modulus(40);
        let s = std::f64::consts::SQRT_2;
        assert!(iv.lo_f64() <= s && s <= iv.hi_f64());
        assert!(iv.width() <= rat_pow(&rat(1, 2), 40));
        let exact = GaussRat::from_ints(3, 4).modulus(10);
        assert_eq!(exact.lo, rat_int(5));
        assert_eq!(exact.hi, rat_int(5));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::from_ints(0, -1).to_string(), "-i");
        assert_eq!(GaussRat::new(rat(1, 2), rat(-3, 2)).to_string(), "1/2-3/2i");
        assert_eq!(GaussRat::from_ints(0, 3).to_string(), "3i");
    }

    #[test]
    fn scalar_backend_mismatch() {
        let a = Scalar::one(Backend::Exact);
        let b = Scalar::one(Backend::Float);
        assert!(matches!(a.try_add(&b), Err(Error::BackendMismatch(..))));
    }

    #[test]
    fn rational_pow_negative() {
        assert_eq!(rat_pow(&rat(1, 2), -3), rat_int(8));
        assert_eq!(rat_pow(&rat(2, 3), 0), rat_int(1));
    }
}
