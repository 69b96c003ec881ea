//! Certified real arithmetic for norm comparisons.
//!
//! Exact-backend norms are finite sums `Σ cₖ·√xₖ` with rational `cₖ` and
//! nonnegative integer radicands. [`SqrtSum`] keeps them in that form, so
//! sums and products stay exact and signs are decided exactly: fast interval
//! enclosures first, then grouping of rationally dependent radicands (square
//! roots of pairwise independent radicands are linearly independent over ℚ)
//! when the enclosure straddles zero.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::rational_from_f64;

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    /// Degenerate interval at the rational value of a double (NaN maps to 0).
    pub fn point_f64(x: f64) -> Self {
        Interval::point(rational_from_f64(x).unwrap_or_else(BigRational::zero))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Multiplication by a rational of either sign.
    pub fn scale(&self, c: &BigRational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// `Some(ordering)` when the enclosures are disjoint or both degenerate
    /// and equal.
    pub fn certain_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

/// Enclosure of `√q` with width at most `2^-bits`; degenerate when `q` is a
/// perfect square.
pub fn sqrt_enclosure(q: &BigRational, bits: u32) -> Interval {
    assert!(!q.is_negative(), "square root of a negative rational");
    // √(p/d) = √(p·d)/d
    let n = q.numer() * q.denom();
    let scaled = &n << (2 * bits as usize);
    let s = scaled.sqrt();
    let den = q.denom() << bits as usize;
    let lo = BigRational::new(s.clone(), den.clone());
    if &s * &s == scaled {
        Interval::point(lo)
    } else {
        Interval::new(lo, BigRational::new(s + 1, den))
    }
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Splits `n = out² · inner`, pulling out small-prime squares and a final
/// perfect square.
fn extract_square(mut n: BigInt) -> (BigInt, BigInt) {
    let mut out = BigInt::one();
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    if let Some(small) = n.to_u64() {
        let (o, i) = extract_square_u64(small);
        return (BigInt::from(o), BigInt::from(i));
    }
    for &p in &SMALL_PRIMES {
        let p2 = BigInt::from(p * p);
        loop {
            let (q, r) = n.div_rem(&p2);
            if !r.is_zero() {
                break;
            }
            n = q;
            out *= p;
        }
    }
    if let Some(s) = perfect_sqrt(&n) {
        return (out * s, BigInt::one());
    }
    (out, n)
}

fn extract_square_u64(mut n: u64) -> (u64, u64) {
    let mut out = 1u64;
    for &p in &SMALL_PRIMES {
        let p2 = u64::from(p * p);
        while n.is_multiple_of(p2) {
            n /= p2;
            out *= u64::from(p);
        }
    }
    let s = n.isqrt();
    if s * s == n {
        (out * s, 1)
    } else {
        (out, n)
    }
}

/// Exact real number of the form `Σ cₖ·√xₖ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SqrtSum {
    terms: BTreeMap<BigInt, BigRational>,
}

impl SqrtSum {
    pub fn zero() -> Self {
        SqrtSum::default()
    }

    pub fn rational(q: BigRational) -> Self {
        let mut s = SqrtSum::zero();
        s.push(BigInt::one(), q);
        s
    }

    /// `√x` for a nonnegative rational `x`.
    pub fn sqrt_of(x: &BigRational) -> Self {
        assert!(!x.is_negative(), "square root of a negative rational");
        let mut s = SqrtSum::zero();
        if x.is_zero() {
            return s;
        }
        let (out, inner) = extract_square(x.numer() * x.denom());
        s.push(inner, BigRational::new(out, x.denom().clone()));
        s
    }

    fn push(&mut self, radicand: BigInt, coef: BigRational) {
        if coef.is_zero() || radicand.is_zero() {
            return;
        }
        match self.terms.entry(radicand) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> SqrtSum {
        if c.is_zero() {
            return SqrtSum::zero();
        }
        SqrtSum {
            terms: self.terms.iter().map(|(x, k)| (x.clone(), k * c)).collect(),
        }
    }

    pub fn add(&self, other: &SqrtSum) -> SqrtSum {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.push(x.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &SqrtSum) {
        for (x, c) in &other.terms {
            self.push(x.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> SqrtSum {
        SqrtSum {
            terms: self.terms.iter().map(|(x, c)| (x.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &SqrtSum) -> SqrtSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SqrtSum) -> SqrtSum {
        let mut out = SqrtSum::zero();
        for (x, c) in &self.terms {
            for (y, d) in &other.terms {
                let (o, inner) = extract_square(x * y);
                out.push(inner, c * d * BigRational::from_integer(o));
            }
        }
        out
    }

    /// The value when it is rational (every radicand is 1).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn enclosure(&self, bits: u32) -> Interval {
        let mut acc = Interval::point(BigRational::zero());
        for (x, c) in &self.terms {
            let root = sqrt_enclosure(&BigRational::from_integer(x.clone()), bits);
            acc = acc.add(&root.scale(c));
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        if let Some((v, _)) = self.float_estimate() {
            return v;
        }
        let iv = self.enclosure(64);
        (iv.lo_f64() + iv.hi_f64()) / 2.0
    }

    /// Double-precision value with a rigorous bound on its error, or `None`
    /// when a term leaves the normal range. Each term carries at most about
    /// 8 units of roundoff (coefficient and radicand conversion, square
    /// root, product); the running sum adds `n - 1` more.
    fn float_estimate(&self) -> Option<(f64, f64)> {
        const U: f64 = f64::EPSILON / 2.0;
        let mut sum = 0.0f64;
        let mut abs = 0.0f64;
        for (x, c) in &self.terms {
            let t = c.to_f64()? * x.to_f64()?.sqrt();
            if !t.is_finite() || t.abs() < 1e-280 {
                return None;
            }
            sum += t;
            abs += t.abs();
        }
        if !abs.is_finite() {
            return None;
        }
        let n = self.terms.len() as f64;
        Some((sum, (n + 10.0) * U * abs * 1.01))
    }

    /// Collapses rationally dependent radicands (`x·y` a perfect square)
    /// into a single term each.
    fn reduced(&self) -> SqrtSum {
        let mut groups: Vec<(BigInt, BigRational)> = Vec::new();
        for (x, c) in &self.terms {
            let mut placed = false;
            for (rep, acc) in groups.iter_mut() {
                if let Some(s) = perfect_sqrt(&(x * &*rep)) {
                    // √x = √(x·rep)/rep
                    *acc += c * BigRational::new(s, rep.clone());
                    placed = true;
                    break;
                }
            }
            if !placed {
                groups.push((x.clone(), c.clone()));
            }
        }
        let mut out = SqrtSum::zero();
        for (x, c) in groups {
            out.push(x, c);
        }
        out
    }

    /// Exact sign of the represented real.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if let Some((v, err)) = self.float_estimate() {
            if v.abs() > err {
                return if v > 0.0 { Ordering::Greater } else { Ordering::Less };
            }
        }
        let zero = BigRational::zero();
        if let Some(ord) = self.enclosure(64).certain_cmp(&Interval::point(zero.clone())) {
            return ord;
        }
        let reduced = self.reduced();
        if reduced.is_empty() {
            return Ordering::Equal;
        }
        // A nonzero combination of independent roots: refinement terminates.
        let mut bits = 128;
        loop {
            if let Some(ord) = reduced.enclosure(bits).certain_cmp(&Interval::point(zero.clone())) {
                return ord;
            }
            bits *= 2;
        }
    }

    pub fn cmp_exact(&self, other: &SqrtSum) -> Ordering {
        self.sub(other).signum()
    }
}

impl fmt::Display for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn sqrt_enclosure_brackets() {
        for (n, d) in [(2, 1), (1, 3), (49, 4), (10, 7)] {
            let q = rat(n, d);
            let iv = sqrt_enclosure(&q, 30);
            assert!(&iv.lo * &iv.lo <= q);
            assert!(&iv.hi * &iv.hi >= q);
            assert!(iv.width() <= rat(1, 1 << 30));
        }
        assert_eq!(sqrt_enclosure(&rat(49, 4), 8), Interval::point(rat(7, 2)));
    }

    #[test]
    fn dependent_roots_cancel_exactly() {
        // √8 − 2√2 = 0
        let a = SqrtSum::sqrt_of(&rat_int(8));
        let b = SqrtSum::sqrt_of(&rat_int(2)).scale(&rat_int(2));
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        // √(1/2) = √2 / 2
        let c = SqrtSum::sqrt_of(&rat(1, 2));
        let d = SqrtSum::sqrt_of(&rat_int(2)).scale(&rat(1, 2));
        assert_eq!(c.cmp_exact(&d), Ordering::Equal);
    }

    #[test]
    fn large_square_factors_group() {
        // 101² · 3 is not reduced by the small-prime pass
        let x = rat_int(101 * 101 * 3);
        let a = SqrtSum::sqrt_of(&x);
        let b = SqrtSum::sqrt_of(&rat_int(3)).scale(&rat_int(101));
        assert_eq!(a.sub(&b).signum(), Ordering::Equal);
        assert_eq!(a.add(&b).signum(), Ordering::Greater);
    }

    #[test]
    fn products_and_near_ties() {
        let s2 = SqrtSum::sqrt_of(&rat_int(2));
        let s3 = SqrtSum::sqrt_of(&rat_int(3));
        let p = s2.mul(&s3);
        assert_eq!(p.cmp_exact(&SqrtSum::sqrt_of(&rat_int(6))), Ordering::Equal);
        assert_eq!(s2.mul(&s2).as_rational(), Some(rat_int(2)));
        // √2 + √3 vs √(5 + 2√6) ≈ equal; compare against a tight rational
        let sum = s2.add(&s3);
        let q = SqrtSum::rational(rat(3146264369, 1000000000));
        assert_eq!(sum.cmp_exact(&q), Ordering::Greater);
    }
}
