//! Exact univariate polynomials over `ℚ(i)`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussRat;

/// Polynomial in `T` with Gaussian-rational coefficients, lowest degree first
/// and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<GaussRat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(GaussRat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Poly::new(vec![c])
    }

    /// `T`.
    pub fn t() -> Self {
        Poly::monomial(GaussRat::one(), 1)
    }

    pub fn monomial(c: GaussRat, degree: usize) -> Self {
        let mut v = vec![GaussRat::zero(); degree + 1];
        v[degree] = c;
        Poly::new(v)
    }

    /// `T - z`.
    pub fn linear_root(z: &GaussRat) -> Self {
        Poly::new(vec![-z, GaussRat::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&a| GaussRat::from_ints(a, 0)).collect())
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> GaussRat {
        self.coeffs.get(n).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dl = d.lead().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![GaussRat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &dl;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * b);
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Exact quotient; errors when the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Usage(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.div_rem(self).is_ok_and(|(_, r)| r.is_zero())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, u, v)` with `u·self + v·o = g = gcd(self, o)` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        match r0.lead() {
            None => (Poly::zero(), s0, t0),
            Some(l) => {
                let k = l.inv().expect("nonzero lead");
                (r0.scale(&k), s0.scale(&k), t0.scale(&k))
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c.scale(&crate::scalar::rat_int(n as i64)))
                .collect(),
        )
    }

    /// `p / gcd(p, p')`, monic: one factor per distinct root.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    pub fn eval(&self, z: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex64();
        }
        acc
    }

    pub fn to_complex64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussRat::to_complex64).collect()
    }

    /// Multiplicity of `z` as a root (`None` for the zero polynomial).
    pub fn order_at(&self, z: &GaussRat) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let lin = Poly::linear_root(z);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Substitution `T ↦ q(T)`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Poly::constant(c.clone()));
        }
        acc
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &GaussRat, first: bool, has_var: bool) -> fmt::Result {
    let simple_real = c.im.is_zero();
    let simple_imag = c.re.is_zero() && !c.im.is_zero();
    if simple_real || simple_imag {
        let v = if simple_real { &c.re } else { &c.im };
        let neg = v.is_negative();
        if neg {
            f.write_str("-")?;
        } else if !first {
            f.write_str("+")?;
        }
        let a = v.abs();
        let unit = a.is_one();
        if simple_real {
            if !(unit && has_var) {
                write!(f, "{a}")?;
            }
        } else {
            if !unit {
                write!(f, "{a}")?;
            }
            f.write_str("i")?;
        }
        Ok(())
    } else {
        if !first {
            f.write_str("+")?;
        }
        write!(f, "({c})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_coeff(f, c, first, n > 0)?;
            match n {
                0 => {}
                1 => f.write_str("T")?,
                _ => write!(f, "T^{n}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly> {
        crate::literal::parse_poly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let p = Poly::from_ints(&[-1, 0, 1]); // T² - 1
        let d = Poly::from_ints(&[-1, 1]); // T - 1
        let (q, r) = p.div_rem(&d).unwrap();
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let g = p.gcd(&Poly::from_ints(&[-2, 1, 1])); // (T-1)(T+2)
        assert_eq!(g, d);
    }

    #[test]
    fn bezout_identity() {
        let a = Poly::t();
        let b = Poly::from_ints(&[-1, 1]);
        let (g, u, v) = a.xgcd(&b);
        assert!(g.is_one());
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
    }

    #[test]
    fn squarefree_and_order() {
        // (T-1)^3 (T+i)
        let p = Poly::from_ints(&[-1, 1])
            .pow(3)
            .mul(&Poly::linear_root(&(-&GaussRat::i())));
        assert_eq!(p.squarefree_part().degree(), Some(2));
        assert_eq!(p.order_at(&GaussRat::one()), Some(3));
        assert_eq!(p.order_at(&GaussRat::zero()), Some(0));
        assert_eq!(Poly::zero().order_at(&GaussRat::one()), None);
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[1, 0, 1]).to_string(), "T^2+1");
        assert_eq!(Poly::from_ints(&[-1, 1]).to_string(), "T-1");
        assert_eq!(
            Poly::new(vec![GaussRat::i(), GaussRat::from_ints(1, 2)]).to_string(),
            "(1+2i)T+i"
        );
    }
}
