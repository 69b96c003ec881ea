//! Text literals for scalars, series and polynomials.
//!
//! Series come in two notations:
//!
//! * pair form: `deg:coeff` tokens, e.g. `0:1 1:-1/2 -1:3i`;
//! * algebraic form: `T^2 - 1/2T + (1+i)`, negative exponents allowed.
//!
//! Either may be followed by `key=value` tokens (`r=`, `tail=`, `ring=`,
//! `witness=` ...). Coefficients are `a+bi` with rational or decimal parts
//! and are always read exactly; the float backend rounds afterwards.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Backend, Error, Result};
use crate::poly::Poly;
use crate::scalar::{GaussRat, Real, Scalar};
use crate::series::{Coeffs, WeightedSeries};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, base: usize) -> Self {
        Cursor {
            s: s.as_bytes(),
            pos: 0,
            base,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.base + self.pos, msg)
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.s.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    /// Unsigned decimal or fraction: `12`, `0.25`, `3e-2`, `1/3`.
    fn unsigned_number(&mut self) -> Result<Option<BigRational>> {
        let start = self.pos;
        let int_part = self.digits();
        let mut frac_part = "";
        if self.peek() == Some(b'.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            frac_part = self.digits();
        } else if self.peek() == Some(b'.') && !int_part.is_empty() {
            self.pos += 1;
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Ok(None);
        }
        let mut mantissa: BigInt = format!("{int_part}{frac_part}").parse().expect("digits");
        let mut exp: i64 = -(frac_part.len() as i64);
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let d = self.digits();
            if d.is_empty() {
                self.pos = save;
            } else {
                let e: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
                exp += if neg { -e } else { e };
            }
        }
        let ten = BigInt::from(10);
        let mut value = if exp >= 0 {
            mantissa *= num_traits::pow(ten, exp as usize);
            BigRational::from_integer(mantissa)
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-exp) as usize))
        };
        // a following `/digits` is a fraction bar
        if self.peek() == Some(b'/') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let d = self.digits();
            let den: BigInt = d.parse().expect("digits");
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            value /= BigRational::from_integer(den);
        }
        Ok(Some(value))
    }

    /// One real or imaginary part: `3`, `1/2i`, `i`.
    fn part(&mut self) -> Result<Option<GaussRat>> {
        let n = self.unsigned_number()?;
        if self.eat(b'i') {
            let v = n.unwrap_or_else(BigRational::one);
            return Ok(Some(GaussRat::new(BigRational::zero(), v)));
        }
        Ok(n.map(GaussRat::real))
    }

    /// Signed complex literal `a+bi` up to the end of the complex number.
    fn complex(&mut self) -> Result<GaussRat> {
        self.skip_ws();
        let mut acc = GaussRat::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ if first => false,
                _ => break,
            };
            self.skip_ws();
            let p = self.part()?.ok_or_else(|| self.err("expected a number"))?;
            acc = if neg { &acc - &p } else { &acc + &p };
            first = false;
        }
        Ok(acc)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let d = self.digits();
        if d.is_empty() {
            return Err(self.err("expected an integer"));
        }
        let v: i64 = d.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses an exact rational: `-3`, `1/2`, `0.25`, `1e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let mut c = Cursor::new(t, 0);
    let neg = if c.eat(b'-') {
        true
    } else {
        c.eat(b'+');
        false
    };
    let v = c.unsigned_number()?.ok_or_else(|| c.err("expected a rational number"))?;
    if !c.at_end() {
        return Err(c.err("trailing characters after number"));
    }
    Ok(if neg { -v } else { v })
}

/// Parses a rational and places it in `backend`.
pub fn parse_real(s: &str, backend: Backend) -> Result<Real> {
    Real::Exact(parse_rational(s)?).convert(backend)
}

/// Parses a complex literal such as `1-1/2i`, `3i`, `-i`, `0.5`.
pub fn parse_complex(s: &str) -> Result<GaussRat> {
    let mut c = Cursor::new(s, 0);
    let v = c.complex()?;
    c.skip_ws();
    if !c.at_end() {
        return Err(c.err("trailing characters after complex number"));
    }
    Ok(v)
}

pub fn parse_scalar(s: &str, backend: Backend) -> Result<Scalar> {
    Scalar::Exact(parse_complex(s)?).convert(backend)
}

/// Terms of an algebraic expression like `T^2 - 1/2T + (1+i)T^-1`.
fn parse_algebraic(s: &str, base: usize) -> Result<Vec<(i64, GaussRat)>> {
    let mut c = Cursor::new(s, base);
    let mut terms = Vec::new();
    c.skip_ws();
    if c.at_end() {
        return Ok(terms);
    }
    let mut first = true;
    loop {
        c.skip_ws();
        if c.at_end() {
            if first {
                return Err(c.err("empty expression"));
            }
            break;
        }
        let neg = match c.peek() {
            Some(b'-') => {
                c.pos += 1;
                true
            }
            Some(b'+') => {
                c.pos += 1;
                false
            }
            _ if first => false,
            _ => return Err(c.err("expected `+` or `-` between terms")),
        };
        c.skip_ws();
        let coeff = if c.eat(b'(') {
            let v = c.complex()?;
            c.skip_ws();
            if !c.eat(b')') {
                return Err(c.err("expected `)`"));
            }
            Some(v)
        } else {
            c.part()?
        };
        c.skip_ws();
        let had_star = c.eat(b'*');
        c.skip_ws();
        let degree = if c.eat(b'T') {
            c.skip_ws();
            if c.eat(b'^') {
                c.skip_ws();
                if c.eat(b'(') {
                    let e = c.signed_int()?;
                    if !c.eat(b')') {
                        return Err(c.err("expected `)`"));
                    }
                    Some(e)
                } else {
                    Some(c.signed_int()?)
                }
            } else {
                Some(1)
            }
        } else {
            None
        };
        if coeff.is_none() && degree.is_none() {
            return Err(c.err("expected a coefficient or `T`"));
        }
        if had_star && (coeff.is_none() || degree.is_none()) {
            return Err(c.err("dangling `*`"));
        }
        let v = coeff.unwrap_or_else(GaussRat::one);
        terms.push((degree.unwrap_or(0), if neg { -&v } else { v }));
        first = false;
    }
    Ok(terms)
}

/// A parsed series literal before it is placed in a backend.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeriesLiteral {
    /// `(degree, coefficient)` pairs; repeated degrees add up.
    pub terms: Vec<(i64, GaussRat)>,
    pub keys: BTreeMap<String, String>,
}

impl SeriesLiteral {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.keys.get(key).map(String::as_str)
    }

    pub fn real_key(&self, key: &str, backend: Backend) -> Result<Option<Real>> {
        self.get(key).map(|v| parse_real(v, backend)).transpose()
    }

    /// Dense exact coefficients `(low, coeffs)`.
    pub fn dense(&self) -> (i64, Vec<GaussRat>) {
        let lo = self.terms.iter().map(|t| t.0).min();
        let hi = self.terms.iter().map(|t| t.0).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![GaussRat::zero(); (hi - lo + 1) as usize];
                for (d, c) in &self.terms {
                    let k = (d - lo) as usize;
                    v[k] = &v[k] + c;
                }
                (lo, v)
            }
            _ => (0, Vec::new()),
        }
    }

    /// Builds the series; `r=` overrides `default_radius`, `tail=` sets the
    /// tail bound.
    pub fn to_series(&self, backend: Backend, default_radius: Option<Real>) -> Result<WeightedSeries> {
        let radius = match self.real_key("r", backend)? {
            Some(r) => r,
            None => default_radius
                .ok_or_else(|| Error::Usage("series literal needs a radius `r=`".into()))?
                .convert(backend)?,
        };
        let tail = self.real_key("tail", backend)?;
        let (low, dense) = self.dense();
        let coeffs = match backend {
            Backend::Exact => Coeffs::Exact(dense),
            Backend::Float => Coeffs::Float(dense.iter().map(GaussRat::to_complex64).collect()),
        };
        WeightedSeries::new(low, coeffs, radius, tail)
    }

    /// Exact polynomial; rejects negative degrees.
    pub fn to_poly(&self) -> Result<Poly> {
        let (low, dense) = self.dense();
        if low < 0 && dense.iter().any(|c| !c.is_zero()) {
            return Err(Error::Support(format!(
                "polynomial literal has negative degree {low}"
            )));
        }
        let mut v = vec![GaussRat::zero(); low.max(0) as usize];
        v.extend(dense);
        Ok(Poly::new(v))
    }
}

/// Parses either notation plus trailing `key=value` tokens.
pub fn parse_series_literal(s: &str) -> Result<SeriesLiteral> {
    let mut lit = SeriesLiteral::default();
    let mut body: Vec<(usize, &str)> = Vec::new();
    let mut offset = 0;
    for tok in s.split_whitespace() {
        let at = offset + s[offset..].find(tok).expect("token comes from s");
        offset = at + tok.len();
        match tok.split_once('=') {
            Some((k, v)) if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                lit.keys.insert(k.to_string(), v.to_string());
            }
            _ => body.push((at, tok)),
        }
    }
    let pair_form = body.iter().any(|(_, t)| t.contains(':'));
    if pair_form {
        for (at, tok) in body {
            let (d, c) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(at, format!("expected `deg:coeff`, found `{tok}`")))?;
            let degree: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::parse(at, format!("bad degree `{d}`")))?;
            let mut cur = Cursor::new(c, at + d.len() + 1);
            let v = cur.complex()?;
            if !cur.at_end() {
                return Err(cur.err("trailing characters in coefficient"));
            }
            lit.terms.push((degree, v));
        }
    } else if let Some(&(start, _)) = body.first() {
        let &(last, last_tok) = body.last().expect("nonempty");
        let text = &s[start..last + last_tok.len()];
        lit.terms = parse_algebraic(text, start)?;
    }
    Ok(lit)
}

pub fn parse_series(s: &str, backend: Backend, default_radius: Option<Real>) -> Result<WeightedSeries> {
    parse_series_literal(s)?.to_series(backend, default_radius)
}

pub fn parse_poly(s: &str) -> Result<Poly> {
    let lit = parse_series_literal(s)?;
    if let Some(k) = lit.keys.keys().next() {
        return Err(Error::Usage(format!("unexpected key `{k}` in polynomial literal")));
    }
    lit.to_poly()
}

/// Pair-form serialization; exact round trip in the exact backend.
pub fn format_series(s: &WeightedSeries) -> String {
    let mut parts: Vec<String> = Vec::new();
    for n in s.support() {
        parts.push(format!("{n}:{}", s.coeff(n)));
    }
    parts.push(format!("r={}", s.radius()));
    if let Some(t) = s.tail() {
        parts.push(format!("tail={t}"));
    }
    parts.join(" ")
}

/// Pair-form body only (no keys).
pub fn format_terms(s: &WeightedSeries) -> String {
    let parts: Vec<String> = s.support().iter().map(|n| format!("{n}:{}", s.coeff(*n))).collect();
    if parts.is_empty() {
        "0:0".to_string()
    } else {
        parts.join(" ")
    }
}

/// Rational formatting with a sign-aware shortest form.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_negative() {
        format!("-{}", q.abs())
    } else {
        q.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn numbers() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("1.5e2").unwrap(), rat_int(150));
        assert_eq!(parse_rational("2e-3").unwrap(), rat(1, 500));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1+2i").unwrap(), GaussRat::from_ints(1, 2));
        assert_eq!(parse_complex("-i").unwrap(), GaussRat::from_ints(0, -1));
        assert_eq!(parse_complex("3i").unwrap(), GaussRat::from_ints(0, 3));
        assert_eq!(
            parse_complex("1/2-3/4i").unwrap(),
            GaussRat::new(rat(1, 2), rat(-3, 4))
        );
    }

    #[test]
    fn pair_form_with_keys() {
        let lit = parse_series_literal("0:1 1:-1/2  -1:3i r=2").unwrap();
        assert_eq!(lit.get("r"), Some("2"));
        let s = lit.to_series(Backend::Exact, None).unwrap();
        assert_eq!(s.low_degree(), -1);
        assert_eq!(s.coeff(1), Scalar::Exact(GaussRat::new(rat(-1, 2), rat_int(0))));
        assert_eq!(s.coeff(-1), Scalar::Exact(GaussRat::from_ints(0, 3)));
    }

    #[test]
    fn algebraic_form() {
        assert_eq!(parse_poly("T^2+1").unwrap(), Poly::from_ints(&[1, 0, 1]));
        assert_eq!(parse_poly("T - 1").unwrap(), Poly::from_ints(&[-1, 1]));
        assert_eq!(parse_poly("2*T").unwrap(), Poly::from_ints(&[0, 2]));
        assert_eq!(
            parse_poly("(1+i)T^3 - 1/2T").unwrap(),
            Poly::new(vec![
                GaussRat::zero(),
                GaussRat::new(rat(-1, 2), rat_int(0)),
                GaussRat::zero(),
                GaussRat::from_ints(1, 1)
            ])
        );
        assert_eq!(parse_poly("iT").unwrap(), Poly::new(vec![GaussRat::zero(), GaussRat::i()]));
        let s = parse_series("T + 1 + T^-1", Backend::Exact, Some(Real::ratio(1, 1))).unwrap();
        assert_eq!(s.low_degree(), -1);
        assert!(parse_poly("T^-1").is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_series_literal("0:1 1:1x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("T +* 2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn exact_round_trip() {
        let s = parse_series("0:1 1:-1/2 -1:3i r=2 tail=1/7", Backend::Exact, None).unwrap();
        let text = format_series(&s);
        let back = parse_series(&text, Backend::Exact, None).unwrap();
        assert_eq!(back.trim(), s.trim());
        assert_eq!(back.tail(), s.tail());
    }
}
