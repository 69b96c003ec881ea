//! Regions of the line cut out by norm constraints `|f| ◊ c`, their lattice
//! operations, and sampled falsification of inclusions.
//!
//! Membership is decided per point: a double-precision Horner value with a
//! rigorous error bound settles most constraints, and anything within the
//! error band is re-evaluated exactly at the (dyadic) sample point. Only when
//! the exact fallback is switched off can a point be undecided.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::literal::{format_rational, parse_poly, parse_rational};
use crate::poly::Poly;
use crate::random;
use crate::scalar::{rat, rational_from_f64, rational_to_f64, GaussRat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Rel {
    fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Le => o != Ordering::Greater,
            Rel::Lt => o == Ordering::Less,
            Rel::Ge => o != Ordering::Less,
            Rel::Gt => o == Ordering::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

/// `|f| rel c` with `f` nonzero and `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    f: Poly,
    rel: Rel,
    c: BigRational,
}

impl Constraint {
    pub fn new(f: Poly, rel: Rel, c: BigRational) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::Usage("constraint polynomial must be nonzero".into()));
        }
        if !c.is_positive() {
            return Err(Error::Usage(format!("constraint bound must be positive, got {c}")));
        }
        Ok(Constraint { f, rel, c })
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }

    pub fn bound(&self) -> &BigRational {
        &self.c
    }

    /// Exact truth value at a Gaussian-rational point.
    pub fn holds_at(&self, z: &GaussRat) -> bool {
        let v = self.f.eval(z).norm_sqr();
        self.rel.holds(v.cmp(&(&self.c * &self.c)))
    }

    /// Constant constraints are decided once, symbolically.
    fn constant_value(&self) -> Option<bool> {
        (self.f.degree() == Some(0)).then(|| self.holds_at(&GaussRat::zero()))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}| {} {}", self.f, self.rel.symbol(), format_rational(&self.c))
    }
}

/// A finite union of finite intersections of constraints. No clauses is
/// the empty region; a single empty clause is the whole line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionExpr {
    clauses: Vec<Vec<Constraint>>,
}

impl RegionExpr {
    pub fn empty() -> Self {
        RegionExpr { clauses: Vec::new() }
    }

    pub fn full() -> Self {
        RegionExpr {
            clauses: vec![Vec::new()],
        }
    }

    pub fn constraint(c: Constraint) -> Self {
        RegionExpr { clauses: vec![vec![c]] }.normalized()
    }

    /// `{|f| rel c}`, folding constant `f` (including zero) to full or empty.
    pub fn atom(f: Poly, rel: Rel, c: BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Usage(format!("constraint bound must be positive, got {c}")));
        }
        if f.degree().is_none_or(|d| d == 0) {
            let v = f.coeff(0).norm_sqr();
            return Ok(if rel.holds(v.cmp(&(&c * &c))) {
                RegionExpr::full()
            } else {
                RegionExpr::empty()
            });
        }
        Ok(RegionExpr::constraint(Constraint::new(f, rel, c)?))
    }

    pub fn clauses(&self) -> &[Vec<Constraint>] {
        &self.clauses
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0].is_empty()
    }

    /// Sorted, deduplicated clauses with constants folded and subsumed
    /// clauses removed. Idempotent and semantics-preserving.
    pub fn normalized(&self) -> RegionExpr {
        let mut clauses: Vec<Vec<Constraint>> = Vec::new();
        'clause: for cl in &self.clauses {
            let mut kept = Vec::with_capacity(cl.len());
            for c in cl {
                match c.constant_value() {
                    Some(true) => {}
                    Some(false) => continue 'clause,
                    None => kept.push(c.clone()),
                }
            }
            kept.sort();
            kept.dedup();
            clauses.push(kept);
        }
        if clauses.iter().any(Vec::is_empty) {
            return RegionExpr::full();
        }
        clauses.sort();
        clauses.dedup();
        // a clause implied by a smaller one adds nothing to the union
        let subset = |a: &[Constraint], b: &[Constraint]| a.iter().all(|x| b.binary_search(x).is_ok());
        let keep: Vec<bool> = (0..clauses.len())
            .map(|i| {
                !(0..clauses.len()).any(|j| j != i && clauses[j].len() < clauses[i].len() && subset(&clauses[j], &clauses[i]))
            })
            .collect();
        let clauses = clauses.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
        RegionExpr { clauses }
    }

    pub fn meet(&self, other: &RegionExpr) -> RegionExpr {
        let mut clauses = Vec::with_capacity(self.clauses.len() * other.clauses.len());
        for a in &self.clauses {
            for b in &other.clauses {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                clauses.push(c);
            }
        }
        RegionExpr { clauses }.normalized()
    }

    pub fn join(&self, other: &RegionExpr) -> RegionExpr {
        let mut clauses = self.clauses.clone();
        clauses.extend(other.clauses.iter().cloned());
        RegionExpr { clauses }.normalized()
    }

    /// Exact membership at a Gaussian-rational point.
    pub fn contains_exact(&self, z: &GaussRat) -> bool {
        self.clauses.iter().any(|cl| cl.iter().all(|c| c.holds_at(z)))
    }

    /// Every constraint, clause by clause.
    fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.clauses.iter().flatten()
    }
}

impl fmt::Display for RegionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        if self.is_full() {
            return f.write_str("full");
        }
        let multi = self.clauses.len() > 1;
        for (i, cl) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            let paren = multi && cl.len() > 1;
            if paren {
                f.write_str("(")?;
            }
            for (j, c) in cl.iter().enumerate() {
                if j > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{c}")?;
            }
            if paren {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for RegionExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_region(s)
    }
}

struct RegionParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> RegionParser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RegionExpr> {
        let mut acc = self.term()?;
        while self.eat("|") {
            acc = acc.join(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RegionExpr> {
        let mut acc = self.factor()?;
        while self.eat("&") {
            acc = acc.meet(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RegionExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                Ok(e)
            }
            Some('|') => {
                self.pos += 1;
                let start = self.pos;
                let len = self.src[start..]
                    .find('|')
                    .ok_or_else(|| Error::parse(start, "unclosed `|`"))?;
                let text = &self.src[start..start + len];
                let f = parse_poly(text).map_err(|e| shift(e, start))?;
                self.pos = start + len + 1;
                let rel = if self.eat("<=") || self.eat("≤") {
                    Rel::Le
                } else if self.eat(">=") || self.eat("≥") {
                    Rel::Ge
                } else if self.eat("<") {
                    Rel::Lt
                } else if self.eat(">") {
                    Rel::Gt
                } else {
                    return Err(Error::parse(self.pos, "expected one of <=, <, >=, >"));
                };
                self.skip_ws();
                let start = self.pos;
                let len = self.src[start..]
                    .find(|ch: char| !(ch.is_ascii_digit() || "./eE+-".contains(ch)))
                    .unwrap_or(self.src.len() - start);
                let c = parse_rational(&self.src[start..start + len]).map_err(|e| shift(e, start))?;
                self.pos = start + len;
                if !c.is_positive() {
                    return Err(Error::parse(start, "bound must be positive"));
                }
                RegionExpr::atom(f, rel, c)
            }
            Some(_) => {
                if self.eat("empty") {
                    Ok(RegionExpr::empty())
                } else if self.eat("full") {
                    Ok(RegionExpr::full())
                } else {
                    Err(Error::parse(self.pos, "expected `|f| rel c`, `empty`, `full` or `(`"))
                }
            }
            None => Err(Error::parse(self.pos, "unexpected end of region")),
        }
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// Parses `|f| <= c`, `|f| < c`, `|f| >= c`, `|f| > c`, `empty`, `full`
/// joined by `&` (meet, binds tighter) and `|` (join), with parentheses.
pub fn parse_region(s: &str) -> Result<RegionExpr> {
    let mut p = RegionParser { src: s, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(e)
}

/// Three-valued membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Undecided,
}

impl Membership {
    fn from_bool(b: bool) -> Self {
        if b {
            Membership::In
        } else {
            Membership::Out
        }
    }

    fn and(self, o: Membership) -> Membership {
        match (self, o) {
            (Membership::Out, _) | (_, Membership::Out) => Membership::Out,
            (Membership::In, Membership::In) => Membership::In,
            _ => Membership::Undecided,
        }
    }

    fn or(self, o: Membership) -> Membership {
        match (self, o) {
            (Membership::In, _) | (_, Membership::In) => Membership::In,
            (Membership::Out, Membership::Out) => Membership::Out,
            _ => Membership::Undecided,
        }
    }
}

/// Membership of `z` in `r`. Exact points are evaluated exactly; float
/// points are evaluated in double precision with a certified error bound,
/// falling back to exact arithmetic at the double's rational value when
/// `exact_fallback` is set.
pub fn member(r: &RegionExpr, z: &Scalar, exact_fallback: bool) -> Membership {
    match z {
        Scalar::Exact(q) => Membership::from_bool(r.contains_exact(q)),
        Scalar::Float(w) => {
            let table = AtomTable::compile(std::slice::from_ref(r));
            let mut ctx = PointCtx::new(*w);
            table.region_values(&mut ctx, exact_fallback)[0]
        }
    }
}

/// Membership at many float points, compiled once and evaluated in
/// parallel; the output follows the input order.
pub fn member_many(r: &RegionExpr, points: &[Complex64], exact_fallback: bool) -> Vec<Membership> {
    let table = AtomTable::compile(std::slice::from_ref(r));
    points
        .par_iter()
        .map(|w| table.region_values(&mut PointCtx::new(*w), exact_fallback)[0])
        .collect()
}

const U: f64 = f64::EPSILON / 2.0;

struct PolyCode {
    coeffs: Vec<Complex64>,
    abs: Vec<f64>,
    exact: Poly,
}

impl PolyCode {
    fn new(p: &Poly) -> Self {
        let coeffs = p.to_complex64();
        let abs = coeffs.iter().map(|c| c.norm()).collect();
        PolyCode {
            coeffs,
            abs,
            exact: p.clone(),
        }
    }

    /// `(|p(z)|, e)` with `||p(z)| - m| ≤ e` for the computed `m`, covering
    /// coefficient rounding, Horner rounding and the final modulus.
    fn approx(&self, z: Complex64) -> (f64, f64) {
        let n = self.coeffs.len();
        let az = z.norm();
        let mut v = Complex64::new(0.0, 0.0);
        let mut m = 0.0;
        for (c, a) in self.coeffs.iter().zip(&self.abs).rev() {
            v = v * z + c;
            m = m * az + a;
        }
        let val = v.norm();
        let err = (8.0 * n as f64 + 8.0) * U * m * 1.125 + 4.0 * U * val + f64::MIN_POSITIVE;
        (val, err)
    }
}

struct Atom {
    poly: usize,
    rel: Rel,
    c_sq: BigRational,
    c_lo: f64,
    c_hi: f64,
}

struct PointCtx {
    z: Complex64,
    exact_z: Option<GaussRat>,
    exact: BTreeMap<usize, BigRational>,
}

impl PointCtx {
    fn new(z: Complex64) -> Self {
        PointCtx {
            z,
            exact_z: None,
            exact: BTreeMap::new(),
        }
    }

    fn exact_point(&mut self) -> &GaussRat {
        let z = self.z;
        self.exact_z.get_or_insert_with(|| {
            GaussRat::new(
                rational_from_f64(z.re).expect("finite sample"),
                rational_from_f64(z.im).expect("finite sample"),
            )
        })
    }
}

/// Unique polynomials and atoms shared by a batch of regions, so every
/// polynomial is evaluated once per point.
struct AtomTable {
    polys: Vec<PolyCode>,
    atoms: Vec<Atom>,
    regions: Vec<Vec<Vec<usize>>>,
}

impl AtomTable {
    fn compile(regions: &[RegionExpr]) -> Self {
        let mut poly_ix: BTreeMap<&Poly, usize> = BTreeMap::new();
        let mut atom_ix: BTreeMap<&Constraint, usize> = BTreeMap::new();
        let mut polys = Vec::new();
        let mut atoms = Vec::new();
        for c in regions.iter().flat_map(RegionExpr::constraints) {
            if atom_ix.contains_key(c) {
                continue;
            }
            let pi = *poly_ix.entry(&c.f).or_insert_with(|| {
                polys.push(PolyCode::new(&c.f));
                polys.len() - 1
            });
            let cf = rational_to_f64(&c.c);
            atom_ix.insert(c, atoms.len());
            atoms.push(Atom {
                poly: pi,
                rel: c.rel,
                c_sq: &c.c * &c.c,
                c_lo: cf * (1.0 - 4.0 * U),
                c_hi: cf * (1.0 + 4.0 * U),
            });
        }
        let regions = regions
            .iter()
            .map(|r| r.clauses.iter().map(|cl| cl.iter().map(|c| atom_ix[c]).collect()).collect())
            .collect();
        AtomTable { polys, atoms, regions }
    }

    fn atom_values(&self, ctx: &mut PointCtx, fallback: bool) -> Vec<Membership> {
        let vals: Vec<(f64, f64)> = self.polys.iter().map(|p| p.approx(ctx.z)).collect();
        self.atoms
            .iter()
            .map(|a| {
                let (m, e) = vals[a.poly];
                let ord = if !(m.is_finite() && e.is_finite()) {
                    None
                } else if m - e > a.c_hi {
                    Some(Ordering::Greater)
                } else if m + e < a.c_lo {
                    Some(Ordering::Less)
                } else {
                    None
                };
                match ord {
                    Some(o) => Membership::from_bool(a.rel.holds(o)),
                    None if fallback => {
                        if !ctx.exact.contains_key(&a.poly) {
                            let z = ctx.exact_point().clone();
                            let v = self.polys[a.poly].exact.eval(&z).norm_sqr();
                            ctx.exact.insert(a.poly, v);
                        }
                        Membership::from_bool(a.rel.holds(ctx.exact[&a.poly].cmp(&a.c_sq)))
                    }
                    None => Membership::Undecided,
                }
            })
            .collect()
    }

    fn region_values(&self, ctx: &mut PointCtx, fallback: bool) -> Vec<Membership> {
        let atoms = self.atom_values(ctx, fallback);
        self.regions
            .iter()
            .map(|clauses| {
                clauses.iter().fold(Membership::Out, |acc, cl| {
                    acc.or(cl.iter().fold(Membership::In, |m, &i| m.and(atoms[i])))
                })
            })
            .collect()
    }
}

/// Axis-aligned sampling rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub x0: BigRational,
    pub y0: BigRational,
    pub x1: BigRational,
    pub y1: BigRational,
}

impl Window {
    pub fn new(x0: BigRational, y0: BigRational, x1: BigRational, y1: BigRational) -> Result<Self> {
        if x0 > x1 || y0 > y1 {
            return Err(Error::Usage("window must satisfy x0 <= x1 and y0 <= y1".into()));
        }
        Ok(Window { x0, y0, x1, y1 })
    }

    /// `[-h, h]²`.
    pub fn square(h: i64) -> Self {
        Window {
            x0: rat(-h, 1),
            y0: rat(-h, 1),
            x1: rat(h, 1),
            y1: rat(h, 1),
        }
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Usage(format!("window needs x0,y0,x1,y1, got `{s}`")));
        }
        let v = parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>()?;
        Window::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            format_rational(&self.x0),
            format_rational(&self.y0),
            format_rational(&self.x1),
            format_rational(&self.y1)
        )
    }
}

/// Sample points: the grid `x0 + i·step`, `y0 + j·step` inside the window,
/// then `random_points` uniform points. Point `k` depends only on `k` and
/// the seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampler {
    pub window: Window,
    /// `None` or zero disables the grid.
    pub grid_step: Option<BigRational>,
    pub random_points: usize,
    pub seed: u64,
    pub exact_fallback: bool,
}

const POINT_STREAM: u64 = 0x5A4D_504C;

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            window: Window::square(4),
            grid_step: Some(rat(1, 32)),
            random_points: 10_000,
            seed: 0,
            exact_fallback: true,
        }
    }
}

impl Sampler {
    pub fn empty() -> Self {
        Sampler {
            grid_step: None,
            random_points: 0,
            ..Sampler::default()
        }
    }

    fn axis(lo: &BigRational, hi: &BigRational, step: &BigRational) -> Vec<f64> {
        let n = ((hi - lo) / step).floor().to_integer().to_usize().unwrap_or(0);
        (0..=n)
            .map(|i| rational_to_f64(&(lo + step * BigRational::from_integer(BigInt::from(i)))))
            .collect()
    }

    /// Grid coordinates along each axis.
    pub fn axes(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.grid_step {
            Some(step) if step.is_positive() => (
                Sampler::axis(&self.window.x0, &self.window.x1, step),
                Sampler::axis(&self.window.y0, &self.window.y1, step),
            ),
            _ => (Vec::new(), Vec::new()),
        }
    }

    pub fn len(&self) -> usize {
        let (xs, ys) = self.axes();
        xs.len() * ys.len() + self.random_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn random_point(&self, k: usize) -> Complex64 {
        let mut rng = random::trial_rng(self.seed, POINT_STREAM, k as u64);
        let w = &self.window;
        let (x0, x1) = (rational_to_f64(&w.x0), rational_to_f64(&w.x1));
        let (y0, y1) = (rational_to_f64(&w.y0), rational_to_f64(&w.y1));
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        Complex64::new(x0 + (x1 - x0) * u, y0 + (y1 - y0) * v)
    }

    fn point(&self, xs: &[f64], ys: &[f64], idx: usize) -> Complex64 {
        let g = xs.len() * ys.len();
        if idx < g {
            Complex64::new(xs[idx % xs.len()], ys[idx / xs.len()])
        } else {
            self.random_point(idx - g)
        }
    }

    /// All sample points in index order.
    pub fn points(&self) -> Vec<Complex64> {
        let (xs, ys) = self.axes();
        (0..self.len()).map(|i| self.point(&xs, &ys, i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// No point violated the relation; `undecided` points were skipped.
    NoCounterexampleFound { samples: usize, undecided: usize },
    /// The lowest-index violating point, re-checked exactly.
    Counterexample { z: Scalar, index: usize, details: String },
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }

    /// Prefers the counterexample with the lowest index.
    pub fn merge(self, other: Verdict) -> Verdict {
        match (self, other) {
            (
                Verdict::NoCounterexampleFound { samples: a, undecided: u },
                Verdict::NoCounterexampleFound { samples: b, undecided: v },
            ) => Verdict::NoCounterexampleFound {
                samples: a.max(b),
                undecided: u + v,
            },
            (c @ Verdict::Counterexample { .. }, Verdict::NoCounterexampleFound { .. })
            | (Verdict::NoCounterexampleFound { .. }, c @ Verdict::Counterexample { .. }) => c,
            (a @ Verdict::Counterexample { index: i, .. }, b @ Verdict::Counterexample { index: j, .. }) => {
                if j < i {
                    b
                } else {
                    a
                }
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoCounterexampleFound { samples, undecided } => {
                write!(f, "verdict=no-counterexample samples={samples} undecided={undecided}")?;
                if *samples == 0 {
                    f.write_str(" vacuous=true")?;
                }
                Ok(())
            }
            Verdict::Counterexample { z, index, details } => {
                write!(f, "verdict=counterexample index={index} z={z} details=\"{details}\"")
            }
        }
    }
}

/// A pointwise relation between regions of a batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `a ⊆ b`.
    Includes(usize, usize),
    /// `a = b`.
    Equal(usize, usize),
}

impl Relation {
    fn outcome(self, m: &[Membership]) -> Option<bool> {
        let (a, b) = match self {
            Relation::Includes(a, b) | Relation::Equal(a, b) => (m[a], m[b]),
        };
        if a == Membership::Undecided || b == Membership::Undecided {
            // an undecided side can still be irrelevant to inclusion
            return match (self, a, b) {
                (Relation::Includes(..), Membership::Out, _) | (Relation::Includes(..), _, Membership::In) => Some(true),
                _ => None,
            };
        }
        Some(match self {
            Relation::Includes(..) => !(a == Membership::In && b == Membership::Out),
            Relation::Equal(..) => a == b,
        })
    }
}

#[derive(Clone)]
struct Tally {
    first_violation: Vec<Option<usize>>,
    undecided: Vec<usize>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            first_violation: vec![None; n],
            undecided: vec![0; n],
        }
    }

    fn combine(mut self, o: Tally) -> Tally {
        for (a, b) in self.first_violation.iter_mut().zip(o.first_violation) {
            *a = match (*a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
        for (a, b) in self.undecided.iter_mut().zip(o.undecided) {
            *a += b;
        }
        self
    }
}

/// Tests every relation at every sample point in one pass. The result does
/// not depend on the number of worker threads.
pub fn check_relations(regions: &[RegionExpr], relations: &[Relation], sampler: &Sampler) -> Vec<Verdict> {
    let table = AtomTable::compile(regions);
    let (xs, ys) = sampler.axes();
    let n = sampler.len();
    let k = relations.len();
    let tally = (0..n)
        .into_par_iter()
        .fold(
            || Tally::new(k),
            |mut t, idx| {
                let mut ctx = PointCtx::new(sampler.point(&xs, &ys, idx));
                let m = table.region_values(&mut ctx, sampler.exact_fallback);
                for (j, rel) in relations.iter().enumerate() {
                    match rel.outcome(&m) {
                        Some(true) => {}
                        Some(false) => {
                            if t.first_violation[j].is_none_or(|f| idx < f) {
                                t.first_violation[j] = Some(idx);
                            }
                        }
                        None => t.undecided[j] += 1,
                    }
                }
                t
            },
        )
        .reduce(|| Tally::new(k), Tally::combine);
    relations
        .iter()
        .enumerate()
        .map(|(j, rel)| match tally.first_violation[j] {
            None => Verdict::NoCounterexampleFound {
                samples: n - tally.undecided[j],
                undecided: tally.undecided[j],
            },
            Some(idx) => {
                let w = sampler.point(&xs, &ys, idx);
                let z = GaussRat::new(
                    rational_from_f64(w.re).expect("finite"),
                    rational_from_f64(w.im).expect("finite"),
                );
                let (a, b) = match rel {
                    Relation::Includes(a, b) | Relation::Equal(a, b) => (*a, *b),
                };
                let (ia, ib) = (regions[a].contains_exact(&z), regions[b].contains_exact(&z));
                let confirmed = match rel {
                    Relation::Includes(..) => ia && !ib,
                    Relation::Equal(..) => ia != ib,
                };
                assert!(confirmed, "sampled violation at {z} did not survive exact re-evaluation");
                let show = |x: bool| if x { "in" } else { "out" };
                Verdict::Counterexample {
                    z: Scalar::Exact(z),
                    index: idx,
                    details: format!("lhs={} rhs={}", show(ia), show(ib)),
                }
            }
        })
        .collect()
}

/// Searches for `z ∈ r1 \ r2`. Falsification only.
pub fn includes(r1: &RegionExpr, r2: &RegionExpr, sampler: &Sampler) -> Verdict {
    check_relations(&[r1.clone(), r2.clone()], &[Relation::Includes(0, 1)], sampler).remove(0)
}

/// Searches for a point where `r1` and `r2` disagree.
pub fn equal_pointwise(r1: &RegionExpr, r2: &RegionExpr, sampler: &Sampler) -> Verdict {
    check_relations(&[r1.clone(), r2.clone()], &[Relation::Equal(0, 1)], sampler).remove(0)
}

/// `r1 ∧ (r2 ∨ r3) = (r1 ∧ r2) ∨ (r1 ∧ r3)` pointwise.
pub fn distributivity_check(r1: &RegionExpr, r2: &RegionExpr, r3: &RegionExpr, sampler: &Sampler) -> Verdict {
    let lhs = r1.meet(&r2.join(r3));
    let rhs = r1.meet(r2).join(&r1.meet(r3));
    equal_pointwise(&lhs, &rhs, sampler)
}

/// Names of the laws checked by [`lattice_law_check`].
pub const LATTICE_LAWS: [&str; 10] = [
    "meet-commutative",
    "join-commutative",
    "meet-associative",
    "join-associative",
    "meet-idempotent",
    "join-idempotent",
    "absorption-meet",
    "absorption-join",
    "distributive-meet",
    "distributive-join",
];

/// Pointwise lattice laws for a triple, in the order of [`LATTICE_LAWS`].
pub fn lattice_law_check(a: &RegionExpr, b: &RegionExpr, c: &RegionExpr, sampler: &Sampler) -> Vec<(&'static str, Verdict)> {
    let pairs = [
        (a.meet(b), b.meet(a)),
        (a.join(b), b.join(a)),
        (a.meet(&b.meet(c)), a.meet(b).meet(c)),
        (a.join(&b.join(c)), a.join(b).join(c)),
        (a.meet(a), a.clone()),
        (a.join(a), a.clone()),
        (a.meet(&a.join(b)), a.clone()),
        (a.join(&a.meet(b)), a.clone()),
        (a.meet(&b.join(c)), a.meet(b).join(&a.meet(c))),
        (a.join(&b.meet(c)), a.join(b).meet(&a.join(c))),
    ];
    let mut regions = Vec::with_capacity(20);
    let mut rels = Vec::with_capacity(10);
    for (l, r) in pairs {
        rels.push(Relation::Equal(regions.len(), regions.len() + 1));
        regions.push(l);
        regions.push(r);
    }
    LATTICE_LAWS.iter().copied().zip(check_relations(&regions, &rels, sampler)).collect()
}

/// Inputs of the six-item relation suite.
#[derive(Clone, Debug, PartialEq)]
pub struct GagaConfig {
    pub f: Poly,
    pub g: Poly,
    pub alpha: GaussRat,
    pub r: BigRational,
    pub s: BigRational,
    /// Radius `< 1` used by item (3).
    pub inner: BigRational,
    /// Replace item (6) by the false claim with bound `(r + s)/2`.
    pub negate6: bool,
}

impl Default for GagaConfig {
    fn default() -> Self {
        GagaConfig {
            f: Poly::t(),
            g: Poly::from_ints(&[1, 1]),
            alpha: GaussRat::new(rat(1, 2), rat(0, 1)),
            r: rat(1, 1),
            s: rat(1, 1),
            inner: rat(1, 2),
            negate6: false,
        }
    }
}

/// Decreasing radii above 1 for item (1).
pub fn outer_schedule() -> Vec<BigRational> {
    vec![rat(2, 1), rat(3, 2), rat(5, 4), rat(9, 8), rat(17, 16)]
}

/// Increasing radii below 1 for the dual of item (1).
pub fn inner_schedule() -> Vec<BigRational> {
    vec![rat(1, 2), rat(2, 3), rat(4, 5), rat(8, 9), rat(16, 17)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ItemVerdict {
    pub item: u8,
    pub verdict: Verdict,
}

impl fmt::Display for ItemVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "item={} {}", self.item, self.verdict)
    }
}

fn push(regions: &mut Vec<RegionExpr>, r: RegionExpr) -> usize {
    regions.push(r);
    regions.len() - 1
}

/// Runs items (1)–(6) pointwise. Item (1) is checked in its testable
/// direction `{|f|≤1} ⊆ {|f|≤ρ}` over the schedule (and dually); the
/// limiting equality can only be falsified, never confirmed, by sampling.
pub fn gaga_axiom_suite(cfg: &GagaConfig, sampler: &Sampler) -> Result<Vec<ItemVerdict>> {
    for (name, v) in [("r", &cfg.r), ("s", &cfg.s), ("inner", &cfg.inner)] {
        if !v.is_positive() {
            return Err(Error::Usage(format!("{name} must be positive, got {v}")));
        }
    }
    if cfg.inner >= rat(1, 1) {
        return Err(Error::Usage(format!(
            "item 3 needs an inner radius below 1, got {}",
            format_rational(&cfg.inner)
        )));
    }
    let one = rat(1, 1);
    let atom = |p: &Poly, rel: Rel, c: &BigRational| RegionExpr::atom(p.clone(), rel, c.clone());
    let f = &cfg.f;
    let g = &cfg.g;
    let mut regions: Vec<RegionExpr> = Vec::new();
    let full = push(&mut regions, RegionExpr::full());
    let empty = push(&mut regions, RegionExpr::empty());
    let f_le1 = push(&mut regions, atom(f, Rel::Le, &one)?);
    let f_ge1 = push(&mut regions, atom(f, Rel::Ge, &one)?);
    let g_le1 = push(&mut regions, atom(g, Rel::Le, &one)?);
    let g_ge1 = push(&mut regions, atom(g, Rel::Ge, &one)?);

    let mut rels: Vec<(u8, Relation)> = Vec::new();
    for rho in outer_schedule() {
        let i = push(&mut regions, atom(f, Rel::Le, &rho)?);
        rels.push((1, Relation::Includes(f_le1, i)));
    }
    for rho in inner_schedule() {
        let i = push(&mut regions, atom(f, Rel::Ge, &rho)?);
        rels.push((1, Relation::Includes(f_ge1, i)));
    }
    let dichotomy = regions[f_le1].join(&regions[f_ge1]);
    let i = push(&mut regions, dichotomy);
    rels.push((2, Relation::Includes(full, i)));

    let inner = atom(f, Rel::Le, &cfg.inner)?.meet(&regions[f_ge1]);
    let i = push(&mut regions, inner);
    rels.push((3, Relation::Includes(i, empty)));

    let fg = f.mul(g);
    let both_le = regions[f_le1].meet(&regions[g_le1]);
    let both_ge = regions[f_ge1].meet(&regions[g_ge1]);
    let (a, b) = (push(&mut regions, both_le), push(&mut regions, atom(&fg, Rel::Le, &one)?));
    rels.push((4, Relation::Includes(a, b)));
    let (a, b) = (push(&mut regions, both_ge), push(&mut regions, atom(&fg, Rel::Ge, &one)?));
    rels.push((4, Relation::Includes(a, b)));

    let alpha = Poly::constant(cfg.alpha.clone());
    let a2 = cfg.alpha.norm_sqr();
    if a2 <= one {
        let i = push(&mut regions, atom(&alpha, Rel::Le, &one)?);
        rels.push((5, Relation::Includes(full, i)));
    }
    if a2 >= one {
        let i = push(&mut regions, atom(&alpha, Rel::Ge, &one)?);
        rels.push((5, Relation::Includes(full, i)));
    }

    let bound = if cfg.negate6 {
        (&cfg.r + &cfg.s) / rat(2, 1)
    } else {
        &cfg.r + &cfg.s
    };
    let lhs = atom(f, Rel::Le, &cfg.r)?.meet(&atom(g, Rel::Le, &cfg.s)?);
    let (a, b) = (push(&mut regions, lhs), push(&mut regions, atom(&f.add(g), Rel::Le, &bound)?));
    rels.push((6, Relation::Includes(a, b)));

    let plain: Vec<Relation> = rels.iter().map(|(_, r)| *r).collect();
    let verdicts = check_relations(&regions, &plain, sampler);
    let mut out: Vec<ItemVerdict> = Vec::new();
    for item in 1..=6u8 {
        let v = rels
            .iter()
            .zip(&verdicts)
            .filter(|((i, _), _)| *i == item)
            .map(|(_, v)| v.clone())
            .reduce(Verdict::merge)
            .unwrap_or(Verdict::NoCounterexampleFound {
                samples: sampler.len(),
                undecided: 0,
            });
        out.push(ItemVerdict { item, verdict: v });
    }
    Ok(out)
}

/// A random suite configuration: `deg f, deg g ≤ max_degree`, coefficient
/// moduli at most 10, nonzero `α`, `r, s ∈ (0, 4]` and an inner radius in
/// `(0, 1)`.
pub fn random_gaga_config(rng: &mut random::TrialRng, max_degree: usize) -> GagaConfig {
    let pick_poly = |rng: &mut random::TrialRng| {
        let d = rng.random_range(1..=max_degree.max(1));
        random::poly(rng, d, 7, 3)
    };
    let f = pick_poly(rng);
    let g = pick_poly(rng);
    let alpha = random::gauss_nonzero(rng, 3, 3);
    let r = rat(rng.random_range(1..=16), 4);
    let s = rat(rng.random_range(1..=16), 4);
    let d = rng.random_range(2..=16);
    let inner = rat(rng.random_range(1..d), d);
    GagaConfig {
        f,
        g,
        alpha,
        r,
        s,
        inner,
        negate6: false,
    }
}

/// A random region with one or two clauses of one or two constraints on
/// polynomials of degree at most 3.
pub fn random_region(rng: &mut random::TrialRng) -> RegionExpr {
    let clauses = rng.random_range(1..=2);
    let mut acc = RegionExpr::empty();
    for _ in 0..clauses {
        let mut cl = RegionExpr::full();
        for _ in 0..rng.random_range(1..=2) {
            let d = rng.random_range(1..=3);
            let f = random::poly(rng, d, 3, 2);
            let rel = [Rel::Le, Rel::Lt, Rel::Ge, Rel::Gt][rng.random_range(0..4)];
            let c = rat(rng.random_range(1..=12), rng.random_range(1..=4));
            cl = cl.meet(&RegionExpr::atom(f, rel, c).expect("positive bound"));
        }
        acc = acc.join(&cl);
    }
    acc
}

/// `|z| ≤ c`, decided on squares.
pub fn modulus_at_most(z: &GaussRat, c: &BigRational) -> bool {
    z.norm_sqr() <= c * c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RegionExpr {
        s.parse().unwrap()
    }

    fn small() -> Sampler {
        Sampler {
            window: Window::square(2),
            grid_step: Some(rat(1, 8)),
            random_points: 200,
            seed: 3,
            exact_fallback: true,
        }
    }

    #[test]
    fn parse_and_print() {
        let e = r("|T| <= 1 & |T| >= 1/2 | |T^2+1| > 3");
        let back: RegionExpr = e.to_string().parse().unwrap();
        assert_eq!(back, e);
        assert!(r("empty").is_empty());
        assert!(r("full").is_full());
        assert!(matches!(parse_region("|T| <= "), Err(Error::Parse { .. })));
        assert!(matches!(parse_region("|T| <= -1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_region("|T <= 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn lattice_identities() {
        let a = r("|T| <= 1");
        assert_eq!(RegionExpr::full().meet(&a), a);
        assert_eq!(a.join(&RegionExpr::empty()), a);
        assert_eq!(a.normalized().normalized(), a.normalized());
        let band = r("|T| <= 1").meet(&r("|T| >= 1"));
        assert!(band.contains_exact(&GaussRat::one()));
        assert!(!band.contains_exact(&GaussRat::from_ints(2, 0)));
    }

    #[test]
    fn strict_boundary() {
        let i = Scalar::Float(Complex64::new(0.0, 1.0));
        assert_eq!(member(&r("|T| <= 1"), &i, true), Membership::In);
        assert_eq!(member(&r("|T| < 1"), &i, true), Membership::Out);
        assert_eq!(member(&r("|T| < 1"), &i, false), Membership::Undecided);
        assert_eq!(member(&r("|T| < 1"), &Scalar::Exact(GaussRat::i()), false), Membership::Out);
    }

    #[test]
    fn inclusions() {
        let s = small();
        assert!(!includes(&RegionExpr::empty(), &r("|T| <= 1"), &s).is_counterexample());
        assert!(!includes(&r("|T| <= 1"), &r("|T| <= 2"), &s).is_counterexample());
        match includes(&r("|T| <= 2"), &r("|T| <= 1"), &s) {
            Verdict::Counterexample { z: Scalar::Exact(z), .. } => {
                assert!(modulus_at_most(&z, &rat(2, 1)) && !modulus_at_most(&z, &rat(1, 1)));
            }
            v => panic!("{v}"),
        }
    }

    #[test]
    fn suite_defaults_and_negation() {
        let s = small();
        let v = gaga_axiom_suite(&GagaConfig::default(), &s).unwrap();
        assert_eq!(v.len(), 6);
        assert!(v.iter().all(|x| !x.verdict.is_counterexample()), "{v:?}");
        let neg = GagaConfig {
            g: Poly::one(),
            negate6: true,
            ..GagaConfig::default()
        };
        let v = gaga_axiom_suite(&neg, &s).unwrap();
        assert!(v[5].verdict.is_counterexample());
        let bad = GagaConfig {
            inner: rat(1, 1),
            ..GagaConfig::default()
        };
        assert!(matches!(gaga_axiom_suite(&bad, &s), Err(Error::Usage(_))));
    }

    #[test]
    fn empty_sampler_is_vacuous() {
        let v = gaga_axiom_suite(&GagaConfig::default(), &Sampler::empty()).unwrap();
        for x in v {
            assert_eq!(x.verdict, Verdict::NoCounterexampleFound { samples: 0, undecided: 0 });
        }
    }

    #[test]
    fn distributive_examples() {
        let s = small();
        let (a, b, c) = (r("|T| <= 1"), r("|T-1| < 1"), r("|T+i| >= 1/2"));
        assert!(!distributivity_check(&a, &b, &c, &s).is_counterexample());
        assert!(!distributivity_check(&RegionExpr::empty(), &b, &RegionExpr::full(), &s).is_counterexample());
        for (_, v) in lattice_law_check(&a, &b, &c, &s) {
            assert!(!v.is_counterexample());
        }
    }
}
