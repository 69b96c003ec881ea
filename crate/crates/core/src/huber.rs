//! Discrete Huber pairs over one-variable rings `ℂ[T][S⁻¹]/(p)`, their
//! rank-one valuations, rational localizations and the two cover shapes.
//!
//! `A⁺` is kept as a generator list. Comparisons between pairs use the
//! closure of that list under products and nonzero constants; no integral
//! closure is ever computed.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::literal::{format_rational, parse_complex, parse_poly, parse_rational};
use crate::poly::Poly;
use crate::scalar::{rat, GaussRat};

/// `num / den` with `den` monic, coprime to `num`; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Frac::poly(Poly::zero()));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lead = den.lead().expect("nonzero").inv()?;
        Ok(Frac {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn poly(p: Poly) -> Self {
        Frac { num: p, den: Poly::one() }
    }

    pub fn one() -> Self {
        Frac::poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.num.is_unit() && self.den.is_one()
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        Frac::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn recip(&self) -> Result<Frac> {
        Frac::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.degree() == Some(0) && self.num.coeff(0).im.is_zero() {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Frac {
    type Err = Error;

    /// `p`, `p/(q)` or `(p)/(q)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(i) = s.rfind("/(") {
            if !s.ends_with(')') {
                return Err(Error::parse(s.len(), "expected `)` closing the denominator"));
            }
            let num = s[..i].trim();
            let num = num
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .unwrap_or(num);
            let den = &s[i + 2..s.len() - 1];
            Frac::new(parse_poly(num)?, parse_poly(den)?)
        } else {
            Ok(Frac::poly(parse_poly(s)?))
        }
    }
}

fn monic_nonconstant(p: &Poly) -> Option<Poly> {
    match p.degree() {
        Some(d) if d > 0 => Some(p.monic()),
        _ => None,
    }
}

/// Refines polynomials into pairwise coprime monic factors such that every
/// input is a constant times a product of powers of them.
pub fn gcd_free_basis(polys: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = polys.iter().filter_map(monic_nonconstant).collect();
    basis.sort();
    basis.dedup();
    loop {
        let mut split = None;
        'search: for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g.degree().is_some_and(|d| d > 0) {
                    split = Some((i, j, g));
                    break 'search;
                }
            }
        }
        let Some((i, j, g)) = split else {
            return basis;
        };
        let a = basis[i].div_exact(&g).expect("gcd divides");
        let b = basis[j].div_exact(&g).expect("gcd divides");
        basis.remove(j);
        basis.remove(i);
        basis.extend([a, b, g].iter().filter_map(monic_nonconstant));
        basis.sort();
        basis.dedup();
    }
}

/// Exponents of `p` over a gcd-free basis covering it.
fn exponents(p: &Poly, basis: &[Poly]) -> Vec<i64> {
    let mut rest = p.clone();
    basis
        .iter()
        .map(|b| {
            let mut k = 0;
            while let Ok((q, r)) = rest.div_rem(b) {
                if !r.is_zero() {
                    break;
                }
                rest = q;
                k += 1;
            }
            k
        })
        .collect()
}

fn frac_exponents(x: &Frac, basis: &[Poly]) -> Vec<i64> {
    exponents(&x.num, basis)
        .into_iter()
        .zip(exponents(&x.den, basis))
        .map(|(a, b)| a - b)
        .collect()
}

/// Search depth for product-closure membership.
pub const SATURATION_DEPTH: usize = 12;

/// Whether `x` is a nonzero constant times a product of generators.
pub fn in_saturation(x: &Frac, gens: &[Frac]) -> bool {
    if x.is_zero() {
        return gens.iter().any(Frac::is_zero);
    }
    let gens: Vec<&Frac> = gens.iter().filter(|g| !g.is_zero()).collect();
    let mut polys = vec![x.num.clone(), x.den.clone()];
    for g in &gens {
        polys.push(g.num.clone());
        polys.push(g.den.clone());
    }
    let basis = gcd_free_basis(&polys);
    let target = frac_exponents(x, &basis);
    let vecs: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| frac_exponents(g, &basis))
        .filter(|v| v.iter().any(|&e| e != 0))
        .collect();
    fn search(rest: &mut Vec<i64>, vecs: &[Vec<i64>], from: usize, depth: usize) -> bool {
        if rest.iter().all(|&e| e == 0) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        for i in from..vecs.len() {
            for (r, v) in rest.iter_mut().zip(&vecs[i]) {
                *r -= v;
            }
            let found = search(rest, vecs, i, depth - 1);
            for (r, v) in rest.iter_mut().zip(&vecs[i]) {
                *r += v;
            }
            if found {
                return true;
            }
        }
        false
    }
    let mut rest = target;
    search(&mut rest, &vecs, 0, SATURATION_DEPTH)
}

/// `Σ coefficients[i]·generators[i] = value`, where `value` is a unit of
/// the ring (a constant, or a product of inverted elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitIdealCertificate {
    pub generators: Vec<Poly>,
    pub coefficients: Vec<Poly>,
    pub value: Poly,
}

impl UnitIdealCertificate {
    /// Recomputes the combination exactly.
    pub fn verify(&self) -> bool {
        let sum = self
            .generators
            .iter()
            .zip(&self.coefficients)
            .fold(Poly::zero(), |acc, (g, c)| acc.add(&g.mul(c)));
        sum == self.value
    }
}

impl fmt::Display for UnitIdealCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.value)?;
        let mut first = true;
        for (g, c) in self.generators.iter().zip(&self.coefficients) {
            if c.is_zero() {
                continue;
            }
            write!(f, "{} ({})*({})", if first { "" } else { " +" }, c, g)?;
            first = false;
        }
        if first {
            f.write_str(" 0")?;
        }
        Ok(())
    }
}

/// A discrete Huber pair `(ℂ[T][S⁻¹]/(p), A⁺)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HuberPair {
    relation: Poly,
    inverted: Vec<Poly>,
    aplus: Vec<Frac>,
}

impl HuberPair {
    /// `(ℂ[T], ℂ)`-style base pair with `A⁺` generated by `1`.
    pub fn polynomial_ring() -> Self {
        HuberPair {
            relation: Poly::zero(),
            inverted: Vec::new(),
            aplus: vec![Frac::one()],
        }
    }

    pub fn new(relation: Poly, inverted: Vec<Poly>, aplus: Vec<Frac>) -> Result<Self> {
        if inverted.iter().any(Poly::is_zero) {
            return Err(Error::Usage("cannot invert 0".into()));
        }
        let mut inv: Vec<Poly> = inverted.iter().filter_map(monic_nonconstant).collect();
        inv.sort();
        inv.dedup();
        let mut pair = HuberPair {
            relation: relation.monic(),
            inverted: inv,
            aplus: Vec::new(),
        };
        let mut gens = vec![Frac::one()];
        for g in aplus {
            if !pair.is_unit(&g.den) {
                return Err(Error::Usage(format!("denominator of {g} is not inverted in the ring")));
            }
            gens.push(g);
        }
        gens.sort_by(|a, b| (a.num.degree(), a.den.degree(), a).cmp(&(b.num.degree(), b.den.degree(), b)));
        gens.dedup();
        pair.aplus = gens;
        Ok(pair)
    }

    pub fn relation(&self) -> &Poly {
        &self.relation
    }

    pub fn inverted(&self) -> &[Poly] {
        &self.inverted
    }

    pub fn aplus(&self) -> &[Frac] {
        &self.aplus
    }

    /// Strips every factor shared with an inverted element.
    fn strip_units(&self, p: &Poly) -> Poly {
        let mut h = p.clone();
        for s in &self.inverted {
            loop {
                let g = h.gcd(s);
                if g.degree().is_none_or(|d| d == 0) {
                    break;
                }
                h = h.div_exact(&g).expect("gcd divides");
            }
        }
        h
    }

    /// Whether a polynomial is invertible in `A`.
    pub fn is_unit(&self, p: &Poly) -> bool {
        if p.is_zero() {
            return false;
        }
        let h = self.strip_units(p);
        // modulo the relation, anything coprime to it is a unit as well
        let h = if self.relation.is_zero() {
            h
        } else {
            h.gcd(&self.relation)
        };
        h.degree() == Some(0)
    }

    /// Certificate that `gens` generate the unit ideal of `A`, or the gcd
    /// left after removing units as a witness.
    pub fn unit_ideal(&self, gens: &[Poly]) -> Result<UnitIdealCertificate> {
        let mut all: Vec<Poly> = gens.to_vec();
        if !self.relation.is_zero() {
            all.push(self.relation.clone());
        }
        let mut g = Poly::zero();
        let mut coeffs: Vec<Poly> = vec![Poly::zero(); all.len()];
        for (i, p) in all.iter().enumerate() {
            let (ng, u, v) = g.xgcd(p);
            for c in coeffs.iter_mut().take(i) {
                *c = c.mul(&u);
            }
            coeffs[i] = v;
            g = ng;
        }
        let h = self.strip_units(&g);
        if h.degree() != Some(0) {
            return Err(Error::NotUnitIdeal {
                witness: if h.is_zero() { "0".into() } else { h.monic().to_string() },
            });
        }
        let cert = UnitIdealCertificate {
            generators: all,
            coefficients: coeffs,
            value: g,
        };
        debug_assert!(cert.verify());
        Ok(cert)
    }

    /// Same ring, `A⁺` enlarged by `extra`.
    pub fn adjoin(&self, extra: &[Frac]) -> Result<HuberPair> {
        let mut a = self.aplus.clone();
        a.extend(extra.iter().cloned());
        HuberPair::new(self.relation.clone(), self.inverted.clone(), a)
    }

    /// `A[1/s]` with the same `A⁺` generators.
    pub fn invert(&self, s: &[Poly]) -> Result<HuberPair> {
        let mut inv = self.inverted.clone();
        inv.extend(s.iter().cloned());
        HuberPair::new(self.relation.clone(), inv, self.aplus.clone())
    }

    /// Whether the identity of `ℂ[T]` induces a map of pairs `self → other`:
    /// every inverted element of `self` is a unit of `other` and every
    /// `A⁺` generator of `self` lies in the saturation of `other`'s.
    pub fn maps_to(&self, other: &HuberPair) -> bool {
        self.relation == other.relation
            && self.inverted.iter().all(|s| other.is_unit(s))
            && self.aplus.iter().all(|g| in_saturation(g, &other.aplus))
    }

    /// Equality at the level of inverted sets and saturated generators.
    pub fn equivalent(&self, other: &HuberPair) -> bool {
        self.maps_to(other) && other.maps_to(self)
    }
}

impl fmt::Display for HuberPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.relation.is_zero() {
            f.write_str("ring=C[T]")?;
        } else {
            write!(f, "ring=C[T]/({})", self.relation)?;
        }
        f.write_str(" inverted=")?;
        for (i, s) in self.inverted.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(" aplus=")?;
        for (i, g) in self.aplus.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Polynomials over a common denominator: `(f_1 d, …, f_n d, g d)`.
fn clear_denominators(fs: &[Frac], g: &Frac) -> (Vec<Poly>, Poly) {
    let d = fs.iter().chain(std::iter::once(g)).fold(Poly::one(), |acc, x| {
        let l = acc.gcd(&x.den);
        acc.mul(&x.den.div_exact(&l).expect("gcd divides"))
    });
    let lift = |x: &Frac| x.num.mul(&d.div_exact(&x.den).expect("common multiple"));
    (fs.iter().map(lift).collect(), lift(g))
}

/// `(A[1/g], A⁺ ∪ {f_i/g})` for `f_1, …, f_n, g` generating the unit ideal.
pub fn rational_localize(p: &HuberPair, fs: &[Frac], g: &Frac) -> Result<HuberPair> {
    if g.is_zero() {
        return Err(Error::Usage("cannot localize at g = 0".into()));
    }
    let (fs, g) = clear_denominators(fs, g);
    let mut all = fs.clone();
    all.push(g.clone());
    p.unit_ideal(&all)?;
    let extra = fs
        .iter()
        .map(|f| Frac::new(f.clone(), g.clone()))
        .collect::<Result<Vec<_>>>()?;
    // the new denominators involve g, which is inverted first
    let inv = p.invert(std::slice::from_ref(&g))?;
    inv.adjoin(&extra)
}

/// Data of one rational localization `(f_1, …, f_n; g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Localization {
    pub numerators: Vec<Frac>,
    pub denominator: Frac,
}

impl Localization {
    pub fn apply(&self, p: &HuberPair) -> Result<HuberPair> {
        rational_localize(p, &self.numerators, &self.denominator)
    }
}

impl fmt::Display for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.numerators.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ";{}", self.denominator)
    }
}

/// The single localization equal to `first` followed by `second`:
/// numerators `f_i h_j, f_i k, g h_j` over `g k`.
pub fn compose_localizations(first: &Localization, second: &Localization) -> Localization {
    let (g, k) = (&first.denominator, &second.denominator);
    let mut nums = Vec::new();
    for f in &first.numerators {
        for h in &second.numerators {
            nums.push(f.mul(h));
        }
        nums.push(f.mul(k));
    }
    for h in &second.numerators {
        nums.push(g.mul(h));
    }
    Localization {
        numerators: nums,
        denominator: g.mul(k),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// `{f ∈ B⁺}` and `{f invertible, 1/f ∈ B⁺}`.
    TwoPiece(Frac),
    /// `{B[1/f_i]}` for a unit-ideal family.
    Zariski(Vec<Frac>, UnitIdealCertificate),
}

/// A member of a cover: what was inverted and adjoined, and the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMember {
    pub inverted: Vec<Poly>,
    pub adjoined: Vec<Frac>,
    pub pair: HuberPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    pub base: HuberPair,
    pub kind: CoverKind,
    pub members: Vec<CoverMember>,
}

impl CoverSpec {
    /// Two-piece cover at `f`.
    pub fn two_piece(base: &HuberPair, f: &Frac) -> Result<CoverSpec> {
        if f.is_zero() {
            return Err(Error::Usage("the two-piece cover at 0 would invert 0".into()));
        }
        if !base.is_unit(&f.den) {
            return Err(Error::Usage(format!("{f} is not an element of the ring")));
        }
        let first = CoverMember {
            inverted: Vec::new(),
            adjoined: vec![f.clone()],
            pair: base.adjoin(std::slice::from_ref(f))?,
        };
        let r = f.recip()?;
        let second = CoverMember {
            inverted: vec![f.num.clone()],
            adjoined: vec![r.clone()],
            pair: base.invert(std::slice::from_ref(&f.num))?.adjoin(&[r])?,
        };
        Ok(CoverSpec {
            base: base.clone(),
            kind: CoverKind::TwoPiece(f.clone()),
            members: vec![first, second],
        })
    }

    /// Zariski cover for a family generating the unit ideal.
    pub fn zariski(base: &HuberPair, fs: &[Frac]) -> Result<CoverSpec> {
        let polys: Vec<Poly> = fs.iter().map(|f| f.num.clone()).collect();
        let cert = base.unit_ideal(&polys)?;
        let members = polys
            .iter()
            .map(|f| {
                if f.is_zero() {
                    return Err(Error::Usage("a Zariski member would invert 0".into()));
                }
                Ok(CoverMember {
                    inverted: vec![f.clone()],
                    adjoined: Vec::new(),
                    pair: base.invert(std::slice::from_ref(f))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverSpec {
            base: base.clone(),
            kind: CoverKind::Zariski(fs.to_vec(), cert),
            members,
        })
    }

    /// Whether the cover satisfies its kind's invariant.
    pub fn well_formed(&self) -> bool {
        match &self.kind {
            CoverKind::TwoPiece(_) => self.members.len() == 2,
            CoverKind::Zariski(fs, cert) => cert.verify() && self.members.len() == fs.len(),
        }
    }
}

impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CoverKind::TwoPiece(x) => writeln!(f, "cover=two-piece:{x} base=[{}]", self.base)?,
            CoverKind::Zariski(xs, cert) => {
                let list: Vec<String> = xs.iter().map(ToString::to_string).collect();
                writeln!(f, "cover=zariski:{} base=[{}] certificate=\"{cert}\"", list.join(","), self.base)?
            }
        }
        for (i, m) in self.members.iter().enumerate() {
            writeln!(f, "member={i} {}", m.pair)?;
        }
        Ok(())
    }
}

/// Emits the two-piece cover at `f` and, for a family, the Zariski cover.
pub fn generate_covers(p: &HuberPair, f: &Frac, family: Option<&[Frac]>) -> Result<Vec<CoverSpec>> {
    let mut out = vec![CoverSpec::two_piece(p, f)?];
    if let Some(fs) = family {
        out.push(CoverSpec::zariski(p, fs)?);
    }
    Ok(out)
}

/// Result of a refinement test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refinement {
    /// `assignment[i]` is a member of the coarser cover that member `i`
    /// factors through.
    Refines(Vec<usize>),
    /// This member factors through no member of the coarser cover.
    Fails { member: usize },
}

impl Refinement {
    pub fn holds(&self) -> bool {
        matches!(self, Refinement::Refines(_))
    }
}

impl fmt::Display for Refinement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refinement::Refines(a) => {
                let s: Vec<String> = a.iter().enumerate().map(|(i, j)| format!("{i}->{j}")).collect();
                write!(f, "refines=true assignment={}", s.join(","))
            }
            Refinement::Fails { member } => write!(f, "refines=false witness_member={member}"),
        }
    }
}

/// Whether every member of `c1` factors through some member of `c2`.
pub fn refines(c1: &CoverSpec, c2: &CoverSpec) -> Refinement {
    let mut assignment = Vec::with_capacity(c1.members.len());
    for (i, m1) in c1.members.iter().enumerate() {
        // prefer the same index, so a cover refines itself by the identity
        let order = std::iter::once(i).chain(0..c2.members.len());
        match order.filter(|&j| j < c2.members.len()).find(|&j| c2.members[j].pair.maps_to(&m1.pair)) {
            Some(j) => assignment.push(j),
            None => return Refinement::Fails { member: i },
        }
    }
    Refinement::Refines(assignment)
}

/// An element of the value group `γ^ℤ ∪ {0}`, with `γ < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Zero,
    /// `γ^k`.
    Pow(i64),
}

impl Value {
    pub fn mul(self, o: Value) -> Value {
        match (self, o) {
            (Value::Pow(a), Value::Pow(b)) => Value::Pow(a + b),
            _ => Value::Zero,
        }
    }

    pub fn div(self, o: Value) -> Option<Value> {
        match (self, o) {
            (_, Value::Zero) => None,
            (Value::Zero, _) => Some(Value::Zero),
            (Value::Pow(a), Value::Pow(b)) => Some(Value::Pow(a - b)),
        }
    }

    pub fn one() -> Value {
        Value::Pow(0)
    }
}

impl Ord for Value {
    fn cmp(&self, o: &Value) -> Ordering {
        match (self, o) {
            (Value::Zero, Value::Zero) => Ordering::Equal,
            (Value::Zero, _) => Ordering::Less,
            (_, Value::Zero) => Ordering::Greater,
            // γ < 1, so larger exponents are smaller values
            (Value::Pow(a), Value::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, o: &Value) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => f.write_str("0"),
            Value::Pow(k) => write!(f, "g^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    /// `v(f) = γ^{ord_z f}`.
    OrderAtPoint { z: GaussRat, gamma: BigRational },
    /// `v(f) = 0` if `f(z) = 0`, else `1`; `None` is the generic point,
    /// where only `0` has value `0`.
    TrivialAtPrime(Option<GaussRat>),
}

impl Valuation {
    pub fn order_at(z: GaussRat, gamma: BigRational) -> Result<Self> {
        if !gamma.is_positive() || gamma >= BigRational::one() {
            return Err(Error::Usage(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        Ok(Valuation::OrderAtPoint { z, gamma })
    }

    pub fn value(&self, f: &Poly) -> Value {
        if f.is_zero() {
            return Value::Zero;
        }
        match self {
            Valuation::OrderAtPoint { z, .. } => Value::Pow(i64::from(f.order_at(z).expect("nonzero"))),
            Valuation::TrivialAtPrime(Some(z)) => {
                if f.eval(z).is_zero() {
                    Value::Zero
                } else {
                    Value::one()
                }
            }
            Valuation::TrivialAtPrime(None) => Value::one(),
        }
    }

    /// `v(num)/v(den)`; undefined when `v(den) = 0`.
    pub fn value_frac(&self, x: &Frac) -> Result<Value> {
        self.value(&x.num)
            .div(self.value(&x.den))
            .ok_or_else(|| Error::ValuationUndefined(format!("v({}) = 0", x.den)))
    }

    /// The value as a rational number.
    pub fn numeric(&self, v: Value) -> BigRational {
        match (self, v) {
            (_, Value::Zero) => BigRational::zero(),
            (Valuation::OrderAtPoint { gamma, .. }, Value::Pow(k)) => crate::scalar::rat_pow(gamma, k),
            (_, Value::Pow(_)) => BigRational::one(),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::OrderAtPoint { z, gamma } => write!(f, "order:{z}:{}", format_rational(gamma)),
            Valuation::TrivialAtPrime(Some(z)) => write!(f, "trivial:{z}"),
            Valuation::TrivialAtPrime(None) => f.write_str("trivial:generic"),
        }
    }
}

impl std::str::FromStr for Valuation {
    type Err = Error;

    /// `order:<z>:<gamma>`, `trivial:<z>` or `trivial:generic`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["order", z, g] => Valuation::order_at(parse_complex(z)?, parse_rational(g)?),
            ["trivial", "generic"] => Ok(Valuation::TrivialAtPrime(None)),
            ["trivial", z] => Ok(Valuation::TrivialAtPrime(Some(parse_complex(z)?))),
            _ => Err(Error::Usage(format!("unknown valuation `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValuationReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl ValuationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `v(0) = 0`, `v(1) = 1`, `v(ab) = v(a)v(b)` and
/// `v(a+b) ≤ max(v(a), v(b))` on every pair.
pub fn valuation_axiom_check(v: &Valuation, pairs: &[(Poly, Poly)]) -> ValuationReport {
    let mut rep = ValuationReport::default();
    rep.checks += 2;
    if v.value(&Poly::zero()) != Value::Zero {
        rep.violations.push("v(0) != 0".into());
    }
    if v.value(&Poly::one()) != Value::one() {
        rep.violations.push("v(1) != 1".into());
    }
    for (a, b) in pairs {
        let (va, vb) = (v.value(a), v.value(b));
        rep.checks += 2;
        let vab = v.value(&a.mul(b));
        if vab != va.mul(vb) {
            rep.violations.push(format!("v(({a})({b})) = {vab} != {}", va.mul(vb)));
        }
        let vs = v.value(&a.add(b));
        if vs > va.max(vb) {
            rep.violations.push(format!("v({a} + {b}) = {vs} > max({va}, {vb})"));
        }
    }
    rep
}

/// Outcome of a membership test in a rational subset of `Spa(A, A⁺)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaOutcome {
    Member,
    /// `v` is a point of `Spa(A, A⁺)` outside the subset.
    NotInSubset { reason: String },
    /// `v` exceeds 1 on an `A⁺` generator (or does not extend to `A`).
    NotInSpa { reason: String },
}

impl fmt::Display for SpaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaOutcome::Member => f.write_str("spa=member"),
            SpaOutcome::NotInSubset { reason } => write!(f, "spa=not-in-subset reason=\"{reason}\""),
            SpaOutcome::NotInSpa { reason } => write!(f, "spa=not-a-point reason=\"{reason}\""),
        }
    }
}

/// Whether `v` lies in `{v(f_i) ≤ v(g) ≠ 0}` inside `Spa(A, A⁺)`.
pub fn spa_membership(v: &Valuation, p: &HuberPair, fs: &[Frac], g: &Frac) -> SpaOutcome {
    if !p.relation.is_zero() && v.value(&p.relation) != Value::Zero {
        return SpaOutcome::NotInSpa {
            reason: format!("v({}) != 0, so v does not factor through the quotient", p.relation),
        };
    }
    for s in &p.inverted {
        if v.value(s) == Value::Zero {
            return SpaOutcome::NotInSpa {
                reason: format!("v({s}) = 0 for an inverted element"),
            };
        }
    }
    for a in &p.aplus {
        match v.value_frac(a) {
            Ok(x) if x <= Value::one() => {}
            Ok(x) => {
                return SpaOutcome::NotInSpa {
                    reason: format!("v({a}) = {x} > 1"),
                }
            }
            Err(e) => return SpaOutcome::NotInSpa { reason: e.to_string() },
        }
    }
    let vg = match v.value_frac(g) {
        Ok(x) => x,
        Err(e) => return SpaOutcome::NotInSpa { reason: e.to_string() },
    };
    if vg == Value::Zero {
        return SpaOutcome::NotInSubset {
            reason: format!("v({g}) = 0"),
        };
    }
    for f in fs {
        match v.value_frac(f) {
            Ok(x) if x <= vg => {}
            Ok(x) => {
                return SpaOutcome::NotInSubset {
                    reason: format!("v({f}) = {x} > {vg} = v({g})"),
                }
            }
            Err(e) => return SpaOutcome::NotInSpa { reason: e.to_string() },
        }
    }
    SpaOutcome::Member
}

/// Whether `v(a) ≥ v(b) ⇔ w(a) ≥ w(b)` on all ordered pairs of the sample;
/// on failure returns the first witness pair.
pub fn equivalence_check(v: &Valuation, w: &Valuation, sample: &[Poly]) -> std::result::Result<(), (Poly, Poly)> {
    for a in sample {
        for b in sample {
            if (v.value(a) >= v.value(b)) != (w.value(a) >= w.value(b)) {
                return Err((a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

/// One line of a site fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteFixture {
    pub line: usize,
    pub pair: HuberPair,
    pub cover: Option<CoverSpec>,
    pub localize: Option<Localization>,
    pub then: Option<Localization>,
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_localization(s: &str) -> Result<Localization> {
    let (nums, den) = s
        .split_once(';')
        .ok_or_else(|| Error::Usage(format!("localization `{s}` needs `f1,...,fn;g`")))?;
    Ok(Localization {
        numerators: split_list(nums).iter().map(|x| x.parse()).collect::<Result<_>>()?,
        denominator: den.parse()?,
    })
}

/// Parses `ring=C[T] inverted=<list> aplus=<list>` with optional
/// `cover=two-piece:<f>`, `cover=zariski:<f1,...>`, `localize=<fs;g>` and
/// `then=<hs;k>`.
pub fn parse_fixture_line(line: &str, lineno: usize) -> Result<SiteFixture> {
    let mut relation = Poly::zero();
    let mut inverted = Vec::new();
    let mut aplus = Vec::new();
    let mut cover = None;
    let mut localize = None;
    let mut then = None;
    let mut saw_ring = false;
    for tok in line.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("line {lineno}: expected key=value, got `{tok}`")))?;
        match k {
            "ring" => {
                saw_ring = true;
                if v == "C[T]" {
                    relation = Poly::zero();
                } else if let Some(rel) = v.strip_prefix("C[T]/(").and_then(|x| x.strip_suffix(')')) {
                    relation = parse_poly(rel)?;
                } else {
                    return Err(Error::Usage(format!("line {lineno}: unsupported ring `{v}`")));
                }
            }
            "inverted" => {
                inverted = split_list(v).iter().map(|x| parse_poly(x)).collect::<Result<_>>()?;
            }
            "aplus" => {
                aplus = split_list(v).iter().map(|x| x.parse()).collect::<Result<Vec<Frac>>>()?;
            }
            "cover" => cover = Some(v.to_string()),
            "localize" => localize = Some(parse_localization(v)?),
            "then" => then = Some(parse_localization(v)?),
            other => return Err(Error::Usage(format!("line {lineno}: unknown key `{other}`"))),
        }
    }
    if !saw_ring {
        return Err(Error::Usage(format!("line {lineno}: missing ring=")));
    }
    let pair = HuberPair::new(relation, inverted, aplus)?;
    let cover = match cover {
        None => None,
        Some(c) => Some(if let Some(f) = c.strip_prefix("two-piece:") {
            CoverSpec::two_piece(&pair, &f.parse()?)?
        } else if let Some(fs) = c.strip_prefix("zariski:") {
            let fs = split_list(fs).iter().map(|x| x.parse()).collect::<Result<Vec<Frac>>>()?;
            CoverSpec::zariski(&pair, &fs)?
        } else {
            return Err(Error::Usage(format!("line {lineno}: unknown cover `{c}`")));
        }),
    };
    Ok(SiteFixture {
        line: lineno,
        pair,
        cover,
        localize,
        then,
    })
}

/// Parses a fixture file: one pair per line, `#` comments.
pub fn parse_fixtures(text: &str) -> Result<Vec<SiteFixture>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_fixture_line(l, i + 1))
        .collect()
}

/// The fixture corpus shipped with the crate.
pub const DEFAULT_FIXTURES: &str = include_str!("../fixtures/site.txt");

/// Default `γ` for order valuations given without one.
pub fn default_gamma() -> BigRational {
    rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn fr(s: &str) -> Frac {
        s.parse().unwrap()
    }

    #[test]
    fn localize_examples() {
        let base = HuberPair::polynomial_ring();
        let a = rational_localize(&base, &[fr("T")], &fr("1")).unwrap();
        assert_eq!(a.aplus().len(), 2);
        assert!(a.aplus().contains(&fr("1")) && a.aplus().contains(&fr("T")));
        let b = rational_localize(&base, &[fr("1")], &fr("T")).unwrap();
        assert_eq!(b.inverted(), &[p("T")]);
        assert!(b.aplus().contains(&fr("1/(T)")));
        assert!(matches!(
            rational_localize(&base, &[fr("T")], &fr("T^2")),
            Err(Error::NotUnitIdeal { .. })
        ));
    }

    #[test]
    fn composition_law() {
        let base = HuberPair::polynomial_ring();
        let l1 = Localization {
            numerators: vec![fr("T")],
            denominator: fr("1"),
        };
        let l2 = Localization {
            numerators: vec![fr("T-1")],
            denominator: fr("1"),
        };
        let twice = l2.apply(&l1.apply(&base).unwrap()).unwrap();
        let once = compose_localizations(&l1, &l2).apply(&base).unwrap();
        assert!(twice.equivalent(&once));
    }

    #[test]
    fn covers_and_refinement() {
        let base = HuberPair::polynomial_ring();
        let c = CoverSpec::two_piece(&base, &fr("T")).unwrap();
        assert!(c.members[0].pair.aplus().contains(&fr("T")));
        assert_eq!(c.members[1].pair.inverted(), &[p("T")]);
        assert_eq!(refines(&c, &c), Refinement::Refines(vec![0, 1]));
        let unit = CoverSpec::two_piece(&base, &fr("1")).unwrap();
        assert!(unit.well_formed());
        let z = CoverSpec::zariski(&base, &[fr("T"), fr("T-1")]).unwrap();
        let CoverKind::Zariski(_, cert) = &z.kind else { panic!() };
        assert!(cert.verify() && cert.value.is_one());
        let d = CoverSpec::two_piece(&base, &fr("T-1")).unwrap();
        assert_eq!(refines(&c, &d), Refinement::Fails { member: 0 });
        let bigger = CoverSpec::two_piece(&base.adjoin(&[fr("T+1")]).unwrap(), &fr("T")).unwrap();
        assert!(refines(&bigger, &c).holds());
        assert!(CoverSpec::two_piece(&base, &fr("0")).is_err());
    }

    #[test]
    fn valuations() {
        let v = Valuation::order_at(GaussRat::zero(), rat(1, 2)).unwrap();
        assert_eq!(v.numeric(v.value(&p("T"))), rat(1, 2));
        assert_eq!(v.numeric(v.value(&p("T^2"))), rat(1, 4));
        assert_eq!(v.value(&p("T^2+T")), v.value(&p("T")));
        let pairs = vec![(p("T"), p("T+1")), (p("T^2"), p("-T^2+T")), (p("0"), p("T"))];
        assert!(valuation_axiom_check(&v, &pairs).passed());
        let t = Valuation::TrivialAtPrime(Some(GaussRat::one()));
        assert_eq!(t.value(&p("T-1")), Value::Zero);
        assert_eq!(t.value(&p("T")), Value::one());
        assert!(valuation_axiom_check(&t, &pairs).passed());
    }

    #[test]
    fn spa() {
        let base = HuberPair::polynomial_ring();
        let v = Valuation::order_at(GaussRat::zero(), rat(1, 2)).unwrap();
        assert_eq!(spa_membership(&v, &base, &[fr("T")], &fr("1")), SpaOutcome::Member);
        assert!(matches!(
            spa_membership(&v, &base, &[fr("1")], &fr("T")),
            SpaOutcome::NotInSubset { .. }
        ));
        assert!(matches!(
            spa_membership(&v, &base, &[fr("1")], &fr("T^2")),
            SpaOutcome::NotInSubset { .. }
        ));
        let inv = base.invert(&[p("T")]).unwrap().adjoin(&[fr("1/(T)")]).unwrap();
        assert!(matches!(spa_membership(&v, &inv, &[fr("1")], &fr("1")), SpaOutcome::NotInSpa { .. }));
    }

    #[test]
    fn equivalence() {
        let sample = vec![p("1"), p("T"), p("T-1"), p("T^2")];
        let a = Valuation::order_at(GaussRat::zero(), rat(1, 2)).unwrap();
        let b = Valuation::order_at(GaussRat::zero(), rat(1, 3)).unwrap();
        let c = Valuation::order_at(GaussRat::one(), rat(1, 2)).unwrap();
        assert!(equivalence_check(&a, &b, &sample).is_ok());
        assert!(equivalence_check(&a, &a, &sample).is_ok());
        let (x, y) = equivalence_check(&a, &c, &sample).unwrap_err();
        assert_eq!((x, y), (p("T"), p("1")));
    }

    #[test]
    fn saturation() {
        let gens = [fr("T"), fr("T-1")];
        assert!(in_saturation(&fr("T^2-T"), &gens));
        assert!(in_saturation(&fr("3"), &gens));
        assert!(!in_saturation(&fr("T+1"), &gens));
        assert!(!in_saturation(&fr("1/(T)"), &gens));
    }

    #[test]
    fn fixtures_parse() {
        let fx = parse_fixtures(DEFAULT_FIXTURES).unwrap();
        assert!(fx.iter().filter(|f| f.cover.is_some()).count() >= 10);
    }
}
