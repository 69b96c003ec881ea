//! The acceptance suite as a library: ten criteria, each reduced to one
//! report line with a stable field order.
//!
//! Every randomized criterion draws its trials from
//! `trial_rng(seed, stream, index)`, so the report depends only on the
//! configuration and not on the worker count.

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::berkovich::{gelfand_points, seminorm_axiom_check, AlgebraDescriptor, Spectrum, SpectrumPoint, ROOT_TOLERANCE};
use crate::error::{Error, Result};
use crate::huber::{
    compose_localizations, parse_fixtures, refines, valuation_axiom_check, SiteFixture, Valuation, DEFAULT_FIXTURES,
};
use crate::poly::Poly;
use crate::random::{self, trial_rng};
use crate::region::{gaga_axiom_suite, lattice_law_check, random_gaga_config, random_region, GagaConfig, Sampler};
use crate::rings::{
    difference, divide_by_t_minus_u, dual_pairing, laurent_split, recover_polynomial, split_bounds,
    strictness_certificate, ModuleElement, Recovery, RingElement,
};
use crate::scalar::{rat, rat_pow, GaussRat, Real};
use crate::series::{NormValue, Truncation, WeightedSeries, DEFAULT_DEGREE_CAP};

const SPLIT_STREAM: u64 = 0x5350_4C54;
const PAIR_STREAM: u64 = 0x5041_4952;
const GAGA_STREAM: u64 = 0x4741_4741;
const SEMINORM_STREAM: u64 = 0x534E_524D;
const ROOTS_STREAM: u64 = 0x524F_4F54;
const LATTICE_STREAM: u64 = 0x4C41_5454;
const VALUATION_STREAM: u64 = 0x5641_4C55;

/// Inputs of a selftest run.
#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Degree cap; every degree bound below is clipped to it.
    pub cap: usize,
    /// Sampler for the region criteria; its seed is overridden by `seed`.
    pub sampler: Sampler,
    /// Directory holding `site.txt`; the embedded corpus when `None`.
    pub fixtures: Option<PathBuf>,
    /// Trials per randomized criterion.
    pub trials: usize,
    /// Random configurations for the relation suite.
    pub gaga_configs: usize,
    /// Random region triples for the lattice laws.
    pub lattice_triples: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            cap: DEFAULT_DEGREE_CAP,
            sampler: Sampler::default(),
            fixtures: None,
            trials: 1000,
            gaga_configs: 100,
            lattice_triples: 200,
        }
    }
}

impl SelftestConfig {
    fn deg(&self, d: usize) -> usize {
        d.min(self.cap)
    }

    fn sampler(&self) -> Sampler {
        Sampler {
            seed: self.seed,
            ..self.sampler.clone()
        }
    }

    /// The fixture corpus, from disk when a directory is configured. A
    /// missing or unreadable corpus is an I/O failure.
    pub fn load_fixtures(&self) -> Result<Vec<SiteFixture>> {
        match &self.fixtures {
            None => parse_fixtures(DEFAULT_FIXTURES),
            Some(dir) => {
                let path = dir.join("site.txt");
                let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                parse_fixtures(&text).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    msg: format!("corrupt fixture: {e}"),
                })
            }
        }
    }
}

/// One criterion's outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionLine {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// `key=value` fields after the status.
    pub detail: String,
}

impl fmt::Display for CriterionLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion={} name={} status={} {}",
            self.id,
            self.name,
            if self.passed { "pass" } else { "fail" },
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub lines: Vec<CriterionLine>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn first_failure(&self) -> Option<&CriterionLine> {
        self.lines.iter().find(|l| !l.passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        match self.first_failure() {
            None => writeln!(f, "selftest status=pass criteria={}", self.lines.len()),
            Some(l) => writeln!(
                f,
                "selftest status=fail criteria={} first_failure={}",
                self.lines.len(),
                l.name
            ),
        }
    }
}

fn line(id: u8, name: &'static str, passed: bool, detail: String) -> CriterionLine {
    CriterionLine { id, name, passed, detail }
}

/// An error inside a criterion fails that criterion instead of aborting.
fn guarded(id: u8, name: &'static str, run: impl FnOnce() -> Result<CriterionLine>) -> CriterionLine {
    run().unwrap_or_else(|e| line(id, name, false, format!("error=\"{e}\"")))
}

pub const RADII_DIVISION: [(i64, i64); 4] = [(1, 4), (1, 2), (3, 4), (9, 10)];

/// Randomized division by `T - U` at four radii, exact backend.
pub fn criterion_division(cfg: &SelftestConfig) -> CriterionLine {
    guarded(1, "division-bound", || {
        let trunc = Truncation::with_cap(cfg.cap);
        let mut trials = 0;
        let mut violations = 0;
        let mut max_excess = 0.0f64;
        for (n, d) in RADII_DIVISION {
            let r = Real::ratio(n, d);
            let rep = strictness_certificate(&r, cfg.trials, cfg.deg(20), cfg.seed, &trunc)?;
            trials += rep.records.len();
            violations += rep.violations();
            // ratio relative to the bound 1/(1-r)
            let k = 1.0 - n as f64 / d as f64;
            max_excess = max_excess.max(rep.max_ratio() * k);
        }
        Ok(line(
            1,
            "division-bound",
            violations == 0,
            format!("trials={trials} violations={violations} max_ratio_over_bound={max_excess:.6}"),
        ))
    })
}

/// Monomial slots `Tⁱ Uʲ` with `i + j ≤ d`.
fn slots(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=d {
        for i in 0..=d - j {
            out.push((i, j));
        }
    }
    out
}

fn module_from_slots(terms: &[((usize, usize), GaussRat)], r: &Real) -> Result<ModuleElement> {
    let top = terms.iter().map(|((_, j), _)| *j).max().unwrap_or(0);
    let mut entries = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let len = terms.iter().filter(|((_, jj), _)| *jj == j).map(|((i, _), _)| i + 1).max().unwrap_or(1);
        let mut c = vec![GaussRat::zero(); len];
        for ((i, jj), v) in terms {
            if *jj == j {
                c[*i] = v.clone();
            }
        }
        let Real::Exact(q) = r else { unreachable!("exact radius") };
        entries.push(WeightedSeries::exact(0, c, q.clone())?);
    }
    ModuleElement::new(entries, r.clone())
}

/// Every kernel element `(T - U)·c′` where `c′` has at most two nonzero
/// monomials of total degree ≤ 6, coefficients on the grid `{-2..2}²`.
pub fn criterion_exhaustive_division(cfg: &SelftestConfig) -> CriterionLine {
    guarded(2, "exhaustive-division", || {
        let r = Real::ratio(1, 2);
        let trunc = Truncation::with_cap(cfg.cap);
        let grid: Vec<GaussRat> = (-2..=2)
            .flat_map(|a| (-2..=2).map(move |b| GaussRat::from_ints(a, b)))
            .filter(|z| !z.is_zero())
            .collect();
        let sl = slots(cfg.deg(6));
        let mut supports: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for (a, s) in sl.iter().enumerate() {
            supports.push(vec![*s]);
            for t in &sl[a + 1..] {
                supports.push(vec![*s, *t]);
            }
        }
        let check = |terms: &[((usize, usize), GaussRat)]| -> Result<bool> {
            let c = module_from_slots(terms, &r)?;
            let b = c.mul_t_minus_u()?;
            let div = divide_by_t_minus_u(&b, &trunc)?;
            Ok(div.quotient.same_as(&c) && div.quotient.mul_t_minus_u()?.same_as(&b) && div.within_bound.holds())
        };
        let (cases, violations) = supports
            .par_iter()
            .map(|sup| -> Result<(usize, usize)> {
                let mut cases = 0;
                let mut bad = 0;
                match sup.as_slice() {
                    [] => {
                        cases += 1;
                        bad += usize::from(!check(&[])?);
                    }
                    [s] => {
                        for v in &grid {
                            cases += 1;
                            bad += usize::from(!check(&[(*s, v.clone())])?);
                        }
                    }
                    [s, t] => {
                        for v in &grid {
                            for w in &grid {
                                cases += 1;
                                bad += usize::from(!check(&[(*s, v.clone()), (*t, w.clone())])?);
                            }
                        }
                    }
                    _ => unreachable!(),
                }
                Ok((cases, bad))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold((0, 0), |(a, b), (c, d)| (a + c, b + d));
        Ok(line(
            2,
            "exhaustive-division",
            violations == 0,
            format!("cases={cases} violations={violations}"),
        ))
    })
}

fn exact_series(rng: &mut random::TrialRng, low: i64, len: usize, radius: &Real) -> Result<WeightedSeries> {
    let Real::Exact(q) = radius else { unreachable!("exact radius") };
    WeightedSeries::exact(low, random::gauss_vec(rng, len, 5, 4, 0.3), q.clone())
}

const OUTER: [(i64, i64); 3] = [(5, 4), (3, 2), (2, 1)];
const INNER: [(i64, i64); 3] = [(1, 2), (3, 4), (9, 10)];

/// Laurent splitting of random two-sided elements, plus the polynomial
/// round trip.
pub fn criterion_splitting(cfg: &SelftestConfig) -> CriterionLine {
    guarded(3, "laurent-splitting", || {
        let d = cfg.deg(8).max(1);
        let bad = (0..cfg.trials)
            .into_par_iter()
            .map(|k| -> Result<usize> {
                let mut rng = trial_rng(cfg.seed, SPLIT_STREAM, k as u64);
                let (on, od) = OUTER[rng.random_range(0..OUTER.len())];
                let (inn, ind) = INNER[rng.random_range(0..INNER.len())];
                let (outer, inner) = (Real::ratio(on, od), Real::ratio(inn, ind));
                let lo = rng.random_range(1..=d) as i64;
                let hi = rng.random_range(0..=d) as i64;
                let series = exact_series(&mut rng, -lo, (lo + hi + 1) as usize, &outer)?;
                let h = RingElement::two_sided(series, outer.clone(), inner.clone())?;
                let (f, g) = laurent_split(&h)?;
                let back = difference(&f, &g)?;
                let mut bad = 0;
                if !back.series().same_coefficients(h.series()) {
                    bad += 1;
                }
                let (a, b) = split_bounds(&h, &f, &g)?;
                if !a.holds() || !b.holds() {
                    bad += 1;
                }
                let plen = rng.random_range(1..=d + 1);
                let p = exact_series(&mut rng, 0, plen, &outer)?;
                let pf = RingElement::overconvergent(p.clone(), outer)?;
                let pg = RingElement::outer_tail(p.clone(), inner)?;
                match recover_polynomial(&pf, &pg)? {
                    Recovery::Polynomial(q) if q.same_coefficients(&p) => {}
                    _ => bad += 1,
                }
                Ok(bad)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum::<usize>();
        Ok(line(
            3,
            "laurent-splitting",
            bad == 0,
            format!("trials={} violations={bad}", cfg.trials),
        ))
    })
}

/// `|⟨f, g⟩| ≤ r·‖f‖_r·‖g‖` at `r ∈ {1/2, 3/4}`.
pub fn criterion_pairing(cfg: &SelftestConfig) -> CriterionLine {
    guarded(4, "duality-pairing", || {
        let d = cfg.deg(12).max(1);
        let mut bad = 0;
        let mut total = 0;
        for (n, m) in [(1i64, 2i64), (3, 4)] {
            let r = Real::ratio(n, m);
            bad += (0..cfg.trials)
                .into_par_iter()
                .map(|k| -> Result<usize> {
                    let mut rng = trial_rng(cfg.seed, PAIR_STREAM ^ (n as u64) << 8, k as u64);
                    let flen = rng.random_range(1..=d + 1);
                    let f = exact_series(&mut rng, 0, flen, &r)?;
                    let len = rng.random_range(1..=d);
                    let g = exact_series(&mut rng, -(len as i64), len, &r)?;
                    let g = RingElement::outer_tail(g, r.clone())?;
                    Ok(usize::from(!dual_pairing(&f, &g)?.within_bound.holds()))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum::<usize>();
            total += cfg.trials;
        }
        Ok(line(
            4,
            "duality-pairing",
            bad == 0,
            format!("trials={total} violations={bad}"),
        ))
    })
}

/// The six relations on random configurations.
pub fn criterion_gaga(cfg: &SelftestConfig) -> CriterionLine {
    guarded(5, "gaga-relations", || {
        let sampler = cfg.sampler();
        let mut counterexamples = 0;
        let mut undecided = 0;
        let mut first = String::new();
        for k in 0..cfg.gaga_configs {
            let mut rng = trial_rng(cfg.seed, GAGA_STREAM, k as u64);
            let g = random_gaga_config(&mut rng, cfg.deg(5));
            for v in gaga_axiom_suite(&g, &sampler)? {
                match &v.verdict {
                    crate::region::Verdict::Counterexample { .. } => {
                        counterexamples += 1;
                        if first.is_empty() {
                            first = format!(" first=\"config={k} {v}\"");
                        }
                    }
                    crate::region::Verdict::NoCounterexampleFound { undecided: u, .. } => undecided += u,
                }
            }
        }
        Ok(line(
            5,
            "gaga-relations",
            counterexamples == 0,
            format!(
                "configs={} samples={} counterexamples={counterexamples} undecided={undecided}{first}",
                cfg.gaga_configs,
                sampler.len()
            ),
        ))
    })
}

/// The false bound `(r + s)/2` in item (6) must be refuted.
pub fn criterion_negative_control(cfg: &SelftestConfig) -> CriterionLine {
    guarded(6, "negative-control", || {
        let g = GagaConfig {
            g: Poly::one(),
            negate6: true,
            ..GagaConfig::default()
        };
        let verdicts = gaga_axiom_suite(&g, &cfg.sampler())?;
        let six = &verdicts[5];
        let others_clean = verdicts[..5].iter().all(|v| !v.verdict.is_counterexample());
        Ok(line(
            6,
            "negative-control",
            six.verdict.is_counterexample() && others_clean,
            six.to_string(),
        ))
    })
}

/// `Σ|a_k| R^k` with `R = |Re x| + |Im x| ≥ |x|`.
fn l1_norm_at(p: &Poly, x: &GaussRat) -> NormValue {
    use num_traits::Signed;
    let big_r = x.re.abs() + x.im.abs();
    p.coeffs()
        .iter()
        .enumerate()
        .fold(NormValue::zero(crate::error::Backend::Exact), |acc, (k, a)| {
            acc.add(&NormValue::Certified(a.modulus_exact()).scale(&Real::Exact(rat_pow(&big_r, k as i64))))
        })
}

/// Evaluation points as seminorms, and root counting.
pub fn criterion_seminorm(cfg: &SelftestConfig) -> CriterionLine {
    guarded(7, "seminorm-axioms", || {
        let d = cfg.deg(8);
        let (checks, bad) = (0..cfg.trials)
            .into_par_iter()
            .map(|k| {
                let mut rng = trial_rng(cfg.seed, SEMINORM_STREAM, k as u64);
                let (da, db) = (rng.random_range(0..=d), rng.random_range(0..=d));
                let a = random::poly(&mut rng, da, 5, 3);
                let b = random::poly(&mut rng, db, 5, 3);
                let x = random::gauss(&mut rng, 4, 3);
                let pt = SpectrumPoint::exact(x.clone());
                let sample: Vec<(Poly, NormValue)> = [Poly::zero(), Poly::one(), a.clone(), b.clone(), a.mul(&b), a.add(&b)]
                    .into_iter()
                    .map(|p| {
                        let v = pt.seminorm(&p);
                        (p, v)
                    })
                    .collect();
                let reference = |p: &Poly| l1_norm_at(p, &x);
                let rep = seminorm_axiom_check(&sample, Some(&reference));
                (rep.checks, usize::from(!rep.passed()))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let polys = 50;
        let root_bad = (0..polys)
            .into_par_iter()
            .map(|k| -> Result<usize> {
                let mut rng = trial_rng(cfg.seed, ROOTS_STREAM, k as u64);
                let deg = rng.random_range(1..=d.max(1));
                let mut p = random::poly(&mut rng, deg, 5, 3);
                // a repeated factor now and then, within the degree budget
                if deg >= 3 && rng.random_bool(0.3) {
                    let q = random::poly(&mut rng, 1, 3, 2);
                    p = random::poly(&mut rng, deg - 2, 5, 3).mul(&q).mul(&q);
                }
                if p.degree().is_none_or(|e| e == 0) {
                    return Ok(0);
                }
                let expected = p.squarefree_part().degree().unwrap_or(0);
                let Spectrum::Points(pts) = gelfand_points(&AlgebraDescriptor::quotient(p.clone()))? else {
                    return Ok(1);
                };
                let coeffs = p.to_complex64();
                let ok_count = pts.len() == expected;
                let ok_residual = pts.iter().all(|pt| {
                    let z = pt.z.to_complex64();
                    let radius_ok = pt.radius.as_ref().is_some_and(|r| crate::scalar::rational_to_f64(r) <= ROOT_TOLERANCE);
                    let scale: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm());
                    let val = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
                    radius_ok && val.norm() <= 1e-8 * scale.max(1.0)
                });
                Ok(usize::from(!(ok_count && ok_residual)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum::<usize>();
        Ok(line(
            7,
            "seminorm-axioms",
            bad == 0 && root_bad == 0,
            format!(
                "pairs={} checks={checks} violations={bad} root_polys={polys} root_failures={root_bad}",
                cfg.trials
            ),
        ))
    })
}

/// Distributivity, absorption and idempotence on random triples.
pub fn criterion_lattice(cfg: &SelftestConfig) -> CriterionLine {
    guarded(8, "lattice-laws", || {
        let sampler = cfg.sampler();
        let mut bad = 0;
        let mut first = String::new();
        for k in 0..cfg.lattice_triples {
            let mut rng = trial_rng(cfg.seed, LATTICE_STREAM, k as u64);
            let a = random_region(&mut rng);
            let b = random_region(&mut rng);
            let c = random_region(&mut rng);
            for (law, v) in lattice_law_check(&a, &b, &c, &sampler) {
                if v.is_counterexample() {
                    bad += 1;
                    if first.is_empty() {
                        first = format!(" first=\"triple={k} law={law} {v}\"");
                    }
                }
            }
        }
        Ok(line(
            8,
            "lattice-laws",
            bad == 0,
            format!("triples={} samples={} violations={bad}{first}", cfg.lattice_triples, sampler.len()),
        ))
    })
}

fn random_valuation(rng: &mut random::TrialRng) -> Valuation {
    let z = random::gauss(rng, 3, 2);
    let den = rng.random_range(2..=9);
    let gamma = rat(rng.random_range(1..den), den);
    Valuation::order_at(z, gamma).expect("gamma in (0, 1)")
}

/// A polynomial with a prescribed zero of order `k` at `z`.
fn vanishing(rng: &mut random::TrialRng, z: &GaussRat, k: u32) -> Poly {
    let dh = rng.random_range(0..=3);
    let h = random::poly(rng, dh, 4, 2);
    Poly::linear_root(z).pow(k).mul(&h)
}

/// Valuation axioms, refinement on the corpus and the composition law.
pub fn criterion_huber(cfg: &SelftestConfig) -> CriterionLine {
    let fixtures = match cfg.load_fixtures() {
        Ok(f) => f,
        Err(e) => return line(9, "huber-site", false, format!("error=\"{e}\"")),
    };
    guarded(9, "huber-site", || {
        let valuations = 20;
        let val_bad = (0..valuations)
            .into_par_iter()
            .map(|k| {
                let mut rng = trial_rng(cfg.seed, VALUATION_STREAM, k as u64);
                let v = random_valuation(&mut rng);
                let Valuation::OrderAtPoint { z, .. } = &v else { unreachable!() };
                let pairs: Vec<(Poly, Poly)> = (0..cfg.trials)
                    .map(|_| {
                        let ka = rng.random_range(0..=3);
                        let a = vanishing(&mut rng, z, ka);
                        let kb = rng.random_range(0..=4);
                        let b = if rng.random_bool(0.25) {
                            // force cancellation in a + b
                            a.neg().add(&vanishing(&mut rng, z, kb))
                        } else {
                            vanishing(&mut rng, z, kb.min(3))
                        };
                        (a, b)
                    })
                    .collect();
                usize::from(!valuation_axiom_check(&v, &pairs).passed())
            })
            .sum::<usize>();
        let covers: Vec<_> = fixtures.iter().filter_map(|f| f.cover.as_ref()).collect();
        let malformed = covers.iter().filter(|c| !c.well_formed()).count();
        let reflexive_bad = covers.iter().filter(|c| !refines(c, c).holds()).count();
        let table: Vec<Vec<bool>> = covers
            .iter()
            .map(|a| covers.iter().map(|b| refines(a, b).holds()).collect())
            .collect();
        let n = covers.len();
        let mut chains = 0;
        let mut transitive_bad = 0;
        for i in 0..n {
            for j in 0..n {
                if !table[i][j] {
                    continue;
                }
                for k in 0..n {
                    if table[j][k] {
                        chains += 1;
                        transitive_bad += usize::from(!table[i][k]);
                    }
                }
            }
        }
        let mut compositions = 0;
        let mut compose_bad = 0;
        for fx in &fixtures {
            if let (Some(l1), Some(l2)) = (&fx.localize, &fx.then) {
                compositions += 1;
                let twice = l2.apply(&l1.apply(&fx.pair)?)?;
                let once = compose_localizations(l1, l2).apply(&fx.pair)?;
                compose_bad += usize::from(!twice.equivalent(&once));
            }
        }
        let passed =
            val_bad == 0 && malformed == 0 && reflexive_bad == 0 && transitive_bad == 0 && compose_bad == 0 && n >= 10;
        Ok(line(
            9,
            "huber-site",
            passed,
            format!(
                "valuations={valuations} pairs_each={} valuation_failures={val_bad} covers={n} malformed={malformed} \
                 reflexive_failures={reflexive_bad} chains={chains} transitive_failures={transitive_bad} \
                 compositions={compositions} composition_failures={compose_bad}",
                cfg.trials
            ),
        ))
    })
}

/// Reruns two randomized criteria on a single worker and compares their
/// lines with the pooled run.
pub fn criterion_determinism(cfg: &SelftestConfig, pooled: &[CriterionLine]) -> CriterionLine {
    guarded(10, "determinism", || {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
        let single = pool.install(|| [criterion_division(cfg), criterion_splitting(cfg)]);
        let same = single.iter().all(|s| pooled.iter().any(|p| p == s));
        Ok(line(
            10,
            "determinism",
            same,
            format!("rerun=division-bound,laurent-splitting workers=1 identical={same}"),
        ))
    })
}

/// Runs all ten criteria in order.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let mut lines = vec![
        criterion_division(cfg),
        criterion_exhaustive_division(cfg),
        criterion_splitting(cfg),
        criterion_pairing(cfg),
        criterion_gaga(cfg),
        criterion_negative_control(cfg),
        criterion_seminorm(cfg),
        criterion_lattice(cfg),
        criterion_huber(cfg),
    ];
    let det = criterion_determinism(cfg, &lines);
    lines.push(det);
    SelftestReport { lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SelftestConfig {
        SelftestConfig {
            cap: 4,
            trials: 20,
            gaga_configs: 2,
            lattice_triples: 2,
            sampler: Sampler {
                grid_step: Some(rat(1, 2)),
                random_points: 100,
                ..Sampler::default()
            },
            ..SelftestConfig::default()
        }
    }

    #[test]
    fn scaled_down_suite_passes() {
        let rep = run_selftest(&small());
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.lines.len(), 10);
    }

    #[test]
    fn missing_fixture_dir_is_io() {
        let cfg = SelftestConfig {
            fixtures: Some("/nonexistent/fixtures".into()),
            ..small()
        };
        assert!(matches!(cfg.load_fixtures(), Err(Error::Io { .. })));
        assert!(!criterion_huber(&cfg).passed);
    }

    #[test]
    fn slot_count() {
        assert_eq!(slots(6).len(), 28);
    }
}
