//! Command-line front end. `main` only parses arguments and forwards to
//! [`run`], which returns the exit code and the report text.
//!
//! Exit codes: 0 success, 1 counterexample or failed check, 2 usage, parse
//! or precondition error, 3 I/O error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{read_config_file, RunConfig};
use crate::error::{Error, Result};
use crate::huber::{
    compose_localizations, generate_covers, parse_fixtures, refines, spa_membership, CoverSpec, Frac, Localization,
    SiteFixture, Valuation,
};
use crate::literal::{parse_complex, parse_poly, parse_rational, parse_series, parse_series_literal, parse_scalar};
use crate::plot::{rasterize, render, Style};
use crate::region::{gaga_axiom_suite, parse_region, GagaConfig};
use crate::rings::{divide_by_t_minus_u, dual_pairing, laurent_split, split_bounds, ModuleElement, RingElement, RingKind};
use crate::scalar::Real;
use crate::selftest::{run_selftest, SelftestConfig};
use crate::series::{Truncation, WeightedSeries};

#[derive(Parser, Debug)]
#[command(name = "anline", version, about = "Normed series, Berkovich points, region lattices and Huber-pair sites over C")]
pub struct Cli {
    /// Arithmetic backend: exact or float.
    #[arg(long, global = true)]
    pub backend: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Sampling window `x0,y0,x1,y1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Grid step (rational; 0 disables the grid).
    #[arg(long, global = true)]
    pub grid_step: Option<String>,
    #[arg(long, global = true)]
    pub random_points: Option<String>,
    /// Degree cap for products and randomized trials.
    #[arg(long, global = true)]
    pub cap: Option<String>,
    /// Output file (image for `plot`, report otherwise).
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesAction {
    Norm,
    Mul,
    Eval,
    Split,
    Divide,
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SiteAction {
    Localize,
    Covers,
    Refine,
    Spa,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Series calculator. Literals use `deg:coeff` pairs plus `r=`;
    /// `divide` takes the `Uⁱ` entries separated by `|`.
    Series {
        action: SeriesAction,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Extra `key=value` settings such as `r=2`.
        keys: Vec<String>,
        /// Second operand for `mul` and `pair`.
        #[arg(long, allow_hyphen_values = true)]
        with: Option<String>,
        /// Evaluation point for `eval`.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Sampled check of the six region relations.
    Axioms {
        #[arg(long, default_value = "T")]
        f: String,
        #[arg(long, default_value = "T+1")]
        g: String,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long, default_value = "1")]
        s: String,
        /// Radius below 1 used by item 3.
        #[arg(long, default_value = "1/2")]
        inner: String,
        /// Replace an item by a false variant (only 6 is supported).
        #[arg(long)]
        negate: Option<u8>,
        #[arg(long)]
        no_exact_fallback: bool,
    },
    /// Rasterize a region over the window grid.
    Plot {
        region: String,
        #[arg(long, default_value = "ppm")]
        style: String,
        #[arg(long)]
        no_exact_fallback: bool,
    },
    /// Huber-pair site explorer over a fixture file or an inline pair line.
    Site {
        action: SiteAction,
        fixture: String,
        /// Element for the two-piece cover (`covers`).
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        /// Comma-separated unit-ideal family for a Zariski cover (`covers`).
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        /// `order:<z>:<gamma>`, `trivial:<z>` or `trivial:generic` (`spa`).
        #[arg(long)]
        valuation: Option<String>,
        /// Rational subset `f1,...,fn;g` (`spa`, `localize`).
        #[arg(long)]
        subset: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Directory holding `site.txt` instead of the built-in corpus.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

/// Exit code and report of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome { code: 0, report }
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(p) => read_config_file(p)?,
        None => Default::default(),
    };
    RunConfig::resolve(
        &file,
        &[
            ("backend", cli.backend.clone()),
            ("seed", cli.seed.clone()),
            ("window", cli.window.clone()),
            ("grid_step", cli.grid_step.clone()),
            ("random_points", cli.random_points.clone()),
            ("cap", cli.cap.clone()),
            ("out", cli.out.clone()),
        ],
    )
}

/// Runs a parsed command line. Errors carry their own exit codes.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = run_config(cli)?;
    let outcome = match &cli.command {
        Command::Series {
            action,
            expr,
            keys,
            with,
            at,
        } => {
            let full = std::iter::once(expr.as_str()).chain(keys.iter().map(String::as_str)).collect::<Vec<_>>().join(" ");
            Outcome::ok(cmd_series(&cfg, *action, &full, with.as_deref(), at.as_deref())?)
        }
        Command::Axioms {
            f,
            g,
            alpha,
            r,
            s,
            inner,
            negate,
            no_exact_fallback,
        } => {
            let negate6 = match negate {
                None => false,
                Some(6) => true,
                Some(k) => return Err(Error::Usage(format!("--negate supports item 6 only, got {k}"))),
            };
            let gc = GagaConfig {
                f: parse_poly(f)?,
                g: parse_poly(g)?,
                alpha: parse_complex(alpha)?,
                r: parse_rational(r)?,
                s: parse_rational(s)?,
                inner: parse_rational(inner)?,
                negate6,
            };
            cmd_axioms(&cfg, &gc, !no_exact_fallback)?
        }
        Command::Plot {
            region,
            style,
            no_exact_fallback,
        } => {
            let style: Style = style.parse()?;
            let path = cfg.out.clone().unwrap_or_else(|| {
                PathBuf::from(match style {
                    Style::Ppm => "region.ppm",
                    Style::Svg => "region.svg",
                })
            });
            return cmd_plot(&cfg, region, style, !no_exact_fallback, &path);
        }
        Command::Site {
            action,
            fixture,
            f,
            family,
            valuation,
            subset,
        } => Outcome::ok(cmd_site(*action, fixture, f.as_deref(), family.as_deref(), valuation.as_deref(), subset.as_deref())?),
        Command::Selftest { fixtures, trials } => {
            let sc = SelftestConfig {
                seed: cfg.seed,
                cap: cfg.cap,
                sampler: cfg.sampler(),
                fixtures: fixtures.clone(),
                trials: trials.unwrap_or(SelftestConfig::default().trials),
                ..SelftestConfig::default()
            };
            cmd_selftest(&sc)?
        }
    };
    if let Some(p) = &cfg.out {
        write_file(Path::new(p), outcome.report.as_bytes())?;
    }
    Ok(outcome)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Terms from the highest degree down, `0:0` for zero.
fn terms_desc(s: &WeightedSeries) -> String {
    let mut sup = s.support();
    sup.reverse();
    if sup.is_empty() {
        return "0:0".into();
    }
    sup.iter().map(|n| format!("{n}:{}", s.coeff(*n))).collect::<Vec<_>>().join(" ")
}

/// Pulls `key=value` tokens out of a literal; returns the rest and the keys.
fn take_keys(s: &str) -> (String, Vec<(String, String)>) {
    let mut body = Vec::new();
    let mut keys = Vec::new();
    for tok in s.split_whitespace() {
        match tok.split_once('=') {
            Some((k, v)) if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                keys.push((k.to_string(), v.to_string()))
            }
            _ => body.push(tok),
        }
    }
    (body.join(" "), keys)
}

fn key<'a>(keys: &'a [(String, String)], k: &str) -> Option<&'a str> {
    keys.iter().find(|(a, _)| a == k).map(|(_, v)| v.as_str())
}

pub fn cmd_series(cfg: &RunConfig, action: SeriesAction, expr: &str, with: Option<&str>, at: Option<&str>) -> Result<String> {
    let b = cfg.backend;
    let trunc = Truncation::tracking(cfg.cap);
    let mut out = String::new();
    let mut push = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    match action {
        SeriesAction::Norm => {
            let lit = parse_series_literal(expr)?;
            let s = lit.to_series(b, None)?;
            match lit.get("ring") {
                Some(tag) => {
                    let kind: RingKind = tag.parse()?;
                    let r = s.radius().clone();
                    let e = match kind {
                        RingKind::Overconvergent => RingElement::overconvergent(s, r.clone())?,
                        RingKind::OuterTail => RingElement::outer_tail(s, r.clone())?,
                        RingKind::Polynomial => RingElement::polynomial(s)?,
                        other => return Err(Error::Usage(format!("norm for ring={other} needs the library API"))),
                    };
                    push(format!("norm={} ring={} radius={r}", e.ring_norm(None)?, kind));
                }
                None => push(format!("norm={} radius={}", s.weighted_norm(), s.radius())),
            }
        }
        SeriesAction::Mul => {
            let f = parse_series(expr, b, None)?;
            let g = parse_series(with.ok_or_else(|| Error::Usage("mul needs --with".into()))?, b, Some(f.radius().clone()))?;
            let p = f.mul_with(&g, &trunc)?;
            let (np, bound) = (p.weighted_norm(), f.weighted_norm().mul(&g.weighted_norm()));
            push(format!("product={}", crate::literal::format_series(&p)));
            push(format!("norm={np} bound={bound} within_bound={}", np.le(&bound)));
        }
        SeriesAction::Eval => {
            let f = parse_series(expr, b, None)?;
            let z = parse_scalar(at.ok_or_else(|| Error::Usage("eval needs --at".into()))?, b)?;
            let v = f.eval(&z)?;
            push(format!("value={v} modulus={:.17e}", v.modulus_f64()));
            if z.modulus_f64() <= f.radius().to_f64() {
                push(format!("bound={} (|f(z)| <= norm for |z| <= r)", f.weighted_norm()));
            }
        }
        SeriesAction::Split => {
            let lit = parse_series_literal(expr)?;
            let outer = lit.real_key("outer", b)?.unwrap_or(Real::ratio(2, 1).convert(b)?);
            let inner = lit.real_key("inner", b)?.unwrap_or(Real::ratio(1, 2).convert(b)?);
            let h = RingElement::two_sided(lit.to_series(b, Some(outer.clone()))?, outer, inner)?;
            let (f, g) = laurent_split(&h)?;
            let (cf, cg) = split_bounds(&h, &f, &g)?;
            push(format!("({}, {})", terms_desc(f.series()), terms_desc(g.series())));
            push(format!(
                "norm_h={} norm_f={} norm_g={} f_le_h={cf} g_le_h={cg}",
                h.ring_norm(None)?,
                f.ring_norm(None)?,
                g.ring_norm(None)?
            ));
        }
        SeriesAction::Divide => {
            let (body, keys) = take_keys(expr);
            let r = crate::literal::parse_real(
                key(&keys, "r").ok_or_else(|| Error::Usage("divide needs r=<radius below 1>".into()))?,
                b,
            )?;
            let entries = body
                .split('|')
                .map(|part| parse_series(part, b, Some(r.clone())))
                .collect::<Result<Vec<_>>>()?;
            let m = ModuleElement::new(entries, r.clone())?;
            let d = divide_by_t_minus_u(&m, &trunc)?;
            for (i, c) in d.quotient.entries().iter().enumerate() {
                push(format!("c[{i}]={}", terms_desc(c)));
            }
            let ratio = if d.norm_b.to_f64() > 0.0 { d.norm_c.to_f64() / d.norm_b.to_f64() } else { 0.0 };
            push(format!(
                "normB={} normC={} ratio={ratio:.12e} bound={} within_bound={}",
                d.norm_b, d.norm_c, d.bound, d.within_bound
            ));
        }
        SeriesAction::Pair => {
            let f = parse_series(expr, b, None)?;
            let g = parse_series(with.ok_or_else(|| Error::Usage("pair needs --with".into()))?, b, Some(f.radius().clone()))?;
            let g = RingElement::outer_tail(g, f.radius().clone())?;
            let p = dual_pairing(&f, &g)?;
            push(format!(
                "value={} modulus={} bound={} within_bound={}",
                p.value, p.modulus, p.bound, p.within_bound
            ));
        }
    }
    Ok(out)
}

pub fn cmd_axioms(cfg: &RunConfig, gc: &GagaConfig, exact_fallback: bool) -> Result<Outcome> {
    let sampler = crate::region::Sampler {
        exact_fallback,
        ..cfg.sampler()
    };
    let verdicts = gaga_axiom_suite(gc, &sampler)?;
    let mut report = format!(
        "axioms f={} g={} alpha={} r={} s={} inner={} negate6={} window={} samples={}\n",
        gc.f,
        gc.g,
        gc.alpha,
        crate::literal::format_rational(&gc.r),
        crate::literal::format_rational(&gc.s),
        crate::literal::format_rational(&gc.inner),
        gc.negate6,
        sampler.window,
        sampler.len()
    );
    for v in &verdicts {
        report.push_str(&format!("{v}\n"));
    }
    let found = verdicts.iter().filter(|v| v.verdict.is_counterexample()).count();
    report.push_str(&format!(
        "status={} counterexamples={found}\n",
        if found == 0 { "ok" } else { "counterexample" }
    ));
    Ok(Outcome {
        code: if found == 0 { 0 } else { 1 },
        report,
    })
}

pub fn cmd_plot(cfg: &RunConfig, region: &str, style: Style, exact_fallback: bool, path: &Path) -> Result<Outcome> {
    let r = parse_region(region)?;
    let sampler = crate::region::Sampler {
        exact_fallback,
        random_points: 0,
        ..cfg.sampler()
    };
    let raster = rasterize(&r, &sampler)?;
    write_file(path, &render(&raster, style))?;
    use crate::region::Membership as M;
    Ok(Outcome::ok(format!(
        "plot region=\"{r}\" width={} height={} member={} nonmember={} undecided={} out={}\n",
        raster.width,
        raster.height,
        raster.count(M::In),
        raster.count(M::Out),
        raster.count(M::Undecided),
        path.display()
    )))
}

fn load_site(fixture: &str) -> Result<Vec<SiteFixture>> {
    let p = Path::new(fixture);
    if fixture.trim_start().starts_with("ring=") {
        parse_fixtures(fixture)
    } else {
        let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
        parse_fixtures(&text)
    }
}

fn parse_subset(s: &str) -> Result<Localization> {
    let (nums, den) = s
        .split_once(';')
        .ok_or_else(|| Error::Usage(format!("subset `{s}` needs `f1,...,fn;g`")))?;
    Ok(Localization {
        numerators: nums
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?,
        denominator: den.parse()?,
    })
}

fn fixture_covers(fx: &[SiteFixture], f: Option<&str>, family: Option<&str>) -> Result<Vec<(usize, CoverSpec)>> {
    let mut out = Vec::new();
    for x in fx {
        match f {
            Some(f) => {
                let f: Frac = f.parse()?;
                let fam: Option<Vec<Frac>> = family
                    .map(|s| s.split(',').map(str::trim).map(str::parse).collect::<Result<_>>())
                    .transpose()?;
                for c in generate_covers(&x.pair, &f, fam.as_deref())? {
                    out.push((x.line, c));
                }
            }
            None => {
                if let Some(c) = &x.cover {
                    out.push((x.line, c.clone()));
                }
            }
        }
    }
    Ok(out)
}

pub fn cmd_site(
    action: SiteAction,
    fixture: &str,
    f: Option<&str>,
    family: Option<&str>,
    valuation: Option<&str>,
    subset: Option<&str>,
) -> Result<String> {
    let fx = load_site(fixture)?;
    let mut out = String::new();
    match action {
        SiteAction::Localize => {
            let forced = subset.map(parse_subset).transpose()?;
            for x in &fx {
                let Some(l) = forced.as_ref().or(x.localize.as_ref()) else { continue };
                let once = l.apply(&x.pair)?;
                out.push_str(&format!("line={} localize={l} result=[{once}]\n", x.line));
                if let (None, Some(t)) = (&forced, &x.then) {
                    let twice = t.apply(&once)?;
                    let c = compose_localizations(l, t);
                    let direct = c.apply(&x.pair)?;
                    out.push_str(&format!(
                        "line={} then={t} result=[{twice}] composite={c} composition_law={}\n",
                        x.line,
                        twice.equivalent(&direct)
                    ));
                }
            }
        }
        SiteAction::Covers => {
            for (line, c) in fixture_covers(&fx, f, family)? {
                out.push_str(&format!("line={line} {c}"));
            }
        }
        SiteAction::Refine => {
            let covers = fixture_covers(&fx, f, family)?;
            for (la, a) in &covers {
                for (lb, b) in &covers {
                    out.push_str(&format!("refine a={la} b={lb} {}\n", refines(a, b)));
                }
            }
        }
        SiteAction::Spa => {
            let v: Valuation = valuation
                .ok_or_else(|| Error::Usage("spa needs --valuation".into()))?
                .parse()?;
            let sub = parse_subset(subset.unwrap_or("1;1"))?;
            for x in &fx {
                let o = spa_membership(&v, &x.pair, &sub.numerators, &sub.denominator);
                out.push_str(&format!("line={} valuation={v} subset={sub} {o}\n", x.line));
            }
        }
    }
    Ok(out)
}

pub fn cmd_selftest(cfg: &SelftestConfig) -> Result<Outcome> {
    // an unreadable corpus is an I/O failure of the run, not a failed check
    cfg.load_fixtures()?;
    let rep = run_selftest(cfg);
    Ok(Outcome {
        code: if rep.passed() { 0 } else { 1 },
        report: rep.to_string(),
    })
}

/// Parses `args`, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.report);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
