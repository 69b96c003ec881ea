//! Python bindings for `anline`.
//!
//! Literals use the same syntax as the command line: series as
//! `"deg:coeff ... r=<radius>"`, polynomials and fractions as `"T^2+1"` or
//! `"(T)/(T-1)"`, regions as `"|T| <= 1 & |T-1| >= 1/2"`.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use anline::berkovich::{gelfand_points, AlgebraDescriptor};
use anline::huber::{self, CoverSpec, Frac, Refinement};
use anline::literal::{format_series, parse_complex, parse_poly, parse_rational, parse_real, parse_series};
use anline::region::{self, GagaConfig, Membership, RegionExpr, Sampler};
use anline::rings::{self, ModuleElement, RingElement};
use anline::selftest::{run_selftest, SelftestConfig};
use anline::{Backend, Error, Scalar, Truncation, WeightedSeries};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn backend(s: &str) -> PyResult<Backend> {
    s.parse().map_err(err)
}

fn fracs(xs: &[String]) -> PyResult<Vec<Frac>> {
    xs.iter().map(|x| x.parse::<Frac>().map_err(err)).collect()
}

/// A Laurent polynomial with the weighted norm `Σ |a_n| rⁿ`.
#[pyclass(name = "Series", module = "anline_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: WeightedSeries,
}

#[pymethods]
impl PySeries {
    #[new]
    #[pyo3(signature = (literal, backend = "exact"))]
    fn new(literal: &str, backend: &str) -> PyResult<Self> {
        let b = self::backend(backend)?;
        let inner = parse_series(literal, b, None).map_err(err)?;
        Ok(PySeries { inner })
    }

    /// Norm as a float.
    fn norm(&self) -> f64 {
        self.inner.weighted_norm().to_f64()
    }

    /// Norm as printed by the CLI (exact when possible).
    fn norm_text(&self) -> String {
        self.inner.weighted_norm().to_string()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius().to_f64()
    }

    /// `(degree, coefficient)` for the nonzero terms.
    fn terms(&self) -> Vec<(i64, Complex64)> {
        self.inner
            .support()
            .into_iter()
            .map(|d| (d, self.inner.coeff(d).to_complex64()))
            .collect()
    }

    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        let z = match self.inner.backend() {
            Backend::Exact => Scalar::Exact(
                anline::GaussRat::from_complex64(z).ok_or_else(|| PyValueError::new_err("point must be finite"))?,
            ),
            Backend::Float => Scalar::Float(z),
        };
        Ok(self.inner.eval(&z).map_err(err)?.to_complex64())
    }

    fn __add__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.add(&o.inner).map_err(err)? })
    }

    fn __sub__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.sub(&o.inner).map_err(err)? })
    }

    fn __mul__(&self, o: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.mul(&o.inner).map_err(err)? })
    }

    fn __str__(&self) -> String {
        format_series(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Series({:?})", format_series(&self.inner))
    }
}

/// Splits a two-sided element into `(f, g)` with `f - g = h`; returns the
/// halves and whether both norm bounds hold.
#[pyfunction]
#[pyo3(signature = (literal, outer = "2", inner = "1/2"))]
fn laurent_split(literal: &str, outer: &str, inner: &str) -> PyResult<(PySeries, PySeries, bool)> {
    let s = parse_series(literal, Backend::Exact, Some(anline::Real::one(Backend::Exact))).map_err(err)?;
    let h = RingElement::two_sided(
        s,
        parse_real(outer, Backend::Exact).map_err(err)?,
        parse_real(inner, Backend::Exact).map_err(err)?,
    )
    .map_err(err)?;
    let (f, g) = rings::laurent_split(&h).map_err(err)?;
    let (a, b) = rings::split_bounds(&h, &f, &g).map_err(err)?;
    Ok((
        PySeries { inner: f.series().clone() },
        PySeries { inner: g.series().clone() },
        a.holds() && b.holds(),
    ))
}

/// Divides `Σ bᵢ Uⁱ` by `T - U` at radius `r < 1`. Returns the quotient
/// entries, `‖b‖`, `‖c‖`, the bound `‖b‖/(1-r)` and whether it holds.
#[pyfunction]
fn divide(entries: Vec<String>, r: &str) -> PyResult<(Vec<String>, f64, f64, f64, bool)> {
    let radius = parse_real(r, Backend::Exact).map_err(err)?;
    let series = entries
        .iter()
        .map(|e| parse_series(e, Backend::Exact, Some(radius.clone())).map_err(err))
        .collect::<PyResult<Vec<_>>>()?;
    let b = ModuleElement::new(series, radius).map_err(err)?;
    let d = rings::divide_by_t_minus_u(&b, &Truncation::default()).map_err(err)?;
    Ok((
        d.quotient.entries().iter().map(format_series).collect(),
        d.norm_b.to_f64(),
        d.norm_c.to_f64(),
        d.bound.to_f64(),
        d.within_bound.holds(),
    ))
}

/// Distinct roots of a polynomial as `(center, certified radius)`.
#[pyfunction]
#[pyo3(signature = (poly, tol = 1e-10))]
fn roots(poly: &str, tol: f64) -> PyResult<Vec<(Complex64, f64)>> {
    let p = parse_poly(poly).map_err(err)?;
    let rs = anline::roots::certified_roots(&p, tol).map_err(err)?;
    Ok(rs.iter().map(|r| (r.to_complex64(), r.radius_f64())).collect())
}

/// Points of `C[T]/(p)` as complex numbers.
#[pyfunction]
fn spectrum(relation: &str) -> PyResult<Vec<Complex64>> {
    let p = parse_poly(relation).map_err(err)?;
    let s = gelfand_points(&AlgebraDescriptor::quotient(p)).map_err(err)?;
    Ok(s.points().iter().map(|x| x.z.to_complex64()).collect())
}

/// A finite union of intersections of `|f| rel c` constraints.
#[pyclass(name = "Region", module = "anline_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRegion {
    inner: RegionExpr,
}

#[pymethods]
impl PyRegion {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyRegion { inner: region::parse_region(text).map_err(err)? })
    }

    /// `True`, `False`, or `None` when undecided.
    #[pyo3(signature = (z, exact_fallback = true))]
    fn contains(&self, z: Complex64, exact_fallback: bool) -> Option<bool> {
        match region::member(&self.inner, &Scalar::Float(z), exact_fallback) {
            Membership::In => Some(true),
            Membership::Out => Some(false),
            Membership::Undecided => None,
        }
    }

    fn normalized(&self) -> PyRegion {
        PyRegion { inner: self.inner.normalized() }
    }

    fn __and__(&self, o: &PyRegion) -> PyRegion {
        PyRegion { inner: self.inner.meet(&o.inner) }
    }

    fn __or__(&self, o: &PyRegion) -> PyRegion {
        PyRegion { inner: self.inner.join(&o.inner) }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Region({:?})", self.inner.to_string())
    }
}

/// Runs the six region relations; one `(item, counterexample_found, line)`
/// per item.
#[pyfunction]
#[pyo3(signature = (
    f = "T", g = "T+1", alpha = "1/2", r = "1", s = "1", inner = "1/2",
    negate = false, grid_step = "1/16", random_points = 1000, seed = 0
))]
#[allow(clippy::too_many_arguments)]
fn axioms(
    f: &str,
    g: &str,
    alpha: &str,
    r: &str,
    s: &str,
    inner: &str,
    negate: bool,
    grid_step: &str,
    random_points: usize,
    seed: u64,
) -> PyResult<Vec<(u8, bool, String)>> {
    let cfg = GagaConfig {
        f: parse_poly(f).map_err(err)?,
        g: parse_poly(g).map_err(err)?,
        alpha: parse_complex(alpha).map_err(err)?,
        r: parse_rational(r).map_err(err)?,
        s: parse_rational(s).map_err(err)?,
        inner: parse_rational(inner).map_err(err)?,
        negate6: negate,
    };
    let step = parse_rational(grid_step).map_err(err)?;
    let sampler = Sampler {
        grid_step: if step == num_rational::BigRational::from_integer(0.into()) { None } else { Some(step) },
        random_points,
        seed,
        ..Sampler::default()
    };
    let items = region::gaga_axiom_suite(&cfg, &sampler).map_err(err)?;
    Ok(items
        .iter()
        .map(|v| (v.item, v.verdict.is_counterexample(), v.to_string()))
        .collect())
}

/// A valuation on `C[T]`: `order:<z>:<gamma>`, `trivial:<z>` or
/// `trivial:generic`.
#[pyclass(name = "Valuation", module = "anline_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyValuation {
    inner: huber::Valuation,
}

#[pymethods]
impl PyValuation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyValuation { inner: text.parse().map_err(err)? })
    }

    /// `v(f)` as a rational string (`"0"` for the zero value).
    fn value(&self, f: &str) -> PyResult<String> {
        let x: Frac = f.parse().map_err(err)?;
        let v = self.inner.value_frac(&x).map_err(err)?;
        Ok(anline::literal::format_rational(&self.inner.numeric(v)))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A Huber pair `(A, A⁺)` with `A` a localization of `C[T]` or `C[T]/(p)`.
#[pyclass(name = "HuberPair", module = "anline_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHuberPair {
    inner: huber::HuberPair,
}

#[pymethods]
impl PyHuberPair {
    /// `C[T]` with `A⁺` generated by 1.
    #[staticmethod]
    fn polynomial_ring() -> Self {
        PyHuberPair { inner: huber::HuberPair::polynomial_ring() }
    }

    /// From a fixture line such as `"ring=C[T] inverted=T aplus=1/(T)"`.
    #[staticmethod]
    fn parse(line: &str) -> PyResult<Self> {
        Ok(PyHuberPair { inner: huber::parse_fixture_line(line, 1).map_err(err)?.pair })
    }

    fn adjoin(&self, extra: Vec<String>) -> PyResult<Self> {
        Ok(PyHuberPair { inner: self.inner.adjoin(&fracs(&extra)?).map_err(err)? })
    }

    fn invert(&self, polys: Vec<String>) -> PyResult<Self> {
        let ps = polys.iter().map(|p| parse_poly(p).map_err(err)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyHuberPair { inner: self.inner.invert(&ps).map_err(err)? })
    }

    /// The rational localization at `{f_i/g}`.
    fn localize(&self, fs: Vec<String>, g: &str) -> PyResult<Self> {
        let g: Frac = g.parse().map_err(err)?;
        Ok(PyHuberPair { inner: huber::rational_localize(&self.inner, &fracs(&fs)?, &g).map_err(err)? })
    }

    /// A certificate `1 = Σ cᵢ gᵢ`, or `ValueError` when the ideal is proper.
    fn unit_ideal(&self, gens: Vec<String>) -> PyResult<String> {
        let ps = gens.iter().map(|p| parse_poly(p).map_err(err)).collect::<PyResult<Vec<_>>>()?;
        Ok(self.inner.unit_ideal(&ps).map_err(err)?.to_string())
    }

    fn two_piece_cover(&self, f: &str) -> PyResult<PyCover> {
        let f: Frac = f.parse().map_err(err)?;
        Ok(PyCover { inner: CoverSpec::two_piece(&self.inner, &f).map_err(err)? })
    }

    fn zariski_cover(&self, fs: Vec<String>) -> PyResult<PyCover> {
        Ok(PyCover { inner: CoverSpec::zariski(&self.inner, &fracs(&fs)?).map_err(err)? })
    }

    /// Membership of `v` in the rational subset `{v(f_i) ≤ v(g) ≠ 0}`:
    /// `"member"`, `"not-in-subset"` or `"not-a-point"`.
    fn spa(&self, v: &PyValuation, fs: Vec<String>, g: &str) -> PyResult<String> {
        let g: Frac = g.parse().map_err(err)?;
        Ok(match huber::spa_membership(&v.inner, &self.inner, &fracs(&fs)?, &g) {
            huber::SpaOutcome::Member => "member".into(),
            huber::SpaOutcome::NotInSubset { .. } => "not-in-subset".into(),
            huber::SpaOutcome::NotInSpa { .. } => "not-a-point".into(),
        })
    }

    fn maps_to(&self, other: &PyHuberPair) -> bool {
        self.inner.maps_to(&other.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(name = "Cover", module = "anline_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCover {
    inner: CoverSpec,
}

#[pymethods]
impl PyCover {
    fn members(&self) -> Vec<PyHuberPair> {
        self.inner.members.iter().map(|m| PyHuberPair { inner: m.pair.clone() }).collect()
    }

    /// The member assignment when `self` refines `other`, else `None`.
    fn refines(&self, other: &PyCover) -> Option<Vec<usize>> {
        match huber::refines(&self.inner, &other.inner) {
            Refinement::Refines(a) => Some(a),
            Refinement::Fails { .. } => None,
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Runs the acceptance suite; returns `(passed, report)`. The defaults are
/// the full-size run; shrink `cap`, `trials`, the sampler and the number of
/// random configurations for a quick check.
#[pyfunction]
#[pyo3(signature = (
    cap = None, trials = None, seed = 0, grid_step = None, random_points = None,
    gaga_configs = None, lattice_triples = None
))]
#[allow(clippy::too_many_arguments)]
fn selftest(
    py: Python<'_>,
    cap: Option<usize>,
    trials: Option<usize>,
    seed: u64,
    grid_step: Option<&str>,
    random_points: Option<usize>,
    gaga_configs: Option<usize>,
    lattice_triples: Option<usize>,
) -> PyResult<(bool, String)> {
    let mut cfg = SelftestConfig { seed, ..SelftestConfig::default() };
    cfg.cap = cap.unwrap_or(cfg.cap);
    cfg.trials = trials.unwrap_or(cfg.trials);
    cfg.gaga_configs = gaga_configs.unwrap_or(cfg.gaga_configs);
    cfg.lattice_triples = lattice_triples.unwrap_or(cfg.lattice_triples);
    cfg.sampler.random_points = random_points.unwrap_or(cfg.sampler.random_points);
    if let Some(step) = grid_step {
        cfg.sampler.grid_step = Some(parse_rational(step).map_err(err)?);
    }
    Ok(py.detach(|| {
        let rep = run_selftest(&cfg);
        (rep.passed(), rep.to_string())
    }))
}

#[pymodule]
fn anline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PyRegion>()?;
    m.add_class::<PyValuation>()?;
    m.add_class::<PyHuberPair>()?;
    m.add_class::<PyCover>()?;
    m.add_function(wrap_pyfunction!(laurent_split, m)?)?;
    m.add_function(wrap_pyfunction!(divide, m)?)?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(axioms, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
