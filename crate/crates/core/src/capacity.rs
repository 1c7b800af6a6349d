//! Cutoff CSNR and spectral efficiency of the four adaptive-transmission schemes, each as
//! its printed closed form and as truncated quadrature of the defining integral.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{aggregated_density, check_positive, JftsModel};
use crate::quad::{integrate_log, QuadOptions};
use crate::roots::{bisect, brent, golden_section_max, log_grid, Tolerance};
use crate::scalar::{Real, EULER_MASCHERONI};
use crate::specfun::{expint_ei, gamma_at, hyp3f3_unit};

/// Lower end of the cutoff search bracket.
pub const CUTOFF_LO: f64 = 1e-8;
/// Initial upper end of the cutoff search bracket.
pub const CUTOFF_HI: f64 = 10.0;
/// Largest upper end tried while expanding the bracket.
pub const CUTOFF_HI_MAX: f64 = 1e4;
/// Lower limit standing in for zero in the ORA integral.
pub const ORA_EPSILON: f64 = 1e-12;

const CUTOFF_GRID: usize = 200;
const TIFR_GRID: usize = 200;
const TIFR_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Opra,
    Ora,
    Cifr,
    Tifr,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Opra => "OPRA",
            Scheme::Ora => "ORA",
            Scheme::Cifr => "CIFR",
            Scheme::Tifr => "TIFR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Series,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed",
            Method::Quadrature => "quadrature",
            Method::Series => "series",
        })
    }
}

/// A diagnostic attached to a capacity result.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    Flag(bool),
    Number(f64),
    Count(u64),
    Text(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Flag(b) => write!(f, "{b}"),
            Diagnostic::Number(x) => write!(f, "{x:e}"),
            Diagnostic::Count(n) => write!(f, "{n}"),
            Diagnostic::Text(s) => f.write_str(s),
        }
    }
}

pub type Diagnostics = BTreeMap<String, Diagnostic>;

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult<T = f64> {
    pub scheme: Scheme,
    /// Bits per second per hertz.
    pub value: T,
    pub method: Method,
    /// Truncation bound; present exactly for quadrature results.
    pub gamma_max: Option<T>,
    /// Cutoff CSNR the value was computed at, where one applies.
    pub gamma0: Option<T>,
    pub diagnostics: Diagnostics,
}

impl<T: Real> CapacityResult<T> {
    fn new(scheme: Scheme, value: T, method: Method) -> Self {
        Self { scheme, value, method, gamma_max: None, gamma0: None, diagnostics: BTreeMap::new() }
    }

    fn note(&mut self, key: &str, d: Diagnostic) {
        self.diagnostics.insert(key.to_string(), d);
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.diagnostics.get(key), Some(Diagnostic::Flag(true)))
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        match self.diagnostics.get(key) {
            Some(Diagnostic::Number(x)) => Some(*x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSolution<T = f64> {
    pub gamma0: T,
    /// Left side of the cutoff condition minus one, at `gamma0`.
    pub residual: T,
    pub iterations: usize,
    pub bracket: (T, T),
    /// More than one sign change was seen on the initial scan.
    pub multiple_roots: bool,
}

/// `(𝔅/γ₀ + 𝔅²/γ̄)·Ei(-x) + (𝔅/γ₀)(1 - ln γ₀ + e^{-x}) - 1` with `x = 𝔅γ₀/γ̄`.
pub fn cutoff_residual<T: Real>(model: &JftsModel<T>, gamma0: T, gamma_bar: T) -> Result<T> {
    check_positive("gamma0", gamma0)?;
    check_positive("gamma_bar", gamma_bar)?;
    let b = model.b_aggregate();
    let x = b * gamma0 / gamma_bar;
    let ei = expint_ei(-x)?;
    Ok((b / gamma0 + b * b / gamma_bar) * ei + b / gamma0 * (T::one() - gamma0.ln() + (-x).exp()) - T::one())
}

/// First sign change of the residual on a log grid over `[1e-8, 10]`, widening the upper
/// end tenfold up to `1e4`.
fn locate_bracket<T: Real>(model: &JftsModel<T>, gamma_bar: T) -> Result<((T, T), bool)> {
    let mut grid = log_grid(T::c(CUTOFF_LO), T::c(CUTOFF_HI), CUTOFF_GRID);
    let mut hi = T::c(CUTOFF_HI);
    while hi < T::c(CUTOFF_HI_MAX) {
        hi = hi * T::c(10.0);
        grid.push(hi);
    }
    let values = grid
        .iter()
        .map(|&g| cutoff_residual(model, g, gamma_bar))
        .collect::<Result<Vec<T>>>()?;
    let mut changes = (0..grid.len() - 1).filter(|&i| values[i].signum() != values[i + 1].signum() || values[i] == T::zero());
    match changes.next() {
        Some(i) => {
            let initial = CUTOFF_GRID - 1;
            let multiple = changes.any(|j| j < initial) && i < initial;
            Ok(((grid[i], grid[i + 1]), multiple))
        }
        None => Err(Error::NoRoot {
            lo: CUTOFF_LO,
            hi: CUTOFF_HI_MAX,
            f_lo: values[0].as_f64(),
            f_hi: values[values.len() - 1].as_f64(),
        }),
    }
}

/// Smallest cutoff CSNR solving the cutoff condition, by Brent's method on the first
/// bracketed sign change.
pub fn solve_cutoff<T: Real>(model: &JftsModel<T>, gamma_bar: T, tol: T) -> Result<CutoffSolution<T>> {
    check_positive("gamma_bar", gamma_bar)?;
    if !(tol >= T::c(1e-12).max(T::epsilon())) {
        return Err(Error::Domain(format!("tolerance {tol} below 1e-12")));
    }
    let ((lo, hi), multiple_roots) = locate_bracket(model, gamma_bar)?;
    let f = |g: T| cutoff_residual(model, g, gamma_bar).unwrap_or(T::nan());
    let rep = brent(f, lo, hi, Tolerance { abs: T::zero(), rel: tol }, 300)?;
    Ok(CutoffSolution {
        gamma0: rep.root,
        residual: rep.residual,
        iterations: rep.iterations,
        bracket: rep.bracket,
        multiple_roots,
    })
}

/// Independent bisection on the same bracket, for cross-checking [`solve_cutoff`].
pub fn solve_cutoff_bisect<T: Real>(model: &JftsModel<T>, gamma_bar: T, tol: T) -> Result<CutoffSolution<T>> {
    check_positive("gamma_bar", gamma_bar)?;
    let ((lo, hi), multiple_roots) = locate_bracket(model, gamma_bar)?;
    let f = |g: T| cutoff_residual(model, g, gamma_bar).unwrap_or(T::nan());
    let rep = bisect(f, lo, hi, Tolerance { abs: T::zero(), rel: tol }, 400)?;
    Ok(CutoffSolution {
        gamma0: rep.root,
        residual: rep.residual,
        iterations: rep.iterations,
        bracket: rep.bracket,
        multiple_roots,
    })
}

fn default_tol<T: Real>() -> T {
    T::c(1e-12).max(T::epsilon() * T::c(4.0))
}

fn quad_options<T: Real>() -> QuadOptions<T> {
    let rel = 1e-12_f64.max(T::epsilon().as_f64() * 64.0);
    QuadOptions::tolerances(1e-10, rel).with_panels(16).with_max_intervals(8000)
}

/// OPRA closed form at the solved cutoff, with closed-minus-quadrature gaps at
/// `γ_max ∈ {10², 10³, 10⁴}·γ̄`.
pub fn opra_closed<T: Real>(model: &JftsModel<T>, gamma_bar: T) -> Result<CapacityResult<T>> {
    let cut = solve_cutoff(model, gamma_bar, default_tol())?;
    let mut out = opra_closed_at(model, cut.gamma0, gamma_bar)?;
    if cut.multiple_roots {
        out.note("multiple_cutoff_roots", Diagnostic::Flag(true));
    }
    for (key, factor) in [("gap_1e2", 1e2), ("gap_1e3", 1e3), ("gap_1e4", 1e4)] {
        let q = opra_quadrature_at(model, cut.gamma0, gamma_bar, gamma_bar * T::c(factor))?;
        out.note(key, Diagnostic::Number((out.value - q.value).as_f64()));
    }
    Ok(out)
}

/// OPRA closed form evaluated at a caller-supplied cutoff.
pub fn opra_closed_at<T: Real>(model: &JftsModel<T>, gamma0: T, gamma_bar: T) -> Result<CapacityResult<T>> {
    check_positive("gamma0", gamma0)?;
    check_positive("gamma_bar", gamma_bar)?;
    let b = model.b_aggregate();
    let x = b * gamma0 / gamma_bar;
    let ln2 = T::LN_2();
    let first = b * gamma0.ln() / ln2 * (x.ln() + T::c(EULER_MASCHERONI));
    let second = b * b * gamma0 / (gamma_bar * ln2) * hyp3f3_unit(-x)?;
    let mut out = CapacityResult::new(Scheme::Opra, first - second, Method::ClosedForm);
    out.gamma0 = Some(gamma0);
    out.note("negative", Diagnostic::Flag(out.value < T::zero()));
    Ok(out)
}

/// `(1/ln 2)·∫_{γ₀}^{γ_max} ln(γ/γ₀)·f_γ(γ) dγ` at the solved cutoff.
pub fn opra_quadrature<T: Real>(model: &JftsModel<T>, gamma_bar: T, gamma_max: T) -> Result<CapacityResult<T>> {
    let cut = solve_cutoff(model, gamma_bar, default_tol())?;
    opra_quadrature_at(model, cut.gamma0, gamma_bar, gamma_max)
}

pub fn opra_quadrature_at<T: Real>(
    model: &JftsModel<T>,
    gamma0: T,
    gamma_bar: T,
    gamma_max: T,
) -> Result<CapacityResult<T>> {
    check_positive("gamma0", gamma0)?;
    check_positive("gamma_bar", gamma_bar)?;
    if !(gamma_max > gamma0) {
        return Err(Error::Domain(format!("gamma_max {gamma_max} must exceed the cutoff {gamma0}")));
    }
    let b = model.b_aggregate();
    let f = |g: T| (g / gamma0).ln() * aggregated_density(b, g, gamma_bar);
    let est = integrate_log(f, gamma0, gamma_max, &quad_options());
    let mut out = CapacityResult::new(Scheme::Opra, est.value / T::LN_2(), Method::Quadrature);
    out.gamma_max = Some(gamma_max);
    out.gamma0 = Some(gamma0);
    out.note("abs_error", Diagnostic::Number(est.abs_error.as_f64() / std::f64::consts::LN_2));
    if !est.converged {
        out.note("not_converged", Diagnostic::Flag(true));
    }
    Ok(out)
}

/// `(1/ln 2)·∫_ε^{γ_max} ln(1+γ)·f_γ(γ) dγ` with `ε = 1e-12`.
pub fn ora_quadrature<T: Real>(model: &JftsModel<T>, gamma_bar: T, gamma_max: T) -> Result<CapacityResult<T>> {
    check_positive("gamma_bar", gamma_bar)?;
    let eps = T::c(ORA_EPSILON);
    if !(gamma_max > eps) {
        return Err(Error::Domain(format!("gamma_max must be positive, got {gamma_max}")));
    }
    let b = model.b_aggregate();
    let f = |g: T| g.ln_1p() * aggregated_density(b, g, gamma_bar);
    let est = integrate_log(f, eps, gamma_max, &quad_options());
    let mut out = CapacityResult::new(Scheme::Ora, est.value / T::LN_2(), Method::Quadrature);
    out.gamma_max = Some(gamma_max);
    out.note("abs_error", Diagnostic::Number(est.abs_error.as_f64() / std::f64::consts::LN_2));
    if !est.converged {
        out.note("not_converged", Diagnostic::Flag(true));
    }
    Ok(out)
}

/// The ORA series as printed. Every term carries `Γ(-n)`, so the result is a divergence
/// report naming the first pole; the value is NaN. The quadrature value at
/// `γ_max = 10³·γ̄` is attached as `quadrature_value`.
pub fn ora_series<T: Real>(model: &JftsModel<T>, gamma_bar: T, n_terms: usize) -> Result<CapacityResult<T>> {
    check_positive("gamma_bar", gamma_bar)?;
    if n_terms == 0 {
        return Err(Error::Domain("the series needs at least one term".into()));
    }
    let b = model.b_aggregate();
    let ratio = -b / gamma_bar;
    let mut partial = T::zero();
    let mut pole = None;
    for n in 1..=n_terms {
        let nf = T::from_count(n);
        match gamma_at(-nf) {
            Ok(g) => partial = partial + b * g / (nf * T::LN_2()) * ratio.powi(n as i32),
            Err(Error::Pole(_)) => {
                pole = Some(n);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let mut out = CapacityResult::new(Scheme::Ora, T::nan(), Method::Series);
    match pole {
        Some(n) => {
            out.note("divergent", Diagnostic::Flag(true));
            out.note("pole_index", Diagnostic::Count(n as u64));
        }
        None => out.value = partial,
    }
    out.note("terms_requested", Diagnostic::Count(n_terms as u64));
    let q = ora_quadrature(model, gamma_bar, gamma_bar * T::c(1e3))?;
    out.note("quadrature_value", Diagnostic::Number(q.value.as_f64()));
    Ok(out)
}

/// CIFR capacity: zero, because `E[1/γ]` diverges under the CSNR density.
pub fn cifr<T: Real>(_model: &JftsModel<T>) -> CapacityResult<T> {
    let mut out = CapacityResult::new(Scheme::Cifr, T::zero(), Method::ClosedForm);
    out.note("inverse_moment_divergent", Diagnostic::Flag(true));
    out.note(
        "reason",
        Diagnostic::Text("density tends to B^2/gamma_bar at 0, so E[1/gamma] diverges logarithmically".into()),
    );
    out
}

/// `∫_ε^1 (1/γ)·f_γ(γ) dγ`, which grows like `ln(1/ε)`.
pub fn cifr_inverse_moment<T: Real>(model: &JftsModel<T>, eps: T, gamma_bar: T) -> Result<T> {
    check_positive("eps", eps)?;
    check_positive("gamma_bar", gamma_bar)?;
    if !(eps < T::one()) {
        return Err(Error::Domain(format!("eps must be below 1, got {eps}")));
    }
    let b = model.b_aggregate();
    integrate_log(|g: T| aggregated_density(b, g, gamma_bar) / g, eps, T::one(), &quad_options()).checked()
}

/// TIFR spectral efficiency at cutoff `γ₀`:
/// `(1 + 𝔅Ei(-x) - 𝔅 ln γ₀)·log₂(1 - γ₀γ̄/(𝔅γ̄e^{-x} + 𝔅²γ₀Ei(-x) + 𝔅γ̄))`.
///
/// Where the logarithm's argument is not positive the value is NaN and the
/// `invalid_region` flag is set.
pub fn tifr_capacity<T: Real>(model: &JftsModel<T>, gamma0: T, gamma_bar: T) -> Result<CapacityResult<T>> {
    check_positive("gamma0", gamma0)?;
    check_positive("gamma_bar", gamma_bar)?;
    let b = model.b_aggregate();
    let x = b * gamma0 / gamma_bar;
    let ei = expint_ei(-x)?;
    let prefactor = T::one() + b * ei - b * gamma0.ln();
    let denom = b * gamma_bar * (-x).exp() + b * b * gamma0 * ei + b * gamma_bar;
    let arg = T::one() - gamma0 * gamma_bar / denom;
    let valid = arg > T::zero() && arg.is_finite();
    let value = if valid { prefactor * arg.log2() } else { T::nan() };
    let mut out = CapacityResult::new(Scheme::Tifr, value, Method::ClosedForm);
    out.gamma0 = Some(gamma0);
    out.note("prefactor", Diagnostic::Number(prefactor.as_f64()));
    out.note("invalid_region", Diagnostic::Flag(!valid));
    out.note("prefactor_outside_unit_interval", Diagnostic::Flag(!(prefactor >= T::zero() && prefactor <= T::one())));
    Ok(out)
}

/// Maximizer of the TIFR efficiency over the cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct TifrOptimum<T = f64> {
    pub gamma0: T,
    /// Golden-section bracket around the coarse-grid winner.
    pub bracket: (T, T),
    pub iterations: usize,
    /// Number of coarse-grid points in the valid region.
    pub valid_points: usize,
    pub result: CapacityResult<T>,
}

/// Coarse 200-point log scan of `γ₀ ∈ [1e-3, 10γ̄]` followed by golden-section refinement
/// to `|Δγ₀|/γ₀ < 1e-6`.
pub fn tifr_max<T: Real>(model: &JftsModel<T>, gamma_bar: T) -> Result<TifrOptimum<T>> {
    check_positive("gamma_bar", gamma_bar)?;
    let grid = log_grid(T::c(1e-3), T::c(10.0) * gamma_bar, TIFR_GRID);
    let eval = |g: T| tifr_capacity(model, g, gamma_bar).map(|r| r.value).unwrap_or(T::nan());
    let values: Vec<T> = grid.iter().map(|&g| eval(g)).collect();
    let valid_points = values.iter().filter(|v| v.is_finite()).count();
    let best = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .fold(None, |acc: Option<(usize, T)>, (i, &v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((i, v)),
        });
    let (i, grid_best) = best.ok_or_else(|| {
        Error::NoCapacity(format!("no valid TIFR operating point on [1e-3, {}]", T::c(10.0) * gamma_bar))
    })?;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let m = golden_section_max(eval, lo, hi, T::c(TIFR_REL_TOL), 200);
    let (gamma0, iterations) = if m.value >= grid_best { (m.x, m.iterations) } else { (grid[i], m.iterations) };
    let mut result = tifr_capacity(model, gamma0, gamma_bar)?;
    result.note("valid_grid_points", Diagnostic::Count(valid_points as u64));
    Ok(TifrOptimum { gamma0, bracket: (lo, hi), iterations, valid_points, result })
}
