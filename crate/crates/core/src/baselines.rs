//! Reference composite-fading models (Nakagami-lognormal and K-fading) and a
//! density-driven OPRA pipeline shared by every model.

use crate::capacity::{CapacityResult, Diagnostic, Method, Scheme};
use crate::error::{Error, Result};
use crate::quad::{integrate_log, QuadOptions};
use crate::roots::{brent, Tolerance};
use crate::scalar::CompensatedSum;
use crate::specfun::{bessel_kv, gauss_hermite, ln_gamma};
use std::f64::consts::{LN_10, LN_2, PI};

/// Gauss-Hermite order of the log-normal average.
const LOGNORMAL_ORDER: usize = 48;
/// Grid size of tabulated densities.
pub const TABLE_POINTS: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaselineParams {
    /// Nakagami-`m` fading whose local mean power is log-normal with spread `sigma_db`.
    NakagamiLogNormal { m: f64, sigma_db: f64 },
    /// K-distributed envelope: exponential power times a unit-mean Gamma(`k`) shadow.
    KFading { k: f64 },
}

impl BaselineParams {
    pub fn nakagami_lognormal(m: f64, sigma_db: f64) -> Result<Self> {
        let p = BaselineParams::NakagamiLogNormal { m, sigma_db };
        p.validate()?;
        Ok(p)
    }

    pub fn k_fading(k: f64) -> Result<Self> {
        let p = BaselineParams::KFading { k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            BaselineParams::NakagamiLogNormal { m, sigma_db } => {
                check("m", m)?;
                check("sigma", sigma_db)
            }
            BaselineParams::KFading { k } => check("k", k),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            BaselineParams::NakagamiLogNormal { m, sigma_db } => format!("nakagami_lognormal_m{m}_s{sigma_db}"),
            BaselineParams::KFading { k } => format!("k_fading_k{k}"),
        }
    }
}

/// A CSNR density with a finite numerical support.
pub trait CsnrDensity: Sync {
    fn pdf(&self, gamma: f64) -> f64;

    /// `(lo, hi)` outside of which the mass is negligible.
    fn support(&self) -> (f64, f64);

    /// `∫_{γ₀}^{hi} γᵏ f(γ) dγ`.
    fn tail_moment(&self, k: i32, gamma0: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        let a = gamma0.max(lo);
        if a >= hi {
            return Ok(0.0);
        }
        integrate_log(|g| g.powi(k) * self.pdf(g), a, hi, &opts()).checked()
    }

    /// `∫_{γ₀}^{hi} ln(γ/γ₀) f(γ) dγ`.
    fn tail_log_moment(&self, gamma0: f64) -> Result<f64> {
        let (_, hi) = self.support();
        if gamma0 >= hi {
            return Ok(0.0);
        }
        integrate_log(|g| (g / gamma0).ln() * self.pdf(g), gamma0, hi, &opts()).checked()
    }
}

/// CSNR density of a baseline model at mean CSNR `gamma_bar`.
#[derive(Debug, Clone)]
pub struct BaselineDensity {
    params: BaselineParams,
    gamma_bar: f64,
    /// Log-normal mixture: (local mean power, probability).
    mixture: Vec<(f64, f64)>,
}

impl BaselineDensity {
    pub fn new(params: BaselineParams, gamma_bar: f64) -> Result<Self> {
        params.validate()?;
        if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
            return Err(Error::Domain(format!("gamma_bar must be positive, got {gamma_bar}")));
        }
        let mixture = match params {
            BaselineParams::NakagamiLogNormal { sigma_db, .. } => {
                let s = sigma_db * LN_10 / 10.0;
                let mu = gamma_bar.ln() - 0.5 * s * s;
                let rule = gauss_hermite::<f64>(LOGNORMAL_ORDER)?;
                rule.iter()
                    .map(|(x, w)| ((mu + std::f64::consts::SQRT_2 * s * x).exp(), w / PI.sqrt()))
                    .collect()
            }
            BaselineParams::KFading { .. } => Vec::new(),
        };
        Ok(Self { params, gamma_bar, mixture })
    }

    pub fn params(&self) -> BaselineParams {
        self.params
    }
}

impl CsnrDensity for BaselineDensity {
    fn pdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        match self.params {
            BaselineParams::NakagamiLogNormal { m, .. } => {
                let lg = ln_gamma(m).unwrap_or(f64::NAN);
                let mut acc = CompensatedSum::new();
                for &(omega, p) in &self.mixture {
                    let rate = m / omega;
                    acc.add(p * (m * rate.ln() + (m - 1.0) * gamma.ln() - rate * gamma - lg).exp());
                }
                acc.value()
            }
            BaselineParams::KFading { k } => {
                let x = gamma / self.gamma_bar;
                let z = 2.0 * (k * x).sqrt();
                let kv = match bessel_kv(k - 1.0, z) {
                    Ok(v) => v,
                    Err(_) => return 0.0,
                };
                let ln_pref = 2.0_f64.ln() + 0.5 * (k + 1.0) * k.ln() - ln_gamma(k).unwrap_or(f64::NAN)
                    + 0.5 * (k - 1.0) * x.ln();
                ln_pref.exp() * kv / self.gamma_bar
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        let hi = match self.params {
            BaselineParams::NakagamiLogNormal { m, .. } => {
                let omega_max = self.mixture.iter().map(|p| p.0).fold(0.0, f64::max);
                omega_max * (80.0 + 4.0 * m) / m
            }
            // the tail decays like exp(-2√(kγ/γ̄))
            BaselineParams::KFading { k } => self.gamma_bar * 3000.0 / k,
        };
        (self.gamma_bar * 1e-14, hi)
    }
}

/// A density tabulated on a log-spaced grid and interpolated linearly in `(ln γ, ln f)`.
#[derive(Debug, Clone)]
pub struct TabulatedDensity {
    ln_lo: f64,
    step: f64,
    ln_pdf: Vec<f64>,
}

impl TabulatedDensity {
    pub fn from_density<D: CsnrDensity + ?Sized>(density: &D, points: usize) -> Result<Self> {
        let (lo, hi) = density.support();
        Self::from_fn(|g| density.pdf(g), lo, hi, points)
    }

    pub fn from_fn<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && points >= 2) {
            return Err(Error::Domain(format!("bad table range [{lo}, {hi}] with {points} points")));
        }
        let ln_lo = lo.ln();
        let step = (hi.ln() - ln_lo) / (points - 1) as f64;
        let ln_pdf = (0..points).map(|i| f((ln_lo + step * i as f64).exp()).ln()).collect();
        Ok(Self { ln_lo, step, ln_pdf })
    }
}

impl CsnrDensity for TabulatedDensity {
    fn pdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        let pos = (gamma.ln() - self.ln_lo) / self.step;
        let last = self.ln_pdf.len() - 1;
        if pos < 0.0 || pos > last as f64 {
            return 0.0;
        }
        let i = (pos.floor() as usize).min(last - 1);
        let t = pos - i as f64;
        let (a, b) = (self.ln_pdf[i], self.ln_pdf[i + 1]);
        if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
            return if t == 0.0 { a.exp() } else if t == 1.0 { b.exp() } else { 0.0 };
        }
        (a + t * (b - a)).exp()
    }

    fn support(&self) -> (f64, f64) {
        let last = self.ln_pdf.len() - 1;
        (self.ln_lo.exp(), (self.ln_lo + self.step * last as f64).exp())
    }

    fn tail_moment(&self, k: i32, gamma0: f64) -> Result<f64> {
        let shift = f64::from(k + 1);
        Ok(self.tail_sum(gamma0, |_, g1, slope, h| g1.exp() * h * phi1(slope * h), shift))
    }

    fn tail_log_moment(&self, gamma0: f64) -> Result<f64> {
        let u0 = gamma0.ln();
        Ok(self.tail_sum(
            gamma0,
            |u1, g1, slope, h| g1.exp() * h * ((u1 - u0) * phi1(slope * h) + h * phi2(slope * h)),
            1.0,
        ))
    }
}

impl TabulatedDensity {
    /// Sums `cell(u₁, g₁, s, h)` over the table cells above `γ₀`, where on each cell the
    /// integrand in `u = ln γ` is `e^{g₁ + s(u - u₁)}` with `g = ln f + shift·u`.
    fn tail_sum<C: Fn(f64, f64, f64, f64) -> f64>(&self, gamma0: f64, cell: C, shift: f64) -> f64 {
        let last = self.ln_pdf.len() - 1;
        let u_hi = self.ln_lo + self.step * last as f64;
        let u0 = gamma0.max(self.ln_lo.exp()).ln().max(self.ln_lo);
        if u0 >= u_hi {
            return 0.0;
        }
        let first = (((u0 - self.ln_lo) / self.step).floor() as usize).min(last - 1);
        let mut acc = CompensatedSum::new();
        for i in first..last {
            let (a, b) = (self.ln_pdf[i], self.ln_pdf[i + 1]);
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            let ua = self.ln_lo + self.step * i as f64;
            let slope = (b - a) / self.step + shift;
            let start = ua.max(u0);
            let g1 = a + (b - a) * (start - ua) / self.step + shift * start;
            let h = ua + self.step - start;
            if h > 0.0 {
                acc.add(cell(start, g1, slope, h));
            }
        }
        acc.value()
    }
}

/// `(eˣ - 1)/x`.
fn phi1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

/// `∫₀¹ t·e^{xt} dt = (eˣ(x - 1) + 1)/x²`.
fn phi2(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Σ xⁿ / (n!·(n + 2))
        let mut term = 1.0;
        let mut sum = 0.5;
        for n in 1..30 {
            term *= x / n as f64;
            sum += term / (n + 2) as f64;
        }
        sum
    } else {
        (x.exp() * (x - 1.0) + 1.0) / (x * x)
    }
}

fn opts() -> QuadOptions<f64> {
    QuadOptions::tolerances(1e-12, 1e-11).with_panels(32).with_max_intervals(20_000)
}

/// `∫ γᵏ f(γ) dγ` over the density's support.
pub fn moment<D: CsnrDensity + ?Sized>(density: &D, k: i32) -> Result<f64> {
    density.tail_moment(k, density.support().0)
}

/// `Var(γ)/E[γ]²` by quadrature.
pub fn amount_of_fading<D: CsnrDensity + ?Sized>(density: &D) -> Result<f64> {
    let m0 = moment(density, 0)?;
    let m1 = moment(density, 1)?;
    let m2 = moment(density, 2)?;
    Ok(m0 * m2 / (m1 * m1) - 1.0)
}

/// Amount of fading of a baseline model (independent of the mean CSNR).
pub fn baseline_amount_of_fading(params: BaselineParams) -> Result<f64> {
    amount_of_fading(&BaselineDensity::new(params, 1.0)?)
}

pub fn baseline_csnr_pdf(params: BaselineParams, gamma: f64, gamma_bar: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    Ok(BaselineDensity::new(params, gamma_bar)?.pdf(gamma))
}

/// `∫_{γ₀} (1/γ₀ - 1/γ) f(γ) dγ - 1`.
pub fn water_filling_residual<D: CsnrDensity + ?Sized>(density: &D, gamma0: f64) -> Result<f64> {
    Ok(density.tail_moment(0, gamma0)? / gamma0 - density.tail_moment(-1, gamma0)? - 1.0)
}

/// Water-filling cutoff and OPRA efficiency of any CSNR density.
pub fn opra_for_density<D: CsnrDensity + ?Sized>(density: &D) -> Result<CapacityResult<f64>> {
    let (lo, hi) = density.support();
    let f = |g: f64| water_filling_residual(density, g).unwrap_or(f64::NAN);
    // the residual decreases in γ₀; step outwards from 1 to find a sign change
    let (mut a, mut b) = (1.0_f64, 1.0_f64);
    let (mut fa, mut fb) = (f(a), f(b));
    while fa <= 0.0 && a > lo {
        b = a;
        fb = fa;
        a = (a / 4.0).max(lo);
        fa = f(a);
    }
    while fb > 0.0 && b < hi {
        a = b;
        fa = fb;
        b = (b * 4.0).min(hi);
        fb = f(b);
    }
    if !(fa > 0.0 && fb <= 0.0) {
        return Err(Error::NoRoot { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }
    let root = brent(f, a, b, Tolerance::relative(1e-13), 200)?;
    let g0 = root.root;
    let value = density.tail_log_moment(g0)? / LN_2;
    Ok(CapacityResult {
        scheme: Scheme::Opra,
        value,
        method: Method::Quadrature,
        gamma_max: Some(hi),
        gamma0: Some(g0),
        diagnostics: [
            ("cutoff_residual".to_string(), Diagnostic::Number(root.residual)),
        ]
        .into_iter()
        .collect(),
    })
}

/// OPRA for a baseline model: its density is tabulated and fed to [`opra_for_density`].
pub fn baseline_opra(params: BaselineParams, gamma_bar: f64) -> Result<CapacityResult<f64>> {
    let density = BaselineDensity::new(params, gamma_bar)?;
    let table = TabulatedDensity::from_density(&density, TABLE_POINTS)?;
    let mut out = opra_for_density(&table)?;
    out.diagnostics.insert("normalization".into(), Diagnostic::Number(moment(&table, 0)?));
    Ok(out)
}
