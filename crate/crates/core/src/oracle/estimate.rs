use rayon::prelude::*;

use super::sampler::{substream, EnvelopeSampler, CHUNK};
use crate::capacity::Scheme;
use crate::error::{Error, Result};
use crate::roots::log_grid;
use crate::scalar::CompensatedSum;
use rand::distributions::Open01;
use rand::Rng;

const Z95: f64 = 1.959_963_984_540_054;

/// Monte Carlo estimate with a normal-approximation 95 % half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub half_width_95: f64,
    pub n: usize,
    pub seed: u64,
    /// Empirical cutoff (OPRA water level or TIFR argmax).
    pub cutoff: Option<f64>,
}

/// Mean and sample variance of `f(γ)` over `n` CSNR draws, accumulated per chunk around the
/// shift `f(γ̄)` and reduced in chunk order.
fn streamed_mean<F: Fn(f64) -> f64 + Sync>(sampler: &EnvelopeSampler, gamma_bar: f64, n: usize, seed: u64, f: F) -> (f64, f64) {
    let shift = f(gamma_bar);
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(n - c * CHUNK);
            let mut rng = substream(seed, c);
            let mut s = CompensatedSum::new();
            let mut s2 = CompensatedSum::new();
            for _ in 0..len {
                let d = f(gamma_bar * sampler.unit_csnr(rng.sample(Open01))) - shift;
                s.add(d);
                s2.add(d * d);
            }
            (s.value(), s2.value())
        })
        .collect();
    let mut s = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (a, b) in parts {
        s.add(a);
        s2.add(b);
    }
    let nf = n as f64;
    let mean_d = s.value() / nf;
    let var = if n > 1 { ((s2.value() - nf * mean_d * mean_d) / (nf - 1.0)).max(0.0) } else { 0.0 };
    (shift + mean_d, var)
}

fn half_width(var: f64, n: usize) -> f64 {
    if n > 1 {
        Z95 * (var / n as f64).sqrt()
    } else {
        f64::INFINITY
    }
}

/// Sorted CSNR draws with suffix sums of `1/γ`.
struct Empirical {
    gammas: Vec<f64>,
    /// `inv_suffix[k] = Σ_{i ≥ k} 1/γ_i`, with a trailing zero.
    inv_suffix: Vec<f64>,
}

impl Empirical {
    fn new(sampler: &EnvelopeSampler, gamma_bar: f64, n: usize, seed: u64) -> Self {
        let mut gammas = sampler.sample_csnr(gamma_bar, n, seed);
        gammas.par_sort_unstable_by(f64::total_cmp);
        let mut inv_suffix = vec![0.0; n + 1];
        let mut acc = CompensatedSum::new();
        for k in (0..n).rev() {
            acc.add(1.0 / gammas[k]);
            inv_suffix[k] = acc.value();
        }
        Self { gammas, inv_suffix }
    }

    fn first_at_least(&self, g: f64) -> usize {
        self.gammas.partition_point(|&x| x < g)
    }

    /// `(1/n)·Σ_{γ_i ≥ γ₀} (1/γ₀ - 1/γ_i) - 1`.
    fn water_filling(&self, g0: f64) -> f64 {
        let n = self.gammas.len() as f64;
        let k = self.first_at_least(g0);
        ((self.gammas.len() - k) as f64 / g0 - self.inv_suffix[k]) / n - 1.0
    }
}

/// Empirical capacity of `scheme` under the sampled law. CIFR is not estimated.
pub fn mc_capacity(sampler: &EnvelopeSampler, gamma_bar: f64, scheme: Scheme, n: usize, seed: u64) -> Result<McEstimate> {
    if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
        return Err(Error::Domain(format!("gamma_bar must be positive, got {gamma_bar}")));
    }
    if n == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    match scheme {
        Scheme::Ora => {
            let (mean, var) = streamed_mean(sampler, gamma_bar, n, seed, |g| (1.0 + g).log2());
            Ok(McEstimate { mean, half_width_95: half_width(var, n), n, seed, cutoff: None })
        }
        Scheme::Opra => mc_opra(sampler, gamma_bar, n, seed),
        Scheme::Tifr => mc_tifr(sampler, gamma_bar, n, seed),
        Scheme::Cifr => Err(Error::Domain("CIFR has no Monte Carlo estimator".into())),
    }
}

/// Empirical water-filling cutoff by bisection in `ln γ₀`.
fn empirical_cutoff(emp: &Empirical) -> Result<f64> {
    let n = emp.gammas.len() as f64;
    let mean_inv = emp.inv_suffix[0] / n;
    let mut lo = 0.5 / (1.0 + mean_inv);
    let mut hi = emp.gammas[emp.gammas.len() - 1];
    let (flo, fhi) = (emp.water_filling(lo), emp.water_filling(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(Error::NoRoot { lo, hi, f_lo: flo, f_hi: fhi });
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if emp.water_filling(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

fn mc_opra(sampler: &EnvelopeSampler, gamma_bar: f64, n: usize, seed: u64) -> Result<McEstimate> {
    let emp = Empirical::new(sampler, gamma_bar, n, seed);
    let g0 = empirical_cutoff(&emp)?;
    let k = emp.first_at_least(g0);
    let mut s = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for &g in &emp.gammas[k..] {
        let v = (g / g0).log2();
        s.add(v);
        s2.add(v * v);
    }
    let nf = n as f64;
    let mean = s.value() / nf;
    let var = if n > 1 { ((s2.value() - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    Ok(McEstimate { mean, half_width_95: half_width(var, n), n, seed, cutoff: Some(g0) })
}

fn mc_tifr(sampler: &EnvelopeSampler, gamma_bar: f64, n: usize, seed: u64) -> Result<McEstimate> {
    let emp = Empirical::new(sampler, gamma_bar, n, seed);
    let nf = n as f64;
    let mut best: Option<(f64, f64, usize)> = None;
    for g0 in log_grid(1e-3, 10.0 * gamma_bar, 200) {
        let k = emp.first_at_least(g0);
        if k == n {
            continue;
        }
        let p = (n - k) as f64 / nf;
        let m = emp.inv_suffix[k] / nf;
        let v = p * (1.0 / m).ln_1p() / std::f64::consts::LN_2;
        if best.map_or(true, |(bv, _, _)| v > bv) {
            best = Some((v, g0, k));
        }
    }
    let (value, g0, k) = best.ok_or_else(|| Error::NoCapacity("no sample above any TIFR cutoff".into()))?;
    // delta method on (P̂(γ ≥ γ₀), Ê[1/γ; γ ≥ γ₀])
    let p = (n - k) as f64 / nf;
    let m = emp.inv_suffix[k] / nf;
    let a = (1.0 / m).ln_1p() / std::f64::consts::LN_2;
    let b = -p / (std::f64::consts::LN_2 * m * (m + 1.0));
    let c = a * p + b * m;
    let mut ss = CompensatedSum::new();
    ss.add(k as f64 * c * c);
    for &g in &emp.gammas[k..] {
        let psi = a + b / g - c;
        ss.add(psi * psi);
    }
    let var = ss.value() / nf;
    Ok(McEstimate { mean: value, half_width_95: half_width(var, n), n, seed, cutoff: Some(g0) })
}

/// Kolmogorov-Smirnov distance between `n` draws and the sampler's own interpolated CDF.
pub fn ks_statistic(sampler: &EnvelopeSampler, n: usize, seed: u64) -> f64 {
    let mut xs = sampler.sample_envelope(n, seed);
    xs.par_sort_unstable_by(f64::total_cmp);
    let nf = n as f64;
    xs.par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = sampler.cdf(x);
            (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs())
        })
        .reduce(|| 0.0, f64::max)
}

/// `E[A⁴]/E[A²]² - 1` of the CSNR draws, i.e. `Var(γ)/E[γ]²`.
pub fn empirical_amount_of_fading(samples: &[f64]) -> f64 {
    let mut s = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for &g in samples {
        s.add(g);
        s2.add(g * g);
    }
    let n = samples.len() as f64;
    let m1 = s.value() / n;
    s2.value() / n / (m1 * m1) - 1.0
}
