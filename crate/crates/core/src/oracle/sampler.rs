use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::JftsModel;
use crate::quad::kronrod21_rule;

/// Accepted range for the raw envelope normalization.
pub const NORMALIZATION_RANGE: (f64, f64) = (0.9, 1.1);
/// Minimum number of table cells.
pub const MIN_CELLS: usize = 4096;
/// Samples drawn per RNG substream.
pub const CHUNK: usize = 1 << 16;

const TAIL_MASS: f64 = 1e-12;
const COARSE_CELLS: usize = 1024;

#[derive(Debug, Clone)]
enum Table {
    Cdf {
        grid: Vec<f64>,
        cdf: Vec<f64>,
        /// CDF slopes at the left and right end of each cell, limited for monotonicity.
        slopes: Vec<(f64, f64)>,
    },
    PointMass(f64),
}

/// Inverse-CDF sampler of an envelope law tabulated on an adaptive grid and inverted with
/// a monotone cubic Hermite interpolant.
#[derive(Debug, Clone)]
pub struct EnvelopeSampler {
    table: Table,
    normalization: f64,
    mean_square: f64,
}

impl EnvelopeSampler {
    /// Tabulates the envelope density of `model`. Fails with a model error when its raw
    /// integral is outside [`NORMALIZATION_RANGE`].
    pub fn build(model: &JftsModel<f64>) -> Result<Self> {
        let (lo, hi) = NORMALIZATION_RANGE;
        // cheap quadrature check first; the table is only built for plausible densities
        if let Ok(moments) = model.envelope_moments() {
            let raw = moments.normalization();
            if !(raw >= lo && raw <= hi) {
                return Err(Error::Model {
                    reason: format!("envelope density integrates to {raw:e}, outside [{lo}, {hi}]"),
                    normalization: raw,
                });
            }
        }
        let scale = model.ln_envelope_scale();
        let density = |a: f64| {
            if a <= 0.0 {
                0.0
            } else {
                (model.ln_envelope_pdf(a).unwrap_or(f64::NEG_INFINITY) - scale).exp()
            }
        };
        let mut sampler = Self::from_density(density, model.envelope_support())?;
        let raw = sampler.normalization * scale.exp();
        sampler.normalization = raw;
        if !(raw >= lo && raw <= hi) {
            return Err(Error::Model {
                reason: format!("envelope density integrates to {raw:e}, outside [{lo}, {hi}]"),
                normalization: raw,
            });
        }
        Ok(sampler)
    }

    /// Tabulates an arbitrary nonnegative envelope density supported on `[0, upper]`. The
    /// stored normalization is the raw integral; no range check is applied.
    pub fn from_density<F: Fn(f64) -> f64 + Sync>(density: F, upper: f64) -> Result<Self> {
        if !(upper > 0.0 && upper.is_finite()) {
            return Err(Error::Domain(format!("support bound must be positive, got {upper}")));
        }
        let coarse = cells(&density, &uniform(0.0, upper, COARSE_CELLS));
        let total: f64 = coarse.iter().map(|c| c.mass).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Model {
                reason: "envelope density has no finite positive mass".into(),
                normalization: total,
            });
        }
        // trim the far tail
        let mut tail = 0.0;
        let mut alpha_hi = upper;
        for c in coarse.iter().rev() {
            if tail + c.mass >= TAIL_MASS * total {
                alpha_hi = c.b;
                break;
            }
            tail += c.mass;
        }

        let mut table = cells(&density, &uniform(0.0, alpha_hi, MIN_CELLS));
        for _ in 0..6 {
            let total: f64 = table.iter().map(|c| c.mass).sum();
            let limit = 2.0 * total / MIN_CELLS as f64;
            if table.iter().all(|c| c.mass <= limit) {
                break;
            }
            let mut refined = Vec::with_capacity(table.len() * 2);
            for c in table {
                if c.mass > limit {
                    let mid = 0.5 * (c.a + c.b);
                    refined.extend(cells(&density, &[c.a, mid, c.b]));
                } else {
                    refined.push(c);
                }
            }
            table = refined;
        }
        let total: f64 = table.iter().map(|c| c.mass).sum();
        let mean_square = table.iter().map(|c| c.second).sum::<f64>() / total;

        let mut grid = Vec::with_capacity(table.len() + 1);
        let mut cdf = Vec::with_capacity(table.len() + 1);
        grid.push(table[0].a);
        cdf.push(0.0);
        let mut acc = 0.0;
        for c in &table {
            acc += c.mass;
            grid.push(c.b);
            cdf.push(acc / total);
        }
        *cdf.last_mut().unwrap() = 1.0;
        let node_density: Vec<f64> = grid.iter().map(|&a| density(a) / total).collect();
        let slopes = (0..table.len())
            .map(|k| {
                let h = grid[k + 1] - grid[k];
                let secant = (cdf[k + 1] - cdf[k]) / h;
                limit_slopes(secant, node_density[k], node_density[k + 1])
            })
            .collect();
        Ok(Self { table: Table::Cdf { grid, cdf, slopes }, normalization: total, mean_square })
    }

    /// Degenerate law `A = alpha` (no fading).
    pub fn point_mass(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("point mass location must be positive, got {alpha}")));
        }
        Ok(Self { table: Table::PointMass(alpha), normalization: 1.0, mean_square: alpha * alpha })
    }

    /// Raw integral of the density that was tabulated.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `E[A²]` of the tabulated law; the CSNR mapping divides by it.
    pub fn mean_square(&self) -> f64 {
        self.mean_square
    }

    pub fn grid(&self) -> &[f64] {
        match &self.table {
            Table::Cdf { grid, .. } => grid,
            Table::PointMass(a) => std::slice::from_ref(a),
        }
    }

    pub fn cdf_values(&self) -> &[f64] {
        match &self.table {
            Table::Cdf { cdf, .. } => cdf,
            Table::PointMass(_) => &[1.0],
        }
    }

    /// Interpolated CDF.
    pub fn cdf(&self, alpha: f64) -> f64 {
        match &self.table {
            Table::PointMass(a) => {
                if alpha >= *a {
                    1.0
                } else {
                    0.0
                }
            }
            Table::Cdf { grid, cdf, slopes } => {
                if alpha <= grid[0] {
                    return 0.0;
                }
                if alpha >= grid[grid.len() - 1] {
                    return 1.0;
                }
                let k = grid.partition_point(|&x| x <= alpha) - 1;
                let h = grid[k + 1] - grid[k];
                hermite(cdf[k], cdf[k + 1], slopes[k].0 * h, slopes[k].1 * h, (alpha - grid[k]) / h)
            }
        }
    }

    /// Inverse of [`cdf`](Self::cdf) for `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match &self.table {
            Table::PointMass(a) => *a,
            Table::Cdf { grid, cdf, slopes } => {
                let last = grid.len() - 1;
                let k = cdf.partition_point(|&c| c < u).clamp(1, last) - 1;
                let (f0, f1) = (cdf[k], cdf[k + 1]);
                let h = grid[k + 1] - grid[k];
                let (d0, d1) = (slopes[k].0 * h, slopes[k].1 * h);
                let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
                let mut t = if f1 > f0 { ((u - f0) / (f1 - f0)).clamp(0.0, 1.0) } else { 0.5 };
                for _ in 0..60 {
                    let r = hermite(f0, f1, d0, d1, t) - u;
                    if r == 0.0 || hi - lo < 1e-15 {
                        break;
                    }
                    if r > 0.0 {
                        hi = t;
                    } else {
                        lo = t;
                    }
                    let dr = hermite_slope(f0, f1, d0, d1, t);
                    let newton = t - r / dr;
                    t = if dr > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
                }
                grid[k] + t * h
            }
        }
    }

    /// `n` envelope draws. Substream `c` of `ChaCha8(seed)` generates samples
    /// `c·CHUNK .. (c+1)·CHUNK`, so the output does not depend on the worker count.
    pub fn sample_envelope(&self, n: usize, seed: u64) -> Vec<f64> {
        chunked(n, seed, |u| self.quantile(u))
    }

    /// `n` CSNR draws `γ = γ̄·A²/E[A²]`.
    pub fn sample_csnr(&self, gamma_bar: f64, n: usize, seed: u64) -> Vec<f64> {
        chunked(n, seed, |u| gamma_bar * self.unit_csnr(u))
    }

    pub(crate) fn unit_csnr(&self, u: f64) -> f64 {
        let a = self.quantile(u);
        a * a / self.mean_square
    }
}

/// Runs `f` on `n` uniform `(0, 1)` variates drawn from per-chunk substreams and returns the
/// results in sample order.
pub(crate) fn chunked<F: Fn(f64) -> f64 + Sync>(n: usize, seed: u64, f: F) -> Vec<f64> {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK.min(n - c * CHUNK);
            let mut rng = substream(seed, c);
            (0..len).map(|_| f(rng.sample(Open01))).collect()
        })
        .collect();
    parts.concat()
}

pub(crate) fn substream(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

fn uniform(lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let h = (hi - lo) / cells as f64;
    let mut g: Vec<f64> = (0..cells).map(|i| lo + h * i as f64).collect();
    g.push(hi);
    g
}

struct Cell {
    a: f64,
    b: f64,
    mass: f64,
    second: f64,
}

/// Zeroth and second moments of each cell by one 21-point Kronrod rule.
fn cells<F: Fn(f64) -> f64 + Sync>(density: &F, grid: &[f64]) -> Vec<Cell> {
    grid.par_windows(2)
        .map(|w| {
            let (mut mass, mut second) = (0.0, 0.0);
            for (x, wt) in kronrod21_rule(w[0], w[1]) {
                let f = density(x);
                mass += wt * f;
                second += wt * x * x * f;
            }
            Cell { a: w[0], b: w[1], mass: mass.max(0.0), second: second.max(0.0) }
        })
        .collect()
}

/// Fritsch-Carlson limiting of endpoint slopes against the cell secant.
fn limit_slopes(secant: f64, d0: f64, d1: f64) -> (f64, f64) {
    if secant <= 0.0 {
        return (0.0, 0.0);
    }
    let (a, b) = (d0.max(0.0) / secant, d1.max(0.0) / secant);
    let r = a * a + b * b;
    if r > 9.0 {
        let tau = 3.0 / r.sqrt();
        (tau * a * secant, tau * b * secant)
    } else {
        (d0.max(0.0), d1.max(0.0))
    }
}

fn hermite(f0: f64, f1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * d1
}

fn hermite_slope(f0: f64, f1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * (f0 - f1) + (3.0 * t2 - 4.0 * t + 1.0) * d0 + (3.0 * t2 - 2.0 * t) * d1
}
