use std::collections::BTreeSet;

use crate::baselines::BaselineParams;
use crate::capacity::Scheme;
use crate::error::{Error, Result};
use crate::model::JftsParams;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GAMMA_MAX_MULT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepParams {
    Jfts(JftsParams<f64>),
    Baseline(BaselineParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub n: usize,
    pub seed: u64,
}

/// One curve of a figure: a mean-CSNR axis in dB, a channel and the schemes to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub from_db: f64,
    pub to_db: f64,
    pub step_db: f64,
    pub params: SweepParams,
    pub schemes: BTreeSet<Scheme>,
    /// Quadrature truncation as a multiple of the mean CSNR.
    pub gamma_max_mult: f64,
    pub mc: Option<McSpec>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_db > 0.0 && self.step_db.is_finite()) {
            return Err(Error::Domain(format!("step must be positive, got {}", self.step_db)));
        }
        if !(self.to_db >= self.from_db) {
            return Err(Error::Domain(format!("empty range [{}, {}]", self.from_db, self.to_db)));
        }
        if !(self.gamma_max_mult >= 10.0) {
            return Err(Error::Domain(format!("gamma_max_mult must be at least 10, got {}", self.gamma_max_mult)));
        }
        if matches!(self.mc, Some(McSpec { n: 0, .. })) {
            return Err(Error::Domain("Monte Carlo sample count must be positive".into()));
        }
        Ok(())
    }

    /// Axis points `from + i·step` up to `to` inclusive (with a small slack for rounding).
    pub fn gamma_bar_db(&self) -> Vec<f64> {
        let count = ((self.to_db - self.from_db) / self.step_db + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.from_db + self.step_db * i as f64).collect()
    }
}
