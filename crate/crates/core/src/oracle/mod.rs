//! Monte Carlo ground truth: an inverse-CDF sampler of the tabulated envelope law and
//! empirical capacity estimators.

mod estimate;
mod sampler;

pub use estimate::{empirical_amount_of_fading, ks_statistic, mc_capacity, McEstimate};
pub use sampler::{EnvelopeSampler, CHUNK, MIN_CELLS, NORMALIZATION_RANGE};
