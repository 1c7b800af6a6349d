//! Capacity of joint fading and two-path shadowing (JFTS) channels: special functions,
//! the channel model, closed-form and quadrature capacities, a Monte Carlo oracle,
//! baseline channels and the `jfts-capacity` command-line front end.

pub mod error;
pub mod scalar;
pub mod specfun;
pub mod quad;
pub mod roots;
pub mod model;
pub mod capacity;
pub mod oracle;
pub mod baselines;
pub mod cli;

pub use capacity::{CapacityResult, CutoffSolution, Method, Scheme};
pub use error::{Error, Result};
pub use model::{CsnrDensityForm, JftsModel, JftsParams};
pub use scalar::Real;

/// Double-precision model.
pub type Model = JftsModel<f64>;
/// Double-precision parameters.
pub type Params = JftsParams<f64>;
/// Single-precision model.
pub type Model32 = JftsModel<f32>;
/// Single-precision parameters.
pub type Params32 = JftsParams<f32>;
