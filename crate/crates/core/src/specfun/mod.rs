//! Special functions and Gauss-Hermite rules used throughout the channel formulas.

mod bessel;
mod expint;
mod gamma;
mod hermite;
mod hyper;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_kv, ln_bessel_i0};
pub use expint::{expint_e1, expint_e1_scaled, expint_ei};
pub use gamma::{gamma_at, ln_gamma};
pub use hermite::{gauss_hermite, hermite_h, QuadratureRule, MAX_ORDER as MAX_HERMITE_ORDER};
pub use hyper::hyp3f3_unit;
