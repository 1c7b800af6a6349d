use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos series `A_g(x)` for the shifted argument `x = z - 1`.
fn lanczos_sum<T: Real>(x: T) -> T {
    let mut a = T::c(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::c(c) / (x + T::from_count(i));
    }
    a
}

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi<T: Real>(x: T) -> T {
    let two = T::c(2.0);
    let r = x - two * (x / two).floor();
    // r in [0, 2)
    let (r, sign) = if r >= T::one() {
        (r - T::one(), -T::one())
    } else {
        (r, T::one())
    };
    let r = if r > T::c(0.5) { T::one() - r } else { r };
    sign * (T::PI() * r).sin()
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.floor()
}

/// Euler Gamma function.
///
/// Lanczos approximation (g = 7, nine terms) for `x ≥ 1/2`, reflection below.
pub fn gamma_at<T: Real>(x: T) -> Result<T> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x.as_f64()));
    }
    if x > T::c(171.6) {
        return Err(Error::Range(format!("gamma({x}) overflows")));
    }
    if x < T::c(0.5) {
        let s = sin_pi(x);
        let g = gamma_at(T::one() - x)?;
        return Ok(T::PI() / (s * g));
    }
    let z = x - T::one();
    let t = z + T::c(LANCZOS_G + 0.5);
    let half = (z + T::c(0.5)) / T::c(2.0);
    // t^(z+1/2) split in two halves so that large arguments do not overflow early
    let p = t.powf(half);
    Ok(T::c((2.0 * std::f64::consts::PI).sqrt()) * p * (p * (-t).exp()) * lanczos_sum(z))
}

/// Natural log of `|Γ(x)|` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < T::c(0.5) {
        // Γ(x) = Γ(x+1)/x
        return Ok(ln_gamma(x + T::one())? - x.ln());
    }
    let z = x - T::one();
    let t = z + T::c(LANCZOS_G + 0.5);
    Ok(T::c(0.5 * (2.0 * std::f64::consts::PI).ln()) + (z + T::c(0.5)) * t.ln() - t
        + lanczos_sum(z).ln())
}
