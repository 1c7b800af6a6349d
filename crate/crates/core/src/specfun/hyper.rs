use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real, EULER_MASCHERONI};

const ARG_GUARD: f64 = 500.0;
const SERIES_FLOOR: f64 = -20.0;

/// `₃F₃(1,1,1; 2,2,2; z) = Σₙ zⁿ / (n! (n+1)³)`.
///
/// The ascending series is summed with compensation for `z ≥ -20`. Below that the
/// alternating series cancels badly, so the identity
/// `z·F(z) = -∫₀^{-z} Ein(s)/s ds` is used together with
/// `∫₀^∞ (Ein(s)/s - [s>1](ln s + γ)/s) ds = π²/12 + γ²/2` and an asymptotic tail.
pub fn hyp3f3_unit<T: Real>(z: T) -> Result<T> {
    if z.is_nan() {
        return Err(Error::Domain("3F3 of NaN".into()));
    }
    if z.abs() > T::c(ARG_GUARD) {
        return Err(Error::Range(format!("3F3 argument {z} beyond |z| ≤ {ARG_GUARD}")));
    }
    if z >= T::c(SERIES_FLOOR) {
        Ok(series(z))
    } else {
        Ok(large_negative(-z))
    }
}

fn series<T: Real>(z: T) -> T {
    let mut sum = CompensatedSum::new();
    let mut term = T::one();
    sum.add(term);
    let cutoff = T::c(1e-16);
    for n in 0..10_000usize {
        // t_{n+1} = t_n · z/(n+1) · ((n+1)/(n+2))³
        let a = T::from_count(n + 1);
        let b = T::from_count(n + 2);
        let r = a / b;
        term = term * z / a * r * r * r;
        sum.add(term);
        let past_peak = T::from_count(n) > z.abs();
        if past_peak && (term / sum.value()).abs() < cutoff {
            break;
        }
    }
    sum.value()
}

fn large_negative<T: Real>(x: T) -> T {
    let g = T::c(EULER_MASCHERONI);
    let lx = x.ln();
    let c0 = T::PI() * T::PI() / T::c(12.0) + g * g / T::c(2.0);
    // ∫_x^∞ E1(s)/s ds ~ e^{-x}/x² Σ (-1)^k s(k+2,2)/x^k
    let coeffs = [1.0, -3.0, 11.0, -50.0, 274.0, -1764.0];
    let mut tail_poly = T::zero();
    let inv = T::one() / x;
    for &c in coeffs.iter().rev() {
        tail_poly = tail_poly * inv + T::c(c);
    }
    let tail = (-x).exp() * inv * inv * tail_poly;
    (lx * lx / T::c(2.0) + g * lx + c0 - tail) / x
}
