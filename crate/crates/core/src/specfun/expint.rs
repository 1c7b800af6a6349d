use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real, EULER_MASCHERONI};

const MAX_ITER: usize = 500;

/// Exponential integral `E₁(z)` for `z > 0`.
///
/// Power series for `z ≤ 1`, modified Lentz continued fraction above.
pub fn expint_e1<T: Real>(z: T) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::Domain(format!("E1 requires z > 0, got {z}")));
    }
    if z <= T::one() {
        e1_series(z)
    } else {
        Ok(e1_scaled_cf(z)? * (-z).exp())
    }
}

/// `eᶻ·E₁(z)` for `z > 1`; stays finite where `E₁` underflows.
fn e1_scaled_cf<T: Real>(z: T) -> Result<T> {
    let tiny = T::min_positive_value() / T::epsilon();
    let eps = T::epsilon();
    let two = T::c(2.0);
    let mut b = z + T::one();
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let a = -T::from_count(i * i);
        b = b + two;
        d = T::one() / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h = h * del;
        if (del - T::one()).abs() < eps {
            return Ok(h);
        }
    }
    Err(Error::Numeric(format!("E1 continued fraction at {z} did not converge")))
}

fn e1_series<T: Real>(z: T) -> Result<T> {
    // E1(z) = -γ - ln z - Σ (-z)^k / (k·k!)
    let mut sum = CompensatedSum::new();
    let mut fact = T::one();
    for k in 1..=MAX_ITER {
        let kf = T::from_count(k);
        fact = fact * (-z) / kf;
        let term = fact / kf;
        sum.add(term);
        if term.abs() < sum.value().abs() * T::epsilon() * T::c(0.25) {
            return Ok(-T::c(EULER_MASCHERONI) - z.ln() - sum.value());
        }
    }
    Err(Error::Numeric(format!("E1 series at {z} did not converge")))
}

/// `eᶻ·E₁(z)` for `z > 0`.
pub fn expint_e1_scaled<T: Real>(z: T) -> Result<T> {
    if !(z > T::zero()) {
        return Err(Error::Domain(format!("E1 requires z > 0, got {z}")));
    }
    if z <= T::one() {
        Ok(e1_series(z)? * z.exp())
    } else {
        e1_scaled_cf(z)
    }
}

/// Principal-value exponential integral `Ei(x)`.
///
/// For `x < 0` this is `-E₁(-x)`. Positive arguments use the ascending series up to 40
/// and the asymptotic expansion beyond.
pub fn expint_ei<T: Real>(x: T) -> Result<T> {
    if x.is_nan() {
        return Err(Error::Domain("Ei of NaN".into()));
    }
    if x == T::zero() {
        return Err(Error::Pole(0.0));
    }
    if x < T::zero() {
        return Ok(-expint_e1(-x)?);
    }
    if x <= T::c(40.0) {
        let mut sum = CompensatedSum::new();
        let mut fact = T::one();
        for k in 1..=MAX_ITER {
            let kf = T::from_count(k);
            fact = fact * x / kf;
            let term = fact / kf;
            sum.add(term);
            if term < sum.value() * T::epsilon() * T::c(0.25) {
                return Ok(T::c(EULER_MASCHERONI) + x.ln() + sum.value());
            }
        }
        return Err(Error::Numeric(format!("Ei series at {x} did not converge")));
    }
    // Ei(x) ~ eˣ/x Σ k!/xᵏ
    let mut sum = T::one();
    let mut term = T::one();
    for k in 1..MAX_ITER {
        let next = term * T::from_count(k) / x;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum = sum + term;
        if term < T::epsilon() * sum {
            break;
        }
    }
    Ok(x.exp() / x * sum)
}
