use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

const MAX_ITER: usize = 10_000;
const I0_SERIES_LIMIT: f64 = 30.0;
const I0_OVERFLOW_GUARD: f64 = 700.0;

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0<T: Real>(x: T) -> Result<T> {
    let ax = x.abs();
    if ax.is_nan() {
        return Err(Error::Domain("I0 of NaN".into()));
    }
    if ax > T::c(I0_OVERFLOW_GUARD) {
        return Err(Error::Range(format!("I0({x}) exceeds overflow guard")));
    }
    if ax <= T::c(I0_SERIES_LIMIT) {
        Ok(i0_series(ax))
    } else {
        Ok(i0_asymptotic_scaled(ax) * ax.exp())
    }
}

/// `e^{-|x|}·I₀(x)`; finite for every real argument.
pub fn bessel_i0_scaled<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax <= T::c(I0_SERIES_LIMIT) {
        i0_series(ax) * (-ax).exp()
    } else {
        i0_asymptotic_scaled(ax)
    }
}

/// `ln I₀(x)`; finite for every real argument.
pub fn ln_bessel_i0<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax <= T::c(I0_SERIES_LIMIT) {
        i0_series(ax).ln()
    } else {
        ax + i0_asymptotic_scaled(ax).ln()
    }
}

fn i0_series<T: Real>(x: T) -> T {
    let q = x * x / T::c(4.0);
    let mut term = T::one();
    let mut sum = CompensatedSum::new();
    sum.add(term);
    for k in 1..MAX_ITER {
        let kf = T::from_count(k);
        term = term * q / (kf * kf);
        sum.add(term);
        if term < sum.value() * T::epsilon() * T::c(0.25) {
            break;
        }
    }
    sum.value()
}

fn i0_asymptotic_scaled<T: Real>(x: T) -> T {
    // e^{-x} I0(x) ~ 1/√(2πx) Σ ((2k-1)!!)² / (k! (8x)^k)
    let eight_x = T::c(8.0) * x;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..200 {
        let odd = T::from_count(2 * k - 1);
        let next = term * odd * odd / (T::from_count(k) * eight_x);
        if next >= term {
            break;
        }
        term = next;
        sum = sum + term;
        if term < sum * T::epsilon() {
            break;
        }
    }
    sum / (T::c(2.0) * T::PI() * x).sqrt()
}

// Taylor coefficients of 1/Γ(z) = Σ_{k≥1} c_k z^k.
const RECIP_GAMMA: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary gamma combinations for |mu| ≤ 1/2:
/// (gam1, gam2, 1/Γ(1+mu), 1/Γ(1-mu)).
fn temme_gammas<T: Real>(mu: T) -> (T, T, T, T) {
    let mut gam1 = T::zero();
    let mut gam2 = T::zero();
    // Horner in mu²: gam1 collects the even-index coefficients, gam2 the odd ones
    let mu2 = mu * mu;
    for k in (1..=RECIP_GAMMA.len()).rev() {
        let c = T::c(RECIP_GAMMA[k - 1]);
        if k % 2 == 0 {
            // contributes -c_k mu^{k-2}
            gam1 = gam1 * mu2 - c;
        } else {
            gam2 = gam2 * mu2 + c;
        }
    }
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    (gam1, gam2, gampl, gammi)
}

/// Modified Bessel function of the second kind `K_ν(x)` for real order and `x > 0`.
///
/// Temme's series for `x < 2`, Steed's continued fraction otherwise, then forward
/// recurrence in the order.
pub fn bessel_kv<T: Real>(nu: T, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("K_nu requires x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("K_nu requires finite order, got {nu}")));
    }
    let nu = nu.abs();
    let eps = T::epsilon();
    let half = T::c(0.5);
    let two = T::c(2.0);
    let nl = (nu + half).floor();
    let n_steps = nl.to_usize().unwrap_or(0);
    let mu = nu - nl;
    let mu2 = mu * mu;
    let xi = T::one() / x;
    let xi2 = two * xi;

    let (mut k_mu, mut k_mu1);
    if x < two {
        let x2 = half * x;
        let pimu = T::PI() * mu;
        let fact = if pimu.abs() < eps { T::one() } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < eps { T::one() } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = half * ee / gampl;
        let mut q = half / (ee * gammi);
        let mut c = T::one();
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = T::from_count(i);
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c = c * dd / fi;
            p = p / (fi - mu);
            q = q / (fi + mu);
            let del = c * ff;
            sum = sum + del;
            let del1 = c * (p - fi * ff);
            sum1 = sum1 + del1;
            if del.abs() < sum.abs() * eps {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!("Temme series for K at {x} did not converge")));
        }
        k_mu = sum;
        k_mu1 = sum1 * xi2;
    } else {
        let mut b = two * (T::one() + x);
        let mut d = T::one() / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = T::zero();
        let mut q2 = T::one();
        let a1 = T::c(0.25) - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = T::one() + q * delh;
        let mut converged = false;
        for i in 2..MAX_ITER {
            a = a - T::from_count(2 * (i - 1));
            c = -a * c / T::from_count(i);
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q = q + c * qnew;
            b = b + two;
            d = T::one() / (b + a * d);
            delh = (b * d - T::one()) * delh;
            h = h + delh;
            let dels = q * delh;
            s = s + dels;
            if (dels / s).abs() < eps {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!("Steed fraction for K at {x} did not converge")));
        }
        h = a1 * h;
        k_mu = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
        k_mu1 = k_mu * (mu + x + half - h) * xi;
    }
    for i in 1..=n_steps {
        let next = (mu + T::from_count(i)) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    Ok(k_mu)
}
