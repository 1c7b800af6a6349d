//! The joint fading and two-path shadowing (JFTS) law: envelope density, mean-square
//! envelope, CSNR densities, the aggregate constant 𝔅 and outage probability.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::scalar::{db_to_linear, linear_to_db, log_sum_exp, Real};
use crate::specfun::{bessel_i0, expint_ei, gauss_hermite, ln_bessel_i0, QuadratureRule};

/// Fourth-order TWDP weights `a_i`.
pub const TWDP_WEIGHTS: [f64; 4] = [751.0 / 17280.0, 3577.0 / 17280.0, 49.0 / 640.0, 2989.0 / 17280.0];

/// Default Gauss-Hermite order of the envelope approximation.
pub const DEFAULT_QUAD_ORDER: usize = 20;

/// `𝖬_i = cos((i-1)π/7)` for `i = 1..4`.
pub fn twdp_cosines<T: Real>() -> [T; 4] {
    let mut out = [T::zero(); 4];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = (T::from_count(i) * T::PI() / T::c(7.0)).cos();
    }
    out
}

/// Channel parameter bundle. All quantities are linear (not dB).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JftsParams<T = f64> {
    k_fading: T,
    s_shadow: T,
    delta: T,
    p1: T,
    p2: T,
    quad_order: usize,
}

impl<T: Real> JftsParams<T> {
    pub fn new(k_fading: T, s_shadow: T, delta: T, p1: T, p2: T, quad_order: usize) -> Result<Self> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("K", k_fading)?;
        positive("S_h", s_shadow)?;
        positive("P1", p1)?;
        positive("P2", p2)?;
        if !(delta >= T::zero() && delta <= T::one()) {
            return Err(Error::Domain(format!("delta must lie in [0, 1], got {delta}")));
        }
        if quad_order == 0 || quad_order > crate::specfun::MAX_HERMITE_ORDER {
            return Err(Error::Domain(format!("quadrature order {quad_order} out of range")));
        }
        Ok(Self { k_fading, s_shadow, delta, p1, p2, quad_order })
    }

    /// K and S_h in dB, unit powers, order 20.
    pub fn from_db(k_db: T, s_db: T, delta: T) -> Result<Self> {
        Self::new(db_to_linear(k_db), db_to_linear(s_db), delta, T::one(), T::one(), DEFAULT_QUAD_ORDER)
    }

    pub fn with_powers(self, p1: T, p2: T) -> Result<Self> {
        Self::new(self.k_fading, self.s_shadow, self.delta, p1, p2, self.quad_order)
    }

    pub fn with_quad_order(self, quad_order: usize) -> Result<Self> {
        Self::new(self.k_fading, self.s_shadow, self.delta, self.p1, self.p2, quad_order)
    }

    pub fn k_fading(&self) -> T {
        self.k_fading
    }

    pub fn s_shadow(&self) -> T {
        self.s_shadow
    }

    pub fn k_db(&self) -> T {
        linear_to_db(self.k_fading)
    }

    pub fn s_db(&self) -> T {
        linear_to_db(self.s_shadow)
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn p1(&self) -> T {
        self.p1
    }

    pub fn p2(&self) -> T {
        self.p2
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }
}

/// Which printed CSNR density to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsnrDensityForm {
    /// `Σ_h [Ω_A/(2γP₂r_h²)]·[1 - e^{-Ω_Aγ/(2γ̄P₂r_h²)}]`
    PerNodeSum,
    /// `(𝔅/γ)(1 - e^{-𝔅γ/γ̄})`, the form every capacity integral is built on.
    Aggregated,
}

/// Outage probability as printed, unclamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outage<T> {
    pub value: T,
    /// False when the printed expression leaves `[0, 1]`.
    pub in_unit_interval: bool,
}

/// Raw moments `∫ αᵏ f(α) dα` of a (possibly unnormalized) envelope density, stored as
/// `m_k · e^{ln_scale}` so that astronomically large densities stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeMoments<T> {
    pub ln_scale: T,
    pub m0: T,
    pub m2: T,
    pub m4: T,
}

impl<T: Real> EnvelopeMoments<T> {
    /// `∫ f(α) dα`; overflows to infinity for wildly unnormalized densities.
    pub fn normalization(&self) -> T {
        self.m0 * self.ln_scale.exp()
    }

    pub fn ln_normalization(&self) -> T {
        self.m0.ln() + self.ln_scale
    }

    /// `∫ α² f(α) dα` without renormalization.
    pub fn second_moment(&self) -> T {
        self.m2 * self.ln_scale.exp()
    }

    pub fn ln_second_moment(&self) -> T {
        self.m2.ln() + self.ln_scale
    }

    /// `E[A²]` of the renormalized law.
    pub fn normalized_second_moment(&self) -> T {
        self.m2 / self.m0
    }

    /// `E[A⁴]/E[A²]² - 1` of the renormalized law.
    pub fn amount_of_fading(&self) -> T {
        self.m0 * self.m4 / (self.m2 * self.m2) - T::one()
    }
}

/// One summand of the envelope density: `exp(ln_weight + ln α - α²·inv_two_var) · I₀(bessel·α)`.
#[derive(Debug, Clone, Copy)]
struct EnvelopeTerm<T> {
    ln_weight: T,
    inv_two_var: T,
    bessel: T,
    /// Index into the model's distinct Bessel coefficients.
    group: usize,
    var: T,
}

impl<T: Real> EnvelopeTerm<T> {
    fn ln_value(&self, alpha: T, ln_alpha: T, ln_i0: &[T]) -> T {
        self.ln_weight + ln_alpha - alpha * alpha * self.inv_two_var + ln_i0[self.group]
    }

    /// `ln ∫₀^∞ term dα = ln_weight + ln(var) + bessel²·var/2`.
    fn ln_mass(&self) -> T {
        self.ln_weight + self.var.ln() + self.bessel * self.bessel * self.var / T::c(2.0)
    }

    /// Location of the maximum of `α·e^{-α²/(2v) + cα}`.
    fn peak(&self) -> T {
        let cv = self.bessel * self.var;
        (cv + (cv * cv + T::c(4.0) * self.var).sqrt()) / T::c(2.0)
    }
}

/// A parameter set together with its cached quadrature rule, `Ω_A` and `𝔅`.
///
/// Construction is the only fallible step for odd quadrature orders (the envelope
/// density divides by `|r_h|`).
#[derive(Debug, Clone)]
pub struct JftsModel<T = f64> {
    params: JftsParams<T>,
    rule: QuadratureRule<T>,
    omega_a: T,
    b_aggregate: T,
    terms: Vec<EnvelopeTerm<T>>,
    bessel_coefficients: [T; 8],
}

impl<T: Real> JftsModel<T> {
    pub fn new(params: JftsParams<T>) -> Result<Self> {
        let rule = gauss_hermite::<T>(params.quad_order)?;
        if rule.has_zero_node() {
            return Err(Error::Configuration(format!(
                "quadrature order {} has a node at zero; the envelope density divides by |r_h|",
                params.quad_order
            )));
        }
        let omega_a = omega_a_closed_form(&params, &rule)?;
        let b_aggregate = rule
            .nodes()
            .iter()
            .map(|&r| omega_a / (T::c(2.0) * params.p2 * r * r))
            .sum();
        let terms = envelope_terms(&params, &rule)?;
        let mut bessel_coefficients = [T::zero(); 8];
        for t in &terms {
            bessel_coefficients[t.group] = t.bessel;
        }
        Ok(Self { params, rule, omega_a, b_aggregate, terms, bessel_coefficients })
    }

    pub fn params(&self) -> &JftsParams<T> {
        &self.params
    }

    pub fn rule(&self) -> &QuadratureRule<T> {
        &self.rule
    }

    /// Mean-square envelope `Ω_A` from its closed form.
    pub fn omega_a(&self) -> T {
        self.omega_a
    }

    /// `𝔅 = Σ_h Ω_A / (2P₂r_h²)`.
    pub fn b_aggregate(&self) -> T {
        self.b_aggregate
    }

    /// Natural log of the envelope density.
    pub fn ln_envelope_pdf(&self, alpha: T) -> Result<T> {
        if !(alpha >= T::zero()) {
            return Err(Error::Domain(format!("envelope must be nonnegative, got {alpha}")));
        }
        if alpha == T::zero() {
            return Ok(T::neg_infinity());
        }
        let ln_alpha = alpha.ln();
        let mut ln_i0 = [T::zero(); 8];
        for (slot, &c) in ln_i0.iter_mut().zip(&self.bessel_coefficients) {
            *slot = ln_bessel_i0(c * alpha);
        }
        let logs: Vec<T> = self.terms.iter().map(|t| t.ln_value(alpha, ln_alpha, &ln_i0)).collect();
        Ok(log_sum_exp(&logs))
    }

    /// Envelope density `f_A(α)`. May overflow to `+∞` where the printed density does.
    pub fn envelope_pdf(&self, alpha: T) -> Result<T> {
        Ok(self.ln_envelope_pdf(alpha)?.exp())
    }

    /// Log of the largest per-term mass; a natural scale for the density.
    pub fn ln_envelope_scale(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.ln_mass())
            .fold(T::neg_infinity(), |a, b| a.max(b))
    }

    /// Envelope value beyond which every non-negligible summand has decayed by `e^{-800}`.
    pub fn envelope_support(&self) -> T {
        let top = self.ln_envelope_scale();
        self.terms
            .iter()
            .filter(|t| t.ln_mass() > top - T::c(60.0))
            .map(|t| t.peak() + T::c(40.0) * t.var.sqrt())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Raw moments of orders 0, 2 and 4 of the printed envelope density by adaptive
    /// quadrature.
    pub fn envelope_moments(&self) -> Result<EnvelopeMoments<T>> {
        let scale = self.ln_envelope_scale();
        let upper = self.envelope_support();
        let density = |a: T| {
            if a <= T::zero() {
                T::zero()
            } else {
                (self.ln_envelope_pdf(a).unwrap_or(T::neg_infinity()) - scale).exp()
            }
        };
        let (m0, m2, m4) = raw_moments(density, upper)?;
        Ok(EnvelopeMoments { ln_scale: scale, m0, m2, m4 })
    }

    /// Amount of fading `E[A⁴]/E[A²]² - 1` of the (renormalized) envelope law.
    pub fn amount_of_fading(&self) -> Result<T> {
        Ok(self.envelope_moments()?.amount_of_fading())
    }

    /// Instantaneous CSNR density in either printed form.
    pub fn csnr_pdf(&self, form: CsnrDensityForm, gamma: T, gamma_bar: T) -> Result<T> {
        check_positive("gamma", gamma)?;
        check_positive("gamma_bar", gamma_bar)?;
        Ok(match form {
            CsnrDensityForm::Aggregated => aggregated_density(self.b_aggregate, gamma, gamma_bar),
            CsnrDensityForm::PerNodeSum => self
                .rule
                .nodes()
                .iter()
                .map(|&r| {
                    let c = self.omega_a / (T::c(2.0) * self.params.p2 * r * r);
                    c / gamma * -(-c * gamma / gamma_bar).exp_m1()
                })
                .sum(),
        })
    }

    /// `P_out = 𝔅·ln γ₀ - 𝔅·Ei(-𝔅γ₀/γ̄)`, unclamped.
    pub fn outage_probability(&self, gamma0: T, gamma_bar: T) -> Result<Outage<T>> {
        check_positive("gamma0", gamma0)?;
        check_positive("gamma_bar", gamma_bar)?;
        let b = self.b_aggregate;
        let value = b * gamma0.ln() - b * expint_ei(-b * gamma0 / gamma_bar)?;
        Ok(Outage {
            value,
            in_unit_interval: value >= T::zero() && value <= T::one(),
        })
    }
}

/// `(𝔅/γ)(1 - e^{-𝔅γ/γ̄})`.
pub fn aggregated_density<T: Real>(b: T, gamma: T, gamma_bar: T) -> T {
    b / gamma * -(-b * gamma / gamma_bar).exp_m1()
}

pub(crate) fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

fn envelope_terms<T: Real>(p: &JftsParams<T>, rule: &QuadratureRule<T>) -> Result<Vec<EnvelopeTerm<T>>> {
    let two = T::c(2.0);
    let (k, s, d, p1, p2) = (p.k_fading, p.s_shadow, p.delta, p.p1, p.p2);
    let cosines = twdp_cosines::<T>();
    let i0_one = bessel_i0(T::one())?;
    let mut terms = Vec::with_capacity(8 * rule.order());
    for (i, &a) in TWDP_WEIGHTS.iter().enumerate() {
        let b_i = T::c(a) * i0_one;
        let dm = d * cosines[i];
        for (r, w) in rule.iter() {
            let r2 = r * r;
            let ln_mult = w.ln() - r.abs().ln() + r2 * (two * p1 - T::one()) / (two * p1);
            let base = b_i.ln() - (two * p1 * p2).ln() + ln_mult - k - s;
            let var = p2 * r2;
            let inv_two_var = T::one() / (two * var);
            // e^{+S Δ M} pairs with the (1 - Δ M) Bessel argument and vice versa
            for (j, (sign, shape)) in [(T::one(), T::one() - dm), (-T::one(), T::one() + dm)].into_iter().enumerate() {
                let bessel = two * (k * s * shape / (p1 * p2)).sqrt();
                let group = 2 * i + j;
                terms.push(EnvelopeTerm { ln_weight: base + sign * s * dm, inv_two_var, bessel, group, var });
            }
        }
    }
    Ok(terms)
}

fn omega_a_closed_form<T: Real>(p: &JftsParams<T>, rule: &QuadratureRule<T>) -> Result<T> {
    let two = T::c(2.0);
    let (k, s, d, p1, p2) = (p.k_fading, p.s_shadow, p.delta, p.p1, p.p2);
    let cosines = twdp_cosines::<T>();
    let i0_one = bessel_i0(T::one())?;
    let mut total = crate::scalar::CompensatedSum::new();
    for (i, &a) in TWDP_WEIGHTS.iter().enumerate() {
        let b_i = T::c(a) * i0_one;
        let dm = d * cosines[i];
        for (r, w) in rule.iter() {
            let r2 = r * r;
            let mult = w / r.abs() * (r2 * (two * p1 - T::one()) / (two * p1)).exp();
            let lead = b_i * p2 * mult * r2 * r2 / (p1 * p1);
            let minus = T::one() - dm;
            let plus = T::one() + dm;
            let first = (s * dm - k * s * minus * r2 / (two * p1) - k - s).exp() * (p1 + k * s * r2 * minus);
            let second = (p1 + k * s * r2 * plus) * (-s * dm - k * s * plus * r2 / (two * p1) - k - s).exp();
            total.add(lead * (first + second));
        }
    }
    Ok(total.value())
}

/// `(∫f, ∫α²f, ∫α⁴f)` over `[0, upper]`, split into 64 panels before adapting.
pub fn raw_moments<T: Real, F: Fn(T) -> T>(density: F, upper: T) -> Result<(T, T, T)> {
    let opts = QuadOptions::tolerances(0.0, 1e-12).with_panels(64).with_max_intervals(20_000);
    let m0 = integrate(&density, T::zero(), upper, &opts).checked()?;
    let m2 = integrate(|a| a * a * density(a), T::zero(), upper, &opts).checked()?;
    let m4 = integrate(|a| a * a * a * a * density(a), T::zero(), upper, &opts).checked()?;
    Ok((m0, m2, m4))
}

/// `E[A⁴]/E[A²]² - 1` of any envelope density supported on `[0, upper]`; the density
/// does not need to be normalized.
pub fn amount_of_fading_of<T: Real, F: Fn(T) -> T>(density: F, upper: T) -> Result<T> {
    let (m0, m2, m4) = raw_moments(density, upper)?;
    Ok(m0 * m4 / (m2 * m2) - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> JftsModel<f64> {
        JftsModel::new(JftsParams::from_db(5.0, -9.8, 0.1).unwrap()).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(JftsParams::new(1.0, 1.0, 1.5, 1.0, 1.0, 20).is_err());
        assert!(JftsParams::new(0.0, 1.0, 0.5, 1.0, 1.0, 20).is_err());
        assert!(JftsParams::new(1.0, 1.0, 0.5, 1.0, -1.0, 20).is_err());
        assert!(JftsParams::new(1.0, 1.0, 0.5, 1.0, 1.0, 0).is_err());
        let p = JftsParams::from_db(5.0_f64, -9.8, 0.1).unwrap();
        assert!((p.k_db() - 5.0).abs() < 1e-12 && (p.s_db() + 9.8).abs() < 1e-12);
    }

    #[test]
    fn odd_order_is_a_configuration_error() {
        let p = JftsParams::from_db(5.0_f64, -9.8, 0.1).unwrap().with_quad_order(21).unwrap();
        assert!(matches!(JftsModel::new(p), Err(Error::Configuration(_))));
    }

    #[test]
    fn twdp_weights_sum_to_half() {
        let s: f64 = TWDP_WEIGHTS.iter().sum();
        assert!((s - 0.5).abs() < 1e-15);
    }

    #[test]
    fn density_vanishes_at_origin_and_rejects_negative() {
        let m = reference();
        assert_eq!(m.envelope_pdf(0.0).unwrap(), 0.0);
        assert!(matches!(m.envelope_pdf(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_density_matches_direct_summation() {
        // direct evaluation of the printed sum for a moderate parameter set
        let p = JftsParams::from_db(2.0_f64, -9.8, 0.4).unwrap();
        let m = JftsModel::new(p).unwrap();
        let (k, s, d) = (p.k_fading(), p.s_shadow(), p.delta());
        let cos = twdp_cosines::<f64>();
        let i0_1 = bessel_i0(1.0).unwrap();
        for alpha in [0.05, 0.7, 2.0, 6.5] {
            let mut direct = 0.0;
            for i in 0..4 {
                let b_i = TWDP_WEIGHTS[i] * i0_1;
                let dm = d * cos[i];
                for (r, w) in m.rule().iter() {
                    let mult = w / r.abs() * (r * r / 2.0).exp();
                    let e = (-k - s - alpha * alpha / (2.0 * r * r)).exp();
                    let br = (s * dm).exp() * bessel_i0(2.0 * alpha * (k * s * (1.0 - dm)).sqrt()).unwrap()
                        + (-s * dm).exp() * bessel_i0(2.0 * alpha * (k * s * (1.0 + dm)).sqrt()).unwrap();
                    direct += b_i * alpha / 2.0 * mult * e * br;
                }
            }
            let got = m.envelope_pdf(alpha).unwrap();
            assert!(((got - direct) / direct).abs() < 1e-12, "alpha={alpha}: {got} vs {direct}");
        }
    }

    #[test]
    fn tail_is_dominated_by_the_widest_gaussian() {
        let m = reference();
        let r_max = *m.rule().nodes().last().unwrap();
        let bound = |a: f64| m.ln_envelope_pdf(a).unwrap() + a * a / (2.0 * r_max * r_max);
        // after removing the dominant Gaussian factor only the Bessel growth is left, which is
        // at most linear in α in the exponent
        let slope = (bound(400.0) - bound(200.0)) / 200.0;
        let c_max = 2.0 * (m.params().k_fading() * m.params().s_shadow() * 1.1).sqrt();
        assert!(slope <= c_max + 1e-9);
    }

    #[test]
    fn b_aggregate_for_two_point_rule() {
        let p = JftsParams::from_db(5.0_f64, -9.8, 0.1).unwrap().with_quad_order(2).unwrap();
        let m = JftsModel::new(p).unwrap();
        assert!((m.b_aggregate() - 2.0 * m.omega_a()).abs() < 1e-15 * m.omega_a());
    }

    #[test]
    fn b_aggregate_scales_with_omega() {
        let m = reference();
        let factor: f64 = m.rule().nodes().iter().map(|r| 1.0 / (2.0 * r * r)).sum();
        assert!((m.b_aggregate() - factor * m.omega_a()).abs() < 1e-14);
        // Σ 1/r_h² = 2m for the even Hermite rules
        assert!((factor - 20.0).abs() < 1e-10);
    }

    #[test]
    fn reference_constants_are_pinned() {
        // regression values for K = 5 dB, S_h = -9.8 dB, Δ = 0.1, P1 = P2 = 1, m = 20
        let m = reference();
        assert!((m.omega_a() - 0.217_240_113_930_466_7).abs() < 1e-13);
        assert!((m.b_aggregate() - 4.344_802_278_609_334).abs() < 1e-12);
    }

    #[test]
    fn omega_stays_finite_for_huge_k() {
        let m = JftsModel::new(JftsParams::from_db(60.0_f64, -9.8, 0.9).unwrap()).unwrap();
        assert!(m.omega_a().is_finite() && m.omega_a() >= 0.0);
    }

    #[test]
    fn two_point_per_node_sum_is_aggregated_with_split_constant() {
        // with equal r_h² the per-node sum equals m·(c/γ)(1 - e^{-cγ/γ̄}), c = 𝔅/m; the
        // aggregated form uses 𝔅 in the exponent as well, so the two are different functions
        let p = JftsParams::from_db(5.0_f64, -9.8, 0.1).unwrap().with_quad_order(2).unwrap();
        let m = JftsModel::new(p).unwrap();
        let c = m.b_aggregate() / 2.0;
        for g in [0.01, 0.3, 1.0, 7.0, 50.0] {
            let per = m.csnr_pdf(CsnrDensityForm::PerNodeSum, g, 10.0).unwrap();
            let want = 2.0 * aggregated_density(c, g, 10.0);
            assert!(((per - want) / want).abs() < 1e-12);
        }
    }

    #[test]
    fn aggregated_density_small_gamma_limit() {
        let m = reference();
        let b = m.b_aggregate();
        let v = m.csnr_pdf(CsnrDensityForm::Aggregated, 1e-9, 10.0).unwrap();
        assert!(((v - b * b / 10.0) / (b * b / 10.0)).abs() < 1e-8);
    }

    #[test]
    fn outage_derivative_is_aggregated_density() {
        let m = reference();
        for g0 in [0.1, 0.5, 1.0] {
            let h = 1e-5 * g0;
            let dp = (m.outage_probability(g0 + h, 10.0).unwrap().value
                - m.outage_probability(g0 - h, 10.0).unwrap().value)
                / (2.0 * h);
            let f = m.csnr_pdf(CsnrDensityForm::Aggregated, g0, 10.0).unwrap();
            assert!(((dp - f) / f).abs() < 1e-6);
        }
    }

    #[test]
    fn outage_flags_values_outside_unit_interval() {
        let m = reference();
        let o = m.outage_probability(5.0, 10.0).unwrap();
        assert_eq!(o.in_unit_interval, (0.0..=1.0).contains(&o.value));
        assert!(m.outage_probability(0.0, 1.0).is_err());
    }

    #[test]
    fn rayleigh_hook_gives_unit_fading() {
        let af = amount_of_fading_of(|a: f64| 2.0 * a * (-a * a).exp(), 12.0).unwrap();
        assert!((af - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fading_figure_is_scale_free() {
        let f = |a: f64| a * a * (-a * a / 3.0).exp();
        let g = |a: f64| f(a / 2.5);
        let af1 = amount_of_fading_of(f, 20.0).unwrap();
        let af2 = amount_of_fading_of(g, 50.0).unwrap();
        assert!((af1 - af2).abs() < 1e-10);
    }

    #[test]
    fn single_precision_model() {
        let p = JftsParams::from_db(5.0_f32, -9.8, 0.1).unwrap();
        let m = JftsModel::new(p).unwrap();
        assert!((m.b_aggregate() - 4.344_802).abs() < 1e-4);
    }
}
