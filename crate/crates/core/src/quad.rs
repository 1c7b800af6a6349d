//! Globally adaptive Gauss-Kronrod (10/21-point) integration.
//!
//! Every capacity integral and every moment oracle goes through here, so the integrator
//! is deterministic: subintervals are refined in a fixed order and the final sum is
//! taken left to right.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_309_100,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::c(1e-10),
            rel_tol: T::c(1e-12),
            max_intervals: 4000,
            initial_panels: 1,
        }
    }
}

impl<T: Real> QuadOptions<T> {
    pub fn tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol: T::c(abs_tol),
            rel_tol: T::c(rel_tol),
            ..Self::default()
        }
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub abs_error: T,
    pub evaluations: usize,
    pub intervals: usize,
    pub converged: bool,
}

impl<T: Real> QuadEstimate<T> {
    /// The value, or a numeric error when the tolerance was not met.
    pub fn checked(self) -> Result<T> {
        if self.converged && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::Numeric(format!(
                "quadrature did not converge: value {} ± {} after {} intervals",
                self.value, self.abs_error, self.intervals
            )))
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Segment<T> {}

impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first, ties broken by position for determinism
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

/// Nodes and weights of the 21-point Kronrod rule mapped to `[a, b]`.
pub fn kronrod21_rule<T: Real>(a: T, b: T) -> [(T, T); 21] {
    let half = T::c(0.5);
    let center = half * (a + b);
    let hl = half * (b - a);
    let mut out = [(center, T::c(WGK[10]) * hl); 21];
    for j in 0..10 {
        let dx = hl * T::c(XGK[j]);
        let w = T::c(WGK[j]) * hl;
        out[2 * j] = (center - dx, w);
        out[2 * j + 1] = (center + dx, w);
    }
    out
}

fn kronrod21<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Segment<T> {
    let half = T::c(0.5);
    let center = half * (a + b);
    let hl = half * (b - a);
    let fc = f(center);
    let mut resk = fc * T::c(WGK[10]);
    let mut resabs = resk.abs();
    let mut resg = T::zero();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = hl * T::c(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::c(WGK[j]);
        resk = resk + w * (f1 + f2);
        resabs = resabs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::c(WG[j / 2]) * (f1 + f2);
        }
    }
    let reskh = resk * half;
    let mut resasc = T::c(WGK[10]) * (fc - reskh).abs();
    for j in 0..10 {
        resasc = resasc + T::c(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * hl;
    let resabs = resabs * hl.abs();
    let resasc = resasc * hl.abs();
    let mut error = ((resk - resg) * hl).abs();
    if resasc != T::zero() && error != T::zero() {
        let scale = (T::c(200.0) * error / resasc).powf(T::c(1.5));
        error = resasc * if scale < T::one() { scale } else { T::one() };
    }
    let floor = T::c(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::c(50.0) * T::epsilon()) && floor > error {
        error = floor;
    }
    if !value.is_finite() {
        error = T::infinity();
    }
    Segment { a, b, value, error }
}

/// `∫_a^b f(x) dx` by globally adaptive bisection.
pub fn integrate<T, F>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> QuadEstimate<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if a == b {
        return QuadEstimate {
            value: T::zero(),
            abs_error: T::zero(),
            evaluations: 0,
            intervals: 0,
            converged: true,
        };
    }
    let panels = opts.initial_panels.max(1);
    let width = (b - a) / T::from_count(panels);
    let mut heap = BinaryHeap::with_capacity(opts.max_intervals + panels);
    let mut evaluations = 0;
    for p in 0..panels {
        let lo = a + width * T::from_count(p);
        let hi = if p + 1 == panels { b } else { a + width * T::from_count(p + 1) };
        heap.push(kronrod21(&mut f, lo, hi));
        evaluations += 21;
    }
    let mut converged = false;
    loop {
        let (total, err) = totals(&heap);
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            converged = total.is_finite();
            break;
        }
        if heap.len() >= opts.max_intervals {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = T::c(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // cannot bisect further in this precision
            heap.push(worst);
            break;
        }
        heap.push(kronrod21(&mut f, worst.a, mid));
        heap.push(kronrod21(&mut f, mid, worst.b));
        evaluations += 42;
    }
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let mut value = CompensatedSum::new();
    let mut error = CompensatedSum::new();
    for s in &segs {
        value.add(s.value);
        error.add(s.error);
    }
    QuadEstimate {
        value: value.value(),
        abs_error: error.value(),
        evaluations,
        intervals: segs.len(),
        converged,
    }
}

fn totals<T: Real>(heap: &BinaryHeap<Segment<T>>) -> (T, T) {
    let mut v = CompensatedSum::new();
    let mut e = CompensatedSum::new();
    for s in heap.iter() {
        v.add(s.value);
        e.add(s.error);
    }
    (v.value(), e.value())
}

/// `∫_a^∞ f(x) dx` through `x = a + scale·t/(1-t)`, `t ∈ [0, 1)`.
pub fn integrate_to_infinity<T, F>(mut f: F, a: T, scale: T, opts: &QuadOptions<T>) -> QuadEstimate<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    integrate(
        |t: T| {
            let one_minus = T::one() - t;
            if one_minus <= T::zero() {
                return T::zero();
            }
            let x = a + scale * t / one_minus;
            if !x.is_finite() {
                return T::zero();
            }
            f(x) * scale / (one_minus * one_minus)
        },
        T::zero(),
        T::one(),
        opts,
    )
}

/// `∫_a^b f(x) dx` for `0 < a < b` with the substitution `x = eᵘ`; suited to integrands
/// spread over many decades.
pub fn integrate_log<T, F>(mut f: F, a: T, b: T, opts: &QuadOptions<T>) -> QuadEstimate<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    integrate(
        |u: T| {
            let x = u.exp();
            f(x) * x
        },
        a.ln(),
        b.ln(),
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let opts = QuadOptions::<f64>::default();
        let est = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, &opts);
        let want = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((est.value - want).abs() < 1e-13);
        assert_eq!(est.intervals, 1);
    }

    #[test]
    fn endpoint_singularity() {
        let opts = QuadOptions::tolerances(1e-12, 1e-12);
        let est = integrate(|x: f64| x.ln(), 0.0, 1.0, &opts);
        assert!(est.converged);
        assert!((est.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let opts = QuadOptions::tolerances(1e-13, 1e-13);
        let est = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, 1.0, &opts);
        assert!((est.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn log_substitution() {
        let opts = QuadOptions::tolerances(1e-12, 1e-13);
        let est = integrate_log(|x: f64| 1.0 / x, 1e-6, 1e6, &opts);
        assert!((est.value - 12.0 * 10f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let opts = QuadOptions::tolerances(1e-14, 0.0).with_max_intervals(3);
        let est = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, &opts);
        assert!(!est.converged);
        assert!(est.checked().is_err());
    }

    #[test]
    fn results_are_reproducible() {
        let opts = QuadOptions::tolerances(1e-12, 1e-12).with_panels(7);
        let f = |x: f64| (x * 3.0).sin() * (-x).exp();
        let a = integrate(f, 0.0, 30.0, &opts);
        let b = integrate(f, 0.0, 30.0, &opts);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
