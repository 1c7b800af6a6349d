//! Bracketed root finding and one-dimensional maximization.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport<T> {
    pub root: T,
    pub residual: T,
    pub iterations: usize,
    /// Final enclosing bracket.
    pub bracket: (T, T),
}

/// Stopping rule shared by the bracketing solvers: stop once the bracket is narrower
/// than `abs + rel·|x|`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    pub fn relative(rel: T) -> Self {
        Self { abs: T::zero(), rel }
    }

    fn at(&self, x: T) -> T {
        self.abs + self.rel * x.abs()
    }
}

fn no_root<T: Real>(lo: T, hi: T, flo: T, fhi: T) -> Error {
    Error::NoRoot {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        f_lo: flo.as_f64(),
        f_hi: fhi.as_f64(),
    }
}

/// Brent's method (inverse quadratic interpolation with bisection safeguard).
pub fn brent<T, F>(mut f: F, lo: T, hi: T, tol: Tolerance<T>, max_iter: usize) -> Result<RootReport<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let two = T::c(2.0);
    let half = T::c(0.5);
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(RootReport { root: a, residual: fa, iterations: 0, bracket: (a, a) });
    }
    if fb == T::zero() {
        return Ok(RootReport { root: b, residual: fb, iterations: 0, bracket: (b, b) });
    }
    if !(fa * fb < T::zero()) {
        return Err(no_root(lo, hi, fa, fb));
    }
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol.at(b);
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            let bracket = if b < c { (b, c) } else { (c, b) };
            return Ok(RootReport { root: b, residual: fb, iterations: iter, bracket });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::c(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1.abs() * xm.signum() };
        fb = f(b);
    }
    Err(Error::Numeric(format!("Brent did not converge in {max_iter} iterations")))
}

/// Plain bisection; slow but independent of Brent's interpolation logic.
pub fn bisect<T, F>(mut f: F, lo: T, hi: T, tol: Tolerance<T>, max_iter: usize) -> Result<RootReport<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if !(fa * fb <= T::zero()) {
        return Err(no_root(lo, hi, fa, fb));
    }
    for iter in 1..=max_iter {
        let mid = T::c(0.5) * (a + b);
        let fm = f(mid);
        if fm == T::zero() || (b - a) <= tol.at(mid) {
            return Ok(RootReport { root: mid, residual: fm, iterations: iter, bracket: (a, b) });
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::Numeric(format!("bisection did not converge in {max_iter} iterations")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum<T> {
    pub x: T,
    pub value: T,
    pub iterations: usize,
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`, stopping
/// when the bracket is narrower than `rel_tol·|x|`. Points where `f` is not finite are
/// treated as `-∞`.
pub fn golden_section_max<T, F>(mut f: F, lo: T, hi: T, rel_tol: T, max_iter: usize) -> Maximum<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let mut g = |x: T| {
        let v = f(x);
        if v.is_finite() { v } else { T::neg_infinity() }
    };
    let inv_phi = T::c(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    let mut iterations = 0;
    while iterations < max_iter && (b - a) > rel_tol * x1.abs().max(x2.abs()) {
        iterations += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = g(x2);
        }
    }
    if f1 >= f2 {
        Maximum { x: x1, value: f1, iterations }
    } else {
        Maximum { x: x2, value: f2, iterations }
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let (la, lb) = (lo.ln(), hi.ln());
    let step = (lb - la) / T::from_count(n - 1);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else if i == 0 {
                lo
            } else {
                (la + step * T::from_count(i)).exp()
            }
        })
        .collect()
}
