//! Gauss-Hermite rules for the weight `e^{-x²}` on the real line.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_ORDER: usize = 64;

/// Nodes and weights of an `m`-point Gauss-Hermite rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T = f64> {
    order: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Ascending nodes `r_h`.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ w_h f(r_h) ≈ ∫ e^{-x²} f(x) dx`.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F) -> T {
        self.iter().map(|(r, w)| w * f(r)).sum()
    }

    /// Whether one of the nodes is exactly zero (odd orders).
    pub fn has_zero_node(&self) -> bool {
        self.nodes.iter().any(|r| *r == T::zero())
    }

    /// `Σ w_h r_h^k`.
    pub fn moment(&self, k: i32) -> T {
        self.iter().map(|(r, w)| w * r.powi(k)).sum()
    }
}

/// Builds the `order`-point rule.
///
/// Nodes start from the eigenvalues of the symmetric Jacobi matrix (Golub-Welsch) and are
/// polished by Newton steps on the orthonormal Hermite recurrence. The weight
/// `2^{m-1} m! √π / (m² H_{m-1}(r)²)` is evaluated as `1 / (m ψ_{m-1}(r)²)` with `ψ` the
/// orthonormal Hermite functions, which avoids the factorial overflow of the direct form.
pub fn gauss_hermite<T: Real>(order: usize) -> Result<QuadratureRule<T>> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Gauss-Hermite order must be in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let m = order;
    let mut nodes = jacobi_eigenvalues(m)?;
    for x in nodes.iter_mut() {
        for _ in 0..100 {
            let (p, pm1) = orthonormal_pair(m, *x);
            let dp = (2.0 * m as f64).sqrt() * pm1;
            let dx = p / dp;
            *x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    // enforce exact symmetry
    for h in 0..m / 2 {
        let mag = 0.5 * (nodes[m - 1 - h] - nodes[h]);
        nodes[h] = -mag;
        nodes[m - 1 - h] = mag;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (_, pm1) = orthonormal_pair(m, x);
            1.0 / (m as f64 * pm1 * pm1)
        })
        .collect();
    for h in 0..m / 2 {
        let w = 0.5 * (weights[h] + weights[m - 1 - h]);
        weights[h] = w;
        weights[m - 1 - h] = w;
    }
    Ok(QuadratureRule {
        order: m,
        nodes: nodes.into_iter().map(T::c).collect(),
        weights: weights.into_iter().map(T::c).collect(),
    })
}

/// `(ψ_m(x), ψ_{m-1}(x))` for the orthonormal Hermite functions
/// `ψ_n = H_n / √(2ⁿ n! √π)`.
fn orthonormal_pair(m: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for n in 0..m {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite_h(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenvalues of the Jacobi matrix with zero diagonal and off-diagonal `√(k/2)`.
fn jacobi_eigenvalues(m: usize) -> Result<Vec<f64>> {
    let mut d = vec![0.0_f64; m];
    let mut e: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    e.push(0.0);
    // implicit QL with Wilkinson shifts
    for l in 0..m {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < m {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numeric("Jacobi eigenvalue iteration stalled".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = mm;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    Ok(d)
}
