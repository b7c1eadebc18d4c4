//! Adaptive Gauss-Legendre quadrature on finite intervals.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 48;

/// Values that can be integrated: closed under addition and real scaling.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton
/// iteration on the Legendre three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn fixed<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> T {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = T::zero();
    for (x, w) in nodes.iter().zip(weights) {
        acc = acc + f(mid + half * x) * (w * half);
    }
    acc
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error_estimate: f64,
}

/// Integrates `f` over `[a, b]` by recursive bisection until the two-panel
/// and one-panel estimates agree to `abs_tol` on every panel.
pub fn integrate<T: Integrand, F: FnMut(f64) -> T>(mut f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature<T>> {
    let whole = fixed(&mut f, a, b);
    let mut error = 0.0;
    let value = refine(&mut f, a, b, whole, abs_tol, 0, &mut error);
    if !(value.magnitude().is_finite()) || error > abs_tol {
        return Err(Error::QuadratureFailure(error));
    }
    Ok(Quadrature {
        value,
        error_estimate: error,
    })
}

fn refine<T: Integrand, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: T,
    tol: f64,
    depth: u32,
    error: &mut f64,
) -> T {
    let mid = 0.5 * (a + b);
    let left = fixed(f, a, mid);
    let right = fixed(f, mid, b);
    let split = left + right;
    let diff = (split - whole).magnitude();
    if diff <= tol || depth >= MAX_DEPTH {
        *error += diff;
        return split;
    }
    refine(f, a, mid, left, 0.5 * tol, depth + 1, error) + refine(f, mid, b, right, 0.5 * tol, depth + 1, error)
}
