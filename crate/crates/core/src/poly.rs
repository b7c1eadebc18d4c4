//! Dense univariate polynomials with real coefficients and their complex roots.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients in ascending order; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// Largest coefficient magnitude, used to scale residual checks.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Quotient by the monic quadratic `(t - r1)(t - r2)`, remainder dropped.
    pub fn deflate_quadratic(&self, r1: f64, r2: f64) -> Poly {
        let q1 = self.deflate_linear(r1);
        q1.deflate_linear(r2)
    }

    fn deflate_linear(&self, r: f64) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::new(vec![]);
        }
        let mut out = vec![0.0; n - 1];
        let mut carry = 0.0;
        for k in (1..n).rev() {
            carry = self.coeffs[k] + carry * r;
            out[k - 1] = carry;
        }
        Poly::new(out)
    }

    /// All complex roots (with multiplicity) from the companion matrix, each
    /// followed by Newton polishing. Nearly coincident pairs are merged onto
    /// a root of the derivative, and roots whose imaginary part is below
    /// `1e-10` relative to their modulus are snapped to the real axis.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::RootFindingFailure);
        }
        let zeros = self.coeffs.iter().take_while(|&&v| v == 0.0).count();
        let reduced = Poly::new(self.coeffs[zeros..].to_vec());
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        if reduced.degree() == 0 {
            return Ok(roots);
        }
        let raw = reduced.eigen_roots().or_else(|| reduced.aberth_roots()).ok_or(Error::RootFindingFailure)?;
        let deriv = reduced.derivative();
        let mut found: Vec<Complex64> = raw.into_iter().map(|r| reduced.polish(r, &deriv)).collect();
        reduced.merge_clusters(&mut found, &deriv);
        for r in found.iter_mut() {
            if r.im.abs() <= 1e-10 * r.norm().max(1e-300) {
                r.im = 0.0;
            }
        }
        roots.extend(found);
        Ok(roots)
    }

    fn companion(&self) -> DMatrix<f64> {
        let n = self.degree();
        let lead = self.coeffs[n];
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            m[(k, n - 1)] = -self.coeffs[k] / lead;
            if k + 1 < n {
                m[(k + 1, k)] = 1.0;
            }
        }
        m
    }

    fn eigen_roots(&self) -> Option<Vec<Complex64>> {
        let m = self.companion();
        let finite = |v: &Vec<Complex64>| v.iter().all(|r| r.re.is_finite() && r.im.is_finite());
        let solve = |m: DMatrix<f64>| -> Option<Vec<Complex64>> {
            let roots: Vec<Complex64> = Schur::try_new(m, f64::EPSILON, 1_000)?
                .complex_eigenvalues()
                .iter()
                .copied()
                .collect();
            finite(&roots).then_some(roots)
        };
        solve(m.clone()).or_else(|| solve(m.transpose()))
    }

    /// Simultaneous Aberth-Ehrlich iteration, used when the eigenvalue
    /// solver breaks down.
    fn aberth_roots(&self) -> Option<Vec<Complex64>> {
        let n = self.degree();
        let deriv = self.derivative();
        let lead = self.coeffs[n].abs();
        let radius = 1.0 + self.coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs())) / lead;
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for i in 0..n {
                let ratio = self.eval_complex(z[i]) / deriv.eval_complex(z[i]);
                let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
                let step = ratio / (1.0 - ratio * repulsion);
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }
        z.iter().all(|r| r.re.is_finite() && r.im.is_finite()).then_some(z)
    }

    fn merge_clusters(&self, roots: &mut [Complex64], deriv: &Poly) {
        let second = deriv.derivative();
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                let (ri, rj) = (roots[i], roots[j]);
                let scale = ri.norm().max(1.0);
                let gap = (ri - rj).norm();
                let conjugate_pair = ri.im != 0.0 && (ri - rj.conj()).norm() <= 1e-9 * scale;
                let real_pair = ri.im == 0.0 && rj.im == 0.0;
                if gap > 1e-6 * scale || !(conjugate_pair || real_pair || gap <= 1e-9 * scale) {
                    continue;
                }
                let mut m = 0.5 * (ri + rj);
                if conjugate_pair {
                    m.im = 0.0;
                }
                for _ in 0..4 {
                    let dd = second.eval_complex(m);
                    if dd.norm() == 0.0 {
                        break;
                    }
                    let next = m - deriv.eval_complex(m) / dd;
                    if (next - m).norm() > gap {
                        break;
                    }
                    m = next;
                }
                let limit = self.eval_complex(ri).norm().max(self.eval_complex(rj).norm());
                let noise = 100.0 * f64::EPSILON * self.scale() * scale.powi(self.degree() as i32);
                let residual = self.eval_complex(m).norm();
                if residual <= noise || (conjugate_pair && residual <= 10.0 * limit) {
                    roots[i] = m;
                    roots[j] = m;
                }
            }
        }
    }

    fn polish(&self, mut r: Complex64, deriv: &Poly) -> Complex64 {
        let mut residual = self.eval_complex(r).norm();
        for _ in 0..4 {
            let d = deriv.eval_complex(r);
            if d.norm() == 0.0 {
                break;
            }
            let candidate = r - self.eval_complex(r) / d;
            let cand_res = self.eval_complex(candidate).norm();
            if !(cand_res < residual) {
                break;
            }
            r = candidate;
            residual = cand_res;
        }
        r
    }
}
