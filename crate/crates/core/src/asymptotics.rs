//! Growth rate, polynomial exponent and constant of a coefficient sequence
//! `a_k ~ C·ρ^k·k^α`, by Neville extrapolation in `1/k`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::enumerate::{big_ratio, Scaled};
use crate::error::{Error, Result};

const MIN_TERMS: usize = 32;
const DEPTH: usize = 4;
/// Node spacing is a multiple of the first of these that fits, so that
/// periodic corrections of period 2, 3 or 6 (and 4 with the longer one) are
/// sampled at a fixed phase.
const PHASES: [usize; 2] = [12, 6];

/// One extrapolated quantity with its Neville residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub value: f64,
    /// `|T_m − T_{m−1}|` at levels `m = 1..=4`.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

/// Result of [`growth_estimate`] on the subsequence `a_k = c_{k·stride + offset}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesAnalysis {
    pub stride: usize,
    pub offset: usize,
    pub rho: f64,
    pub alpha: f64,
    pub const_estimate: f64,
    /// Relative spread of the last two extrapolation levels of the constant.
    pub const_uncertainty: f64,
    /// Indices `k` (in the strided sequence) used as extrapolation nodes.
    pub nodes: Vec<usize>,
    pub diagnostics: Diagnostics,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub rho: Extrapolation,
    pub alpha: Extrapolation,
    pub log_const: Extrapolation,
}

/// Greatest common divisor of the gaps between nonzero terms in the second
/// half of the sequence, where early irregularities have died out.
pub fn detect_stride(coeffs: &[BigUint]) -> Option<usize> {
    let half = coeffs.len() / 2;
    let mut support = coeffs.iter().enumerate().skip(half).filter(|(_, c)| !c.is_zero()).map(|(n, _)| n);
    let first = support.next()?;
    let g = support.fold(0usize, |g, n| g.gcd(&(n - first)));
    Some(g.max(1))
}

/// Polynomial extrapolation to `h = 0` of values sampled at `h = 1/k`.
fn neville(nodes: &[usize], values: &[f64]) -> Extrapolation {
    let h: Vec<f64> = nodes.iter().map(|&k| 1.0 / k as f64).collect();
    let mut table = values.to_vec();
    let mut tops = vec![table[0]];
    for level in 1..values.len() {
        for i in 0..values.len() - level {
            let (hi, hj) = (h[i], h[i + level]);
            table[i] = (hj * table[i] - hi * table[i + 1]) / (hj - hi);
        }
        tops.push(table[0]);
    }
    let residuals: Vec<f64> = tops.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let value = *tops.last().expect("at least one node");
    let floor = 1e-11 * value.abs().max(1.0);
    let tail = &residuals[residuals.len().saturating_sub(3)..];
    let converged = tail.windows(2).all(|w| w[1] < w[0] || w[1] <= floor);
    Extrapolation {
        value,
        residuals,
        converged,
    }
}

/// Estimates `(ρ, α, C)` with `a_k ~ C·ρ^k·k^α` for `a_k = coeffs[k·stride + offset]`,
/// the offset being the residue of the last nonzero index. A `stride` of
/// `None` uses [`detect_stride`]. Only the trailing run of nonzero terms is
/// used.
pub fn growth_estimate(coeffs: &[BigUint], stride: Option<usize>) -> Result<SeriesAnalysis> {
    let stride = match stride {
        Some(0) => return Err(Error::InsufficientData("stride must be positive".into())),
        Some(d) => d,
        None => detect_stride(coeffs).ok_or(Error::ZeroSequence)?,
    };
    let last_nonzero = coeffs.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroSequence)?;
    let offset = last_nonzero % stride;
    let seq: Vec<&BigUint> = coeffs[..=last_nonzero].iter().skip(offset).step_by(stride).collect();
    let nonzero = seq.iter().rev().take_while(|c| !c.is_zero()).count();
    let start = seq.len() - nonzero;
    if nonzero < MIN_TERMS {
        return Err(Error::InsufficientData(format!(
            "{nonzero} trailing nonzero terms at stride {stride}; at least {MIN_TERMS} are required"
        )));
    }
    let last = seq.len() - 1;
    // ratios over a full period keep periodic corrections out of the fit
    let period = PHASES.iter().copied().find(|&p| nonzero >= 8 * p).unwrap_or(1);
    let span = (last - start - period) / 2;
    let raw_step = span / DEPTH;
    let step = match PHASES.iter().find(|&&p| raw_step >= p) {
        Some(&p) => raw_step / p * p,
        None => raw_step.max(1),
    };
    let nodes: Vec<usize> = (0..=DEPTH).map(|j| last - j * step).collect();

    let p = period as f64;
    let ratio = |k: usize| big_ratio(seq[k], seq[k - period]);
    let rho = neville(&nodes, &nodes.iter().map(|&k| ratio(k).powf(1.0 / p)).collect::<Vec<_>>());
    let alpha_values: Vec<f64> = nodes
        .iter()
        .map(|&k| {
            let kf = k as f64;
            (ratio(k) / rho.value.powf(p)).ln() / (kf / (kf - p)).ln()
        })
        .collect();
    let alpha = neville(&nodes, &alpha_values);
    let ln_rho = rho.value.ln();
    let log_values: Vec<f64> = nodes
        .iter()
        .map(|&k| Scaled::from_big(seq[k]).ln() - k as f64 * ln_rho - alpha.value * (k as f64).ln())
        .collect();
    let log_const = neville(&nodes, &log_values);
    let const_uncertainty = log_const.residuals.last().copied().unwrap_or(0.0);
    let converged = rho.converged && alpha.converged && log_const.converged;
    Ok(SeriesAnalysis {
        stride,
        offset,
        rho: rho.value,
        alpha: alpha.value,
        const_estimate: log_const.value.exp(),
        const_uncertainty,
        nodes,
        converged,
        diagnostics: Diagnostics { rho, alpha, log_const },
    })
}

/// Tolerances for [`verify_prediction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub rho_rel: f64,
    pub alpha_abs: f64,
    pub const_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rho_rel: 1e-6,
            alpha_abs: 1e-2,
            const_rel: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCheck {
    pub predicted: f64,
    pub estimated: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ComponentCheck {
    fn new(predicted: f64, estimated: f64, deviation: f64, tolerance: f64) -> Self {
        ComponentCheck {
            predicted,
            estimated,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionReport {
    pub rho: ComponentCheck,
    pub alpha: ComponentCheck,
    pub constant: ComponentCheck,
    /// Relative spread of the last two levels for the constant; the constant
    /// only passes when this is within its tolerance as well.
    pub const_uncertainty: f64,
    /// First and last index of the strided sequence used.
    pub k_range: (usize, usize),
    pub stride: usize,
    pub converged: bool,
    pub pass: bool,
}

/// Compares the extrapolated triple with a predicted one. Estimation errors
/// become failing reports.
pub fn verify_prediction(
    coeffs: &[BigUint],
    stride: Option<usize>,
    rho0: f64,
    alpha0: f64,
    const0: f64,
    tol: Tolerances,
) -> PredictionReport {
    let fit = growth_estimate(coeffs, stride);
    let (rho, alpha, constant, uncertainty, k_range, stride, converged) = match &fit {
        Ok(a) => (
            a.rho,
            a.alpha,
            a.const_estimate,
            a.const_uncertainty,
            (*a.nodes.last().unwrap_or(&0), a.nodes[0]),
            a.stride,
            a.converged,
        ),
        Err(_) => (f64::NAN, f64::NAN, f64::NAN, f64::INFINITY, (0, 0), stride.unwrap_or(1), false),
    };
    let nan_inf = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let rho_check = ComponentCheck::new(rho0, rho, nan_inf((rho - rho0).abs() / rho0.abs()), tol.rho_rel);
    let alpha_check = ComponentCheck::new(alpha0, alpha, nan_inf((alpha - alpha0).abs()), tol.alpha_abs);
    let mut const_check =
        ComponentCheck::new(const0, constant, nan_inf((constant - const0).abs() / const0.abs()), tol.const_rel);
    const_check.pass &= uncertainty <= tol.const_rel;
    let pass = rho_check.pass && alpha_check.pass && const_check.pass;
    PredictionReport {
        rho: rho_check,
        alpha: alpha_check,
        constant: const_check,
        const_uncertainty: uncertainty,
        k_range,
        stride,
        converged,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{all_series, SeriesLabel};
    use crate::stepset::StepSet;
    use std::f64::consts::PI;

    #[test]
    fn geometric_sequence() {
        let c: Vec<BigUint> = (0..60).map(|n| BigUint::from(3u32) << n).collect();
        let a = growth_estimate(&c, None).unwrap();
        assert_eq!(a.stride, 1);
        assert!((a.rho - 2.0).abs() < 1e-13);
        assert!(a.alpha.abs() < 1e-9);
        assert!((a.const_estimate - 3.0).abs() < 1e-9);
        assert!(a.converged);
    }

    #[test]
    fn errors() {
        assert_eq!(growth_estimate(&vec![BigUint::zero(); 50], None), Err(Error::ZeroSequence));
        let short: Vec<BigUint> = (0..10).map(|n| BigUint::from(n as u32 + 1)).collect();
        assert!(matches!(growth_estimate(&short, None), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn stride_detection() {
        let mut c = vec![BigUint::zero(); 40];
        for n in (0..40).step_by(2) {
            c[n] = BigUint::from(n as u32 + 1);
        }
        assert_eq!(detect_stride(&c), Some(2));
        assert_eq!(detect_stride(&vec![BigUint::zero(); 5]), None);
    }

    #[test]
    fn simple_walk_sequences() {
        let series = all_series(&StepSet::preset("simple").unwrap(), 400).unwrap();
        let tol = Tolerances::default();
        let q00 = verify_prediction(&series.get(SeriesLabel::Q00).coeffs, None, 16.0, -3.0, 4.0 / PI, tol);
        assert!(q00.pass, "{q00:?}");
        assert_eq!(q00.stride, 2);
        let q10 = verify_prediction(&series.get(SeriesLabel::Q10).coeffs, None, 4.0, -2.0, 8.0 / PI, tol);
        assert!(q10.pass, "{q10:?}");
        let q11 = verify_prediction(&series.get(SeriesLabel::Q11).coeffs, None, 4.0, -1.0, 4.0 / PI, tol);
        assert!(q11.pass, "{q11:?}");
        let wrong = verify_prediction(&series.get(SeriesLabel::Q11).coeffs, None, 4.0, -1.0, 1.0, tol);
        assert!(!wrong.pass && wrong.rho.pass && !wrong.constant.pass);
        assert!(wrong.constant.deviation > 0.2);
    }
}
