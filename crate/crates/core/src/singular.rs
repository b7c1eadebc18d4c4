//! Radius-of-convergence candidates `z_g`, `z_X`, `z_Y`, `1/|S|` and the
//! first-singularity classification by drift and covariance signs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{branch_points, scaled_discriminant_x, KernelPolys};
use crate::stepset::{Sign, StepSet};

const NEWTON_MAX_ITER: usize = 100;
const RESIDUAL_TOL: f64 = 1e-12;
/// Relative gap under which `x₂` and `x₃` are considered collided.
pub const COLLISION_CHECK_TOL: f64 = 1e-6;

/// Positive solution of `Σ i δ α^i β^j = Σ j δ α^i β^j = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub alpha: f64,
    pub beta: f64,
    pub z_g: f64,
    pub residual: f64,
    pub iterations: usize,
}

struct Moments {
    f: f64,
    g: [f64; 2],
    h: [[f64; 2]; 2],
}

fn moments(steps: &[(i8, i8)], u: f64, v: f64) -> Moments {
    let mut m = Moments {
        f: 0.0,
        g: [0.0; 2],
        h: [[0.0; 2]; 2],
    };
    for &(i, j) in steps {
        let (i, j) = (i as f64, j as f64);
        let w = (i * u + j * v).exp();
        m.f += w;
        m.g[0] += i * w;
        m.g[1] += j * w;
        m.h[0][0] += i * i * w;
        m.h[0][1] += i * j * w;
        m.h[1][1] += j * j * w;
    }
    m.h[1][0] = m.h[0][1];
    m
}

fn residual(m: &Moments) -> f64 {
    m.g[0].abs().max(m.g[1].abs()) / m.f
}

/// Minimises `F(u,v) = Σ δ e^{iu + jv}` by damped Newton from the origin,
/// falling back to nested bisection on the gradient.
pub fn critical_point(s: &StepSet) -> Result<CriticalPoint> {
    if s.is_singular() {
        return Err(Error::SingularWalk);
    }
    if s.cardinality() < 2 || !s.origin_in_interior() {
        return Err(Error::NoPositiveSolution);
    }
    let steps = s.steps();
    let (mut u, mut v) = (0.0, 0.0);
    let mut m = moments(&steps, u, v);
    let mut iterations = 0;
    while residual(&m) >= 1e-14 && iterations < NEWTON_MAX_ITER {
        iterations += 1;
        let det = m.h[0][0] * m.h[1][1] - m.h[0][1] * m.h[1][0];
        if !(det > 0.0) {
            break;
        }
        let du = -(m.h[1][1] * m.g[0] - m.h[0][1] * m.g[1]) / det;
        let dv = -(m.h[0][0] * m.g[1] - m.h[1][0] * m.g[0]) / det;
        let mut t = 1.0;
        let mut next = moments(&steps, u + du, v + dv);
        while next.f > m.f && t > 1e-12 {
            t *= 0.5;
            next = moments(&steps, u + t * du, v + t * dv);
        }
        u += t * du;
        v += t * dv;
        m = next;
    }
    if residual(&m) >= RESIDUAL_TOL {
        let (bu, bv) = nested_bisection(&steps).ok_or(Error::NoPositiveSolution)?;
        u = bu;
        v = bv;
        m = moments(&steps, u, v);
        if residual(&m) >= RESIDUAL_TOL {
            return Err(Error::NoPositiveSolution);
        }
    }
    Ok(CriticalPoint {
        alpha: u.exp(),
        beta: v.exp(),
        z_g: 1.0 / m.f,
        residual: residual(&m),
        iterations,
    })
}

fn bisect_increasing<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn nested_bisection(steps: &[(i8, i8)]) -> Option<(f64, f64)> {
    const BOUND: f64 = 60.0;
    let inner = |v: f64| bisect_increasing(|u| moments(steps, u, v).g[0], -BOUND, BOUND);
    let outer = |v: f64| inner(v).map_or(f64::NAN, |u| moments(steps, u, v).g[1]);
    let v = bisect_increasing(outer, -BOUND, BOUND)?;
    Some((inner(v)?, v))
}

// ---------------------------------------------------------------------------
// Exact univariate polynomials over Q, ascending coefficients.

#[derive(Debug, Clone, PartialEq)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn trimmed(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn derivative(&self) -> RatPoly {
        RatPoly::trimmed(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let mut rem = self.0.clone();
        if self.0.len() < d.0.len() {
            return (RatPoly(vec![]), RatPoly::trimmed(rem));
        }
        let dl = d.0.last().expect("nonzero divisor").clone();
        let mut quot = vec![BigRational::zero(); self.0.len() - d.0.len() + 1];
        for k in (0..quot.len()).rev() {
            let coef = &rem[k + d.0.len() - 1] / &dl;
            for (m, dc) in d.0.iter().enumerate() {
                rem[k + m] -= &coef * dc;
            }
            quot[k] = coef;
        }
        rem.truncate(d.0.len() - 1);
        (RatPoly::trimmed(quot), RatPoly::trimmed(rem))
    }

    fn monic(&self) -> RatPoly {
        let lead = self.0.last().expect("nonzero").clone();
        RatPoly(self.0.iter().map(|c| c / &lead).collect())
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn sign_changes(chain: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Isolates and refines the positive roots of a square-free polynomial.
/// Roots that are rationals with denominator at most 64 are returned exactly.
fn positive_roots(p: &RatPoly) -> Vec<BigRational> {
    if p.degree() == 0 {
        return vec![];
    }
    let lead = p.0.last().unwrap().abs();
    let bound = BigRational::one() + p.0.iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |a, b| a.max(b));
    let chain = sturm_chain(p);
    let count = |lo: &BigRational, hi: &BigRational| sign_changes(&chain, lo) - sign_changes(&chain, hi);
    let mut stack = vec![(BigRational::zero(), bound)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            isolated.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if p.sign_at(&mid) == 0 {
            isolated.push((mid.clone(), mid.clone()));
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    let mut roots: Vec<BigRational> = isolated.into_iter().map(|(lo, hi)| refine(p, lo, hi)).collect();
    roots.sort();
    roots.dedup();
    roots
}

fn refine(p: &RatPoly, mut lo: BigRational, mut hi: BigRational) -> BigRational {
    if lo == hi {
        return lo;
    }
    if p.sign_at(&hi) == 0 {
        return hi;
    }
    let two = BigRational::from_integer(2.into());
    let hi_sign = p.sign_at(&hi);
    for _ in 0..80 {
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == 0 {
            return mid;
        }
        if s == hi_sign {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    for q in 1..=64i64 {
        let qq = BigInt::from(q);
        let num = (&lo * BigRational::from_integer(qq.clone())).ceil().to_integer();
        let cand = BigRational::new(num, qq);
        if cand >= lo && cand <= hi && p.sign_at(&cand) == 0 {
            return cand;
        }
    }
    (&lo + &hi) / &two
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = val;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant in `x` of `z² d(x,z)` and its `x`-derivative, as an exact
/// polynomial in `z`.
fn discriminant_resultant(s: &StepSet) -> RatPoly {
    let coeffs = scaled_discriminant_x(s);
    let n = (0..5).rev().find(|&k| coeffs[k] != [0; 3]).unwrap_or(0);
    if n < 1 {
        return RatPoly(vec![]);
    }
    let size = 2 * n - 1;
    let degree_bound = 2 * size;
    let eval_at = |z: i64| -> BigInt {
        let p: Vec<BigInt> = (0..=n)
            .map(|k| BigInt::from(coeffs[k][0] + coeffs[k][1] * z + coeffs[k][2] * z * z))
            .collect();
        let dp: Vec<BigInt> = (1..=n).map(|k| &p[k] * BigInt::from(k)).collect();
        let mut m = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n - 1 {
            for k in 0..=n {
                m[row][row + n - k] = p[k].clone();
            }
        }
        for row in 0..n {
            for k in 0..n {
                m[n - 1 + row][row + n - 1 - k] = dp[k].clone();
            }
        }
        bareiss_det(m)
    };
    let xs: Vec<i64> = (0..=degree_bound as i64).collect();
    let ys: Vec<BigInt> = xs.iter().map(|&z| eval_at(z)).collect();
    lagrange(&xs, &ys)
}

fn lagrange(xs: &[i64], ys: &[BigInt]) -> RatPoly {
    let n = xs.len();
    let mut out = vec![BigRational::zero(); n];
    for k in 0..n {
        if ys[k].is_zero() {
            continue;
        }
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for (j, &xj) in xs.iter().enumerate() {
            if j == k {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * BigRational::from_integer(BigInt::from(xj));
            }
            basis = next;
            denom *= BigInt::from(xs[k] - xj);
        }
        let scale = BigRational::new(ys[k].clone(), denom);
        for (d, c) in basis.into_iter().enumerate() {
            out[d] += c * &scale;
        }
    }
    RatPoly::trimmed(out)
}

/// Details of the resultant route to `z_g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultantRoot {
    pub z_g: f64,
    /// Exact value when it is a rational with small denominator.
    pub exact: Option<String>,
    /// Positive roots of the square-free resultant rejected before `z_g`.
    pub rejected: Vec<f64>,
    pub resultant_degree: usize,
}

/// Smallest positive `z` at which `d(·,z)` has a double root and that root is
/// the collision `x₂ = x₃`.
pub fn z_g_via_resultant(s: &StepSet) -> Result<ResultantRoot> {
    if s.is_singular() {
        return Err(Error::SingularWalk);
    }
    let r = discriminant_resultant(s);
    if r.is_zero() {
        return Err(Error::NoPositiveSolution);
    }
    let square_free = r.div_rem(&r.gcd(&r.derivative())).0;
    let mut rejected = Vec::new();
    for root in positive_roots(&square_free) {
        let z = root.to_f64().unwrap_or(f64::NAN);
        if collision_at(s, z) {
            let exact = (root.denom() <= &BigInt::from(64)).then(|| root.to_string());
            return Ok(ResultantRoot {
                z_g: z,
                exact,
                rejected,
                resultant_degree: r.degree(),
            });
        }
        rejected.push(z);
    }
    Err(Error::ValidationMismatch)
}

fn collision_at(s: &StepSet, z: f64) -> bool {
    let Ok(bp) = branch_points(s, z) else {
        return false;
    };
    let (Some(x2), Some(x3)) = (bp.x_roots[1].finite(), bp.x_roots[2].finite()) else {
        return false;
    };
    let scale = x2.norm().max(1.0);
    (x3 - x2).norm() <= COLLISION_CHECK_TOL * scale
        && x2.re > 0.0
        && x2.im.abs() <= COLLISION_CHECK_TOL * scale
}

fn small_sum(p: &[u8; 3]) -> f64 {
    p.iter().map(|&v| v as f64).sum()
}

/// `1/(b(1) + 2√(a(1)c(1)))`.
pub fn z_y(s: &StepSet) -> Result<f64> {
    let k = KernelPolys::new(s);
    closed_form(small_sum(&k.a), small_sum(&k.b), small_sum(&k.c), "z_Y")
}

/// `1/(b̃(1) + 2√(ã(1)c̃(1)))`.
pub fn z_x(s: &StepSet) -> Result<f64> {
    let k = KernelPolys::new(s);
    closed_form(small_sum(&k.a_tilde), small_sum(&k.b_tilde), small_sum(&k.c_tilde), "z_X")
}

fn closed_form(a: f64, b: f64, c: f64, name: &'static str) -> Result<f64> {
    let denom = b + 2.0 * (a * c).sqrt();
    if denom == 0.0 {
        return Err(Error::DivisionByZero(name));
    }
    Ok(1.0 / denom)
}

/// One of the four candidate singularities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Candidate {
    #[serde(rename = "z_g")]
    ZG,
    #[serde(rename = "z_X")]
    ZX,
    #[serde(rename = "z_Y")]
    ZY,
    #[serde(rename = "1/|S|")]
    InvS,
}

/// First positive singularity of one generating function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstSingularity {
    /// Every candidate the table designates for this case; more than one
    /// means the cells coincide.
    pub designated: Vec<Candidate>,
    pub value: f64,
    pub tie: bool,
    /// Largest difference between the designated candidates' values.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodAgreement {
    pub z_g_newton: f64,
    pub z_g_resultant: Option<f64>,
    pub difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub z_g: f64,
    pub z_x: f64,
    pub z_y: f64,
    pub inv_s: f64,
    pub drift_sign: (Sign, Sign),
    pub cov_sign: Sign,
    pub fs_q10: FirstSingularity,
    pub fs_q01: FirstSingularity,
    pub fs_q11: FirstSingularity,
    pub critical_point: CriticalPoint,
    pub agreement: MethodAgreement,
}

/// Candidates designated for `(Q10, Q01, Q11)` by drift signs and covariance.
pub fn designated(drift: (Sign, Sign), cov: Sign) -> [Vec<Candidate>; 3] {
    use Candidate::*;
    use Sign::*;
    let split = |le: Candidate, ge: Candidate| match cov {
        Negative => vec![le],
        Positive => vec![ge],
        Zero => vec![le, ge],
    };
    match drift {
        (Positive, Positive) => [vec![ZY], vec![ZX], vec![InvS]],
        (Positive, Zero) => [vec![ZY, InvS], split(ZX, ZG), vec![InvS]],
        (Zero, Positive) => [split(ZY, ZG), vec![ZX, InvS], vec![InvS]],
        (Zero, Zero) => [vec![ZG, ZY, InvS], vec![ZG, ZX, InvS], vec![ZG, ZX, ZY, InvS]],
        (Positive, Negative) => [vec![ZY], vec![ZG], vec![ZY]],
        (Negative, Positive) => [vec![ZG], vec![ZX], vec![ZX]],
        (Zero, Negative) => [split(ZG, ZY), vec![ZG], split(ZG, ZY)],
        (Negative, Zero) => [vec![ZG], split(ZG, ZX), split(ZG, ZX)],
        (Negative, Negative) => [vec![ZG], vec![ZG], vec![ZG]],
    }
}

pub fn classify_first_singularities(s: &StepSet) -> Result<SingularityReport> {
    if s.is_singular() {
        return Err(Error::SingularWalk);
    }
    let cp = critical_point(s)?;
    let resultant = z_g_via_resultant(s).ok().map(|r| r.z_g);
    let z_g = cp.z_g;
    let zx = z_x(s)?;
    let zy = z_y(s)?;
    let inv_s = 1.0 / s.cardinality() as f64;
    let drift = s.drift();
    let drift_sign = drift.signs();
    let cov_sign = drift.covariance_sign();
    let value_of = |c: Candidate| match c {
        Candidate::ZG => z_g,
        Candidate::ZX => zx,
        Candidate::ZY => zy,
        Candidate::InvS => inv_s,
    };
    let build = |cands: Vec<Candidate>| {
        let values: Vec<f64> = cands.iter().map(|&c| value_of(c)).collect();
        let hi = values.iter().cloned().fold(f64::MIN, f64::max);
        let lo = values.iter().cloned().fold(f64::MAX, f64::min);
        FirstSingularity {
            value: values[0],
            tie: cands.len() > 1,
            spread: hi - lo,
            designated: cands,
        }
    };
    let [q10, q01, q11] = designated(drift_sign, cov_sign);
    Ok(SingularityReport {
        z_g,
        z_x: zx,
        z_y: zy,
        inv_s,
        drift_sign,
        cov_sign,
        fs_q10: build(q10),
        fs_q01: build(q01),
        fs_q11: build(q11),
        critical_point: cp,
        agreement: MethodAgreement {
            z_g_newton: z_g,
            z_g_resultant: resultant,
            difference: resultant.map(|r| (r - z_g).abs()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::discriminant_x;
    use proptest::prelude::*;

    fn preset(name: &str) -> StepSet {
        StepSet::preset(name).unwrap()
    }

    #[test]
    fn zero_drift_critical_points() {
        let cp = critical_point(&preset("simple")).unwrap();
        assert_eq!((cp.alpha, cp.beta, cp.z_g), (1.0, 1.0, 0.25));
        assert_eq!(critical_point(&preset("kreweras")).unwrap().z_g, 1.0 / 3.0);
        let six = StepSet::new([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]).unwrap();
        assert_eq!(critical_point(&six).unwrap().z_g, 1.0 / 6.0);
    }

    #[test]
    fn critical_point_rejections() {
        let singular = StepSet::new([(1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(critical_point(&singular), Err(Error::SingularWalk));
        let half_plane = StepSet::new([(-1, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(critical_point(&half_plane), Err(Error::NoPositiveSolution));
    }

    #[test]
    fn drifting_critical_point_solves_system() {
        // reverse Kreweras with an extra East step has positive x-drift
        let s = StepSet::new([(1, 0), (0, 1), (-1, -1), (1, 1)]).unwrap();
        let cp = critical_point(&s).unwrap();
        let (a, b) = (cp.alpha, cp.beta);
        let gx: f64 = s.steps().iter().map(|&(i, j)| i as f64 * a.powi(i as i32) * b.powi(j as i32)).sum();
        let gy: f64 = s.steps().iter().map(|&(i, j)| j as f64 * a.powi(i as i32) * b.powi(j as i32)).sum();
        assert!(gx.abs() < 1e-12 && gy.abs() < 1e-12);
        assert!(cp.z_g > 0.25);
        let fallback = nested_bisection(&s.steps()).unwrap();
        assert!((fallback.0.exp() - a).abs() < 1e-9 && (fallback.1.exp() - b).abs() < 1e-9);
    }

    #[test]
    fn resultant_route() {
        let r = z_g_via_resultant(&preset("simple")).unwrap();
        assert_eq!(r.z_g, 0.25);
        assert_eq!(r.exact.as_deref(), Some("1/4"));
        for name in ["kreweras", "gessel", "gouyou-beauchamps"] {
            let s = preset(name);
            let a = z_g_via_resultant(&s).unwrap().z_g;
            let b = critical_point(&s).unwrap().z_g;
            assert!((a - b).abs() < 1e-9, "{name}: {a} vs {b}");
        }
    }

    #[test]
    fn exact_polynomial_helpers() {
        let q = |v: i64| BigRational::from_integer(v.into());
        // (t - 1)^2 (t - 3) = t^3 - 5t^2 + 7t - 3
        let p = RatPoly(vec![q(-3), q(7), q(-5), q(1)]);
        let sf = p.div_rem(&p.gcd(&p.derivative())).0;
        assert_eq!(sf.degree(), 2);
        let roots = positive_roots(&sf);
        assert_eq!(roots, vec![q(1), q(3)]);
        let m = vec![vec![2.into(), 1.into()], vec![7.into(), 4.into()]];
        assert_eq!(bareiss_det(m), BigInt::from(1));
        let interp = lagrange(&[0, 1, 2], &[1.into(), 2.into(), 5.into()]);
        assert_eq!(interp, RatPoly(vec![q(1), q(0), q(1)]));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(z_y(&preset("simple")).unwrap(), 0.25);
        assert_eq!(z_y(&preset("kreweras")).unwrap(), 1.0 / 3.0);
        for name in ["simple", "kreweras", "gessel", "gouyou-beauchamps"] {
            let s = preset(name);
            let zy = z_y(&s).unwrap();
            assert!(discriminant_x(&s, zy).eval(1.0).abs() < 1e-12);
        }
        let north_only = StepSet::new([(0, 1)]).unwrap();
        assert_eq!(z_y(&north_only), Err(Error::DivisionByZero("z_Y")));
    }

    #[test]
    fn table_rows() {
        let simple = classify_first_singularities(&preset("simple")).unwrap();
        for fs in [&simple.fs_q10, &simple.fs_q01, &simple.fs_q11] {
            assert_eq!(fs.value, 0.25);
            assert!(fs.spread < 1e-15);
        }
        // drift (+,+)
        let s = StepSet::new([(1, 0), (0, 1), (-1, -1), (1, 1), (1, -1), (-1, 1)]).unwrap();
        assert_eq!(s.drift().signs(), (Sign::Positive, Sign::Positive));
        let r = classify_first_singularities(&s).unwrap();
        assert_eq!(r.fs_q10.designated, vec![Candidate::ZY]);
        assert_eq!(r.fs_q01.designated, vec![Candidate::ZX]);
        assert_eq!(r.fs_q11.value, r.inv_s);
        // drift (−,−)
        let s = StepSet::new([(-1, 0), (0, -1), (1, 1), (-1, -1)]).unwrap();
        let r = classify_first_singularities(&s).unwrap();
        assert_eq!(r.fs_q11.designated, vec![Candidate::ZG]);
        assert_eq!(r.fs_q10.value, r.z_g);
    }

    #[test]
    fn mirror_swaps_roles() {
        let all: Vec<StepSet> = StepSet::all().filter(|s| s.is_analyzable()).collect();
        for s in all {
            let r = classify_first_singularities(&s).unwrap();
            let m = classify_first_singularities(&s.mirror()).unwrap();
            assert_eq!(r.z_x, m.z_y);
            assert!((r.fs_q10.value - m.fs_q01.value).abs() < 1e-12);
            assert!((r.fs_q11.value - m.fs_q11.value).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn sandwich_and_zero_drift(mask in 1u8..) {
            let s = StepSet::from_mask(mask).unwrap();
            prop_assume!(s.is_analyzable());
            let zg = critical_point(&s).unwrap().z_g;
            let inv = 1.0 / s.cardinality() as f64;
            let (zx, zy) = (z_x(&s).unwrap(), z_y(&s).unwrap());
            prop_assert!(inv <= zy + 1e-10 && zy <= zg + 1e-10);
            prop_assert!(inv <= zx + 1e-10 && zx <= zg + 1e-10);
            if s.drift().is_zero() {
                prop_assert_eq!(zg, inv);
                prop_assert_eq!(z_g_via_resultant(&s).unwrap().z_g, inv);
            } else {
                prop_assert!(zg > inv + 1e-12);
            }
        }
    }
}
