//! Integral representations of the boundary generating functions
//! `Q(0,0,z)`, `Q(1,0,z)`, `Q(0,1,z)` and `Q(1,1,z)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::enumerate::SeriesLabel;
use crate::error::{Error, Result};
use crate::kernel::{self, CurveParam, KernelPolys, Region, BOUNDARY_BAND};
use crate::poly::Poly;
use crate::quad::integrate;
use crate::stepset::StepSet;

const CONTOUR_TOL: f64 = 1e-9;
const MIN_NODES: usize = 64;
const MAX_NODES: usize = 1 << 14;
const GLUING_TOL: f64 = 1e-9;
const GLUING_SAMPLES: usize = 256;
const CAUCHY_NODES: usize = 32;
const LIMIT_OFFSET: f64 = 1e-4;

/// How a [`GFValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    CircleClosedForm,
    CgfIntegral,
    Relation,
}

/// A numerically evaluated generating function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GFValue {
    pub value: f64,
    pub z: f64,
    pub method: Method,
    pub quadrature_error_estimate: f64,
    /// The evaluation point sat on the kernel curve.
    pub on_boundary: bool,
    /// Obtained as a one-sided limit at a removable singularity.
    pub one_sided_limit: bool,
}

impl GFValue {
    fn new(value: f64, z: f64, method: Method, error: f64) -> Self {
        GFValue {
            value,
            z,
            method,
            quadrature_error_estimate: error,
            on_boundary: false,
            one_sided_limit: false,
        }
    }
}

/// A conformal gluing function for the domain bounded by a kernel curve:
/// conformal on the domain up to a single pole at `t = 0`, and taking equal
/// values at conjugate points of the curve.
pub trait Cgf: Send + Sync {
    fn w(&self, t: Complex64, z: f64) -> Complex64;
    fn dw(&self, t: Complex64, z: f64) -> Complex64;
    fn pole(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    /// Which domain the function glues.
    fn domain(&self) -> &str;
}

/// `t + 1/t`, the gluing function of the unit disc.
#[derive(Debug, Clone, Copy, Default)]
pub struct CircleCgf;

impl Cgf for CircleCgf {
    fn w(&self, t: Complex64, _z: f64) -> Complex64 {
        t + 1.0 / t
    }
    fn dw(&self, t: Complex64, _z: f64) -> Complex64 {
        1.0 - 1.0 / (t * t)
    }
    fn domain(&self) -> &str {
        "unit-disc"
    }
}

pub fn circle_cgf() -> CircleCgf {
    CircleCgf
}

fn check_simple_range(z: f64) -> Result<()> {
    if !(z.abs() < 0.25) {
        return Err(Error::OutOfRange { name: "z", value: z });
    }
    Ok(())
}

/// `(A − √(A² − 4z²))/z²` with `A = 1 − 2uz`, in the cancellation-free form.
fn circle_density(u: f64, z: f64) -> f64 {
    let a = 1.0 - 2.0 * u * z;
    4.0 / (a + (a * a - 4.0 * z * z).max(0.0).sqrt())
}

/// `Q(0,0,z)` of the simple walk for `|z| < 1/4`, by quadrature of the
/// semicircle-weighted integral written in `u = cos θ`.
pub fn q00_simple(z: f64) -> Result<GFValue> {
    check_simple_range(z)?;
    let q = integrate(
        |theta: f64| {
            let s = theta.sin();
            circle_density(theta.cos(), z) * s * s
        },
        0.0,
        PI,
        1e-12,
    )?;
    Ok(GFValue::new(q.value / PI, z, Method::CircleClosedForm, q.error_estimate / PI))
}

/// `Q(1,0,z)` of the simple walk for `|z| < 1/4`. The weight
/// `√((1+u)/(1−u))` is removed by `u = 1 − v²`.
pub fn q10_simple(z: f64) -> Result<GFValue> {
    check_simple_range(z)?;
    let q = integrate(
        |v: f64| circle_density(1.0 - v * v, z) * 2.0 * (2.0 - v * v).max(0.0).sqrt(),
        0.0,
        2f64.sqrt(),
        1e-12,
    )?;
    let scale = 0.5 / PI;
    Ok(GFValue::new(q.value * scale, z, Method::CircleClosedForm, q.error_estimate * scale))
}

/// Solves `(|S| − 1/z)Q(1,1) = c(1)Q(1,0) + c̃(1)Q(0,1) − δ₋₁,₋₁Q(0,0) − 1/z`.
/// `q00` is only consulted when the walk has a South-West step.
pub fn q11_from_relation(
    s: &StepSet,
    z: f64,
    q10: &GFValue,
    q01: &GFValue,
    q00: Option<&GFValue>,
) -> Result<GFValue> {
    let card = s.cardinality() as f64;
    if z == 0.0 || (z * card - 1.0).abs() < 1e-12 {
        return Err(Error::RemovableSingularity);
    }
    let polys = KernelPolys::new(s);
    let c1: f64 = polys.c.iter().map(|&v| v as f64).sum();
    let ct1: f64 = polys.c_tilde.iter().map(|&v| v as f64).sum();
    let delta = s.delta(-1, -1) as f64;
    let (q00v, q00e) = match q00 {
        Some(v) => (v.value, v.quadrature_error_estimate),
        None if delta == 0.0 => (0.0, 0.0),
        None => return Err(Error::CaseUndetermined("Q(0,0,z) is required when (-1,-1) is a step")),
    };
    let denom = card - 1.0 / z;
    let value = (c1 * q10.value + ct1 * q01.value - delta * q00v - 1.0 / z) / denom;
    let error = (c1 * q10.quadrature_error_estimate + ct1 * q01.quadrature_error_estimate + delta * q00e) / denom.abs();
    let mut out = GFValue::new(value, z, Method::Relation, error);
    out.on_boundary = q10.on_boundary || q01.on_boundary;
    Ok(out)
}

/// `Q(1,1,z)` through [`q11_from_relation`], replacing the value at the
/// removable point `z = 1/|S|` by a quadratic extrapolation from the left.
pub fn q11_with_limit<F>(s: &StepSet, z: f64, mut inputs: F) -> Result<GFValue>
where
    F: FnMut(f64) -> Result<(GFValue, GFValue, Option<GFValue>)>,
{
    let mut at = |zz: f64| -> Result<GFValue> {
        let (q10, q01, q00) = inputs(zz)?;
        q11_from_relation(s, zz, &q10, &q01, q00.as_ref())
    };
    match at(z) {
        Err(Error::RemovableSingularity) => {
            let h = LIMIT_OFFSET * z;
            let v1 = at(z - h)?;
            let v2 = at(z - 2.0 * h)?;
            let v4 = at(z - 4.0 * h)?;
            let value = (8.0 * v1.value - 6.0 * v2.value + v4.value) / 3.0;
            let mut out = GFValue::new(value, z, Method::Relation, (value - v1.value).abs() + v1.quadrature_error_estimate);
            out.one_sided_limit = true;
            out.on_boundary = v1.on_boundary;
            Ok(out)
        }
        other => other,
    }
}

/// A contour integral from the general representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes: usize,
    pub on_boundary: bool,
}

/// Largest relative value of `|w(t) − w(t̄)|` over samples of the upper edge.
pub fn gluing_defect(param: &CurveParam, w: &dyn Cgf) -> f64 {
    let z = param.z();
    (0..GLUING_SAMPLES)
        .map(|k| {
            let t = param.point(PI * (k as f64 + 0.5) / GLUING_SAMPLES as f64);
            let wt = w.w(t, z);
            let defect = (wt - w.w(t.conj(), z)).norm() / wt.norm().max(1.0);
            if defect.is_finite() {
                defect
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

/// Kernel curve for `s` at `z`, accepted only if `w` glues it.
pub fn glued_curve(s: &StepSet, z: f64, w: &dyn Cgf) -> Result<CurveParam> {
    if w.pole().norm() != 0.0 {
        return Err(Error::CgfUnavailable);
    }
    let param = CurveParam::new(s, z)?;
    if !param.is_bounded() {
        return Err(Error::CgfUnavailable);
    }
    let defect = gluing_defect(&param, w);
    if defect > GLUING_TOL {
        return Err(Error::GluingViolation(defect));
    }
    Ok(param)
}

/// `+1` when `φ ↦ X₀(y(φ))` runs counterclockwise.
fn orientation(param: &CurveParam) -> f64 {
    let n = 512;
    let area: f64 = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            (param.point(phi).conj() * param.derivative(phi)).im
        })
        .sum();
    area.signum()
}

/// Trapezoid rule for a `2π`-periodic integrand, doubling the node count
/// until successive values agree.
fn periodic_trapezoid<F: Fn(f64) -> Complex64>(f: F) -> Result<(Complex64, f64, usize)> {
    let mut n = MIN_NODES;
    let mut sum: Complex64 = (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).sum();
    let mut value = sum * (2.0 * PI / n as f64);
    while n < MAX_NODES {
        let extra: Complex64 = (0..n).map(|k| f(2.0 * PI * (k as f64 + 0.5) / n as f64)).sum();
        sum += extra;
        n *= 2;
        let next = sum * (2.0 * PI / n as f64);
        let diff = (next - value).norm();
        value = next;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::QuadratureFailure(f64::INFINITY));
        }
        if diff < CONTOUR_TOL {
            return Ok((value, diff, n));
        }
    }
    Err(Error::QuadratureFailure((value - sum * (2.0 * PI / n as f64)).norm().max(CONTOUR_TOL)))
}

fn interior_integral(param: &CurveParam, x: Complex64, w: &dyn Cgf) -> Result<ContourValue> {
    let z = param.z();
    let wx = w.w(x, z);
    let factor = orientation(param) / (Complex64::new(0.0, 2.0 * PI * z));
    let (value, error, nodes) = periodic_trapezoid(|phi| {
        let t = param.point(phi);
        t * param.y_at(phi) * w.dw(t, z) * param.derivative(phi) / (w.w(t, z) - wx) * factor
    })?;
    Ok(ContourValue {
        value,
        error_estimate: error,
        nodes,
        on_boundary: false,
    })
}

/// The contour folded onto the upper edge: conjugate points share `w`, so
/// the two halves combine into `y (t − t̄) dW/(W − w(x))`, whose only
/// singularity at a real boundary point is removable.
fn boundary_integral(param: &CurveParam, x: Complex64, w: &dyn Cgf) -> Result<ContourValue> {
    if x.im.abs() > BOUNDARY_BAND {
        return Err(Error::CaseUndetermined("boundary point off the real axis"));
    }
    let z = param.z();
    let wx = w.w(Complex64::new(x.re, 0.0), z);
    let factor = orientation(param) / (Complex64::new(0.0, 2.0 * PI * z));
    let q = integrate(
        |psi: f64| {
            let t = param.point(psi);
            let dw = w.dw(t, z) * param.derivative(psi);
            param.y_at(psi) * (t - t.conj()) * dw / (w.w(t, z) - wx) * factor
        },
        0.0,
        PI,
        1e-11,
    )?;
    Ok(ContourValue {
        value: q.value,
        error_estimate: q.error_estimate,
        nodes: 0,
        on_boundary: true,
    })
}

fn contour_at(param: &CurveParam, x: Complex64, w: &dyn Cgf) -> Result<ContourValue> {
    match kernel::locate(param, x) {
        Region::Inside => interior_integral(param, x, w),
        Region::OnBoundary => boundary_integral(param, x, w),
        Region::Outside => Err(Error::PointOutsideDomain),
    }
}

/// `c(x)Q(x,0,z) − c(0)Q(0,0,z)` as the contour integral
/// `(1/2πiz) ∮ t Y₀(t) w'(t)/(w(t) − w(x)) dt` over `M_z`.
pub fn qx0_integral(s: &StepSet, x: Complex64, z: f64, w: &dyn Cgf) -> Result<ContourValue> {
    let param = glued_curve(s, z, w)?;
    contour_at(&param, x, w)
}

/// Which route determines `Q(0,0,z)`, by the shape of `c(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Q00Case {
    /// `c(0) = 0`: limit of the representation at `x → 0`.
    VanishingAtOrigin,
    /// `c(0) ≠ 0` and `c` non-constant: evaluate at a root of `c`.
    RootOfC(Vec<Complex64>),
    /// `c` is a nonzero constant: the functional equation on the kernel.
    ConstantC,
}

pub fn q00_case(s: &StepSet) -> Result<Q00Case> {
    let c = KernelPolys::new(s).c;
    if c == [0, 0, 0] {
        return Err(Error::CaseUndetermined("c(x) vanishes identically"));
    }
    if c[0] == 0 {
        return Ok(Q00Case::VanishingAtOrigin);
    }
    if c[1] == 0 && c[2] == 0 {
        return Ok(Q00Case::ConstantC);
    }
    let roots = Poly::new(c.iter().map(|&v| v as f64).collect()).roots()?;
    Ok(Q00Case::RootOfC(roots))
}

fn c_at(c: &[u8; 3], x: Complex64) -> Complex64 {
    kernel::eval_small(c, x)
}

/// `Q(0,0,z)` from the general representation. `w` glues `G(M_z)`; `w_y`
/// glues the mirrored domain and is needed only when `c` is constant.
pub fn q00_general(s: &StepSet, z: f64, w: &dyn Cgf, w_y: Option<&dyn Cgf>) -> Result<GFValue> {
    let case = q00_case(s)?;
    let param = glued_curve(s, z, w)?;
    let c = KernelPolys::new(s).c;
    match case {
        Q00Case::VanishingAtOrigin => origin_limit(&param, &c, w),
        Q00Case::RootOfC(roots) => {
            let c0 = c[0] as f64;
            for r in &roots {
                if kernel::locate(&param, *r) == Region::Inside {
                    let v = interior_integral(&param, *r, w)?;
                    return Ok(GFValue::new(-v.value.re / c0, z, Method::CgfIntegral, v.error_estimate / c0));
                }
            }
            let listed: Vec<String> = roots.iter().map(|r| format!("{:.6}{:+.6}i", r.re, r.im)).collect();
            Err(Error::RootOutsideDomain(listed.join(", ")))
        }
        Q00Case::ConstantC => {
            let w_y = w_y.ok_or(Error::CgfUnavailable)?;
            let mirror = s.mirror();
            let param_y = glued_curve(&mirror, z, w_y)?;
            kernel_point_route(s, &param, w, &param_y, w_y)
        }
    }
}

/// Mean of `I(x)/c(x)` over a circle around the origin, which is the value
/// of the removable singularity at `x = 0`.
fn origin_limit(param: &CurveParam, c: &[u8; 3], w: &dyn Cgf) -> Result<GFValue> {
    let origin = Complex64::new(0.0, 0.0);
    if kernel::locate(param, origin) != Region::Inside {
        return Err(Error::PointOutsideDomain);
    }
    let radius = 0.5 * kernel::distance_to_curve(param, origin).min(1.0);
    let mut samples = Vec::with_capacity(CAUCHY_NODES);
    let mut quad_error = 0.0f64;
    for k in 0..CAUCHY_NODES {
        let x = Complex64::from_polar(radius, 2.0 * PI * (k as f64 + 0.5) / CAUCHY_NODES as f64);
        let v = interior_integral(param, x, w)?;
        let cx = c_at(c, x);
        quad_error = quad_error.max(v.error_estimate / cx.norm());
        samples.push(v.value / cx);
    }
    let fine: Complex64 = samples.iter().sum::<Complex64>() / CAUCHY_NODES as f64;
    let coarse: Complex64 = samples.iter().step_by(2).sum::<Complex64>() / (CAUCHY_NODES / 2) as f64;
    let error = (fine - coarse).norm() + quad_error;
    Ok(GFValue::new(fine.re, param.z(), Method::CgfIntegral, error))
}

/// Solves the functional equation at a kernel root `(x, y)` for
/// `Q(0,0,z)`, given `ix = c(x)Q(x,0) − c(0)Q(0,0)` and
/// `jy = c̃(y)Q(0,y) − c̃(0)Q(0,0)`.
pub fn q00_from_kernel_point(
    s: &StepSet,
    z: f64,
    x: Complex64,
    y: Complex64,
    ix: Complex64,
    jy: Complex64,
) -> Result<Complex64> {
    let delta = s.delta(-1, -1) as f64;
    if delta == 0.0 {
        return Err(Error::DivisionByZero("coefficient of Q(0,0,z) at a kernel root"));
    }
    Ok((x * y / z - ix - jy) / delta)
}

const KERNEL_POINT_CANDIDATES: [f64; 8] = [0.5, 0.3, 0.7, 0.2, 0.9, -0.3, -0.5, -0.7];

fn kernel_point_route(
    s: &StepSet,
    param: &CurveParam,
    w: &dyn Cgf,
    param_y: &CurveParam,
    w_y: &dyn Cgf,
) -> Result<GFValue> {
    let z = param.z();
    for &xr in &KERNEL_POINT_CANDIDATES {
        let x = Complex64::new(xr, 0.0);
        if kernel::locate(param, x) != Region::Inside {
            continue;
        }
        let Ok(branches) = kernel::y_branches(s, x, z) else {
            continue;
        };
        let y = branches.branch0;
        if y.norm() > 1.0 || kernel::locate(param_y, y) != Region::Inside {
            continue;
        }
        let ix = interior_integral(param, x, w)?;
        let jy = interior_integral(param_y, y, w_y)?;
        let value = q00_from_kernel_point(s, z, x, y, ix.value, jy.value)?;
        return Ok(GFValue::new(value.re, z, Method::CgfIntegral, ix.error_estimate + jy.error_estimate));
    }
    Err(Error::CaseUndetermined("no kernel root (x, Y0(x)) with both coordinates inside the unit disc and the domains"))
}

/// `Q(1,0,z)` from the general representation, by the position of `1`
/// relative to `G(M_z)`.
pub fn q10_general(s: &StepSet, z: f64, w: &dyn Cgf, w_y: Option<&dyn Cgf>) -> Result<GFValue> {
    let param = glued_curve(s, z, w)?;
    let c = KernelPolys::new(s).c;
    let c1: f64 = c.iter().map(|&v| v as f64).sum();
    if c1 == 0.0 {
        return Err(Error::DivisionByZero("c(1)"));
    }
    let q00 = if c[0] != 0 { Some(q00_general(s, z, w, w_y)?) } else { None };
    let (c0q00, q00_err) = q00
        .as_ref()
        .map(|v| (c[0] as f64 * v.value, c[0] as f64 * v.quadrature_error_estimate))
        .unwrap_or((0.0, 0.0));
    let one = Complex64::new(1.0, 0.0);
    let (lhs, err, on_boundary) = match kernel::locate(&param, one) {
        Region::Inside => {
            let v = interior_integral(&param, one, w)?;
            (v.value + c0q00, v.error_estimate, false)
        }
        Region::OnBoundary => {
            let v = boundary_integral(&param, one, w)?;
            (v.value + c0q00, v.error_estimate, true)
        }
        Region::Outside => {
            let y0 = kernel::y_branches(s, one, z)?.branch0;
            let xp = kernel::x_branches(s, y0, z)?.branch0;
            if kernel::locate(&param, xp) != Region::Inside {
                return Err(Error::RootOutsideDomain(format!("X0(Y0(1)) = {:.6}{:+.6}i", xp.re, xp.im)));
            }
            let v = interior_integral(&param, xp, w)?;
            (v.value + c0q00 + y0 / z * (one - xp), v.error_estimate, false)
        }
    };
    let mut out = GFValue::new(lhs.re / c1, z, Method::CgfIntegral, (err + q00_err) / c1);
    out.on_boundary = on_boundary;
    Ok(out)
}

/// `Q(0,1,z)`: [`q10_general`] on the mirrored walk, with the roles of the
/// two gluing functions exchanged.
pub fn q01_general(s: &StepSet, z: f64, w: &dyn Cgf, w_y: Option<&dyn Cgf>) -> Result<GFValue> {
    let w_y = w_y.ok_or(Error::CgfUnavailable)?;
    q10_general(&s.mirror(), z, w_y, Some(w))
}

/// `Q(1,1,z)` from the general values of the three boundary series.
pub fn q11_general(s: &StepSet, z: f64, w: &dyn Cgf, w_y: Option<&dyn Cgf>) -> Result<GFValue> {
    q11_with_limit(s, z, |zz| {
        let q10 = q10_general(s, zz, w, w_y)?;
        let q01 = q01_general(s, zz, w, w_y)?;
        let q00 = if s.delta(-1, -1) != 0 { Some(q00_general(s, zz, w, w_y)?) } else { None };
        Ok((q10, q01, q00))
    })
}

/// Evaluates one of the four generating functions at `z`. Without a gluing
/// function only the simple walk is supported, through its closed forms;
/// with one, the general representation is used for both curves.
pub fn evaluate(s: &StepSet, z: f64, target: SeriesLabel, w: Option<&dyn Cgf>) -> Result<GFValue> {
    let Some(w) = w else {
        if *s != StepSet::preset("simple")? {
            return Err(Error::CgfUnavailable);
        }
        return match target {
            SeriesLabel::Q00 => q00_simple(z),
            SeriesLabel::Q10 | SeriesLabel::Q01 => q10_simple(z),
            SeriesLabel::Q11 => q11_with_limit(s, z, |zz| {
                let q10 = q10_simple(zz)?;
                Ok((q10.clone(), q10, None))
            }),
        };
    };
    match target {
        SeriesLabel::Q00 => q00_general(s, z, w, Some(w)),
        SeriesLabel::Q10 => q10_general(s, z, w, Some(w)),
        SeriesLabel::Q01 => q01_general(s, z, w, Some(w)),
        SeriesLabel::Q11 => q11_general(s, z, w, Some(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{all_series, AxisProfile, SeriesLabel};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simple() -> StepSet {
        StepSet::preset("simple").unwrap()
    }

    #[test]
    fn closed_forms_match_series() {
        let series = all_series(&simple(), 120).unwrap();
        for z in [0.05, 0.1, 0.2] {
            let q00 = q00_simple(z).unwrap();
            assert!((q00.value - series.get(SeriesLabel::Q00).evaluate(z)).abs() < 1e-10, "q00 at {z}");
            let q10 = q10_simple(z).unwrap();
            assert!((q10.value - series.get(SeriesLabel::Q10).evaluate(z)).abs() < 1e-10, "q10 at {z}");
        }
        assert!((q00_simple(0.0).unwrap().value - 1.0).abs() < 1e-14);
        assert!((q10_simple(1e-9).unwrap().value - 1.0).abs() < 1e-8);
        assert!(matches!(q00_simple(0.25), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn excursions_are_even() {
        for z in [0.03, 0.11, 0.2] {
            let a = q00_simple(z).unwrap().value;
            let b = q00_simple(-z).unwrap().value;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn relation_gives_total_count() {
        let s = simple();
        let series = all_series(&s, 120).unwrap();
        let z = 0.1;
        let q10 = q10_simple(z).unwrap();
        let q11 = q11_from_relation(&s, z, &q10, &q10, None).unwrap();
        assert!((q11.value - series.get(SeriesLabel::Q11).evaluate(z)).abs() < 1e-9);
        assert_eq!(q11_from_relation(&s, 0.25, &q10, &q10, None), Err(Error::RemovableSingularity));
    }

    #[test]
    fn removable_point_uses_left_limit() {
        // South-West step present, drift towards the axes: 1/|S| lies below
        // the first singularity, so the limit is finite.
        let s = StepSet::new([(-1, -1), (0, -1), (-1, 0), (1, 1)]).unwrap();
        let series = all_series(&s, 400).unwrap();
        let z = 0.25;
        let v = q11_with_limit(&s, z, |zz| {
            let g = |label| GFValue::new(series.get(label).evaluate(zz), zz, Method::Relation, 0.0);
            Ok((g(SeriesLabel::Q10), g(SeriesLabel::Q01), Some(g(SeriesLabel::Q00))))
        })
        .unwrap();
        assert!(v.one_sided_limit);
        assert!((v.value - series.get(SeriesLabel::Q11).evaluate(z)).abs() < 1e-6);
    }

    #[test]
    fn circle_cgf_properties() {
        let w = circle_cgf();
        for k in 0..16 {
            let t = Complex64::from_polar(1.0, 0.4 * k as f64);
            let v = w.w(t, 0.2);
            assert!(v.im.abs() < 1e-14 && (v.re - 2.0 * (0.4 * k as f64).cos()).abs() < 1e-14);
            assert!((v - w.w(t.conj(), 0.2)).norm() < 1e-14);
        }
        for k in 0..64 {
            let t = Complex64::from_polar(0.05 + 0.9 * (k as f64 / 64.0), 1.3 * k as f64);
            let v = w.w(t, 0.2);
            assert!(!(v.im.abs() < 1e-12 && v.re.abs() <= 2.0));
        }
        let r = 1e-3;
        let residue: Complex64 = (0..64)
            .map(|k| {
                let t = Complex64::from_polar(r, 2.0 * PI * k as f64 / 64.0);
                w.w(t, 0.2) * t
            })
            .sum::<Complex64>()
            / 64.0;
        assert!((residue - 1.0).norm() < 1e-12);
        assert!((w.dw(c(0.5, 0.3), 0.2) - (1.0 - 1.0 / (c(0.5, 0.3) * c(0.5, 0.3)))).norm() < 1e-15);
    }

    #[test]
    fn contour_integral_matches_series() {
        let s = simple();
        let z = 0.2;
        let axis = AxisProfile::compute(&s, 120).unwrap();
        for x in [c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.5), c(-0.7, 0.0)] {
            let v = qx0_integral(&s, x, z, &circle_cgf()).unwrap();
            let expected = x * axis.q_x0(x, z);
            assert!((v.value - expected).norm() < 1e-8, "{x}: {} vs {}", v.value, expected);
        }
        let tiny = qx0_integral(&s, c(1e-6, 0.0), z, &circle_cgf()).unwrap();
        assert!(tiny.value.norm() < 1e-5);
        assert_eq!(qx0_integral(&s, c(1.5, 0.0), z, &circle_cgf()), Err(Error::PointOutsideDomain));
    }

    #[test]
    fn general_route_matches_closed_forms() {
        let s = simple();
        let z = 0.2;
        let w = circle_cgf();
        let q00 = q00_general(&s, z, &w, Some(&w)).unwrap();
        assert!((q00.value - q00_simple(z).unwrap().value).abs() < 1e-8);
        let q10 = q10_general(&s, z, &w, Some(&w)).unwrap();
        assert!(q10.on_boundary);
        assert!((q10.value - q10_simple(z).unwrap().value).abs() < 1e-8);
        let q01 = q01_general(&s, z, &w, Some(&w)).unwrap();
        assert!((q01.value - q10.value).abs() < 1e-10);
        let series = all_series(&s, 120).unwrap();
        let q11 = q11_general(&s, z, &w, Some(&w)).unwrap();
        assert!((q11.value - series.get(SeriesLabel::Q11).evaluate(z)).abs() < 1e-7);
    }

    #[test]
    fn vertical_symmetry_gives_circle() {
        // c(x) = x: origin limit route on a non-simple model.
        let s = StepSet::new([(0, -1), (-1, 1), (1, 1)]).unwrap();
        let z = 0.2;
        let series = all_series(&s, 200).unwrap();
        let w = circle_cgf();
        let q00 = q00_general(&s, z, &w, None).unwrap();
        assert!((q00.value - series.get(SeriesLabel::Q00).evaluate(z)).abs() < 1e-8);
        let q10 = q10_general(&s, z, &w, None).unwrap();
        assert!((q10.value - series.get(SeriesLabel::Q10).evaluate(z)).abs() < 1e-8);
    }

    #[test]
    fn roots_of_c_on_the_curve_are_rejected() {
        let s = StepSet::new([(-1, -1), (1, -1), (0, 1)]).unwrap();
        match q00_case(&s).unwrap() {
            Q00Case::RootOfC(r) => assert!(r.iter().all(|v| (v.norm() - 1.0).abs() < 1e-12)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(q00_general(&s, 0.2, &circle_cgf(), None), Err(Error::RootOutsideDomain(_))));
        let t = StepSet::new([(-1, -1), (0, -1), (1, 0), (0, 1)]).unwrap();
        match q00_case(&t).unwrap() {
            Q00Case::RootOfC(r) => assert!(r.iter().all(|v| (v - c(-1.0, 0.0)).norm() < 1e-12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn circle_does_not_glue_kreweras() {
        let s = StepSet::preset("kreweras").unwrap();
        assert!(matches!(qx0_integral(&s, c(0.1, 0.0), 0.2, &circle_cgf()), Err(Error::GluingViolation(_))));
        assert!(matches!(q00_general(&s, 0.2, &circle_cgf(), None), Err(Error::GluingViolation(_))));
    }

    #[test]
    fn kernel_point_relation_with_series() {
        // Reverse Kreweras: c(x) = 1, so Q(0,0,z) comes from a kernel root.
        let s = StepSet::new([(1, 0), (0, 1), (-1, -1)]).unwrap();
        assert_eq!(q00_case(&s).unwrap(), Q00Case::ConstantC);
        let z = 0.15;
        let axis = AxisProfile::compute(&s, 200).unwrap();
        let q00 = all_series(&s, 200).unwrap().get(SeriesLabel::Q00).evaluate(z);
        let x = c(0.5, 0.0);
        let y = kernel::y_branches(&s, x, z).unwrap().branch0;
        assert!(y.norm() <= 1.0);
        let polys = KernelPolys::new(&s);
        let ix = c_at(&polys.c, x) * axis.q_x0(x, z) - q00;
        let jy = c_at(&polys.c_tilde, y) * axis.q_0y(y, z) - q00;
        let v = q00_from_kernel_point(&s, z, x, y, ix, jy).unwrap();
        assert!((v - q00).norm() < 1e-8);
        assert!(matches!(
            q00_general(&s, z, &circle_cgf(), None),
            Err(Error::GluingViolation(_) | Error::CgfUnavailable)
        ));
    }

    #[test]
    fn boundary_condition_on_the_circle() {
        let s = simple();
        let z = 0.2;
        let axis = AxisProfile::compute(&s, 150).unwrap();
        for k in 0..32 {
            let t = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.25) / 32.0);
            let tb = t.conj();
            let y0 = kernel::y_branches(&s, t, z).unwrap().branch0;
            let y0b = kernel::y_branches(&s, tb, z).unwrap().branch0;
            let lhs = t * axis.q_x0(t, z) - tb * axis.q_x0(tb, z);
            let rhs = (t * y0 - tb * y0b) / z;
            assert!((lhs - rhs).norm() < 1e-7, "{t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn values_are_positive_and_increasing() {
        let mut last = 0.0;
        for k in 1..12 {
            let z = 0.02 * k as f64;
            let v = q10_simple(z).unwrap().value;
            assert!(v > last);
            last = v;
        }
    }
}
