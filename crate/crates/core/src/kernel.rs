//! Kernel algebra: boundary polynomials, discriminants, branch points, the
//! two algebraic branches of the kernel and the curves `M_z`, `L_z`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::stepset::StepSet;

/// Relative tolerance under which two branch points count as collided.
pub const COLLISION_TOL: f64 = 1e-9;
/// Half-width of the band around a curve treated as the curve itself.
pub const BOUNDARY_BAND: f64 = 1e-7;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Evaluates `p0 + p1 t + p2 t²`.
pub fn eval_small(p: &[u8; 3], t: Complex64) -> Complex64 {
    (c(p[2] as f64) * t + p[1] as f64) * t + p[0] as f64
}

fn eval_small_deriv(p: &[u8; 3], t: Complex64) -> Complex64 {
    t * (2.0 * p[2] as f64) + p[1] as f64
}

/// The six boundary polynomials of the kernel. Index `k` holds the
/// coefficient of `t^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KernelPolys {
    pub a: [u8; 3],
    pub b: [u8; 3],
    pub c: [u8; 3],
    pub a_tilde: [u8; 3],
    pub b_tilde: [u8; 3],
    pub c_tilde: [u8; 3],
}

impl KernelPolys {
    pub fn new(s: &StepSet) -> Self {
        let mut p = KernelPolys {
            a: [0; 3],
            b: [0; 3],
            c: [0; 3],
            a_tilde: [0; 3],
            b_tilde: [0; 3],
            c_tilde: [0; 3],
        };
        for (i, j) in s.steps() {
            let xi = (i + 1) as usize;
            let yj = (j + 1) as usize;
            match j {
                1 => p.a[xi] = 1,
                0 => p.b[xi] = 1,
                _ => p.c[xi] = 1,
            }
            match i {
                1 => p.a_tilde[yj] = 1,
                0 => p.b_tilde[yj] = 1,
                _ => p.c_tilde[yj] = 1,
            }
        }
        p
    }

    /// Coefficients `(A, B, C)` of the kernel as `A y² + B y + C` at fixed `x`.
    pub fn y_quadratic(&self, x: Complex64, z: f64) -> (Complex64, Complex64, Complex64) {
        (eval_small(&self.a, x), eval_small(&self.b, x) - x / z, eval_small(&self.c, x))
    }

    /// Coefficients `(A, B, C)` of the kernel as `A x² + B x + C` at fixed `y`.
    pub fn x_quadratic(&self, y: Complex64, z: f64) -> (Complex64, Complex64, Complex64) {
        (
            eval_small(&self.a_tilde, y),
            eval_small(&self.b_tilde, y) - y / z,
            eval_small(&self.c_tilde, y),
        )
    }
}

/// `K(x,y,z) = xy [Σ δ x^i y^j − 1/z]`, evaluated without division by `x` or `y`.
pub fn kernel_eval(s: &StepSet, x: Complex64, y: Complex64, z: f64) -> Complex64 {
    let mut acc = -x * y / z;
    for (i, j) in s.steps() {
        acc += x.powi(i as i32 + 1) * y.powi(j as i32 + 1);
    }
    acc
}

fn discriminant(a: &[u8; 3], b: &[u8; 3], cc: &[u8; 3], z: f64) -> Poly {
    let bb = [b[0] as f64, b[1] as f64 - 1.0 / z, b[2] as f64];
    let mut d = [0.0; 5];
    for p in 0..3 {
        for q in 0..3 {
            d[p + q] += bb[p] * bb[q] - 4.0 * a[p] as f64 * cc[q] as f64;
        }
    }
    Poly::new(d.to_vec())
}

/// `d(x,z) = (b(x) − x/z)² − 4 a(x) c(x)` as a polynomial in `x`.
pub fn discriminant_x(s: &StepSet, z: f64) -> Poly {
    let k = KernelPolys::new(s);
    discriminant(&k.a, &k.b, &k.c, z)
}

/// The discriminant of the kernel in `x`, as a polynomial in `y`.
pub fn discriminant_y(s: &StepSet, z: f64) -> Poly {
    let k = KernelPolys::new(s);
    discriminant(&k.a_tilde, &k.b_tilde, &k.c_tilde, z)
}

/// Integer coefficients of `z² d(x,z) = (z b(x) − x)² − 4 z² a(x) c(x)`;
/// entry `[k][m]` multiplies `x^k z^m`.
pub fn scaled_discriminant_x(s: &StepSet) -> [[i64; 3]; 5] {
    let k = KernelPolys::new(s);
    let mut out = [[0i64; 3]; 5];
    // z b(x) − x as a bivariate polynomial [x-degree][z-degree]
    let mut lin = [[0i64; 2]; 3];
    for (p, &bp) in k.b.iter().enumerate() {
        lin[p][1] = bp as i64;
    }
    lin[1][0] -= 1;
    for p in 0..3 {
        for q in 0..3 {
            for m1 in 0..2 {
                for m2 in 0..2 {
                    out[p + q][m1 + m2] += lin[p][m1] * lin[q][m2];
                }
            }
            out[p + q][2] -= 4 * k.a[p] as i64 * k.c[q] as i64;
        }
    }
    out
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(v) => Some(*v),
            ExtComplex::Infinity => None,
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            ExtComplex::Finite(v) => v.norm(),
            ExtComplex::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    /// Real value when the point is finite with zero imaginary part.
    pub fn real(&self) -> Option<f64> {
        self.finite().filter(|v| v.im == 0.0).map(|v| v.re)
    }
}

impl Serialize for ExtComplex {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtComplex::Finite(v) => {
                let mut seq = ser.serialize_seq(Some(2))?;
                seq.serialize_element(&v.re)?;
                seq.serialize_element(&v.im)?;
                seq.end()
            }
            ExtComplex::Infinity => ser.serialize_str("infinity"),
        }
    }
}

/// The four roots of each discriminant, sorted by modulus with roots at
/// infinity last.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPoints {
    pub z: f64,
    pub x_roots: [ExtComplex; 4],
    pub y_roots: [ExtComplex; 4],
    /// `0 < z < 1/|S|`, where the ordering `|r1| < r2 < 1 < r3 < |r4|` is expected.
    pub in_ordered_range: bool,
    pub x_ordered: bool,
    pub y_ordered: bool,
}

fn sorted_roots(d: &Poly) -> Result<[ExtComplex; 4]> {
    let mut finite = d.roots()?;
    let scale = d.scale();
    for r in &finite {
        let tol = 1e-9 * scale * (1.0 + r.norm()).powi(4);
        if d.eval_complex(*r).norm() > tol.max(1e-9) {
            return Err(Error::RootFindingFailure);
        }
    }
    finite.sort_by(|p, q| p.norm().total_cmp(&q.norm()));
    place_positive_roots_centrally(&mut finite);
    let mut out = [ExtComplex::Infinity; 4];
    for (slot, r) in out.iter_mut().zip(finite) {
        *slot = ExtComplex::Finite(r);
    }
    Ok(out)
}

/// Within groups of equal modulus (periodic models have `x₁ = −x₂`), moves
/// positive real roots to the slots nearest the middle of the list, where
/// `r2` and `r3` live.
fn place_positive_roots_centrally(roots: &mut [Complex64]) {
    let centre = 1.5;
    let mut start = 0;
    while start < roots.len() {
        let m = roots[start].norm();
        let mut end = start + 1;
        while end < roots.len() && (roots[end].norm() - m).abs() <= 1e-9 * m.max(1e-300) {
            end += 1;
        }
        if end - start > 1 {
            let group: Vec<Complex64> = roots[start..end].to_vec();
            let (mut pos, mut rest): (Vec<Complex64>, Vec<Complex64>) =
                group.into_iter().partition(|r| r.im == 0.0 && r.re > 0.0);
            pos.sort_by(|a, b| a.re.total_cmp(&b.re));
            rest.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
            let mut slots: Vec<usize> = (start..end).collect();
            slots.sort_by(|&a, &b| (a as f64 - centre).abs().total_cmp(&(b as f64 - centre).abs()).then(a.cmp(&b)));
            let mut central: Vec<usize> = slots[..pos.len()].to_vec();
            let mut outer: Vec<usize> = slots[pos.len()..].to_vec();
            central.sort();
            outer.sort();
            for (slot, r) in central.into_iter().zip(pos).chain(outer.into_iter().zip(rest)) {
                roots[slot] = r;
            }
        }
        start = end;
    }
}

/// Checks `|r1| < r2 < 1 < r3 < |r4|` with `r2`, `r3` real and positive.
pub fn has_standard_ordering(r: &[ExtComplex; 4]) -> bool {
    let (Some(r2), Some(r3)) = (r[1].real(), r[2].real()) else {
        return false;
    };
    r[0].norm() <= r2 && 0.0 < r2 && r2 < 1.0 && 1.0 < r3 && r3 <= r[3].norm()
}

pub fn branch_points(s: &StepSet, z: f64) -> Result<BranchPoints> {
    if !(z > 0.0) {
        return Err(Error::OutOfRange { name: "z", value: z });
    }
    let x_roots = sorted_roots(&discriminant_x(s, z))?;
    let y_roots = sorted_roots(&discriminant_y(s, z))?;
    let in_range = z < 1.0 / s.cardinality() as f64;
    Ok(BranchPoints {
        z,
        in_ordered_range: in_range,
        x_ordered: in_range && has_standard_ordering(&x_roots),
        y_ordered: in_range && has_standard_ordering(&y_roots),
        x_roots,
        y_roots,
    })
}

/// The two roots of a kernel quadratic, `|branch0| ≤ |branch1|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Branches {
    pub branch0: Complex64,
    pub branch1: ExtComplex,
}

fn raw_roots(a: Complex64, b: Complex64, cc: Complex64) -> Result<(Complex64, ExtComplex)> {
    if a == c(0.0) {
        if b == c(0.0) {
            return Err(Error::DegenerateQuadratic);
        }
        return Ok((-cc / b, ExtComplex::Infinity));
    }
    let sq = (b * b - a * cc * 4.0).sqrt();
    let sign = if (b.conj() * sq).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -(b + sq * sign) * 0.5;
    if q == c(0.0) {
        return Ok((c(0.0), ExtComplex::Finite(c(0.0))));
    }
    let (r1, r2) = (q / a, cc / q);
    if r1.norm() <= r2.norm() {
        Ok((r1, ExtComplex::Finite(r2)))
    } else {
        Ok((r2, ExtComplex::Finite(r1)))
    }
}

fn separate<F>(coeffs: F, t: Complex64) -> Result<Branches>
where
    F: Fn(Complex64) -> (Complex64, Complex64, Complex64),
{
    let (a, b, cc) = coeffs(t);
    let (r0, r1) = raw_roots(a, b, cc)?;
    if let ExtComplex::Finite(r1v) = r1 {
        let gap = (r1v.norm() - r0.norm()).abs();
        if gap <= 1e-12 * r1v.norm().max(1e-300) && r0 != r1v {
            // on the curve |r0| = |r1|: take the limit from the upper side
            let eps = 1e-7 * t.norm().max(1.0);
            let (pa, pb, pc) = coeffs(t + Complex64::new(0.0, eps));
            let (p0, _) = raw_roots(pa, pb, pc)?;
            if (p0 - r1v).norm() < (p0 - r0).norm() {
                return Ok(Branches {
                    branch0: r1v,
                    branch1: ExtComplex::Finite(r0),
                });
            }
        }
    }
    Ok(Branches { branch0: r0, branch1: r1 })
}

/// Roots `(Y₀, Y₁)` of `K(x, ·, z)`.
pub fn y_branches(s: &StepSet, x: Complex64, z: f64) -> Result<Branches> {
    let k = KernelPolys::new(s);
    separate(|t| k.y_quadratic(t, z), x)
}

/// Roots `(X₀, X₁)` of `K(·, y, z)`.
pub fn x_branches(s: &StepSet, y: Complex64, z: f64) -> Result<Branches> {
    let k = KernelPolys::new(s);
    separate(|t| k.x_quadratic(t, z), y)
}

/// Analytic parametrisation of `M_z = X₀([y₁, y₂])` by `φ ∈ [0, 2π]`, with
/// `y(φ) = mid − half·cos φ`. The upper edge of the slit is `φ ∈ [0, π]`.
#[derive(Debug, Clone)]
pub struct CurveParam {
    source: StepSet,
    polys: KernelPolys,
    z: f64,
    mid: f64,
    half: f64,
    cofactor: Poly,
    cofactor_deriv: Poly,
    sign: f64,
}

impl CurveParam {
    pub fn new(s: &StepSet, z: f64) -> Result<Self> {
        let bp = branch_points(s, z)?;
        let y = bp.y_roots;
        let (Some(y1), Some(y2)) = (y[0].real(), y[1].real()) else {
            return Err(Error::SlitDegenerate(z));
        };
        let scale = y2.abs().max(1.0);
        if let Some(y3) = y[2].finite() {
            if (y3 - c(y2)).norm() <= COLLISION_TOL * scale.max(y3.norm()) {
                return Err(Error::GenusZeroRegime(z));
            }
        }
        if (y2 - y1).abs() <= COLLISION_TOL * scale {
            return Err(Error::SlitDegenerate(z));
        }
        let cofactor = discriminant_y(s, z).deflate_quadratic(y1, y2);
        let mut param = CurveParam {
            source: *s,
            polys: KernelPolys::new(s),
            z,
            mid: 0.5 * (y1 + y2),
            half: 0.5 * (y2 - y1),
            cofactor_deriv: cofactor.derivative(),
            cofactor,
            sign: 1.0,
        };
        // Fix the square-root branch so that the upper edge carries the limit
        // of X₀ from above the slit.
        let y_top = Complex64::new(param.mid, 1e-6 * param.half);
        let target = x_branches(s, y_top, z)?.branch0;
        let plus = param.point(0.5 * PI);
        param.sign = -1.0;
        let minus = param.point(0.5 * PI);
        param.sign = if (plus - target).norm() <= (minus - target).norm() { 1.0 } else { -1.0 };
        for k in [1.0, 2.0, 3.0, 5.0, 6.0, 7.0] {
            let (num, den) = param.parts(k * PI / 4.0);
            if num.norm() + den.norm() == 0.0 || !(num.re.is_finite() && num.im.is_finite()) {
                return Err(Error::SlitDegenerate(z));
            }
        }
        Ok(param)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Slit endpoints `(y₁, y₂)`.
    pub fn slit(&self) -> (f64, f64) {
        (self.mid - self.half, self.mid + self.half)
    }

    pub fn y_at(&self, phi: f64) -> f64 {
        self.mid - self.half * phi.cos()
    }

    fn root_h(&self, y: f64) -> f64 {
        self.cofactor.eval(y).max(0.0).sqrt()
    }

    /// Numerator and denominator of `X₀(y(φ))`. The denominator vanishes
    /// where the curve passes through infinity.
    pub fn parts(&self, phi: f64) -> (Complex64, Complex64) {
        let y = c(self.y_at(phi));
        let (a, b, _) = self.polys.x_quadratic(y, self.z);
        let im = self.sign * self.half * phi.sin() * self.root_h(y.re);
        (-b + Complex64::new(0.0, im), a * 2.0)
    }

    /// `X₀` on the slit edge selected by `φ`.
    pub fn point(&self, phi: f64) -> Complex64 {
        let (num, den) = self.parts(phi);
        num / den
    }

    /// `1/(X₀(y(φ)) − p)`, finite on the whole curve when `p` is off it.
    pub fn inverted(&self, phi: f64, p: Complex64) -> Complex64 {
        let (num, den) = self.parts(phi);
        den / (num - den * p)
    }

    /// Whether the curve passes through infinity.
    pub fn is_bounded(&self) -> bool {
        let (y1, y2) = self.slit();
        let (a1, _, _) = self.polys.x_quadratic(c(y1), self.z);
        let (a2, _, _) = self.polys.x_quadratic(c(y2), self.z);
        a1.norm() > 1e-12 && a2.norm() > 1e-12 && !self.crosses_pole()
    }

    fn crosses_pole(&self) -> bool {
        let (y1, y2) = self.slit();
        let a = &self.polys.a_tilde;
        let roots = Poly::new(a.iter().map(|&v| v as f64).collect()).roots().unwrap_or_default();
        roots.iter().any(|r| r.im == 0.0 && y1 < r.re && r.re < y2)
    }

    /// `d X₀ / d φ`.
    pub fn derivative(&self, phi: f64) -> Complex64 {
        let (sin, cos) = phi.sin_cos();
        let y = self.y_at(phi);
        let yc = c(y);
        let dy = self.half * sin;
        let (a, b, _) = self.polys.x_quadratic(yc, self.z);
        let da = eval_small_deriv(&self.polys.a_tilde, yc);
        let dn = -(eval_small_deriv(&self.polys.b_tilde, yc) - 1.0 / self.z);
        let rh = self.root_h(y);
        let g = Complex64::new(0.0, self.sign * self.half * sin * rh);
        let dg = if rh > 0.0 {
            let dh = self.cofactor_deriv.eval(y);
            Complex64::new(0.0, self.sign * self.half * (cos * rh + sin * dh * dy / (2.0 * rh)))
        } else {
            c(0.0)
        };
        let num = -b + g;
        ((dn * dy + dg) * a - num * da * dy) / (a * a * 2.0)
    }
}

/// Sampled polyline of a kernel curve.
#[derive(Debug, Clone, Serialize)]
pub struct CurveTrace {
    pub z: f64,
    pub points: Vec<Complex64>,
    /// Distance between the first and last sample.
    pub closure_defect: f64,
    /// Largest distance between a sample and the conjugate of its mirror sample.
    pub symmetry_defect: f64,
}

// Samples sit at φ = 2π(k + ½)/m so that slit endpoints, where the curve may
// pass through infinity, are never evaluated; the first sample is repeated
// at the end to close the polyline.

impl CurveTrace {
    /// Winding number of the closed polyline around `p`.
    pub fn winding_number(&self, p: Complex64) -> i64 {
        let mut total = 0.0;
        for w in self.points.windows(2) {
            total += ((w[1] - p) / (w[0] - p)).arg();
        }
        (total / (2.0 * PI)).round() as i64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for p in &self.points {
            out.push_str(&format!("{:.15e},{:.15e}\n", p.re, p.im));
        }
        out
    }
}

fn midpoint(k: usize, m: usize) -> f64 {
    2.0 * PI * (k as f64 + 0.5) / m as f64
}

fn sample(param: &CurveParam, m: usize) -> CurveTrace {
    let mut points: Vec<Complex64> = (0..m).map(|k| param.point(midpoint(k, m))).collect();
    let symmetry_defect = (0..m)
        .map(|k| (points[k] - points[m - 1 - k].conj()).norm())
        .fold(0.0, f64::max);
    let (start, end) = (param.point(0.0), param.point(2.0 * PI));
    let closure_defect = if start.is_finite() && end.is_finite() { (end - start).norm() } else { 0.0 };
    points.push(points[0]);
    CurveTrace {
        z: param.z,
        points,
        closure_defect,
        symmetry_defect,
    }
}

/// Samples `M_z` at `m` Chebyshev-distributed slit nodes per edge pair.
pub fn trace_curve_m(s: &StepSet, z: f64, m: usize) -> Result<CurveTrace> {
    if m < 16 {
        return Err(Error::OutOfRange { name: "points", value: m as f64 });
    }
    Ok(sample(&CurveParam::new(s, z)?, m))
}

/// Samples `L_z = Y₀([x₁, x₂])`, the image of `M_z` for the mirrored step set.
pub fn trace_curve_l(s: &StepSet, z: f64, m: usize) -> Result<CurveTrace> {
    trace_curve_m(&s.mirror(), z, m)
}

/// Position of a point relative to the domain bounded by a kernel curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Inside,
    Outside,
    OnBoundary,
}

const LOCATE_SAMPLES: usize = 1024;

/// Distance from `p` to the analytic curve, refined by golden-section search
/// around the closest samples.
pub fn distance_to_curve(param: &CurveParam, p: Complex64) -> f64 {
    let h = 2.0 * PI / LOCATE_SAMPLES as f64;
    let dist = |phi: f64| (param.point(phi) - p).norm();
    let samples: Vec<f64> = (0..LOCATE_SAMPLES).map(|k| dist(midpoint(k, LOCATE_SAMPLES))).collect();
    let mut best = f64::INFINITY;
    for k in 0..LOCATE_SAMPLES {
        let prev = samples[(k + LOCATE_SAMPLES - 1) % LOCATE_SAMPLES];
        let next = samples[(k + 1) % LOCATE_SAMPLES];
        if samples[k] > prev || samples[k] > next {
            continue;
        }
        let (mut lo, mut hi) = ((k as f64 - 0.5) * h, (k as f64 + 1.5) * h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (dist(x1), dist(x2));
        for _ in 0..80 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = dist(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = dist(x2);
            }
        }
        best = best.min(f1.min(f2)).min(samples[k]);
    }
    best
}

/// Classifies `p` against the domain bounded by `M_z`.
pub fn locate(param: &CurveParam, p: Complex64) -> Region {
    if distance_to_curve(param, p) <= BOUNDARY_BAND {
        return Region::OnBoundary;
    }
    // Invert around x₁, which lies in the domain: the domain becomes the
    // unbounded component, so membership is a zero winding number.
    let Some(x1) = branch_points(&param.source, param.z).ok().and_then(|bp| bp.x_roots[0].finite()) else {
        return Region::Outside;
    };
    if (p - x1).norm() == 0.0 {
        return Region::Inside;
    }
    let target = 1.0 / (p - x1);
    let mut ring: Vec<Complex64> =
        (0..LOCATE_SAMPLES).map(|k| param.inverted(midpoint(k, LOCATE_SAMPLES), x1)).collect();
    ring.push(ring[0]);
    let inverted = CurveTrace {
        z: param.z,
        points: ring,
        closure_defect: 0.0,
        symmetry_defect: 0.0,
    };
    if inverted.winding_number(target) == 0 {
        Region::Inside
    } else {
        Region::Outside
    }
}

pub fn point_in_g_m(s: &StepSet, x: Complex64, z: f64) -> Result<Region> {
    Ok(locate(&CurveParam::new(s, z)?, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn simple() -> StepSet {
        StepSet::preset("simple").unwrap()
    }

    #[test]
    fn kernel_values() {
        let s = simple();
        assert!(kernel_eval(&s, c(1.0), c(1.0), 0.25).norm() < 1e-15);
        assert!((kernel_eval(&s, c(1.0), c(1.0), 0.5) - 2.0).norm() < 1e-15);
    }

    #[test]
    fn simple_discriminant() {
        let d = discriminant_x(&simple(), 0.2);
        assert!((d.eval(1.0) - 5.0).abs() < 1e-12);
        for x in [-1.3, 0.2, 0.7, 2.5] {
            let expected = (1.0 + x * x - x / 0.2f64).powi(2) - 4.0 * x * x;
            assert!((d.eval(x) - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn perfect_square_without_north_steps() {
        let s = StepSet::new([(1, 0), (-1, 0), (0, -1), (-1, -1)]).unwrap();
        let k = KernelPolys::new(&s);
        let d = discriminant_x(&s, 0.3);
        for x in [-0.4, 0.5, 1.7] {
            let b = eval_small(&k.b, c(x)).re - x / 0.3;
            assert!((d.eval(x) - b * b).abs() < 1e-12);
        }
    }

    #[test]
    fn simple_branch_points() {
        let bp = branch_points(&simple(), 0.2).unwrap();
        let expected = [0.145898, 0.381966, 2.618034, 6.854102];
        for (r, e) in bp.x_roots.iter().zip(expected) {
            assert!((r.real().unwrap() - e).abs() < 1e-6);
        }
        assert!(bp.x_ordered && bp.y_ordered);
    }

    #[test]
    fn degree_drop_gives_infinite_root() {
        // no steps with i = 1 and j = ±1, no step (1,0): d has degree 2 in x
        let s = StepSet::new([(-1, 1), (-1, -1), (0, 1), (0, -1)]).unwrap();
        let d = discriminant_x(&s, 0.2);
        let bp = branch_points(&s, 0.2).unwrap();
        let finite = bp.x_roots.iter().filter(|r| !r.is_infinite()).count();
        assert_eq!(finite, d.degree());
        assert!(bp.x_roots[3].is_infinite());
    }

    #[test]
    fn periodic_model_keeps_positive_roots_central() {
        let s = StepSet::new([(-1, -1), (-1, 1), (1, -1), (1, 1)]).unwrap();
        let bp = branch_points(&s, 0.2).unwrap();
        let r2 = bp.x_roots[1].real().unwrap();
        let r3 = bp.x_roots[2].real().unwrap();
        assert!(r2 > 0.0 && r3 > 0.0 && (r2 * r3 - 1.0).abs() < 1e-12);
        assert!((bp.x_roots[0].finite().unwrap() + r2).norm() < 1e-12);
        let at = branch_points(&s, 0.25).unwrap();
        assert!((at.x_roots[1].real().unwrap() - 1.0).abs() < 1e-6);
        assert!((at.x_roots[2].real().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn simple_y0_on_imaginary_axis() {
        let x = Complex64::new(0.0, 1.0);
        let br = y_branches(&simple(), x, 0.2).unwrap();
        assert!((br.branch0 - c((1.0 - 0.84f64.sqrt()) / 0.4)).norm() < 1e-12);
        assert!(kernel_eval(&simple(), x, br.branch0, 0.2).norm() < 1e-12);
        assert!(br.branch0.norm() <= br.branch1.norm());
    }

    #[test]
    fn simple_y0_on_unit_circle() {
        let z = 0.2;
        for k in 0..12 {
            let theta = 0.3 + k as f64 * 0.5;
            let x = Complex64::from_polar(1.0, theta);
            let a = 1.0 - 2.0 * z * theta.cos();
            let expected = (a - (a * a - 4.0 * z * z).sqrt()) / (2.0 * z);
            let br = y_branches(&simple(), x, z).unwrap();
            assert!((br.branch0 - c(expected)).norm() < 1e-12);
        }
    }

    #[test]
    fn simple_curve_is_unit_circle() {
        let trace = trace_curve_m(&simple(), 0.2, 256).unwrap();
        for p in &trace.points {
            assert!((p.norm() - 1.0).abs() < 1e-8);
        }
        assert!(trace.symmetry_defect < 1e-10);
        assert!(trace.closure_defect < 1e-10);
        let bp = branch_points(&simple(), 0.2).unwrap();
        let x1 = bp.x_roots[0].finite().unwrap();
        let x3 = bp.x_roots[2].finite().unwrap();
        assert_eq!(trace.winding_number(x1).abs(), 1);
        assert_eq!(trace.winding_number(x3), 0);
    }

    #[test]
    fn simple_locations() {
        let s = simple();
        assert_eq!(point_in_g_m(&s, c(1.0), 0.2).unwrap(), Region::OnBoundary);
        assert_eq!(point_in_g_m(&s, c(0.1459), 0.2).unwrap(), Region::Inside);
        assert_eq!(point_in_g_m(&s, c(2.618), 0.2).unwrap(), Region::Outside);
    }

    #[test]
    fn curve_points_solve_kernel() {
        for name in ["kreweras", "gessel", "gouyou-beauchamps"] {
            let s = StepSet::preset(name).unwrap();
            let z = 0.8 / s.cardinality() as f64;
            let param = CurveParam::new(&s, z).unwrap();
            for k in 0..40 {
                let phi = 0.05 + k as f64 * 0.155;
                let x = param.point(phi);
                let y = c(param.y_at(phi));
                assert!(kernel_eval(&s, x, y, z).norm() < 1e-10, "{name}");
                let h = 1e-6;
                let fd = (param.point(phi + h) - param.point(phi - h)) / (2.0 * h);
                assert!((fd - param.derivative(phi)).norm() < 1e-6 * (1.0 + fd.norm()), "{name}");
            }
            // the upper edge carries the small branch limit
            let phi = 1.1;
            let y = Complex64::new(param.y_at(phi), 1e-9);
            let x0 = x_branches(&s, y, z).unwrap().branch0;
            assert!((x0 - param.point(phi)).norm() < 1e-4, "{name}");
        }
    }

    #[test]
    fn scaled_discriminant_matches() {
        for name in ["simple", "kreweras", "gessel"] {
            let s = StepSet::preset(name).unwrap();
            let sc = scaled_discriminant_x(&s);
            let z = 0.17f64;
            let d = discriminant_x(&s, z);
            for x in [-0.7f64, 0.3, 1.9] {
                let mut v = 0.0;
                for (k, row) in sc.iter().enumerate() {
                    for (m, &coef) in row.iter().enumerate() {
                        v += coef as f64 * x.powi(k as i32) * z.powi(m as i32);
                    }
                }
                assert!((v - z * z * d.eval(x)).abs() < 1e-10);
            }
        }
    }

    fn random_point() -> impl Strategy<Value = Complex64> {
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b))
    }

    proptest! {
        #[test]
        fn quadratic_forms_agree(mask in 1u8.., x in random_point(), y in random_point(), z in 0.01f64..1.0) {
            let s = StepSet::from_mask(mask).unwrap();
            let k = KernelPolys::new(&s);
            let (a, b, cc) = k.y_quadratic(x, z);
            let (at, bt, ct) = k.x_quadratic(y, z);
            let direct = kernel_eval(&s, x, y, z);
            prop_assert!((a * y * y + b * y + cc - direct).norm() < 1e-10);
            prop_assert!((at * x * x + bt * x + ct - direct).norm() < 1e-10);
            let card = s.cardinality() as f64;
            prop_assert_eq!(eval_small(&k.a, c(1.0)).re + eval_small(&k.b, c(1.0)).re + eval_small(&k.c, c(1.0)).re, card);
            prop_assert_eq!(eval_small(&k.a_tilde, c(1.0)).re + eval_small(&k.b_tilde, c(1.0)).re + eval_small(&k.c_tilde, c(1.0)).re, card);
        }

        #[test]
        fn branches_solve_kernel(mask in 1u8.., x in random_point(), z in 0.01f64..1.0) {
            let s = StepSet::from_mask(mask).unwrap();
            let k = KernelPolys::new(&s);
            let (a, b, cc) = k.y_quadratic(x, z);
            if let Ok(br) = y_branches(&s, x, z) {
                let scale = 1.0 + a.norm() + b.norm() + cc.norm();
                prop_assert!(kernel_eval(&s, x, br.branch0, z).norm() < 1e-10 * scale * (1.0 + br.branch0.norm_sqr()));
                if let ExtComplex::Finite(y1) = br.branch1 {
                    prop_assert!(br.branch0.norm() <= y1.norm() * (1.0 + 1e-12));
                    prop_assert!((br.branch0 * y1 * a - cc).norm() < 1e-10 * scale * (1.0 + y1.norm()));
                    prop_assert!(((br.branch0 + y1) * a + b).norm() < 1e-10 * scale * (1.0 + y1.norm()));
                }
            }
            if let Ok(br) = x_branches(&s, x, z) {
                prop_assert!(kernel_eval(&s, br.branch0, x, z).norm() < 1e-10 * (1.0 + br.branch0.norm_sqr()) * (1.0 + x.norm_sqr()) / z);
            }
        }

        #[test]
        fn ordering_below_inverse_cardinality(mask in 1u8.., frac in 0.02f64..0.98) {
            let s = StepSet::from_mask(mask).unwrap();
            prop_assume!(!s.is_singular());
            let z = frac / s.cardinality() as f64;
            let bp = branch_points(&s, z).unwrap();
            if s.origin_in_interior() {
                prop_assert!(bp.x_ordered, "x roots {:?} for {:?}", bp.x_roots, s.steps());
                prop_assert!(bp.y_ordered, "y roots {:?} for {:?}", bp.y_roots, s.steps());
            }
            let d = discriminant_x(&s, z);
            let finite: Vec<_> = bp.x_roots.iter().filter_map(|r| r.finite()).collect();
            prop_assert_eq!(finite.len(), d.degree());
            for r in finite {
                prop_assert!(d.eval_complex(r).norm() < 1e-9 * d.scale() * (1.0 + r.norm()).powi(4));
            }
        }

        #[test]
        fn simple_reciprocal_roots(frac in 0.02f64..0.98) {
            let bp = branch_points(&simple(), frac / 4.0).unwrap();
            let r: Vec<f64> = bp.x_roots.iter().map(|v| v.real().unwrap()).collect();
            prop_assert!((r[0] * r[3] - 1.0).abs() < 1e-9);
            prop_assert!((r[1] * r[2] - 1.0).abs() < 1e-9);
        }
    }
}
