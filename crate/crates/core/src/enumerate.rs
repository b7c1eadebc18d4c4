//! Exact enumeration of quarter-plane walks by dynamic programming over the
//! truncated grid, plus the truncated-series check of the kernel functional
//! equation. Everything here is exact integer arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stepset::StepSet;

/// Default cap on the walk length for streaming enumeration.
pub const DEFAULT_MAX_N: usize = 4096;
/// Cap on the walk length for tables that keep every layer in memory.
pub const FULL_TABLE_MAX_N: usize = 320;
pub const MAX_N_ENV: &str = "QWALK_MAX_N";

/// Streaming cap, overridable through `QWALK_MAX_N`.
pub fn max_n_cap() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn check_cap(n_max: usize, cap: usize) -> Result<()> {
    if n_max > cap {
        Err(Error::ResourceLimit {
            requested: n_max,
            cap,
        })
    } else {
        Ok(())
    }
}

/// One time slice `q(·,·,n)` on the square `0 ≤ i,j ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    n: usize,
    cells: Vec<BigUint>,
}

impl Layer {
    fn origin() -> Self {
        Layer {
            n: 0,
            cells: vec![BigUint::one()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q(i, j, n)`, zero outside the square.
    pub fn get(&self, i: usize, j: usize) -> BigUint {
        self.cell(i as i64, j as i64).cloned().unwrap_or_default()
    }

    fn cell(&self, i: i64, j: i64) -> Option<&BigUint> {
        let w = self.n as i64 + 1;
        if i < 0 || j < 0 || i >= w || j >= w {
            None
        } else {
            Some(&self.cells[(i * w + j) as usize])
        }
    }

    /// Non-zero cells as `(i, j, q)`, row-major.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> + '_ {
        let w = self.n + 1;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(move |(k, q)| (k / w, k % w, q))
    }

    fn next(&self, steps: &[(i8, i8)]) -> Layer {
        let n = self.n + 1;
        let w = n + 1;
        let mut cells = vec![BigUint::zero(); w * w];
        cells.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
            for (j, out) in row.iter_mut().enumerate() {
                for &(a, b) in steps {
                    if let Some(src) = self.cell(i as i64 - a as i64, j as i64 - b as i64) {
                        if !src.is_zero() {
                            *out += src;
                        }
                    }
                }
            }
        });
        Layer { n, cells }
    }

    fn total(&self) -> BigUint {
        self.cells.iter().sum()
    }

    fn x_axis_sum(&self) -> BigUint {
        (0..=self.n).map(|i| self.get(i, 0)).sum()
    }

    fn y_axis_sum(&self) -> BigUint {
        (0..=self.n).map(|j| self.get(0, j)).sum()
    }
}

/// Visits the layers `0..=n_max` in order, keeping only two in memory.
pub fn for_each_layer<F>(s: &StepSet, n_max: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&Layer),
{
    check_cap(n_max, max_n_cap())?;
    let steps = s.steps();
    let mut layer = Layer::origin();
    visit(&layer);
    for _ in 0..n_max {
        layer = layer.next(&steps);
        visit(&layer);
    }
    Ok(())
}

/// Every layer `q(·,·,n)` for `n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    step_set: StepSet,
    layers: Vec<Layer>,
}

impl CountTable {
    pub fn n_max(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn step_set(&self) -> StepSet {
        self.step_set
    }

    pub fn layer(&self, n: usize) -> &Layer {
        &self.layers[n]
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// `q(i, j, n)`; zero beyond the table.
    pub fn q(&self, i: usize, j: usize, n: usize) -> BigUint {
        self.layers.get(n).map(|l| l.get(i, j)).unwrap_or_default()
    }
}

/// Full count table. Refuses depths above [`FULL_TABLE_MAX_N`] (or the
/// environment cap, whichever is smaller); use [`for_each_layer`] or
/// [`all_series`] for deeper runs.
pub fn count(s: &StepSet, n_max: usize) -> Result<CountTable> {
    check_cap(n_max, FULL_TABLE_MAX_N.min(max_n_cap()))?;
    let mut layers = Vec::with_capacity(n_max + 1);
    for_each_layer(s, n_max, |l| layers.push(l.clone()))?;
    Ok(CountTable {
        step_set: *s,
        layers,
    })
}

/// Which specialisation of `Q(x, y, z)` a coefficient sequence belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesLabel {
    /// `Q(0,0,z)`: excursions.
    #[serde(rename = "q00")]
    Q00,
    /// `Q(1,0,z)`: walks ending on the horizontal axis.
    #[serde(rename = "q10")]
    Q10,
    /// `Q(0,1,z)`: walks ending on the vertical axis.
    #[serde(rename = "q01")]
    Q01,
    /// `Q(1,1,z)`: all walks.
    #[serde(rename = "q11")]
    Q11,
}

impl SeriesLabel {
    pub const ALL: [SeriesLabel; 4] = [SeriesLabel::Q00, SeriesLabel::Q10, SeriesLabel::Q01, SeriesLabel::Q11];

    pub fn parse(text: &str) -> Option<SeriesLabel> {
        match text.to_ascii_lowercase().as_str() {
            "q00" => Some(SeriesLabel::Q00),
            "q10" => Some(SeriesLabel::Q10),
            "q01" => Some(SeriesLabel::Q01),
            "q11" => Some(SeriesLabel::Q11),
            _ => None,
        }
    }

    fn extract(&self, layer: &Layer) -> BigUint {
        match self {
            SeriesLabel::Q00 => layer.get(0, 0),
            SeriesLabel::Q10 => layer.x_axis_sum(),
            SeriesLabel::Q01 => layer.y_axis_sum(),
            SeriesLabel::Q11 => layer.total(),
        }
    }
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesLabel::Q00 => "Q(0,0,z)",
            SeriesLabel::Q10 => "Q(1,0,z)",
            SeriesLabel::Q01 => "Q(0,1,z)",
            SeriesLabel::Q11 => "Q(1,1,z)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSeries {
    pub label: SeriesLabel,
    pub coeffs: Vec<BigUint>,
}

impl CoefficientSeries {
    /// `Σ_n coeffs[n] z^n` in floating point, robust to coefficients beyond
    /// the `f64` range.
    pub fn evaluate(&self, z: f64) -> f64 {
        let mut zpow = Scaled::one();
        let mut acc = 0.0;
        for c in &self.coeffs {
            acc += Scaled::from_big(c).mul(&zpow).to_f64();
            zpow = zpow.mul_f64(z);
        }
        acc
    }
}

pub fn series(table: &CountTable, label: SeriesLabel) -> CoefficientSeries {
    CoefficientSeries {
        label,
        coeffs: table.layers.iter().map(|l| label.extract(l)).collect(),
    }
}

/// The four boundary series up to `n_max`, computed in a single streaming pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSet {
    pub q00: CoefficientSeries,
    pub q10: CoefficientSeries,
    pub q01: CoefficientSeries,
    pub q11: CoefficientSeries,
}

impl SeriesSet {
    pub fn get(&self, label: SeriesLabel) -> &CoefficientSeries {
        match label {
            SeriesLabel::Q00 => &self.q00,
            SeriesLabel::Q10 => &self.q10,
            SeriesLabel::Q01 => &self.q01,
            SeriesLabel::Q11 => &self.q11,
        }
    }
}

pub fn all_series(s: &StepSet, n_max: usize) -> Result<SeriesSet> {
    let mut out: Vec<Vec<BigUint>> = (0..4).map(|_| Vec::with_capacity(n_max + 1)).collect();
    for_each_layer(s, n_max, |layer| {
        for (k, label) in SeriesLabel::ALL.iter().enumerate() {
            out[k].push(label.extract(layer));
        }
    })?;
    let mut it = out.into_iter().zip(SeriesLabel::ALL);
    let mut next = || {
        let (coeffs, label) = it.next().expect("four series");
        CoefficientSeries { label, coeffs }
    };
    Ok(SeriesSet {
        q00: next(),
        q10: next(),
        q01: next(),
        q11: next(),
    })
}

/// Rows `q(i, 0, n)` (horizontal axis) and `q(0, j, n)` (vertical axis) for
/// every `n ≤ n_max`, enough to evaluate `Q(x,0,z)` and `Q(0,y,z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisProfile {
    pub horizontal: Vec<Vec<BigUint>>,
    pub vertical: Vec<Vec<BigUint>>,
}

impl AxisProfile {
    pub fn compute(s: &StepSet, n_max: usize) -> Result<AxisProfile> {
        let mut horizontal = Vec::with_capacity(n_max + 1);
        let mut vertical = Vec::with_capacity(n_max + 1);
        for_each_layer(s, n_max, |layer| {
            horizontal.push((0..=layer.n()).map(|i| layer.get(i, 0)).collect());
            vertical.push((0..=layer.n()).map(|j| layer.get(0, j)).collect());
        })?;
        Ok(AxisProfile { horizontal, vertical })
    }

    /// Truncated `Q(x, 0, z)`.
    pub fn q_x0(&self, x: Complex64, z: f64) -> Complex64 {
        eval_bivariate(&self.horizontal, x, z)
    }

    /// Truncated `Q(0, y, z)`.
    pub fn q_0y(&self, y: Complex64, z: f64) -> Complex64 {
        eval_bivariate(&self.vertical, y, z)
    }
}

fn eval_bivariate(rows: &[Vec<BigUint>], x: Complex64, z: f64) -> Complex64 {
    let mut acc = Complex64::zero();
    let mut zpow = Scaled::one();
    for row in rows {
        let mut inner = Complex64::zero();
        for c in row.iter().rev() {
            inner = inner * x + Complex64::new(Scaled::from_big(c).mul(&zpow).to_f64(), 0.0);
        }
        acc += inner;
        zpow = zpow.mul_f64(z);
    }
    acc
}

/// A positive real `mantissa · 2^exponent` used to combine huge integers
/// with small powers without overflow.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    mantissa: f64,
    exponent: i64,
}

impl Scaled {
    pub fn one() -> Self {
        Scaled {
            mantissa: 1.0,
            exponent: 0,
        }
    }

    pub fn from_big(c: &BigUint) -> Self {
        let bits = c.bits() as i64;
        let shift = (bits - 96).max(0);
        let top = c >> (shift as usize);
        Scaled {
            mantissa: top.to_f64().unwrap_or(0.0),
            exponent: shift,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mantissa == 0.0 {
            return Scaled {
                mantissa: 0.0,
                exponent: 0,
            };
        }
        const BIG: f64 = 1.157_920_892_373_162e77; // 2^256
        while self.mantissa.abs() > BIG {
            self.mantissa /= BIG;
            self.exponent += 256;
        }
        while self.mantissa.abs() < 1.0 / BIG {
            self.mantissa *= BIG;
            self.exponent -= 256;
        }
        self
    }

    pub fn mul(&self, other: &Scaled) -> Self {
        Scaled {
            mantissa: self.mantissa * other.mantissa,
            exponent: self.exponent + other.exponent,
        }
        .normalized()
    }

    pub fn mul_f64(&self, v: f64) -> Self {
        Scaled {
            mantissa: self.mantissa * v,
            exponent: self.exponent,
        }
        .normalized()
    }

    pub fn to_f64(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        if self.exponent > 2000 {
            return f64::INFINITY * self.mantissa.signum();
        }
        if self.exponent < -2200 {
            return 0.0;
        }
        // split so that each factor stays in range
        let half = self.exponent / 2;
        self.mantissa * 2f64.powi(half as i32) * 2f64.powi((self.exponent - half) as i32)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> f64 {
        self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
    }
}

/// `a / b` to double precision for arbitrarily large non-zero integers.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let (sa, sb) = (Scaled::from_big(a), Scaled::from_big(b));
    let m = sa.mantissa / sb.mantissa;
    Scaled {
        mantissa: m,
        exponent: sa.exponent - sb.exponent,
    }
    .normalized()
    .to_f64()
}

/// `binomial(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    // C_{k+1} = C_k · 2(2k+1)/(k+2), exact at every step
    for k in 0..n {
        acc = acc * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    acc
}

/// A monomial `z^n x^a y^b`.
pub type Monomial = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub z_degree: usize,
    pub x_degree: usize,
    pub y_degree: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionalEquationReport {
    pub degree: usize,
    pub holds: bool,
    pub monomials_compared: usize,
    pub southwest_term: bool,
    pub first_mismatch: Option<Mismatch>,
}

type Poly3 = BTreeMap<Monomial, BigInt>;

fn add_term(p: &mut Poly3, m: Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let e = p.entry(m).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&m);
    }
}

fn mul_truncated(a: &Poly3, b: &Poly3, max_z: usize) -> Poly3 {
    let mut out = Poly3::new();
    for (&(n1, a1, b1), c1) in a {
        for (&(n2, a2, b2), c2) in b {
            if n1 + n2 <= max_z {
                add_term(&mut out, (n1 + n2, a1 + a2, b1 + b2), c1 * c2);
            }
        }
    }
    out
}

fn sub(a: &Poly3, b: &Poly3) -> Poly3 {
    let mut out = a.clone();
    for (&m, c) in b {
        add_term(&mut out, m, -c.clone());
    }
    out
}

/// Checks, multiplied through by `z`,
/// `(z Σδ x^{i+1} y^{j+1} − xy) Q = z c(x) Q(x,0) + z c̃(y) Q(0,y) − z δ_{-1,-1} Q(0,0) − xy`
/// coefficient by coefficient for every monomial of `z`-degree at most `degree`.
pub fn check_functional_equation(s: &StepSet, degree: usize) -> Result<FunctionalEquationReport> {
    let table = count(s, degree)?;
    let mut q = Poly3::new();
    let mut q_x0 = Poly3::new();
    let mut q_0y = Poly3::new();
    let mut q_00 = Poly3::new();
    for layer in table.layers() {
        let n = layer.n();
        for (i, j, c) in layer.nonzero() {
            let c = BigInt::from(c.clone());
            add_term(&mut q, (n, i, j), c.clone());
            if j == 0 {
                add_term(&mut q_x0, (n, i, 0), c.clone());
            }
            if i == 0 {
                add_term(&mut q_0y, (n, 0, j), c.clone());
            }
            if i == 0 && j == 0 {
                add_term(&mut q_00, (n, 0, 0), c);
            }
        }
    }

    let one = BigInt::one;
    let mut kernel_z = Poly3::new();
    for (i, j) in s.steps() {
        add_term(&mut kernel_z, (1, (i + 1) as usize, (j + 1) as usize), one());
    }
    add_term(&mut kernel_z, (0, 1, 1), -one());

    let mut c_z = Poly3::new();
    let mut ct_z = Poly3::new();
    for k in -1i8..=1 {
        if s.contains(k, -1) {
            add_term(&mut c_z, (1, (k + 1) as usize, 0), one());
        }
        if s.contains(-1, k) {
            add_term(&mut ct_z, (1, 0, (k + 1) as usize), one());
        }
    }
    let mut sw_z = Poly3::new();
    let sw = s.contains(-1, -1);
    if sw {
        add_term(&mut sw_z, (1, 0, 0), one());
    }
    let mut xy = Poly3::new();
    add_term(&mut xy, (0, 1, 1), one());

    let lhs = mul_truncated(&kernel_z, &q, degree);
    let mut rhs = mul_truncated(&c_z, &q_x0, degree);
    for (m, c) in mul_truncated(&ct_z, &q_0y, degree) {
        add_term(&mut rhs, m, c);
    }
    rhs = sub(&rhs, &mul_truncated(&sw_z, &q_00, degree));
    rhs = sub(&rhs, &xy);

    let monomials: std::collections::BTreeSet<Monomial> = lhs.keys().chain(rhs.keys()).copied().collect();
    let first_mismatch = monomials.iter().find_map(|m| {
        let l = lhs.get(m).cloned().unwrap_or_default();
        let r = rhs.get(m).cloned().unwrap_or_default();
        (l != r).then(|| Mismatch {
            z_degree: m.0,
            x_degree: m.1,
            y_degree: m.2,
            lhs: l.to_string(),
            rhs: r.to_string(),
        })
    });
    Ok(FunctionalEquationReport {
        degree,
        holds: first_mismatch.is_none(),
        monomials_compared: monomials.len(),
        southwest_term: sw,
        first_mismatch,
    })
}
