//! Small-step sets in the quarter plane and their scalar statistics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight admissible steps, in lexicographic order. Bit `k` of a
/// [`StepSet`] mask corresponds to `STEPS[k]`.
pub const STEPS: [(i8, i8); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Names accepted by [`StepSet::preset`].
pub const PRESETS: [&str; 4] = ["simple", "kreweras", "gessel", "gouyou-beauchamps"];

fn bit_of(i: i8, j: i8) -> Option<usize> {
    STEPS.iter().position(|&s| s == (i, j))
}

/// A non-empty subset of `{-1,0,1}² \ {(0,0)}`, stored as an 8-bit indicator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepSet {
    mask: u8,
}

impl StepSet {
    /// Builds a step set from integer pairs. Duplicates collapse.
    pub fn new<I>(steps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut mask = 0u8;
        for (i, j) in steps {
            let in_range = (-1..=1).contains(&i) && (-1..=1).contains(&j);
            if !in_range || (i, j) == (0, 0) {
                return Err(Error::InvalidStep(i, j));
            }
            mask |= 1 << bit_of(i as i8, j as i8).expect("validated step");
        }
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask == 0 {
            return Err(Error::EmptyStepSet);
        }
        Ok(StepSet { mask })
    }

    /// Iterates over all 255 non-empty step sets.
    pub fn all() -> impl Iterator<Item = StepSet> {
        (1..=255u8).map(|mask| StepSet { mask })
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    /// The indicator δ_{i,j}.
    pub fn delta(&self, i: i8, j: i8) -> u8 {
        match bit_of(i, j) {
            Some(k) => (self.mask >> k) & 1,
            None => 0,
        }
    }

    pub fn contains(&self, i: i8, j: i8) -> bool {
        self.delta(i, j) == 1
    }

    /// Steps in lexicographic order.
    pub fn steps(&self) -> Vec<(i8, i8)> {
        STEPS
            .iter()
            .enumerate()
            .filter(|(k, _)| (self.mask >> k) & 1 == 1)
            .map(|(_, &s)| s)
            .collect()
    }

    pub fn cardinality(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn drift(&self) -> DriftData {
        let (mut mx, mut my, mut sxy) = (0i32, 0i32, 0i32);
        for (i, j) in self.steps() {
            mx += i as i32;
            my += j as i32;
            sxy += (i as i32) * (j as i32);
        }
        DriftData {
            mx,
            my,
            covariance: sxy - mx * my,
            cardinality: self.cardinality(),
        }
    }

    /// True when there is no West, South-West or South step.
    pub fn is_singular(&self) -> bool {
        !self.contains(-1, 0) && !self.contains(-1, -1) && !self.contains(0, -1)
    }

    /// Image under the diagonal reflection `(i,j) -> (j,i)`.
    pub fn mirror(&self) -> StepSet {
        let mut mask = 0u8;
        for (i, j) in self.steps() {
            mask |= 1 << bit_of(j, i).expect("reflection preserves the step range");
        }
        StepSet { mask }
    }

    /// Canonical representative modulo the diagonal reflection together with
    /// the transform that maps `self` onto it.
    pub fn symmetry_class(&self) -> (StepSet, SymmetryTransform) {
        let mirrored = self.mirror();
        if mirrored.steps() < self.steps() {
            (mirrored, SymmetryTransform::DiagonalReflection)
        } else {
            (*self, SymmetryTransform::Identity)
        }
    }

    /// Steps exist in all four axis directions (`i = ±1` and `j = ±1`), so
    /// neither half of the kernel quadratic vanishes identically.
    pub fn has_full_support(&self) -> bool {
        let s = self.steps();
        s.iter().any(|&(i, _)| i == 1)
            && s.iter().any(|&(i, _)| i == -1)
            && s.iter().any(|&(_, j)| j == 1)
            && s.iter().any(|&(_, j)| j == -1)
    }

    /// True when the origin lies strictly inside the convex hull of the steps,
    /// which is exactly when `Σ δ α^i β^j` has a minimiser in `(0,∞)²`.
    pub fn origin_in_interior(&self) -> bool {
        let steps = self.steps();
        // A closed half-plane containing every step has a boundary normal
        // orthogonal to one of the steps.
        for &(i, j) in &steps {
            for (vx, vy) in [(-(j as i32), i as i32), (j as i32, -(i as i32))] {
                if steps
                    .iter()
                    .all(|&(a, b)| vx * a as i32 + vy * b as i32 <= 0)
                {
                    return false;
                }
            }
        }
        true
    }

    /// Step sets covered by the singularity analysis: non-singular, at least
    /// three steps and a positive critical point.
    pub fn is_analyzable(&self) -> bool {
        !self.is_singular() && self.cardinality() >= 3 && self.origin_in_interior()
    }

    pub fn preset(name: &str) -> Result<StepSet> {
        let steps: &[(i64, i64)] = match name.to_ascii_lowercase().as_str() {
            "simple" => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            "kreweras" => &[(-1, 0), (0, -1), (1, 1)],
            "gessel" => &[(1, 0), (-1, 0), (1, 1), (-1, -1)],
            "gouyou-beauchamps" | "gouyou_beauchamps" => &[(1, 0), (-1, 0), (-1, 1), (1, -1)],
            _ => return Err(Error::UnknownPreset(name.to_string())),
        };
        StepSet::new(steps.iter().copied())
    }

    /// Parses `{"steps": [[i,j], ...]}`.
    pub fn from_json(text: &str) -> Result<StepSet> {
        let doc: StepSetDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        StepSet::new(doc.steps.into_iter().map(|[i, j]| (i, j)))
    }

    pub fn to_doc(&self) -> StepSetDoc {
        StepSetDoc {
            steps: self
                .steps()
                .into_iter()
                .map(|(i, j)| [i as i64, j as i64])
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("step-set document serializes")
    }
}

impl fmt::Debug for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StepSet{:?}", self.steps())
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps()
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Wire format of a step set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSetDoc {
    pub steps: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryTransform {
    Identity,
    DiagonalReflection,
}

impl SymmetryTransform {
    pub fn apply(&self, s: &StepSet) -> StepSet {
        match self {
            SymmetryTransform::Identity => *s,
            SymmetryTransform::DiagonalReflection => s.mirror(),
        }
    }
}

/// Mean drift, covariance and cardinality of a step set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriftData {
    pub mx: i32,
    pub my: i32,
    pub covariance: i32,
    pub cardinality: u32,
}

impl DriftData {
    pub fn signs(&self) -> (Sign, Sign) {
        (Sign::of(self.mx), Sign::of(self.my))
    }

    pub fn covariance_sign(&self) -> Sign {
        Sign::of(self.covariance)
    }

    pub fn is_zero(&self) -> bool {
        self.mx == 0 && self.my == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn of(v: i32) -> Sign {
        match v.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        })
    }
}
