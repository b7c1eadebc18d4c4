use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("step set is empty")]
    EmptyStepSet,
    #[error("invalid step ({0}, {1}): coordinates must lie in {{-1,0,1}} and differ from (0,0)")]
    InvalidStep(i64, i64),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("malformed step-set document: {0}")]
    Parse(String),

    #[error("pole encountered while applying a group generator")]
    PoleEncountered,
    #[error("group generators are degenerate for this step set")]
    DegenerateGenerators,
    #[error("every sampled test point hit a pole after {0} retries")]
    TestPointExhaustion(usize),

    #[error("enumeration depth {requested} exceeds the configured cap {cap}")]
    ResourceLimit { requested: usize, cap: usize },

    #[error("root finding did not converge")]
    RootFindingFailure,
    #[error("kernel quadratic is degenerate at this point")]
    DegenerateQuadratic,
    #[error("branch points collided: the kernel curve has genus zero at z = {0}")]
    GenusZeroRegime(f64),
    #[error("the slit [y1, y2] is degenerate at z = {0}")]
    SlitDegenerate(f64),

    #[error("step set is singular (no W, SW or S step)")]
    SingularWalk,
    #[error("no positive critical point exists for this step set")]
    NoPositiveSolution,
    #[error("no resultant root validates as the x2 = x3 collision")]
    ValidationMismatch,
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("parameter {name} = {value} is outside the admissible range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("z = 1/|S| is a removable singularity of the Q(1,1,z) relation")]
    RemovableSingularity,
    #[error("point lies outside the domain bounded by the kernel curve")]
    PointOutsideDomain,
    #[error("no conformal gluing function is available for this domain")]
    CgfUnavailable,
    #[error("gluing function violates w(t) = w(conj t) on the curve (defect {0:e})")]
    GluingViolation(f64),
    #[error("root {0} of c(x) does not lie inside the domain bounded by the kernel curve")]
    RootOutsideDomain(String),
    #[error("case analysis is inconclusive: {0}")]
    CaseUndetermined(&'static str),
    #[error("quadrature did not converge (estimate {0:e})")]
    QuadratureFailure(f64),

    #[error("sequence is identically zero")]
    ZeroSequence,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake-case identifier, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyStepSet => "empty_step_set",
            Error::InvalidStep(..) => "invalid_step",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::Parse(_) => "parse",
            Error::PoleEncountered => "pole_encountered",
            Error::DegenerateGenerators => "degenerate_generators",
            Error::TestPointExhaustion(_) => "test_point_exhaustion",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::RootFindingFailure => "root_finding_failure",
            Error::DegenerateQuadratic => "degenerate_quadratic",
            Error::GenusZeroRegime(_) => "genus_zero_regime",
            Error::SlitDegenerate(_) => "slit_degenerate",
            Error::SingularWalk => "singular_walk",
            Error::NoPositiveSolution => "no_positive_solution",
            Error::ValidationMismatch => "validation_mismatch",
            Error::DivisionByZero(_) => "division_by_zero",
            Error::OutOfRange { .. } => "out_of_range",
            Error::RemovableSingularity => "removable_singularity",
            Error::PointOutsideDomain => "point_outside_domain",
            Error::CgfUnavailable => "cgf_unavailable",
            Error::GluingViolation(_) => "gluing_violation",
            Error::RootOutsideDomain(_) => "root_outside_domain",
            Error::CaseUndetermined(_) => "case_undetermined",
            Error::QuadratureFailure(_) => "quadrature_failure",
            Error::ZeroSequence => "zero_sequence",
            Error::InsufficientData(_) => "insufficient_data",
        }
    }
}
