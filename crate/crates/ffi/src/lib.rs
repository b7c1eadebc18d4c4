//! C ABI over `qwalk`.
//!
//! Objects are opaque handles created by `*_new`/`*_from_*` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`QwalkStatus`]; on failure [`qwalk_last_error_message`] describes the
//! error for the calling thread. Outputs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use qwalk::bvp::{self, circle_cgf, Cgf, Method};
use qwalk::enumerate::{all_series, CoefficientSeries, Scaled, SeriesLabel};
use qwalk::group::{group_order, GroupOrderResult};
use qwalk::singular::{classify_first_singularities, Candidate};
use qwalk::{Error, StepSet};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwalkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    IndexOutOfBounds = 4,
    EmptyStepSet = 10,
    InvalidStep = 11,
    UnknownPreset = 12,
    Parse = 13,
    PoleEncountered = 20,
    DegenerateGenerators = 21,
    TestPointExhaustion = 22,
    ResourceLimit = 30,
    RootFindingFailure = 40,
    DegenerateQuadratic = 41,
    GenusZeroRegime = 42,
    SlitDegenerate = 43,
    SingularWalk = 50,
    NoPositiveSolution = 51,
    ValidationMismatch = 52,
    DivisionByZero = 53,
    OutOfRange = 60,
    RemovableSingularity = 61,
    PointOutsideDomain = 62,
    CgfUnavailable = 63,
    GluingViolation = 64,
    RootOutsideDomain = 65,
    CaseUndetermined = 66,
    QuadratureFailure = 67,
    ZeroSequence = 70,
    InsufficientData = 71,
}

impl From<&Error> for QwalkStatus {
    fn from(e: &Error) -> Self {
        use QwalkStatus as S;
        match e {
            Error::EmptyStepSet => S::EmptyStepSet,
            Error::InvalidStep(..) => S::InvalidStep,
            Error::UnknownPreset(_) => S::UnknownPreset,
            Error::Parse(_) => S::Parse,
            Error::PoleEncountered => S::PoleEncountered,
            Error::DegenerateGenerators => S::DegenerateGenerators,
            Error::TestPointExhaustion(_) => S::TestPointExhaustion,
            Error::ResourceLimit { .. } => S::ResourceLimit,
            Error::RootFindingFailure => S::RootFindingFailure,
            Error::DegenerateQuadratic => S::DegenerateQuadratic,
            Error::GenusZeroRegime(_) => S::GenusZeroRegime,
            Error::SlitDegenerate(_) => S::SlitDegenerate,
            Error::SingularWalk => S::SingularWalk,
            Error::NoPositiveSolution => S::NoPositiveSolution,
            Error::ValidationMismatch => S::ValidationMismatch,
            Error::DivisionByZero(_) => S::DivisionByZero,
            Error::OutOfRange { .. } => S::OutOfRange,
            Error::RemovableSingularity => S::RemovableSingularity,
            Error::PointOutsideDomain => S::PointOutsideDomain,
            Error::CgfUnavailable => S::CgfUnavailable,
            Error::GluingViolation(_) => S::GluingViolation,
            Error::RootOutsideDomain(_) => S::RootOutsideDomain,
            Error::CaseUndetermined(_) => S::CaseUndetermined,
            Error::QuadratureFailure(_) => S::QuadratureFailure,
            Error::ZeroSequence => S::ZeroSequence,
            Error::InsufficientData(_) => S::InsufficientData,
        }
    }
}

/// Which boundary generating function to compute.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwalkSeriesLabel {
    /// `Q(0,0,z)`
    Q00 = 0,
    /// `Q(1,0,z)`
    Q10 = 1,
    /// `Q(0,1,z)`
    Q01 = 2,
    /// `Q(1,1,z)`
    Q11 = 3,
}

impl From<QwalkSeriesLabel> for SeriesLabel {
    fn from(l: QwalkSeriesLabel) -> Self {
        match l {
            QwalkSeriesLabel::Q00 => SeriesLabel::Q00,
            QwalkSeriesLabel::Q10 => SeriesLabel::Q10,
            QwalkSeriesLabel::Q01 => SeriesLabel::Q01,
            QwalkSeriesLabel::Q11 => SeriesLabel::Q11,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwalkCandidate {
    Zg = 0,
    Zx = 1,
    Zy = 2,
    InvS = 3,
}

impl From<Candidate> for QwalkCandidate {
    fn from(c: Candidate) -> Self {
        match c {
            Candidate::ZG => QwalkCandidate::Zg,
            Candidate::ZX => QwalkCandidate::Zx,
            Candidate::ZY => QwalkCandidate::Zy,
            Candidate::InvS => QwalkCandidate::InvS,
        }
    }
}

/// Gluing function used by [`qwalk_bvp_evaluate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwalkCgf {
    /// Closed forms; simple walk only.
    None = 0,
    /// `t + 1/t`.
    BuiltinCircle = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwalkMethod {
    CircleClosedForm = 0,
    CgfIntegral = 1,
    Relation = 2,
}

/// Opaque step set.
pub struct QwalkStepSet(StepSet);

/// Opaque coefficient sequence.
pub struct QwalkSeries(CoefficientSeries);

/// First singularities and their ingredients.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QwalkSingularities {
    pub z_g: f64,
    pub z_x: f64,
    pub z_y: f64,
    pub inv_s: f64,
    pub drift_x: i32,
    pub drift_y: i32,
    pub covariance: i32,
    /// First positive singularity of `Q(1,0,z)`, `Q(0,1,z)` and `Q(1,1,z)`.
    pub fs_q10: f64,
    pub fs_q01: f64,
    pub fs_q11: f64,
    /// First designated candidate of each.
    pub kind_q10: QwalkCandidate,
    pub kind_q01: QwalkCandidate,
    pub kind_q11: QwalkCandidate,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QwalkGroupOrder {
    /// False when no order up to `bound` was found.
    pub finite: bool,
    pub order: usize,
    pub bound: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QwalkGfValue {
    pub value: f64,
    pub z: f64,
    pub error_estimate: f64,
    pub method: QwalkMethod,
    pub on_boundary: bool,
    pub one_sided_limit: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

enum Fail {
    Status(QwalkStatus, String),
    Analysis(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Analysis(e)
    }
}

fn null(name: &str) -> Fail {
    Fail::Status(QwalkStatus::NullPointer, format!("`{name}` is NULL"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> QwalkStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwalkStatus::Ok,
        Ok(Err(Fail::Analysis(e))) => {
            set_error(e.to_string());
            QwalkStatus::from(&e)
        }
        Ok(Err(Fail::Status(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            QwalkStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(QwalkStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn qwalk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qwalk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `{"steps": [[i,j], ...]}`.
///
/// # Safety
/// `json` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_stepset_from_json(json: *const c_char, out: *mut *mut QwalkStepSet) -> QwalkStatus {
    guard(|| {
        let s = StepSet::from_json(text(json, "json")?)?;
        write(out, Box::into_raw(Box::new(QwalkStepSet(s))), "out")
    })
}

/// One of `simple`, `kreweras`, `gessel`, `gouyou-beauchamps`.
///
/// # Safety
/// As for [`qwalk_stepset_from_json`].
#[no_mangle]
pub unsafe extern "C" fn qwalk_stepset_from_preset(name: *const c_char, out: *mut *mut QwalkStepSet) -> QwalkStatus {
    guard(|| {
        let s = StepSet::preset(text(name, "name")?)?;
        write(out, Box::into_raw(Box::new(QwalkStepSet(s))), "out")
    })
}

/// Bit `k` of `mask` selects the `k`-th step in the order
/// `(-1,-1), (-1,0), (-1,1), (0,-1), (0,1), (1,-1), (1,0), (1,1)`.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_stepset_from_mask(mask: u8, out: *mut *mut QwalkStepSet) -> QwalkStatus {
    guard(|| {
        let s = StepSet::from_mask(mask)?;
        write(out, Box::into_raw(Box::new(QwalkStepSet(s))), "out")
    })
}

/// `|S|`, or 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qwalk_stepset_cardinality(set: *const QwalkStepSet) -> u32 {
    set.as_ref().map_or(0, |s| s.0.cardinality())
}

/// # Safety
/// `set` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_stepset_free(set: *mut QwalkStepSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Exact coefficients `0..=n_max` of one boundary series.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_series_new(
    set: *const QwalkStepSet,
    label: QwalkSeriesLabel,
    n_max: usize,
    out: *mut *mut QwalkSeries,
) -> QwalkStatus {
    guard(|| {
        let s = handle(set, "set")?;
        let all = all_series(&s.0, n_max)?;
        let series = all.get(label.into()).clone();
        write(out, Box::into_raw(Box::new(QwalkSeries(series))), "out")
    })
}

/// Number of coefficients, or 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qwalk_series_len(series: *const QwalkSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.coeffs.len())
}

unsafe fn coefficient<'a>(series: *const QwalkSeries, index: usize) -> Result<&'a BigUint, Fail> {
    let s = handle(series, "series")?;
    s.0.coeffs.get(index).ok_or_else(|| {
        Fail::Status(
            QwalkStatus::IndexOutOfBounds,
            format!("index {index} is out of bounds for {} coefficients", s.0.coeffs.len()),
        )
    })
}

/// Coefficient `index` in decimal, to be released with [`qwalk_string_free`].
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_series_coefficient(
    series: *const QwalkSeries,
    index: usize,
    out: *mut *mut c_char,
) -> QwalkStatus {
    guard(|| {
        let c = coefficient(series, index)?;
        let s = CString::new(c.to_string()).expect("digits only");
        write(out, s.into_raw(), "out")
    })
}

/// Coefficient `index` rounded to a double (infinite past its range).
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_series_coefficient_f64(series: *const QwalkSeries, index: usize, out: *mut f64) -> QwalkStatus {
    guard(|| {
        let c = coefficient(series, index)?;
        write(out, Scaled::from_big(c).to_f64(), "out")
    })
}

/// # Safety
/// `series` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_series_free(series: *mut QwalkSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Classifies the first positive singularities.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_singularities(set: *const QwalkStepSet, out: *mut QwalkSingularities) -> QwalkStatus {
    guard(|| {
        let s = handle(set, "set")?;
        let r = classify_first_singularities(&s.0)?;
        let d = s.0.drift();
        let kind = |fs: &qwalk::singular::FirstSingularity| QwalkCandidate::from(fs.designated[0]);
        let value = QwalkSingularities {
            z_g: r.z_g,
            z_x: r.z_x,
            z_y: r.z_y,
            inv_s: r.inv_s,
            drift_x: d.mx,
            drift_y: d.my,
            covariance: d.covariance,
            fs_q10: r.fs_q10.value,
            fs_q01: r.fs_q01.value,
            fs_q11: r.fs_q11.value,
            kind_q10: kind(&r.fs_q10),
            kind_q01: kind(&r.fs_q01),
            kind_q11: kind(&r.fs_q11),
        };
        write(out, value, "out")
    })
}

/// Order of the group generated by the two birational involutions, searched
/// up to `2 * max_half_order`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_group_order(
    set: *const QwalkStepSet,
    max_half_order: usize,
    seed: u64,
    out: *mut QwalkGroupOrder,
) -> QwalkStatus {
    guard(|| {
        let s = handle(set, "set")?;
        let value = match group_order(&s.0, max_half_order, seed)? {
            GroupOrderResult::Finite { order } => QwalkGroupOrder {
                finite: true,
                order,
                bound: 2 * max_half_order,
            },
            GroupOrderResult::ExceedsBound { bound } => QwalkGroupOrder {
                finite: false,
                order: 0,
                bound,
            },
        };
        write(out, value, "out")
    })
}

/// Evaluates a boundary generating function at `z`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qwalk_bvp_evaluate(
    set: *const QwalkStepSet,
    target: QwalkSeriesLabel,
    z: f64,
    cgf: QwalkCgf,
    out: *mut QwalkGfValue,
) -> QwalkStatus {
    guard(|| {
        let s = handle(set, "set")?;
        let circle = circle_cgf();
        let w: Option<&dyn Cgf> = match cgf {
            QwalkCgf::None => None,
            QwalkCgf::BuiltinCircle => Some(&circle),
        };
        let v = bvp::evaluate(&s.0, z, target.into(), w)?;
        let value = QwalkGfValue {
            value: v.value,
            z: v.z,
            error_estimate: v.quadrature_error_estimate,
            method: match v.method {
                Method::CircleClosedForm => QwalkMethod::CircleClosedForm,
                Method::CgfIntegral => QwalkMethod::CgfIntegral,
                Method::Relation => QwalkMethod::Relation,
            },
            on_boundary: v.on_boundary,
            one_sided_limit: v.one_sided_limit,
        };
        write(out, value, "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_error_kind_has_a_distinct_status() {
        let errors = [
            Error::EmptyStepSet,
            Error::InvalidStep(2, 0),
            Error::UnknownPreset("x".into()),
            Error::Parse("x".into()),
            Error::PoleEncountered,
            Error::DegenerateGenerators,
            Error::TestPointExhaustion(1),
            Error::ResourceLimit { requested: 2, cap: 1 },
            Error::RootFindingFailure,
            Error::DegenerateQuadratic,
            Error::GenusZeroRegime(0.1),
            Error::SlitDegenerate(0.1),
            Error::SingularWalk,
            Error::NoPositiveSolution,
            Error::ValidationMismatch,
            Error::DivisionByZero("z"),
            Error::OutOfRange { name: "z", value: 1.0 },
            Error::RemovableSingularity,
            Error::PointOutsideDomain,
            Error::CgfUnavailable,
            Error::GluingViolation(1.0),
            Error::RootOutsideDomain("1".into()),
            Error::CaseUndetermined("x"),
            Error::QuadratureFailure(1.0),
            Error::ZeroSequence,
            Error::InsufficientData("x".into()),
        ];
        let mut codes: Vec<i32> = errors.iter().map(|e| QwalkStatus::from(e) as i32).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), errors.len());
        assert!(!codes.contains(&0));
    }

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, QwalkStatus::Panic);
        assert!(!qwalk_last_error_message().is_null());
    }
}
