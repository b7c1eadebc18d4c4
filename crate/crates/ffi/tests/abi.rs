use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qwalk_ffi::*;

fn preset(name: &str) -> *mut QwalkStepSet {
    let name = CString::new(name).unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { qwalk_stepset_from_preset(name.as_ptr(), &mut set) }, QwalkStatus::Ok);
    set
}

fn last_error() -> String {
    let p = qwalk_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn series_coefficients() {
    let set = preset("simple");
    let mut series = ptr::null_mut();
    let status = unsafe { qwalk_series_new(set, QwalkSeriesLabel::Q00, 60, &mut series) };
    assert_eq!(status, QwalkStatus::Ok);
    assert_eq!(unsafe { qwalk_series_len(series) }, 61);

    let mut digits = ptr::null_mut();
    assert_eq!(unsafe { qwalk_series_coefficient(series, 60, &mut digits) }, QwalkStatus::Ok);
    let text = unsafe { CStr::from_ptr(digits) }.to_str().unwrap().to_string();
    unsafe { qwalk_string_free(digits) };
    assert_eq!(text, "55487590167495928435147118608336");

    let mut v = 0.0;
    assert_eq!(unsafe { qwalk_series_coefficient_f64(series, 4, &mut v) }, QwalkStatus::Ok);
    assert_eq!(v, 10.0);

    assert_eq!(unsafe { qwalk_series_coefficient_f64(series, 61, &mut v) }, QwalkStatus::IndexOutOfBounds);
    assert!(last_error().contains("61"));
    unsafe {
        qwalk_series_free(series);
        qwalk_stepset_free(set);
    }
}

#[test]
fn step_set_constructors_and_errors() {
    let json = CString::new(r#"{"steps": [[1,0],[-1,0],[0,1],[0,-1]]}"#).unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { qwalk_stepset_from_json(json.as_ptr(), &mut set) }, QwalkStatus::Ok);
    assert_eq!(unsafe { qwalk_stepset_cardinality(set) }, 4);
    unsafe { qwalk_stepset_free(set) };

    let bad = CString::new(r#"{"steps": [[2,0]]}"#).unwrap();
    let mut other = ptr::null_mut();
    assert_eq!(unsafe { qwalk_stepset_from_json(bad.as_ptr(), &mut other) }, QwalkStatus::InvalidStep);
    assert!(other.is_null());
    assert!(last_error().contains("invalid step"));

    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { qwalk_stepset_from_preset(unknown.as_ptr(), &mut other) }, QwalkStatus::UnknownPreset);
    assert_eq!(unsafe { qwalk_stepset_from_mask(0, &mut other) }, QwalkStatus::EmptyStepSet);
    assert_eq!(unsafe { qwalk_stepset_from_json(ptr::null(), &mut other) }, QwalkStatus::NullPointer);
    assert_eq!(unsafe { qwalk_stepset_cardinality(ptr::null()) }, 0);
    unsafe { qwalk_stepset_free(ptr::null_mut()) };
}

#[test]
fn singularities_and_group() {
    let set = preset("gessel");
    let mut r = std::mem::MaybeUninit::<QwalkSingularities>::uninit();
    assert_eq!(unsafe { qwalk_singularities(set, r.as_mut_ptr()) }, QwalkStatus::Ok);
    let r = unsafe { r.assume_init() };
    assert!((r.inv_s - 0.25).abs() < 1e-15);
    assert!(r.z_g >= r.inv_s);
    assert_eq!((r.drift_x, r.drift_y), (0, 0));

    let mut g = QwalkGroupOrder {
        finite: false,
        order: 0,
        bound: 0,
    };
    assert_eq!(unsafe { qwalk_group_order(set, 16, 0, &mut g) }, QwalkStatus::Ok);
    assert!(g.finite);
    assert_eq!(g.order, 8);
    unsafe { qwalk_stepset_free(set) };

    let mut singular = ptr::null_mut();
    assert_eq!(unsafe { qwalk_stepset_from_mask(0b1001_0000, &mut singular) }, QwalkStatus::Ok);
    let mut r = std::mem::MaybeUninit::<QwalkSingularities>::uninit();
    assert_eq!(unsafe { qwalk_singularities(singular, r.as_mut_ptr()) }, QwalkStatus::SingularWalk);
    unsafe { qwalk_stepset_free(singular) };
}

#[test]
fn bvp_values() {
    let set = preset("simple");
    let mut v = std::mem::MaybeUninit::<QwalkGfValue>::uninit();
    let status = unsafe { qwalk_bvp_evaluate(set, QwalkSeriesLabel::Q10, 0.2, QwalkCgf::None, v.as_mut_ptr()) };
    assert_eq!(status, QwalkStatus::Ok);
    let closed = unsafe { v.assume_init() };
    assert_eq!(closed.method, QwalkMethod::CircleClosedForm);
    assert!((closed.value - 1.4470328907247194).abs() < 1e-12);

    let mut w = std::mem::MaybeUninit::<QwalkGfValue>::uninit();
    let status =
        unsafe { qwalk_bvp_evaluate(set, QwalkSeriesLabel::Q10, 0.2, QwalkCgf::BuiltinCircle, w.as_mut_ptr()) };
    assert_eq!(status, QwalkStatus::Ok);
    assert!((unsafe { w.assume_init() }.value - closed.value).abs() < 1e-8);

    let status = unsafe { qwalk_bvp_evaluate(set, QwalkSeriesLabel::Q00, 0.3, QwalkCgf::None, v.as_mut_ptr()) };
    assert_eq!(status, QwalkStatus::OutOfRange);
    unsafe { qwalk_stepset_free(set) };

    let k = preset("kreweras");
    let status = unsafe { qwalk_bvp_evaluate(k, QwalkSeriesLabel::Q10, 0.2, QwalkCgf::None, v.as_mut_ptr()) };
    assert_eq!(status, QwalkStatus::CgfUnavailable);
    unsafe { qwalk_stepset_free(k) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qwalk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let Ok(probe) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(probe.status.success());
    let dir = std::env::temp_dir().join(format!("qwalk-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"qwalk.h\"\nint main(void) {\n  QwalkStepSet *s = NULL;\n  QwalkStatus st = qwalk_stepset_from_preset(\"simple\", &s);\n  qwalk_stepset_free(s);\n  return st == QWALK_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&header)
        .arg(&src)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
