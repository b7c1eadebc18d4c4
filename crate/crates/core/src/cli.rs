//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards its arguments and exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{growth_estimate, verify_prediction, Tolerances};
use crate::bvp::{self, circle_cgf, Cgf, GFValue};
use crate::enumerate::{self, all_series, catalan, check_functional_equation, SeriesLabel};
use crate::error::Error;
use crate::group::{group_order, GroupOrderResult, DEFAULT_MAX_HALF_ORDER};
use crate::kernel;
use crate::singular::{self, classify_first_singularities};
use crate::stepset::StepSet;

#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about = "Enumeration and analysis of small-step walks in the quarter plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Inline step set, e.g. '{"steps": [[1,0],[-1,0],[0,1],[0,-1]]}'
    #[arg(long)]
    steps: Option<String>,
    /// File holding a step-set document
    #[arg(long)]
    steps_file: Option<PathBuf>,
    /// simple, kreweras, gessel or gouyou-beauchamps
    #[arg(long)]
    preset: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Series {
    Q00,
    Q10,
    Q01,
    Q11,
}

impl From<Series> for SeriesLabel {
    fn from(s: Series) -> Self {
        match s {
            Series::Q00 => SeriesLabel::Q00,
            Series::Q10 => SeriesLabel::Q10,
            Series::Q01 => SeriesLabel::Q01,
            Series::Q11 => SeriesLabel::Q11,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CgfChoice {
    BuiltinCircle,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts q(i,j,n) for n ≤ N
    Count {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Coefficients of Q(0,0,z), Q(1,0,z), Q(0,1,z) or Q(1,1,z)
    Series {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// One series; all four when omitted
        #[arg(long, value_enum)]
        series: Option<Series>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Order of the group of the walk
    Group {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_MAX_HALF_ORDER)]
        max_half_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Branch points and kernel curves at a given z
    Kernel {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        z: f64,
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Candidate singularities and the first-singularity classification
    Singularities {
        #[command(flatten)]
        source: Source,
    },
    /// Structural classification of the step set
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Numerical values of the boundary generating functions
    Bvp {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        z: f64,
        #[arg(long, value_enum)]
        target: Series,
        #[arg(long, value_enum)]
        cgf: Option<CgfChoice>,
    },
    /// Growth rate, exponent and constant of a coefficient sequence
    Asymptotics {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        series: Series,
        #[arg(long, default_value_t = 400)]
        n: usize,
        /// Index stride; detected from the support when omitted
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Cross-module consistency suite
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum KernelAction {
    /// Roots of both discriminants, ordered
    BranchPoints,
    /// Sampled kernel curve as CSV (re, im)
    Trace {
        #[arg(long, default_value_t = 256)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Curve::M)]
        curve: Curve,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Curve {
    M,
    L,
}

enum Failure {
    Analysis(Error),
    Io(String),
    BrokenPipe,
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Analysis(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        match e.kind() {
            std::io::ErrorKind::BrokenPipe => Failure::BrokenPipe,
            _ => Failure::Io(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs one command. Returns 0 on success, 1 on an analysis error or a
/// failed check, 2 on a usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(failure) => {
            let body = match failure {
                Failure::BrokenPipe => return 0,
                Failure::Analysis(e) => json!({"error": e.kind(), "message": e.to_string()}),
                Failure::Io(m) => json!({"error": "io", "message": m}),
                Failure::Check(failed) => json!({"error": "check_failed", "failed": failed}),
            };
            let _ = writeln!(err, "{body}");
            1
        }
    }
}

fn load(source: &Source) -> std::result::Result<StepSet, Failure> {
    if let Some(text) = &source.steps {
        return Ok(StepSet::from_json(text)?);
    }
    if let Some(path) = &source.steps_file {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        return Ok(StepSet::from_json(&text)?);
    }
    let name = source.preset.as_deref().unwrap_or_default();
    Ok(StepSet::preset(name)?)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Count { source, n, format } => count(&load(&source)?, n, format, out),
        Command::Series { source, n, series, format } => series_cmd(&load(&source)?, n, series, format, out),
        Command::Group {
            source,
            max_half_order,
            seed,
        } => {
            let value = match group_order(&load(&source)?, max_half_order, seed)? {
                GroupOrderResult::Finite { order } => json!({"order": order}),
                GroupOrderResult::ExceedsBound { bound } => json!({"order": "exceeds", "bound": bound}),
            };
            emit(out, &value)
        }
        Command::Kernel { source, z, action } => kernel_cmd(&load(&source)?, z, action, out),
        Command::Singularities { source } => emit(out, &classify_first_singularities(&load(&source)?)?),
        Command::Classify { source } => classify(&load(&source)?, out),
        Command::Bvp { source, z, target, cgf } => emit(out, &bvp_value(&load(&source)?, z, target, cgf)?),
        Command::Asymptotics {
            source,
            series,
            n,
            stride,
        } => {
            let s = load(&source)?;
            let coeffs = all_series(&s, n)?.get(series.into()).coeffs.clone();
            emit(out, &growth_estimate(&coeffs, stride)?)
        }
        Command::Check { source, n, seed } => check(&load(&source)?, n, seed, out),
    }
}

fn count(s: &StepSet, n: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let mut layers = Vec::new();
    let mut io = Ok(());
    if format == Format::Csv {
        writeln!(out, "n,i,j,q")?;
    }
    enumerate::for_each_layer(s, n, |layer| {
        if format == Format::Csv {
            for (i, j, q) in layer.nonzero() {
                if io.is_ok() {
                    io = writeln!(out, "{},{i},{j},{q}", layer.n());
                }
            }
        } else {
            let cells: Vec<Value> = layer.nonzero().map(|(i, j, q)| json!([i, j, q.to_string()])).collect();
            layers.push(json!({"n": layer.n(), "cells": cells}));
        }
    })?;
    io?;
    if format == Format::Json {
        emit(out, &json!({"steps": s.to_doc().steps, "n_max": n, "layers": layers}))?;
    }
    Ok(())
}

fn series_cmd(s: &StepSet, n: usize, series: Option<Series>, format: Format, out: &mut dyn Write) -> Outcome {
    let set = all_series(s, n)?;
    let labels: Vec<SeriesLabel> = match series {
        Some(one) => vec![one.into()],
        None => SeriesLabel::ALL.to_vec(),
    };
    match format {
        Format::Csv => {
            let header: Vec<String> = labels.iter().map(|l| serde_json::to_value(l).unwrap().as_str().unwrap_or_default().to_string()).collect();
            writeln!(out, "n,{}", header.join(","))?;
            for k in 0..=n {
                let row: Vec<String> = labels.iter().map(|&l| set.get(l).coeffs[k].to_string()).collect();
                writeln!(out, "{k},{}", row.join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for &l in &labels {
                let key = serde_json::to_value(l).unwrap().as_str().unwrap_or_default().to_string();
                let coeffs: Vec<String> = set.get(l).coeffs.iter().map(|c| c.to_string()).collect();
                map.insert(key, json!(coeffs));
            }
            emit(out, &json!({"steps": s.to_doc().steps, "n_max": n, "series": map}))
        }
    }
}

fn kernel_cmd(s: &StepSet, z: f64, action: KernelAction, out: &mut dyn Write) -> Outcome {
    match action {
        KernelAction::BranchPoints => emit(out, &kernel::branch_points(s, z)?),
        KernelAction::Trace { points, curve } => {
            if points < 16 {
                return Err(Error::OutOfRange {
                    name: "points",
                    value: points as f64,
                }
                .into());
            }
            let trace = match curve {
                Curve::M => kernel::trace_curve_m(s, z, points)?,
                Curve::L => kernel::trace_curve_l(s, z, points)?,
            };
            out.write_all(trace.to_csv().as_bytes())?;
            Ok(())
        }
    }
}

fn classify(s: &StepSet, out: &mut dyn Write) -> Outcome {
    let drift = s.drift();
    let (rep, transform) = s.symmetry_class();
    let mut value = json!({
        "steps": s.to_doc().steps,
        "cardinality": s.cardinality(),
        "drift": drift,
        "drift_sign": [drift.signs().0, drift.signs().1],
        "covariance_sign": drift.covariance_sign(),
        "singular": s.is_singular(),
        "origin_in_interior": s.origin_in_interior(),
        "symmetry_class": {"representative": rep.to_doc().steps, "transform": transform},
    });
    if !s.is_singular() {
        let [q10, q01, q11] = singular::designated(drift.signs(), drift.covariance_sign());
        value["designated"] = json!({"q10": q10, "q01": q01, "q11": q11});
    }
    emit(out, &value)
}

fn bvp_value(s: &StepSet, z: f64, target: Series, cgf: Option<CgfChoice>) -> std::result::Result<GFValue, Failure> {
    let circle = circle_cgf();
    let w: Option<&dyn Cgf> = match cgf {
        Some(CgfChoice::BuiltinCircle) => Some(&circle),
        None => None,
    };
    Ok(bvp::evaluate(s, z, target.into(), w)?)
}

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    status: &'static str,
    detail: Value,
}

impl CheckResult {
    fn new(name: &'static str, pass: bool, detail: Value) -> Self {
        CheckResult {
            name,
            status: if pass { "pass" } else { "fail" },
            detail,
        }
    }

    fn skipped(name: &'static str, reason: &str) -> Self {
        CheckResult {
            name,
            status: "skipped",
            detail: json!({"reason": reason}),
        }
    }
}

fn check(s: &StepSet, n: usize, seed: u64, out: &mut dyn Write) -> Outcome {
    let series = all_series(s, n)?;
    let simple = *s == StepSet::preset("simple")?;
    let mut results = Vec::new();

    let degree = n.min(20);
    let fe = check_functional_equation(s, degree)?;
    results.push(CheckResult::new("functional_equation", fe.holds, json!(fe)));

    if simple {
        let bad: Vec<usize> = (0..=n / 2)
            .filter(|&k| series.get(SeriesLabel::Q00).coeffs[2 * k] != catalan(k) * catalan(k + 1))
            .collect();
        results.push(CheckResult::new("catalan", bad.is_empty(), json!({"max_half_length": n / 2, "mismatches": bad})));
    } else {
        results.push(CheckResult::skipped("catalan", "only defined for the simple walk"));
    }

    results.push(match s.is_singular() {
        true => CheckResult::skipped("oracle_vs_integral", "singular walk"),
        false => oracle_vs_integral(s, &series, n, simple)?,
    });

    if s.is_singular() {
        results.push(CheckResult::skipped("singularities", "singular walk"));
        results.push(CheckResult::skipped("asymptotics", "singular walk"));
    } else {
        let report = classify_first_singularities(s)?;
        let tol = 1e-10;
        let sandwich = report.inv_s <= report.z_y + tol
            && report.z_y <= report.z_g + tol
            && report.inv_s <= report.z_x + tol
            && report.z_x <= report.z_g + tol;
        let agree = report.agreement.difference.is_none_or(|d| d <= 1e-9);
        results.push(CheckResult::new(
            "singularities",
            sandwich && agree,
            json!({"z_g": report.z_g, "z_x": report.z_x, "z_y": report.z_y, "inv_s": report.inv_s, "sandwich": sandwich, "methods_agree": agree, "agreement": report.agreement}),
        ));
        results.push(asymptotics_check(s, &series, report.fs_q11.value, simple)?);
    }

    if let Ok(order) = group_order(s, DEFAULT_MAX_HALF_ORDER, seed) {
        results.push(CheckResult::new("group", true, json!(order)));
    } else {
        results.push(CheckResult::skipped("group", "generators are degenerate"));
    }

    let failed: Vec<&str> = results.iter().filter(|r| r.status == "fail").map(|r| r.name).collect();
    emit(out, &json!({"steps": s.to_doc().steps, "n": n, "seed": seed, "checks": results, "pass": failed.is_empty()}))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(json!(failed)))
    }
}

fn oracle_vs_integral(
    s: &StepSet,
    series: &enumerate::SeriesSet,
    n: usize,
    simple: bool,
) -> std::result::Result<CheckResult, Failure> {
    let card = s.cardinality() as f64;
    let tail = |z: f64| (card * z).powi(n as i32 + 1) / (1.0 - card * z);
    let mut rows = Vec::new();
    let mut pass = true;
    if simple {
        for z in [0.05, 0.1, 0.2] {
            let tol = 1e-8 + tail(z);
            let q00 = bvp::q00_simple(z)?.value;
            let q10 = bvp::q10_simple(z)?.value;
            let d00 = (q00 - series.get(SeriesLabel::Q00).evaluate(z)).abs();
            let d10 = (q10 - series.get(SeriesLabel::Q10).evaluate(z)).abs();
            pass &= d00 < tol && d10 < tol;
            rows.push(json!({"z": z, "q00_deviation": d00, "q10_deviation": d10, "tolerance": tol}));
        }
        let w = circle_cgf();
        let z = 0.2;
        let axis = enumerate::AxisProfile::compute(s, n)?;
        for x in [Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.5), Complex64::new(-0.7, 0.0)] {
            let v = bvp::qx0_integral(s, x, z, &w)?;
            let d = (v.value - x * axis.q_x0(x, z)).norm();
            let tol = 1e-8 + tail(z);
            pass &= d < tol;
            rows.push(json!({"z": z, "x": [x.re, x.im], "contour_deviation": d, "tolerance": tol}));
        }
        return Ok(CheckResult::new("oracle_vs_integral", pass, json!(rows)));
    }
    let w = circle_cgf();
    let z = 0.5 / card;
    match bvp::q10_general(s, z, &w, Some(&w)) {
        Ok(v) => {
            let d = (v.value - series.get(SeriesLabel::Q10).evaluate(z)).abs();
            let tol = 1e-8 + tail(z);
            Ok(CheckResult::new("oracle_vs_integral", d < tol, json!({"z": z, "q10_deviation": d, "tolerance": tol})))
        }
        Err(e @ (Error::GluingViolation(_) | Error::CgfUnavailable | Error::RootOutsideDomain(_))) => {
            Ok(CheckResult::skipped("oracle_vs_integral", &e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

/// Walk length at which the simple-walk predictions are checked.
const PREDICTION_N: usize = 600;

fn asymptotics_check(
    s: &StepSet,
    series: &enumerate::SeriesSet,
    fs: f64,
    simple: bool,
) -> std::result::Result<CheckResult, Failure> {
    let coeffs = &series.get(SeriesLabel::Q11).coeffs;
    let fit = match growth_estimate(coeffs, None) {
        Ok(f) => f,
        Err(e) => return Ok(CheckResult::skipped("asymptotics", &e.to_string())),
    };
    let rate = fit.rho.powf(1.0 / fit.stride as f64);
    let deviation = (rate * fs - 1.0).abs();
    let mut pass = deviation < 0.01;
    let mut detail = json!({"growth_rate": rate, "inverse_first_singularity": 1.0 / fs, "relative_deviation": deviation});
    if simple {
        let longer;
        let series = if series.q00.coeffs.len() > PREDICTION_N {
            series
        } else {
            longer = all_series(s, PREDICTION_N)?;
            &longer
        };
        detail["prediction_n"] = json!(series.q00.coeffs.len() - 1);
        let tol = Tolerances::default();
        let pi = std::f64::consts::PI;
        let predictions = [
            (SeriesLabel::Q00, 16.0, -3.0, 4.0 / pi),
            (SeriesLabel::Q10, 4.0, -2.0, 8.0 / pi),
            (SeriesLabel::Q11, 4.0, -1.0, 4.0 / pi),
        ];
        let reports: Vec<Value> = predictions
            .iter()
            .map(|&(label, rho, alpha, c)| {
                let r = verify_prediction(&series.get(label).coeffs, None, rho, alpha, c, tol);
                pass &= r.pass;
                json!({"series": label, "report": r})
            })
            .collect();
        detail["predictions"] = json!(reports);
    }
    Ok(CheckResult::new("asymptotics", pass, detail))
}
