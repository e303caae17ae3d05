//! `reproduce`: every analysis at the reference parameters, plot data for the
//! solution families, and a summary `report.json`.
//!
//! Output is deterministic for a fixed seed (no timestamps, stable key order),
//! so re-running overwrites byte-identical files.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::expr::{rat, rat_to_f64, rint, Rational};
use crate::kpbbm::Params;
use crate::liealg::classify;
use crate::numerics::{convergence_order, snapshots_csv, soliton_run, ResidualGrid, SolitonRunConfig};
use crate::solutions::{build_sr_solution, hb_solve, profile, tanh_solve_seeded, Family, SolutionSpec};

use super::commands::{
    algebra_report, classification_json, csv_num, painleve_report, profile_csv, solution_report, symmetries_report, ORBIT_TOLERANCE,
};
use super::{invalid, CliError, Sink};

/// Snapshot times of the movement plots.
const MOVEMENT_TIMES: [f64; 3] = [0.0, 10.0, 15.0];

/// Default directory when `--output-dir` is not given.
pub const DEFAULT_DIR: &str = "kpbbm-output";

/// Elements whose classification is worked out by hand, with the expected tag.
pub const WORKED_ELEMENTS: [([i64; 4], &str); 4] =
    [([1, 5, -3, 2], "G1"), ([0, 1, 1, 1], "G2+G3+sqrt(c)G4"), ([0, 0, 1, 1], "G3+G4"), ([0, -2, 0, 0], "G2")];

/// One column per `(label, solution, t)` along `y = 0`, sharing the `x` grid.
fn columns_csv(cols: &[(String, &SolutionSpec, f64)], xmin: f64, xmax: f64, n: usize) -> Result<String, CliError> {
    let data: Vec<Vec<(f64, f64)>> =
        cols.iter().map(|(_, s, t)| profile(s, 0.0, *t, xmin, xmax, n).map_err(invalid)).collect::<Result<_, _>>()?;
    let mut csv = String::from("x");
    for (label, _, _) in cols {
        csv.push_str(&format!(",{label}"));
    }
    csv.push('\n');
    for i in 0..n {
        csv.push_str(&csv_num(data[0][i].0));
        for c in &data {
            csv.push_str(&format!(",{}", csv_num(c[i].1)));
        }
        csv.push('\n');
    }
    Ok(csv)
}

/// Snapshots of one wave at several times.
fn movement_csv(s: &SolutionSpec, times: &[f64]) -> Result<String, CliError> {
    let cols: Vec<(String, &SolutionSpec, f64)> = times.iter().map(|&t| (format!("u_t{t}"), s, t)).collect();
    columns_csv(&cols, -40.0, 40.0, 2001)
}

/// Dispersion coefficients of the width/amplitude sweeps.
const DISPERSION_SWEEP: [(i64, i64); 4] = [(1, 2), (1, 1), (2, 1), (5, 1)];

/// Profiles at `t = 0` and `t = 1` for each `b` of the sweep.
fn dispersion_csv(build: impl Fn(&Params) -> Result<SolutionSpec, CliError>, a: i64, k: i64) -> Result<String, CliError> {
    let specs: Vec<(String, SolutionSpec)> = DISPERSION_SWEEP
        .iter()
        .map(|&(n, d)| {
            let b = rat(n, d);
            let p = Params::new(rint(a), b.clone(), rint(k)).map_err(invalid)?;
            Ok((rat_to_f64(&b).to_string(), build(&p)?))
        })
        .collect::<Result<_, CliError>>()?;
    let mut cols = Vec::new();
    for t in [0.0, 1.0] {
        for (b, s) in &specs {
            cols.push((format!("u_b{b}_t{t}"), s, t));
        }
    }
    columns_csv(&cols, -20.0, 20.0, 1001)
}

struct Reference {
    name: &'static str,
    spec: SolutionSpec,
}

fn reference_solutions(seed: u64) -> Result<Vec<Reference>, CliError> {
    let p111 = Params::ints(1, 1, 1);
    let hb = hb_solve(&rint(1), &rint(-1), &rint(0), &Params::ints(6, 1, 1)).map_err(invalid)?;
    Ok(vec![
        Reference { name: "sr1", spec: build_sr_solution(Family::Sr1, &rint(3), &Params::ints(1, 1, 2)).map_err(invalid)? },
        Reference { name: "sr2", spec: build_sr_solution(Family::Sr2, &rint(2), &p111).map_err(invalid)? },
        Reference { name: "sr3", spec: build_sr_solution(Family::Sr3, &rint(2), &p111).map_err(invalid)? },
        Reference { name: "hb_plus", spec: hb.plus },
        Reference { name: "hb_minus", spec: hb.minus },
        Reference { name: "tanh", spec: tanh_solve_seeded(&rint(1), &Params::ints(-1, 1, 1), seed).map_err(invalid)?.spec },
    ])
}

pub(crate) fn reproduce(seed: u64, skip_simulation: bool, sink: &mut Sink) -> Result<(), CliError> {
    if sink.dir.is_none() {
        sink.dir = Some(PathBuf::from(DEFAULT_DIR));
    }
    let mut summary = Map::new();
    let mut failures: Vec<String> = Vec::new();

    // singular expansion
    let pv = painleve_report(&Params::ints(1, 1, 1), seed)?;
    summary.insert(
        "painleve".into(),
        json!({ "resonances": pv["resonances"], "passes_test": pv["passes"] }),
    );
    sink.emit_json("painleve.json", &pv)?;

    // symmetries
    let (sv, ok) = symmetries_report(&Params::ints(1, 1, 1), 1, seed)?;
    if !ok {
        failures.push("symmetries: a computed generator fails the invariance condition".into());
    }
    summary.insert(
        "symmetries".into(),
        json!({
            "dimension": sv["dimension"],
            "basis_verified": ok,
            "same_span_as_quoted": sv["same_span_as_quoted"],
            "same_span_as_admitted": sv["same_span_as_admitted"],
        }),
    );
    sink.emit_json("symmetries.json", &sv)?;

    // algebra
    let (av, ok) = algebra_report(4)?;
    if !ok {
        failures.push("algebra: structure constants inconsistent".into());
    }
    summary.insert(
        "algebra".into(),
        json!({ "derived_series": av["derived_series"], "verdict": av["verdict"], "consistent": ok }),
    );
    sink.emit_json("algebra.json", &av)?;

    // classification of the worked elements
    let mut cases = Vec::new();
    let mut agree = true;
    for (e, expected) in WORKED_ELEMENTS {
        let a: [Rational; 4] = e.map(rint);
        let r = classify(&a).map_err(invalid)?;
        agree &= r.tag.to_string() == expected;
        if r.orbit_residual > ORBIT_TOLERANCE {
            failures.push(format!("classify {e:?}: orbit residual {:e}", r.orbit_residual));
        }
        cases.push(classification_json(&r)?);
    }
    summary.insert("classify".into(), json!({ "worked_cases": cases.len(), "tags_as_expected": agree }));
    sink.emit_json("classify.json", &Value::Array(cases))?;

    // closed-form solutions and plot data
    let refs = reference_solutions(seed)?;
    let mut sols = Map::new();
    for r in &refs {
        let (v, ok) = solution_report(&r.spec, seed)?;
        if !ok {
            failures.push(format!("solution {}: residual does not vanish", r.name));
        }
        sols.insert(
            r.name.into(),
            json!({ "residual_zero": ok, "amplitude": v["amplitude"], "velocity": v["velocity"], "quoted_form_differs": !v["discrepancy"].is_null() }),
        );
        sink.emit_json(&format!("solutions/{}.json", r.name), &v)?;
    }
    summary.insert("solutions".into(), Value::Object(sols));
    let find = |name: &str| refs.iter().find(|r| r.name == name).map(|r| &r.spec).expect("reference present");
    sink.emit(
        "figures/sr3_dispersion.csv",
        &dispersion_csv(|p| build_sr_solution(Family::Sr3, &rint(2), p).map_err(invalid), 1, 1)?,
    )?;
    sink.emit("figures/hb_movement.csv", &movement_csv(find("hb_plus"), &MOVEMENT_TIMES)?)?;
    sink.emit(
        "figures/tanh_dispersion.csv",
        &dispersion_csv(|p| Ok(tanh_solve_seeded(&rint(1), p, seed).map_err(invalid)?.spec), -1, 1)?,
    )?;
    sink.emit("figures/tanh_movement.csv", &movement_csv(find("tanh"), &MOVEMENT_TIMES)?)?;
    sink.emit("figures/tanh_profile.csv", &profile_csv(find("tanh"), 0.0, 0.0, -20.0, 20.0, 1000)?)?;

    // numerics
    let tanh = find("tanh");
    let conv = convergence_order(&tanh.expression, &tanh.params, &ResidualGrid::default(), 0.05).map_err(invalid)?;
    summary.insert("grid_convergence".into(), json!({ "order": conv.order, "ratio": conv.ratio, "coarse_max_abs": conv.coarse.max_abs }));
    sink.emit_json("numerics/convergence.json", &serde_json::to_value(&conv).map_err(invalid)?)?;
    if skip_simulation {
        summary.insert("simulation".into(), json!("skipped"));
    } else {
        let run = soliton_run(tanh, &SolitonRunConfig::default()).map_err(invalid)?;
        let m = &run.manifest;
        let ok = m.max_error <= 1e-3 && m.speed_relative_error <= 0.01;
        if !ok {
            failures.push(format!("simulation: max error {:e}, speed error {:e}", m.max_error, m.speed_relative_error));
        }
        summary.insert(
            "simulation".into(),
            json!({ "max_error": m.max_error, "measured_speed": m.measured_speed, "expected_speed": m.expected_speed, "within_tolerance": ok }),
        );
        sink.emit_json("numerics/soliton_run.json", &serde_json::to_value(m).map_err(invalid)?)?;
        sink.emit("numerics/soliton_snapshots.csv", &snapshots_csv(&run.history, true))?;
    }

    summary.insert("seed".into(), json!(seed));
    summary.insert("verification_failures".into(), json!(failures));
    sink.emit_json("report.json", &Value::Object(summary))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failures.join("; ")))
    }
}
