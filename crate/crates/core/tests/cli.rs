//! End-to-end tests of the `kpbbm` command line through `cli::run_with`.

use std::path::Path;

use kpbbm::cli::{run_with, EXIT_OK, EXIT_VALIDATION, EXIT_VERIFICATION};
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let argv = std::iter::once("kpbbm").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", o.stdout))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect()
}

#[test]
fn painleve_reports_resonances_and_violations() {
    let o = run(&["painleve", "--a", "1", "--b", "1", "--k", "1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["alpha"], -2);
    assert_eq!(v["resonances"], serde_json::json!([-1, 4, 5, 6]));
    for j in ["4", "5", "6"] {
        assert_eq!(v["compatibility"][j]["status"], "violated", "j = {j}");
        assert!(v["compatibility"][j]["witness"].as_object().is_some_and(|w| !w.is_empty()));
    }
    assert_eq!(v["passes"], false);
}

#[test]
fn classify_single_element() {
    let o = run(&["classify", "--element", "0,0,1,1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["tag"], "Γ3+Γ4");
    assert_eq!(v["tag_ascii"], "G3+G4");
    assert_eq!(v["case"], "2.2.1");
    assert_eq!(v["orbit_residual"], 0.0);
}

#[test]
fn classify_accepts_negative_and_fractional_entries() {
    let o = run(&["classify", "--element", "-2,1/2,0.25,3"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(json(&o)["tag"], "Γ1");
}

#[test]
fn classify_batch_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("elements.csv");
    std::fs::write(&input, "a1,a2,a3,a4\n0,0,1,1\n# comment\n1,2,3,4\n0,-2,0,0\n").unwrap();
    let o = run(&["classify", "--input", input.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "a1,a2,a3,a4,tag,case,c,orbit_residual");
    assert!(lines[1].starts_with("0,0,1,1,G3+G4,2.2.1,"));
    assert!(lines[2].starts_with("1,2,3,4,G1,"));
    assert!(lines[3].starts_with("0,-2,0,0,G2,2.3.2(ii),"));
    assert_eq!(lines.len(), 4);
}

#[test]
fn classify_unreachable_orbit_is_a_verification_failure() {
    let o = run(&["classify", "--element", "0,1,1,-1"]);
    assert_eq!(o.code, EXIT_VERIFICATION);
    assert_eq!(json(&o)["orbit_residual"], 2.0);
    assert!(o.stderr.contains("orbit residual"));
}

#[test]
fn classify_needs_exactly_one_source() {
    assert_eq!(run(&["classify"]).code, EXIT_VALIDATION);
    assert_eq!(run(&["classify", "--element", "1,0,0,0", "--random", "3"]).code, EXIT_VALIDATION);
    assert_eq!(run(&["classify", "--element", "1,0,0"]).code, EXIT_VALIDATION);
    assert_eq!(run(&["classify", "--element", "0,0,0,0"]).code, EXIT_VALIDATION);
}

#[test]
fn tanh_profile_peaks_at_twelve_fifths() {
    let o = run(&[
        "solution", "profile", "--family", "tanh", "--lambda", "1", "--a", "-1", "--b", "1", "--k", "1", "--t", "0",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.starts_with("x,u\n"));
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows.len(), 1000);
    let peak = rows.iter().map(|r| r[1]).fold(f64::MIN, f64::max);
    // 1000 points on [−20, 20] straddle x = 0, so the sampled peak sits just below 2.4
    assert!(peak <= 2.4 && peak > 2.399, "{peak}");
    let exact = run(&["solution", "profile", "--family", "tanh", "--a", "-1", "--xmin", "0", "--xmax", "0", "--n", "1"]);
    assert_eq!(csv_rows(&exact.stdout), vec![vec![0.0, 2.4]]);
}

#[test]
fn solution_build_sr3_reports_verified_wave_and_quoted_discrepancy() {
    let o = run(&["solution", "build", "--family", "sr3", "--lambda", "2", "--a", "1", "--b", "1", "--k", "1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["residual_verdict"]["verdict"], "proven");
    assert_eq!(v["amplitude"], "-3");
    assert_eq!(v["velocity"], 3.0);
    assert!((v["width"].as_f64().unwrap() - 6f64.sqrt()).abs() < 1e-12);
    assert!(v["discrepancy"].is_object());
    assert!(v["expression"].as_str().unwrap().starts_with('('));
}

#[test]
fn hb_branches() {
    let o = run(&["hb", "--a", "6", "--b", "1", "--k", "1", "--alpha", "1", "--u1", "-1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["beta_squared"], "9");
    assert_eq!(v["plus"]["free"]["beta"], "3");
    assert_eq!(v["minus"]["free"]["beta"], "-3");
    let minus = run(&["solution", "build", "--family", "hb", "--a", "6", "--u1", "-1", "--branch", "minus"]);
    assert_eq!(json(&minus)["free"]["beta"], "-3");
}

#[test]
fn tanh_subcommand() {
    let o = run(&["tanh", "--lambda", "1", "--a", "-1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!((v["omega"].as_str(), v["d0"].as_str(), v["d1"].as_str()), (Some("2/5"), Some("12/5"), Some("1")));
    assert!(v["numeric_deviation"].as_f64().unwrap() < 1e-10);
    assert_eq!(run(&["tanh", "--b", "-1/4"]).code, EXIT_VALIDATION);
}

#[test]
fn symmetries_and_algebra() {
    let o = run(&["symmetries", "--degree", "1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["same_span_as_admitted"], true);
    assert!(v["basis_condition"].as_array().unwrap().iter().all(|c| c["verdict"] != "nonzero"));

    let o = run(&["algebra"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["derived_series"], serde_json::json!([4, 3, 0]));
    assert_eq!(v["verdict"], "solvable");
    assert_eq!(v["invariants"]["basic"], serde_json::json!(["a1"]));
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        &["painleve", "--a", "0"][..],
        &["painleve", "--a", "x"],
        &["frobnicate"],
        &["solution", "build", "--family", "nope"],
        &["solution", "build", "--family", "hb", "--a", "1"],
        &["solution", "build", "--family", "sr3", "--lambda", "-1"],
        &["solution", "profile", "--family", "tanh", "--a", "-1", "--n", "0"],
        &["symmetries", "--degree", "9"],
    ] {
        let o = run(args);
        assert_eq!(o.code, EXIT_VALIDATION, "{args:?}: {}", o.stderr);
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("reproduce"));
    assert_eq!(run(&["--version"]).code, EXIT_OK);
}

#[test]
fn simulate_within_and_outside_tolerance() {
    let ok = run(&[
        "simulate", "--family", "tanh", "--lambda", "0", "--a", "-1", "--nx", "128", "--t-end", "2", "--dt", "0.01",
        "--snapshots", "10",
    ]);
    assert_eq!(ok.code, EXIT_OK, "{}", ok.stderr);
    let v = json(&ok);
    assert_eq!(v["passes"], true);
    assert_eq!(v["ny"], 16);
    assert!((v["measured_speed"].as_f64().unwrap() - 0.2).abs() < 0.002);

    let coarse = run(&["simulate", "--family", "tanh", "--a", "-1", "--nx", "32", "--t-end", "0.5", "--dt", "0.01"]);
    assert_eq!(coarse.code, EXIT_VERIFICATION);
    assert_eq!(json(&coarse)["passes"], false);

    let zero = run(&["simulate", "--family", "sr1", "--lambda", "1"]);
    assert_eq!(zero.code, EXIT_VALIDATION);
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# reference wave\nfamily = tanh\na = -1\nxmin = 0\nxmax = 0\nn = 1\nnx = 64  # not a profile flag\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = run(&["solution", "profile", "--config", cfg]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(csv_rows(&o.stdout), vec![vec![0.0, 2.4]]);
    // command-line flags win over the file
    let o = run(&["solution", "profile", "--config", cfg, "--xmin", "1", "--xmax", "1"]);
    assert_eq!(csv_rows(&o.stdout)[0][0], 1.0);

    std::fs::write(dir.path().join("bad.cfg"), "colour = blue\n").unwrap();
    let o = run(&["painleve", "--config", dir.path().join("bad.cfg").to_str().unwrap()]);
    assert_eq!(o.code, EXIT_VALIDATION);
    assert!(o.stderr.contains("colour"));
    assert_eq!(run(&["painleve", "--config", "/nonexistent/kpbbm.cfg"]).code, EXIT_VALIDATION);
}

#[test]
fn output_dir_receives_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--output-dir", dir.path().to_str().unwrap(), "classify", "--element", "0,0,1,1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let written = dir.path().join("classify.json");
    assert_eq!(o.stdout.trim(), written.to_str().unwrap());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(written).unwrap()).unwrap();
    assert_eq!(v["tag"], "Γ3+Γ4");
}

fn read_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(root).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn reproduce_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = run(&["reproduce", "--skip-simulation", "--output-dir", d.path().to_str().unwrap()]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    }
    let (ta, tb) = (read_tree(a.path()), read_tree(b.path()));
    assert_eq!(ta, tb);
    let names: Vec<&str> = ta.iter().map(|(n, _)| n.as_str()).collect();
    for expected in ["report.json", "painleve.json", "figures/tanh_movement.csv", "solutions/sr3.json"] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    let report: Value = serde_json::from_slice(&ta.iter().find(|(n, _)| n == "report.json").unwrap().1).unwrap();
    assert_eq!(report["verification_failures"], serde_json::json!([]));
    assert_eq!(report["simulation"], "skipped");
}
