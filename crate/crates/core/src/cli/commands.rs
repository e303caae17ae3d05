//! Subcommand implementations.

use std::path::Path;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::expr::{fmt_rational, rat, Expr, Rational, ZeroTestConfig};
use crate::jet::VectorField;
use crate::kpbbm::Params;
use crate::liealg::{
    adjoint_matrix, classify, derived_series, global_adjoint, invariants, reference_algebra, OptimalRepresentative,
    StructureConstants, Tag, BASIS_NAMES,
};
use crate::numerics::{snapshots_csv, soliton_run, SolitonRunConfig};
use crate::painleve;
use crate::solutions::{
    build_sr_solution, check_solution, diagnostics, hb_solve, profile, seeded, tanh_solve_seeded, Family, SolutionSpec,
};
use crate::symmetry::{
    admitted_generators, combined_rank, printed_generators, same_span, scaling_generator, solve_determining,
    symmetry_condition, SymmetryAnsatz,
};

use super::{invalid, parse_rat, Branch, Cli, CliError, Command, Format, SolutionArgs, SolutionCommand, Sink};

/// Largest orbit residual accepted for a classification.
pub const ORBIT_TOLERANCE: f64 = 1e-10;

pub(crate) fn zero_cfg(seed: u64) -> ZeroTestConfig {
    ZeroTestConfig { seed, ..ZeroTestConfig::default() }
}

fn to_json<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(invalid)
}

pub(crate) fn dispatch(cli: &Cli, sink: &mut Sink) -> Result<(), CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Painleve(p) => {
            let v = painleve_report(&p.params()?, seed)?;
            sink.emit_json("painleve.json", &v)
        }
        Command::Symmetries { params, degree } => {
            let (v, ok) = symmetries_report(&params.params()?, *degree, seed)?;
            sink.emit_json("symmetries.json", &v)?;
            verified(ok, "a computed symmetry generator does not satisfy the invariance condition")
        }
        Command::Algebra { invariant_degree } => {
            let (v, ok) = algebra_report(*invariant_degree)?;
            sink.emit_json("algebra.json", &v)?;
            verified(ok, "the structure constants violate antisymmetry or the Jacobi identity")
        }
        Command::Classify { element, input, random } => classify_command(cli, element.as_deref(), input.as_deref(), *random, sink),
        Command::Solution(SolutionCommand::Build(args)) => {
            let s = build_solution(args, seed)?;
            let (v, ok) = solution_report(&s, seed)?;
            sink.emit_json(&format!("solution_{}.json", s.family.name().to_lowercase()), &v)?;
            verified(ok, &format!("the residual of the {} solution does not vanish", s.family))
        }
        Command::Solution(SolutionCommand::Profile { solution, profile: pr }) => {
            let s = build_solution(solution, seed)?;
            let csv = profile_csv(&s, pr.y, pr.t, pr.xmin, pr.xmax, pr.n)?;
            sink.emit(&format!("profile_{}.csv", s.family.name().to_lowercase()), &csv)
        }
        Command::Tanh { lambda, params } => {
            let sol = tanh_solve_seeded(lambda, &params.params()?, seed).map_err(invalid)?;
            let verdict = sol.spec.verdict(&zero_cfg(seed));
            let mut v = to_json(&sol)?;
            v["residual_verdict"] = to_json(&verdict)?;
            sink.emit_json("tanh.json", &v)?;
            verified(verdict.is_zero() && sol.profile_residual_zero, "the tanh solution does not solve the equation")
        }
        Command::Hb { alpha, u1, theta0, params } => {
            let sol = hb_solve(alpha, u1, theta0, &params.params()?).map_err(invalid)?;
            let cfg = zero_cfg(seed);
            let (vp, vm) = (sol.plus.verdict(&cfg), sol.minus.verdict(&cfg));
            let mut v = to_json(&sol)?;
            v["residual_verdict"] = json!({ "plus": to_json(&vp)?, "minus": to_json(&vm)? });
            sink.emit_json("hb.json", &v)?;
            verified(vp.is_zero() && vm.is_zero(), "a homogeneous-balance branch does not solve the equation")
        }
        Command::Simulate {
            solution,
            nx,
            lx,
            t_end,
            dt,
            snapshots,
            scheme,
            all_rows,
            error_tolerance,
            speed_tolerance,
        } => {
            let s = build_solution(solution, seed)?;
            let mut cfg = SolitonRunConfig { nx: *nx, t_end: *t_end, dt: *dt, snapshots: *snapshots, scheme: (*scheme).into(), ..Default::default() };
            if let Some(lx) = lx {
                cfg.lx = *lx;
            }
            let run = soliton_run(&s, &cfg).map_err(invalid)?;
            let m = &run.manifest;
            let ok = m.max_error <= *error_tolerance && m.speed_relative_error <= *speed_tolerance;
            let mut v = to_json(m)?;
            v["error_tolerance"] = json!(error_tolerance);
            v["speed_tolerance"] = json!(speed_tolerance);
            v["passes"] = json!(ok);
            let csv = snapshots_csv(&run.history, !all_rows);
            if sink.dir.is_some() {
                sink.emit_json("simulate.json", &v)?;
                sink.emit("simulate_snapshots.csv", &csv)?;
            } else if cli.format == Format::Csv {
                sink.emit("simulate_snapshots.csv", &csv)?;
            } else {
                sink.emit_json("simulate.json", &v)?;
            }
            verified(
                ok,
                &format!(
                    "max error {:.3e} (tolerance {error_tolerance:.1e}), speed error {:.3e} (tolerance {speed_tolerance:.1e})",
                    m.max_error, m.speed_relative_error
                ),
            )
        }
        Command::Reproduce { skip_simulation } => super::reproduce::reproduce(seed, *skip_simulation, sink),
    }
}

fn verified(ok: bool, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(msg.to_string()))
    }
}

pub(crate) fn painleve_report(p: &Params, seed: u64) -> Result<Value, CliError> {
    let report = painleve::analyze(p, &zero_cfg(seed)).map_err(invalid)?;
    to_json(&report)
}

fn field_json(v: &VectorField) -> Value {
    json!({
        "text": v.to_string(),
        "xi": v.xi.to_prefix(),
        "gamma": v.gamma.to_prefix(),
        "tau": v.tau.to_prefix(),
        "eta": v.eta.to_prefix(),
    })
}

/// Solve at `degree`, re-check each basis field, compare with the quoted
/// generators and with the admitted scaling. Returns `(report, all computed
/// fields verified)`.
pub(crate) fn symmetries_report(p: &Params, degree: usize, seed: u64) -> Result<(Value, bool), CliError> {
    let ansatz = SymmetryAnsatz::new(degree).map_err(invalid)?;
    let basis = solve_determining(p, &ansatz).map_err(invalid)?;
    let cfg = zero_cfg(seed);
    let mut checks = Vec::new();
    let mut all_ok = true;
    for v in &basis {
        let verdict = crate::expr::zero_test(&symmetry_condition(v, p).map_err(invalid)?, &cfg);
        all_ok &= verdict.is_zero();
        checks.push(to_json(&verdict)?);
    }
    let quoted = printed_generators(p);
    let mut quoted_checks = Vec::new();
    for v in &quoted {
        let verdict = crate::expr::zero_test(&symmetry_condition(v, p).map_err(invalid)?, &cfg);
        quoted_checks.push(to_json(&verdict)?);
    }
    let admitted = admitted_generators(p);
    let sc = StructureConstants::from_fields(&basis).ok();
    let v = json!({
        "params": to_json(p)?,
        "degree": degree,
        "unknowns": ansatz.unknowns.len(),
        "dimension": basis.len(),
        "basis": basis.iter().map(field_json).collect::<Vec<_>>(),
        "basis_condition": checks,
        "structure_constants": sc.map(|sc| {
            let names: Vec<String> = (1..=sc.dim).map(|i| format!("V{i}")).collect();
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            sc.table(&names)
        }),
        "quoted_generators": quoted.iter().map(field_json).collect::<Vec<_>>(),
        "quoted_condition": quoted_checks,
        "combined_rank_with_quoted": combined_rank(&[&basis, &quoted]).map_err(invalid)?,
        "same_span_as_quoted": same_span(&basis, &quoted).map_err(invalid)?,
        "admitted_scaling": field_json(&scaling_generator(p)),
        "same_span_as_admitted": same_span(&basis, &admitted).map_err(invalid)?,
    });
    Ok((v, all_ok))
}

fn rows_json(m: &crate::liealg::AdjointMatrix) -> Vec<Vec<String>> {
    m.rows_text()
}

/// Commutator table, adjoint action, derived series and invariants of the
/// reference algebra, plus the derived series of the admitted algebra.
pub(crate) fn algebra_report(invariant_degree: usize) -> Result<(Value, bool), CliError> {
    let sc = reference_algebra();
    let eps = Expr::sym("eps");
    let mut adjoint = serde_json::Map::new();
    for i in 1..=sc.dim {
        adjoint.insert(format!("A{i}"), json!(rows_json(&adjoint_matrix(&sc, i, &eps).map_err(invalid)?)));
    }
    let global = global_adjoint(&sc).map_err(invalid)?;
    let (dims, solvable) = derived_series(&sc);
    let admitted = StructureConstants::from_fields(&admitted_generators(&Params::ints(1, 1, 1))).map_err(invalid)?;
    let (adims, asolvable) = derived_series(&admitted);
    let full = invariants(&sc, None, invariant_degree);
    let slice = invariants(&sc, Some(rat(0, 1)), invariant_degree);
    let antisymmetric = sc.is_antisymmetric();
    let jacobi = sc.jacobi_defect();
    let ok = antisymmetric && jacobi == rat(0, 1);
    let v = json!({
        "basis": BASIS_NAMES,
        "table": sc.table(&BASIS_NAMES),
        "antisymmetric": antisymmetric,
        "jacobi_defect": fmt_rational(&jacobi),
        "adjoint": adjoint,
        "global_adjoint": rows_json(&global),
        "derived_series": dims,
        "verdict": if solvable { "solvable" } else { "not solvable" },
        "admitted_table": admitted.table(&BASIS_NAMES),
        "admitted_derived_series": adims,
        "admitted_verdict": if asolvable { "solvable" } else { "not solvable" },
        "invariants": to_json(&full)?,
        "invariants_a1_zero": to_json(&slice)?,
    });
    Ok((v, ok))
}

/// The tag with `Γ` in place of the ASCII `G`.
pub fn tag_unicode(t: Tag) -> String {
    t.to_string().replace('G', "Γ")
}

pub(crate) fn classification_json(r: &OptimalRepresentative) -> Result<Value, CliError> {
    let mut v = to_json(r)?;
    v["tag"] = json!(tag_unicode(r.tag));
    v["tag_ascii"] = json!(r.tag.to_string());
    Ok(v)
}

const CLASSIFY_HEADER: &str = "a1,a2,a3,a4,tag,case,c,orbit_residual";

fn classify_row(r: &OptimalRepresentative) -> String {
    let a: Vec<String> = r.input.iter().map(fmt_rational).collect();
    format!(
        "{},{},{},{},{:e}",
        a.join(","),
        r.tag,
        r.case,
        r.c.as_ref().map(fmt_rational).unwrap_or_default(),
        r.orbit_residual
    )
}

fn parse_element(fields: &[&str], line: usize) -> Result<[Rational; 4], CliError> {
    if fields.len() != 4 {
        return Err(CliError::Validation(format!("line {line}: expected 4 columns a1,a2,a3,a4, got {}", fields.len())));
    }
    let mut out: Vec<Rational> = Vec::with_capacity(4);
    for f in fields {
        out.push(parse_rat(f.trim()).map_err(|e| CliError::Validation(format!("line {line}: {e}")))?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
}

/// Read `a1,a2,a3,a4` rows; blank lines, `#` comments and a header are skipped.
pub fn read_elements_csv(text: &str) -> Result<Vec<[Rational; 4]>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if i == 0 && fields.iter().any(|f| f.trim().starts_with('a')) {
            continue;
        }
        out.push(parse_element(&fields, i + 1)?);
    }
    Ok(out)
}

fn random_elements(seed: u64, n: usize) -> Vec<[Rational; 4]> {
    let mut rng = seeded(seed);
    (0..n)
        .map(|_| loop {
            let mut r = || rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let e = [r(), r(), r(), r()];
            if e.iter().any(|x| *x != rat(0, 1)) {
                break e;
            }
        })
        .collect()
}

fn classify_command(
    cli: &Cli,
    element: Option<&[Rational]>,
    input: Option<&Path>,
    random: Option<usize>,
    sink: &mut Sink,
) -> Result<(), CliError> {
    let sources = element.is_some() as u8 + input.is_some() as u8 + random.is_some() as u8;
    if sources != 1 {
        return Err(CliError::Validation("give exactly one of --element, --input or --random".into()));
    }
    let single = element.is_some();
    let elements = if let Some(e) = element {
        let strs: Vec<String> = e.iter().map(fmt_rational).collect();
        let strs: Vec<&str> = strs.iter().map(String::as_str).collect();
        vec![parse_element(&strs, 1)?]
    } else if let Some(path) = input {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
        read_elements_csv(&text)?
    } else {
        random_elements(cli.seed, random.unwrap_or(0))
    };
    let mut results = Vec::with_capacity(elements.len());
    for e in &elements {
        results.push(classify(e).map_err(|err| {
            let a: Vec<String> = e.iter().map(fmt_rational).collect();
            CliError::Validation(format!("element ({}): {err}", a.join(",")))
        })?);
    }
    let worst = results.iter().map(|r| r.orbit_residual).fold(0.0, f64::max);
    if cli.format == Format::Csv {
        let mut csv = String::from(CLASSIFY_HEADER);
        csv.push('\n');
        for r in &results {
            csv.push_str(&classify_row(r));
            csv.push('\n');
        }
        sink.emit("classify.csv", &csv)?;
    } else if single {
        sink.emit_json("classify.json", &classification_json(&results[0])?)?;
    } else {
        let all: Result<Vec<Value>, CliError> = results.iter().map(classification_json).collect();
        sink.emit_json("classify.json", &Value::Array(all?))?;
    }
    verified(worst <= ORBIT_TOLERANCE, &format!("orbit residual {worst:.3e} exceeds {ORBIT_TOLERANCE:.0e}"))
}

/// Build the solution selected by the flags.
pub(crate) fn build_solution(args: &SolutionArgs, seed: u64) -> Result<SolutionSpec, CliError> {
    let p = args.params.params()?;
    match args.family {
        Family::Hb => {
            let sol = hb_solve(&args.alpha, &args.u1, &args.theta0, &p).map_err(invalid)?;
            Ok(match args.branch {
                Branch::Plus => sol.plus,
                Branch::Minus => sol.minus,
            })
        }
        Family::Tanh => Ok(tanh_solve_seeded(&args.lambda, &p, seed).map_err(invalid)?.spec),
        f => build_sr_solution(f, &args.lambda, &p).map_err(invalid),
    }
}

/// `{expression, amplitude, width, velocity, residual_verdict, …}` and
/// whether the residual vanishes.
pub(crate) fn solution_report(s: &SolutionSpec, seed: u64) -> Result<(Value, bool), CliError> {
    let d = diagnostics(s).map_err(invalid)?;
    let check = check_solution(s, &zero_cfg(seed), 41).map_err(invalid)?;
    let v = json!({
        "family": s.family,
        "params": to_json(&s.params)?,
        "free": s.free,
        "expression": s.expression.to_prefix(),
        "expression_text": s.expression.to_string(),
        "amplitude": d.amplitude.to_string(),
        "amplitude_value": d.amplitude_value,
        "width": d.width_scale,
        "velocity": d.velocity,
        "background": d.background,
        "peak_displacement": d.peak_displacement,
        "residual_verdict": to_json(&check.verdict)?,
        "residual_grid_max_abs": check.grid_max_abs,
        "discrepancy": to_json(&s.discrepancy)?,
        "notes": s.notes,
    });
    Ok((v, check.passes()))
}

pub(crate) fn profile_csv(s: &SolutionSpec, y: f64, t: f64, xmin: f64, xmax: f64, n: usize) -> Result<String, CliError> {
    if n == 0 || !(xmax >= xmin) {
        return Err(CliError::Validation(format!("profile needs n > 0 and xmin ≤ xmax (got n = {n}, [{xmin}, {xmax}])")));
    }
    let pts = profile(s, y, t, xmin, xmax, n).map_err(invalid)?;
    let mut csv = String::from("x,u\n");
    for (x, u) in pts {
        csv.push_str(&format!("{},{}\n", csv_num(x), csv_num(u)));
    }
    Ok(csv)
}

/// Shortest round-trip text, in exponent form outside `[1e-4, 1e15)`.
pub(crate) fn csv_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}
