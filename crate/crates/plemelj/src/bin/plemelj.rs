//! Command-line front end: runs principal-value, transform, boundary-value,
//! convergence, classification, and existence experiments from a JSON config
//! and writes machine-readable reports.
//!
//! Exit codes: 0 for converged/exists verdicts, 2 for not-converged/fails
//! verdicts, 1 for usage, configuration, or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use plemelj::curve::{Curve, Side};
use plemelj::density::{
    classify_regularity, default_grid, estimate_modulus, Density, Regularity,
};
use plemelj::pv::{pv_curve, pv_exists_predicate, PvConfig, PvExistence};
use plemelj::report::{fmt17, write_convergence_csv, write_trace_csv};
use plemelj::transform::{
    boundary_values, cauchy_transform, default_radii, make_sequence, run_convergence,
    verify_jump, SequenceShape, TransformConfig, Verdict,
};

#[derive(Parser)]
#[command(
    name = "plemelj",
    about = "Cauchy principal values, Cauchy transforms, and Plemelj boundary values on smooth curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Principal value P.V. int phi(s)/(s - t0) ds at each target parameter
    Pv(CommonArgs),
    /// Cauchy transform Phi(z) at the configured off-curve points
    Transform(CommonArgs),
    /// Plemelj boundary values at each target parameter
    Boundary(CommonArgs),
    /// Convergence experiment Phi(z_n) -> Phi_side(t)
    Converge(CommonArgs),
    /// Modulus-of-continuity estimate and Holder/Dini classification
    Classify(CommonArgs),
    /// Existence predicate for P.V. int f(x)/x dx on [-1, 1]
    Exists(CommonArgs),
    /// Jump and sum relations rebuilt from left and right approaches
    VerifyJump(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Experiment configuration (JSON, schema 1)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json and CSV files (flags win over config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for pseudo-random sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Absolute quadrature tolerance
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Approach-sequence depth (radii 2^-n, n = 1..=depth)
    #[arg(long)]
    depth: Option<u32>,
    /// Approach side
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    /// Approach-sequence shape
    #[arg(long, value_enum)]
    shape: Option<ShapeArg>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Normal,
    Tangential,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
struct CurveSpec {
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    params: Vec<f64>,
    #[serde(default)]
    points_file: Option<String>,
    #[serde(default)]
    closed: Option<bool>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
struct DensitySpec {
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    params: Vec<f64>,
    #[serde(default)]
    table_file: Option<String>,
}

fn default_schema() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize, Serialize)]
struct ExperimentConfig {
    #[serde(default = "default_schema")]
    schema: u32,
    curve: CurveSpec,
    density: DensitySpec,
    #[serde(default)]
    operation: Option<String>,
    /// Target curve parameters.
    #[serde(default)]
    targets: Vec<f64>,
    /// Off-curve evaluation points [re, im] for the transform operation.
    #[serde(default)]
    points: Vec<[f64; 2]>,
    #[serde(default)]
    side: Option<String>,
    #[serde(default)]
    shape: Option<String>,
    #[serde(default)]
    offset_ratio: Option<f64>,
    #[serde(default)]
    abs_tol: Option<f64>,
    #[serde(default)]
    rel_tol: Option<f64>,
    /// Convergence verdict tolerance.
    #[serde(default)]
    tol: Option<f64>,
    /// Approach-sequence depth.
    #[serde(default)]
    depth: Option<u32>,
    /// Deepest excision radius 2^-k.
    #[serde(default)]
    excision_depth: Option<u32>,
    /// Pair budget for the modulus estimator.
    #[serde(default)]
    n_pairs: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out_dir: Option<String>,
}

struct Resolved {
    config: ExperimentConfig,
    out_dir: PathBuf,
    seed: u64,
    side: Side,
    shape: SequenceShape,
    depth: u32,
    tcfg: TransformConfig,
    n_pairs: usize,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (op, args) = match &cli.command {
        Command::Pv(a) => ("pv", a),
        Command::Transform(a) => ("transform", a),
        Command::Boundary(a) => ("boundary", a),
        Command::Converge(a) => ("converge", a),
        Command::Classify(a) => ("classify", a),
        Command::Exists(a) => ("exists", a),
        Command::VerifyJump(a) => ("verify-jump", a),
    };
    match run(op, args) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(op: &str, args: &CommonArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let raw = fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read config {}: {e}", args.config.display()))?;
    let config: ExperimentConfig = serde_json::from_str(&raw)
        .map_err(|e| format!("config {} line {}: {}", args.config.display(), e.line(), e))?;
    if config.schema != 1 {
        return Err(format!("unsupported config schema {} (expected 1)", config.schema).into());
    }

    let resolved = resolve(op, args, config)?;
    let curve = build_curve(&resolved.config.curve)?;
    let density = build_density(&resolved.config.density)?;
    fs::create_dir_all(&resolved.out_dir)?;

    match op {
        "pv" => op_pv(&resolved, &curve, &density),
        "transform" => op_transform(&resolved, &curve, &density),
        "boundary" => op_boundary(&resolved, &curve, &density),
        "converge" => op_converge(&resolved, &curve, &density),
        "classify" => op_classify(&resolved, &curve, &density),
        "exists" => op_exists(&resolved, &density),
        "verify-jump" => op_verify_jump(&resolved, &curve, &density),
        _ => unreachable!("subcommands are exhaustive"),
    }
}

fn resolve(
    op: &str,
    args: &CommonArgs,
    config: ExperimentConfig,
) -> Result<Resolved, Box<dyn std::error::Error>> {
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let depth = args.depth.or(config.depth).unwrap_or(20);

    let side = match (&args.side, config.side.as_deref()) {
        (Some(SideArg::Left), _) => Side::Left,
        (Some(SideArg::Right), _) => Side::Right,
        (None, Some("left")) | (None, None) => Side::Left,
        (None, Some("right")) => Side::Right,
        (None, Some(other)) => return Err(format!("unknown side `{other}`").into()),
    };
    let shape = match (&args.shape, config.shape.as_deref()) {
        (Some(ShapeArg::Normal), _) | (None, Some("normal")) | (None, None) => {
            SequenceShape::Normal
        }
        (Some(ShapeArg::Tangential), _) | (None, Some("tangential")) => {
            SequenceShape::TangentialGraph {
                offset_ratio: config.offset_ratio.unwrap_or(0.5),
            }
        }
        (None, Some(other)) => return Err(format!("unknown shape `{other}`").into()),
    };

    let threads = match std::env::var("PLEMELJ_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| format!("PLEMELJ_THREADS must be a non-negative integer, got `{v}`"))?,
        Err(_) => 0,
    };

    let mut tcfg = TransformConfig {
        depth,
        threads,
        ..TransformConfig::default()
    };
    if let Some(t) = args.abs_tol.or(config.abs_tol) {
        if !(t > 0.0) {
            return Err("abs_tol must be positive".into());
        }
        tcfg.quad.abs_tol = t;
        tcfg.pv.quad.abs_tol = t;
    }
    if let Some(t) = config.rel_tol {
        tcfg.quad.rel_tol = t;
        tcfg.pv.quad.rel_tol = t;
    }
    if let Some(t) = config.tol {
        tcfg.tol = t;
    }
    if let Some(k) = config.excision_depth {
        let quad = tcfg.pv.quad;
        tcfg.pv = PvConfig::with_depth(k);
        tcfg.pv.quad = quad;
    }
    let n_pairs = config.n_pairs.unwrap_or(50_000);

    if matches!(op, "pv" | "boundary" | "converge" | "verify-jump") && config.targets.is_empty() {
        return Err(format!("operation `{op}` needs at least one entry in `targets`").into());
    }
    if op == "transform" && config.points.is_empty() {
        return Err("operation `transform` needs evaluation points in `points`".into());
    }

    Ok(Resolved {
        config,
        out_dir,
        seed,
        side,
        shape,
        depth,
        tcfg,
        n_pairs,
    })
}

fn build_curve(spec: &CurveSpec) -> Result<Curve, Box<dyn std::error::Error>> {
    match (&spec.builtin, &spec.points_file) {
        (Some(name), None) => Ok(Curve::builtin(name, &spec.params)?),
        (None, Some(path)) => {
            let path = Path::new(path);
            if !path.exists() {
                return Err(format!("points file {} does not exist", path.display()).into());
            }
            let (points, closed) = if path.extension().and_then(|e| e.to_str()) == Some("json") {
                read_points_json(path)?
            } else {
                (read_points_csv(path)?, spec.closed.unwrap_or(false))
            };
            Ok(Curve::from_points(&points, closed)?)
        }
        _ => Err("curve spec needs exactly one of `builtin` or `points_file`".into()),
    }
}

fn read_points_csv(path: &Path) -> Result<Vec<Complex64>, Box<dyn std::error::Error>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "re" || &headers[1] != "im" {
        return Err(format!("{}: expected header `re,im`", path.display()).into());
    }
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let re: f64 = rec
            .get(0)
            .ok_or_else(|| format!("{}: row {} missing re", path.display(), i + 2))?
            .trim()
            .parse()?;
        let im: f64 = rec
            .get(1)
            .ok_or_else(|| format!("{}: row {} missing im", path.display(), i + 2))?
            .trim()
            .parse()?;
        points.push(Complex64::new(re, im));
    }
    Ok(points)
}

fn read_points_json(path: &Path) -> Result<(Vec<Complex64>, bool), Box<dyn std::error::Error>> {
    #[derive(Deserialize)]
    struct PointsFile {
        points: Vec<[f64; 2]>,
        #[serde(default)]
        closed: bool,
    }
    let parsed: PointsFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    Ok((
        parsed
            .points
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect(),
        parsed.closed,
    ))
}

fn build_density(spec: &DensitySpec) -> Result<Density, Box<dyn std::error::Error>> {
    match (&spec.builtin, &spec.table_file) {
        (Some(name), None) => Ok(Density::builtin(name, &spec.params)?),
        (None, Some(path)) => {
            let path = Path::new(path);
            let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
            let headers = rdr.headers()?.clone();
            if headers.len() < 3
                || &headers[0] != "tau"
                || &headers[1] != "re"
                || &headers[2] != "im"
            {
                return Err(format!("{}: expected header `tau,re,im`", path.display()).into());
            }
            let mut taus = Vec::new();
            let mut vals = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                taus.push(rec[0].trim().parse::<f64>()?);
                vals.push(Complex64::new(
                    rec[1].trim().parse::<f64>()?,
                    rec[2].trim().parse::<f64>()?,
                ));
            }
            Ok(Density::from_table(&taus, &vals)?)
        }
        _ => Err("density spec needs exactly one of `builtin` or `table_file`".into()),
    }
}

/// Settings echoed into every report.
fn settings_json(r: &Resolved) -> serde_json::Value {
    json!({
        "seed": r.seed,
        "abs_tol": r.tcfg.quad.abs_tol,
        "rel_tol": r.tcfg.quad.rel_tol,
        "tol": r.tcfg.tol,
        "depth": r.depth,
        "excision_min": r.tcfg.pv.excision_seq.last(),
        "excision_len": r.tcfg.pv.excision_seq.len(),
        "richardson": r.tcfg.pv.richardson,
        "max_subdivisions": r.tcfg.quad.max_subdivisions,
        "threads": r.tcfg.threads,
        "side": side_name(r.side),
        "shape": shape_name(r.shape),
        "n_pairs": r.n_pairs,
    })
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
        Side::OnCurve => "on-curve",
    }
}

fn shape_name(shape: SequenceShape) -> &'static str {
    match shape {
        SequenceShape::Normal => "normal",
        SequenceShape::TangentialGraph { .. } => "tangential",
        SequenceShape::Custom => "custom",
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn write_report(
    r: &Resolved,
    operation: &str,
    results: serde_json::Value,
) -> Result<(), Box<dyn std::error::Error>> {
    let report = json!({
        "schema": 1,
        "operation": operation,
        "settings": settings_json(r),
        "curve": r.config.curve,
        "density": r.config.density,
        "results": results,
    });
    let path = r.out_dir.join("report.json");
    fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(())
}

fn trace_path(r: &Resolved, index: usize, total: usize) -> PathBuf {
    if total == 1 {
        r.out_dir.join("trace.csv")
    } else {
        r.out_dir.join(format!("trace_{index}.csv"))
    }
}

fn op_pv(
    r: &Resolved,
    curve: &Curve,
    density: &Density,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut results = Vec::new();
    let mut all_converged = true;
    let total = r.config.targets.len();
    for (i, &tau0) in r.config.targets.iter().enumerate() {
        let pv = pv_curve(curve, density, tau0, &r.tcfg.pv)?;
        all_converged &= pv.converged;
        let file = fs::File::create(trace_path(r, i, total))?;
        write_trace_csv(std::io::BufWriter::new(file), &pv)?;
        results.push(json!({
            "tau0": tau0,
            "value": complex_json(pv.value),
            "error_estimate": pv.error_estimate,
            "converged": pv.converged,
            "method": "pullback",
            "trace_len": pv.excision_trace.len(),
        }));
    }
    write_report(r, "pv", json!(results))?;
    Ok(exit_verdict(all_converged))
}

fn op_transform(
    r: &Resolved,
    curve: &Curve,
    density: &Density,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut results = Vec::new();
    for p in &r.config.points {
        let z = Complex64::new(p[0], p[1]);
        let phi = cauchy_transform(curve, density, z, &r.tcfg)?;
        results.push(json!({
            "z": complex_json(z),
            "phi": complex_json(phi),
        }));
    }
    write_report(r, "transform", json!(results))?;
    Ok(ExitCode::SUCCESS)
}

fn op_boundary(
    r: &Resolved,
    curve: &Curve,
    density: &Density,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut results = Vec::new();
    let mut all_converged = true;
    for &tau0 in &r.config.targets {
        let bv = boundary_values(curve, density, tau0, &r.tcfg)?;
        all_converged &= bv.pv.converged;
        results.push(json!({
            "tau0": tau0,
            "point": complex_json(bv.point),
            "phi_plus": complex_json(bv.phi_plus),
            "phi_minus": complex_json(bv.phi_minus),
            "pv_part": complex_json(bv.pv_part),
            "density_value": complex_json(bv.density_value),
            "pv_converged": bv.pv.converged,
            "pv_error_estimate": bv.pv.error_estimate,
        }));
    }
    write_report(r, "boundary", json!(results))?;
    Ok(exit_verdict(all_converged))
}

fn convergence_path(r: &Resolved, index: usize, total: usize, suffix: &str) -> PathBuf {
    if total == 1 {
        r.out_dir.join(format!("convergence{suffix}.csv"))
    } else {
        r.out_dir.join(format!("convergence{suffix}_{index}.csv"))
    }
}

fn op_converge(
    r: &Resolved,
    curve: &Curve,
    density: &Density,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let radii = default_radii(r.depth);
    let mut results = Vec::new();
    let mut all_converged = true;
    let total = r.config.targets.len();
    for (i, &tau0) in r.config.targets.iter().enumerate() {
        let frame = curve.normalize_at(tau0)?;
        let seq = make_sequence(&frame, r.side, r.shape, &radii)?;
        let report = run_convergence(curve, density, &seq, &r.tcfg)?;
        all_converged &= report.verdict == Verdict::Converged;
        let file = fs::File::create(convergence_path(r, i, total, ""))?;
        write_convergence_csv(std::io::BufWriter::new(file), &report)?;
        results.push(json!({
            "tau0": tau0,
            "target": complex_json(report.target),
            "side": side_name(report.side),
            "phi_side": complex_json(report.phi_side),
            "verdict": if report.verdict == Verdict::Converged { "converged" } else { "not-converged" },
            "final_error": report.final_error,
            "empirical_limit": complex_json(report.empirical_limit),
            "truncated": report.truncated,
            "n_evaluated": report.records.len(),
        }));
    }
    write_report(r, "converge", json!(results))?;
    Ok(exit_verdict(all_converged))
}

fn op_classify(
    r: &Resolved,
    curve: &Curve,
    density: &Density,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let grid: Vec<f64> = default_grid().into_iter().filter(|&t| t >= 1e-4).collect();
    let est = estimate_modulus(density, curve, r.n_pairs, &grid, r.seed)?;
    let classification = classify_regularity(&est);
    let (class, alpha) = match classification {
        Regularity::Holder { alpha } => ("holder", Some(alpha)),
        Regularity::Dini => ("dini", None),
        Regularity::Inconclusive => ("inconclusive", None),
    };
    let results = json!({
        "class": class,
        "alpha": alpha,
        "dini_tail": est.dini_tail.iter().map(|&(d, v)| json!([d, v])).collect::<Vec<_>>(),
        "residual": est.holder_fit.as_ref().map(|f| f.residual),
        "grid": est.grid,
        "omega": est.omega,
    });
    write_report(r, "classify", results)?;
    Ok(exit_verdict(classification != Regularity::Inconclusive))
}

fn op_exists(r: &Resolved, density: &Density) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let f = |x: f64| density.eval(x);
    let verdict = pv_exists_predicate(f, &r.tcfg.pv)?;
    let (name, detail, ok) = match &verdict {
        PvExistence::Exists { l1_estimate } => (
            "exists",
            json!({ "l1_estimate": l1_estimate }),
            true,
        ),
        PvExistence::Fails { rate, trace } => (
            "fails",
            json!({
                "rate": rate,
                "divergence_trace": trace.iter().map(|&(d, v)| json!([d, v])).collect::<Vec<_>>(),
            }),
            false,
        ),
        PvExistence::Inconclusive => ("inconclusive", json!({}), false),
    };
    write_report(r, "exists", json!({ "verdict": name, "detail": detail }))?;
    Ok(exit_verdict(ok))
}

fn op_verify_jump(
    r: &Resolved,
    curve: &Curve,
    density: &Density,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut results = Vec::new();
    let mut all_ok = true;
    let total = r.config.targets.len();
    for (i, &tau0) in r.config.targets.iter().enumerate() {
        let check = verify_jump(curve, density, tau0, &r.tcfg)?;
        let ok = check.jump_residual <= r.tcfg.tol;
        all_ok &= ok;
        for (suffix, run) in [("_left", &check.left), ("_right", &check.right)] {
            let file = fs::File::create(convergence_path(r, i, total, suffix))?;
            write_convergence_csv(std::io::BufWriter::new(file), run)?;
        }
        results.push(json!({
            "tau0": tau0,
            "jump_residual": check.jump_residual,
            "sum_residual": check.sum_residual,
            "jump_residual_str": fmt17(check.jump_residual),
            "left_limit": complex_json(check.left.empirical_limit),
            "right_limit": complex_json(check.right.empirical_limit),
            "density_value": complex_json(check.left.boundary.density_value),
            "within_tol": ok,
        }));
    }
    write_report(r, "verify-jump", json!(results))?;
    Ok(exit_verdict(all_ok))
}

fn exit_verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
