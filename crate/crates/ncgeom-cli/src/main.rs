//! Batch front door for the calculus engine: verification suites, curvature
//! reports, gauge transformations and action minimization.  All reports are
//! deterministic for a fixed seed; exit code 0 means pass, 1 means an
//! invariant or convergence failure, 2 means bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use ncgeom::connect::{
    alpha_from_potential, decompose_omega, gauge_transform, higgs_conditions, ConnectionForm,
};
use ncgeom::verify::{curvature_components_report, run_suite};
use ncgeom::ymh::{ActionConfig, TrajectoryPoint, VacuumReport, YmhProblem};
use ncgeom::{AlgElement, Calculus, NCForm};

#[derive(Parser)]
#[command(name = "ncgeom", version, about = "Noncommutative gauge calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized invariant suite and write a JSON report.
    Verify(VerifyArgs),
    /// Compute the curvature and Higgs decomposition of a connection file.
    Curvature(CurvatureArgs),
    /// Gradient-descend the Yang-Mills-Higgs action from a connection file.
    Minimize(MinimizeArgs),
    /// Apply a gauge transformation to a connection file.
    Gauge(GaugeArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Connection JSON file.
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinimizeArgs {
    /// Connection JSON file with the starting point.
    input: PathBuf,
    /// Optional ActionConfig JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cutoff: Option<i64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    grad_tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trajectory CSV path.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Args)]
struct GaugeArgs {
    /// Connection JSON file.
    input: PathBuf,
    /// Gauge element JSON file (an algebra element).
    gauge: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additionally require det U = 1.
    #[arg(long)]
    require_special: bool,
}

/// On-disk connection schema: omega = alpha_from_potential(A) + extra.
#[derive(Serialize, Deserialize)]
struct ConnectionFile {
    n: usize,
    d: usize,
    #[serde(rename = "A")]
    a: Vec<AlgElement>,
    #[serde(default)]
    extra: Option<NCForm>,
}

fn load_connection(path: &Path) -> anyhow::Result<(Calculus, ConnectionForm)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let file: ConnectionFile = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("malformed connection file {}: {e}", path.display()))?;
    let calc = Calculus::new(file.n, file.d)?;
    let mut alpha = alpha_from_potential(&calc, &file.a)?;
    if let Some(extra) = file.extra {
        alpha = ConnectionForm::new(alpha.form().add(&extra)?)?;
    }
    Ok((calc, alpha))
}

fn write_connection(
    path: Option<&Path>,
    calc: &Calculus,
    omega: &ConnectionForm,
) -> anyhow::Result<()> {
    // canonical emission: zero potential, everything in the extra block
    let zeros = vec![AlgElement::zeros(calc.n(), calc.d()); calc.d()];
    let extra = omega.form().add(&calc.theta())?;
    let file = ConnectionFile { n: calc.n(), d: calc.d(), a: zeros, extra: Some(extra) };
    emit(path, &serde_json::to_string_pretty(&file)?)
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let report = run_suite(args.n, args.d, args.seed, args.trials)?;
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    Ok(report.all_pass)
}

#[derive(Serialize)]
struct CurvatureReport {
    n: usize,
    d: usize,
    curvature_components: Vec<CurvatureEntry>,
    higgs_a: Vec<AlgElement>,
    higgs_b: Vec<AlgElement>,
    r1: f64,
    r2: f64,
}

#[derive(Serialize)]
struct CurvatureEntry {
    pair: String,
    value: AlgElement,
}

fn cmd_curvature(args: &CurvatureArgs) -> anyhow::Result<bool> {
    let (calc, omega) = load_connection(&args.input)?;
    let comps = curvature_components_report(&calc, &omega)?;
    let flat = ConnectionForm::new(calc.theta().neg())?;
    let (_, higgs) = decompose_omega(&calc, &omega, &flat)?;
    let (r1, r2) = higgs_conditions(&calc, &higgs, &flat)?;
    let report = CurvatureReport {
        n: calc.n(),
        d: calc.d(),
        curvature_components: comps
            .into_iter()
            .map(|(pair, value)| CurvatureEntry { pair, value })
            .collect(),
        higgs_a: higgs.a,
        higgs_b: higgs.b,
        r1,
        r2,
    };
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
    Ok(true)
}

#[derive(Serialize)]
struct MinimizeReport {
    report: VacuumReport,
    converged: bool,
}

fn write_trajectory(path: &Path, traj: &[TrajectoryPoint]) -> anyhow::Result<()> {
    let mut text = String::from("iter,action,grad_norm,step\n");
    for t in traj {
        text.push_str(&format!("{},{:.17e},{:.17e},{:.17e}\n", t.iter, t.action, t.grad_norm, t.step));
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_minimize(args: &MinimizeArgs) -> anyhow::Result<bool> {
    let (calc, omega) = load_connection(&args.input)?;
    let mut cfg = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", p.display()))?;
            serde_json::from_str::<ActionConfig>(&text)
                .map_err(|e| anyhow::anyhow!("malformed config {}: {e}", p.display()))?
        }
        None => ActionConfig::new(calc.n(), calc.d()),
    };
    if cfg.n != calc.n() || cfg.d != calc.d() {
        anyhow::bail!("config sizes ({}, {}) do not match the connection", cfg.n, cfg.d);
    }
    if let Some(v) = args.cutoff {
        cfg.cutoff = v;
    }
    if let Some(v) = args.max_iters {
        cfg.max_iters = v;
    }
    if let Some(v) = args.grad_tol {
        cfg.grad_tol = v;
    }
    let prob = YmhProblem::new(cfg)?;
    let p0 = prob.params_from_form(&omega)?;
    let (_, report, traj) = prob.minimize(&p0)?;
    if let Some(path) = &args.trajectory {
        write_trajectory(path, &traj)?;
    }
    let converged = report.grad_norm <= prob.config().grad_tol;
    let out = MinimizeReport { report, converged };
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&out)?)?;
    Ok(converged)
}

fn cmd_gauge(args: &GaugeArgs) -> anyhow::Result<bool> {
    let (calc, omega) = load_connection(&args.input)?;
    let text = std::fs::read_to_string(&args.gauge)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", args.gauge.display()))?;
    let u: AlgElement = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("malformed gauge file {}: {e}", args.gauge.display()))?;
    if args.require_special {
        let det = u.det()?;
        let res = det
            .sub(&ncgeom::TrigPoly::one(calc.d()))?
            .max_coeff();
        if res > 1e-10 {
            anyhow::bail!("gauge element is not special: |det - 1| = {res:.3e}");
        }
    }
    let transformed = gauge_transform(&calc, &omega, &u)?;
    write_connection(args.out.as_deref(), &calc, &transformed)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Curvature(a) => cmd_curvature(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::Gauge(a) => cmd_gauge(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
