//! Command-line surface: fit CSV datasets, generate simulated data, run
//! benchmark presets, and report design diagnostics.
//!
//! Exit codes: 0 on success, 2 for usage/validation problems (bad flags,
//! missing or malformed input files), 3 for runtime failures (solver errors,
//! output I/O).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::asdar::{asdar_fit, select_model, AsdarConfig};
use crate::baselines::{grades_fit, mcp_path_fit, omp_fit, McpConfig};
use crate::bench::{self, RepTag, SolverKind};
use crate::diagnostics;
use crate::error::Error;
use crate::model::{self, Dataset, FitResult, SolutionPath};
use crate::plot::{self, Series};
use crate::sdar::{kkt_residual, sdar_fit, SdarConfig};
use crate::simgen::{self, CoefMode, DesignKind, SimSpec};

const EXIT_USAGE: i32 = 2;
const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sdar",
    version,
    about = "Sparse regression by support detection and root finding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a sparse model to a CSV dataset (header `y,x1,...,xp`).
    Fit(FitArgs),
    /// Generate a seeded simulated dataset and its ground truth.
    Simulate(SimulateArgs),
    /// Run a benchmark preset and write a results CSV (plus optional SVG plots).
    Bench(BenchArgs),
    /// Print design regularity diagnostics for a dataset.
    Diagnose(DiagnoseArgs),
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Parses arguments from the environment and runs the selected command,
/// returning the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with code 0; real usage
            // errors land on stderr with code 2.
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Diagnose(args) => cmd_diagnose(args),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load_dataset(path: &Path, sigma: Option<f64>) -> Result<Dataset, Failure> {
    if !path.exists() {
        return Err(Failure::usage(format!(
            "input file not found: {}",
            path.display()
        )));
    }
    model::load_csv(path, sigma).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_config<T: for<'de> Deserialize<'de> + Default>(
    path: &Option<PathBuf>,
) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("bad config {}: {e}", p.display())))
        }
    }
}

// ---------------------------------------------------------------------------
// fit

#[derive(Debug, Args)]
struct FitArgs {
    /// Input dataset CSV.
    data: PathBuf,
    /// Solver: sdar, asdar, omp, grades, or mcp.
    #[arg(long)]
    algo: Option<String>,
    /// Support size for sdar/omp/grades.
    #[arg(long = "T")]
    t: Option<usize>,
    /// Ladder increment for asdar.
    #[arg(long)]
    tau: Option<usize>,
    /// Largest ladder size for asdar.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Known noise level (enables residual early stopping).
    #[arg(long)]
    sigma: Option<f64>,
    /// Outer-iteration budget.
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
    /// Accepted for interface uniformity; every fit here is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Write fitted coefficients (original column scale) to this CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config supplying defaults for any flag not given.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitFileConfig {
    algo: Option<String>,
    #[serde(rename = "T")]
    t: Option<usize>,
    tau: Option<usize>,
    #[serde(rename = "L")]
    l: Option<usize>,
    sigma: Option<f64>,
    max_iters: Option<usize>,
    seed: Option<u64>,
}

fn cmd_fit(args: FitArgs) -> CmdResult {
    let file: FitFileConfig = read_config(&args.config)?;
    let algo_name = args
        .algo
        .or(file.algo)
        .unwrap_or_else(|| "sdar".to_string());
    let algo: SolverKind = algo_name
        .parse()
        .map_err(|e: Error| Failure::usage(e.to_string()))?;
    let sigma = args.sigma.or(file.sigma);
    let t = args.t.or(file.t);
    let tau = args.tau.or(file.tau).unwrap_or(1);
    let max_iters = args.max_iters.or(file.max_iters).unwrap_or(100);
    let _ = args.seed.or(file.seed);

    let dataset = load_dataset(&args.data, sigma)?;
    let data = &dataset.data;
    let require_t = || -> Result<usize, Failure> {
        let t = t.ok_or_else(|| Failure::usage(format!("--T is required for {algo_name}")))?;
        let limit = (data.n().saturating_sub(1)).min(data.p());
        if t == 0 || t > limit {
            return Err(Failure::usage(format!(
                "--T {t} out of range [1, {limit}] for this dataset"
            )));
        }
        Ok(t)
    };

    let (fit, path): (FitResult, Option<SolutionPath>) = match algo {
        SolverKind::Sdar => {
            let cfg = SdarConfig {
                t: require_t()?,
                max_outer_iters: max_iters,
                ..SdarConfig::new(1)
            };
            (
                sdar_fit(data, &cfg).map_err(|e| Failure::runtime(e.to_string()))?,
                None,
            )
        }
        SolverKind::Asdar => {
            let cfg = AsdarConfig {
                tau,
                l: args.l.or(file.l),
                max_outer_iters: max_iters,
                ..AsdarConfig::default()
            };
            let path = asdar_fit(data, &cfg).map_err(classify)?;
            let (_, fit) = select_model(&path).map_err(|e| Failure::runtime(e.to_string()))?;
            (fit, Some(path))
        }
        SolverKind::Omp => (omp_fit(data, require_t()?).map_err(classify)?, None),
        SolverKind::Grades => {
            let t = require_t()?;
            let epsilon = sigma.map_or(0.0, |s| (data.n() as f64).sqrt() * s);
            (
                grades_fit(data, t, 1.0 / 3.0, epsilon, (data.n() / 2).max(1)),
                None,
            )
        }
        SolverKind::Mcp => {
            let cfg = McpConfig::default();
            let path = mcp_path_fit(data, &cfg).map_err(classify)?;
            let (_, fit) = select_model(&path).map_err(|e| Failure::runtime(e.to_string()))?;
            (fit, Some(path))
        }
    };

    if let Some(path) = &path {
        println!("path ({} entries):", path.entries.len());
        println!("  T,residual,hbic,status");
        for e in &path.entries {
            match (&e.fit, e.hbic) {
                (Some(f), Some(h)) => println!("  {},{},{},{}", e.t, f.residual_norm, h, f.status),
                _ => println!("  {},,,{}", e.t, e.error.as_deref().unwrap_or("failed")),
            }
        }
    }
    let t_for_kkt = fit.active.len().max(1);
    println!("solver: {algo}");
    println!("status: {}", fit.status);
    println!("iterations: {}", fit.iterations);
    println!("residual_norm: {}", fit.residual_norm);
    println!("kkt_residual: {}", kkt_residual(&fit.beta, data, t_for_kkt));
    println!("active_set: {:?}", fit.active);
    println!("coefficients (original scale):");
    println!("  index,name,coefficient");
    for &j in &fit.active {
        if fit.beta[j] != 0.0 {
            println!(
                "  {},{},{}",
                j,
                dataset.names[j],
                fit.beta[j] * dataset.scale[j]
            );
        }
    }
    if let Some(out) = &args.out {
        write_coefficients(out, &dataset, &fit).map_err(|e| Failure::runtime(e.to_string()))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn classify(e: Error) -> Failure {
    match e {
        Error::InvalidConfig(_) | Error::Csv(_) => Failure::usage(e.to_string()),
        _ => Failure::runtime(e.to_string()),
    }
}

fn write_coefficients(path: &Path, dataset: &Dataset, fit: &FitResult) -> crate::error::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "index,name,coefficient")?;
    for &j in &fit.active {
        if fit.beta[j] != 0.0 {
            writeln!(
                out,
                "{},{},{}",
                j,
                dataset.names[j],
                fit.beta[j] * dataset.scale[j]
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Largest-to-smallest nonzero magnitude ratio.
    #[arg(long = "R")]
    r: Option<f64>,
    /// Design family: neighbor or ar1.
    #[arg(long)]
    design: Option<String>,
    /// Coefficient scale mode: head or random.
    #[arg(long = "coef-mode")]
    coef_mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for data.csv and truth.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFileConfig {
    n: Option<usize>,
    p: Option<usize>,
    #[serde(rename = "K")]
    k: Option<usize>,
    sigma: Option<f64>,
    rho: Option<f64>,
    #[serde(rename = "R")]
    r: Option<f64>,
    design: Option<String>,
    coef_mode: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn parse_design(s: &str) -> Result<DesignKind, Failure> {
    match s {
        "neighbor" => Ok(DesignKind::NeighborCorr),
        "ar1" => Ok(DesignKind::Ar1),
        other => Err(Failure::usage(format!(
            "unknown design `{other}` (expected neighbor or ar1)"
        ))),
    }
}

fn parse_coef_mode(s: &str) -> Result<CoefMode, Failure> {
    match s {
        "head" => Ok(CoefMode::HeadSupport),
        "random" => Ok(CoefMode::RandomSupport),
        other => Err(Failure::usage(format!(
            "unknown coef-mode `{other}` (expected head or random)"
        ))),
    }
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    let file: SimulateFileConfig = read_config(&args.config)?;
    let spec = SimSpec {
        n: args
            .n
            .or(file.n)
            .ok_or_else(|| Failure::usage("--n is required"))?,
        p: args
            .p
            .or(file.p)
            .ok_or_else(|| Failure::usage("--p is required"))?,
        k: args
            .k
            .or(file.k)
            .ok_or_else(|| Failure::usage("--K is required"))?,
        sigma: args.sigma.or(file.sigma).unwrap_or(1.0),
        rho: args.rho.or(file.rho).unwrap_or(0.0),
        r: args.r.or(file.r).unwrap_or(1.0),
        design: parse_design(
            &args
                .design
                .or(file.design)
                .unwrap_or_else(|| "ar1".to_string()),
        )?,
        coef_mode: parse_coef_mode(
            &args
                .coef_mode
                .or(file.coef_mode)
                .unwrap_or_else(|| "random".to_string()),
        )?,
        seed: args.seed.or(file.seed).unwrap_or(0),
    };
    spec.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let out_dir = args.out.or(file.out).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(|e| Failure::runtime(e.to_string()))?;

    let instance = simgen::generate(&spec).map_err(|e| Failure::usage(e.to_string()))?;
    let data_path = out_dir.join("data.csv");
    let truth_path = out_dir.join("truth.csv");
    model::write_csv(&data_path, &instance.data.x, &instance.data.y)
        .map_err(|e| Failure::runtime(e.to_string()))?;
    write_truth(&truth_path, &instance.beta_star).map_err(|e| Failure::runtime(e.to_string()))?;
    println!("wrote {}", data_path.display());
    println!("wrote {}", truth_path.display());
    println!(
        "support ({} of {} columns): {:?}",
        instance.support.len(),
        spec.p,
        instance.support
    );
    Ok(())
}

fn write_truth(path: &Path, beta_star: &[f64]) -> crate::error::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "index,beta")?;
    for (j, b) in beta_star.iter().enumerate() {
        writeln!(out, "{j},{b}")?;
    }
    Ok(())
}

/// Reads a truth CSV (`index,beta`) back into a coefficient vector.
pub fn read_truth(path: &Path) -> crate::error::Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut beta = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(idx), Some(value)) = (parts.next(), parts.next()) else {
            return Err(Error::Csv(format!(
                "truth line {}: expected index,beta",
                i + 1
            )));
        };
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::Csv(format!("truth line {}: bad index", i + 1)))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Csv(format!("truth line {}: bad value", i + 1)))?;
        if idx != beta.len() {
            return Err(Error::Csv(format!(
                "truth line {}: indices must be consecutive from 0",
                i + 1
            )));
        }
        beta.push(value);
    }
    Ok(beta)
}

// ---------------------------------------------------------------------------
// bench

#[derive(Debug, Args)]
struct BenchArgs {
    /// Preset name (see `--preset help` output on error for the list).
    #[arg(long)]
    preset: Option<String>,
    /// Replications per cell.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Results CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated solver filter (e.g. `sdar,mcp`).
    #[arg(long)]
    solvers: Option<String>,
    /// Also write recovery/iteration SVG plots next to the CSV.
    #[arg(long)]
    plot: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BenchFileConfig {
    preset: Option<String>,
    reps: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    solvers: Option<String>,
    plot: Option<bool>,
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let file: BenchFileConfig = read_config(&args.config)?;
    let preset_name = args
        .preset
        .or(file.preset)
        .ok_or_else(|| Failure::usage("--preset is required"))?;
    let reps = args.reps.or(file.reps).unwrap_or(20).max(1);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    let plot = args.plot || file.plot.unwrap_or(false);

    let mut settings = bench::preset(&preset_name).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(filter) = args.solvers.or(file.solvers) {
        let mut keep = Vec::new();
        for name in filter.split(',') {
            keep.push(
                name.trim()
                    .parse::<SolverKind>()
                    .map_err(|e| Failure::usage(e.to_string()))?,
            );
        }
        for s in &mut settings {
            s.solvers.retain(|k| keep.contains(k));
        }
        settings.retain(|s| !s.solvers.is_empty());
        if settings.is_empty() {
            return Err(Failure::usage("solver filter removed every cell"));
        }
    }

    let rows = bench::run_settings(&settings, reps, seed).map_err(classify)?;
    bench::write_csv(&out, &rows).map_err(|e| Failure::runtime(e.to_string()))?;
    println!("wrote {} ({} rows)", out.display(), rows.len());

    if plot {
        let stem = out
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("results");
        let dir = out.parent().unwrap_or_else(|| Path::new("."));
        // Mean rows per solver, keyed by whichever parameter the preset sweeps.
        let sweep_sigma =
            settings.iter().all(|s| s.spec.k == settings[0].spec.k) && settings.len() > 1;
        let x_label = if sweep_sigma { "sigma" } else { "K" };
        let mut recovery: Vec<Series> = Vec::new();
        let mut iterations: Vec<Series> = Vec::new();
        let mut solvers: Vec<SolverKind> = rows.iter().map(|r| r.solver).collect();
        solvers.dedup();
        solvers.sort_by_key(|s| s.to_string());
        solvers.dedup();
        for solver in solvers {
            let pts: Vec<(f64, f64, f64)> = rows
                .iter()
                .filter(|r| r.solver == solver && r.rep == RepTag::Mean)
                .map(|r| {
                    let x = if sweep_sigma { r.sigma } else { r.k as f64 };
                    (
                        x,
                        r.exact_support.unwrap_or(f64::NAN),
                        r.iterations.unwrap_or(f64::NAN),
                    )
                })
                .collect();
            if pts.is_empty() {
                continue;
            }
            recovery.push(Series {
                label: solver.to_string(),
                points: pts.iter().map(|&(x, y, _)| (x, y)).collect(),
            });
            iterations.push(Series {
                label: solver.to_string(),
                points: pts.iter().map(|&(x, _, y)| (x, y)).collect(),
            });
        }
        let rec_path = dir.join(format!("{stem}_recovery.svg"));
        let iter_path = dir.join(format!("{stem}_iterations.svg"));
        // Plotting never gates exit status; report and continue on failure.
        let title = format!("{preset_name}: exact support recovery");
        if let Err(e) =
            plot::write_line_plot(&rec_path, &title, x_label, "recovery rate", &recovery)
        {
            eprintln!("plot skipped: {e}");
        } else {
            println!("wrote {}", rec_path.display());
        }
        let title = format!("{preset_name}: mean iterations");
        if let Err(e) =
            plot::write_line_plot(&iter_path, &title, x_label, "iterations", &iterations)
        {
            eprintln!("plot skipped: {e}");
        } else {
            println!("wrote {}", iter_path.display());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// diagnose

#[derive(Debug, Args)]
struct DiagnoseArgs {
    /// Input dataset CSV.
    data: PathBuf,
    /// Support size the contraction factors refer to.
    #[arg(long = "T")]
    t: Option<usize>,
    /// Number of important predictors (defaults to T).
    #[arg(long = "J")]
    j: Option<usize>,
    /// Tail probability for the error bounds.
    #[arg(long)]
    alpha: Option<f64>,
    /// Known noise level (needed for the error bounds).
    #[arg(long)]
    sigma: Option<f64>,
    /// Truth CSV (`index,beta`) unlocking R, R_J, and the error bounds.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagnoseFileConfig {
    #[serde(rename = "T")]
    t: Option<usize>,
    #[serde(rename = "J")]
    j: Option<usize>,
    alpha: Option<f64>,
    sigma: Option<f64>,
    truth: Option<PathBuf>,
}

fn cmd_diagnose(args: DiagnoseArgs) -> CmdResult {
    let file: DiagnoseFileConfig = read_config(&args.config)?;
    let sigma = args.sigma.or(file.sigma);
    let dataset = load_dataset(&args.data, sigma)?;
    let x = &dataset.data.x;
    let (n, p) = (x.n_rows(), x.n_cols());
    if p < 2 {
        return Err(Failure::usage("diagnostics need at least two predictors"));
    }
    let t = args.t.or(file.t).unwrap_or_else(|| p.min(4)).max(1);
    let j = args.j.or(file.j).unwrap_or(t);
    let alpha = args.alpha.or(file.alpha).unwrap_or(0.05);
    let truth = match args.truth.or(file.truth) {
        Some(path) => Some(read_truth(&path).map_err(|e| Failure::usage(e.to_string()))?),
        None => None,
    };
    if let Some(beta) = &truth {
        if beta.len() != p {
            return Err(Failure::usage(format!(
                "truth has {} coefficients but the design has {} columns",
                beta.len(),
                p
            )));
        }
    }

    println!("n: {n}");
    println!("p: {p}");
    println!("T: {t}");
    println!("J: {j}");
    let mu = diagnostics::mutual_coherence(x);
    println!("mu: {mu}");
    match diagnostics::gamma_mu_factor(t, mu) {
        Ok(g) => {
            println!("gamma_mu: {g}");
            println!(
                "T*mu <= 1/4: {}",
                if t as f64 * mu <= 0.25 { "yes" } else { "no" }
            );
        }
        Err(e) => println!("gamma_mu: skipped ({e})"),
    }

    let s_max = (2 * t).min(p);
    match diagnostics::src_profile(x, s_max) {
        Ok(profile) => {
            for (s, (lo, hi)) in &profile {
                println!("c_minus({s}): {lo}");
                println!("c_plus({s}): {hi}");
            }
            match diagnostics::sparse_orthogonality(x, t, t) {
                Ok(theta) => {
                    println!("theta({t},{t}): {theta}");
                    if let Some(&(c_minus, _)) = profile.get(&t).map(|v| v as &(f64, f64)) {
                        let gamma = diagnostics::gamma_factor(theta, c_minus);
                        println!("gamma: {gamma}");
                        println!("gamma < 1: {}", if gamma < 1.0 { "yes" } else { "no" });
                    }
                }
                Err(e) => println!("theta({t},{t}): skipped ({e})"),
            }
        }
        Err(e) => println!("src: skipped ({e})"),
    }

    if let Some(beta) = &truth {
        let r = diagnostics::relative_magnitude(beta, j);
        let r_j = diagnostics::r_j_measure(beta, j);
        println!("R: {r}");
        println!("R_J: {r_j}");
        if let Some(sigma) = sigma {
            match diagnostics::RecoveryDiagnostics::compute(x, Some(beta), t, j, alpha, Some(sigma))
            {
                Ok(diag) => {
                    if let (Some(e1), Some(e2)) = (diag.eps1, diag.eps2) {
                        println!("eps1: {e1}");
                        println!("eps2: {e2}");
                    }
                }
                Err(e) => println!("error bounds: skipped ({e})"),
            }
        }
    }
    Ok(())
}
