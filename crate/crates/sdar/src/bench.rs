//! Benchmark harness: seeded simulation presets, a solver race over
//! replications, and CSV/plot emission.
//!
//! Replications inside a cell run in parallel on independent substream seeds
//! derived by counter from the master seed; output order is fixed by the
//! replication index, so result files do not depend on scheduling.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asdar::{asdar_fit, select_model, AsdarConfig};
use crate::baselines::{grades_fit, mcp_path_fit, omp_fit, McpConfig};
use crate::error::{Error, Result};
use crate::metrics::{self, RepRecord};
use crate::model::{FitResult, SolutionPath};
use crate::sdar::{sdar_fit, SdarConfig};
use crate::simgen::{derive_seed, generate, CoefMode, DesignKind, SimInstance, SimSpec};

/// Which solver a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Sdar,
    Asdar,
    Omp,
    Grades,
    Mcp,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Sdar => "sdar",
            SolverKind::Asdar => "asdar",
            SolverKind::Omp => "omp",
            SolverKind::Grades => "grades",
            SolverKind::Mcp => "mcp",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sdar" => Ok(SolverKind::Sdar),
            "asdar" => Ok(SolverKind::Asdar),
            "omp" => Ok(SolverKind::Omp),
            "grades" => Ok(SolverKind::Grades),
            "mcp" => Ok(SolverKind::Mcp),
            other => Err(Error::InvalidConfig(format!("unknown solver `{other}`"))),
        }
    }
}

/// One simulation cell: a data-generating spec plus the solvers raced on it.
#[derive(Debug, Clone)]
pub struct BenchSetting {
    pub preset: String,
    pub spec: SimSpec,
    /// Support size handed to the fixed-size solvers; defaults to the true K.
    pub t: Option<usize>,
    /// Ladder increment for the adaptive solver.
    pub tau: usize,
    pub solvers: Vec<SolverKind>,
}

/// Row tag: a replication index or an aggregate line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepTag {
    Index(usize),
    Mean,
    Sd,
}

impl std::fmt::Display for RepTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepTag::Index(i) => write!(f, "{i}"),
            RepTag::Mean => f.write_str("mean"),
            RepTag::Sd => f.write_str("sd"),
        }
    }
}

/// One line of the results CSV.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub preset: String,
    pub design: DesignKind,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub sigma: f64,
    pub rho: f64,
    pub r: f64,
    pub solver: SolverKind,
    pub rep: RepTag,
    pub rel_err: Option<f64>,
    pub exact_support: Option<f64>,
    pub iterations: Option<f64>,
    pub wall_ms: Option<f64>,
    pub status: String,
}

pub const CSV_HEADER: &str =
    "preset,design,n,p,K,sigma,rho,R,solver,rep,rel_err,exact_support,iterations,wall_ms,status";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl BenchRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.preset,
            self.design,
            self.n,
            self.p,
            self.k,
            self.sigma,
            self.rho,
            self.r,
            self.solver,
            self.rep,
            opt(self.rel_err),
            opt(self.exact_support),
            opt(self.iterations),
            opt(self.wall_ms),
            self.status,
        )
    }
}

/// Writes rows (with the canonical header) to a CSV file.
pub fn write_csv(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    Ok(())
}

/// Outcome of one solver on one replication.
#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub record: Option<RepRecord>,
    pub status: String,
}

fn path_totals(path: &SolutionPath) -> (usize, Duration) {
    let mut iters = 0;
    let mut wall = Duration::ZERO;
    for e in &path.entries {
        if let Some(fit) = &e.fit {
            iters += fit.iterations;
            wall += fit.wall_time;
        }
    }
    (iters, wall)
}

fn outcome_from_fit(
    fit: &FitResult,
    instance: &SimInstance,
    iterations: usize,
    wall: Duration,
) -> SolverOutcome {
    let rel_err = metrics::relative_error(&fit.beta, &instance.beta_star).unwrap_or(f64::NAN);
    SolverOutcome {
        record: Some(RepRecord {
            rel_err,
            exact_support: metrics::exact_support_recovery(&fit.beta, &instance.support),
            iterations,
            wall,
        }),
        status: fit.status.to_string(),
    }
}

/// Runs one solver on one generated instance.
pub fn run_solver(
    solver: SolverKind,
    instance: &SimInstance,
    setting: &BenchSetting,
) -> SolverOutcome {
    let data = &instance.data;
    let k = setting.spec.k;
    let t = setting.t.unwrap_or(k).max(1);
    let result: Result<SolverOutcome> = (|| match solver {
        SolverKind::Sdar => {
            let fit = sdar_fit(data, &SdarConfig::new(t))?;
            Ok(outcome_from_fit(
                &fit,
                instance,
                fit.iterations,
                fit.wall_time,
            ))
        }
        SolverKind::Asdar => {
            let cfg = AsdarConfig {
                tau: setting.tau,
                ..AsdarConfig::default()
            };
            let path = asdar_fit(data, &cfg)?;
            let (iters, wall) = path_totals(&path);
            let (_, fit) = select_model(&path)?;
            Ok(outcome_from_fit(&fit, instance, iters, wall))
        }
        SolverKind::Omp => {
            let fit = omp_fit(data, t)?;
            Ok(outcome_from_fit(
                &fit,
                instance,
                fit.iterations,
                fit.wall_time,
            ))
        }
        SolverKind::Grades => {
            let epsilon = (data.n() as f64).sqrt() * setting.spec.sigma;
            let fit = grades_fit(data, t, 1.0 / 3.0, epsilon, (data.n() / 2).max(1));
            Ok(outcome_from_fit(
                &fit,
                instance,
                fit.iterations,
                fit.wall_time,
            ))
        }
        SolverKind::Mcp => {
            let cfg = McpConfig {
                epsilon: Some(instance.noise_norm),
                ..McpConfig::default()
            };
            let path = mcp_path_fit(data, &cfg)?;
            let (iters, wall) = path_totals(&path);
            let (_, fit) = select_model(&path)?;
            Ok(outcome_from_fit(&fit, instance, iters, wall))
        }
    })();
    match result {
        Ok(outcome) => outcome,
        Err(e) => SolverOutcome {
            record: None,
            status: format!("error: {e}"),
        },
    }
}

/// Runs every solver of a setting over `reps` replications (in parallel) and
/// returns per-rep rows followed by mean/sd aggregate rows per solver.
///
/// `stream` separates the seed substreams of different settings under the
/// same master seed.
pub fn run_setting(
    setting: &BenchSetting,
    reps: usize,
    master_seed: u64,
    stream: u64,
) -> Result<Vec<BenchRow>> {
    setting.spec.validate()?;
    let cell_seed = derive_seed(master_seed, stream);
    let per_rep: Vec<Vec<(SolverKind, SolverOutcome)>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let spec = SimSpec {
                seed: derive_seed(cell_seed, rep as u64),
                ..setting.spec.clone()
            };
            match generate(&spec) {
                Ok(instance) => setting
                    .solvers
                    .iter()
                    .map(|&s| (s, run_solver(s, &instance, setting)))
                    .collect(),
                Err(e) => setting
                    .solvers
                    .iter()
                    .map(|&s| {
                        (
                            s,
                            SolverOutcome {
                                record: None,
                                status: format!("error: {e}"),
                            },
                        )
                    })
                    .collect(),
            }
        })
        .collect();

    let mut rows = Vec::new();
    let base = |solver: SolverKind, rep: RepTag| BenchRow {
        preset: setting.preset.clone(),
        design: setting.spec.design,
        n: setting.spec.n,
        p: setting.spec.p,
        k: setting.spec.k,
        sigma: setting.spec.sigma,
        rho: setting.spec.rho,
        r: setting.spec.r,
        solver,
        rep,
        rel_err: None,
        exact_support: None,
        iterations: None,
        wall_ms: None,
        status: String::new(),
    };

    for (rep, outcomes) in per_rep.iter().enumerate() {
        for (solver, outcome) in outcomes {
            let mut row = base(*solver, RepTag::Index(rep));
            row.status = outcome.status.clone();
            if let Some(rec) = &outcome.record {
                row.rel_err = Some(rec.rel_err);
                row.exact_support = Some(if rec.exact_support { 1.0 } else { 0.0 });
                row.iterations = Some(rec.iterations as f64);
                row.wall_ms = Some(rec.wall.as_secs_f64() * 1e3);
            }
            rows.push(row);
        }
    }

    for &solver in &setting.solvers {
        let records: Vec<RepRecord> = per_rep
            .iter()
            .flat_map(|outcomes| {
                outcomes
                    .iter()
                    .filter(|(s, _)| *s == solver)
                    .filter_map(|(_, o)| o.record.clone())
            })
            .collect();
        if let Ok(summary) = metrics::aggregate(&records) {
            let mut mean = base(solver, RepTag::Mean);
            mean.rel_err = Some(summary.rel_err_mean);
            mean.exact_support = Some(summary.exact_support_rate);
            mean.iterations = Some(summary.mean_iterations);
            mean.wall_ms = Some(summary.mean_wall_time.as_secs_f64() * 1e3);
            mean.status = format!("n_reps={}", summary.n_reps);
            rows.push(mean);
            let mut sd = base(solver, RepTag::Sd);
            sd.rel_err = Some(summary.rel_err_sd);
            sd.status = format!("n_reps={}", summary.n_reps);
            rows.push(sd);
        }
    }
    Ok(rows)
}

/// Runs a list of settings sequentially (reps within each run in parallel).
pub fn run_settings(
    settings: &[BenchSetting],
    reps: usize,
    master_seed: u64,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (i, setting) in settings.iter().enumerate() {
        rows.extend(run_setting(setting, reps, master_seed, i as u64)?);
    }
    Ok(rows)
}

fn base_spec(n: usize, p: usize, k: usize) -> SimSpec {
    SimSpec {
        n,
        p,
        k,
        sigma: 1.0,
        rho: 0.0,
        r: 1.0,
        design: DesignKind::Ar1,
        coef_mode: CoefMode::RandomSupport,
        seed: 0,
    }
}

/// Known preset names.
pub const PRESETS: [&str; 4] = ["figure2-desk", "table1-desk", "minimax-desk", "hbic-desk"];

/// Builds the settings of a named preset.
///
/// - `figure2-desk`: SDAR iteration counts and exact recovery as the sparsity
///   level sweeps 3, 5, ..., 49 (n=500, p=1000, sigma=0.01, AR(1) rho=0.1, R=1).
/// - `table1-desk`: the solver race at n=500, p=5000, K=40, R=100, sigma=1,
///   neighbor-correlated design with rho=0.2. A desk-scale reduction of the
///   large-instance comparison (same n/(K ln(p-K)) regime as n=5000,
///   p=50000, K=400).
/// - `minimax-desk`: SDAR l2 error as sigma doubles over {0.1, 0.2, 0.4, 0.8}
///   (n=500, p=1000, K=T=10, independent design).
/// - `hbic-desk`: ASDAR with a unit ladder and HBIC selection
///   (n=500, p=1000, K=10, sigma=0.5, AR(1) rho=0.1, R=10).
pub fn preset(name: &str) -> Result<Vec<BenchSetting>> {
    match name {
        "figure2-desk" => Ok((3..=49)
            .step_by(2)
            .map(|k| BenchSetting {
                preset: name.to_string(),
                spec: SimSpec {
                    sigma: 0.01,
                    rho: 0.1,
                    ..base_spec(500, 1000, k)
                },
                t: Some(k),
                tau: 1,
                solvers: vec![SolverKind::Sdar],
            })
            .collect()),
        "table1-desk" => Ok(vec![BenchSetting {
            preset: name.to_string(),
            spec: SimSpec {
                sigma: 1.0,
                rho: 0.2,
                r: 100.0,
                design: DesignKind::NeighborCorr,
                coef_mode: CoefMode::HeadSupport,
                ..base_spec(500, 5000, 40)
            },
            t: Some(40),
            tau: 50,
            solvers: vec![
                SolverKind::Sdar,
                SolverKind::Asdar,
                SolverKind::Mcp,
                SolverKind::Grades,
                SolverKind::Omp,
            ],
        }]),
        "minimax-desk" => Ok([0.1, 0.2, 0.4, 0.8]
            .iter()
            .map(|&sigma| BenchSetting {
                preset: name.to_string(),
                spec: SimSpec {
                    sigma,
                    rho: 0.0,
                    r: 10.0,
                    coef_mode: CoefMode::HeadSupport,
                    ..base_spec(500, 1000, 10)
                },
                t: Some(10),
                tau: 1,
                solvers: vec![SolverKind::Sdar],
            })
            .collect()),
        "hbic-desk" => Ok(vec![BenchSetting {
            preset: name.to_string(),
            spec: SimSpec {
                sigma: 0.5,
                rho: 0.1,
                r: 10.0,
                ..base_spec(500, 1000, 10)
            },
            t: Some(10),
            tau: 1,
            solvers: vec![SolverKind::Asdar],
        }]),
        other => Err(Error::InvalidConfig(format!(
            "unknown preset `{other}`; known presets: {}",
            PRESETS.join(", ")
        ))),
    }
}
