//! Domain types shared by all solvers: problem data, primal-dual state, fit
//! results, and solution paths.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};

/// Relative slack allowed on the `sqrt(n)` column-norm invariant.
const COLUMN_NORM_TOL: f64 = 1e-8;

/// A regression problem: a design matrix with `sqrt(n)`-normalized columns,
/// a response vector, and an optional known noise level.
#[derive(Debug, Clone)]
pub struct RegressionData {
    pub x: DenseMatrix,
    pub y: Vec<f64>,
    pub sigma_hint: Option<f64>,
}

impl RegressionData {
    /// Builds and validates a problem instance.
    pub fn new(x: DenseMatrix, y: Vec<f64>, sigma_hint: Option<f64>) -> Result<Self> {
        let data = Self { x, y, sigma_hint };
        data.validate()?;
        Ok(data)
    }

    pub fn n(&self) -> usize {
        self.x.n_rows()
    }

    pub fn p(&self) -> usize {
        self.x.n_cols()
    }

    /// Checks the type invariants: every column has norm `sqrt(n)` within
    /// 1e-8 relative, and all values are finite.
    pub fn validate(&self) -> Result<()> {
        if self.y.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "response length",
                expected: self.n(),
                got: self.y.len(),
            });
        }
        let target = (self.n() as f64).sqrt();
        for j in 0..self.p() {
            let norm = linalg::norm2(self.x.col(j));
            if (norm - target).abs() > COLUMN_NORM_TOL * target {
                return Err(Error::BadColumnNorm { col: j, norm });
            }
        }
        if let Some(i) = self.y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("y[{i}]")));
        }
        if let Some(s) = self.sigma_hint {
            if !s.is_finite() || s < 0.0 {
                return Err(Error::NonFinite("sigma_hint".into()));
            }
        }
        Ok(())
    }

    /// `||y - X beta||_2`
    pub fn residual_norm(&self, beta: &[f64]) -> f64 {
        let fitted = self.x.matvec(beta);
        linalg::norm2(&linalg::sub(&self.y, &fitted))
    }
}

/// The primal-dual pair `(beta^k, d^k)` together with the active set it was
/// fitted on.
///
/// Invariants: `supp(beta)` lies inside `active`, `d` vanishes on `active`,
/// and `beta_i * d_i = 0` for every coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalDualState {
    pub beta: Vec<f64>,
    pub d: Vec<f64>,
    /// Sorted active indices.
    pub active: Vec<usize>,
    /// Number of refits performed so far.
    pub k: usize,
}

impl PrimalDualState {
    /// Complementarity and support/dual separation; used by debug assertions
    /// in the solvers.
    pub fn invariants_hold(&self) -> bool {
        if self.beta.len() != self.d.len() {
            return false;
        }
        let active: BTreeSet<usize> = self.active.iter().copied().collect();
        self.beta
            .iter()
            .zip(&self.d)
            .enumerate()
            .all(|(i, (&b, &d))| {
                let complementary = b * d == 0.0;
                let separated = if active.contains(&i) {
                    d == 0.0
                } else {
                    b == 0.0
                };
                complementary && separated
            })
    }
}

/// Why a solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Fixed point reached (for SDAR: the detected active set repeated itself
    /// immediately, `A^{k+1} = A^k`).
    Converged,
    /// Outer-iteration budget exhausted.
    MaxIters,
    /// The active set revisited an earlier configuration without a fixed
    /// point forming; the run was cut to guarantee termination.
    CycleDetected,
    /// Residual-based early stopping triggered.
    EarlyStop,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Converged => "converged",
            Status::MaxIters => "max-iters",
            Status::CycleDetected => "cycle-detected",
            Status::EarlyStop => "early-stop",
        };
        f.write_str(s)
    }
}

/// A fitted model: coefficients, the final active set, and run accounting.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub beta: Vec<f64>,
    /// Sorted active indices.
    pub active: Vec<usize>,
    pub iterations: usize,
    pub status: Status,
    pub residual_norm: f64,
    pub wall_time: Duration,
}

/// One ladder entry of a solution path.
#[derive(Debug, Clone)]
pub struct PathEntry {
    /// Fitted model size for this entry.
    pub t: usize,
    /// The fit, when the solver succeeded at this size.
    pub fit: Option<FitResult>,
    /// HBIC score of the fit (`None` when the fit failed).
    pub hbic: Option<f64>,
    /// Error message when the solver failed at this size.
    pub error: Option<String>,
}

/// A sequence of fits indexed by strictly increasing model size.
#[derive(Debug, Clone, Default)]
pub struct SolutionPath {
    pub entries: Vec<PathEntry>,
}

impl SolutionPath {
    /// Checks the strictly-increasing-size invariant.
    pub fn sizes_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].t < w[1].t)
    }
}

/// A dataset loaded from CSV, with the per-column factors that normalized it.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub data: RegressionData,
    /// Factor applied to each raw column; a coefficient fitted on the
    /// normalized design maps back as `beta_raw[j] = beta[j] * scale[j]`.
    pub scale: Vec<f64>,
    /// Predictor column names from the header.
    pub names: Vec<String>,
}

/// Loads a `y,x1,...,xp` CSV dataset, normalizing the predictor columns to
/// `sqrt(n)` length and recording the applied scales.
pub fn load_csv(path: &Path, sigma_hint: Option<f64>) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, sigma_hint)
}

/// Parses CSV text in the dataset format (header row, first column `y`).
pub fn parse_csv(text: &str, sigma_hint: Option<f64>) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Csv("empty file".into()))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if names.is_empty() || names[0] != "y" {
        return Err(Error::Csv("header must start with column `y`".into()));
    }
    let p = names.len() - 1;
    if p == 0 {
        return Err(Error::Csv("no predictor columns".into()));
    }

    let mut y = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != p + 1 {
            return Err(Error::Csv(format!(
                "line {}: expected {} fields, got {}",
                lineno + 1,
                p + 1,
                fields.len()
            )));
        }
        let mut row = Vec::with_capacity(p + 1);
        for f in &fields {
            let v: f64 = f.trim().parse().map_err(|_| {
                Error::Csv(format!("line {}: cannot parse `{}`", lineno + 1, f.trim()))
            })?;
            row.push(v);
        }
        y.push(row[0]);
        rows.push(row[1..].to_vec());
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Csv("no data rows".into()));
    }

    let mut values = vec![0.0; n * p];
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            values[j * n + i] = v;
        }
    }
    let raw = DenseMatrix::new(n, p, values)?;
    let (x, scale) = linalg::normalize_columns(&raw)?;
    let data = RegressionData::new(x, y, sigma_hint)?;
    Ok(Dataset {
        data,
        scale,
        names: names[1..].to_vec(),
    })
}

/// Writes a dataset in the `y,x1,...,xp` CSV format.
pub fn write_csv(path: &Path, x: &DenseMatrix, y: &[f64]) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut header = String::from("y");
    for j in 1..=x.n_cols() {
        header.push_str(&format!(",x{j}"));
    }
    writeln!(out, "{header}")?;
    for (i, yi) in y.iter().enumerate().take(x.n_rows()) {
        let mut line = format!("{yi}");
        for j in 0..x.n_cols() {
            line.push(',');
            line.push_str(&format!("{}", x.get(i, j)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
