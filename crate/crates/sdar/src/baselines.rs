//! Comparison solvers: orthogonal matching pursuit, gradient descent with
//! hard thresholding (GraDes), and an MCP path fitted by iterative
//! thresholding with warm starts.

use std::time::Instant;

use crate::asdar::{default_ladder_cap, hbic_score};
use crate::error::{Error, Result};
use crate::linalg::{self, norm2, sub};
use crate::model::{FitResult, PathEntry, RegressionData, SolutionPath, Status};
use crate::sdar::top_t_indices;

/// Residual norms below this end OMP early.
const OMP_RESIDUAL_FLOOR: f64 = 1e-12;

/// Greedy one-at-a-time selection: each step adds the column most correlated
/// with the current residual, then refits least squares on the active set.
pub fn omp_fit(data: &RegressionData, k: usize) -> Result<FitResult> {
    let limit = (data.n().saturating_sub(1)).min(data.p());
    if k == 0 || k > limit {
        return Err(Error::InvalidConfig(format!(
            "OMP sparsity K = {k} must be in [1, min(n-1, p)] = [1, {limit}]"
        )));
    }
    let start = Instant::now();
    let mut in_active = vec![false; data.p()];
    let mut active: Vec<usize> = Vec::with_capacity(k);
    let mut coef: Vec<f64> = Vec::new();
    let mut residual = data.y.clone();
    let mut status = Status::Converged;
    let mut steps = 0;

    for _ in 0..k {
        if norm2(&residual) < OMP_RESIDUAL_FLOOR {
            status = Status::EarlyStop;
            break;
        }
        let c = linalg::correlation(&data.x, &residual)?;
        let mut best = usize::MAX;
        let mut best_mag = -1.0;
        for (j, &cj) in c.iter().enumerate() {
            if !in_active[j] && cj.abs() > best_mag {
                best_mag = cj.abs();
                best = j;
            }
        }
        in_active[best] = true;
        active.push(best);
        let x_a = data.x.select_columns(&active);
        coef = linalg::cholesky_solve(&x_a, &data.y)
            .map_err(|_| Error::RankDeficientActiveSet(active.clone()))?;
        residual = sub(&data.y, &x_a.matvec(&coef));
        steps += 1;
    }

    let mut beta = vec![0.0; data.p()];
    for (&j, &b) in active.iter().zip(&coef) {
        beta[j] = b;
    }
    active.sort_unstable();
    Ok(FitResult {
        beta,
        active,
        iterations: steps,
        status,
        residual_norm: norm2(&residual),
        wall_time: start.elapsed(),
    })
}

/// Keeps the `K` largest-magnitude entries of `v` and zeroes the rest, with
/// the same smallest-index tie rule as support detection.
pub fn top_k_threshold(v: &[f64], k: usize) -> Vec<f64> {
    let keep = top_t_indices(v, k);
    let mut out = vec![0.0; v.len()];
    for &j in &keep {
        out[j] = v[j];
    }
    out
}

/// Gradient descent with hard thresholding:
/// `beta <- H_K(beta + step * X'(y - X beta)/n)` from `beta = 0`.
///
/// Stops when the residual norm falls to `epsilon` (`EarlyStop`), the iterate
/// reaches an exact fixed point (`Converged`), or after `max_iters` steps.
pub fn grades_fit(
    data: &RegressionData,
    k: usize,
    step: f64,
    epsilon: f64,
    max_iters: usize,
) -> FitResult {
    let start = Instant::now();
    let mut beta = vec![0.0; data.p()];
    let mut active = top_t_indices(&beta, k.clamp(1, data.p()));
    let mut status = Status::MaxIters;
    let mut iterations = 0;
    let mut residual = data.y.clone();

    for i in 1..=max_iters.max(1) {
        let d = linalg::correlation(&data.x, &residual).expect("validated dimensions");
        let v: Vec<f64> = beta.iter().zip(&d).map(|(b, di)| b + step * di).collect();
        let keep = top_t_indices(&v, k.clamp(1, data.p()));
        let mut next = vec![0.0; data.p()];
        for &j in &keep {
            next[j] = v[j];
        }
        iterations = i;
        residual = sub(&data.y, &data.x.matvec(&next));
        if norm2(&residual) <= epsilon {
            beta = next;
            active = keep;
            status = Status::EarlyStop;
            break;
        }
        // A degenerate step size never moves the iterate; do not report that
        // trivial self-map as convergence.
        if step > 0.0 && next == beta {
            status = Status::Converged;
            break;
        }
        beta = next;
        active = keep;
    }

    FitResult {
        residual_norm: data.residual_norm(&beta),
        beta,
        active,
        iterations,
        status,
        wall_time: start.elapsed(),
    }
}

/// Configuration for the MCP iterative-thresholding path.
#[derive(Debug, Clone)]
pub struct McpConfig {
    /// Concavity parameter; larger values approach hard thresholding's
    /// unbiasedness more slowly.
    pub gamma: f64,
    /// Number of penalty values on the geometric grid.
    pub n_lambdas: usize,
    /// `lambda_min = alpha_min_ratio * lambda_max`.
    pub alpha_min_ratio: f64,
    /// Iteration budget per penalty value.
    pub max_inner_iters: usize,
    /// Inner-loop stop: largest coefficient change below this.
    pub tol: f64,
    /// Residual stop for the whole path (in simulations, the realized noise
    /// norm); disabled when absent or non-finite.
    pub epsilon: Option<f64>,
    /// Largest admissible support size; `floor(n / ln n)` when absent.
    pub l_max: Option<usize>,
}

impl Default for McpConfig {
    fn default() -> Self {
        Self {
            gamma: 2.7,
            n_lambdas: 100,
            alpha_min_ratio: 1e-4,
            max_inner_iters: 500,
            tol: 1e-8,
            epsilon: None,
            l_max: None,
        }
    }
}

impl McpConfig {
    fn validate(&self) -> Result<()> {
        if self.gamma.is_nan() || self.gamma <= 1.0 {
            return Err(Error::InvalidConfig("MCP gamma must exceed 1".into()));
        }
        if self.alpha_min_ratio.is_nan()
            || self.alpha_min_ratio <= 0.0
            || self.alpha_min_ratio >= 1.0
        {
            return Err(Error::InvalidConfig(
                "alpha_min_ratio must lie in (0, 1)".into(),
            ));
        }
        if self.n_lambdas == 0 || self.max_inner_iters == 0 {
            return Err(Error::InvalidConfig(
                "n_lambdas and max_inner_iters must be >= 1".into(),
            ));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Scalar MCP thresholding operator (unit-step proximal map):
/// a dead zone below `lambda`, linear shrinkage up to `gamma * lambda`, and
/// the identity beyond it.
pub fn mcp_threshold(z: f64, lambda: f64, gamma: f64) -> f64 {
    debug_assert!(lambda >= 0.0 && gamma > 1.0);
    let az = z.abs();
    if az <= lambda {
        0.0
    } else if az <= gamma * lambda {
        z.signum() * (az - lambda) / (1.0 - 1.0 / gamma)
    } else {
        z
    }
}

/// Fits the MCP path over a geometric penalty grid by iterative thresholding
/// with warm starts, scoring each support size by HBIC.
///
/// The path stops when the residual norm falls below `cfg.epsilon` or the
/// support grows past `cfg.l_max`. One entry is kept per distinct support
/// size (the best HBIC seen at that size), so entry sizes are strictly
/// increasing.
pub fn mcp_path_fit(data: &RegressionData, cfg: &McpConfig) -> Result<SolutionPath> {
    cfg.validate()?;
    let n = data.n();
    let p = data.p();
    let l_max = cfg.l_max.unwrap_or_else(|| default_ladder_cap(n));
    let corr0 = linalg::correlation(&data.x, &data.y)?;
    let lambda_max = linalg::norm_inf(&corr0);
    if lambda_max == 0.0 {
        // y is orthogonal to every column; the null model is the whole path.
        let fit = null_fit(data);
        let hbic = hbic_score(&fit, data);
        return Ok(SolutionPath {
            entries: vec![PathEntry {
                t: 0,
                fit: Some(fit),
                hbic: Some(hbic),
                error: None,
            }],
        });
    }

    let mut best: std::collections::BTreeMap<usize, (FitResult, f64)> =
        std::collections::BTreeMap::new();
    let mut beta = vec![0.0; p];

    'path: for step in 0..cfg.n_lambdas {
        let frac = if cfg.n_lambdas == 1 {
            0.0
        } else {
            step as f64 / (cfg.n_lambdas - 1) as f64
        };
        let lambda = lambda_max * cfg.alpha_min_ratio.powf(frac);
        let entry_start = Instant::now();

        let mut inner_status = Status::MaxIters;
        let mut inner_iters = 0;
        for it in 1..=cfg.max_inner_iters {
            let residual = sub(&data.y, &data.x.matvec(&beta));
            let g = linalg::correlation(&data.x, &residual)?;
            let mut change: f64 = 0.0;
            for j in 0..p {
                let next = mcp_threshold(beta[j] + g[j], lambda, cfg.gamma);
                change = change.max((next - beta[j]).abs());
                beta[j] = next;
            }
            inner_iters = it;
            if !change.is_finite() {
                return Err(Error::NonFinite(format!(
                    "MCP iterate diverged at lambda = {lambda}"
                )));
            }
            if change < cfg.tol {
                inner_status = Status::Converged;
                break;
            }
            // An exploding support means the un-thresholded regime was
            // reached; the path has no usable models past this point.
            if beta.iter().filter(|b| **b != 0.0).count() > 4 * l_max + p.min(50) {
                break 'path;
            }
        }

        let active: Vec<usize> = (0..p).filter(|&j| beta[j] != 0.0).collect();
        let support = active.len();
        let residual_norm = data.residual_norm(&beta);
        let fit = FitResult {
            beta: beta.clone(),
            active,
            iterations: inner_iters,
            status: inner_status,
            residual_norm,
            wall_time: entry_start.elapsed(),
        };
        let score = hbic_score(&fit, data);
        match best.get(&support) {
            Some((_, prev)) if *prev <= score => {}
            _ => {
                best.insert(support, (fit, score));
            }
        }

        if let Some(eps) = cfg.epsilon {
            if eps.is_finite() && residual_norm <= eps {
                break;
            }
        }
        if support > l_max {
            break;
        }
    }

    let entries = best
        .into_iter()
        .map(|(t, (fit, hbic))| PathEntry {
            t,
            fit: Some(fit),
            hbic: Some(hbic),
            error: None,
        })
        .collect();
    Ok(SolutionPath { entries })
}

fn null_fit(data: &RegressionData) -> FitResult {
    FitResult {
        beta: vec![0.0; data.p()],
        active: Vec::new(),
        iterations: 0,
        status: Status::Converged,
        residual_norm: norm2(&data.y),
        wall_time: std::time::Duration::ZERO,
    }
}
