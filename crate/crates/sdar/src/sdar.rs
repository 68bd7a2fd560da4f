//! Support detection and root finding for the l0-penalized least-squares
//! problem.
//!
//! Each iteration detects a candidate active set as the `T` largest entries
//! of `|beta^k + d^k|`, solves the restricted least-squares normal equations
//! on it (root finding), and refreshes the dual correlations
//! `d = X'(y - X beta)/n` off the set. The iteration stops as soon as the
//! detected set repeats itself, which makes the pair `(beta, d)` a fixed
//! point of the KKT system
//!
//! ```text
//! d = X'(y - X beta)/n,    beta = H_lambda(beta + d),
//! ```
//!
//! with `sqrt(2 lambda)` equal to the `T`-th largest magnitude of
//! `beta + d`.

use std::collections::HashSet;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{self, CgSettings};
use crate::model::{FitResult, PrimalDualState, RegressionData, Status};

/// Configuration for a single fixed-size fit.
#[derive(Debug, Clone)]
pub struct SdarConfig {
    /// Target support size `T`.
    pub t: usize,
    /// Outer-iteration budget.
    pub max_outer_iters: usize,
    /// Initial primal vector; zeros when absent (the first detected set then
    /// coincides with correlation screening on `|X'y|`).
    pub beta0: Option<Vec<f64>>,
    /// Conjugate-gradient settings; derived from `(p, T)` when absent.
    pub cg: Option<CgSettings>,
}

impl SdarConfig {
    pub fn new(t: usize) -> Self {
        Self {
            t,
            max_outer_iters: 100,
            beta0: None,
            cg: None,
        }
    }

    fn validate(&self, data: &RegressionData) -> Result<()> {
        let limit = (data.n().saturating_sub(1)).min(data.p());
        if self.t == 0 || self.t > limit {
            return Err(Error::InvalidConfig(format!(
                "support size T = {} must be in [1, min(n-1, p)] = [1, {}]",
                self.t, limit
            )));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::InvalidConfig("max_outer_iters must be >= 1".into()));
        }
        if let Some(b0) = &self.beta0 {
            if b0.len() != data.p() {
                return Err(Error::DimensionMismatch {
                    what: "beta0 length",
                    expected: data.p(),
                    got: b0.len(),
                });
            }
        }
        Ok(())
    }

    fn cg_settings(&self, p: usize) -> CgSettings {
        self.cg
            .unwrap_or_else(|| CgSettings::for_problem(p, self.t))
    }
}

/// Keeps entries with `|v_i| >= threshold`, zeroing the rest.
fn hard_threshold_at(v: &[f64], threshold: f64) -> Vec<f64> {
    v.iter()
        .map(|&x| if x.abs() >= threshold { x } else { 0.0 })
        .collect()
}

/// The hard-thresholding operator `H_lambda`: entries with magnitude below
/// `sqrt(2 lambda)` become zero, entries at or above it are kept unchanged.
pub fn hard_threshold(beta: &[f64], lambda: f64) -> Vec<f64> {
    assert!(lambda >= 0.0, "hard_threshold requires lambda >= 0");
    hard_threshold_at(beta, (2.0 * lambda).sqrt())
}

/// Indices of the `T` largest entries of `|v|`, ties broken toward the
/// smallest index; returned sorted ascending.
pub fn top_t_indices(v: &[f64], t: usize) -> Vec<usize> {
    assert!(t >= 1 && t <= v.len(), "top_t_indices requires 1 <= T <= p");
    let mut order: Vec<usize> = (0..v.len()).collect();
    let rank = |&i: &usize, &j: &usize| v[j].abs().total_cmp(&v[i].abs()).then_with(|| i.cmp(&j));
    if t < v.len() {
        order.select_nth_unstable_by(t - 1, rank);
        order.truncate(t);
    }
    order.sort_unstable();
    order
}

/// Magnitude of the `T`-th largest entry of `|v|` (`||v||_{T,inf}`).
fn t_th_largest_abs(v: &[f64], t: usize) -> f64 {
    debug_assert!(t >= 1 && t <= v.len());
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    let idx = t - 1;
    mags.select_nth_unstable_by(idx, |a, b| b.total_cmp(a));
    mags[idx]
}

/// Refits the restricted least squares on `active` and refreshes the dual.
fn refit(
    state: &PrimalDualState,
    data: &RegressionData,
    cfg: &SdarConfig,
    active: Vec<usize>,
) -> Result<PrimalDualState> {
    let x_a = data.x.select_columns(&active);
    // Warm start from the previous primal restricted to the new set.
    let x0: Vec<f64> = active.iter().map(|&j| state.beta[j]).collect();
    let cg = cfg.cg_settings(data.p());
    let sol = linalg::cg_solve(&x_a, &data.y, &x0, &cg)
        .map_err(|_| Error::RankDeficientActiveSet(active.clone()))?;

    let mut beta = vec![0.0; data.p()];
    for (&j, &b) in active.iter().zip(&sol.x) {
        beta[j] = b;
    }
    let fitted = x_a.matvec(&sol.x);
    let residual = linalg::sub(&data.y, &fitted);
    let mut d = linalg::correlation(&data.x, &residual)?;
    // The dual vanishes on the active set by construction; the computed
    // values there are only CG residual noise, so pin them to zero and keep
    // the complementarity invariant exact.
    for &j in &active {
        d[j] = 0.0;
    }
    let next = PrimalDualState {
        beta,
        d,
        active,
        k: state.k + 1,
    };
    debug_assert!(next.invariants_hold());
    Ok(next)
}

/// One support-detection + root-finding step from `state`.
pub fn sdar_step(
    state: &PrimalDualState,
    data: &RegressionData,
    cfg: &SdarConfig,
) -> Result<PrimalDualState> {
    cfg.validate(data)?;
    let v: Vec<f64> = state
        .beta
        .iter()
        .zip(&state.d)
        .map(|(b, d)| b + d)
        .collect();
    let active = top_t_indices(&v, cfg.t);
    refit(state, data, cfg, active)
}

/// Initial primal-dual pair for a fit.
fn initial_state(data: &RegressionData, cfg: &SdarConfig) -> Result<PrimalDualState> {
    let beta = cfg.beta0.clone().unwrap_or_else(|| vec![0.0; data.p()]);
    let fitted = data.x.matvec(&beta);
    let residual = linalg::sub(&data.y, &fitted);
    let d = linalg::correlation(&data.x, &residual)?;
    Ok(PrimalDualState {
        beta,
        d,
        active: Vec::new(),
        k: 0,
    })
}

fn run(
    data: &RegressionData,
    cfg: &SdarConfig,
    mut trace: Option<&mut Vec<PrimalDualState>>,
) -> Result<FitResult> {
    cfg.validate(data)?;
    let start = Instant::now();
    let mut state = initial_state(data, cfg)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();

    let status = loop {
        let v: Vec<f64> = state
            .beta
            .iter()
            .zip(&state.d)
            .map(|(b, d)| b + d)
            .collect();
        let candidate = top_t_indices(&v, cfg.t);
        if state.k > 0 && candidate == state.active {
            break Status::Converged;
        }
        if seen.contains(&candidate) {
            break Status::CycleDetected;
        }
        if state.k >= cfg.max_outer_iters {
            break Status::MaxIters;
        }
        seen.insert(candidate.clone());
        state = refit(&state, data, cfg, candidate)?;
        if let Some(t) = trace.as_deref_mut() {
            t.push(state.clone());
        }
    };

    Ok(FitResult {
        residual_norm: data.residual_norm(&state.beta),
        beta: state.beta,
        active: state.active,
        iterations: state.k,
        status,
        wall_time: start.elapsed(),
    })
}

/// Fits a model of size `T` by iterating [`sdar_step`] until the detected
/// active set repeats (`Converged`), revisits an older configuration
/// (`CycleDetected`), or the iteration budget runs out (`MaxIters`).
pub fn sdar_fit(data: &RegressionData, cfg: &SdarConfig) -> Result<FitResult> {
    run(data, cfg, None)
}

/// Like [`sdar_fit`], also returning every refit state in order. Used by the
/// per-iterate error-bound diagnostics.
pub fn sdar_fit_trace(
    data: &RegressionData,
    cfg: &SdarConfig,
) -> Result<(FitResult, Vec<PrimalDualState>)> {
    let mut trace = Vec::new();
    let fit = run(data, cfg, Some(&mut trace))?;
    Ok((fit, trace))
}

/// KKT fixed-point residual of `beta` at support size `T`.
///
/// Computes `d = X'(y - X beta)/n`, sets the threshold to the `T`-th largest
/// magnitude of `beta + d`, and returns `||beta - H(beta + d)||_inf`. A value
/// near zero certifies `beta` as a local minimizer of the l0-penalized
/// least-squares criterion at the implied `lambda`.
pub fn kkt_residual(beta: &[f64], data: &RegressionData, t: usize) -> f64 {
    let fitted = data.x.matvec(beta);
    let residual = linalg::sub(&data.y, &fitted);
    let d = linalg::correlation(&data.x, &residual).expect("dimensions checked by caller");
    let v: Vec<f64> = beta.iter().zip(&d).map(|(b, di)| b + di).collect();
    let threshold = t_th_largest_abs(&v, t.clamp(1, v.len()));
    let projected = hard_threshold_at(&v, threshold);
    beta.iter()
        .zip(&projected)
        .fold(0.0, |m, (b, h)| m.max((b - h).abs()))
}
