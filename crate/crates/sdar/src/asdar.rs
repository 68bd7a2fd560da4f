//! Adaptive SDAR: runs the fixed-size solver over an increasing ladder of
//! support sizes with warm starts, stops early on the residual norm or when
//! the ladder passes `L`, and scores every ladder entry with HBIC for model
//! selection.

use crate::error::{Error, Result};
use crate::model::{FitResult, PathEntry, RegressionData, SolutionPath};
use crate::sdar::{sdar_fit, SdarConfig};

/// Configuration for the adaptive ladder.
#[derive(Debug, Clone)]
pub struct AsdarConfig {
    /// Ladder increment: entry `k` fits a model of size `tau * k`.
    pub tau: usize,
    /// Largest model size to consider; `floor(n / ln n)` when absent.
    pub l: Option<usize>,
    /// Residual early stop: the ladder ends once `||y - X beta||_2 <= epsilon`.
    /// Defaults to `sqrt(n) * sigma` when the noise level is known; a
    /// non-finite value disables the residual stop.
    pub epsilon: Option<f64>,
    /// Hard safeguard on the model size independent of `l`.
    pub max_t: Option<usize>,
    /// Score entries with HBIC (selection via [`select_model`]).
    pub hbic: bool,
    /// Grow the ladder geometrically (`tau, 2tau, 4tau, ...`) instead of
    /// arithmetically.
    pub geometric: bool,
    /// Outer-iteration budget for each inner fit.
    pub max_outer_iters: usize,
}

impl Default for AsdarConfig {
    fn default() -> Self {
        Self {
            tau: 1,
            l: None,
            epsilon: None,
            max_t: None,
            hbic: true,
            geometric: false,
            max_outer_iters: 100,
        }
    }
}

impl AsdarConfig {
    pub fn with_tau(tau: usize) -> Self {
        Self {
            tau,
            ..Self::default()
        }
    }
}

/// Default ladder cap `floor(n / ln n)`, the largest model size that can be
/// consistently estimated with `n` observations.
pub fn default_ladder_cap(n: usize) -> usize {
    if n < 3 {
        return 1;
    }
    ((n as f64) / (n as f64).ln()).floor() as usize
}

/// Runs the SDAR ladder and returns the scored solution path.
///
/// Entry `k` fits a model of size `tau * k`, warm-started from the previous
/// entry's coefficients. A failed entry records its error and the ladder
/// continues from the last successful warm start.
pub fn asdar_fit(data: &RegressionData, cfg: &AsdarConfig) -> Result<SolutionPath> {
    if cfg.tau == 0 {
        return Err(Error::InvalidConfig("tau must be >= 1".into()));
    }
    let l = cfg.l.unwrap_or_else(|| default_ladder_cap(data.n()));
    if l < cfg.tau {
        return Err(Error::InvalidConfig(format!(
            "ladder cap L = {l} is below tau = {}",
            cfg.tau
        )));
    }
    let hard_cap = (data.n().saturating_sub(1)).min(data.p());
    let t_max = l.min(cfg.max_t.unwrap_or(hard_cap)).min(hard_cap);
    let epsilon = cfg
        .epsilon
        .or_else(|| data.sigma_hint.map(|s| (data.n() as f64).sqrt() * s));

    let mut warm: Vec<f64> = vec![0.0; data.p()];
    let mut entries = Vec::new();
    for k in 1.. {
        let t = if cfg.geometric {
            match cfg.tau.checked_shl(k as u32 - 1) {
                Some(t) => t,
                None => break,
            }
        } else {
            cfg.tau * k
        };
        if t > t_max {
            break;
        }
        let sdar_cfg = SdarConfig {
            t,
            max_outer_iters: cfg.max_outer_iters,
            beta0: Some(warm.clone()),
            cg: None,
        };
        match sdar_fit(data, &sdar_cfg) {
            Ok(fit) => {
                let hbic = cfg.hbic.then(|| hbic_score(&fit, data));
                // The floor lets an exact fit trip a zero epsilon: CG leaves
                // rounding-level residuals even on noiseless data.
                let floor = 1e-12 * crate::linalg::norm2(&data.y);
                let stop = epsilon
                    .map(|e| e.is_finite() && fit.residual_norm <= e.max(floor))
                    .unwrap_or(false);
                warm = fit.beta.clone();
                entries.push(PathEntry {
                    t,
                    fit: Some(fit),
                    hbic,
                    error: None,
                });
                if stop {
                    break;
                }
            }
            Err(e) => {
                entries.push(PathEntry {
                    t,
                    fit: None,
                    hbic: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    Ok(SolutionPath { entries })
}

/// High-dimensional BIC of a fit:
/// `ln(RSS/n) + |A| * ln(ln n) * ln(p) / n`.
///
/// A zero residual returns negative infinity so that, combined with the
/// smaller-size tie rule in [`select_model`], the sparsest perfect fit wins.
pub fn hbic_score(fit: &FitResult, data: &RegressionData) -> f64 {
    let n = data.n() as f64;
    let p = data.p() as f64;
    let rss = fit.residual_norm * fit.residual_norm;
    if rss <= 0.0 {
        return f64::NEG_INFINITY;
    }
    (rss / n).ln() + fit.active.len() as f64 * n.ln().ln() * p.ln() / n
}

/// Picks the path entry with the smallest HBIC; ties resolve toward the
/// smaller model size.
pub fn select_model(path: &SolutionPath) -> Result<(usize, FitResult)> {
    let mut best: Option<(usize, &FitResult, f64)> = None;
    for entry in &path.entries {
        let (Some(fit), Some(score)) = (&entry.fit, entry.hbic) else {
            continue;
        };
        let better = match best {
            None => true,
            Some((_, _, best_score)) => score < best_score,
        };
        if better {
            best = Some((entry.t, fit, score));
        }
    }
    best.map(|(t, fit, _)| (t, fit.clone()))
        .ok_or(Error::EmptyPath)
}
