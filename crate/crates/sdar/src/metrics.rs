//! Evaluation metrics and replication aggregation for simulation studies.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::linalg::{norm2, sub};

/// `||beta_hat - beta*||_2 / ||beta*||_2`
pub fn relative_error(beta_hat: &[f64], beta_star: &[f64]) -> Result<f64> {
    if beta_hat.len() != beta_star.len() {
        return Err(Error::DimensionMismatch {
            what: "relative_error lengths",
            expected: beta_star.len(),
            got: beta_hat.len(),
        });
    }
    let denom = norm2(beta_star);
    if denom == 0.0 {
        return Err(Error::ZeroTruth);
    }
    Ok(norm2(&sub(beta_hat, beta_star)) / denom)
}

/// Nonzero indices of a coefficient vector, sorted ascending.
pub fn support(beta: &[f64]) -> Vec<usize> {
    beta.iter()
        .enumerate()
        .filter(|(_, b)| **b != 0.0)
        .map(|(j, _)| j)
        .collect()
}

/// True exactly when `supp(beta_hat)` equals `a_star` (sorted indices).
pub fn exact_support_recovery(beta_hat: &[f64], a_star: &[usize]) -> bool {
    support(beta_hat) == a_star
}

/// One replication's worth of results.
#[derive(Debug, Clone)]
pub struct RepRecord {
    pub rel_err: f64,
    pub exact_support: bool,
    pub iterations: usize,
    pub wall: Duration,
}

/// Replication summary: means, spreads, and rates across a simulation cell.
#[derive(Debug, Clone)]
pub struct RepSummary {
    pub rel_err_mean: f64,
    /// Sample standard deviation (divisor `n - 1`; zero for a single rep).
    pub rel_err_sd: f64,
    pub exact_support_rate: f64,
    pub mean_iterations: f64,
    pub mean_wall_time: Duration,
    pub n_reps: usize,
}

/// Means, sample SDs, and recovery rate over a nonempty replication set.
pub fn aggregate(records: &[RepRecord]) -> Result<RepSummary> {
    if records.is_empty() {
        return Err(Error::Empty);
    }
    let n = records.len() as f64;
    let rel_err_mean = records.iter().map(|r| r.rel_err).sum::<f64>() / n;
    let rel_err_sd = if records.len() < 2 {
        0.0
    } else {
        let ss = records
            .iter()
            .map(|r| (r.rel_err - rel_err_mean).powi(2))
            .sum::<f64>();
        (ss / (n - 1.0)).sqrt()
    };
    let exact_support_rate = records.iter().filter(|r| r.exact_support).count() as f64 / n;
    let mean_iterations = records.iter().map(|r| r.iterations as f64).sum::<f64>() / n;
    let mean_wall_time = records.iter().map(|r| r.wall).sum::<Duration>().div_f64(n);
    Ok(RepSummary {
        rel_err_mean,
        rel_err_sd,
        exact_support_rate,
        mean_iterations,
        mean_wall_time,
        n_reps: records.len(),
    })
}
