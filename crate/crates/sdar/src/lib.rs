//! Sparse high-dimensional linear regression by support detection and root
//! finding.
//!
//! The core solver alternates two moves on the l0-penalized least-squares
//! KKT system: detect an active set from the `T` largest entries of
//! `|beta + d|` (primal plus dual information), then solve the restricted
//! least-squares normal equations on it by conjugate gradient. An adaptive
//! wrapper sweeps the support size along a warm-started ladder and picks the
//! model by a high-dimensional BIC. Greedy and thresholding baselines
//! (orthogonal matching pursuit, gradient descent with hard thresholding,
//! an MCP path by iterative thresholding), seeded simulation generators, and
//! brute-force design diagnostics round out the toolkit.
//!
//! Start with the runnable examples (`cargo run --release --example
//! sdar_basic`) or the `sdar` binary's `fit`, `simulate`, `bench`, and
//! `diagnose` subcommands.

pub mod asdar;
pub mod baselines;
pub mod bench;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod plot;
pub mod sdar;
pub mod simgen;

pub use crate::asdar::{asdar_fit, hbic_score, select_model, AsdarConfig};
pub use crate::baselines::{grades_fit, mcp_path_fit, mcp_threshold, omp_fit, McpConfig};
pub use crate::error::{Error, Result};
pub use crate::linalg::{cg_solve, correlation, normalize_columns, CgSettings, DenseMatrix};
pub use crate::model::{
    FitResult, PathEntry, PrimalDualState, RegressionData, SolutionPath, Status,
};
pub use crate::sdar::{hard_threshold, kkt_residual, sdar_fit, sdar_step, SdarConfig};
pub use crate::simgen::{generate, CoefMode, DesignKind, SimInstance, SimSpec};
