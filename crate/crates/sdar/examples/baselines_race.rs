//! Race the solvers on one instance: support detection + root finding
//! against orthogonal matching pursuit, thresholded gradient descent, and an
//! MCP path with HBIC selection.
//!
//! ```bash
//! cargo run --release --example baselines_race
//! ```

use std::time::Instant;

use sdar::asdar::select_model;
use sdar::baselines::{grades_fit, mcp_path_fit, omp_fit, McpConfig};
use sdar::metrics::{exact_support_recovery, relative_error};
use sdar::model::FitResult;
use sdar::sdar::{sdar_fit, SdarConfig};
use sdar::simgen::{generate, CoefMode, DesignKind, SimInstance, SimSpec};

fn row(name: &str, fit: &FitResult, instance: &SimInstance, wall_ms: f64) {
    println!(
        "  {:<8} {:>10.3e}  {:>7}  {:>6}  {:>9.2}  {}",
        name,
        relative_error(&fit.beta, &instance.beta_star).unwrap(),
        exact_support_recovery(&fit.beta, &instance.support),
        fit.iterations,
        wall_ms,
        fit.status
    );
}

fn main() {
    let spec = SimSpec {
        n: 500,
        p: 2000,
        k: 20,
        sigma: 1.0,
        rho: 0.2,
        r: 100.0,
        design: DesignKind::NeighborCorr,
        coef_mode: CoefMode::HeadSupport,
        seed: 3,
    };
    let instance = generate(&spec).expect("valid spec");
    println!(
        "n={} p={} K={} sigma={} rho={} R={} (neighbor-correlated design)\n",
        spec.n, spec.p, spec.k, spec.sigma, spec.rho, spec.r
    );
    println!("  solver      rel_err    exact   iters    wall_ms  status");

    let t0 = Instant::now();
    let fit = sdar_fit(&instance.data, &SdarConfig::new(spec.k)).unwrap();
    row("sdar", &fit, &instance, t0.elapsed().as_secs_f64() * 1e3);

    let t0 = Instant::now();
    let fit = omp_fit(&instance.data, spec.k).unwrap();
    row("omp", &fit, &instance, t0.elapsed().as_secs_f64() * 1e3);

    let t0 = Instant::now();
    let epsilon = (spec.n as f64).sqrt() * spec.sigma;
    let fit = grades_fit(&instance.data, spec.k, 1.0 / 3.0, epsilon, spec.n / 2);
    row("grades", &fit, &instance, t0.elapsed().as_secs_f64() * 1e3);

    let t0 = Instant::now();
    let cfg = McpConfig {
        epsilon: Some(instance.noise_norm),
        ..McpConfig::default()
    };
    let path = mcp_path_fit(&instance.data, &cfg).unwrap();
    let (_, fit) = select_model(&path).unwrap();
    row("mcp", &fit, &instance, t0.elapsed().as_secs_f64() * 1e3);
}
