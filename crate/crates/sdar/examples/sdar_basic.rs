//! Fit a single sparse model with a known support size.
//!
//! Generates a correlated Gaussian design with 10 active coefficients out of
//! 1000, runs the support-detection solver with T = 10, and checks the result
//! against the truth and the KKT fixed-point condition.
//!
//! ```bash
//! cargo run --release --example sdar_basic
//! ```

use sdar::diagnostics::oracle_estimator;
use sdar::metrics::{exact_support_recovery, relative_error};
use sdar::sdar::{kkt_residual, sdar_fit, SdarConfig};
use sdar::simgen::{generate, CoefMode, DesignKind, SimSpec};

fn main() {
    let spec = SimSpec {
        n: 500,
        p: 1000,
        k: 10,
        sigma: 0.5,
        rho: 0.3,
        r: 10.0,
        design: DesignKind::Ar1,
        coef_mode: CoefMode::RandomSupport,
        seed: 7,
    };
    let instance = generate(&spec).expect("valid spec");
    println!(
        "instance: n={} p={} K={} sigma={} rho={} (AR(1) design)",
        spec.n, spec.p, spec.k, spec.sigma, spec.rho
    );
    println!("true support: {:?}", instance.support);

    let fit = sdar_fit(&instance.data, &SdarConfig::new(spec.k)).expect("solver runs");
    println!("\nstatus: {} after {} refits", fit.status, fit.iterations);
    println!("fitted support: {:?}", fit.active);
    println!(
        "exact support recovery: {}",
        exact_support_recovery(&fit.beta, &instance.support)
    );
    println!(
        "relative l2 error: {:.3e}",
        relative_error(&fit.beta, &instance.beta_star).unwrap()
    );
    println!(
        "KKT fixed-point residual: {:.3e}",
        kkt_residual(&fit.beta, &instance.data, spec.k)
    );

    // The converged fit should coincide with least squares on the true
    // support (the oracle estimator).
    let oracle = oracle_estimator(&instance.data, &instance.support).unwrap();
    let gap = fit
        .beta
        .iter()
        .zip(&oracle)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("distance to the oracle refit: {:.3e}", gap);
}
