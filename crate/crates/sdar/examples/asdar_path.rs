//! Sweep the support size adaptively when the sparsity level is unknown.
//!
//! Runs the warm-started ladder T = 1, 2, 3, ... with residual early
//! stopping, prints the scored path, and selects the model with the smallest
//! high-dimensional BIC.
//!
//! ```bash
//! cargo run --release --example asdar_path
//! ```

use sdar::asdar::{asdar_fit, select_model, AsdarConfig};
use sdar::metrics::support;
use sdar::simgen::{generate, CoefMode, DesignKind, SimSpec};

fn main() {
    let spec = SimSpec {
        n: 500,
        p: 1000,
        k: 8,
        sigma: 0.5,
        rho: 0.1,
        r: 10.0,
        design: DesignKind::Ar1,
        coef_mode: CoefMode::RandomSupport,
        seed: 21,
    };
    let instance = generate(&spec).expect("valid spec");
    println!("true support size K = {} (unknown to the solver)", spec.k);

    // sigma_hint is carried by the generated data, so the ladder stops once
    // the residual reaches sqrt(n) * sigma.
    let path = asdar_fit(&instance.data, &AsdarConfig::default()).expect("ladder runs");
    println!("\n    T  residual      HBIC       status");
    for entry in &path.entries {
        match (&entry.fit, entry.hbic) {
            (Some(fit), Some(hbic)) => println!(
                "  {:3}  {:+.4e}  {:+.5}  {}",
                entry.t, fit.residual_norm, hbic, fit.status
            ),
            _ => println!(
                "  {:3}  failed: {}",
                entry.t,
                entry.error.as_deref().unwrap_or("unknown")
            ),
        }
    }

    let (t_hat, fit) = select_model(&path).expect("nonempty path");
    println!("\nselected T = {t_hat}");
    println!("selected support: {:?}", support(&fit.beta));
    println!("true support:     {:?}", instance.support);
}
