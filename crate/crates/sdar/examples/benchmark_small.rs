//! Run a small seeded benchmark programmatically and write the results CSV
//! plus SVG plots (the same machinery behind `sdar bench`).
//!
//! ```bash
//! cargo run --release --example benchmark_small
//! ```

use sdar::bench::{self, BenchSetting, RepTag, SolverKind};
use sdar::plot::{write_line_plot, Series};
use sdar::simgen::{CoefMode, DesignKind, SimSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Sparsity sweep at a size small enough to finish in seconds.
    let settings: Vec<BenchSetting> = (2..=10)
        .step_by(2)
        .map(|k| BenchSetting {
            preset: "example-sweep".into(),
            spec: SimSpec {
                n: 150,
                p: 400,
                k,
                sigma: 0.2,
                rho: 0.1,
                r: 10.0,
                design: DesignKind::Ar1,
                coef_mode: CoefMode::RandomSupport,
                seed: 0,
            },
            t: Some(k),
            tau: 1,
            solvers: vec![SolverKind::Sdar, SolverKind::Omp, SolverKind::Grades],
        })
        .collect();

    let rows = bench::run_settings(&settings, 25, 2024)?;
    let dir = std::env::temp_dir().join("sdar_benchmark_small");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("results.csv");
    bench::write_csv(&csv, &rows)?;
    println!("wrote {} ({} rows)", csv.display(), rows.len());

    println!("\n  K  solver   mean rel_err  recovery  mean iters");
    let mut series: std::collections::BTreeMap<String, Vec<(f64, f64)>> = Default::default();
    for row in rows.iter().filter(|r| r.rep == RepTag::Mean) {
        println!(
            "  {:>2}  {:<7} {:>12.3e}  {:>8.2}  {:>10.2}",
            row.k,
            row.solver.to_string(),
            row.rel_err.unwrap_or(f64::NAN),
            row.exact_support.unwrap_or(f64::NAN),
            row.iterations.unwrap_or(f64::NAN),
        );
        series
            .entry(row.solver.to_string())
            .or_default()
            .push((row.k as f64, row.exact_support.unwrap_or(f64::NAN)));
    }

    let curves: Vec<Series> = series
        .into_iter()
        .map(|(label, points)| Series { label, points })
        .collect();
    let svg = dir.join("recovery.svg");
    write_line_plot(&svg, "exact support recovery", "K", "rate", &curves)?;
    println!("\nwrote {}", svg.display());
    Ok(())
}
