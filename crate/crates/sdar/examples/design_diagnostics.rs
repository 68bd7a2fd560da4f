//! Brute-force regularity diagnostics for a small design matrix.
//!
//! Computes the mutual coherence, the sparse spectrum bounds c-(s)/c+(s),
//! the sparse orthogonality constant, and the contraction factors gamma and
//! gamma_mu that govern recovery guarantees. These are exact subset
//! enumerations and are guarded to desk scale.
//!
//! ```bash
//! cargo run --release --example design_diagnostics
//! ```

use sdar::diagnostics::{
    gamma_factor, gamma_mu_factor, mutual_coherence, sparse_orthogonality, src_profile,
};
use sdar::simgen::gen_design_ar1;

fn main() {
    let (n, p, t) = (40, 12, 3);
    for rho in [0.0, 0.3, 0.6] {
        let x = gen_design_ar1(n, p, rho, 11);
        println!("AR(1) design, n={n}, p={p}, rho={rho}");
        let mu = mutual_coherence(&x);
        println!("  mutual coherence mu = {mu:.4}");

        let profile = src_profile(&x, 2 * t).expect("within the enumeration budget");
        for (s, (lo, hi)) in &profile {
            println!("  c-({s}) = {lo:.4}   c+({s}) = {hi:.4}");
        }

        let theta = sparse_orthogonality(&x, t, t).expect("within the enumeration budget");
        let c_minus_t = profile[&t].0;
        let gamma = gamma_factor(theta, c_minus_t);
        println!("  theta_{{{t},{t}}} = {theta:.4}");
        println!(
            "  gamma = {gamma:.4}  (l2 contraction requires gamma < 1: {})",
            if gamma < 1.0 { "holds" } else { "fails" }
        );
        match gamma_mu_factor(t, mu) {
            Ok(gm) => println!(
                "  gamma_mu = {gm:.4}  (coherence condition T*mu <= 1/4: {})",
                if t as f64 * mu <= 0.25 {
                    "holds"
                } else {
                    "fails"
                }
            ),
            Err(e) => println!("  gamma_mu undefined: {e}"),
        }
        println!();
    }
}
