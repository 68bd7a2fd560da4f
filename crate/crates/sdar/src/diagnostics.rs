//! Computable regularity diagnostics for a design matrix: mutual coherence,
//! sparse spectrum bounds, sparse orthogonality, the contraction factors they
//! induce, oracle refits, and high-probability error bounds.
//!
//! The subset quantities are exact brute-force computations and are guarded
//! to desk scale; they exist to check theory on small instances, not to run
//! in production fits.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eig_range, DenseMatrix};
use crate::model::RegressionData;
use crate::sdar::top_t_indices;

/// Largest number of enumerated subsets (or subset pairs) a brute-force
/// quantity may touch.
pub const BRUTE_FORCE_BUDGET: u128 = 1_000_000;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Mutual coherence: the largest off-diagonal magnitude of `X'X/n`.
pub fn mutual_coherence(x: &DenseMatrix) -> f64 {
    assert!(
        x.n_cols() >= 2,
        "mutual coherence needs at least two columns"
    );
    let inv_n = 1.0 / x.n_rows() as f64;
    let mut mu: f64 = 0.0;
    for j in 0..x.n_cols() {
        for i in 0..j {
            mu = mu.max((linalg::dot(x.col(i), x.col(j)) * inv_n).abs());
        }
    }
    mu
}

fn choose(p: usize, k: usize) -> u128 {
    if k > p {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((p - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of subsets of size 1..=s among p columns.
pub fn subset_count(p: usize, s: usize) -> u128 {
    (1..=s.min(p)).map(|k| choose(p, k)).sum()
}

/// Visits every size-`k` subset of `0..p` in lexicographic order.
fn for_each_combination<F: FnMut(&[usize])>(p: usize, k: usize, f: &mut F) {
    if k == 0 || k > p {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == p - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Restricted Gram block `X_A' X_B / n` in column-major order (|A| x |B|).
fn gram_block(x: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    let inv_n = 1.0 / x.n_rows() as f64;
    let mut g = vec![0.0; rows.len() * cols.len()];
    for (jj, &j) in cols.iter().enumerate() {
        for (ii, &i) in rows.iter().enumerate() {
            g[jj * rows.len() + ii] = linalg::dot(x.col(i), x.col(j)) * inv_n;
        }
    }
    g
}

/// Exact sparse spectrum bounds of order `s`: the extreme eigenvalues of
/// `X_A'X_A/n` over every column subset with `|A| <= s`.
pub fn src_constants(x: &DenseMatrix, s: usize) -> Result<(f64, f64)> {
    let profile = src_profile(x, s)?;
    profile
        .get(&s.min(x.n_cols()))
        .copied()
        .ok_or_else(|| Error::InvalidConfig("src_constants needs s >= 1".into()))
}

/// Sparse spectrum bounds for every order `1..=s_max`, in one enumeration
/// pass. Entry `s` holds `(c_minus(s), c_plus(s))`.
pub fn src_profile(x: &DenseMatrix, s_max: usize) -> Result<BTreeMap<usize, (f64, f64)>> {
    let p = x.n_cols();
    let s_max = s_max.min(p);
    let count = subset_count(p, s_max);
    if count > BRUTE_FORCE_BUDGET {
        return Err(Error::TooLarge {
            subsets: count,
            budget: BRUTE_FORCE_BUDGET,
        });
    }
    let mut profile = BTreeMap::new();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in 1..=s_max {
        for_each_combination(p, s, &mut |subset| {
            let g = gram_block(x, subset, subset);
            let (a, b) = sym_eig_range(&g, s);
            lo = lo.min(a);
            hi = hi.max(b);
        });
        profile.insert(s, (lo, hi));
    }
    Ok(profile)
}

/// Number of disjoint subset pairs with `|A| <= a`, `|B| <= b`.
pub fn pair_count(p: usize, a: usize, b: usize) -> u128 {
    let mut total: u128 = 0;
    for i in 1..=a.min(p) {
        let rest = p - i;
        total = total.saturating_add(
            choose(p, i).saturating_mul((1..=b.min(rest)).map(|j| choose(rest, j)).sum()),
        );
    }
    total
}

/// Exact sparse orthogonality constant: the largest spectral norm of
/// `X_A'X_B/n` over disjoint subsets with `|A| <= a`, `|B| <= b`.
pub fn sparse_orthogonality(x: &DenseMatrix, a: usize, b: usize) -> Result<f64> {
    let p = x.n_cols();
    if a == 0 || b == 0 || a + b > p {
        return Err(Error::InvalidConfig(format!(
            "sparse orthogonality needs a, b >= 1 and a + b <= p (got a={a}, b={b}, p={p})"
        )));
    }
    let count = pair_count(p, a, b);
    if count > BRUTE_FORCE_BUDGET {
        return Err(Error::TooLarge {
            subsets: count,
            budget: BRUTE_FORCE_BUDGET,
        });
    }
    let mut theta: f64 = 0.0;
    for i in 1..=a {
        for_each_combination(p, i, &mut |set_a| {
            let complement: Vec<usize> = (0..p).filter(|j| !set_a.contains(j)).collect();
            for j in 1..=b.min(complement.len()) {
                for_each_combination(complement.len(), j, &mut |pick| {
                    let set_b: Vec<usize> = pick.iter().map(|&t| complement[t]).collect();
                    theta = theta.max(spectral_norm_block(x, set_a, &set_b));
                });
            }
        });
    }
    Ok(theta)
}

/// Spectral norm of `X_A'X_B/n` via the symmetric product on the smaller side.
fn spectral_norm_block(x: &DenseMatrix, set_a: &[usize], set_b: &[usize]) -> f64 {
    let (rows, cols) = if set_a.len() <= set_b.len() {
        (set_b, set_a)
    } else {
        (set_a, set_b)
    };
    let m = gram_block(x, rows, cols); // rows.len() x cols.len()
    let k = cols.len();
    // M'M is k x k.
    let mut mtm = vec![0.0; k * k];
    for j in 0..k {
        for i in 0..=j {
            let mut acc = 0.0;
            for r in 0..rows.len() {
                acc += m[i * rows.len() + r] * m[j * rows.len() + r];
            }
            mtm[j * k + i] = acc;
            mtm[i * k + j] = acc;
        }
    }
    let (_, top) = sym_eig_range(&mtm, k);
    top.max(0.0).sqrt()
}

/// Contraction factor under the sparse spectrum bounds:
/// `gamma = (2 theta + (1 + sqrt(2)) theta^2) / c_minus^2 + (1 + sqrt(2)) theta / c_minus`.
pub fn gamma_factor(theta_tt: f64, c_minus_t: f64) -> f64 {
    assert!(c_minus_t > 0.0, "gamma_factor requires c_minus > 0");
    (2.0 * theta_tt + (1.0 + SQRT_2) * theta_tt * theta_tt) / (c_minus_t * c_minus_t)
        + (1.0 + SQRT_2) * theta_tt / c_minus_t
}

/// The constants of the per-iterate l2 error bound
/// `||beta^{k+1} - beta~|| <= b1 gamma^k ||beta~|| + b2 h_{2,T}`.
#[derive(Debug, Clone, Copy)]
pub struct ContractionConstants {
    pub gamma: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Evaluates `gamma`, `b1 = 1 + theta/c`, and
/// `b2 = gamma b1 / ((1 - gamma) theta) + 1/c`, with the `gamma/theta` ratio
/// expanded symbolically so the orthogonal case `theta = 0` stays finite.
pub fn contraction_constants(theta_tt: f64, c_minus_t: f64) -> ContractionConstants {
    let gamma = gamma_factor(theta_tt, c_minus_t);
    let b1 = 1.0 + theta_tt / c_minus_t;
    let gamma_over_theta =
        (2.0 + (1.0 + SQRT_2) * theta_tt) / (c_minus_t * c_minus_t) + (1.0 + SQRT_2) / c_minus_t;
    let b2 = gamma_over_theta * b1 / (1.0 - gamma) + 1.0 / c_minus_t;
    ContractionConstants { gamma, b1, b2 }
}

/// Coherence-based contraction factor
/// `gamma_mu = (1 + 2 T mu) T mu / (1 - (T-1) mu) + 2 T mu`.
pub fn gamma_mu_factor(t: usize, mu: f64) -> Result<f64> {
    let tm1_mu = (t.saturating_sub(1)) as f64 * mu;
    if tm1_mu >= 1.0 {
        return Err(Error::DenominatorVanishes(tm1_mu));
    }
    let t_mu = t as f64 * mu;
    Ok((1.0 + 2.0 * t_mu) * t_mu / (1.0 - tm1_mu) + 2.0 * t_mu)
}

/// Least squares restricted to `a_star` with zeros elsewhere, solved by a
/// direct dense factorization (an independent route from the CG refits used
/// inside the solvers).
pub fn oracle_estimator(data: &RegressionData, a_star: &[usize]) -> Result<Vec<f64>> {
    let mut beta = vec![0.0; data.p()];
    if a_star.is_empty() {
        return Ok(beta);
    }
    if a_star.len() >= data.n() {
        return Err(Error::InvalidConfig(
            "oracle support must be smaller than n".into(),
        ));
    }
    let x_a = data.x.select_columns(a_star);
    let coef = linalg::cholesky_solve(&x_a, &data.y)
        .map_err(|_| Error::RankDeficientActiveSet(a_star.to_vec()))?;
    for (&j, &b) in a_star.iter().zip(&coef) {
        beta[j] = b;
    }
    Ok(beta)
}

/// Indices of the `J` largest magnitudes of `beta_star` (the important
/// predictors), sorted ascending.
pub fn top_j_support(beta_star: &[f64], j: usize) -> Vec<usize> {
    top_t_indices(beta_star, j.clamp(1, beta_star.len()))
}

/// Magnitude of the components outside the top-`J` support:
/// `||tail||_2 + ||tail||_1 / sqrt(J)`.
pub fn r_j_measure(beta_star: &[f64], j: usize) -> f64 {
    let head = top_j_support(beta_star, j);
    let mut in_head = vec![false; beta_star.len()];
    for &i in &head {
        in_head[i] = true;
    }
    let mut l2 = 0.0;
    let mut l1 = 0.0;
    for (i, &b) in beta_star.iter().enumerate() {
        if !in_head[i] {
            l2 += b * b;
            l1 += b.abs();
        }
    }
    l2.sqrt() + l1 / (j as f64).sqrt()
}

/// Relative magnitude `R = max|beta_i| / min|beta_i|` over the top-`J`
/// support; infinite when the support holds a zero entry (J larger than the
/// true sparsity).
pub fn relative_magnitude(beta_star: &[f64], j: usize) -> f64 {
    let head = top_j_support(beta_star, j);
    let mut smallest = f64::INFINITY;
    let mut largest: f64 = 0.0;
    for &i in &head {
        smallest = smallest.min(beta_star[i].abs());
        largest = largest.max(beta_star[i].abs());
    }
    if smallest == 0.0 {
        f64::INFINITY
    } else {
        largest / smallest
    }
}

/// The noise functional `h_{2,T} = max_{|A| <= T} ||X_A' e||_2 / n`.
///
/// Because `X_A'e` is just the subvector of `X'e` indexed by `A`, the
/// maximum is the l2 norm of the `T` largest magnitudes -- exact without any
/// subset enumeration.
pub fn noise_l2_functional(x: &DenseMatrix, noise: &[f64], t: usize) -> f64 {
    let v = x.t_matvec(noise);
    let mut mags: Vec<f64> = v.iter().map(|c| c * c).collect();
    let t = t.clamp(1, mags.len());
    mags.select_nth_unstable_by(t - 1, |a, b| b.total_cmp(a));
    (mags[..t].iter().sum::<f64>()).sqrt() / x.n_rows() as f64
}

/// `h_{inf,T} = max_{|A| <= T} ||X_A' e||_inf / n`, which is the global
/// maximum correlation magnitude regardless of `T`.
pub fn noise_linf_functional(x: &DenseMatrix, noise: &[f64]) -> f64 {
    linalg::norm_inf(&x.t_matvec(noise)) / x.n_rows() as f64
}

/// The assembled regularity report for one design (and optionally one truth).
#[derive(Debug, Clone)]
pub struct RecoveryDiagnostics {
    pub mu: f64,
    /// `s -> c_minus(s)` for every enumerated order.
    pub c_minus: BTreeMap<usize, f64>,
    /// `s -> c_plus(s)` for every enumerated order.
    pub c_plus: BTreeMap<usize, f64>,
    /// `(a, b) -> theta_{a,b}` for every enumerated pair of orders.
    pub theta: BTreeMap<(usize, usize), f64>,
    pub gamma: Option<f64>,
    pub gamma_mu: Option<f64>,
    pub r: Option<f64>,
    pub r_j: Option<f64>,
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    pub j: usize,
}

impl RecoveryDiagnostics {
    /// Brute-forces the full report. `beta_star` unlocks the truth-dependent
    /// quantities (`R`, `R_J`, and with `sigma` the error bounds).
    pub fn compute(
        x: &DenseMatrix,
        beta_star: Option<&[f64]>,
        t: usize,
        j: usize,
        alpha: f64,
        sigma: Option<f64>,
    ) -> Result<Self> {
        let mu = mutual_coherence(x);
        let s_max = (2 * t).min(x.n_cols());
        let profile = src_profile(x, s_max)?;
        let mut c_minus = BTreeMap::new();
        let mut c_plus = BTreeMap::new();
        for (s, (lo, hi)) in &profile {
            c_minus.insert(*s, *lo);
            c_plus.insert(*s, *hi);
        }
        let mut theta = BTreeMap::new();
        let theta_tt = sparse_orthogonality(x, t, t)?;
        theta.insert((t, t), theta_tt);

        let gamma = c_minus.get(&t).map(|&c| gamma_factor(theta_tt, c));
        let gamma_mu = gamma_mu_factor(t, mu).ok();

        let mut diag = Self {
            mu,
            c_minus,
            c_plus,
            theta,
            gamma,
            gamma_mu,
            r: None,
            r_j: None,
            eps1: None,
            eps2: None,
            j,
        };
        if let Some(beta) = beta_star {
            diag.r = Some(relative_magnitude(beta, j));
            diag.r_j = Some(r_j_measure(beta, j));
            if let Some(sigma) = sigma {
                let (e1, e2) = error_bounds(&diag, sigma, x.n_rows(), x.n_cols(), t, j, alpha)?;
                diag.eps1 = Some(e1);
                diag.eps2 = Some(e2);
            }
        }
        Ok(diag)
    }
}

/// High-probability error levels:
/// `eps1 = c_plus(J) R_J + sigma sqrt(T) sqrt(2 ln(p/alpha)/n)` and
/// `eps2 = (1 + (T-1) mu) R_J + sigma sqrt(2 ln(p/alpha)/n)`,
/// each valid with probability at least `1 - 2 alpha`.
pub fn error_bounds(
    diag: &RecoveryDiagnostics,
    sigma: f64,
    n: usize,
    p: usize,
    t: usize,
    j: usize,
    alpha: f64,
) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidConfig("alpha must lie in (0, 1/2)".into()));
    }
    let r_j = diag
        .r_j
        .ok_or_else(|| Error::InvalidConfig("error bounds need R_J (pass beta_star)".into()))?;
    let c_plus_j = diag
        .c_plus
        .get(&j.min(p))
        .copied()
        .ok_or_else(|| Error::InvalidConfig(format!("c_plus({j}) was not enumerated")))?;
    let tail = (2.0 * (p as f64 / alpha).ln() / n as f64).sqrt();
    let eps1 = c_plus_j * r_j + sigma * (t as f64).sqrt() * tail;
    let eps2 = (1.0 + (t.saturating_sub(1)) as f64 * diag.mu) * r_j + sigma * tail;
    Ok((eps1, eps2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::normalize_columns;
    use crate::simgen::NormalSource;

    fn random_normalized(n: usize, p: usize, seed: u64) -> DenseMatrix {
        let mut src = NormalSource::new(seed);
        let cols: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..n).map(|_| src.sample()).collect())
            .collect();
        let raw = DenseMatrix::from_columns(&cols).unwrap();
        normalize_columns(&raw).unwrap().0
    }

    #[test]
    fn coherence_of_orthogonal_and_duplicated_columns() {
        assert_eq!(mutual_coherence(&DenseMatrix::scaled_identity(4)), 0.0);
        let col = vec![1.0, -1.0, 1.0];
        let dup = DenseMatrix::from_columns(&[col.clone(), col]).unwrap();
        assert!((mutual_coherence(&dup) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_matches_prescribed_inner_product() {
        // Two columns with <X1, X2>/n = 0.3 exactly: X1 = sqrt(n) e1-ish,
        // built from an orthonormal pair u, v as X2 = a u + b v.
        let n = 4;
        let u = vec![1.0, 1.0, 1.0, 1.0]; // norm 2 = sqrt(n)
        let v = vec![1.0, -1.0, 1.0, -1.0];
        let a: f64 = 0.3;
        let b = (1.0 - a * a).sqrt();
        let x2: Vec<f64> = u.iter().zip(&v).map(|(ui, vi)| a * ui + b * vi).collect();
        let x = DenseMatrix::from_columns(&[u, x2]).unwrap();
        let (x, _) = normalize_columns(&x).unwrap();
        assert!(
            (mutual_coherence(&x) - 0.3).abs() < 1e-12,
            "{}",
            mutual_coherence(&x)
        );
        let _ = n;
    }

    #[test]
    fn src_is_exactly_one_for_orthogonal_designs() {
        let x = DenseMatrix::scaled_identity(6);
        for s in 1..=4 {
            let (lo, hi) = src_constants(&x, s).unwrap();
            assert!((lo - 1.0).abs() < 1e-12);
            assert!((hi - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn src_of_order_one_is_always_unit() {
        let x = random_normalized(15, 8, 2);
        let (lo, hi) = src_constants(&x, 1).unwrap();
        assert!((lo - 1.0).abs() < 1e-10);
        assert!((hi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn src_guard_rejects_huge_enumerations() {
        let x = random_normalized(4, 60, 3);
        assert!(matches!(src_profile(&x, 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn theta_on_two_columns_equals_coherence() {
        let x = random_normalized(12, 2, 4);
        let theta = sparse_orthogonality(&x, 1, 1).unwrap();
        assert!((theta - mutual_coherence(&x)).abs() < 1e-12);
    }

    #[test]
    fn theta_vanishes_for_orthogonal_designs() {
        let x = DenseMatrix::scaled_identity(5);
        assert!(sparse_orthogonality(&x, 2, 2).unwrap() < 1e-12);
    }

    #[test]
    fn gamma_factor_matches_hand_evaluation() {
        assert_eq!(gamma_factor(0.0, 1.0), 0.0);
        let g = gamma_factor(0.1, 1.0);
        assert!((g - 0.4655634918610405).abs() < 1e-12);
        // Monotone in theta on a grid.
        let mut prev = 0.0;
        for i in 1..=20 {
            let g = gamma_factor(i as f64 * 0.02, 0.9);
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn gamma_mu_matches_hand_evaluation() {
        assert_eq!(gamma_mu_factor(5, 0.0).unwrap(), 0.0);
        let g = gamma_mu_factor(1, 0.25).unwrap();
        assert!((g - 0.875).abs() < 1e-15);
        assert!(matches!(
            gamma_mu_factor(6, 0.2),
            Err(Error::DenominatorVanishes(_))
        ));
    }

    #[test]
    fn coherence_condition_implies_contraction() {
        // Whenever T mu <= 1/4, gamma_mu < 1.
        for t in 1..=100 {
            let mu = 0.25 / t as f64;
            let g = gamma_mu_factor(t, mu).unwrap();
            assert!(g < 1.0, "T = {t}: gamma_mu = {g}");
        }
    }

    #[test]
    fn contraction_constants_stay_finite_at_theta_zero() {
        let c = contraction_constants(0.0, 1.0);
        assert_eq!(c.gamma, 0.0);
        assert_eq!(c.b1, 1.0);
        // gamma/theta -> 2/c^2 + (1+sqrt2)/c as theta -> 0.
        let expected_b2 = (2.0 + (1.0 + SQRT_2)) * 1.0 + 1.0;
        assert!((c.b2 - expected_b2).abs() < 1e-12);
    }

    #[test]
    fn oracle_recovers_noiseless_truth() {
        let x = random_normalized(20, 6, 5);
        let mut beta_star = vec![0.0; 6];
        beta_star[1] = 2.0;
        beta_star[4] = -0.5;
        let y = x.matvec(&beta_star);
        let data = RegressionData::new(x, y, None).unwrap();
        let beta = oracle_estimator(&data, &[1, 4]).unwrap();
        for (b, t) in beta.iter().zip(&beta_star) {
            assert!((b - t).abs() < 1e-10);
        }
        assert_eq!(oracle_estimator(&data, &[]).unwrap(), vec![0.0; 6],);
    }

    #[test]
    fn oracle_rejects_duplicated_columns() {
        let col: Vec<f64> = vec![1.0, 1.0, -1.0, 1.0];
        let x = DenseMatrix::from_columns(&[col.clone(), col, vec![1.0, -1.0, 1.0, 1.0]]).unwrap();
        let (x, _) = normalize_columns(&x).unwrap();
        let data = RegressionData::new(x, vec![1.0, 0.0, 0.0, 0.0], None).unwrap();
        assert!(matches!(
            oracle_estimator(&data, &[0, 1]),
            Err(Error::RankDeficientActiveSet(_))
        ));
    }

    #[test]
    fn tail_measures_vanish_for_exactly_sparse_truth() {
        let beta = [0.0, 3.0, 0.0, -1.0, 0.0];
        assert_eq!(r_j_measure(&beta, 2), 0.0);
        assert_eq!(relative_magnitude(&beta, 2), 3.0);
        assert_eq!(top_j_support(&beta, 2), vec![1, 3]);
    }

    #[test]
    fn r_j_measures_the_tail() {
        let beta = [2.0, 1.0, 0.1, -0.2];
        // J = 2 head is {0, 1}; tail is (0.1, -0.2).
        let expected = (0.1f64 * 0.1 + 0.2 * 0.2).sqrt() + 0.3 / 2f64.sqrt();
        assert!((r_j_measure(&beta, 2) - expected).abs() < 1e-12);
    }

    #[test]
    fn error_bounds_match_hand_evaluation() {
        // R_J = 0, sigma = 1, T = 4, n = 100, p = 1000, alpha = 0.05:
        // eps1 = 2 sqrt(2 ln(20000)/100) = 0.8901005584780239.
        let mut diag = RecoveryDiagnostics {
            mu: 0.0,
            c_minus: BTreeMap::new(),
            c_plus: BTreeMap::new(),
            theta: BTreeMap::new(),
            gamma: None,
            gamma_mu: None,
            r: None,
            r_j: Some(0.0),
            eps1: None,
            eps2: None,
            j: 4,
        };
        diag.c_plus.insert(4, 1.0);
        let (e1, e2) = error_bounds(&diag, 1.0, 100, 1000, 4, 4, 0.05).unwrap();
        assert!((e1 - 0.8901005584780239).abs() < 1e-12);
        assert!((e2 - 0.8901005584780239 / 2.0).abs() < 1e-12);
        // Exact sparsity and sigma = 0 gives (0, 0).
        let (e1, e2) = error_bounds(&diag, 0.0, 100, 1000, 4, 4, 0.05).unwrap();
        assert_eq!((e1, e2), (0.0, 0.0));
        assert!(error_bounds(&diag, 1.0, 100, 1000, 4, 4, 0.7).is_err());
    }

    #[test]
    fn noise_functional_agrees_with_subset_enumeration() {
        let x = random_normalized(10, 7, 8);
        let mut src = NormalSource::new(9);
        let noise: Vec<f64> = (0..10).map(|_| src.sample()).collect();
        for t in 1..=4 {
            let fast = noise_l2_functional(&x, &noise, t);
            // Oracle: enumerate every subset of size <= t.
            let v = x.t_matvec(&noise);
            let mut best: f64 = 0.0;
            for s in 1..=t {
                for_each_combination(7, s, &mut |set| {
                    let norm: f64 = set.iter().map(|&j| v[j] * v[j]).sum::<f64>().sqrt();
                    best = best.max(norm / 10.0);
                });
            }
            assert!((fast - best).abs() < 1e-12);
        }
    }
}
