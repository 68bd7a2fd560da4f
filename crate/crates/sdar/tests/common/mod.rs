//! Shared fixtures and independent oracles for the integration tests.
//!
//! Everything here deliberately avoids the library's own solve paths: the
//! dense solve oracle is plain Gaussian elimination, and spectral quantities
//! come from nalgebra.

use nalgebra::DMatrix;
use sdar::linalg::DenseMatrix;
use sdar::model::RegressionData;
use sdar::simgen::NormalSource;

/// Random Gaussian design with `sqrt(n)`-normalized columns.
pub fn random_design(n: usize, p: usize, seed: u64) -> DenseMatrix {
    let mut src = NormalSource::new(seed);
    let cols: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| src.sample()).collect())
        .collect();
    let raw = DenseMatrix::from_columns(&cols).unwrap();
    sdar::linalg::normalize_columns(&raw).unwrap().0
}

/// Nearly orthogonal design: an orthonormal basis (modified Gram-Schmidt on
/// Gaussian columns) perturbed entrywise by `delta`, then renormalized.
/// Small `delta` keeps the sparse orthogonality constant small, which is the
/// regime where the contraction-factor conditions hold.
pub fn near_orthogonal_design(n: usize, p: usize, delta: f64, seed: u64) -> DenseMatrix {
    assert!(p <= n);
    let mut src = NormalSource::new(seed);
    let mut cols: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..n).map(|_| src.sample()).collect())
        .collect();
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for j in 0..p {
        for _ in 0..2 {
            for i in 0..j {
                let proj: f64 = cols[j].iter().zip(&cols[i]).map(|(a, b)| a * b).sum();
                let basis = cols[i].clone();
                for (v, b) in cols[j].iter_mut().zip(&basis) {
                    *v -= proj * b;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "degenerate Gram-Schmidt column");
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    for col in &mut cols {
        for v in col.iter_mut() {
            *v += delta * src.sample();
        }
    }
    let raw = DenseMatrix::from_columns(&cols).unwrap();
    sdar::linalg::normalize_columns(&raw).unwrap().0
}

/// Noiseless or noisy regression data from an explicit design and truth.
pub fn problem_from(
    x: &DenseMatrix,
    beta_star: &[f64],
    sigma: f64,
    noise_seed: u64,
) -> (RegressionData, Vec<f64>) {
    let mut y = x.matvec(beta_star);
    let mut noise = vec![0.0; y.len()];
    if sigma > 0.0 {
        let mut src = NormalSource::new(noise_seed);
        for (yi, ni) in y.iter_mut().zip(noise.iter_mut()) {
            *ni = sigma * src.sample();
            *yi += *ni;
        }
    }
    (
        RegressionData::new(x.clone(), y, Some(sigma)).unwrap(),
        noise,
    )
}

/// Dense least-squares oracle: forms the normal equations and solves them by
/// Gaussian elimination with partial pivoting.
pub fn gaussian_elimination_ls(x_a: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    let t = x_a.n_cols();
    let mut g = vec![0.0; t * t];
    let mut b = vec![0.0; t];
    for j in 0..t {
        b[j] = x_a.col(j).iter().zip(y).map(|(a, c)| a * c).sum();
        for i in 0..t {
            g[j * t + i] = x_a.col(i).iter().zip(x_a.col(j)).map(|(a, c)| a * c).sum();
        }
    }
    // Forward elimination with partial pivoting on the augmented system.
    for col in 0..t {
        let pivot_row = (col..t)
            .max_by(|&a, &bb| g[col * t + a].abs().total_cmp(&g[col * t + bb].abs()))
            .unwrap();
        if pivot_row != col {
            for j in 0..t {
                g.swap(j * t + col, j * t + pivot_row);
            }
            b.swap(col, pivot_row);
        }
        let pivot = g[col * t + col];
        assert!(pivot.abs() > 1e-250, "oracle hit a singular system");
        for row in col + 1..t {
            let factor = g[col * t + row] / pivot;
            if factor != 0.0 {
                for j in col..t {
                    g[j * t + row] -= factor * g[j * t + col];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    // Back substitution.
    let mut sol = vec![0.0; t];
    for row in (0..t).rev() {
        let mut acc = b[row];
        for j in row + 1..t {
            acc -= g[j * t + row] * sol[j];
        }
        sol[row] = acc / g[row * t + row];
    }
    sol
}

/// Spectral norm of the columns `set` of `x`, via nalgebra's SVD.
pub fn spectral_norm_of_columns(x: &DenseMatrix, set: &[usize]) -> f64 {
    let m = DMatrix::from_fn(x.n_rows(), set.len(), |i, j| x.get(i, set[j]));
    m.svd(false, false).singular_values[0]
}

/// Extreme eigenvalues of `X_A'X_A/n` via nalgebra's symmetric eigensolver.
pub fn gram_eig_range(x: &DenseMatrix, set: &[usize]) -> (f64, f64) {
    let inv_n = 1.0 / x.n_rows() as f64;
    let g = DMatrix::from_fn(set.len(), set.len(), |i, j| {
        x.col(set[i])
            .iter()
            .zip(x.col(set[j]))
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * inv_n
    });
    let eig = g.symmetric_eigenvalues();
    (eig.min(), eig.max())
}

/// Visits every size-`k` subset of `0..p`.
pub fn for_each_subset<F: FnMut(&[usize])>(p: usize, k: usize, mut f: F) {
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

/// Largest absolute componentwise difference.
pub fn linf_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
