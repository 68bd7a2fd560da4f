//! Dense linear-algebra primitives: column normalization, matrix-vector
//! products, restricted Gram operations, and a conjugate-gradient solver for
//! the normal equations on an active set.
//!
//! Matrices are stored column-major so that column slices (the unit of work
//! in every solver here) are contiguous.

use crate::error::{Error, Result};

/// Norms below this are treated as exact zeros (rank loss, zero columns).
const UNDERFLOW_GUARD: f64 = 1e-300;

/// A dense `n x p` matrix in column-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major values, checking shape and finiteness.
    pub fn new(n_rows: usize, n_cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch {
                what: "DenseMatrix::new values",
                expected: n_rows * n_cols,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "matrix entry ({}, {})",
                i % n_rows.max(1),
                i / n_rows.max(1)
            )));
        }
        Ok(Self {
            n_rows,
            n_cols,
            values,
        })
    }

    /// Builds a matrix from column vectors.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::DimensionMismatch {
                    what: "DenseMatrix::from_columns column length",
                    expected: n_rows,
                    got: columns[j].len(),
                });
            }
            values.extend_from_slice(col);
        }
        Self::new(n_rows, n_cols, values)
    }

    /// An all-zero matrix.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            values: vec![0.0; n_rows * n_cols],
        }
    }

    /// `sqrt(n) * I`, the n x n design whose Gram matrix `X'X/n` is the identity.
    pub fn scaled_identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        let s = (n as f64).sqrt();
        for j in 0..n {
            m.values[j * n + j] = s;
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Column `j` as a contiguous slice.
    pub fn col(&self, j: usize) -> &[f64] {
        &self.values[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n_rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[j * self.n_rows + i] = v;
    }

    /// Copies the listed columns into a new `n x |cols|` matrix.
    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut values = Vec::with_capacity(self.n_rows * cols.len());
        for &j in cols {
            values.extend_from_slice(self.col(j));
        }
        DenseMatrix {
            n_rows: self.n_rows,
            n_cols: cols.len(),
            values,
        }
    }

    /// `X * beta` for a full-width coefficient vector.
    pub fn matvec(&self, beta: &[f64]) -> Vec<f64> {
        debug_assert_eq!(beta.len(), self.n_cols);
        let mut out = vec![0.0; self.n_rows];
        for (j, &b) in beta.iter().enumerate() {
            if b != 0.0 {
                axpy(b, self.col(j), &mut out);
            }
        }
        out
    }

    /// `X_A * coef` using the listed columns, without materializing `X_A`.
    pub fn matvec_on(&self, cols: &[usize], coef: &[f64]) -> Vec<f64> {
        debug_assert_eq!(cols.len(), coef.len());
        let mut out = vec![0.0; self.n_rows];
        for (&j, &b) in cols.iter().zip(coef) {
            axpy(b, self.col(j), &mut out);
        }
        out
    }

    /// `X' * r` (one dot product per column).
    pub fn t_matvec(&self, r: &[f64]) -> Vec<f64> {
        debug_assert_eq!(r.len(), self.n_rows);
        (0..self.n_cols).map(|j| dot(self.col(j), r)).collect()
    }

    /// The Gram matrix `X'X` as a dense column-major `p x p` block.
    pub fn gram(&self) -> Vec<f64> {
        let p = self.n_cols;
        let mut g = vec![0.0; p * p];
        for j in 0..p {
            for i in 0..=j {
                let v = dot(self.col(i), self.col(j));
                g[j * p + i] = v;
                g[i * p + j] = v;
            }
        }
        g
    }
}

/// `out += a * x`
pub fn axpy(a: f64, x: &[f64], out: &mut [f64]) {
    for (o, &xi) in out.iter_mut().zip(x) {
        *o += a * xi;
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `a - b` elementwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Rescales every column to Euclidean norm `sqrt(n)`.
///
/// Returns the normalized matrix and the per-column factors that were
/// applied, so fitted coefficients can be mapped back to the original column
/// scale (`beta_original[j] = beta_normalized[j] * scale[j]`).
pub fn normalize_columns(x: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    let target = (x.n_rows() as f64).sqrt();
    let mut out = x.clone();
    let mut scale = Vec::with_capacity(x.n_cols());
    for j in 0..x.n_cols() {
        let norm = norm2(x.col(j));
        if norm < UNDERFLOW_GUARD {
            return Err(Error::ZeroColumn(j));
        }
        let s = target / norm;
        scale.push(s);
        if s != 1.0 {
            let base = j * x.n_rows();
            for v in &mut out.values[base..base + x.n_rows()] {
                *v *= s;
            }
        }
    }
    Ok((out, scale))
}

/// The scaled correlation `X'r / n` of every column with `r`.
pub fn correlation(x: &DenseMatrix, r: &[f64]) -> Result<Vec<f64>> {
    if r.len() != x.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "correlation residual length",
            expected: x.n_rows(),
            got: r.len(),
        });
    }
    let inv_n = 1.0 / x.n_rows() as f64;
    let mut c = x.t_matvec(r);
    for v in &mut c {
        *v *= inv_n;
    }
    Ok(c)
}

/// Settings for the conjugate-gradient normal-equations solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgSettings {
    pub max_iters: usize,
    pub rel_tol: f64,
}

impl Default for CgSettings {
    fn default() -> Self {
        Self {
            max_iters: 500,
            rel_tol: 1e-10,
        }
    }
}

impl CgSettings {
    /// Iteration cap for an ambient dimension `p` and active-set size `t`.
    ///
    /// The cap `p / (2t)` keeps each restricted refit within an O(np) budget;
    /// it is clamped to [10, 500] and floored at `2t` so that small `p`
    /// or large active sets do not starve CG below its exact-arithmetic
    /// termination step count.
    pub fn for_problem(p: usize, t: usize) -> Self {
        let cap = (p / (2 * t.max(1))).clamp(10, 500);
        Self {
            max_iters: cap.max(2 * t).min(500),
            rel_tol: 1e-10,
        }
    }
}

/// Outcome of a conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `||X'X x - X'y|| / ||X'y||` at exit.
    pub rel_residual: f64,
}

/// Solves the normal equations `X_A'X_A x = X_A'y` by conjugate gradient.
///
/// The Gram matrix is never formed: each iteration applies `X_A` and `X_A'`
/// once. Iterations stop when the normal-equations residual drops below
/// `rel_tol * ||X_A'y||` or `max_iters` is reached; a collapsing curvature
/// term `p'Gp` signals rank deficiency and returns [`Error::Breakdown`].
pub fn cg_solve(x_a: &DenseMatrix, y: &[f64], x0: &[f64], cfg: &CgSettings) -> Result<CgSolution> {
    let t = x_a.n_cols();
    if y.len() != x_a.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "cg_solve response length",
            expected: x_a.n_rows(),
            got: y.len(),
        });
    }
    if x0.len() != t {
        return Err(Error::DimensionMismatch {
            what: "cg_solve warm start length",
            expected: t,
            got: x0.len(),
        });
    }
    let b = x_a.t_matvec(y);
    let b_norm = norm2(&b);
    if b_norm < UNDERFLOW_GUARD {
        // G is positive definite on a full-rank active set, so b = 0 => x = 0.
        return Ok(CgSolution {
            x: vec![0.0; t],
            iterations: 0,
            converged: true,
            rel_residual: 0.0,
        });
    }

    let mut x = x0.to_vec();
    // r = b - X'(X x), the normal-equations residual.
    let ax = x_a.matvec(&x);
    let mut r = sub(&b, &x_a.t_matvec(&ax));
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        if rs.sqrt() <= cfg.rel_tol * b_norm {
            break;
        }
        let w = x_a.matvec(&p);
        let gp = x_a.t_matvec(&w);
        let curvature = dot(&p, &gp);
        if curvature < UNDERFLOW_GUARD * dot(&p, &p) {
            return Err(Error::Breakdown);
        }
        let alpha = rs / curvature;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &gp, &mut r);
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_new;
        iterations += 1;
    }

    let rel_residual = rs.sqrt() / b_norm;
    Ok(CgSolution {
        x,
        iterations,
        converged: rel_residual <= cfg.rel_tol,
        rel_residual,
    })
}

/// Solves the normal equations `X_A'X_A x = X_A'y` by a dense Cholesky
/// factorization of the restricted Gram matrix.
///
/// Direct counterpart to [`cg_solve`]; used where an independent route to the
/// restricted least-squares solution is wanted (oracle refits, greedy
/// baselines).
pub fn cholesky_solve(x_a: &DenseMatrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != x_a.n_rows() {
        return Err(Error::DimensionMismatch {
            what: "cholesky_solve response length",
            expected: x_a.n_rows(),
            got: y.len(),
        });
    }
    let t = x_a.n_cols();
    if t == 0 {
        return Ok(Vec::new());
    }
    let mut g = x_a.gram();
    let mut b = x_a.t_matvec(y);

    // In-place lower Cholesky G = L L'.
    for j in 0..t {
        for k in 0..j {
            let ljk = g[k * t + j];
            for i in j..t {
                g[j * t + i] -= g[k * t + i] * ljk;
            }
        }
        let pivot = g[j * t + j];
        if pivot.is_nan() || pivot <= UNDERFLOW_GUARD {
            return Err(Error::Breakdown);
        }
        let inv = 1.0 / pivot.sqrt();
        for i in j..t {
            g[j * t + i] *= inv;
        }
    }
    // Forward substitution L z = b.
    for j in 0..t {
        b[j] /= g[j * t + j];
        let zj = b[j];
        for i in j + 1..t {
            b[i] -= g[j * t + i] * zj;
        }
    }
    // Back substitution L' x = z.
    for j in (0..t).rev() {
        for i in j + 1..t {
            b[j] -= g[j * t + i] * b[i];
        }
        b[j] /= g[j * t + j];
    }
    Ok(b)
}

/// Extreme eigenvalues of a small dense symmetric matrix (column-major,
/// `dim x dim`) by the cyclic Jacobi method.
///
/// Intended for the brute-force design diagnostics, where matrices never
/// exceed a dozen rows.
pub fn sym_eig_range(a: &[f64], dim: usize) -> (f64, f64) {
    assert_eq!(a.len(), dim * dim, "sym_eig_range shape");
    if dim == 0 {
        return (0.0, 0.0);
    }
    if dim == 1 {
        return (a[0], a[0]);
    }
    let mut m = a.to_vec();
    let frob2: f64 = m.iter().map(|v| v * v).sum();
    let tol2 = (1e-15 * frob2.sqrt()).powi(2).max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let mut off2 = 0.0;
        for q in 0..dim {
            for p in 0..q {
                off2 += 2.0 * m[q * dim + p] * m[q * dim + p];
            }
        }
        if off2 <= tol2 {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = m[q * dim + p];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * dim + q] - m[p * dim + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..dim {
                    let aip = m[p * dim + i];
                    let aiq = m[q * dim + i];
                    m[p * dim + i] = c * aip - s * aiq;
                    m[q * dim + i] = s * aip + c * aiq;
                }
                for i in 0..dim {
                    let api = m[i * dim + p];
                    let aqi = m[i * dim + q];
                    m[i * dim + p] = c * api - s * aqi;
                    m[i * dim + q] = s * api + c * aqi;
                }
            }
        }
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..dim {
        lo = lo.min(m[i * dim + i]);
        hi = hi.max(m[i * dim + i]);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn normalize_keeps_already_normalized_columns() {
        // n = 4 columns (1,1,1,1) and (2,0,0,0) both have norm 2 = sqrt(4).
        let x = DenseMatrix::from_columns(&[vec![1.0, 1.0, 1.0, 1.0], vec![2.0, 0.0, 0.0, 0.0]])
            .unwrap();
        let (xn, scale) = normalize_columns(&x).unwrap();
        assert_eq!(xn, x);
        assert_eq!(scale, vec![1.0, 1.0]);
    }

    #[test]
    fn normalize_scales_to_sqrt_n() {
        // n = 9: the all-ones column has norm 3 = sqrt(9); all-twos is scaled by 1/2.
        let ones = vec![1.0; 9];
        let twos = vec![2.0; 9];
        let x = DenseMatrix::from_columns(&[ones.clone(), twos]).unwrap();
        let (xn, scale) = normalize_columns(&x).unwrap();
        assert_eq!(xn.col(0), &ones[..]);
        assert!(approx(scale[0], 1.0, 1e-15));
        assert!(approx(scale[1], 0.5, 1e-15));
        assert_eq!(xn.col(1), &ones[..]);
        for j in 0..xn.n_cols() {
            assert!(approx(norm2(xn.col(j)), 3.0, 1e-12));
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        let x = DenseMatrix::from_columns(&[
            vec![0.3, -1.2, 2.0, 0.7],
            vec![5.0, 0.1, -0.4, 1.1],
            vec![-2.0, 3.0, 0.5, 0.9],
        ])
        .unwrap();
        let (x1, _) = normalize_columns(&x).unwrap();
        let (x2, s2) = normalize_columns(&x1).unwrap();
        for (j, sj) in s2.iter().enumerate() {
            assert!(approx(*sj, 1.0, 1e-12));
            for i in 0..x.n_rows() {
                assert!(approx(x2.get(i, j), x1.get(i, j), 1e-12));
            }
        }
    }

    #[test]
    fn normalize_rejects_zero_column() {
        let x = DenseMatrix::from_columns(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        match normalize_columns(&x) {
            Err(Error::ZeroColumn(1)) => {}
            other => panic!("expected ZeroColumn(1), got {other:?}"),
        }
    }

    #[test]
    fn correlation_on_scaled_identity() {
        // X = sqrt(3) * I, r = (3, 0, -6): entries sqrt(3)*3/3, 0, -sqrt(3)*6/3.
        let x = DenseMatrix::scaled_identity(3);
        let c = correlation(&x, &[3.0, 0.0, -6.0]).unwrap();
        let s3 = 3f64.sqrt();
        assert!(approx(c[0], s3, 1e-15));
        assert_eq!(c[1], 0.0);
        assert!(approx(c[2], -2.0 * s3, 1e-15));
    }

    #[test]
    fn correlation_zero_residual_and_self_column() {
        let x = DenseMatrix::from_columns(&[vec![1.0, -1.0, 1.0, -1.0]]).unwrap();
        assert_eq!(correlation(&x, &[0.0; 4]).unwrap(), vec![0.0]);
        // single column equal to r with ||r||^2 = n gives entry 1
        let r = x.col(0).to_vec();
        assert!(approx(correlation(&x, &r).unwrap()[0], 1.0, 1e-15));
    }

    #[test]
    fn correlation_is_linear() {
        let x = DenseMatrix::from_columns(&[vec![1.0, 2.0, -1.0], vec![0.5, -0.5, 2.0]]).unwrap();
        let r1 = [1.0, 0.0, 2.0];
        let r2 = [-3.0, 1.0, 0.5];
        let (a, b) = (2.5, -1.25);
        let combo: Vec<f64> = r1.iter().zip(&r2).map(|(u, v)| a * u + b * v).collect();
        let lhs = correlation(&x, &combo).unwrap();
        let c1 = correlation(&x, &r1).unwrap();
        let c2 = correlation(&x, &r2).unwrap();
        for j in 0..2 {
            assert!(approx(lhs[j], a * c1[j] + b * c2[j], 1e-12));
        }
    }

    #[test]
    fn correlation_rejects_bad_length() {
        let x = DenseMatrix::scaled_identity(3);
        assert!(matches!(
            correlation(&x, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cg_identity_system_returns_rhs() {
        // X = sqrt(n) I makes X'X = n I; scale y so the solution is y / n... in
        // fact x = X'y / n = y / sqrt(n), checked directly.
        let n = 5;
        let x = DenseMatrix::scaled_identity(n);
        let y = vec![1.0, -2.0, 0.5, 3.0, 0.0];
        let sol = cg_solve(&x, &y, &vec![0.0; n], &CgSettings::default()).unwrap();
        assert!(sol.converged);
        for (xi, yi) in sol.x.iter().zip(&y) {
            assert!(approx(*xi, yi / (n as f64).sqrt(), 1e-12));
        }
    }

    #[test]
    fn cg_small_symmetric_system() {
        // Columns chosen so X'X = [[2,1],[1,2]] and X'y = (3,3); solution (1,1).
        let x = DenseMatrix::from_columns(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let y = vec![1.0, 2.0, 1.0];
        let sol = cg_solve(&x, &y, &[0.0, 0.0], &CgSettings::default()).unwrap();
        assert!(sol.converged);
        assert!(approx(sol.x[0], 1.0, 1e-10));
        assert!(approx(sol.x[1], 1.0, 1e-10));
    }

    #[test]
    fn cg_zero_rhs_returns_zero() {
        let x = DenseMatrix::scaled_identity(4);
        let sol = cg_solve(&x, &[0.0; 4], &[9.0, 9.0, 9.0, 9.0], &CgSettings::default()).unwrap();
        assert_eq!(sol.x, vec![0.0; 4]);
        assert!(sol.converged);
    }

    #[test]
    fn cg_handles_consistent_singular_system() {
        // Duplicated columns make the Gram singular, but X'y always lies in
        // its range, so CG still reaches a valid least-squares solution (the
        // breakdown guard is for curvature collapse, not consistent systems).
        let col = vec![1.0, 2.0, 3.0, 4.0];
        let x = DenseMatrix::from_columns(&[col.clone(), col.clone()]).unwrap();
        let y = vec![1.0, 0.0, 0.0, 1.0];
        let sol = cg_solve(&x, &y, &[0.0, 0.0], &CgSettings::default()).unwrap();
        assert!(sol.converged);
        let b = x.t_matvec(&y);
        let gx = x.t_matvec(&x.matvec(&sol.x));
        for j in 0..2 {
            assert!((gx[j] - b[j]).abs() <= 1e-8 * norm2(&b));
        }
    }

    #[test]
    fn cholesky_matches_cg() {
        let x = DenseMatrix::from_columns(&[
            vec![1.0, 0.5, -0.3, 2.0, 0.0],
            vec![0.2, -1.0, 0.8, 0.1, 1.5],
            vec![-0.7, 0.4, 1.2, -0.6, 0.9],
        ])
        .unwrap();
        let y = vec![0.4, 1.0, -2.0, 0.3, 0.8];
        let chol = cholesky_solve(&x, &y).unwrap();
        let cg = cg_solve(&x, &y, &[0.0; 3], &CgSettings::default()).unwrap();
        for (a, b) in chol.iter().zip(&cg.x) {
            assert!(approx(*a, *b, 1e-9));
        }
    }

    #[test]
    fn cholesky_rejects_singular_gram() {
        let col = vec![1.0, -1.0, 2.0];
        let x = DenseMatrix::from_columns(&[col.clone(), col]).unwrap();
        assert!(matches!(
            cholesky_solve(&x, &[1.0, 1.0, 1.0]),
            Err(Error::Breakdown)
        ));
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let (lo, hi) = sym_eig_range(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!(approx(lo, 1.0, 1e-12));
        assert!(approx(hi, 3.0, 1e-12));
        // Diagonal matrix.
        let (lo, hi) = sym_eig_range(&[4.0, 0.0, 0.0, -1.0], 2);
        assert!(approx(lo, -1.0, 1e-12));
        assert!(approx(hi, 4.0, 1e-12));
    }

    #[test]
    fn cg_converges_within_two_active_set_sizes_of_iterations() {
        // Well-conditioned 12x6 system: CG should hit 1e-10 within 2|A| steps.
        let mut cols = Vec::new();
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for _ in 0..6 {
            cols.push((0..12).map(|_| next()).collect::<Vec<f64>>());
        }
        let x = DenseMatrix::from_columns(&cols).unwrap();
        let y: Vec<f64> = (0..12).map(|_| next()).collect();
        let cfg = CgSettings {
            max_iters: 12,
            rel_tol: 1e-10,
        };
        let sol = cg_solve(&x, &y, &[0.0; 6], &cfg).unwrap();
        assert!(sol.converged, "rel residual {}", sol.rel_residual);
    }
}
