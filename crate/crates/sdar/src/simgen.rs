//! Seeded generators for the simulation designs: a neighborhood-correlated
//! Gaussian design, an AR(1)-covariance Gaussian design, sparse coefficient
//! vectors, and noisy responses.
//!
//! Everything is a pure function of its inputs. Randomness comes from a
//! fixed, documented generator (SplitMix64 with the Box-Muller transform for
//! normals), so identical seeds reproduce identical datasets run after run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{normalize_columns, DenseMatrix};
use crate::model::RegressionData;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64: a 64-bit counter-based generator (Steele, Lea & Flood 2014).
///
/// The state advances by a fixed odd constant and each output is a finalizing
/// mix of the state, so the stream is a pure function of `(seed, position)`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound).
    fn next_below(&mut self, bound: u64) -> u64 {
        // The tiny modulo bias is irrelevant here; determinism is what matters.
        self.next_u64() % bound.max(1)
    }
}

/// Standard normal stream: Box-Muller on SplitMix64 output, consuming two
/// uniforms per pair and caching the second deviate.
#[derive(Debug, Clone)]
pub struct NormalSource {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl NormalSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::new(seed),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.rng.next_open01();
        let u2 = self.rng.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Derives an independent substream seed from a master seed and a stream id.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    SplitMix64::new(master ^ stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)).next_u64()
}

/// Which correlation structure the design matrix carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignKind {
    /// Columns mixed with their immediate neighbors: `X_j = Z_j + rho (Z_{j-1} + Z_{j+1})`.
    NeighborCorr,
    /// Rows drawn from N(0, Sigma) with `Sigma_{jk} = rho^{|j-k|}`.
    Ar1,
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DesignKind::NeighborCorr => "neighbor",
            DesignKind::Ar1 => "ar1",
        })
    }
}

/// How the nonzero coefficient magnitudes scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefMode {
    /// Magnitudes uniform on `[m, R m]` with `m = sigma * sqrt(2 ln(p) / n)`,
    /// the smallest detectable signal level.
    HeadSupport,
    /// Magnitudes uniform on `[1, R]`.
    RandomSupport,
}

impl std::fmt::Display for CoefMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoefMode::HeadSupport => "head",
            CoefMode::RandomSupport => "random",
        })
    }
}

/// Full description of a simulated instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimSpec {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub sigma: f64,
    pub rho: f64,
    /// Ratio of the largest to the smallest nonzero magnitude.
    pub r: f64,
    pub design: DesignKind,
    pub coef_mode: CoefMode,
    pub seed: u64,
}

impl SimSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidConfig("n and p must be positive".into()));
        }
        if self.k > self.p {
            return Err(Error::InvalidConfig(format!(
                "K = {} exceeds p = {}",
                self.k, self.p
            )));
        }
        if self.sigma.is_nan() || self.sigma < 0.0 {
            return Err(Error::InvalidConfig("sigma must be >= 0".into()));
        }
        if self.r.is_nan() || self.r < 1.0 {
            return Err(Error::InvalidConfig("R must be >= 1".into()));
        }
        match self.design {
            DesignKind::NeighborCorr => {
                if !(0.0..1.0).contains(&self.rho) {
                    return Err(Error::InvalidConfig(
                        "neighbor design requires rho in [0, 1)".into(),
                    ));
                }
                if self.p < 3 {
                    return Err(Error::InvalidConfig(
                        "neighbor design requires p >= 3".into(),
                    ));
                }
            }
            DesignKind::Ar1 => {
                if self.rho.is_nan() || self.rho.abs() >= 1.0 {
                    return Err(Error::InvalidConfig("AR(1) requires |rho| < 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Neighborhood-correlated design: i.i.d. standard normal columns are
/// normalized to `sqrt(n)` length, mixed as `X_j = Z_j + rho (Z_{j-1} + Z_{j+1})`
/// for interior columns (endpoints copied unchanged), then renormalized.
pub fn gen_design_neighbor(n: usize, p: usize, rho: f64, seed: u64) -> DenseMatrix {
    assert!(p >= 3, "neighbor design requires p >= 3");
    let mut source = NormalSource::new(seed);
    let mut z_cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for _ in 0..p {
        z_cols.push((0..n).map(|_| source.sample()).collect());
    }
    let z = DenseMatrix::from_columns(&z_cols).expect("finite normal draws");
    let (z, _) = normalize_columns(&z).expect("gaussian column cannot be zero");

    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    cols.push(z.col(0).to_vec());
    for j in 1..p - 1 {
        let col = (0..n)
            .map(|i| z.get(i, j) + rho * (z.get(i, j + 1) + z.get(i, j - 1)))
            .collect();
        cols.push(col);
    }
    cols.push(z.col(p - 1).to_vec());
    let x = DenseMatrix::from_columns(&cols).expect("finite combination");
    normalize_columns(&x)
        .expect("mixed column cannot be zero")
        .0
}

/// AR(1) design: each row follows `z_1 ~ N(0,1)`,
/// `z_j = rho z_{j-1} + sqrt(1 - rho^2) w_j`, so the population covariance is
/// `rho^{|j-k|}`; columns are then normalized to `sqrt(n)` length.
pub fn gen_design_ar1(n: usize, p: usize, rho: f64, seed: u64) -> DenseMatrix {
    assert!(rho.abs() < 1.0, "AR(1) requires |rho| < 1");
    let mut source = NormalSource::new(seed);
    let innovation = (1.0 - rho * rho).sqrt();
    let mut values = vec![0.0; n * p];
    for i in 0..n {
        let mut z = source.sample();
        values[i] = z;
        for j in 1..p {
            z = rho * z + innovation * source.sample();
            values[j * n + i] = z;
        }
    }
    let x = DenseMatrix::new(n, p, values).expect("finite normal draws");
    normalize_columns(&x)
        .expect("gaussian column cannot be zero")
        .0
}

/// Draws a sparse coefficient vector: a uniformly random size-`K` support,
/// random signs, and magnitudes uniform on the mode's `[m, R m]` interval.
pub fn gen_coefficients(spec: &SimSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let (low, high) = match spec.coef_mode {
        CoefMode::HeadSupport => {
            let m = spec.sigma * (2.0 * (spec.p as f64).ln() / spec.n as f64).sqrt();
            if m < 1e-300 {
                return Err(Error::DegenerateScale);
            }
            (m, spec.r * m)
        }
        CoefMode::RandomSupport => (1.0, spec.r),
    };
    let mut rng = SplitMix64::new(spec.seed);
    let support = sample_subset(&mut rng, spec.p, spec.k);
    let mut beta = vec![0.0; spec.p];
    for &j in &support {
        let magnitude = low + (high - low) * rng.next_f64();
        let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
        beta[j] = sign * magnitude;
    }
    Ok(beta)
}

/// Uniformly random size-`k` subset of `0..p` via a partial Fisher-Yates
/// shuffle; returned sorted.
fn sample_subset(rng: &mut SplitMix64, p: usize, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p).collect();
    for i in 0..k.min(p) {
        let j = i + rng.next_below((p - i) as u64) as usize;
        idx.swap(i, j);
    }
    let mut support = idx[..k].to_vec();
    support.sort_unstable();
    support
}

/// `y = X beta* + eta` with `eta_i ~ N(0, sigma^2)`.
pub fn gen_response(x: &DenseMatrix, beta_star: &[f64], sigma: f64, seed: u64) -> Vec<f64> {
    let mut y = x.matvec(beta_star);
    let mut source = NormalSource::new(seed);
    for v in &mut y {
        *v += sigma * source.sample();
    }
    y
}

/// One simulated instance: the problem data plus the ground truth behind it.
#[derive(Debug, Clone)]
pub struct SimInstance {
    pub data: RegressionData,
    pub beta_star: Vec<f64>,
    /// Sorted support of `beta_star`.
    pub support: Vec<usize>,
    /// Realized noise norm `||y - X beta*||_2`.
    pub noise_norm: f64,
}

/// Generates a full instance from a spec, deriving independent substream
/// seeds for the design (stream 0), coefficients (1), and noise (2).
pub fn generate(spec: &SimSpec) -> Result<SimInstance> {
    spec.validate()?;
    let x = match spec.design {
        DesignKind::NeighborCorr => {
            gen_design_neighbor(spec.n, spec.p, spec.rho, derive_seed(spec.seed, 0))
        }
        DesignKind::Ar1 => gen_design_ar1(spec.n, spec.p, spec.rho, derive_seed(spec.seed, 1)),
    };
    let beta_star = gen_coefficients(&SimSpec {
        seed: derive_seed(spec.seed, 2),
        ..spec.clone()
    })?;
    let y = gen_response(&x, &beta_star, spec.sigma, derive_seed(spec.seed, 3));
    let noise = crate::linalg::sub(&y, &x.matvec(&beta_star));
    let support = beta_star
        .iter()
        .enumerate()
        .filter(|(_, b)| **b != 0.0)
        .map(|(j, _)| j)
        .collect();
    Ok(SimInstance {
        data: RegressionData::new(x, y, Some(spec.sigma))?,
        beta_star,
        support,
        noise_norm: crate::linalg::norm2(&noise),
    })
}
