//! Gaussian error processes: white noise and fractional Gaussian noise.
//!
//! Long memory is parameterised by `α ∈ (0, 1]` with Hurst index
//! `H = 1 - α/2`; `α = 1` is the independent case. Samples are produced as an
//! explicit linear map of iid standard normals (circulant embedding of the
//! Toeplitz covariance, or a dense Cholesky factor as fallback).

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

use crate::rng::{replicate_rng, Rng};

/// Embedding eigenvalues below `-EMBEDDING_NEG_TOL · max` trigger the dense fallback.
pub const EMBEDDING_NEG_TOL: f64 = 1e-10;

/// Largest `n` accepted by [`eigen_envelope`].
pub const DENSE_EIGEN_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("memory parameter alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),
    #[error("noise scale sigma must be non-negative and finite, got {0}")]
    BadSigma(f64),
    #[error("length must be positive")]
    EmptyLength,
    #[error("autocovariance must start with a positive variance")]
    BadAutocovariance,
    #[error("covariance is not positive semidefinite: circulant embedding and dense factorization both failed")]
    EmbeddingFailure,
    #[error("dense eigensolve requested for n = {n} above the cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Iid,
    Fgn,
}

/// `σ ε` with `ε` unit-variance white noise or fGn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    alpha: f64,
    sigma: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, alpha: f64, sigma: f64) -> Result<Self, NoiseError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(NoiseError::BadAlpha(alpha));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(NoiseError::BadSigma(sigma));
        }
        if kind == NoiseKind::Iid && alpha != 1.0 {
            return Err(NoiseError::BadAlpha(alpha));
        }
        Ok(NoiseModel { kind, alpha, sigma })
    }

    pub fn iid(sigma: f64) -> Result<Self, NoiseError> {
        Self::new(NoiseKind::Iid, 1.0, sigma)
    }

    pub fn fgn(alpha: f64, sigma: f64) -> Result<Self, NoiseError> {
        Self::new(NoiseKind::Fgn, alpha, sigma)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self, NoiseError> {
        Self::new(self.kind, self.alpha, sigma)
    }

    /// `H = 1 - α/2`.
    pub fn hurst(&self) -> f64 {
        1.0 - self.alpha / 2.0
    }

    /// Unit-variance autocovariance `γ(0..n)`.
    pub fn autocovariance(&self, n: usize) -> CovarianceSpec {
        let autocov = match self.kind {
            NoiseKind::Iid => {
                let mut v = vec![0.0; n];
                if n > 0 {
                    v[0] = 1.0;
                }
                v
            }
            NoiseKind::Fgn => {
                let two_h = 2.0 * self.hurst();
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            return 1.0;
                        }
                        let k = k as f64;
                        0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).powf(two_h))
                    })
                    .collect()
            }
        };
        CovarianceSpec { autocov }
    }
}

/// Stationary autocovariance sequence of a Gaussian process.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceSpec {
    autocov: Vec<f64>,
}

impl CovarianceSpec {
    pub fn new(autocov: Vec<f64>) -> Result<Self, NoiseError> {
        match autocov.first() {
            None => Err(NoiseError::EmptyLength),
            Some(&v) if v > 0.0 && v.is_finite() => Ok(CovarianceSpec { autocov }),
            _ => Err(NoiseError::BadAutocovariance),
        }
    }

    pub fn autocov(&self) -> &[f64] {
        &self.autocov
    }

    pub fn len(&self) -> usize {
        self.autocov.len()
    }

    pub fn is_empty(&self) -> bool {
        self.autocov.is_empty()
    }

    /// Dense Toeplitz matrix `Σ_n`.
    pub fn toeplitz(&self) -> DMatrix<f64> {
        let n = self.autocov.len();
        DMatrix::from_fn(n, n, |i, k| self.autocov[i.abs_diff(k)])
    }

    /// Eigenvalues of the minimal circulant embedding (size `2(n-1)`).
    pub fn embedding_spectrum(&self) -> Vec<f64> {
        let n = self.autocov.len();
        if n <= 1 {
            return self.autocov.clone();
        }
        let m = 2 * (n - 1);
        let mut buf: Vec<Complex64> = (0..m)
            .map(|k| {
                let lag = if k < n { k } else { m - k };
                Complex64::new(self.autocov[lag], 0.0)
            })
            .collect();
        FftPlanner::<f64>::new()
            .plan_fft_forward(m)
            .process(&mut buf);
        buf.iter().map(|z| z.re).collect()
    }
}

#[derive(Clone)]
enum SamplerPath {
    White,
    Circulant {
        scaled_sqrt: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
    Dense {
        factor: DMatrix<f64>,
    },
}

/// Draws `σ ε_n` for a fixed length; construction does the factorization
/// once so repeated draws cost `O(n log n)`.
#[derive(Clone)]
pub struct NoiseSampler {
    n: usize,
    sigma: f64,
    path: SamplerPath,
}

impl std::fmt::Debug for NoiseSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let path = match self.path {
            SamplerPath::White => "white",
            SamplerPath::Circulant { .. } => "circulant",
            SamplerPath::Dense { .. } => "dense",
        };
        f.debug_struct("NoiseSampler")
            .field("n", &self.n)
            .field("sigma", &self.sigma)
            .field("path", &path)
            .finish()
    }
}

impl NoiseSampler {
    pub fn new(model: &NoiseModel, n: usize) -> Result<Self, NoiseError> {
        if n == 0 {
            return Err(NoiseError::EmptyLength);
        }
        if model.kind == NoiseKind::Iid {
            return Ok(NoiseSampler {
                n,
                sigma: model.sigma,
                path: SamplerPath::White,
            });
        }
        Self::from_covariance(&model.autocovariance(n), model.sigma)
    }

    pub fn from_covariance(cov: &CovarianceSpec, sigma: f64) -> Result<Self, NoiseError> {
        let n = cov.len();
        if n == 0 {
            return Err(NoiseError::EmptyLength);
        }
        if n == 1 {
            return Ok(NoiseSampler {
                n,
                sigma: sigma * cov.autocov[0].sqrt(),
                path: SamplerPath::White,
            });
        }
        let spectrum = cov.embedding_spectrum();
        let max = spectrum.iter().cloned().fold(0.0, f64::max);
        let min = spectrum.iter().cloned().fold(f64::INFINITY, f64::min);
        if min >= -EMBEDDING_NEG_TOL * max {
            let m = spectrum.len();
            let scaled_sqrt = spectrum
                .iter()
                .map(|&l| (l.max(0.0) / m as f64).sqrt())
                .collect();
            let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
            return Ok(NoiseSampler {
                n,
                sigma,
                path: SamplerPath::Circulant { scaled_sqrt, fft },
            });
        }
        log::warn!(
            "circulant embedding has negative eigenvalue {min:e}; using dense factorization (O(n^2) per draw)"
        );
        let factor = cov
            .toeplitz()
            .cholesky()
            .map(|c| c.l())
            .ok_or(NoiseError::EmbeddingFailure)?;
        Ok(NoiseSampler {
            n,
            sigma,
            path: SamplerPath::Dense { factor },
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn uses_embedding(&self) -> bool {
        matches!(self.path, SamplerPath::Circulant { .. })
    }

    /// One draw of `σ ε_n`.
    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        match &self.path {
            SamplerPath::White => (0..self.n)
                .map(|_| self.sigma * Distribution::<f64>::sample(&StandardNormal, rng))
                .collect::<Vec<f64>>(),
            SamplerPath::Circulant { scaled_sqrt, fft } => {
                let mut buf: Vec<Complex64> = scaled_sqrt
                    .iter()
                    .map(|&s| {
                        let re: f64 = StandardNormal.sample(rng);
                        let im: f64 = StandardNormal.sample(rng);
                        Complex64::new(s * re, s * im)
                    })
                    .collect();
                fft.process(&mut buf);
                buf.iter().take(self.n).map(|z| self.sigma * z.re).collect()
            }
            SamplerPath::Dense { factor } => {
                let eta: Vec<f64> = (0..self.n).map(|_| StandardNormal.sample(rng)).collect();
                (0..self.n)
                    .map(|i| {
                        let row: f64 = (0..=i).map(|k| factor[(i, k)] * eta[k]).sum();
                        self.sigma * row
                    })
                    .collect()
            }
        }
    }
}

/// `sample_noise`: one seeded draw of `σ ε_n` (replicate stream 0).
pub fn sample_noise(model: &NoiseModel, n: usize, seed: u64) -> Result<Vec<f64>, NoiseError> {
    let sampler = NoiseSampler::new(model, n)?;
    Ok(sampler.sample(&mut replicate_rng(seed, 0)))
}

/// Smallest and largest eigenvalue of the unit-variance `Σ_n`.
///
/// A symmetric Toeplitz matrix of even order `2m` is centrosymmetric, so
/// its spectrum is the union of the spectra of the two `m × m` symmetric
/// matrices `A ± JB` (`A`, `B` the leading and lower-left blocks, `J` the
/// exchange matrix). Splitting makes the dense solve about four times
/// cheaper without approximating anything.
pub fn extreme_eigenvalues(cov: &CovarianceSpec) -> (f64, f64) {
    let n = cov.len();
    if n < 64 || n % 2 == 1 {
        let eig = cov.toeplitz().symmetric_eigenvalues();
        return (eig.min(), eig.max());
    }
    let m = n / 2;
    let g = cov.autocov();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for sign in [1.0, -1.0] {
        // (JB)[i][k] = B[m-1-i][k] = γ(|m + (m-1-i) - k|)
        let half = DMatrix::from_fn(m, m, |i, k| g[i.abs_diff(k)] + sign * g[2 * m - 1 - i - k]);
        let eig = half.symmetric_eigenvalues();
        lo = lo.min(eig.min());
        hi = hi.max(eig.max());
    }
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenRow {
    pub n: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Extreme eigenvalues per `n` and the log–log slope of `λ_max` in `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenEnvelope {
    pub rows: Vec<EigenRow>,
    pub slope: f64,
    pub slope_se: f64,
}

/// Dense eigensolves of `Σ_n` for each `n` plus an OLS slope fit.
pub fn eigen_envelope(model: &NoiseModel, n_list: &[usize]) -> Result<EigenEnvelope, NoiseError> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 {
            return Err(NoiseError::EmptyLength);
        }
        if n > DENSE_EIGEN_CAP {
            return Err(NoiseError::TooLarge {
                n,
                cap: DENSE_EIGEN_CAP,
            });
        }
        let (lambda_min, lambda_max) = extreme_eigenvalues(&model.autocovariance(n));
        rows.push(EigenRow {
            n,
            lambda_min,
            lambda_max,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.lambda_max.ln()).collect();
    let fit = crate::stats::ols(&xs, &ys);
    Ok(EigenEnvelope {
        rows,
        slope: fit.slope,
        slope_se: fit.slope_se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_eigensolve_matches_full() {
        let cov = NoiseModel::fgn(0.3, 1.0).unwrap().autocovariance(96);
        let full = cov.toeplitz().symmetric_eigenvalues();
        let (lo, hi) = extreme_eigenvalues(&cov);
        assert!((lo - full.min()).abs() < 1e-10 * full.max());
        assert!((hi - full.max()).abs() < 1e-10 * full.max());
    }

    #[test]
    fn autocovariance_examples() {
        let iid = NoiseModel::iid(1.0).unwrap();
        assert_eq!(iid.autocovariance(4).autocov(), &[1.0, 0.0, 0.0, 0.0]);
        let white = NoiseModel::fgn(1.0, 1.0).unwrap();
        assert!(white.autocovariance(6).autocov()[1..]
            .iter()
            .all(|&g| g.abs() < 1e-15));
        let lrd = NoiseModel::fgn(0.5, 1.0).unwrap();
        let g1 = lrd.autocovariance(2).autocov()[1];
        assert!((g1 - 0.5 * (2f64.powf(1.5) - 2.0)).abs() < 1e-15);
        assert!((g1 - 0.414214).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(NoiseModel::fgn(0.0, 1.0), Err(NoiseError::BadAlpha(0.0)));
        assert_eq!(NoiseModel::fgn(1.2, 1.0), Err(NoiseError::BadAlpha(1.2)));
        assert!(NoiseModel::fgn(0.5, -1.0).is_err());
        assert!(NoiseModel::new(NoiseKind::Iid, 0.5, 1.0).is_err());
        assert!(CovarianceSpec::new(vec![]).is_err());
        assert!(CovarianceSpec::new(vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn fgn_embedding_is_nonnegative() {
        for &alpha in &[0.2, 0.5, 0.9, 1.0] {
            let m = NoiseModel::fgn(alpha, 1.0).unwrap();
            let spec = m.autocovariance(300).embedding_spectrum();
            let max = spec.iter().cloned().fold(0.0, f64::max);
            assert!(spec.iter().all(|&l| l >= -EMBEDDING_NEG_TOL * max));
            assert!(NoiseSampler::new(&m, 300).unwrap().uses_embedding());
        }
    }

    #[test]
    fn dense_fallback_when_embedding_is_negative() {
        // A valid (PSD) covariance whose minimal embedding is not PSD.
        let cov = CovarianceSpec::new(vec![1.0, 0.9, 0.7, 0.5]).unwrap();
        let spec = cov.embedding_spectrum();
        assert!(spec.iter().any(|&l| l < 0.0));
        let sampler = NoiseSampler::from_covariance(&cov, 1.0).unwrap();
        assert!(!sampler.uses_embedding());
        assert_eq!(sampler.sample(&mut replicate_rng(1, 0)).len(), 4);
    }

    #[test]
    fn non_psd_input_fails() {
        let cov = CovarianceSpec::new(vec![1.0, 1.5, 0.0]).unwrap();
        assert!(matches!(
            NoiseSampler::from_covariance(&cov, 1.0),
            Err(NoiseError::EmbeddingFailure)
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let m = NoiseModel::fgn(0.6, 2.0).unwrap();
        let a = sample_noise(&m, 257, 42).unwrap();
        let b = sample_noise(&m, 257, 42).unwrap();
        let c = sample_noise(&m, 257, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn iid_eigenvalues_are_one() {
        let env = eigen_envelope(&NoiseModel::iid(1.0).unwrap(), &[16, 32, 64]).unwrap();
        for row in &env.rows {
            assert!((row.lambda_min - 1.0).abs() < 1e-12);
            assert!((row.lambda_max - 1.0).abs() < 1e-12);
        }
        assert!(env.slope.abs() < 1e-10);
    }

    #[test]
    fn eigen_cap_is_enforced() {
        let m = NoiseModel::fgn(0.5, 1.0).unwrap();
        assert!(matches!(
            eigen_envelope(&m, &[DENSE_EIGEN_CAP + 1]),
            Err(NoiseError::TooLarge { .. })
        ));
    }
}
