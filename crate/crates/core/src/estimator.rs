//! Kernel estimation of `q^{(j)}`, Lepski bandwidth selection and the
//! plug-in reconstruction of `f`.
//!
//! The derivative estimator is
//!
//! ```text
//! q̂^{(j)}_λ(t) = λ^{-(j+1)} Σ_i K_j((t - t_i)/λ) (t_i - t_{i-1}) y(t_i)
//! ```
//!
//! For each `j` the bandwidth is chosen from the geometric grid
//! `Λ_j = {a^{-l} : l = 0..J_n}`, `J_n = ⌊log_a(n^α/(σ²T²)) / (2j+1)⌋`, as the
//! largest `λ` whose estimate stays within `γ_j² ρ²_{λ',j}` of every estimate
//! with smaller bandwidth `λ'`, where `ρ²_{λ,j} = 4σ²T²/(n^α λ^{2j+1})`.

use thiserror::Error;

use crate::deriv_kernels::{kernel_family, DerivKernel, MomentError};
use crate::design::{DesignError, ExperimentDesign, Window};
use crate::laplace_kernel::{
    sample_phi1, InversionCoefficients, KernelError, RationalLaplaceKernel,
};
use crate::quadrature::{causal_trapezoid_convolution, linear_convolution, trapezoid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("bandwidth {lambda} outside (0, {horizon}]")]
    BandwidthOutOfRange { lambda: f64, horizon: f64 },
    #[error("bandwidth grid for j = {j} is empty (n^alpha / (sigma^2 T^2) = {ratio})")]
    EmptyGrid { j: usize, ratio: f64 },
    #[error("sampled functions differ in length: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },
    #[error("expected {expected} observations, got {found}")]
    BadObservationLength { expected: usize, found: usize },
    #[error("invalid Lepski configuration: {0}")]
    BadConfig(String),
    #[error("expected {expected} bandwidths (one per derivative order), got {found}")]
    BandwidthCount { expected: usize, found: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Moment(#[from] MomentError),
}

/// Tuning of the Lepski selector. `sigma` and `alpha` are treated as known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LepskiConfig {
    /// Grid ratio `a > 1`.
    pub a: f64,
    /// `γ_j² = gamma_sq_factor · μ ‖K_j‖²`; must exceed 1.
    pub gamma_sq_factor: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// Grid points below `min_bandwidth_cells · T/n` are dropped.
    pub min_bandwidth_cells: f64,
}

impl LepskiConfig {
    pub fn new(sigma: f64, alpha: f64) -> Self {
        LepskiConfig {
            a: 2.0,
            gamma_sq_factor: 4.0,
            sigma,
            alpha,
            min_bandwidth_cells: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        if !(self.a > 1.0 && self.a.is_finite()) {
            return Err(EstimatorError::BadConfig(format!(
                "grid ratio a = {} must exceed 1",
                self.a
            )));
        }
        if !(self.gamma_sq_factor > 1.0) {
            return Err(EstimatorError::BadConfig(format!(
                "gamma_sq_factor = {} must exceed 1 so that gamma^2 > mu ||K||^2",
                self.gamma_sq_factor
            )));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(EstimatorError::BadConfig(format!("sigma = {}", self.sigma)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(EstimatorError::BadConfig(format!("alpha = {}", self.alpha)));
        }
        if !(self.min_bandwidth_cells > 0.0) {
            return Err(EstimatorError::BadConfig(
                "min_bandwidth_cells must be positive".into(),
            ));
        }
        Ok(())
    }

    /// `γ_j²` for a kernel.
    pub fn gamma_sq(&self, kernel: &DerivKernel, design: &ExperimentDesign) -> f64 {
        self.gamma_sq_factor * design.mu() * kernel.l2norm_sq()
    }
}

fn check_bandwidth(lambda: f64, design: &ExperimentDesign) -> Result<(), EstimatorError> {
    if !(lambda > 0.0 && lambda <= design.horizon() * (1.0 + 1e-12)) {
        return Err(EstimatorError::BandwidthOutOfRange {
            lambda,
            horizon: design.horizon(),
        });
    }
    Ok(())
}

fn check_observations(y: &[f64], design: &ExperimentDesign) -> Result<(), EstimatorError> {
    if y.len() != design.n() {
        return Err(EstimatorError::BadObservationLength {
            expected: design.n(),
            found: y.len(),
        });
    }
    Ok(())
}

/// `q̂^{(j)}_λ` at arbitrary points, summing only observations with
/// `|t - t_i| ≤ λ`.
pub fn estimate_qj(
    y: &[f64],
    design: &ExperimentDesign,
    kernel: &DerivKernel,
    lambda: f64,
    points: &[f64],
) -> Result<Vec<f64>, EstimatorError> {
    check_observations(y, design)?;
    check_bandwidth(lambda, design)?;
    let h = design.spacing();
    let n = design.n();
    let scale = h / lambda.powi(kernel.j() as i32 + 1);
    Ok(points
        .iter()
        .map(|&t| {
            let lo = (((t - lambda) / h).floor().max(1.0)) as usize;
            let hi = (((t + lambda) / h).ceil().min(n as f64)).max(0.0) as usize;
            let mut acc = 0.0;
            for i in lo..=hi {
                let u = (t - design.time(i)) / lambda;
                acc += kernel.eval(u) * y[i - 1];
            }
            scale * acc
        })
        .collect())
}

/// `q̂^{(j)}_λ` on the evaluation grid `t_0..t_n` as one discrete
/// convolution (FFT-backed for wide windows).
pub fn estimate_qj_grid(
    y: &[f64],
    design: &ExperimentDesign,
    kernel: &DerivKernel,
    lambda: f64,
) -> Result<Vec<f64>, EstimatorError> {
    check_observations(y, design)?;
    check_bandwidth(lambda, design)?;
    let h = design.spacing();
    let n = design.n();
    let reach = ((lambda / h) + 1e-9).floor() as usize;
    let reach = reach.min(n);
    let taps: Vec<f64> = (0..=2 * reach)
        .map(|idx| {
            let d = idx as f64 - reach as f64;
            kernel.eval(d * h / lambda)
        })
        .collect();
    let mut padded = Vec::with_capacity(n + 1);
    padded.push(0.0);
    padded.extend_from_slice(y);
    let conv = linear_convolution(&padded, &taps);
    let scale = h / lambda.powi(kernel.j() as i32 + 1);
    Ok((0..=n).map(|k| scale * conv[k + reach]).collect())
}

/// `λ_o = c · (T²/n^α)^{1/(2(m+r)+1)}`.
pub fn oracle_bandwidth(m: f64, r: usize, design: &ExperimentDesign, alpha: f64, c: f64) -> f64 {
    c * design
        .regime_ratio(alpha)
        .powf(1.0 / (2.0 * (m + r as f64) + 1.0))
}

/// Index of the grid point closest to `lambda` on a log scale.
pub fn snap_to_grid(lambda: f64, grid: &[f64]) -> usize {
    grid.iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1.ln() - lambda.ln()).abs();
            let db = (b.1.ln() - lambda.ln()).abs();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// `Λ_j` in descending order.
///
/// Points above `T` or below `min_bandwidth_cells · T/n` are dropped; the
/// lower cut only binds when `σ` is tiny (for `σ = 0` the grid would be
/// infinite).
pub fn lepski_grid(
    j: usize,
    config: &LepskiConfig,
    design: &ExperimentDesign,
) -> Result<Vec<f64>, EstimatorError> {
    config.validate()?;
    let ratio = (design.n() as f64).powf(config.alpha)
        / (config.sigma * config.sigma * design.horizon() * design.horizon());
    if !(ratio > 1.0) {
        return Err(EstimatorError::EmptyGrid { j, ratio });
    }
    let levels = (ratio.ln() / config.a.ln() / (2 * j + 1) as f64 + 1e-9).floor();
    let floor = config.min_bandwidth_cells * design.spacing() * (1.0 - 1e-12);
    let mut grid = Vec::new();
    let mut l = 0i32;
    while (l as f64) <= levels {
        let lambda = config.a.powi(-l);
        if lambda < floor {
            break;
        }
        if lambda <= design.horizon() * (1.0 + 1e-12) {
            grid.push(lambda);
        }
        l += 1;
    }
    if grid.is_empty() {
        return Err(EstimatorError::EmptyGrid { j, ratio });
    }
    Ok(grid)
}

/// `ρ²_{λ,j} = 4σ²T²/(n^α λ^{2j+1})`.
pub fn rho_sq(lambda: f64, j: usize, config: &LepskiConfig, design: &ExperimentDesign) -> f64 {
    4.0 * config.sigma * config.sigma * design.horizon() * design.horizon()
        / ((design.n() as f64).powf(config.alpha) * lambda.powi(2 * j as i32 + 1))
}

/// Trapezoid `∫ (u - v)²` over the window of the evaluation grid.
pub fn l2_diff_sq(
    u: &[f64],
    v: &[f64],
    design: &ExperimentDesign,
    window: Window,
) -> Result<f64, EstimatorError> {
    if u.len() != v.len() {
        return Err(EstimatorError::GridMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() != design.n() + 1 {
        return Err(EstimatorError::GridMismatch {
            left: u.len(),
            right: design.n() + 1,
        });
    }
    Ok(l2_diff_sq_unchecked(u, v, design.spacing(), window))
}

pub(crate) fn l2_diff_sq_unchecked(u: &[f64], v: &[f64], h: f64, window: Window) -> f64 {
    let (s, e) = (window.start, window.end);
    if e <= s {
        return 0.0;
    }
    let mut acc = 0.0;
    for k in s..=e {
        let d = u[k] - v[k];
        acc += d * d;
    }
    let ds = u[s] - v[s];
    let de = u[e] - v[e];
    h * (acc - 0.5 * (ds * ds + de * de))
}

/// Squared L² norm over the window.
pub fn l2_norm_sq(u: &[f64], h: f64, window: Window) -> f64 {
    trapezoid(
        &u[window.start..=window.end]
            .iter()
            .map(|x| x * x)
            .collect::<Vec<_>>(),
        h,
    )
}

/// One Lepski comparison between bandwidths `lambda > lambda_prime`.
#[derive(Clone, Debug, PartialEq)]
pub struct LepskiComparison {
    pub j: usize,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub stat: f64,
    pub threshold: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LepskiSelection {
    pub j: usize,
    /// `Λ_j`, descending.
    pub grid: Vec<f64>,
    pub index: usize,
    pub lambda_hat: f64,
    /// Every comparison evaluated, in scan order.
    pub diagnostics: Vec<LepskiComparison>,
    /// `q̂^{(j)}` at the selected bandwidth on the evaluation grid.
    pub estimate: Vec<f64>,
}

/// Lepski selection for one derivative order.
pub fn lepski_select(
    y: &[f64],
    kernel: &DerivKernel,
    config: &LepskiConfig,
    design: &ExperimentDesign,
    window: Window,
) -> Result<LepskiSelection, EstimatorError> {
    let j = kernel.j();
    let grid = lepski_grid(j, config, design)?;
    let estimates = grid
        .iter()
        .map(|&lambda| estimate_qj_grid(y, design, kernel, lambda))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(select_from_estimates(
        j, grid, estimates, kernel, config, design, window,
    ))
}

pub(crate) fn select_from_estimates(
    j: usize,
    grid: Vec<f64>,
    mut estimates: Vec<Vec<f64>>,
    kernel: &DerivKernel,
    config: &LepskiConfig,
    design: &ExperimentDesign,
    window: Window,
) -> LepskiSelection {
    let gamma_sq = config.gamma_sq(kernel, design);
    let h = design.spacing();
    let thresholds: Vec<f64> = grid
        .iter()
        .map(|&l| gamma_sq * rho_sq(l, j, config, design))
        .collect();
    let mut diagnostics = Vec::new();
    let mut chosen = grid.len() - 1;
    for i in 0..grid.len() {
        let mut ok = true;
        for k in i + 1..grid.len() {
            let threshold = thresholds[k];
            let stat = if threshold.is_infinite() {
                0.0
            } else {
                l2_diff_sq_unchecked(&estimates[i], &estimates[k], h, window)
            };
            let accepted = stat <= threshold;
            ok &= accepted;
            diagnostics.push(LepskiComparison {
                j,
                lambda: grid[i],
                lambda_prime: grid[k],
                stat,
                threshold,
                accepted,
            });
        }
        if ok {
            chosen = i;
            break;
        }
    }
    LepskiSelection {
        j,
        lambda_hat: grid[chosen],
        index: chosen,
        grid,
        diagnostics,
        estimate: estimates.swap_remove(chosen),
    }
}

/// How the per-order bandwidths are chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum BandwidthPolicy {
    Lepski,
    /// `λ_0..λ_r`.
    Fixed(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateResult {
    /// `f̂` on the evaluation grid.
    pub f_hat: Vec<f64>,
    /// `q̂^{(j)}`, `j = 0..=r`, on the evaluation grid.
    pub q_hat: Vec<Vec<f64>>,
    pub lambda_hat: Vec<f64>,
    /// Per-order Lepski comparisons (empty for fixed bandwidths).
    pub diagnostics: Vec<Vec<LepskiComparison>>,
}

/// Reusable plug-in estimator for one kernel `g`, design and configuration.
#[derive(Clone, Debug)]
pub struct DeconvolutionEstimator {
    coeffs: InversionCoefficients,
    kernels: Vec<DerivKernel>,
    config: LepskiConfig,
    design: ExperimentDesign,
    window: Window,
    phi1_samples: Vec<f64>,
}

impl DeconvolutionEstimator {
    /// Builds kernels `K_0..K_r` of order `kernel_order` and the inversion
    /// coefficients of `g`. Lepski comparisons use `window`.
    pub fn new(
        g: &RationalLaplaceKernel,
        kernel_order: usize,
        config: LepskiConfig,
        design: ExperimentDesign,
        window: Window,
    ) -> Result<Self, EstimatorError> {
        let kernels = kernel_family(kernel_order, g.r())?;
        Self::with_kernels(g, kernels, config, design, window)
    }

    pub fn with_kernels(
        g: &RationalLaplaceKernel,
        kernels: Vec<DerivKernel>,
        config: LepskiConfig,
        design: ExperimentDesign,
        window: Window,
    ) -> Result<Self, EstimatorError> {
        config.validate()?;
        let coeffs = g.inversion_coefficients()?;
        if kernels.len() != g.r() + 1 || kernels.iter().enumerate().any(|(j, k)| k.j() != j) {
            return Err(EstimatorError::BadConfig(format!(
                "need kernels K_0..K_{} in order",
                g.r()
            )));
        }
        let phi1_samples = sample_phi1(&coeffs, design.spacing(), design.n() + 1);
        Ok(DeconvolutionEstimator {
            coeffs,
            kernels,
            config,
            design,
            window,
            phi1_samples,
        })
    }

    pub fn coefficients(&self) -> &InversionCoefficients {
        &self.coeffs
    }

    pub fn kernels(&self) -> &[DerivKernel] {
        &self.kernels
    }

    pub fn config(&self) -> &LepskiConfig {
        &self.config
    }

    pub fn design(&self) -> &ExperimentDesign {
        &self.design
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn r(&self) -> usize {
        self.coeffs.r()
    }

    pub fn grid(&self, j: usize) -> Result<Vec<f64>, EstimatorError> {
        lepski_grid(j, &self.config, &self.design)
    }

    pub fn estimate_qj(
        &self,
        y: &[f64],
        j: usize,
        lambda: f64,
    ) -> Result<Vec<f64>, EstimatorError> {
        estimate_qj_grid(y, &self.design, &self.kernels[j], lambda)
    }

    pub fn select(&self, y: &[f64], j: usize) -> Result<LepskiSelection, EstimatorError> {
        lepski_select(y, &self.kernels[j], &self.config, &self.design, self.window)
    }

    /// `∫₀ᵗ u(t - x) φ₁(x) dx` on the evaluation grid.
    pub fn phi1_convolution(&self, u: &[f64]) -> Vec<f64> {
        if self.coeffs.exp_terms().is_empty() {
            return vec![0.0; u.len()];
        }
        causal_trapezoid_convolution(u, &self.phi1_samples, self.design.spacing())
    }

    /// Plug-in `f̂` from per-order estimates on the evaluation grid.
    pub fn assemble(&self, q_hat: &[Vec<f64>]) -> Vec<f64> {
        let r = self.r();
        let conv = self.phi1_convolution(&q_hat[r]);
        let mut derivs = vec![0.0; r + 1];
        (0..=self.design.n())
            .map(|k| {
                for (j, d) in derivs.iter_mut().enumerate() {
                    *d = q_hat[j][k];
                }
                self.coeffs.combine(&derivs, conv[k])
            })
            .collect()
    }

    pub fn estimate(
        &self,
        y: &[f64],
        policy: &BandwidthPolicy,
    ) -> Result<EstimateResult, EstimatorError> {
        check_observations(y, &self.design)?;
        let r = self.r();
        let (q_hat, lambda_hat, diagnostics) = match policy {
            BandwidthPolicy::Lepski => {
                let mut q_hat = Vec::with_capacity(r + 1);
                let mut lambdas = Vec::with_capacity(r + 1);
                let mut diags = Vec::with_capacity(r + 1);
                for j in 0..=r {
                    let sel = self.select(y, j)?;
                    lambdas.push(sel.lambda_hat);
                    diags.push(sel.diagnostics);
                    q_hat.push(sel.estimate);
                }
                (q_hat, lambdas, diags)
            }
            BandwidthPolicy::Fixed(bandwidths) => {
                if bandwidths.len() != r + 1 {
                    return Err(EstimatorError::BandwidthCount {
                        expected: r + 1,
                        found: bandwidths.len(),
                    });
                }
                let q_hat = bandwidths
                    .iter()
                    .enumerate()
                    .map(|(j, &l)| self.estimate_qj(y, j, l))
                    .collect::<Result<Vec<_>, _>>()?;
                (q_hat, bandwidths.clone(), vec![Vec::new(); r + 1])
            }
        };
        let f_hat = self.assemble(&q_hat);
        Ok(EstimateResult {
            f_hat,
            q_hat,
            lambda_hat,
            diagnostics,
        })
    }
}

/// `estimate_f`: one-shot plug-in reconstruction.
pub fn estimate_f(
    y: &[f64],
    g: &RationalLaplaceKernel,
    kernels: Vec<DerivKernel>,
    config: &LepskiConfig,
    design: &ExperimentDesign,
    window: Window,
    policy: &BandwidthPolicy,
) -> Result<EstimateResult, EstimatorError> {
    DeconvolutionEstimator::with_kernels(g, kernels, *config, *design, window)?.estimate(y, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(n: usize, t: f64) -> ExperimentDesign {
        ExperimentDesign::new(n, t).unwrap()
    }

    #[test]
    fn grid_examples() {
        let d = design(1024, 1.0);
        let cfg = LepskiConfig::new(1.0, 1.0);
        let g0 = lepski_grid(0, &cfg, &d).unwrap();
        assert_eq!(g0.len(), 11);
        assert_eq!(g0[0], 1.0);
        assert_eq!(g0[10], 2f64.powi(-10));
        assert_eq!(
            lepski_grid(1, &cfg, &d).unwrap(),
            vec![1.0, 0.5, 0.25, 0.125]
        );
        let loud = LepskiConfig::new(40.0, 1.0);
        assert!(matches!(
            lepski_grid(0, &loud, &d),
            Err(EstimatorError::EmptyGrid { .. })
        ));
    }

    #[test]
    fn noiseless_grid_is_truncated() {
        let d = design(256, 1.0);
        let grid = lepski_grid(0, &LepskiConfig::new(0.0, 1.0), &d).unwrap();
        assert_eq!(*grid.last().unwrap(), 1.0 / 256.0);
    }

    #[test]
    fn rho_sq_examples() {
        let d = design(1024, 1.0);
        let cfg = LepskiConfig::new(1.0, 1.0);
        assert!((rho_sq(0.25, 0, &cfg, &d) - 1.0 / 64.0).abs() < 1e-15);
        assert!((rho_sq(1.0, 3, &cfg, &d) - 4.0 / 1024.0).abs() < 1e-15);
        let lrd = LepskiConfig::new(1.0, 0.5);
        assert!((rho_sq(1.0, 0, &lrd, &d) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn oracle_bandwidth_examples() {
        let d = design(1024, 1.0);
        assert!((oracle_bandwidth(1.0, 1, &d, 1.0, 1.0) - 0.25).abs() < 1e-14);
        assert!((oracle_bandwidth(1.0, 1, &d, 0.5, 1.0) - 0.5).abs() < 1e-14);
        assert!((oracle_bandwidth(1e9, 1, &d, 1.0, 1.0) - 1.0).abs() < 1e-6);
        let grid = [1.0, 0.5, 0.25, 0.125];
        assert_eq!(snap_to_grid(0.3, &grid), 2);
    }

    #[test]
    fn config_validation() {
        let mut cfg = LepskiConfig::new(1.0, 1.0);
        cfg.gamma_sq_factor = 1.0;
        assert!(cfg.validate().is_err());
        cfg.gamma_sq_factor = f64::INFINITY;
        assert!(cfg.validate().is_ok());
        cfg.a = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn zero_data_gives_zero_estimate() {
        let d = design(512, 2.0);
        let k = DerivKernel::build(3, 1).unwrap();
        let y = vec![0.0; 512];
        assert!(estimate_qj_grid(&y, &d, &k, 0.3)
            .unwrap()
            .iter()
            .all(|&v| v.abs() < 1e-15));
        assert!(matches!(
            estimate_qj(&y, &d, &k, 0.0, &[1.0]),
            Err(EstimatorError::BandwidthOutOfRange { .. })
        ));
        assert!(matches!(
            estimate_qj(&y, &d, &k, 2.5, &[1.0]),
            Err(EstimatorError::BandwidthOutOfRange { .. })
        ));
    }

    #[test]
    fn direct_and_convolution_paths_agree() {
        let d = design(300, 3.0);
        let y: Vec<f64> = (1..=300)
            .map(|i| ((i * 7919 % 113) as f64 / 57.0).sin())
            .collect();
        for j in 0..3 {
            let k = DerivKernel::build(4, j).unwrap();
            for &lambda in &[0.05, 0.37, 1.0, 3.0] {
                let fast = estimate_qj_grid(&y, &d, &k, lambda).unwrap();
                let slow = estimate_qj(&y, &d, &k, lambda, &d.eval_grid()).unwrap();
                for (a, b) in fast.iter().zip(&slow) {
                    assert!(
                        (a - b).abs() < 1e-9 * (1.0 + b.abs()),
                        "j={j} λ={lambda}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn constant_signal_is_reproduced_in_interior() {
        let n = 4096;
        let d = design(n, 1.0);
        let k = DerivKernel::build(2, 0).unwrap();
        let y = vec![2.5; n];
        // 129 points fall inside the window, matching 2λ/Δ exactly.
        let lambda = 64.5 * d.spacing();
        let q = estimate_qj(&y, &d, &k, lambda, &[0.5]).unwrap();
        assert!((q[0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn l2_examples() {
        let d = design(1024, 1.0);
        let grid = d.eval_grid();
        let zeros = vec![0.0; 1025];
        let ones = vec![1.0; 1025];
        let w = d.full_window();
        assert_eq!(l2_diff_sq(&ones, &ones, &d, w).unwrap(), 0.0);
        assert!((l2_diff_sq(&ones, &zeros, &d, w).unwrap() - 1.0).abs() < 1e-14);
        assert!((l2_diff_sq(&grid, &zeros, &d, w).unwrap() - 1.0 / 3.0).abs() < 1e-5);
        assert!(matches!(
            l2_diff_sq(&ones[..10], &zeros, &d, w),
            Err(EstimatorError::GridMismatch { .. })
        ));
    }

    #[test]
    fn lepski_on_zero_data_picks_largest() {
        let d = design(1024, 1.0);
        let k = DerivKernel::build(3, 0).unwrap();
        let sel = lepski_select(
            &vec![0.0; 1024],
            &k,
            &LepskiConfig::new(1.0, 1.0),
            &d,
            d.full_window(),
        )
        .unwrap();
        assert_eq!(sel.lambda_hat, 1.0);
        assert!(sel.diagnostics.iter().all(|c| c.stat < 1e-25 && c.accepted));
    }

    #[test]
    fn infinite_threshold_picks_largest() {
        let d = design(1024, 1.0);
        let k = DerivKernel::build(3, 0).unwrap();
        let y: Vec<f64> = (0..1024).map(|i| ((i * 31 % 17) as f64) - 8.0).collect();
        let mut cfg = LepskiConfig::new(1.0, 1.0);
        cfg.gamma_sq_factor = f64::INFINITY;
        let sel = lepski_select(&y, &k, &cfg, &d, d.full_window()).unwrap();
        assert_eq!(sel.lambda_hat, 1.0);
    }
}
