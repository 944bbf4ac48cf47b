//! Monte Carlo risk studies.
//!
//! Replicates run in parallel, but each one draws from its own stream
//! `(cell_seed, replicate)` and results are gathered in replicate order, so
//! every number here is independent of thread scheduling.

use rayon::prelude::*;

use crate::deriv_kernels::DerivKernel;
use crate::design::{ExperimentDesign, Window};
use crate::estimator::{
    estimate_qj_grid, l2_diff_sq, lepski_grid, oracle_bandwidth, rho_sq, snap_to_grid,
    BandwidthPolicy, DeconvolutionEstimator, LepskiConfig,
};
use crate::laplace_kernel::RationalLaplaceKernel;
use crate::lrd_noise::NoiseModel;
use crate::rng::derive_seed;
use crate::stats::{mean, median, ols, standard_error, LineFit};

use super::scenario::Scenario;
use super::truth::TruthSpec;
use super::HarnessError;

/// Largest number of bandwidth combinations the exhaustive oracle scans.
pub const ORACLE_MAX_COMBINATIONS: usize = 250_000;

/// Estimator knobs shared by all studies; `σ` and `α` come from the noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorSettings {
    /// Kernel order `L`; `None` means `r + 2`.
    pub kernel_order: Option<usize>,
    pub a: f64,
    pub gamma_sq_factor: f64,
    pub min_bandwidth_cells: f64,
    /// Risks and Lepski comparisons use `[margin, T - margin]`.
    pub window_margin: f64,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        EstimatorSettings {
            kernel_order: None,
            a: 2.0,
            gamma_sq_factor: 4.0,
            min_bandwidth_cells: 1.0,
            window_margin: 1.0,
        }
    }
}

impl EstimatorSettings {
    pub fn from_config(cfg: &super::ExperimentConfig) -> Self {
        EstimatorSettings {
            kernel_order: cfg.kernels.order,
            a: cfg.lepski.a,
            gamma_sq_factor: cfg.lepski.gamma_sq_factor,
            min_bandwidth_cells: cfg.lepski.min_bandwidth_cells,
            window_margin: cfg.estimator.window_margin,
        }
    }

    pub fn lepski(&self, noise: &NoiseModel) -> LepskiConfig {
        LepskiConfig {
            a: self.a,
            gamma_sq_factor: self.gamma_sq_factor,
            sigma: noise.sigma(),
            alpha: noise.alpha(),
            min_bandwidth_cells: self.min_bandwidth_cells,
        }
    }

    pub fn order_for(&self, r: usize) -> usize {
        self.kernel_order.unwrap_or(r + 2)
    }

    pub fn window(&self, design: &ExperimentDesign) -> Result<Window, HarnessError> {
        Ok(design.interior(self.window_margin)?)
    }

    pub fn estimator(&self, scenario: &Scenario) -> Result<DeconvolutionEstimator, HarnessError> {
        let design = *scenario.design();
        Ok(DeconvolutionEstimator::new(
            scenario.g(),
            self.order_for(scenario.g().r()),
            self.lepski(scenario.noise()),
            design,
            self.window(&design)?,
        )?)
    }
}

/// Seed of the `n`-cell of an experiment. It does not depend on `α`, so
/// cells that differ only in memory reuse the same underlying normals.
pub fn cell_seed(seed: u64, n: usize) -> u64 {
    derive_seed(seed, n as u64)
}

/// `−2mα/(2m+2r+1)`.
pub fn theoretical_exponent(m: f64, r: usize, alpha: f64) -> f64 {
    -2.0 * m * alpha / (2.0 * m + 2.0 * r as f64 + 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiskRow {
    pub n: usize,
    pub mean_ise: f64,
    pub se: f64,
    pub median_ise: f64,
    pub replicates: usize,
    /// Mean ISE over the whole of `[0, T]`, boundary bands included.
    pub mean_ise_full: f64,
    /// Mean selected bandwidth per derivative order.
    pub mean_lambda: Vec<f64>,
    /// Per-replicate interior ISE in replicate order.
    pub ises: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiskReport {
    pub truth: String,
    pub alpha: f64,
    pub m: f64,
    pub r: usize,
    pub rows: Vec<RiskRow>,
    /// OLS of `ln mean ISE` on `ln n`; `None` with fewer than two sizes.
    pub fit: Option<LineFit>,
    pub theoretical_exponent: f64,
}

impl RiskReport {
    /// Whether the theoretical exponent lies within
    /// `fitted ± max(tol, 2·SE)`.
    pub fn exponent_consistent(&self, tol: f64) -> bool {
        match self.fit {
            Some(fit) => {
                let band = tol.max(2.0 * fit.slope_se);
                (fit.slope - self.theoretical_exponent).abs() <= band
            }
            None => false,
        }
    }
}

/// Risk of one estimator over `R` replicates of one scenario.
pub fn risk_cell(
    scenario: &Scenario,
    settings: &EstimatorSettings,
    policy: &BandwidthPolicy,
    replicates: usize,
    seed: u64,
) -> Result<RiskRow, HarnessError> {
    let est = settings.estimator(scenario)?;
    let design = *scenario.design();
    let window = est.window();
    let full = design.full_window();
    let cseed = cell_seed(seed, design.n());
    let per_rep: Vec<(f64, f64, Vec<f64>)> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| -> Result<_, HarnessError> {
            let y = scenario.observe(cseed, i);
            let res = est.estimate(&y, policy)?;
            let ise = l2_diff_sq(&res.f_hat, scenario.f_exact(), &design, window)?;
            let ise_full = l2_diff_sq(&res.f_hat, scenario.f_exact(), &design, full)?;
            Ok((ise, ise_full, res.lambda_hat))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ises: Vec<f64> = per_rep.iter().map(|p| p.0).collect();
    let full_ises: Vec<f64> = per_rep.iter().map(|p| p.1).collect();
    let r = est.r();
    let mean_lambda = (0..=r)
        .map(|j| mean(&per_rep.iter().map(|p| p.2[j]).collect::<Vec<_>>()))
        .collect();
    Ok(RiskRow {
        n: design.n(),
        mean_ise: mean(&ises),
        se: if replicates > 1 {
            standard_error(&ises)
        } else {
            0.0
        },
        median_ise: median(&ises),
        replicates,
        mean_ise_full: mean(&full_ises),
        mean_lambda,
        ises,
    })
}

/// `mc_risk`: mean interior ISE per sample size and its log–log slope.
#[allow(clippy::too_many_arguments)]
pub fn mc_risk(
    truth: &TruthSpec,
    g: &RationalLaplaceKernel,
    horizon: f64,
    n_list: &[usize],
    noise: &NoiseModel,
    policy: &BandwidthPolicy,
    settings: &EstimatorSettings,
    replicates: usize,
    seed: u64,
) -> Result<RiskReport, HarnessError> {
    if replicates < 2 {
        return Err(HarnessError::Invalid(
            "mc_risk needs at least 2 replicates".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let design = ExperimentDesign::new(n, horizon)?;
        design.check_regime(noise.alpha());
        let scenario = Scenario::new(g.clone(), truth.clone(), design, *noise)?;
        rows.push(risk_cell(&scenario, settings, policy, replicates, seed)?);
    }
    let fit = (rows.len() >= 2 && rows.iter().all(|r| r.mean_ise > 0.0)).then(|| {
        let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.mean_ise.ln()).collect();
        ols(&xs, &ys)
    });
    Ok(RiskReport {
        truth: truth.name.clone(),
        alpha: noise.alpha(),
        m: truth.m,
        r: g.r(),
        rows,
        fit,
        theoretical_exponent: theoretical_exponent(truth.m, g.r(), noise.alpha()),
    })
}

/// Monte Carlo means of the three terms bounding the risk.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// `E‖q̂^{(r)} − q^{(r)}‖²`.
    pub r1: f64,
    /// `E‖(q̂^{(r)} − q^{(r)}) ∗ φ₁‖²`.
    pub r2: f64,
    /// `Σ_j a²_{0,r−j−1} E‖q̂^{(j)} − q^{(j)}‖²`.
    pub r3: f64,
    /// Measured `E‖f̂ − f‖²`.
    pub total: f64,
    /// `(2 + r)/B_r² · (R₁ + R₂ + R₃)`.
    pub bound: f64,
    /// Largest per-replicate `total − bound`; the bound holds pathwise, so
    /// this is at most quadrature error.
    pub worst_gap: f64,
}

impl Decomposition {
    pub fn holds(&self, tol: f64) -> bool {
        self.total <= self.bound + tol
    }
}

/// `risk_decomposition` on the interior window.
pub fn risk_decomposition(
    scenario: &Scenario,
    settings: &EstimatorSettings,
    policy: &BandwidthPolicy,
    replicates: usize,
    seed: u64,
) -> Result<Decomposition, HarnessError> {
    let est = settings.estimator(scenario)?;
    let design = *scenario.design();
    let window = est.window();
    let r = est.r();
    let coeffs = est.coefficients().clone();
    let cseed = cell_seed(seed, design.n());
    let zero = vec![0.0; design.n() + 1];
    let parts: Vec<[f64; 5]> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| -> Result<[f64; 5], HarnessError> {
            let y = scenario.observe(cseed, i);
            let res = est.estimate(&y, policy)?;
            let err_r: Vec<f64> = res.q_hat[r]
                .iter()
                .zip(scenario.q_exact(r))
                .map(|(a, b)| a - b)
                .collect();
            let r1 = l2_diff_sq(&err_r, &zero, &design, window)?;
            let r2 = l2_diff_sq(&est.phi1_convolution(&err_r), &zero, &design, window)?;
            let mut r3 = 0.0;
            for j in 0..r {
                let a = coeffs.a0()[r - j - 1];
                r3 += a * a * l2_diff_sq(&res.q_hat[j], scenario.q_exact(j), &design, window)?;
            }
            let total = l2_diff_sq(&res.f_hat, scenario.f_exact(), &design, window)?;
            let bound = (2.0 + r as f64) / (coeffs.b_r() * coeffs.b_r()) * (r1 + r2 + r3);
            Ok([r1, r2, r3, total, total - bound])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let col = |k: usize| mean(&parts.iter().map(|p| p[k]).collect::<Vec<_>>());
    let (r1, r2, r3) = (col(0), col(1), col(2));
    Ok(Decomposition {
        r1,
        r2,
        r3,
        total: col(3),
        bound: (2.0 + r as f64) / (coeffs.b_r() * coeffs.b_r()) * (r1 + r2 + r3),
        worst_gap: parts.iter().map(|p| p[4]).fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceRow {
    pub n: usize,
    pub mean_sq: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub alpha: f64,
    pub lambda: f64,
    pub j: usize,
    pub rows: Vec<VarianceRow>,
    pub fit: LineFit,
}

/// Pure-noise variance of `q̂^{(j)}` at a fixed bandwidth as `n` grows.
///
/// With `f ≡ 0` and unit `σ`, `E‖q̂^{(j)}_λ − q^{(j)}‖² = E‖q̂^{(j)}_λ‖²`,
/// measured on `[λ, T − λ]`. Its slope in `n` should be `−α`.
#[allow(clippy::too_many_arguments)]
pub fn variance_scaling(
    noise: &NoiseModel,
    horizon: f64,
    n_list: &[usize],
    lambda: f64,
    kernel: &DerivKernel,
    replicates: usize,
    seed: u64,
) -> Result<VarianceReport, HarnessError> {
    let g = RationalLaplaceKernel::new(vec![1.0], vec![1.0, 1.0])?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let design = ExperimentDesign::new(n, horizon)?;
        let window = design.interior(lambda)?;
        let scenario = Scenario::new(g.clone(), TruthSpec::zero(), design, *noise)?;
        let cseed = cell_seed(seed, n);
        let zero = vec![0.0; n + 1];
        let sq: Vec<f64> = (0..replicates as u64)
            .into_par_iter()
            .map(|i| -> Result<f64, HarnessError> {
                let y = scenario.observe(cseed, i);
                let q = estimate_qj_grid(&y, &design, kernel, lambda)?;
                Ok(l2_diff_sq(&q, &zero, &design, window)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(VarianceRow {
            n,
            mean_sq: mean(&sq),
            se: standard_error(&sq),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_sq.ln()).collect();
    Ok(VarianceReport {
        alpha: noise.alpha(),
        lambda,
        j: kernel.j(),
        fit: ols(&xs, &ys),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub n: usize,
    pub j: usize,
    pub lambda: f64,
    /// `λ_o` snapped to `Λ_j`.
    pub lambda_o: f64,
    pub threshold: f64,
    pub exceedance: f64,
    pub replicates: usize,
    /// Mean of `‖q̂_λ − q̂_{λ_o}‖² / (γ_j² ρ²_{λ,j})`.
    pub mean_ratio: f64,
}

/// Exceedance frequencies of `‖q̂_{n,λ} − q̂_{n,λ_o}‖² > γ_j² ρ²_{λ,j}`
/// under pure noise, for grid bandwidths `λ < λ_o` above
/// `(σ²T²/n^α)^{1/(2j+1)}`.
///
/// `λ_o` is the oracle bandwidth for smoothness `m` with constant `c`,
/// snapped to `Λ_j`.
#[allow(clippy::too_many_arguments)]
pub fn lepski_tail_study(
    g: &RationalLaplaceKernel,
    horizon: f64,
    n_list: &[usize],
    noise: &NoiseModel,
    orders: &[usize],
    m: f64,
    c: f64,
    settings: &EstimatorSettings,
    replicates: usize,
    seed: u64,
) -> Result<Vec<TailRow>, HarnessError> {
    let r = g.r();
    let order = settings.order_for(r);
    let config = settings.lepski(noise);
    let mut out = Vec::new();
    for &n in n_list {
        let design = ExperimentDesign::new(n, horizon)?;
        let window = settings.window(&design)?;
        let scenario = Scenario::new(g.clone(), TruthSpec::zero(), design, *noise)?;
        let cseed = cell_seed(seed, n);
        for &j in orders {
            let kernel =
                DerivKernel::build(order, j).map_err(crate::estimator::EstimatorError::from)?;
            let grid = lepski_grid(j, &config, &design)?;
            let lambda_o =
                grid[snap_to_grid(oracle_bandwidth(m, r, &design, noise.alpha(), c), &grid)];
            let floor = (noise.sigma().powi(2) * horizon * horizon
                / (n as f64).powf(noise.alpha()))
            .powf(1.0 / (2 * j + 1) as f64);
            let lambdas: Vec<f64> = grid
                .iter()
                .copied()
                .filter(|&l| l < lambda_o && l > floor)
                .collect();
            if lambdas.is_empty() {
                continue;
            }
            let gamma_sq = config.gamma_sq(&kernel, &design);
            let thresholds: Vec<f64> = lambdas
                .iter()
                .map(|&l| gamma_sq * rho_sq(l, j, &config, &design))
                .collect();
            let ratios: Vec<Vec<f64>> = (0..replicates as u64)
                .into_par_iter()
                .map(|i| -> Result<Vec<f64>, HarnessError> {
                    let y = scenario.observe(cseed, i);
                    let reference = estimate_qj_grid(&y, &design, &kernel, lambda_o)?;
                    lambdas
                        .iter()
                        .zip(&thresholds)
                        .map(|(&l, &thr)| {
                            let q = estimate_qj_grid(&y, &design, &kernel, l)?;
                            Ok(l2_diff_sq(&q, &reference, &design, window)? / thr)
                        })
                        .collect()
                })
                .collect::<Result<Vec<_>, _>>()?;
            for (k, (&lambda, &threshold)) in lambdas.iter().zip(&thresholds).enumerate() {
                let col: Vec<f64> = ratios.iter().map(|row| row[k]).collect();
                let exceed = col.iter().filter(|&&v| v > 1.0).count();
                out.push(TailRow {
                    n,
                    j,
                    lambda,
                    lambda_o,
                    threshold,
                    exceedance: exceed as f64 / replicates as f64,
                    replicates,
                    mean_ratio: mean(&col),
                });
            }
        }
    }
    Ok(out)
}

/// Lepski ISE against the best fixed bandwidths in hindsight.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub n: usize,
    pub lepski_ises: Vec<f64>,
    pub lepski_median: f64,
    /// Bandwidths `λ_0..λ_r` minimising the median ISE over replicates.
    pub best_bandwidths: Vec<f64>,
    pub best_median: f64,
    pub best_mean: f64,
    pub combinations: usize,
}

impl OracleReport {
    pub fn ratio(&self) -> f64 {
        self.lepski_median / self.best_median
    }
}

/// Exhaustive search over `Λ_0 × … × Λ_r` for the fixed bandwidths with
/// the smallest median ISE, computed on the same replicates as Lepski.
///
/// `f̂` is linear in the `q̂^{(j)}`, so each order's contribution is formed
/// once per bandwidth and every combination only costs one sum.
pub fn fixed_bandwidth_oracle(
    scenario: &Scenario,
    settings: &EstimatorSettings,
    replicates: usize,
    seed: u64,
) -> Result<OracleReport, HarnessError> {
    let est = settings.estimator(scenario)?;
    let design = *scenario.design();
    let window = est.window();
    let r = est.r();
    let grids: Vec<Vec<f64>> = (0..=r).map(|j| est.grid(j)).collect::<Result<_, _>>()?;
    let combinations: usize = grids.iter().map(Vec::len).product();
    if combinations > ORACLE_MAX_COMBINATIONS {
        return Err(HarnessError::Invalid(format!(
            "{combinations} bandwidth combinations exceed the oracle cap {ORACLE_MAX_COMBINATIONS}"
        )));
    }
    let cseed = cell_seed(seed, design.n());
    let f = scenario.f_exact();
    let (s, e) = (window.start, window.end);
    let h = design.spacing();

    let per_rep: Vec<(f64, Vec<f64>)> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, Vec<f64>), HarnessError> {
            let y = scenario.observe(cseed, i);
            let lepski = est.estimate(&y, &BandwidthPolicy::Lepski)?;
            let lepski_ise = l2_diff_sq(&lepski.f_hat, f, &design, window)?;
            // contributions[j][k]: order-j part of f̂ at bandwidth grids[j][k],
            // restricted to the window.
            let mut contributions: Vec<Vec<Vec<f64>>> = Vec::with_capacity(r + 1);
            for (j, grid) in grids.iter().enumerate() {
                let mut per_lambda = Vec::with_capacity(grid.len());
                for &lambda in grid {
                    let mut q_hat = vec![vec![0.0; design.n() + 1]; r + 1];
                    q_hat[j] = est.estimate_qj(&y, j, lambda)?;
                    per_lambda.push(est.assemble(&q_hat)[s..=e].to_vec());
                }
                contributions.push(per_lambda);
            }
            let target = &f[s..=e];
            let mut ises = Vec::with_capacity(combinations);
            let mut idx = vec![0usize; r + 1];
            let mut sum = vec![0.0; target.len()];
            loop {
                sum.iter_mut().zip(target).for_each(|(v, t)| *v = -t);
                for (j, &k) in idx.iter().enumerate() {
                    for (v, c) in sum.iter_mut().zip(&contributions[j][k]) {
                        *v += c;
                    }
                }
                let acc: f64 = sum.iter().map(|v| v * v).sum();
                let ends = sum[0] * sum[0] + sum[sum.len() - 1] * sum[sum.len() - 1];
                ises.push(h * (acc - 0.5 * ends));
                // Odometer increment, last order fastest.
                let mut pos = r + 1;
                loop {
                    if pos == 0 {
                        return Ok((lepski_ise, ises));
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < grids[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let lepski_ises: Vec<f64> = per_rep.iter().map(|p| p.0).collect();
    let mut best: Option<(usize, f64, f64)> = None;
    for c in 0..combinations {
        let col: Vec<f64> = per_rep.iter().map(|p| p.1[c]).collect();
        let med = median(&col);
        if best.is_none_or(|(_, b, _)| med < b) {
            best = Some((c, med, mean(&col)));
        }
    }
    let (best_idx, best_median, best_mean) = best.expect("at least one combination");
    let mut rem = best_idx;
    let mut best_bandwidths = vec![0.0; r + 1];
    for j in (0..=r).rev() {
        best_bandwidths[j] = grids[j][rem % grids[j].len()];
        rem /= grids[j].len();
    }
    Ok(OracleReport {
        n: design.n(),
        lepski_median: median(&lepski_ises),
        lepski_ises,
        best_bandwidths,
        best_median,
        best_mean,
        combinations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> RationalLaplaceKernel {
        RationalLaplaceKernel::new(vec![1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn theoretical_exponents() {
        assert!((theoretical_exponent(1.0, 1, 1.0) + 0.4).abs() < 1e-15);
        assert!((theoretical_exponent(1.0, 1, 0.5) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn noiseless_risk_has_zero_spread() {
        let noise = NoiseModel::iid(0.0).unwrap();
        let settings = EstimatorSettings::default();
        let report = mc_risk(
            &TruthSpec::kink(1, 1.25, 2.75),
            &g1(),
            4.0,
            &[512, 1024],
            &noise,
            &BandwidthPolicy::Fixed(vec![0.25, 0.25]),
            &settings,
            3,
            5,
        )
        .unwrap();
        for row in &report.rows {
            assert_eq!(row.se, 0.0);
            assert!(row.mean_ise > 0.0);
        }
    }

    #[test]
    fn decomposition_without_zeros_has_no_r2() {
        let g = RationalLaplaceKernel::new(vec![1.0], vec![1.0, 2.0, 1.0]).unwrap();
        let d = ExperimentDesign::new(1024, 4.0).unwrap();
        let s = Scenario::new(
            g,
            TruthSpec::smooth(4, 2),
            d,
            NoiseModel::iid(0.05).unwrap(),
        )
        .unwrap();
        let dec = risk_decomposition(
            &s,
            &EstimatorSettings::default(),
            &BandwidthPolicy::Fixed(vec![0.5, 0.5, 0.5]),
            4,
            1,
        )
        .unwrap();
        assert_eq!(dec.r2, 0.0);
        assert!(dec.holds(1e-12));
        assert!(dec.worst_gap <= 1e-12);
    }

    #[test]
    fn infinite_threshold_never_exceeds() {
        let settings = EstimatorSettings {
            gamma_sq_factor: f64::INFINITY,
            ..EstimatorSettings::default()
        };
        let rows = lepski_tail_study(
            &g1(),
            4.0,
            &[2048],
            &NoiseModel::iid(1.0).unwrap(),
            &[0],
            1.0,
            1.0,
            &settings,
            8,
            3,
        )
        .unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.exceedance == 0.0));
    }

    #[test]
    fn oracle_is_no_worse_than_lepski_on_average_grid() {
        let d = ExperimentDesign::new(1024, 4.0).unwrap();
        let s = Scenario::new(
            g1(),
            TruthSpec::kink(1, 1.25, 2.75),
            d,
            NoiseModel::iid(0.05).unwrap(),
        )
        .unwrap();
        let rep = fixed_bandwidth_oracle(&s, &EstimatorSettings::default(), 6, 2).unwrap();
        // Lepski picks from the same grids, so the per-combination median can
        // only beat it when the selection varies between replicates.
        assert!(
            rep.best_median
                <= rep
                    .lepski_ises
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::max)
        );
        assert_eq!(rep.best_bandwidths.len(), 2);
    }
}
