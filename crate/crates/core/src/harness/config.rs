//! Experiment configuration files.
//!
//! Configs are flat TOML: every key is a dotted path such as `design.n` or
//! `lepski.gamma_sq_factor`, so a file reads as plain `key = value` lines.
//!
//! ```toml
//! seed = 20240611
//! truth.name = "kink"
//! truth.m = 1
//! truth.knots = [1.25, 2.75]
//! g.numer = [1.0]
//! g.denom = [1.0, 1.0]
//! design.n = 4096
//! design.T = 4.0
//! noise.kind = "fgn"
//! noise.alpha = 1.0
//! noise.sigma = 0.05
//! kernels.L = 3
//! lepski.a = 1.189207115002721
//! lepski.gamma_sq_factor = 4.0
//! ```
//!
//! Every key except `g.numer`/`g.denom` has a default.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::truth::TruthSpec;
use super::HarnessError;
use crate::estimator::{BandwidthPolicy, LepskiConfig};
use crate::lrd_noise::{NoiseKind, NoiseModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub truth: TruthConfig,
    pub g: KernelConfig,
    #[serde(default)]
    pub design: DesignConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub kernels: KernelsConfig,
    #[serde(default)]
    pub lepski: LepskiSection,
    #[serde(default)]
    pub estimator: EstimatorSection,
    #[serde(default)]
    pub mc: McSection,
    #[serde(default)]
    pub tail: TailSection,
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruthConfig {
    /// `smooth`, `kink`, `zero` or `constant`.
    pub name: String,
    pub m: usize,
    pub knots: [f64; 2],
    /// Level of the `constant` truth.
    pub level: f64,
}

impl Default for TruthConfig {
    fn default() -> Self {
        TruthConfig {
            name: "kink".into(),
            m: 1,
            knots: [1.25, 2.75],
            level: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    /// Ascending coefficients of the numerator of `g̃`.
    pub numer: Vec<f64>,
    /// Ascending coefficients of the denominator of `g̃`.
    pub denom: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignConfig {
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Sample sizes for rate studies.
    pub n_list: Vec<usize>,
}

impl Default for DesignConfig {
    fn default() -> Self {
        DesignConfig {
            n: 4096,
            horizon: 4.0,
            n_list: vec![1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    pub alpha: f64,
    pub sigma: f64,
    /// Memory parameters for rate studies.
    pub alpha_list: Vec<f64>,
    /// Memory parameters for the monotonicity table.
    pub monotone_alphas: Vec<f64>,
    /// Sample size of the monotonicity table.
    pub monotone_n: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            kind: NoiseKind::Fgn,
            alpha: 1.0,
            sigma: 0.05,
            alpha_list: vec![0.5, 1.0],
            monotone_alphas: vec![0.4, 0.7, 1.0],
            monotone_n: 1 << 12,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelsConfig {
    /// Kernel order; defaults to `r + 2`.
    #[serde(rename = "L")]
    pub order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LepskiSection {
    pub a: f64,
    pub gamma_sq_factor: f64,
    pub min_bandwidth_cells: f64,
}

impl Default for LepskiSection {
    fn default() -> Self {
        LepskiSection {
            a: 2.0,
            gamma_sq_factor: 4.0,
            min_bandwidth_cells: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Lepski,
    Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorSection {
    pub policy: PolicyKind,
    /// `λ_0..λ_r` for the fixed policy.
    pub bandwidths: Vec<f64>,
    /// Risks and Lepski comparisons use `[margin, T - margin]`.
    pub window_margin: f64,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        EstimatorSection {
            policy: PolicyKind::Lepski,
            bandwidths: Vec::new(),
            window_margin: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    pub replicates: usize,
}

impl Default for McSection {
    fn default() -> Self {
        McSection { replicates: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TailSection {
    pub replicates: usize,
    pub n_list: Vec<usize>,
    pub orders: Vec<usize>,
    /// Smoothness index used for the reference bandwidth `λ_o`.
    pub m: f64,
    /// Constant in `λ_o`.
    pub oracle_c: f64,
}

impl Default for TailSection {
    fn default() -> Self {
        TailSection {
            replicates: 200,
            n_list: vec![1 << 10, 1 << 12, 1 << 13],
            orders: vec![0, 1],
            m: 1.0,
            oracle_c: 1.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.noise.kind == NoiseKind::Iid && self.noise.alpha != 1.0 {
            return Err(HarnessError::Config(
                "noise.kind = \"iid\" requires noise.alpha = 1".into(),
            ));
        }
        if self.mc.replicates < 2 {
            return Err(HarnessError::Config(
                "mc.replicates must be at least 2".into(),
            ));
        }
        self.truth()?;
        Ok(())
    }

    /// SHA-256 of the canonical re-serialisation, so formatting and key
    /// order in the source file do not change the hash.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serialises");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn truth(&self) -> Result<TruthSpec, HarnessError> {
        let t = &self.truth;
        match t.name.as_str() {
            "smooth" => {
                let r = self.g.denom.len().saturating_sub(self.g.numer.len());
                Ok(TruthSpec::smooth(self.kernel_order(r), r))
            }
            "kink" => {
                let [a, b] = t.knots;
                if !(t.m >= 1 && a > 0.0 && b > a) {
                    return Err(HarnessError::Config(format!(
                        "kink truth needs m >= 1 and 0 < knots[0] < knots[1], got m = {}, knots = {:?}",
                        t.m, t.knots
                    )));
                }
                Ok(TruthSpec::kink(t.m, a, b))
            }
            "zero" => Ok(TruthSpec::zero()),
            "constant" => Ok(TruthSpec::constant(t.level)),
            other => Err(HarnessError::Config(format!("unknown truth `{other}`"))),
        }
    }

    pub fn kernel_order(&self, r: usize) -> usize {
        self.kernels.order.unwrap_or(r + 2)
    }

    pub fn noise_model(&self, alpha: f64) -> Result<NoiseModel, HarnessError> {
        Ok(NoiseModel::new(self.noise.kind, alpha, self.noise.sigma)?)
    }

    pub fn lepski_config(&self, alpha: f64) -> LepskiConfig {
        LepskiConfig {
            a: self.lepski.a,
            gamma_sq_factor: self.lepski.gamma_sq_factor,
            sigma: self.noise.sigma,
            alpha,
            min_bandwidth_cells: self.lepski.min_bandwidth_cells,
        }
    }

    pub fn policy(&self) -> BandwidthPolicy {
        match self.estimator.policy {
            PolicyKind::Lepski => BandwidthPolicy::Lepski,
            PolicyKind::Fixed => BandwidthPolicy::Fixed(self.estimator.bandwidths.clone()),
        }
    }
}
