//! Simulation and verification harness.
//!
//! * [`truth`]: catalog of test functions with closed-form `q^{(j)}`.
//! * [`scenario`]: one `(truth, g, design, noise)` cell and its data generator.
//! * [`risk`]: Monte Carlo risk, rate fits, risk decomposition, variance and
//!   tail studies, and the fixed-bandwidth oracle.
//! * [`config`] and [`output`]: TOML configs and CSV artifacts with a
//!   metadata header.
//! * [`study`]: the file-producing drivers behind the command line.

pub mod config;
pub mod output;
pub mod risk;
pub mod scenario;
pub mod study;
pub mod truth;

use thiserror::Error;

use crate::design::DesignError;
use crate::estimator::EstimatorError;
use crate::laplace_kernel::KernelError;
use crate::lrd_noise::NoiseError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub use config::ExperimentConfig;
pub use risk::{
    fixed_bandwidth_oracle, lepski_tail_study, mc_risk, risk_decomposition, variance_scaling,
    Decomposition, EstimatorSettings, OracleReport, RiskReport, RiskRow, TailRow, VarianceReport,
};
pub use scenario::{simulate, Scenario};
pub use truth::{ExactConvolution, TruthSpec};
