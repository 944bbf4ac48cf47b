//! Adaptive Laplace deconvolution from noisy, possibly long-range dependent
//! observations.
//!
//! Observations follow `y(t_i) = q(t_i) + σ ε_i` with `q = g ∗ f` a causal
//! convolution on `[0, t]`. The crate reconstructs `f` by
//!
//! 1. inverting the Volterra equation exactly for kernels `g` with rational
//!    Laplace transforms ([`laplace_kernel`]),
//! 2. estimating the derivatives `q^{(j)}` with polynomial kernels of order
//!    `(L, j)` ([`deriv_kernels`], [`estimator`]),
//! 3. choosing each bandwidth by Lepski's method ([`estimator`]),
//!
//! and ships the simulation machinery to check convergence rates under
//! fractional Gaussian noise ([`lrd_noise`], [`harness`]).

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deriv_kernels;
pub mod design;
pub mod estimator;
pub mod exppoly;
pub mod harness;
pub mod laplace_kernel;
pub mod lrd_noise;
pub mod poly;
pub mod quadrature;
pub mod rng;
pub mod stats;

pub use deriv_kernels::DerivKernel;
pub use design::{ExperimentDesign, Window};
pub use estimator::{BandwidthPolicy, DeconvolutionEstimator, EstimateResult, LepskiConfig};
pub use laplace_kernel::{InversionCoefficients, RationalLaplaceKernel};
pub use lrd_noise::{NoiseKind, NoiseModel, NoiseSampler};
