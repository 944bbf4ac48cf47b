//! A single simulation cell: truth, kernel, design and noise.

use crate::design::ExperimentDesign;
use crate::laplace_kernel::RationalLaplaceKernel;
use crate::lrd_noise::{NoiseModel, NoiseSampler};
use crate::rng::replicate_rng;

use super::truth::{ExactConvolution, TruthSpec};
use super::HarnessError;

/// Everything needed to draw data and score estimates for one cell.
///
/// The exact signal is computed once; each replicate only draws noise.
#[derive(Clone, Debug)]
pub struct Scenario {
    g: RationalLaplaceKernel,
    truth: TruthSpec,
    design: ExperimentDesign,
    noise: NoiseModel,
    sampler: NoiseSampler,
    /// `q(t_1..t_n)`.
    signal: Vec<f64>,
    /// `q^{(j)}` on the evaluation grid, `j = 0..=r`.
    q_exact: Vec<Vec<f64>>,
    /// `f` on the evaluation grid.
    f_exact: Vec<f64>,
}

impl Scenario {
    pub fn new(
        g: RationalLaplaceKernel,
        truth: TruthSpec,
        design: ExperimentDesign,
        noise: NoiseModel,
    ) -> Result<Self, HarnessError> {
        let exact = ExactConvolution::new(&g, &truth);
        let grid = design.eval_grid();
        let q_exact: Vec<Vec<f64>> = (0..=g.r()).map(|j| exact.sample(j, &grid)).collect();
        let signal = q_exact[0][1..].to_vec();
        let f_exact = grid.iter().map(|&t| truth.eval(t)).collect();
        let sampler = NoiseSampler::new(&noise, design.n())?;
        Ok(Scenario {
            g,
            truth,
            design,
            noise,
            sampler,
            signal,
            q_exact,
            f_exact,
        })
    }

    pub fn g(&self) -> &RationalLaplaceKernel {
        &self.g
    }

    pub fn truth(&self) -> &TruthSpec {
        &self.truth
    }

    pub fn design(&self) -> &ExperimentDesign {
        &self.design
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn q_exact(&self, j: usize) -> &[f64] {
        &self.q_exact[j]
    }

    pub fn f_exact(&self) -> &[f64] {
        &self.f_exact
    }

    /// Observations for replicate `replicate` of an experiment seeded `seed`.
    pub fn observe(&self, seed: u64, replicate: u64) -> Vec<f64> {
        let noise = self.sampler.sample(&mut replicate_rng(seed, replicate));
        self.signal.iter().zip(noise).map(|(q, e)| q + e).collect()
    }
}

/// `y(t_i) = q(t_i) + σ ε_i` for one seed (replicate stream 0).
///
/// `q` is evaluated in closed form rather than by quadrature, so `σ = 0`
/// returns the signal to machine precision.
pub fn simulate(
    truth: &TruthSpec,
    g: &RationalLaplaceKernel,
    design: &ExperimentDesign,
    noise: &NoiseModel,
    seed: u64,
) -> Result<Vec<f64>, HarnessError> {
    let scenario = Scenario::new(g.clone(), truth.clone(), *design, *noise)?;
    Ok(scenario.observe(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_observations_are_the_signal() {
        let g = RationalLaplaceKernel::new(vec![1.0], vec![1.0, 1.0]).unwrap();
        let d = ExperimentDesign::new(200, 2.0).unwrap();
        let noise = NoiseModel::fgn(0.5, 0.0).unwrap();
        let y = simulate(&TruthSpec::constant(1.0), &g, &d, &noise, 3).unwrap();
        for (i, v) in y.iter().enumerate() {
            let t = d.time(i + 1);
            assert!((v - (1.0 - (-t).exp())).abs() < 1e-14);
        }
    }

    #[test]
    fn replicates_differ_but_repeat() {
        let g = RationalLaplaceKernel::new(vec![1.0], vec![1.0, 1.0]).unwrap();
        let d = ExperimentDesign::new(64, 1.0).unwrap();
        let s = Scenario::new(g, TruthSpec::zero(), d, NoiseModel::iid(1.0).unwrap()).unwrap();
        assert_eq!(s.observe(9, 2), s.observe(9, 2));
        assert_ne!(s.observe(9, 2), s.observe(9, 3));
        assert_eq!(
            s.observe(9, 0),
            crate::lrd_noise::sample_noise(s.noise(), 64, 9).unwrap()
        );
    }
}
