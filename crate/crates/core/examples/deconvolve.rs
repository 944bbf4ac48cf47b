//! Full pipeline: simulate noisy data, reconstruct f adaptively and
//! compare with the truth.
//!
//! ```text
//! cargo run --release --example deconvolve [seed]
//! ```

use laplace_deconv::estimator::l2_diff_sq;
use laplace_deconv::harness::{EstimatorSettings, Scenario, TruthSpec};
use laplace_deconv::{BandwidthPolicy, ExperimentDesign, NoiseModel, RationalLaplaceKernel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(7);
    let g = RationalLaplaceKernel::new(vec![2.0, 1.0], vec![1.0, 2.0, 1.0])?;
    let design = ExperimentDesign::new(4096, 6.0)?;
    let noise = NoiseModel::fgn(0.7, 0.01)?;
    let scenario = Scenario::new(g, TruthSpec::smooth(3, 1), design, noise)?;

    let settings = EstimatorSettings {
        a: 2f64.sqrt(),
        min_bandwidth_cells: 32.0,
        ..EstimatorSettings::default()
    };
    let est = settings.estimator(&scenario)?;
    let y = scenario.observe(seed, 0);
    let res = est.estimate(&y, &BandwidthPolicy::Lepski)?;

    println!("selected bandwidths: {:.4?}", res.lambda_hat);
    let ise = l2_diff_sq(&res.f_hat, scenario.f_exact(), &design, est.window())?;
    println!("ISE on the interior window: {ise:.3e}");
    println!("{:>6} {:>10} {:>10}", "t", "f", "f_hat");
    for k in (0..=design.n()).step_by(512) {
        println!(
            "{:6.2} {:10.5} {:10.5}",
            design.time(k),
            scenario.f_exact()[k],
            res.f_hat[k]
        );
    }
    Ok(())
}
