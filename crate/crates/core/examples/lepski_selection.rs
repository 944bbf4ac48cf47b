//! Lepski bandwidth selection for one derivative order, with the
//! comparison trail that justifies the choice.
//!
//! ```text
//! cargo run --release --example lepski_selection
//! ```

use laplace_deconv::estimator::{lepski_select, oracle_bandwidth};
use laplace_deconv::harness::{Scenario, TruthSpec};
use laplace_deconv::{
    DerivKernel, ExperimentDesign, LepskiConfig, NoiseModel, RationalLaplaceKernel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = RationalLaplaceKernel::new(vec![1.0], vec![1.0, 1.0])?;
    let design = ExperimentDesign::new(4096, 4.0)?;
    let noise = NoiseModel::fgn(0.7, 0.02)?;
    let scenario = Scenario::new(g, TruthSpec::kink(1, 1.25, 2.75), design, noise)?;
    let y = scenario.observe(2024, 0);

    let config = LepskiConfig {
        min_bandwidth_cells: 16.0,
        ..LepskiConfig::new(noise.sigma(), noise.alpha())
    };
    let window = design.interior(1.0)?;
    for j in 0..=1 {
        let kernel = DerivKernel::build(3, j)?;
        let sel = lepski_select(&y, &kernel, &config, &design, window)?;
        println!("j = {j}: grid {:.4?}", sel.grid);
        for c in sel.diagnostics.iter().filter(|c| !c.accepted).take(3) {
            println!(
                "  rejected lambda = {:.4} against {:.4}: stat {:.3e} > threshold {:.3e}",
                c.lambda, c.lambda_prime, c.stat, c.threshold
            );
        }
        println!(
            "  selected {:.4} (oracle rate bandwidth {:.4})",
            sel.lambda_hat,
            oracle_bandwidth(1.0, 1, &design, noise.alpha(), 1.0)
        );
    }
    Ok(())
}
