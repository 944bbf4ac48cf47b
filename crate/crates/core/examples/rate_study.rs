//! A small Monte Carlo rate study: mean ISE against n and the fitted
//! exponent next to its theoretical value.
//!
//! The full-size study is `laplace-deconv rate-study --config
//! configs/rate_study.toml --out <dir>`; this keeps the replicate count low.
//!
//! ```text
//! cargo run --release --example rate_study [replicates]
//! ```

use laplace_deconv::harness::{mc_risk, EstimatorSettings, ExperimentConfig};
use laplace_deconv::{BandwidthPolicy, RationalLaplaceKernel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reps: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(10);
    let cfg = ExperimentConfig::from_toml(include_str!("../configs/rate_study.toml"))?;
    let g = RationalLaplaceKernel::new(cfg.g.numer.clone(), cfg.g.denom.clone())?;
    let truth = cfg.truth()?;
    let settings = EstimatorSettings::from_config(&cfg);
    let n_list = [1 << 10, 1 << 11, 1 << 12, 1 << 13];

    for alpha in [0.5, 1.0] {
        let noise = cfg.noise_model(alpha)?;
        let rep = mc_risk(
            &truth,
            &g,
            cfg.design.horizon,
            &n_list,
            &noise,
            &BandwidthPolicy::Lepski,
            &settings,
            reps,
            cfg.seed,
        )?;
        println!("alpha = {alpha}");
        for row in &rep.rows {
            println!(
                "  n = {:6}: mean ISE {:.3e} ± {:.1e}, mean lambda {:.3?}",
                row.n, row.mean_ise, row.se, row.mean_lambda
            );
        }
        if let Some(fit) = rep.fit {
            println!(
                "  fitted exponent {:.3} ± {:.3}, theory {:.3}",
                fit.slope, fit.slope_se, rep.theoretical_exponent
            );
        }
    }
    Ok(())
}
