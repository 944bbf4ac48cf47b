//! Fractional Gaussian noise: sampling and covariance eigenvalues.
//!
//! ```text
//! cargo run --release --example fgn_noise [alpha]
//! ```

use laplace_deconv::lrd_noise::{eigen_envelope, sample_noise};
use laplace_deconv::NoiseModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(0.5);
    let model = NoiseModel::fgn(alpha, 1.0)?;
    println!("alpha = {alpha}, Hurst index H = {}", model.hurst());
    println!(
        "autocovariance at lags 0..5: {:?}",
        &model.autocovariance(5).autocov()[..5]
    );

    let x = sample_noise(&model, 8, 1)?;
    println!("one length-8 draw (seed 1): {x:.3?}");

    let env = eigen_envelope(&model, &[256, 512, 1024, 2048])?;
    for row in &env.rows {
        println!(
            "n = {:5}: lambda_min = {:.4}, lambda_max = {:.3}",
            row.n, row.lambda_min, row.lambda_max
        );
    }
    println!(
        "lambda_max ~ n^{:.3} (expected 1 - alpha = {:.3})",
        env.slope,
        1.0 - alpha
    );
    Ok(())
}
