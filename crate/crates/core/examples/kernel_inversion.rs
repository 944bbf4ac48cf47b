//! Exact inversion of a Volterra equation with a rational-transform kernel.
//!
//! Builds `g(t) = (1 + t) e^{-t}`, prints its residue coefficients and
//! recovers `f(t) = t² e^{-t}` from exact derivatives of `q = g ∗ f`.
//!
//! ```text
//! cargo run --release --example kernel_inversion
//! ```

use laplace_deconv::harness::{ExactConvolution, TruthSpec};
use laplace_deconv::laplace_kernel::reconstruct_exact;
use laplace_deconv::{ExperimentDesign, RationalLaplaceKernel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // (s + 2) / (s + 1)², ascending coefficients.
    let g = RationalLaplaceKernel::new(vec![2.0, 1.0], vec![1.0, 2.0, 1.0])?;
    println!("r = {}, B_r = {}", g.r(), g.b_r());

    let coeffs = g.inversion_coefficients()?;
    println!("a0 = {:?}", coeffs.a0());
    for term in coeffs.exp_terms() {
        println!(
            "pole {} (multiplicity {}): {:?}",
            term.pole, term.multiplicity, term.coeffs
        );
    }
    for x in [0.0, 0.5, 1.0] {
        println!("phi1({x}) = {:.6}", coeffs.phi1_eval(x));
    }

    let truth = TruthSpec::smooth(4, 1);
    let exact = ExactConvolution::new(&g, &truth);
    let design = ExperimentDesign::new(500, 5.0)?;
    let f = reconstruct_exact(&coeffs, |j, t| exact.q(j, t), &design, 8);
    let worst = f
        .iter()
        .enumerate()
        .map(|(k, v)| (v - truth.eval(design.time(k))).abs())
        .fold(0.0, f64::max);
    println!("sup |f_rec - f| on [0, 5] = {worst:.2e}");
    Ok(())
}
