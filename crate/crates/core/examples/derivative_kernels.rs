//! Polynomial kernels of order (L, j) and their moment conditions.
//!
//! ```text
//! cargo run --release --example derivative_kernels
//! ```

use laplace_deconv::deriv_kernels::{conformance_table, kernel_moment};
use laplace_deconv::DerivKernel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (order, j) in [(2, 0), (3, 1), (4, 2), (5, 1)] {
        let k = DerivKernel::build(order, j)?;
        let moments: Vec<String> = (0..order)
            .map(|l| format!("{:+.3}", kernel_moment(&k, l)))
            .collect();
        println!(
            "K(L={order}, j={j}): coeffs {:?}, ||K||² = {:.4}, moments [{}]",
            k.coeffs().coeffs(),
            k.l2norm_sq(),
            moments.join(", ")
        );
    }

    let table = conformance_table(8)?;
    let worst = table.iter().map(|c| c.abs_error).fold(0.0, f64::max);
    println!(
        "{} moment conditions for L <= 8, worst error {worst:.1e}",
        table.len()
    );
    Ok(())
}
