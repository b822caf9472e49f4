//! `K` (the Shannon part of the block weights) is externally affine like `S`,
//! but fails orthogonal affinity on a Z-measurement while `S` does not.

use ncentropy::harness::k_counterexample_instance;
use ncentropy::linalg::{identity, sample_unitary, Seed};

fn main() -> ncentropy::error::Result<()> {
    for lambda in [0.1, 0.25, 0.5] {
        let (k_dev, chi) = k_counterexample_instance(&identity(2), lambda)?;
        let h = -(lambda * lambda.ln() + (1.0 - lambda) * (1.0 - lambda).ln());
        println!("lambda = {lambda:<4}  K deviation = {k_dev:+.10}  -h(lambda) = {:+.10}  chi_S = {chi:+.1e}", -h);
    }
    let (k_dev, _) = k_counterexample_instance(&sample_unitary(2, Seed::new(11)), 0.5)?;
    println!("random basis, lambda = 1/2: K deviation = {k_dev:+.10}");
    Ok(())
}
