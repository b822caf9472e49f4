//! Σ p_x S(ρ_x) ≤ S(Σ p_x ρ_x) ≤ H(p) + Σ p_x S(ρ_x), with equality on the right
//! for orthogonal families.

use ncentropy::entropy::{shannon, von_neumann};
use ncentropy::linalg::{real_diag, sample_density, ComplexMatrix, Seed, C64};

fn sandwich(p: &[f64], rhos: &[ComplexMatrix]) -> ncentropy::error::Result<(f64, f64, f64)> {
    let n = rhos[0].nrows();
    let mut mix = ComplexMatrix::zeros(n, n);
    let mut avg = 0.0;
    for (&w, rho) in p.iter().zip(rhos) {
        mix += rho * C64::new(w, 0.0);
        avg += w * von_neumann(rho, 1e-10)?;
    }
    Ok((avg, von_neumann(&mix, 1e-10)?, shannon(p)? + avg))
}

fn main() -> ncentropy::error::Result<()> {
    let p = [0.2, 0.3, 0.5];
    let generic: Vec<_> = (0..3).map(|k| sample_density(3, Seed::new(k))).collect();
    let orthogonal = vec![real_diag(&[1.0, 0.0, 0.0]), real_diag(&[0.0, 1.0, 0.0]), real_diag(&[0.0, 0.0, 1.0])];
    for (name, rhos) in [("generic", generic), ("orthogonal", orthogonal)] {
        let (lo, mid, hi) = sandwich(&p, &rhos)?;
        println!("{name:<10} {lo:.8} <= {mid:.8} <= {hi:.8}   right gap {:.2e}", hi - mid);
    }
    Ok(())
}
