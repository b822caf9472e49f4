//! Decide whether `(f, ω, ω∘f)` has a disintegration for diagonal states
//! through `B ↦ 1_2 ⊗ B`. One exists exactly when `p1 p4 = p2 p3`, yet the
//! entropy change is nonnegative either way.

use ncentropy::disintegration::{disintegration_entropy, quantum_disintegrate, DISINTEGRATION_TOL};
use ncentropy::entropy::entropy_change;
use ncentropy::linalg::real_diag;
use ncentropy::morphism::Morphism;
use ncentropy::state::State;

fn main() -> ncentropy::error::Result<()> {
    let f = Morphism::factor_inclusion(2, 2);
    for p in [[0.5, 0.25, 0.125, 0.125], [0.4, 0.1, 0.4, 0.1], [0.25; 4], [0.7, 0.0, 0.3, 0.0]] {
        let omega = State::from_density(real_diag(&p))?;
        let s_f = entropy_change(&f, &omega)?;
        println!("p = {p:?}  p1p4 - p2p3 = {:+.4}  S_f = {s_f:.10}", p[0] * p[3] - p[1] * p[2]);
        match quantum_disintegrate(&f, &omega, DISINTEGRATION_TOL)? {
            out if out.exists() => {
                let data = out.data().expect("exists");
                let tau = data.tau[0][0].as_ref().expect("tau");
                println!("  disintegration: tau = diag({:.4}, {:.4})", tau[(0, 0)].re, tau[(1, 1)].re);
                println!("  entropy production = {:.10}", disintegration_entropy(&f, &omega, data, DISINTEGRATION_TOL)?);
            }
            out => {
                for v in out.violations() {
                    println!("  no disintegration: {v}");
                }
            }
        }
    }
    Ok(())
}
