//! Conditional entropy can be negative: a Bell state on M_2 ⊗ M_2 pulled back
//! along the inclusion of one tensor factor.
//!
//!     cargo run --example bell_conditional_entropy

use ncentropy::entropy::{entropy_change, segal};
use ncentropy::linalg::{ComplexMatrix, C64};
use ncentropy::morphism::Morphism;
use ncentropy::state::State;

fn main() -> ncentropy::error::Result<()> {
    let mut rho = ComplexMatrix::zeros(4, 4);
    for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        rho[(i, j)] = C64::new(0.5, 0.0);
    }
    let bell = State::from_density(rho)?;
    let f = Morphism::factor_inclusion(2, 2);
    let reduced = f.pullback(&bell)?;

    println!("S(bell)          = {:.12}", segal(&bell));
    println!("reduced density  = {}", reduced.density(0));
    println!("S(bell o f)      = {:.12}", segal(&reduced));
    println!("S_f(bell)        = {:.12}  (-log 2 = {:.12})", entropy_change(&f, &bell)?, -std::f64::consts::LN_2);
    Ok(())
}
