//! Measuring a pure state in a basis it does not belong to lowers the entropy
//! change below zero, with no entanglement involved.

use ncentropy::algebra::AlgebraShape;
use ncentropy::entropy::entropy_change;
use ncentropy::linalg::{real_diag, sample_pure_vector_with, sample_hermitian_with, Seed};
use ncentropy::morphism::Morphism;
use ncentropy::state::State;

fn main() -> ncentropy::error::Result<()> {
    let m2 = AlgebraShape::matrix(2);
    let z = Morphism::measurement(&m2, 0, &real_diag(&[1.0, -1.0]), 1e-10)?;
    let plus = State::pure_in_block(&m2, 0, &ncentropy::linalg::ComplexMatrix::from_element(2, 1, (0.5f64.sqrt()).into()))?;
    println!("|+> measured in Z: pullback weights {:?}, S_f = {:.12}", z.pullback(&plus)?.weights(), entropy_change(&z, &plus)?);

    // random observables on M_3 against random pure states
    let m3 = AlgebraShape::matrix(3);
    let mut rng = Seed::new(3).rng();
    for _ in 0..5 {
        let v = sample_pure_vector_with(3, &mut rng);
        let f = Morphism::measurement(&m3, 0, &sample_hermitian_with(3, &mut rng), 1e-9)?;
        let omega = State::pure_in_block(&m3, 0, &v)?;
        println!("random observable on M_3: S_f = {:+.6}", entropy_change(&f, &omega)?);
    }
    Ok(())
}
