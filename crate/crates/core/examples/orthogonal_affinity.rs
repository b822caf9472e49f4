//! The Holevo change χ_f vanishes on orthogonal states exactly when f keeps
//! them orthogonal.

use ncentropy::algebra::AlgebraShape;
use ncentropy::entropy::holevo_change;
use ncentropy::linalg::{real_diag, ComplexMatrix, C64};
use ncentropy::morphism::Morphism;
use ncentropy::state::State;

fn bell(sign: f64) -> State {
    let mut rho = ComplexMatrix::zeros(4, 4);
    for &(i, j, s) in &[(0, 0, 1.0), (0, 3, sign), (3, 0, sign), (3, 3, 1.0)] {
        rho[(i, j)] = C64::new(0.5 * s, 0.0);
    }
    State::from_density(rho).expect("Bell density")
}

fn report(name: &str, f: &Morphism, omega: &State, xi: &State) -> ncentropy::error::Result<()> {
    let keeps = f.preserves_orthogonality(omega, xi, 1e-10)?;
    let chis: Vec<String> = [0.1, 0.5, 0.9]
        .iter()
        .map(|&l| holevo_change(f, l, omega, xi).map(|c| format!("{c:.3e}")))
        .collect::<Result<_, _>>()?;
    println!("{name:<28} preserves orthogonality: {keeps:<5}  chi at 0.1/0.5/0.9: {}", chis.join(" "));
    Ok(())
}

fn main() -> ncentropy::error::Result<()> {
    let m2 = AlgebraShape::matrix(2);
    let up = State::from_density(real_diag(&[1.0, 0.0]))?;
    let down = State::from_density(real_diag(&[0.0, 1.0]))?;

    let z = Morphism::measurement(&m2, 0, &real_diag(&[1.0, -1.0]), 1e-10)?;
    report("Z measurement", &z, &up, &down)?;
    report("identity on M_2", &Morphism::identity(&m2), &up, &down)?;
    report("terminal map C -> M_2", &Morphism::initial(&m2), &up, &down)?;
    report("Bell pair through M_2 -> M_4", &Morphism::factor_inclusion(2, 2), &bell(1.0), &bell(-1.0))?;
    Ok(())
}
