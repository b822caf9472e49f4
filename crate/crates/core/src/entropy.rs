//! Shannon, von Neumann and Segal entropies (natural logarithm), the entropy
//! change `S_f(ω) = S(ω) − S(ω∘f)` along a morphism, the Holevo information
//! change, and the block-weight functor `K`.

use crate::error::Result;
use crate::linalg::{self, ComplexMatrix};
use crate::morphism::Morphism;
use crate::state::{self, check_unit_interval, State};

/// Unit in which entropies are reported. Everything is computed in nats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

/// `−Σ p log p` over the strictly positive entries. No validation.
fn shannon_unchecked(p: impl IntoIterator<Item = f64>) -> f64 {
    -p.into_iter().filter(|&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// Shannon entropy of a probability vector, with `0 log 0 = 0`.
pub fn shannon(p: &[f64]) -> Result<f64> {
    state::check_probability_vector(p, state::STATE_TOL)?;
    Ok(shannon_unchecked(p.iter().copied()))
}

/// `−tr(ρ log ρ)`, computed as the Shannon entropy of the spectrum.
pub fn von_neumann(rho: &ComplexMatrix, tol: f64) -> Result<f64> {
    state::check_density(rho, tol)?;
    Ok(spectral_entropy(rho))
}

/// Entropy of the spectrum of a PSD matrix with small negative eigenvalues
/// dropped. Used where the input is already known to be a density.
pub(crate) fn spectral_entropy(rho: &ComplexMatrix) -> f64 {
    let e = linalg::eigh_psd(rho, f64::INFINITY).expect("square Hermitian input");
    shannon_unchecked(e.values.iter().copied())
}

/// `S(p) + Σ_x p_x S_vN(ρ_x)`, skipping blocks with `p_x = 0`.
pub fn segal(omega: &State) -> f64 {
    let blocks: f64 = omega
        .weights()
        .iter()
        .zip(omega.densities())
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, rho)| p * spectral_entropy(rho))
        .sum();
    shannon_unchecked(omega.weights().iter().copied()) + blocks
}

/// `S_f(ω) = S(ω) − S(ω∘f)`.
pub fn entropy_change(f: &Morphism, omega: &State) -> Result<f64> {
    Ok(segal(omega) - segal(&f.pullback(omega)?))
}

/// `χ_f(λ; ω, ξ) = S_f(λω + (1−λ)ξ) − λ S_f(ω) − (1−λ) S_f(ξ)`.
pub fn holevo_change(f: &Morphism, lambda: f64, omega: &State, xi: &State) -> Result<f64> {
    check_unit_interval(lambda)?;
    let mix = State::convex_combine(lambda, omega, xi)?;
    Ok(entropy_change(f, &mix)? - lambda * entropy_change(f, omega)? - (1.0 - lambda) * entropy_change(f, xi)?)
}

/// `K_f(ω) = S(p) − S(q)`: only the block weights of `ω` and `ω∘f` count.
pub fn k_functor(f: &Morphism, omega: &State) -> Result<f64> {
    let q = f.pullback(omega)?;
    Ok(shannon_unchecked(omega.weights().iter().copied()) - shannon_unchecked(q.weights().iter().copied()))
}

/// `−Σ_x tr(p_xρ_x log(p_xρ_x))`, an independent route to the Segal entropy.
pub fn segal_from_masses(omega: &State) -> f64 {
    omega
        .block_masses()
        .iter()
        .map(|m| {
            let e = linalg::eigh_psd(m, 1e-9).expect("block masses are PSD");
            let log = e.map(|l| if l > 0.0 { l.ln() } else { 0.0 });
            -(m * log).trace().re
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::algebra::AlgebraShape;
    use crate::linalg::{real_diag, sample_density_with, sample_unitary_with, Seed, C64};
    use std::f64::consts::LN_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((shannon(&[0.5, 0.5]).unwrap() - LN_2).abs() < 1e-15);
        assert!((shannon(&[0.5, 0.25, 0.25]).unwrap() - 1.5 * LN_2).abs() < 1e-15);
        assert!(matches!(shannon(&[0.5, 0.4]), Err(Error::NotProbabilityVector(_))));
    }

    #[test]
    fn von_neumann_examples() {
        let v = ComplexMatrix::from_column_slice(2, 1, &[c(0.6), C64::new(0.0, 0.8)]);
        assert!(von_neumann(&(&v * v.adjoint()), 1e-10).unwrap().abs() < 1e-12);
        assert!((von_neumann(&real_diag(&[0.5, 0.5]), 1e-10).unwrap() - LN_2).abs() < 1e-15);
        let mut rng = Seed::new(3).rng();
        for _ in 0..20 {
            let rho = sample_density_with(4, &mut rng);
            let u = sample_unitary_with(4, &mut rng);
            let s = von_neumann(&rho, 1e-10).unwrap();
            assert!((0.0..=4f64.ln() + 1e-12).contains(&s));
            let rotated = &u * &rho * u.adjoint();
            assert!((von_neumann(&rotated, 1e-10).unwrap() - s).abs() < 1e-9);
        }
        assert!(von_neumann(&real_diag(&[0.5, 0.6]), 1e-10).is_err());
    }

    #[test]
    fn segal_examples() {
        let shape = AlgebraShape::new(vec![1, 1, 2]).unwrap();
        let omega = State::new(
            shape,
            vec![0.25, 0.25, 0.5],
            vec![linalg::identity(1), linalg::identity(1), real_diag(&[0.5, 0.5])],
        )
        .unwrap();
        assert!((segal(&omega) - 2.0 * LN_2).abs() < 1e-14);
        assert!((segal_from_masses(&omega) - 2.0 * LN_2).abs() < 1e-12);
        let classical = State::classical(vec![0.2, 0.3, 0.5]).unwrap();
        assert!((segal(&classical) - shannon(&[0.2, 0.3, 0.5]).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn entropy_change_examples() {
        let mut bell = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(i, j)] = c(0.5);
        }
        let bell = State::from_density(bell).unwrap();
        let s = entropy_change(&Morphism::factor_inclusion(2, 2), &bell).unwrap();
        assert!((s + LN_2).abs() < 1e-12);

        let merge = Morphism::from_function(&[0, 1, 1], 2).unwrap();
        let p = State::classical(vec![0.5, 0.25, 0.25]).unwrap();
        assert!((entropy_change(&merge, &p).unwrap() - 0.5 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn holevo_examples() {
        let bang = Morphism::initial(&AlgebraShape::matrix(2));
        let w = State::from_density(real_diag(&[1.0, 0.0])).unwrap();
        let x = State::from_density(real_diag(&[0.0, 1.0])).unwrap();
        assert!((holevo_change(&bang, 0.5, &w, &x).unwrap() - LN_2).abs() < 1e-12);
        let id = Morphism::identity(&AlgebraShape::matrix(2));
        assert!(holevo_change(&id, 0.3, &w, &x).unwrap().abs() < 1e-12);
        assert!(matches!(holevo_change(&id, 1.3, &w, &x), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn k_functor_examples() {
        let z = Morphism::measurement(&AlgebraShape::matrix(2), 0, &real_diag(&[1.0, -1.0]), 1e-10).unwrap();
        let mixed = State::tracial(&AlgebraShape::matrix(2));
        assert!((k_functor(&z, &mixed).unwrap() + LN_2).abs() < 1e-12);
        let merge = Morphism::from_function(&[0, 1, 1], 2).unwrap();
        let p = State::classical(vec![0.5, 0.25, 0.25]).unwrap();
        assert!((k_functor(&merge, &p).unwrap() - entropy_change(&merge, &p).unwrap()).abs() < 1e-15);
        let incl = Morphism::factor_inclusion(2, 3);
        let rho = State::from_density(linalg::sample_density(6, Seed::new(1))).unwrap();
        assert_eq!(k_functor(&incl, &rho).unwrap(), 0.0);
    }

    #[test]
    fn units_convert() {
        assert!((Units::Bits.convert(LN_2) - 1.0).abs() < 1e-15);
        assert_eq!(Units::Nats.convert(0.3), 0.3);
    }
}
