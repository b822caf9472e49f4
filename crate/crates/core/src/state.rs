//! States on multi-matrix algebras: `ω(A) = Σ_x p_x tr(ρ_x A_x)`.
//!
//! Blocks with `p_x = 0` carry the maximally mixed density as a placeholder.
//! Evaluation, supports and entropies never look at it.

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64};

/// Tolerance used when validating externally supplied states.
pub const STATE_TOL: f64 = 1e-10;

/// Weights below this are treated as exact zeros when normalising internally
/// computed block masses (pullbacks, mixtures).
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    shape: AlgebraShape,
    weights: Vec<f64>,
    densities: Vec<ComplexMatrix>,
}

/// Support projection of a state together with the rank of each block.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportProjection {
    pub projection: AlgebraElement,
    pub ranks: Vec<usize>,
}

impl SupportProjection {
    pub fn rank(&self) -> usize {
        self.ranks.iter().sum()
    }
}

fn placeholder(m: usize) -> ComplexMatrix {
    linalg::identity(m) / C64::new(m as f64, 0.0)
}

impl State {
    /// Validated constructor: `p` on the simplex and every density Hermitian,
    /// PSD and of unit trace, all within [`STATE_TOL`].
    pub fn new(shape: AlgebraShape, weights: Vec<f64>, densities: Vec<ComplexMatrix>) -> Result<Self> {
        if weights.len() != shape.num_blocks() || densities.len() != shape.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape} has {} blocks but got {} weights and {} densities",
                shape.num_blocks(),
                weights.len(),
                densities.len()
            )));
        }
        check_probability_vector(&weights, STATE_TOL)?;
        for (x, (rho, &m)) in densities.iter().zip(shape.blocks()).enumerate() {
            if rho.nrows() != m || rho.ncols() != m {
                return Err(Error::ShapeMismatch(format!(
                    "density {x} must be {m}x{m}, got {}x{}",
                    rho.nrows(),
                    rho.ncols()
                )));
            }
            check_density(rho, STATE_TOL).map_err(|e| Error::InvalidState(format!("density {x}: {e}")))?;
        }
        Ok(State { shape, weights, densities })
    }

    /// Build a state from unnormalised block masses `p_x ρ_x` (PSD, total trace 1
    /// up to rounding). Zero-mass blocks get the placeholder density.
    pub(crate) fn from_block_masses(shape: AlgebraShape, masses: Vec<ComplexMatrix>) -> State {
        let raw: Vec<f64> = masses.iter().map(|w| w.trace().re).collect();
        let total: f64 = raw.iter().filter(|&&q| q > NEGLIGIBLE_WEIGHT).sum();
        let mut weights = Vec::with_capacity(raw.len());
        let mut densities = Vec::with_capacity(raw.len());
        for (w, q) in masses.into_iter().zip(raw) {
            let m = w.nrows();
            if q > NEGLIGIBLE_WEIGHT {
                weights.push(q / total);
                densities.push(linalg::hermitian_part(&(w / C64::new(q, 0.0))));
            } else {
                weights.push(0.0);
                densities.push(placeholder(m));
            }
        }
        State { shape, weights, densities }
    }

    /// `tr(ρ ·)` on `M_m`.
    pub fn from_density(rho: ComplexMatrix) -> Result<Self> {
        let m = linalg::ensure_square(&rho)?;
        State::new(AlgebraShape::new(vec![m])?, vec![1.0], vec![rho])
    }

    /// Probability vector on `C^n`.
    pub fn classical(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::NotProbabilityVector("empty vector".into()));
        }
        let n = p.len();
        State::new(AlgebraShape::classical(n), p, vec![linalg::identity(1); n])
    }

    /// Dirac measure `δ_x` on `C^n`.
    pub fn dirac(n: usize, x: usize) -> Self {
        let mut p = vec![0.0; n];
        p[x] = 1.0;
        State::classical(p).expect("Dirac measure is a probability vector")
    }

    /// The unique state on `C`.
    pub fn unit() -> Self {
        State::dirac(1, 0)
    }

    /// Vector state `⟨v| · |v⟩` placed in one block of `shape`.
    pub fn pure_in_block(shape: &AlgebraShape, block: usize, vector: &ComplexMatrix) -> Result<Self> {
        let m = shape.dim(block);
        if vector.nrows() != m || vector.ncols() != 1 {
            return Err(Error::ShapeMismatch(format!("vector must be {m}x1 for block {block}")));
        }
        let v = vector / C64::new(vector.norm(), 0.0);
        let mut masses: Vec<ComplexMatrix> = shape.blocks().iter().map(|&d| ComplexMatrix::zeros(d, d)).collect();
        masses[block] = &v * v.adjoint();
        Ok(State::from_block_masses(shape.clone(), masses))
    }

    /// Normalised trace `tr(·)/dim`.
    pub fn tracial(shape: &AlgebraShape) -> Self {
        let masses = shape.blocks().iter().map(|&m| linalg::identity(m) / C64::new(shape.total_dim() as f64, 0.0)).collect();
        State::from_block_masses(shape.clone(), masses)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn densities(&self) -> &[ComplexMatrix] {
        &self.densities
    }

    pub fn density(&self, x: usize) -> &ComplexMatrix {
        &self.densities[x]
    }

    /// `p_x ρ_x`.
    pub fn block_mass(&self, x: usize) -> ComplexMatrix {
        &self.densities[x] * C64::new(self.weights[x], 0.0)
    }

    pub fn block_masses(&self) -> Vec<ComplexMatrix> {
        (0..self.weights.len()).map(|x| self.block_mass(x)).collect()
    }

    fn check_shape(&self, shape: &AlgebraShape) -> Result<()> {
        if &self.shape != shape {
            return Err(Error::ShapeMismatch(format!("state lives on {} but got {}", self.shape, shape)));
        }
        Ok(())
    }

    /// `Σ_x p_x tr(ρ_x a_x)`.
    pub fn evaluate(&self, a: &AlgebraElement) -> Result<C64> {
        self.check_shape(a.shape())?;
        Ok(self
            .weights
            .iter()
            .zip(&self.densities)
            .zip(a.blocks())
            .filter(|((&p, _), _)| p > 0.0)
            .map(|((&p, rho), ax)| (rho * ax).trace() * p)
            .sum())
    }

    /// Blockwise spectral projection of `ρ_x` onto eigenvalues `> tol`, zero on
    /// blocks with `p_x <= tol`.
    pub fn support(&self, tol: f64) -> SupportProjection {
        let mut blocks = Vec::with_capacity(self.weights.len());
        let mut ranks = Vec::with_capacity(self.weights.len());
        for (&p, rho) in self.weights.iter().zip(&self.densities) {
            let m = rho.nrows();
            if p > tol {
                let (proj, rank) = linalg::support_projection(rho, tol).expect("densities are Hermitian");
                blocks.push(proj);
                ranks.push(rank);
            } else {
                blocks.push(ComplexMatrix::zeros(m, m));
                ranks.push(0);
            }
        }
        let projection = AlgebraElement::new(self.shape.clone(), blocks).expect("support blocks match the shape");
        SupportProjection { projection, ranks }
    }

    /// `ω ⊥ ξ` iff `‖P_ω P_ξ‖_max <= tol` in every block.
    pub fn is_orthogonal_to(&self, other: &State, tol: f64) -> Result<bool> {
        self.check_shape(&other.shape)?;
        let prod = self.support(tol).projection.multiply(&other.support(tol).projection)?;
        Ok(prod.max_abs() <= tol)
    }

    /// `λω + (1−λ)ξ`.
    pub fn convex_combine(lambda: f64, omega: &State, xi: &State) -> Result<State> {
        check_unit_interval(lambda)?;
        omega.check_shape(&xi.shape)?;
        let masses = omega
            .block_masses()
            .into_iter()
            .zip(xi.block_masses())
            .map(|(a, b)| a * C64::new(lambda, 0.0) + b * C64::new(1.0 - lambda, 0.0))
            .collect();
        Ok(State::from_block_masses(omega.shape.clone(), masses))
    }

    /// Pure iff the total support has rank one.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.support(tol).rank() == 1
    }

    /// `ω̃` on `A ⊕ B`: `ω̃(a ⊕ b) = ω(a)`.
    pub fn zero_extend_left(&self, right: &AlgebraShape) -> State {
        let mut masses = self.block_masses();
        masses.extend(right.blocks().iter().map(|&m| ComplexMatrix::zeros(m, m)));
        State::from_block_masses(self.shape.direct_sum(right), masses)
    }

    /// `ξ̃` on `A ⊕ B`: `ξ̃(a ⊕ b) = ξ(b)`.
    pub fn zero_extend_right(left: &AlgebraShape, xi: &State) -> State {
        let mut masses: Vec<ComplexMatrix> = left.blocks().iter().map(|&m| ComplexMatrix::zeros(m, m)).collect();
        masses.extend(xi.block_masses());
        State::from_block_masses(left.direct_sum(&xi.shape), masses)
    }

    /// External convex sum `λω ⊕ (1−λ)ξ` on `A ⊕ B`.
    pub fn external_sum(lambda: f64, omega: &State, xi: &State) -> Result<State> {
        check_unit_interval(lambda)?;
        let weights: Vec<f64> =
            omega.weights.iter().map(|p| lambda * p).chain(xi.weights.iter().map(|q| (1.0 - lambda) * q)).collect();
        let densities = omega.densities.iter().chain(&xi.densities).cloned().collect();
        Ok(State { shape: omega.shape.direct_sum(&xi.shape), weights, densities })
    }

    /// Largest deviation `|ω(a) − ξ(a)|` over the matrix-unit basis, a cheap
    /// extensional distance between states on the same algebra.
    pub fn max_abs_diff(&self, other: &State) -> Result<f64> {
        self.check_shape(&other.shape)?;
        let mut worst: f64 = 0.0;
        for x in 0..self.weights.len() {
            worst = worst.max(linalg::max_abs_diff(&self.block_mass(x), &other.block_mass(x)));
        }
        Ok(worst)
    }
}

pub fn check_unit_interval(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange(format!("lambda = {lambda} must lie in [0, 1]")));
    }
    Ok(())
}

/// Entries `>= -tol` and summing to one within `tol`.
pub fn check_probability_vector(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return Err(Error::NotProbabilityVector("empty vector".into()));
    }
    if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < -tol) {
        return Err(Error::NotProbabilityVector(format!("entry {i} = {v} is negative or not finite")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::NotProbabilityVector(format!("weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Hermitian, PSD and unit trace within `tol`.
pub fn check_density(rho: &ComplexMatrix, tol: f64) -> Result<()> {
    if !linalg::is_finite(rho) {
        return Err(Error::NotDensity("non-finite entries".into()));
    }
    let e = linalg::eigh(rho, tol).map_err(|e| Error::NotDensity(e.to_string()))?;
    if let Some(&min) = e.values.last() {
        if min < -tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:.3e}")));
        }
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::NotDensity(format!("trace is {tr}, expected 1")));
    }
    Ok(())
}
