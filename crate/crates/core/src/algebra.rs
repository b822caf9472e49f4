//! Finite-dimensional C*-algebras `⊕_x M_{m_x}` and their elements.
//!
//! Block order is significant: two shapes that differ by a permutation are
//! different algebras here. Isomorphism is decided by
//! [`Morphism::is_isomorphism`](crate::morphism::Morphism::is_isomorphism).

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64};

/// Block dimensions `(m_x)_{x ∈ X}` of a multi-matrix algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraShape(Vec<usize>);

impl AlgebraShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidShape("an algebra needs at least one block".into()));
        }
        if let Some(pos) = blocks.iter().position(|&m| m == 0) {
            return Err(Error::InvalidShape(format!("block {pos} has dimension 0; every block dimension must be >= 1")));
        }
        Ok(AlgebraShape(blocks))
    }

    /// `C`, the initial object.
    pub fn scalar() -> Self {
        AlgebraShape(vec![1])
    }

    /// `C^n`, functions on an `n`-point set.
    pub fn classical(n: usize) -> Self {
        AlgebraShape::new(vec![1; n]).expect("classical algebra needs n >= 1")
    }

    /// `M_m`.
    pub fn matrix(m: usize) -> Self {
        AlgebraShape::new(vec![m]).expect("matrix algebra needs m >= 1")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self, block: usize) -> usize {
        self.0[block]
    }

    /// Sum of block dimensions (dimension of the defining representation).
    pub fn total_dim(&self) -> usize {
        self.0.iter().sum()
    }

    /// Commutative iff every block is `1 × 1`.
    pub fn is_commutative(&self) -> bool {
        self.0.iter().all(|&m| m == 1)
    }

    /// `A ⊕ B`: concatenation of block lists, `A`'s blocks first.
    pub fn direct_sum(&self, other: &AlgebraShape) -> AlgebraShape {
        let mut blocks = self.0.clone();
        blocks.extend_from_slice(&other.0);
        AlgebraShape(blocks)
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// An element of `⊕_x M_{m_x}`, one dense block per summand.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn new(shape: AlgebraShape, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != shape.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape} has {} blocks but {} matrices were given",
                shape.num_blocks(),
                blocks.len()
            )));
        }
        for (x, (b, &m)) in blocks.iter().zip(shape.blocks()).enumerate() {
            if b.nrows() != m || b.ncols() != m {
                return Err(Error::ShapeMismatch(format!(
                    "block {x} must be {m}x{m}, got {}x{}",
                    b.nrows(),
                    b.ncols()
                )));
            }
            if !linalg::is_finite(b) {
                return Err(Error::Parse(format!("block {x} has non-finite entries")));
            }
        }
        Ok(AlgebraElement { shape, blocks })
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|&m| linalg::identity(m)).collect();
        AlgebraElement { shape: shape.clone(), blocks }
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|&m| ComplexMatrix::zeros(m, m)).collect();
        AlgebraElement { shape: shape.clone(), blocks }
    }

    /// Element of a commutative algebra from its values on the points.
    pub fn from_function(values: &[C64]) -> Self {
        let shape = AlgebraShape::classical(values.len());
        let blocks = values.iter().map(|&v| ComplexMatrix::from_element(1, 1, v)).collect();
        AlgebraElement { shape, blocks }
    }

    /// Indicator `e_x` of a single block (the central projection onto summand `x`).
    pub fn block_unit(shape: &AlgebraShape, block: usize) -> Self {
        let mut e = AlgebraElement::zero(shape);
        e.blocks[block] = linalg::identity(shape.dim(block));
        e
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block(&self, x: usize) -> &ComplexMatrix {
        &self.blocks[x]
    }

    pub fn into_blocks(self) -> Vec<ComplexMatrix> {
        self.blocks
    }

    fn check_same_shape(&self, other: &AlgebraElement) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.shape, other.shape)));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same_shape(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect();
        Ok(AlgebraElement { shape: self.shape.clone(), blocks })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same_shape(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { shape: self.shape.clone(), blocks })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same_shape(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement { shape: self.shape.clone(), blocks })
    }

    pub fn scale(&self, s: C64) -> AlgebraElement {
        AlgebraElement { shape: self.shape.clone(), blocks: self.blocks.iter().map(|b| b * s).collect() }
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement { shape: self.shape.clone(), blocks: self.blocks.iter().map(|b| b.adjoint()).collect() }
    }

    /// Each block Hermitian within `tol` with spectrum `>= -tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| match linalg::eigh(b, tol) {
            Ok(e) => e.values.last().is_none_or(|&l| l >= -tol),
            Err(_) => false,
        })
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.blocks.iter().all(|b| linalg::hermitian_defect(b) <= tol)
    }

    /// `‖p* p − p‖_max <= tol` in every block.
    pub fn is_projection(&self, tol: f64) -> bool {
        self.blocks.iter().all(|p| linalg::max_abs_diff(&(p.adjoint() * p), p) <= tol)
    }

    /// C*-norm: the largest operator norm over blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::operator_norm).fold(0.0, f64::max)
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &AlgebraElement) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.blocks.iter().zip(&other.blocks).map(|(a, b)| linalg::max_abs_diff(a, b)).fold(0.0, f64::max))
    }

    /// `(a, b) ∈ A ⊕ B`.
    pub fn direct_sum(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        AlgebraElement { shape: self.shape.direct_sum(&other.shape), blocks }
    }

    /// `(a, 0) ∈ A ⊕ B`.
    pub fn embed_left(&self, right: &AlgebraShape) -> AlgebraElement {
        self.direct_sum(&AlgebraElement::zero(right))
    }

    /// `(0, b) ∈ A ⊕ B`.
    pub fn embed_right(left: &AlgebraShape, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::zero(left).direct_sum(b)
    }
}
