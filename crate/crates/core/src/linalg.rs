//! Dense complex-matrix kernel.
//!
//! Matrices are `nalgebra::DMatrix<Complex<f64>>`. Everything here is a pure
//! function of its inputs. Kronecker products put the left factor on the slow
//! (outer) index, so `1_c ⊗ B` is the block diagonal `diag(B, …, B)`.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Default threshold for every "is zero / is PSD / is in the support" decision.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Deterministic randomness handle: `(seed, stream)` selects a ChaCha8
/// substream, so substreams can be derived independently of execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub seed: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(seed: u64) -> Self {
        Seed { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Seed { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors matching `values`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    /// Recombine `V diag(g(λ)) V†`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = g(lambda);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            out += (v * v.adjoint()) * C64::new(w, 0.0);
        }
        out
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn real_diag(d: &[f64]) -> ComplexMatrix {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.trace()
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// `max |H - H†|`.
pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Hermitian eigendecomposition with eigenvalues sorted descending.
pub fn eigh(h: &ComplexMatrix, tol: f64) -> Result<Eigh> {
    let n = ensure_square(h)?;
    let defect = hermitian_defect(h);
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    if n == 0 {
        return Ok(Eigh { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    let eig = hermitian_part(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Eigendecomposition of a PSD matrix; eigenvalues in `[-tol, 0)` are clamped to zero.
pub fn eigh_psd(m: &ComplexMatrix, tol: f64) -> Result<Eigh> {
    let mut e = eigh(m, tol)?;
    if let Some(&min) = e.values.last() {
        if min < -tol {
            return Err(Error::NotPsd { min_eigenvalue: min, tol });
        }
    }
    for v in e.values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(e)
}

/// Logarithm of a PSD matrix restricted to its support: `Σ_{λ>tol} log(λ) v v†`.
/// Null directions map to zero, realising `0 log 0 = 0`.
pub fn psd_log(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let e = eigh_psd(m, tol)?;
    Ok(e.map(|l| if l > tol { l.ln() } else { 0.0 }))
}

/// Spectral projection onto the eigenvalues strictly above `tol`, with its rank.
pub fn support_projection(m: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, usize)> {
    let e = eigh(m, tol.max(DEFAULT_TOL))?;
    let rank = e.values.iter().filter(|&&l| l > tol).count();
    Ok((e.map(|l| if l > tol { 1.0 } else { 0.0 }), rank))
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let e = eigh(&gram, f64::INFINITY).expect("Gram matrix is square");
    e.values[0].max(0.0).sqrt()
}

/// Kronecker product, left factor slow.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Trace out the left factor of a `(d_left·d_right)`-square matrix.
pub fn partial_trace_left(m: &ComplexMatrix, d_left: usize, d_right: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d_left, d_right)?;
    Ok(ComplexMatrix::from_fn(d_right, d_right, |i, j| {
        (0..d_left).map(|a| m[(a * d_right + i, a * d_right + j)]).sum()
    }))
}

/// Trace out the right factor of a `(d_left·d_right)`-square matrix.
pub fn partial_trace_right(m: &ComplexMatrix, d_left: usize, d_right: usize) -> Result<ComplexMatrix> {
    check_bipartite(m, d_left, d_right)?;
    Ok(ComplexMatrix::from_fn(d_left, d_left, |a, b| {
        (0..d_right).map(|i| m[(a * d_right + i, b * d_right + i)]).sum()
    }))
}

fn check_bipartite(m: &ComplexMatrix, d_left: usize, d_right: usize) -> Result<()> {
    let n = d_left * d_right;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "partial trace expects a {n}x{n} matrix for factors {d_left}x{d_right}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Internal direct sum: block-diagonal matrix with the given blocks in order.
pub fn block_diag<'a>(blocks: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let blocks: Vec<&ComplexMatrix> = blocks.into_iter().collect();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn sample_complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(s * re, s * im)
    })
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s diagonal fixed.
pub fn sample_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "unitary dimension must be positive");
    let g = sample_complex_gaussian(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn sample_unitary(n: usize, seed: Seed) -> ComplexMatrix {
    sample_unitary_with(n, &mut seed.rng())
}

/// Ginibre-induced density matrix `G G† / tr(G G†)`.
pub fn sample_density_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    sample_density_rank_with(n, n, rng)
}

/// Density matrix of rank at most `rank`, drawn as `G G† / tr` with `G` of size `n × rank`.
pub fn sample_density_rank_with<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1 && rank >= 1, "density dimension and rank must be positive");
    let g = sample_complex_gaussian(n, rank, rng);
    let gg = &g * g.adjoint();
    let t = gg.trace().re;
    hermitian_part(&(gg / C64::new(t, 0.0)))
}

pub fn sample_density(n: usize, seed: Seed) -> ComplexMatrix {
    sample_density_with(n, &mut seed.rng())
}

/// Uniformly random unit vector in `C^n`, returned as a column.
pub fn sample_pure_vector_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let v = sample_complex_gaussian(n, 1, rng);
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Rank-one projector `v v†` of a Haar-random unit vector.
pub fn sample_pure_density_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let v = sample_pure_vector_with(n, rng);
    &v * v.adjoint()
}

/// GUE-style Hermitian matrix.
pub fn sample_hermitian_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = sample_complex_gaussian(n, n, rng);
    hermitian_part(&g)
}

/// Dirichlet(1, …, 1) point on the probability simplex.
pub fn sample_simplex_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1, "simplex dimension must be positive");
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + 1e-300).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}
