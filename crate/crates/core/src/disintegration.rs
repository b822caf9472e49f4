//! Disintegrations of `(f, ω, ω∘f)`.
//!
//! Classically a disintegration of `φ: X → Y` along `p` is a stochastic map
//! `ψ: Y ⇝ X` with `φ∘ψ = id` almost everywhere and `ψ∘q = p`; it always exists.
//! In the quantum case it exists iff, in the canonical layout of every codomain
//! block,
//!
//! ```text
//! U_x† (p_x ρ_x) U_x = ⊞_y τ_{yx} ⊗ q_y σ_y
//! ```
//!
//! for positive `τ_{yx} ∈ M_{c_xy}`, and then
//! `S_f(ω) = Σ_y q_y S(⊞_x τ_{yx}) ≥ 0`.

use crate::entropy::spectral_entropy;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64};
use crate::morphism::{Morphism, Segment};
use crate::state::{self, State, NEGLIGIBLE_WEIGHT, STATE_TOL};
use serde::Serialize;
use std::fmt;

/// Relative tolerance used by the CLI and the harness for the factorization test.
pub const DISINTEGRATION_TOL: f64 = 1e-8;

/// A stochastic map `Y ⇝ X`: row `y` is a probability vector on `X`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StochasticMap {
    rows: Vec<Vec<f64>>,
}

impl StochasticMap {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        for (y, r) in rows.iter().enumerate() {
            if r.len() != width {
                return Err(Error::ShapeMismatch(format!("row {y} has {} entries, expected {width}", r.len())));
            }
            state::check_probability_vector(r, STATE_TOL)?;
        }
        Ok(StochasticMap { rows })
    }

    pub fn source_size(&self) -> usize {
        self.rows.len()
    }

    pub fn target_size(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `ψ_y`.
    pub fn row(&self, y: usize) -> &[f64] {
        &self.rows[y]
    }

    /// Pushes a distribution on `Y` forward: `(ψ∘q)(x) = Σ_y q_y ψ_y(x)`.
    pub fn push(&self, q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.target_size()];
        for (r, &qy) in self.rows.iter().zip(q) {
            for (o, &v) in out.iter_mut().zip(r) {
                *o += qy * v;
            }
        }
        out
    }
}

fn check_function(phi: &[usize], y_len: usize) -> Result<()> {
    if let Some((x, &y)) = phi.iter().enumerate().find(|(_, &y)| y >= y_len) {
        return Err(Error::IndexOutOfRange(format!("phi({x}) = {y} but |Y| = {y_len}")));
    }
    Ok(())
}

/// Pushforward `q = φ_* p`.
pub fn pushforward(phi: &[usize], y_len: usize, p: &[f64]) -> Result<Vec<f64>> {
    check_function(phi, y_len)?;
    if phi.len() != p.len() {
        return Err(Error::ShapeMismatch(format!("phi has {} points, p has {}", phi.len(), p.len())));
    }
    let mut q = vec![0.0; y_len];
    for (&y, &px) in phi.iter().zip(p) {
        q[y] += px;
    }
    Ok(q)
}

/// The disintegration `ψ_y(x) = p_x / q_y` on the fibre `φ⁻¹(y)`. Where
/// `q_y = 0` the row is uniform on the fibre, or uniform on `X` for an empty fibre.
pub fn classical_disintegrate(phi: &[usize], y_len: usize, p: &[f64]) -> Result<StochasticMap> {
    state::check_probability_vector(p, STATE_TOL)?;
    let q = pushforward(phi, y_len, p)?;
    let rows = (0..y_len)
        .map(|y| {
            let fibre: Vec<usize> = (0..phi.len()).filter(|&x| phi[x] == y).collect();
            let mut row = vec![0.0; phi.len()];
            if q[y] > 0.0 {
                for &x in &fibre {
                    row[x] = p[x] / q[y];
                }
            } else if fibre.is_empty() {
                row.fill(1.0 / phi.len() as f64);
            } else {
                for &x in &fibre {
                    row[x] = 1.0 / fibre.len() as f64;
                }
            }
            row
        })
        .collect();
    Ok(StochasticMap { rows })
}

/// The `τ_{yx}` of a quantum disintegration, together with the pulled-back data.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumDisintegrationData {
    /// Block weights of `ω∘f`.
    pub q: Vec<f64>,
    /// Densities of `ω∘f`.
    pub sigma: Vec<ComplexMatrix>,
    /// `tau[y][x]`, present when `c_xy > 0` and `q_y > 0`.
    pub tau: Vec<Vec<Option<ComplexMatrix>>>,
}

impl QuantumDisintegrationData {
    /// `⊞_x τ_{yx}`, a density matrix for every `y` with `q_y > 0`.
    pub fn assembled(&self, y: usize) -> ComplexMatrix {
        linalg::block_diag(self.tau[y].iter().flatten())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// A block coupling segments of different domain blocks is nonzero.
    InterSegment,
    /// A `y`-segment is not of the form `τ ⊗ q_y σ_y`.
    Factorization,
    /// A segment with `q_y = 0` does not vanish.
    NullSegment,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Codomain block.
    pub x: usize,
    /// Domain block(s) involved.
    pub y: Vec<usize>,
    /// Largest offending entry, relative to `‖p_x ρ_x‖_max`.
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::InterSegment => "nonzero coupling between segments",
            ViolationKind::Factorization => "segment does not factor as tau (x) q sigma",
            ViolationKind::NullSegment => "segment of a null domain block does not vanish",
        };
        write!(f, "block {} / domain {:?}: {what} (relative residual {:.3e})", self.x, self.y, self.residual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumDisintegration {
    Exists(QuantumDisintegrationData),
    /// Every violated check, in the order found.
    NoDisintegration(Vec<Violation>),
}

impl QuantumDisintegration {
    pub fn exists(&self) -> bool {
        matches!(self, QuantumDisintegration::Exists(_))
    }

    pub fn data(&self) -> Option<&QuantumDisintegrationData> {
        match self {
            QuantumDisintegration::Exists(d) => Some(d),
            QuantumDisintegration::NoDisintegration(_) => None,
        }
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            QuantumDisintegration::Exists(_) => &[],
            QuantumDisintegration::NoDisintegration(v) => v,
        }
    }
}

fn sub(m: &ComplexMatrix, a: &Segment, b: &Segment) -> ComplexMatrix {
    m.view((a.offset, b.offset), (a.size, b.size)).into_owned()
}

/// Largest entry, as a fraction of `scale` (absolute when `scale = 0`).
fn relative(value: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        value / scale
    } else {
        value
    }
}

/// Decides whether a disintegration of `(f, ω, ω∘f)` exists and builds `τ` if so.
/// `tol` is relative to `‖p_x ρ_x‖_max` in each block.
pub fn quantum_disintegrate(f: &Morphism, omega: &State, tol: f64) -> Result<QuantumDisintegration> {
    let pulled = f.pullback(omega)?;
    let masses = omega.block_masses();
    let pulled_masses = f.pullback_masses(&masses);
    let q: Vec<f64> = pulled_masses.iter().map(|m| linalg::trace(m).re).collect();
    let ny = f.domain().num_blocks();
    let mut tau: Vec<Vec<Option<ComplexMatrix>>> = vec![vec![None; f.codomain().num_blocks()]; ny];
    let mut violations = Vec::new();

    for (x, mass) in masses.iter().enumerate() {
        let scale = linalg::max_abs(mass);
        let u = &f.unitaries()[x];
        let m = u.adjoint() * mass * u;
        let layout = f.layout(x);

        for (i, a) in layout.iter().enumerate() {
            for b in &layout[i + 1..] {
                if a.y != b.y {
                    let r = relative(linalg::max_abs(&sub(&m, a, b)), scale);
                    if r > tol {
                        violations.push(Violation { kind: ViolationKind::InterSegment, x, y: vec![a.y, b.y], residual: r });
                    }
                }
            }
        }

        for y in 0..ny {
            let segs: Vec<&Segment> = layout.iter().filter(|s| s.y == y).collect();
            if segs.is_empty() {
                continue;
            }
            if q[y] <= NEGLIGIBLE_WEIGHT {
                let r = segs.iter().map(|s| relative(linalg::max_abs(&sub(&m, s, s)), scale)).fold(0.0, f64::max);
                if r > tol {
                    violations.push(Violation { kind: ViolationKind::NullSegment, x, y: vec![y], residual: r });
                }
                continue;
            }
            let q_sigma = &pulled_masses[y];
            let c = segs.len();
            let mut t = ComplexMatrix::zeros(c, c);
            let mut worst: f64 = 0.0;
            for (i, a) in segs.iter().enumerate() {
                for (j, b) in segs.iter().enumerate() {
                    let block = sub(&m, a, b);
                    t[(i, j)] = linalg::trace(&block) / C64::new(q[y], 0.0);
                    let expected = q_sigma * t[(i, j)];
                    worst = worst.max(relative(linalg::max_abs_diff(&block, &expected), scale));
                }
            }
            if worst > tol {
                violations.push(Violation { kind: ViolationKind::Factorization, x, y: vec![y], residual: worst });
            }
            tau[y][x] = Some(t);
        }
    }

    if !violations.is_empty() {
        return Ok(QuantumDisintegration::NoDisintegration(violations));
    }
    let sigma = pulled.densities().to_vec();
    Ok(QuantumDisintegration::Exists(QuantumDisintegrationData { q: pulled.weights().to_vec(), sigma, tau }))
}

/// `Σ_{y: q_y>0} q_y S(⊞_x τ_{yx})`, after checking that `τ` really rebuilds `ω`.
pub fn disintegration_entropy(
    f: &Morphism,
    omega: &State,
    data: &QuantumDisintegrationData,
    tol: f64,
) -> Result<f64> {
    let ny = f.domain().num_blocks();
    let nx = f.codomain().num_blocks();
    if data.q.len() != ny || data.sigma.len() != ny || data.tau.len() != ny || data.tau.iter().any(|r| r.len() != nx) {
        return Err(Error::InconsistentData("tau, q and sigma must be indexed by the domain and codomain blocks".into()));
    }
    let pulled = f.pullback(omega)?;
    let dq = data.q.iter().zip(pulled.weights()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if dq > tol {
        return Err(Error::InconsistentData(format!("q differs from the pullback by {dq:.3e}")));
    }

    for y in (0..ny).filter(|&y| data.q[y] > NEGLIGIBLE_WEIGHT) {
        let total: f64 = data.tau[y].iter().flatten().map(|t| linalg::trace(t).re).sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InconsistentData(format!("sum_x tr tau_{{{y}x}} = {total}, expected 1")));
        }
        for t in data.tau[y].iter().flatten() {
            if linalg::eigh_psd(t, tol).is_err() {
                return Err(Error::InconsistentData(format!("some tau_{{{y}x}} is not positive")));
            }
        }
    }

    for (x, mass) in omega.block_masses().iter().enumerate() {
        let u = &f.unitaries()[x];
        let m = u.adjoint() * mass * u;
        let layout = f.layout(x);
        let mut rebuilt = ComplexMatrix::zeros(m.nrows(), m.ncols());
        for y in (0..ny).filter(|&y| data.q[y] > NEGLIGIBLE_WEIGHT) {
            let segs: Vec<&Segment> = layout.iter().filter(|s| s.y == y).collect();
            if segs.is_empty() {
                continue;
            }
            let Some(t) = &data.tau[y][x] else {
                return Err(Error::InconsistentData(format!("tau_{{{y}{x}}} is missing")));
            };
            if t.nrows() != segs.len() {
                return Err(Error::InconsistentData(format!("tau_{{{y}{x}}} has the wrong size")));
            }
            let q_sigma = &data.sigma[y] * C64::new(data.q[y], 0.0);
            for (i, a) in segs.iter().enumerate() {
                for (j, b) in segs.iter().enumerate() {
                    rebuilt.view_mut((a.offset, b.offset), (a.size, b.size)).copy_from(&(&q_sigma * t[(i, j)]));
                }
            }
        }
        let r = relative(linalg::max_abs_diff(&m, &rebuilt), linalg::max_abs(mass));
        if r > tol {
            return Err(Error::InconsistentData(format!("tau does not rebuild block {x} (relative residual {r:.3e})")));
        }
    }

    Ok((0..ny)
        .filter(|&y| data.q[y] > NEGLIGIBLE_WEIGHT)
        .map(|y| data.q[y] * spectral_entropy(&data.assembled(y)))
        .sum())
}
