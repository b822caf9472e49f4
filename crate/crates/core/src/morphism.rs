//! Unital *-homomorphisms `f: B → A` between multi-matrix algebras in
//! canonical form.
//!
//! With `B = ⊕_y M_{n_y}` and `A = ⊕_x M_{m_x}`, a morphism is a multiplicity
//! matrix `c_{xy}` with `m_x = Σ_y c_{xy} n_y` and one unitary `U_x` per
//! codomain block:
//!
//! ```text
//! f(⊕_y b_y)_x = U_x · ⊞_y (1_{c_xy} ⊗ b_y) · U_x†
//! ```
//!
//! Inside each codomain block the segments are laid out by ascending domain
//! index `y`, copies of the same `y` contiguous. The pair `(c, U)` is not
//! unique, so equality of morphisms is extensional ([`Morphism::max_apply_diff`]).

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64, ONE};
use crate::state::State;

/// Unitaries are accepted when `‖U†U − 1‖_max` is below this.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    domain: AlgebraShape,
    codomain: AlgebraShape,
    /// `|X| × |Y|`, row `x` lists how often each domain block sits in `M_{m_x}`.
    multiplicities: Vec<Vec<usize>>,
    unitaries: Vec<ComplexMatrix>,
}

/// One diagonal slot of a codomain block: copy `copy` of domain block `y`,
/// occupying rows/columns `offset .. offset + size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub y: usize,
    pub copy: usize,
    pub offset: usize,
    pub size: usize,
}

impl Morphism {
    /// Validated constructor. `unitaries = None` means every `U_x = 1`.
    pub fn new(
        domain: AlgebraShape,
        codomain: AlgebraShape,
        multiplicities: Vec<Vec<usize>>,
        unitaries: Option<Vec<ComplexMatrix>>,
    ) -> Result<Self> {
        if multiplicities.len() != codomain.num_blocks() {
            return Err(Error::InvalidMorphism(format!(
                "multiplicity matrix has {} rows, codomain {} has {} blocks",
                multiplicities.len(),
                codomain,
                codomain.num_blocks()
            )));
        }
        for (x, row) in multiplicities.iter().enumerate() {
            if row.len() != domain.num_blocks() {
                return Err(Error::InvalidMorphism(format!(
                    "multiplicity row {x} has {} entries, domain {} has {} blocks",
                    row.len(),
                    domain,
                    domain.num_blocks()
                )));
            }
            let filled: usize = row.iter().zip(domain.blocks()).map(|(c, n)| c * n).sum();
            if filled != codomain.dim(x) {
                return Err(Error::InvalidMorphism(format!(
                    "dimension invariant m_x = sum_y c_xy n_y fails at block {x}: {} != {filled}",
                    codomain.dim(x)
                )));
            }
        }
        let unitaries = match unitaries {
            None => codomain.blocks().iter().map(|&m| linalg::identity(m)).collect(),
            Some(us) => {
                if us.len() != codomain.num_blocks() {
                    return Err(Error::InvalidMorphism(format!(
                        "expected {} unitaries, got {}",
                        codomain.num_blocks(),
                        us.len()
                    )));
                }
                for (x, u) in us.iter().enumerate() {
                    let m = codomain.dim(x);
                    if u.nrows() != m || u.ncols() != m {
                        return Err(Error::InvalidMorphism(format!("unitary {x} must be {m}x{m}")));
                    }
                    if !linalg::is_finite(u) {
                        return Err(Error::Parse(format!("unitary {x} has non-finite entries")));
                    }
                    let defect = linalg::max_abs_diff(&(u.adjoint() * u), &linalg::identity(m));
                    if defect > UNITARY_TOL {
                        return Err(Error::InvalidMorphism(format!(
                            "unitary invariant fails at block {x}: max |U^dagger U - 1| = {defect:.3e}"
                        )));
                    }
                }
                us
            }
        };
        Ok(Morphism { domain, codomain, multiplicities, unitaries })
    }

    fn from_parts(
        domain: AlgebraShape,
        codomain: AlgebraShape,
        multiplicities: Vec<Vec<usize>>,
        unitaries: Vec<ComplexMatrix>,
    ) -> Self {
        let f = Morphism { domain, codomain, multiplicities, unitaries };
        debug_assert!(f.check_dimensions());
        f
    }

    fn check_dimensions(&self) -> bool {
        self.multiplicities.iter().enumerate().all(|(x, row)| {
            row.iter().zip(self.domain.blocks()).map(|(c, n)| c * n).sum::<usize>() == self.codomain.dim(x)
        })
    }

    pub fn domain(&self) -> &AlgebraShape {
        &self.domain
    }

    pub fn codomain(&self) -> &AlgebraShape {
        &self.codomain
    }

    pub fn multiplicities(&self) -> &[Vec<usize>] {
        &self.multiplicities
    }

    pub fn multiplicity(&self, x: usize, y: usize) -> usize {
        self.multiplicities[x][y]
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// The ordered segment layout of codomain block `x`.
    pub fn layout(&self, x: usize) -> Vec<Segment> {
        let mut segments = Vec::new();
        let mut offset = 0;
        for (y, &c) in self.multiplicities[x].iter().enumerate() {
            let size = self.domain.dim(y);
            for copy in 0..c {
                segments.push(Segment { y, copy, offset, size });
                offset += size;
            }
        }
        segments
    }

    /// `id_A`.
    pub fn identity(shape: &AlgebraShape) -> Self {
        let k = shape.num_blocks();
        let c = (0..k).map(|x| (0..k).map(|y| usize::from(x == y)).collect()).collect();
        Morphism::from_parts(shape.clone(), shape.clone(), c, identities(shape))
    }

    /// `!_A : C → A`, `z ↦ z·1_A`.
    pub fn initial(shape: &AlgebraShape) -> Self {
        let c = shape.blocks().iter().map(|&m| vec![m]).collect();
        Morphism::from_parts(AlgebraShape::scalar(), shape.clone(), c, identities(shape))
    }

    /// Pullback along a function `φ: X → Y`: `C^Y → C^X`, `a ↦ a ∘ φ`.
    pub fn from_function(phi: &[usize], target_size: usize) -> Result<Self> {
        if phi.is_empty() || target_size == 0 {
            return Err(Error::InvalidShape("functions between empty sets are not supported".into()));
        }
        if let Some((x, &y)) = phi.iter().enumerate().find(|(_, &y)| y >= target_size) {
            return Err(Error::IndexOutOfRange(format!("phi({x}) = {y} but |Y| = {target_size}")));
        }
        let codomain = AlgebraShape::classical(phi.len());
        let c = phi.iter().map(|&y| (0..target_size).map(|k| usize::from(k == y)).collect()).collect();
        Ok(Morphism::from_parts(AlgebraShape::classical(target_size), codomain.clone(), c, identities(&codomain)))
    }

    /// `M_n → M_{pn}`, `b ↦ 1_p ⊗ b`.
    pub fn factor_inclusion(n: usize, p: usize) -> Self {
        let codomain = AlgebraShape::matrix(n * p);
        Morphism::from_parts(AlgebraShape::matrix(n), codomain.clone(), vec![vec![p]], identities(&codomain))
    }

    /// `M_n → M_{np}`, `b ↦ b ⊗ 1_p`, realised by the commutation unitary.
    pub fn factor_inclusion_right(n: usize, p: usize) -> Self {
        let mut swap = ComplexMatrix::zeros(n * p, n * p);
        for a in 0..p {
            for i in 0..n {
                swap[(i * p + a, a * n + i)] = ONE;
            }
        }
        Morphism::from_parts(AlgebraShape::matrix(n), AlgebraShape::matrix(n * p), vec![vec![p]], vec![swap])
    }

    /// `π: A ⊕ B → A`, dropping the `B` components.
    pub fn summand_projection(a: &AlgebraShape, b: &AlgebraShape) -> Self {
        let domain = a.direct_sum(b);
        let c = (0..a.num_blocks())
            .map(|x| (0..domain.num_blocks()).map(|y| usize::from(x == y)).collect())
            .collect();
        Morphism::from_parts(domain, a.clone(), c, identities(a))
    }

    /// `f ⊕ g : B ⊕ B' → A ⊕ A'`.
    pub fn external_sum(f: &Morphism, g: &Morphism) -> Self {
        let (fy, gy) = (f.domain.num_blocks(), g.domain.num_blocks());
        let mut c = Vec::with_capacity(f.codomain.num_blocks() + g.codomain.num_blocks());
        for row in &f.multiplicities {
            let mut r = row.clone();
            r.extend(std::iter::repeat_n(0, gy));
            c.push(r);
        }
        for row in &g.multiplicities {
            let mut r = vec![0; fy];
            r.extend_from_slice(row);
            c.push(r);
        }
        let mut us = f.unitaries.clone();
        us.extend(g.unitaries.iter().cloned());
        Morphism::from_parts(f.domain.direct_sum(&g.domain), f.codomain.direct_sum(&g.codomain), c, us)
    }

    /// `Ad_W ∘ f`: replaces each `U_x` by `W_x U_x`.
    pub fn conjugate(&self, w: &[ComplexMatrix]) -> Result<Self> {
        let us = self.unitaries.iter().zip(w).map(|(u, w)| w * u).collect();
        Morphism::new(self.domain.clone(), self.codomain.clone(), self.multiplicities.clone(), Some(us))
    }

    fn check_domain(&self, shape: &AlgebraShape) -> Result<()> {
        if &self.domain != shape {
            return Err(Error::ShapeMismatch(format!("morphism domain is {} but input lives on {}", self.domain, shape)));
        }
        Ok(())
    }

    fn check_codomain(&self, shape: &AlgebraShape) -> Result<()> {
        if &self.codomain != shape {
            return Err(Error::ShapeMismatch(format!(
                "morphism codomain is {} but input lives on {}",
                self.codomain, shape
            )));
        }
        Ok(())
    }

    /// `f(b)_x = U_x ⊞_y (1_{c_xy} ⊗ b_y) U_x†`.
    pub fn apply(&self, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_domain(b.shape())?;
        let blocks = (0..self.codomain.num_blocks())
            .map(|x| {
                let layout = self.layout(x);
                let inner = linalg::block_diag(layout.iter().map(|s| b.block(s.y)));
                let u = &self.unitaries[x];
                u * inner * u.adjoint()
            })
            .collect();
        AlgebraElement::new(self.codomain.clone(), blocks)
    }

    /// Unnormalised pulled-back block masses `q_y σ_y = Σ_x p_x f*_{xy}(ρ_x)`,
    /// computed from arbitrary codomain block masses.
    pub fn pullback_masses(&self, masses: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let mut out: Vec<ComplexMatrix> = self.domain.blocks().iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        for (x, mass) in masses.iter().enumerate() {
            if mass.iter().all(|z| *z == C64::new(0.0, 0.0)) {
                continue;
            }
            let u = &self.unitaries[x];
            let rotated = u.adjoint() * mass * u;
            for s in self.layout(x) {
                out[s.y] += rotated.view((s.offset, s.offset), (s.size, s.size));
            }
        }
        out
    }

    /// `ω ∘ f`.
    pub fn pullback(&self, omega: &State) -> Result<State> {
        self.check_codomain(omega.shape())?;
        let masses = self.pullback_masses(&omega.block_masses());
        Ok(State::from_block_masses(self.domain.clone(), masses))
    }

    /// `f ∘ g` for `g: C → B`, `f: B → A`.
    pub fn compose(&self, g: &Morphism) -> Result<Morphism> {
        if g.codomain != self.domain {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: inner codomain {} differs from outer domain {}",
                g.codomain, self.domain
            )));
        }
        let nz = g.domain.num_blocks();
        let mut multiplicities = Vec::with_capacity(self.codomain.num_blocks());
        let mut unitaries = Vec::with_capacity(self.codomain.num_blocks());
        for x in 0..self.codomain.num_blocks() {
            let row: Vec<usize> = (0..nz)
                .map(|z| (0..self.domain.num_blocks()).map(|y| self.multiplicities[x][y] * g.multiplicities[y][z]).sum())
                .collect();
            let outer = self.layout(x);
            // middle unitary ⊞_y (1 ⊗ V_y) and the interleaved (y, copy, z, copy') layout
            let middle = linalg::block_diag(outer.iter().map(|s| &g.unitaries[s.y]));
            let mut interleaved: Vec<(usize, usize, usize)> = Vec::new(); // (z, offset, size)
            for s in &outer {
                for t in g.layout(s.y) {
                    interleaved.push((t.y, s.offset + t.offset, t.size));
                }
            }
            let mut canonical = interleaved.clone();
            canonical.sort_by_key(|&(z, _, _)| z);
            let m = self.codomain.dim(x);
            let mut perm = ComplexMatrix::zeros(m, m);
            let mut can_pos = 0;
            for &(_, int_pos, size) in &canonical {
                for t in 0..size {
                    perm[(int_pos + t, can_pos + t)] = ONE;
                }
                can_pos += size;
            }
            unitaries.push(&self.unitaries[x] * middle * perm);
            multiplicities.push(row);
        }
        let composite = Morphism::from_parts(g.domain.clone(), self.codomain.clone(), multiplicities, unitaries);
        #[cfg(debug_assertions)]
        {
            let seq = |b: &AlgebraElement| self.apply(&g.apply(b).expect("shapes checked")).expect("shapes checked");
            debug_assert!(composite.max_apply_diff_with(seq) < 1e-8, "composite disagrees with sequential application");
        }
        Ok(composite)
    }

    /// `c` is a permutation matrix (block dimensions then match automatically).
    pub fn is_isomorphism(&self) -> bool {
        let (nx, ny) = (self.codomain.num_blocks(), self.domain.num_blocks());
        if nx != ny {
            return false;
        }
        let rows_ok = self.multiplicities.iter().all(|r| r.iter().sum::<usize>() == 1 && r.iter().all(|&c| c <= 1));
        let cols_ok = (0..ny).all(|y| self.multiplicities.iter().map(|r| r[y]).sum::<usize>() == 1);
        rows_ok && cols_ok
    }

    /// Requires `ω ⊥ ξ`; answers whether `(ω∘f) ⊥ (ξ∘f)`.
    pub fn preserves_orthogonality(&self, omega: &State, xi: &State, tol: f64) -> Result<bool> {
        if !omega.is_orthogonal_to(xi, tol)? {
            return Err(Error::NotOrthogonalInput);
        }
        self.pullback(omega)?.is_orthogonal_to(&self.pullback(xi)?, tol)
    }

    /// Projective measurement of a Hermitian observable sitting in one block of
    /// `codomain`: `C^{σ(A)} → A`, `e_λ ↦ P_λ`. Eigenvalues within `tol` are
    /// merged. Domain block 0 is the largest eigenvalue and also carries the
    /// identity of every other codomain block, which keeps the map unital.
    pub fn measurement(codomain: &AlgebraShape, block: usize, observable: &ComplexMatrix, tol: f64) -> Result<Self> {
        if block >= codomain.num_blocks() {
            return Err(Error::IndexOutOfRange(format!("block {block} of {codomain}")));
        }
        let m = codomain.dim(block);
        if observable.nrows() != m || observable.ncols() != m {
            return Err(Error::ShapeMismatch(format!("observable must be {m}x{m} to act on block {block}")));
        }
        let e = linalg::eigh(observable, tol)?;
        let mut clusters: Vec<usize> = vec![1];
        for k in 1..m {
            if e.values[k - 1] - e.values[k] <= tol {
                *clusters.last_mut().expect("nonempty") += 1;
            } else {
                clusters.push(1);
            }
        }
        if clusters.len() == 1 {
            return Err(Error::DegenerateSpectrum);
        }
        let k = clusters.len();
        let c = (0..codomain.num_blocks())
            .map(|x| {
                if x == block {
                    clusters.clone()
                } else {
                    let mut row = vec![0; k];
                    row[0] = codomain.dim(x);
                    row
                }
            })
            .collect();
        let mut us = identities(codomain);
        us[block] = e.vectors;
        Morphism::new(AlgebraShape::classical(k), codomain.clone(), c, Some(us))
    }

    /// Spectral resolution of a state: the morphism sending one point per rank-one
    /// spectral projection of each `ρ_x` (for `p_x > tol`) onto that projection,
    /// plus a final point `•` onto the complement of the support. Every spectral
    /// component of `ω` stays orthogonal after pullback and `S_f(ω) = 0`.
    pub fn spectral_resolution(omega: &State, tol: f64) -> Result<Self> {
        let shape = omega.shape();
        let mut eigs = Vec::with_capacity(shape.num_blocks());
        let mut ranks = Vec::with_capacity(shape.num_blocks());
        for (x, &p) in omega.weights().iter().enumerate() {
            if p > tol {
                let e = linalg::eigh(omega.density(x), tol.max(linalg::DEFAULT_TOL))?;
                ranks.push(e.values.iter().filter(|&&l| l > tol).count());
                eigs.push(Some(e.vectors));
            } else {
                ranks.push(0);
                eigs.push(None);
            }
        }
        let points: usize = ranks.iter().sum();
        let bullet = points;
        let mut c = Vec::with_capacity(shape.num_blocks());
        let mut start = 0;
        for (x, &r) in ranks.iter().enumerate() {
            let mut row = vec![0; points + 1];
            for slot in row.iter_mut().skip(start).take(r) {
                *slot = 1;
            }
            row[bullet] = shape.dim(x) - r;
            start += r;
            c.push(row);
        }
        let us = eigs
            .into_iter()
            .zip(shape.blocks())
            .map(|(v, &m)| v.unwrap_or_else(|| linalg::identity(m)))
            .collect();
        Morphism::new(AlgebraShape::classical(points + 1), shape.clone(), c, Some(us))
    }

    /// Extensional distance to another morphism: largest entry difference of the
    /// images of every matrix unit of the domain.
    pub fn max_apply_diff(&self, other: &Morphism) -> Result<f64> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::ShapeMismatch("morphisms have different domain or codomain".into()));
        }
        Ok(self.max_apply_diff_with(|b| other.apply(b).expect("shapes checked")))
    }

    fn max_apply_diff_with(&self, other: impl Fn(&AlgebraElement) -> AlgebraElement) -> f64 {
        let mut worst: f64 = 0.0;
        for e in matrix_units(&self.domain) {
            let lhs = self.apply(&e).expect("matrix units live on the domain");
            let rhs = other(&e);
            worst = worst.max(lhs.max_abs_diff(&rhs).unwrap_or(f64::INFINITY));
        }
        worst
    }
}

fn identities(shape: &AlgebraShape) -> Vec<ComplexMatrix> {
    shape.blocks().iter().map(|&m| linalg::identity(m)).collect()
}

/// The matrix-unit basis `E^{(y)}_{ij}` of an algebra.
pub fn matrix_units(shape: &AlgebraShape) -> Vec<AlgebraElement> {
    let mut units = Vec::new();
    for (y, &n) in shape.blocks().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let mut e = AlgebraElement::zero(shape).into_blocks();
                e[y][(i, j)] = ONE;
                units.push(AlgebraElement::new(shape.clone(), e).expect("units match the shape"));
            }
        }
    }
    units
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real_diag, sample_complex_gaussian, sample_density_with, sample_simplex_with, sample_unitary_with, Seed};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn shape(b: &[usize]) -> AlgebraShape {
        AlgebraShape::new(b.to_vec()).unwrap()
    }

    fn random_element(s: &AlgebraShape, seed: u64) -> AlgebraElement {
        let mut rng = Seed::new(seed).rng();
        let b = s.blocks().iter().map(|&m| sample_complex_gaussian(m, m, &mut rng)).collect();
        AlgebraElement::new(s.clone(), b).unwrap()
    }

    fn random_state(s: &AlgebraShape, seed: u64) -> State {
        let mut rng = Seed::new(seed).rng();
        let p = sample_simplex_with(s.num_blocks(), &mut rng);
        let d = s.blocks().iter().map(|&m| sample_density_with(m, &mut rng)).collect();
        State::new(s.clone(), p, d).unwrap()
    }

    fn randomize(f: &Morphism, seed: u64) -> Morphism {
        let mut rng = Seed::new(seed).rng();
        let w: Vec<_> = f.codomain().blocks().iter().map(|&m| sample_unitary_with(m, &mut rng)).collect();
        f.conjugate(&w).unwrap()
    }

    fn bell() -> ComplexMatrix {
        let mut b = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            b[(i, j)] = c(0.5);
        }
        b
    }

    /// A morphism [1,2] -> [3,4,2] with mixed multiplicities.
    fn mixed() -> Morphism {
        let f = Morphism::new(shape(&[1, 2]), shape(&[3, 4, 2]), vec![vec![1, 1], vec![0, 2], vec![2, 0]], None).unwrap();
        randomize(&f, 99)
    }

    #[test]
    fn constructor_checks_invariants() {
        assert!(Morphism::new(shape(&[2]), shape(&[3]), vec![vec![1]], None).is_err());
        let bad_u = vec![real_diag(&[1.0, 2.0])];
        assert!(Morphism::new(shape(&[1]), shape(&[2]), vec![vec![2]], Some(bad_u)).is_err());
        assert!(Morphism::new(shape(&[1, 1]), shape(&[2]), vec![vec![1, 1]], None).is_ok());
    }

    #[test]
    fn apply_examples() {
        let s = shape(&[2, 1]);
        let b = random_element(&s, 1);
        assert_eq!(Morphism::identity(&s).apply(&b).unwrap(), b);

        let b = random_element(&shape(&[2]), 2);
        let fb = Morphism::factor_inclusion(2, 2).apply(&b).unwrap();
        assert_eq!(fb.block(0), &linalg::tensor(&linalg::identity(2), b.block(0)));

        let fr = Morphism::factor_inclusion_right(2, 2).apply(&b).unwrap();
        assert!(linalg::max_abs_diff(fr.block(0), &linalg::tensor(b.block(0), &linalg::identity(2))) < 1e-15);

        let meas = Morphism::new(AlgebraShape::classical(2), shape(&[2]), vec![vec![1, 1]], None).unwrap();
        let v = meas.apply(&AlgebraElement::from_function(&[c(3.0), c(-1.0)])).unwrap();
        assert_eq!(v.block(0), &real_diag(&[3.0, -1.0]));
    }

    #[test]
    fn apply_is_a_unital_star_homomorphism() {
        let f = mixed();
        let one = f.apply(&AlgebraElement::identity(f.domain())).unwrap();
        assert!(one.max_abs_diff(&AlgebraElement::identity(f.codomain())).unwrap() < 1e-12);
        for seed in 0..20 {
            let a = random_element(f.domain(), seed);
            let b = random_element(f.domain(), seed + 100);
            let fab = f.apply(&a.multiply(&b).unwrap()).unwrap();
            let fafb = f.apply(&a).unwrap().multiply(&f.apply(&b).unwrap()).unwrap();
            assert!(fab.max_abs_diff(&fafb).unwrap() < 1e-10);
            let adj = f.apply(&a.adjoint()).unwrap().max_abs_diff(&f.apply(&a).unwrap().adjoint()).unwrap();
            assert!(adj < 1e-12);
            let lin = f.apply(&a.add(&b.scale(c(2.5))).unwrap()).unwrap();
            let lin2 = f.apply(&a).unwrap().add(&f.apply(&b).unwrap().scale(c(2.5))).unwrap();
            assert!(lin.max_abs_diff(&lin2).unwrap() < 1e-10);
        }
    }

    #[test]
    fn pullback_duality() {
        let f = mixed();
        for seed in 0..20 {
            let omega = random_state(f.codomain(), seed);
            let pulled = f.pullback(&omega).unwrap();
            let b = random_element(f.domain(), seed + 50);
            let lhs = pulled.evaluate(&b).unwrap();
            let rhs = omega.evaluate(&f.apply(&b).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn pullback_examples() {
        let omega = random_state(&shape(&[2, 3]), 4);
        let unit = Morphism::initial(omega.shape()).pullback(&omega).unwrap();
        assert_eq!(unit.weights(), &[1.0]);

        let bell_state = State::from_density(bell()).unwrap();
        let half = Morphism::factor_inclusion(2, 2).pullback(&bell_state).unwrap();
        assert!(linalg::max_abs_diff(half.density(0), &real_diag(&[0.5, 0.5])) < 1e-15);

        let rho = State::from_density(real_diag(&[0.5, 0.25, 0.125, 0.125])).unwrap();
        let sigma = Morphism::factor_inclusion(2, 2).pullback(&rho).unwrap();
        assert!(linalg::max_abs_diff(sigma.density(0), &real_diag(&[0.625, 0.375])) < 1e-15);
    }

    #[test]
    fn composition_examples() {
        let f = mixed();
        let id_b = Morphism::identity(f.domain());
        let id_a = Morphism::identity(f.codomain());
        assert!(f.compose(&id_b).unwrap().max_apply_diff(&f).unwrap() < 1e-12);
        assert!(id_a.compose(&f).unwrap().max_apply_diff(&f).unwrap() < 1e-12);

        let bang = f.compose(&Morphism::initial(f.domain())).unwrap();
        assert!(bang.max_apply_diff(&Morphism::initial(f.codomain())).unwrap() < 1e-12);

        let incl = Morphism::factor_inclusion(2, 2);
        let meas = Morphism::new(AlgebraShape::classical(2), shape(&[2]), vec![vec![1, 1]], None).unwrap();
        let comp = incl.compose(&meas).unwrap();
        assert_eq!(comp.multiplicities(), &[vec![2, 2]]);
        for seed in 0..5 {
            let z = random_element(meas.domain(), seed);
            let seq = incl.apply(&meas.apply(&z).unwrap()).unwrap();
            assert!(comp.apply(&z).unwrap().max_abs_diff(&seq).unwrap() < 1e-12);
        }
        assert!(meas.compose(&incl).is_err());
    }

    #[test]
    fn composition_of_randomised_morphisms() {
        // g: [1,1,2] -> [1,2]; f: [1,2] -> [3,4,2]
        let g = Morphism::new(shape(&[1, 1, 2]), shape(&[1, 2]), vec![vec![0, 1, 0], vec![1, 1, 0]], None).unwrap();
        let g = randomize(&g, 5);
        let f = mixed();
        let fg = f.compose(&g).unwrap();
        for seed in 0..10 {
            let z = random_element(g.domain(), seed);
            let seq = f.apply(&g.apply(&z).unwrap()).unwrap();
            assert!(fg.apply(&z).unwrap().max_abs_diff(&seq).unwrap() < 1e-9);
        }
    }

    #[test]
    fn initial_examples() {
        let one = Morphism::initial(&AlgebraShape::scalar());
        assert!(one.max_apply_diff(&Morphism::identity(&AlgebraShape::scalar())).unwrap() < 1e-15);
        let f = Morphism::initial(&shape(&[2]));
        let img = f.apply(&AlgebraElement::identity(&AlgebraShape::scalar())).unwrap();
        assert_eq!(img.block(0), &linalg::identity(2));
    }

    #[test]
    fn isomorphism_detection() {
        assert!(Morphism::identity(&shape(&[2, 3])).is_isomorphism());
        assert!(!Morphism::factor_inclusion(2, 2).is_isomorphism());
        let swap = Morphism::new(shape(&[2, 3]), shape(&[3, 2]), vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert!(swap.is_isomorphism());
        assert!(Morphism::initial(&AlgebraShape::scalar()).is_isomorphism());
        assert!(!Morphism::initial(&AlgebraShape::classical(2)).is_isomorphism());
    }

    #[test]
    fn orthogonality_preservation_examples() {
        let swap = randomize(&Morphism::new(shape(&[2, 1]), shape(&[1, 2]), vec![vec![0, 1], vec![1, 0]], None).unwrap(), 3);
        let w = State::pure_in_block(swap.codomain(), 1, &ComplexMatrix::from_column_slice(2, 1, &[c(1.0), c(0.0)])).unwrap();
        let x = State::pure_in_block(swap.codomain(), 1, &ComplexMatrix::from_column_slice(2, 1, &[c(0.0), c(1.0)])).unwrap();
        assert!(swap.preserves_orthogonality(&w, &x, 1e-10).unwrap());

        let bang = Morphism::initial(&AlgebraShape::classical(2));
        assert!(!bang.preserves_orthogonality(&State::dirac(2, 0), &State::dirac(2, 1), 1e-10).unwrap());

        let mut psi_minus = ComplexMatrix::zeros(4, 4);
        for &(i, j, v) in &[(1, 1, 0.5), (1, 2, -0.5), (2, 1, -0.5), (2, 2, 0.5)] {
            psi_minus[(i, j)] = c(v);
        }
        let b1 = State::from_density(bell()).unwrap();
        let b2 = State::from_density(psi_minus).unwrap();
        assert!(!Morphism::factor_inclusion_right(2, 2).preserves_orthogonality(&b1, &b2, 1e-10).unwrap());

        assert!(matches!(bang.preserves_orthogonality(&State::dirac(2, 0), &State::dirac(2, 0), 1e-10), Err(Error::NotOrthogonalInput)));
    }

    #[test]
    fn measurement_examples() {
        let z = Morphism::measurement(&shape(&[2]), 0, &real_diag(&[1.0, -1.0]), 1e-10).unwrap();
        assert_eq!(z.domain(), &AlgebraShape::classical(2));
        let e1 = z.apply(&AlgebraElement::from_function(&[c(1.0), c(0.0)])).unwrap();
        assert!(linalg::max_abs_diff(e1.block(0), &real_diag(&[1.0, 0.0])) < 1e-12);

        let plus = State::from_density(ComplexMatrix::from_element(2, 2, c(0.5))).unwrap();
        let q = z.pullback(&plus).unwrap();
        assert!((q.weights()[0] - 0.5).abs() < 1e-12 && (q.weights()[1] - 0.5).abs() < 1e-12);

        let s = shape(&[1, 3, 2]);
        let obs = linalg::sample_hermitian_with(3, &mut Seed::new(8).rng());
        let f = Morphism::measurement(&s, 1, &obs, 1e-10).unwrap();
        let one = f.apply(&AlgebraElement::identity(f.domain())).unwrap();
        assert!(one.max_abs_diff(&AlgebraElement::identity(&s)).unwrap() < 1e-12);

        assert!(matches!(Morphism::measurement(&s, 1, &linalg::identity(3), 1e-10), Err(Error::DegenerateSpectrum)));
        let clustered = Morphism::measurement(&shape(&[3]), 0, &real_diag(&[2.0, 2.0, -1.0]), 1e-10).unwrap();
        assert_eq!(clustered.multiplicities(), &[vec![2, 1]]);
    }

    #[test]
    fn summand_projection_examples() {
        let pi = Morphism::summand_projection(&AlgebraShape::classical(1), &AlgebraShape::classical(1));
        let v = pi.apply(&AlgebraElement::from_function(&[c(7.0), c(3.0)])).unwrap();
        assert_eq!(v.block(0)[(0, 0)], c(7.0));
        let w = pi.pullback(&State::dirac(1, 0)).unwrap();
        assert_eq!(w.weights(), &[1.0, 0.0]);

        let a = shape(&[2, 1]);
        let b = shape(&[3]);
        let pi = Morphism::summand_projection(&a, &b);
        let omega = random_state(&a, 9);
        let ext = pi.pullback(&omega).unwrap();
        assert!((ext.weights()[0] - omega.weights()[0]).abs() < 1e-15);
        assert_eq!(ext.weights()[2], 0.0);
        let pure = State::pure_in_block(&a, 0, &ComplexMatrix::from_column_slice(2, 1, &[c(0.6), c(0.8)])).unwrap();
        assert!(pi.pullback(&pure).unwrap().is_pure(1e-10));
    }

    #[test]
    fn external_sum_examples() {
        let (a, b) = (shape(&[2]), shape(&[1, 1]));
        let id = Morphism::external_sum(&Morphism::identity(&a), &Morphism::identity(&b));
        assert!(id.max_apply_diff(&Morphism::identity(&a.direct_sum(&b))).unwrap() < 1e-15);

        let f = mixed();
        let g = randomize(&Morphism::factor_inclusion(2, 2), 4);
        let fg = Morphism::external_sum(&f, &g);
        let (x, y) = (random_element(f.domain(), 1), random_element(g.domain(), 2));
        let lhs = fg.apply(&x.direct_sum(&y)).unwrap();
        let rhs = f.apply(&x).unwrap().direct_sum(&g.apply(&y).unwrap());
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);

        let (w, v) = (random_state(f.codomain(), 5), random_state(g.codomain(), 6));
        let mixed_state = State::external_sum(0.35, &w, &v).unwrap();
        let pulled = fg.pullback(&mixed_state).unwrap();
        let expected = State::external_sum(0.35, &f.pullback(&w).unwrap(), &g.pullback(&v).unwrap()).unwrap();
        assert!(pulled.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn spectral_resolution_is_unital_and_orthogonality_preserving() {
        let s = shape(&[3, 1, 2]);
        let mut rng = Seed::new(12).rng();
        let masses = vec![
            linalg::sample_density_rank_with(3, 2, &mut rng) * c(0.7),
            ComplexMatrix::from_element(1, 1, c(0.3)),
            ComplexMatrix::zeros(2, 2),
        ];
        let omega = State::from_block_masses(s.clone(), masses);
        let f = Morphism::spectral_resolution(&omega, 1e-10).unwrap();
        assert_eq!(f.domain(), &AlgebraShape::classical(4));
        let one = f.apply(&AlgebraElement::identity(f.domain())).unwrap();
        assert!(one.max_abs_diff(&AlgebraElement::identity(&s)).unwrap() < 1e-12);
        let q = f.pullback(&omega).unwrap();
        assert!(q.weights()[3].abs() < 1e-12);
    }
}
