//! Seeded randomized verification suites.
//!
//! Every suite runs `trials` independent trials; trial `i` draws from the RNG
//! stream `(seed, i)`, so a report depends only on `(suite, trials, seed, tol)`
//! and not on how rayon schedules the work.

use crate::algebra::AlgebraShape;
use crate::disintegration::{
    classical_disintegrate, disintegration_entropy, quantum_disintegrate, QuantumDisintegration, DISINTEGRATION_TOL,
};
use crate::entropy::{entropy_change, holevo_change, k_functor, segal, shannon, Units};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Seed, C64};
use crate::morphism::Morphism;
use crate::state::State;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// `|χ_f|` below this counts as affine on the orthogonality-preserving constructions.
pub const AFFINE_TOL: f64 = 1e-8;
/// `|χ_f|` above this counts as a genuine failure of affinity.
pub const NON_AFFINE_GAP: f64 = 1e-4;
/// Right-hand concavity equality on orthogonal families.
pub const CONCAVITY_EQ_TOL: f64 = 1e-8;
/// Right-hand concavity gap required on generic overlapping families.
pub const CONCAVITY_GAP: f64 = 1e-4;
/// Agreement between disintegration entropy and `S_f`.
pub const DISINTEGRATION_MATCH_TOL: f64 = 1e-8;
/// External affinity of `K`.
pub const K_AFFINE_TOL: f64 = 1e-10;
/// Strict negativity required of the measurement construction.
pub const NEGATIVE_MARGIN: f64 = 1e-6;
/// Final distance in the continuity schedule.
pub const CONTINUITY_TOL: f64 = 1e-3;
/// Bounded retries when generating instances.
pub const MAX_ATTEMPTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteName {
    Coboundary,
    Functoriality,
    IsoInvariance,
    AdjoinZero,
    Concavity,
    HolevoNonneg,
    OrthogonalAffinity,
    CommutativePositivity,
    SupportImage,
    OverlapPersistence,
    PureVanishing,
    NegativeExistence,
    ExternalAffinity,
    KCounterexample,
    Continuity,
    Disintegration,
    CharacterizationFit,
}

impl SuiteName {
    pub const ALL: [SuiteName; 17] = [
        SuiteName::Coboundary,
        SuiteName::Functoriality,
        SuiteName::IsoInvariance,
        SuiteName::AdjoinZero,
        SuiteName::Concavity,
        SuiteName::HolevoNonneg,
        SuiteName::OrthogonalAffinity,
        SuiteName::CommutativePositivity,
        SuiteName::SupportImage,
        SuiteName::OverlapPersistence,
        SuiteName::PureVanishing,
        SuiteName::NegativeExistence,
        SuiteName::ExternalAffinity,
        SuiteName::KCounterexample,
        SuiteName::Continuity,
        SuiteName::Disintegration,
        SuiteName::CharacterizationFit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Coboundary => "coboundary",
            SuiteName::Functoriality => "functoriality",
            SuiteName::IsoInvariance => "iso-invariance",
            SuiteName::AdjoinZero => "adjoin-zero",
            SuiteName::Concavity => "concavity",
            SuiteName::HolevoNonneg => "holevo-nonneg",
            SuiteName::OrthogonalAffinity => "orthogonal-affinity",
            SuiteName::CommutativePositivity => "commutative-positivity",
            SuiteName::SupportImage => "support-image",
            SuiteName::OverlapPersistence => "overlap-persistence",
            SuiteName::PureVanishing => "pure-vanishing",
            SuiteName::NegativeExistence => "negative-existence",
            SuiteName::ExternalAffinity => "external-affinity",
            SuiteName::KCounterexample => "k-counterexample",
            SuiteName::Continuity => "continuity",
            SuiteName::Disintegration => "disintegration",
            SuiteName::CharacterizationFit => "characterization-fit",
        }
    }

    /// Whether the residuals of this suite are entropy values (and so rescale with units).
    fn residual_is_entropy(self) -> bool {
        !matches!(self, SuiteName::SupportImage | SuiteName::OverlapPersistence)
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// A single suite or the whole roster.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSelection {
    One(SuiteName),
    All,
}

impl FromStr for SuiteSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            Ok(SuiteSelection::All)
        } else {
            s.parse().map(SuiteSelection::One)
        }
    }
}

impl SuiteSelection {
    pub fn suites(self) -> Vec<SuiteName> {
        match self {
            SuiteSelection::One(n) => vec![n],
            SuiteSelection::All => SuiteName::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub description: String,
    /// `None` when the trial errored out rather than measuring something.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub units: &'static str,
    pub failures: Vec<Failure>,
    pub max_residual: f64,
    pub pass: bool,
    /// Least-squares constant, for `characterization-fit`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_c: Option<f64>,
}

impl SuiteReport {
    /// Re-expresses entropy-valued residuals in `units`.
    pub fn in_units(mut self, units: Units) -> Self {
        let entropic = self.suite.parse::<SuiteName>().map(SuiteName::residual_is_entropy).unwrap_or(false);
        if entropic {
            self.max_residual = units.convert(self.max_residual);
            for f in &mut self.failures {
                f.residual = f.residual.map(|r| units.convert(r));
            }
        }
        self.units = units.name();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RosterReport {
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Generator parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceFamily {
    pub max_blocks: usize,
    pub max_dim: usize,
    /// Only commutative algebras (all blocks 1×1).
    pub classical: bool,
    /// Also produce a state `ξ ⊥ ω`.
    pub orthogonal_pair: bool,
}

impl Default for InstanceFamily {
    fn default() -> Self {
        InstanceFamily { max_blocks: 4, max_dim: 4, classical: false, orthogonal_pair: false }
    }
}

impl InstanceFamily {
    pub fn classical() -> Self {
        InstanceFamily { classical: true, max_dim: 1, max_blocks: 6, ..Self::default() }
    }

    pub fn with_orthogonal_pair(self) -> Self {
        InstanceFamily { orthogonal_pair: true, ..self }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub morphism: Morphism,
    pub omega: State,
    pub xi: Option<State>,
}

/// Random `f: B → A` with a state on `A` (and an orthogonal partner if asked).
pub fn generate_instance(family: &InstanceFamily, seed: Seed) -> Result<Instance> {
    generate_with(family, &mut seed.rng())
}

fn generate_with(family: &InstanceFamily, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let codomain = if family.orthogonal_pair {
        loop {
            let s = random_shape(rng, family.max_blocks, family.max_dim, family.classical);
            if s.total_dim() > 1 {
                break s;
            }
        }
    } else {
        random_shape(rng, family.max_blocks, family.max_dim, family.classical)
    };
    let morphism = random_morphism_to(rng, &codomain, family.max_blocks, family.classical)?;
    if family.orthogonal_pair {
        let (omega, xi) = random_orthogonal_pair(rng, &codomain);
        Ok(Instance { morphism, omega, xi: Some(xi) })
    } else {
        let omega = random_state(rng, &codomain);
        Ok(Instance { morphism, omega, xi: None })
    }
}

pub(crate) fn random_shape<R: Rng + ?Sized>(rng: &mut R, max_blocks: usize, max_dim: usize, classical: bool) -> AlgebraShape {
    let k = rng.random_range(1..=max_blocks.max(1));
    let dims = (0..k).map(|_| if classical { 1 } else { rng.random_range(1..=max_dim.max(1)) }).collect();
    AlgebraShape::new(dims).expect("positive block sizes")
}

fn random_unitaries<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> Vec<ComplexMatrix> {
    shape.blocks().iter().map(|&m| linalg::sample_unitary_with(m, rng)).collect()
}

/// A random morphism into `codomain`: random domain shape, multiplicities by a
/// randomized greedy fill of each codomain block, Haar unitaries.
pub(crate) fn random_morphism_to<R: Rng + ?Sized>(
    rng: &mut R,
    codomain: &AlgebraShape,
    max_blocks: usize,
    classical: bool,
) -> Result<Morphism> {
    let smallest = *codomain.blocks().iter().min().expect("nonempty shape");
    for _ in 0..MAX_ATTEMPTS {
        let domain = random_shape(rng, max_blocks, smallest, classical);
        if let Some(c) = greedy_multiplicities(rng, &domain, codomain) {
            let us = random_unitaries(rng, codomain);
            return Morphism::new(domain, codomain.clone(), c, Some(us));
        }
    }
    Err(Error::InfeasibleShapes { attempts: MAX_ATTEMPTS })
}

fn greedy_multiplicities<R: Rng + ?Sized>(rng: &mut R, domain: &AlgebraShape, codomain: &AlgebraShape) -> Option<Vec<Vec<usize>>> {
    let mut c = vec![vec![0; domain.num_blocks()]; codomain.num_blocks()];
    for (x, &m) in codomain.blocks().iter().enumerate() {
        let mut remaining = m;
        while remaining > 0 {
            let fits: Vec<usize> = (0..domain.num_blocks()).filter(|&y| domain.dim(y) <= remaining).collect();
            let &y = fits.choose(rng)?;
            c[x][y] += 1;
            remaining -= domain.dim(y);
        }
    }
    Some(c)
}

/// Dirichlet(1, …, 1) weights (sometimes with a zeroed block) and Ginibre densities.
pub(crate) fn random_state<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> State {
    let mut p = linalg::sample_simplex_with(shape.num_blocks(), rng);
    if shape.num_blocks() > 1 && rng.random_bool(0.25) {
        let x = rng.random_range(0..shape.num_blocks());
        let rest = 1.0 - p[x];
        p[x] = 0.0;
        p.iter_mut().for_each(|v| *v /= rest);
    }
    let densities = shape.blocks().iter().map(|&m| linalg::sample_density_with(m, rng)).collect();
    State::new(shape.clone(), p, densities).expect("sampled weights and densities are valid")
}

/// Like [`random_state`] but with random ranks in each block.
fn random_low_rank_state<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> State {
    let p = linalg::sample_simplex_with(shape.num_blocks(), rng);
    let masses = shape
        .blocks()
        .iter()
        .zip(&p)
        .map(|(&m, &px)| {
            let r = rng.random_range(1..=m);
            linalg::sample_density_rank_with(m, r, rng) * C64::new(px, 0.0)
        })
        .collect();
    State::from_block_masses(shape.clone(), masses)
}

/// Full-rank weights and densities: Dirichlet mixed with uniform.
fn random_faithful_state<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> State {
    let k = shape.num_blocks() as f64;
    let p = linalg::sample_simplex_with(shape.num_blocks(), rng).into_iter().map(|v| 0.8 * v + 0.2 / k).collect();
    let densities = shape
        .blocks()
        .iter()
        .map(|&m| linalg::sample_density_with(m, rng) * C64::new(0.8, 0.0) + linalg::identity(m) * C64::new(0.2 / m as f64, 0.0))
        .collect();
    State::new(shape.clone(), p, densities).expect("valid by construction")
}

/// Two states whose supports are spanned by disjoint sets of columns of a
/// random unitary in each block. Requires `total_dim > 1`.
fn random_orthogonal_pair<R: Rng + ?Sized>(rng: &mut R, shape: &AlgebraShape) -> (State, State) {
    assert!(shape.total_dim() > 1, "no orthogonal pair on C");
    loop {
        let split: Vec<usize> = shape.blocks().iter().map(|&m| rng.random_range(0..=m)).collect();
        let any_left = split.iter().any(|&r| r > 0);
        let any_right = split.iter().zip(shape.blocks()).any(|(&r, &m)| r < m);
        if !(any_left && any_right) {
            continue;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (&m, &r) in shape.blocks().iter().zip(&split) {
            let u = linalg::sample_unitary_with(m, rng);
            left.push(weighted_projection(rng, &u, 0..r));
            right.push(weighted_projection(rng, &u, r..m));
        }
        return (State::from_block_masses(shape.clone(), left), State::from_block_masses(shape.clone(), right));
    }
}

/// `Σ_{k ∈ cols} w_k u_k u_k†` with random positive weights.
fn weighted_projection<R: Rng + ?Sized>(rng: &mut R, u: &ComplexMatrix, cols: std::ops::Range<usize>) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(u.nrows(), u.nrows());
    for k in cols {
        let w: f64 = rng.random_range(0.1..1.0);
        let col = u.column(k);
        out += col * col.adjoint() * C64::new(w, 0.0);
    }
    out
}

/// A random *-isomorphism onto `codomain`.
fn random_isomorphism_to<R: Rng + ?Sized>(rng: &mut R, codomain: &AlgebraShape) -> Morphism {
    let k = codomain.num_blocks();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut dims = vec![0; k];
    for (x, &y) in perm.iter().enumerate() {
        dims[y] = codomain.dim(x);
    }
    let c = perm.iter().map(|&y| (0..k).map(|j| usize::from(j == y)).collect()).collect();
    let us = random_unitaries(rng, codomain);
    Morphism::new(AlgebraShape::new(dims).expect("valid"), codomain.clone(), c, Some(us)).expect("valid by construction")
}

// ---------------------------------------------------------------------------
// Trial bookkeeping

#[derive(Default)]
struct Trial {
    residual: f64,
    failures: Vec<(String, Option<f64>)>,
    /// `(H_f(ω), S_f(ω))` for the characterization fit.
    samples: Vec<(f64, f64)>,
}

impl Trial {
    /// `|value|` must not exceed `threshold`.
    fn close(&mut self, what: &str, value: f64, threshold: f64) {
        let r = value.abs();
        self.residual = self.residual.max(r);
        if r > threshold || r.is_nan() {
            self.failures.push((format!("{what}: |{value:.3e}| > {threshold:.1e}"), Some(r)));
        }
    }

    /// `value ≥ −slack`.
    fn nonnegative(&mut self, what: &str, value: f64, slack: f64) {
        let r = (-value).max(0.0);
        self.residual = self.residual.max(r);
        if value < -slack || value.is_nan() {
            self.failures.push((format!("{what}: {value:.3e} < -{slack:.1e}"), Some(r)));
        }
    }

    /// `value > threshold` (a required margin; not folded into the residual when met).
    fn exceeds(&mut self, what: &str, value: f64, threshold: f64) {
        if value <= threshold || value.is_nan() {
            let r = threshold - value;
            self.residual = self.residual.max(r);
            self.failures.push((format!("{what}: {value:.3e} <= {threshold:.1e}"), Some(r)));
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push((what.to_string(), None));
        }
    }
}

type TrialFn = fn(&mut ChaCha8Rng, usize, f64) -> Result<Trial>;

fn trial_fn(name: SuiteName) -> TrialFn {
    match name {
        SuiteName::Coboundary => coboundary,
        SuiteName::Functoriality => functoriality,
        SuiteName::IsoInvariance => iso_invariance,
        SuiteName::AdjoinZero => adjoin_zero,
        SuiteName::Concavity => concavity,
        SuiteName::HolevoNonneg => holevo_nonneg,
        SuiteName::OrthogonalAffinity => orthogonal_affinity,
        SuiteName::CommutativePositivity => commutative_positivity,
        SuiteName::SupportImage => support_image,
        SuiteName::OverlapPersistence => overlap_persistence,
        SuiteName::PureVanishing => pure_vanishing,
        SuiteName::NegativeExistence => negative_existence,
        SuiteName::ExternalAffinity => external_affinity,
        SuiteName::KCounterexample => k_counterexample,
        SuiteName::Continuity => continuity,
        SuiteName::Disintegration => disintegration,
        SuiteName::CharacterizationFit => characterization_fit,
    }
}

/// Runs one suite.
pub fn run_suite(name: SuiteName, trials: usize, seed: Seed, tol: f64) -> SuiteReport {
    let run = trial_fn(name);
    let outcomes: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.with_stream(i as u64).rng();
            run(&mut rng, i, tol)
        })
        .collect();

    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut samples = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(t) => {
                max_residual = max_residual.max(t.residual);
                samples.extend(t.samples.into_iter().map(|s| (i, s)));
                failures.extend(t.failures.into_iter().map(|(description, residual)| Failure {
                    trial: i,
                    seed: seed.seed,
                    description,
                    residual,
                }));
            }
            Err(e) => failures.push(Failure { trial: i, seed: seed.seed, description: format!("error: {e}"), residual: None }),
        }
    }

    let mut fitted_c = None;
    if name == SuiteName::CharacterizationFit {
        let pairs: Vec<(f64, f64)> = samples.iter().map(|&(_, s)| s).collect();
        let c = fit_constant(&pairs);
        fitted_c = Some(c);
        let c_err = (c - 1.0).abs();
        max_residual = max_residual.max(c_err);
        if c_err > tol || c.is_nan() {
            failures.push(Failure { trial: 0, seed: seed.seed, description: format!("fitted c = {c} differs from 1"), residual: Some(c_err) });
        }
        for (i, (h, s)) in samples {
            let r = (h - c * s).abs();
            max_residual = max_residual.max(r);
            if r > tol {
                failures.push(Failure { trial: i, seed: seed.seed, description: format!("fit residual |H - cS| = {r:.3e}"), residual: Some(r) });
            }
        }
    }

    SuiteReport {
        suite: name.as_str().to_string(),
        trials,
        seed: seed.seed,
        tol,
        units: Units::Nats.name(),
        pass: failures.is_empty(),
        failures,
        max_residual,
        fitted_c,
    }
}

/// Runs every suite in the roster.
pub fn run_all(trials: usize, seed: Seed, tol: f64) -> RosterReport {
    run_selection(SuiteSelection::All, trials, seed, tol)
}

pub fn run_selection(selection: SuiteSelection, trials: usize, seed: Seed, tol: f64) -> RosterReport {
    let suites: Vec<SuiteReport> = selection.suites().into_iter().map(|n| run_suite(n, trials, seed, tol)).collect();
    RosterReport { pass: suites.iter().all(|s| s.pass), suites }
}

/// Least-squares `c` minimising `Σ (H − c S)²`.
pub fn fit_constant(samples: &[(f64, f64)]) -> f64 {
    let (num, den) = samples.iter().fold((0.0, 0.0), |(n, d), &(h, s)| (n + h * s, d + s * s));
    num / den
}

fn random_lambda<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..=1.0)
}

fn generic(rng: &mut ChaCha8Rng) -> Result<Instance> {
    generate_with(&InstanceFamily::default(), rng)
}

// ---------------------------------------------------------------------------
// Suites

fn coboundary(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let Instance { morphism: f, omega, .. } = generic(rng)?;
    let mut t = Trial::default();
    let lhs = entropy_change(&f, &omega)?;
    let h_a = entropy_change(&Morphism::initial(f.codomain()), &omega)?;
    let h_b = entropy_change(&Morphism::initial(f.domain()), &f.pullback(&omega)?)?;
    t.close("S_f - (S_A(w) - S_B(w o f))", lhs - (h_a - h_b), tol);
    Ok(t)
}

fn functoriality(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let Instance { morphism: f, omega, .. } = generic(rng)?;
    let g = random_morphism_to(rng, f.domain(), 4, false)?;
    let fg = f.compose(&g)?;
    let mut t = Trial::default();
    let lhs = entropy_change(&fg, &omega)?;
    let rhs = entropy_change(&f, &omega)? + entropy_change(&g, &f.pullback(&omega)?)?;
    t.close("S_(f o g) - S_f - S_g(w o f)", lhs - rhs, tol);
    let direct = fg.pullback(&omega)?;
    let stepwise = g.pullback(&f.pullback(&omega)?)?;
    t.close("pullback along f o g vs stepwise", direct.max_abs_diff(&stepwise)?, tol);
    Ok(t)
}

fn iso_invariance(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let shape = random_shape(rng, 4, 4, false);
    let f = random_isomorphism_to(rng, &shape);
    let omega = random_low_rank_state(rng, &shape);
    let mut t = Trial::default();
    t.require("random isomorphism is recognised", f.is_isomorphism());
    t.close("S_f for an isomorphism", entropy_change(&f, &omega)?, tol);
    let pulled = f.pullback(&omega)?;
    t.require("isomorphisms preserve purity", omega.is_pure(tol) == pulled.is_pure(tol));
    Ok(t)
}

fn adjoin_zero(rng: &mut ChaCha8Rng, i: usize, tol: f64) -> Result<Trial> {
    let classical = i.is_multiple_of(2);
    let a = random_shape(rng, 4, 4, classical);
    let b = random_shape(rng, 4, 4, classical);
    let pi = Morphism::summand_projection(&a, &b);
    let omega = random_state(rng, &a);
    let mut t = Trial::default();
    t.close("S_pi for the summand projection", entropy_change(&pi, &omega)?, tol);
    let pure = State::pure_in_block(&a, 0, &linalg::sample_pure_vector_with(a.dim(0), rng))?;
    t.require("zero extension of a pure state is pure", pi.pullback(&pure)?.is_pure(tol));
    Ok(t)
}

fn concavity(rng: &mut ChaCha8Rng, i: usize, tol: f64) -> Result<Trial> {
    let n = rng.random_range(2..=4);
    let k = rng.random_range(2..=n);
    let orthogonal = i.is_multiple_of(2);
    let (p, rhos): (Vec<f64>, Vec<ComplexMatrix>) = if orthogonal {
        let u = linalg::sample_unitary_with(n, rng);
        let mut cuts: Vec<usize> = (1..n).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(n);
        let rhos = cuts
            .windows(2)
            .map(|w| {
                let m = weighted_projection(rng, &u, w[0]..w[1]);
                let tr = linalg::trace(&m);
                m / tr
            })
            .collect();
        (linalg::sample_simplex_with(k, rng), rhos)
    } else {
        let p = linalg::sample_simplex_with(k, rng).into_iter().map(|v| 0.8 * v + 0.2 / k as f64).collect();
        (p, (0..k).map(|_| linalg::sample_density_with(n, rng)).collect())
    };
    let mut mix = ComplexMatrix::zeros(n, n);
    let mut avg = 0.0;
    for (&px, rho) in p.iter().zip(&rhos) {
        mix += rho * C64::new(px, 0.0);
        avg += px * crate::entropy::von_neumann(rho, 1e-9)?;
    }
    let middle = crate::entropy::von_neumann(&mix, 1e-9)?;
    let right = shannon(&p)? + avg;
    let mut t = Trial::default();
    t.nonnegative("S(sum p rho) - sum p S(rho)", middle - avg, tol);
    t.nonnegative("S(p) + sum p S(rho) - S(sum p rho)", right - middle, tol);
    if orthogonal {
        t.close("right-hand equality on orthogonal family", right - middle, CONCAVITY_EQ_TOL);
    } else {
        t.exceeds("right-hand gap on overlapping family", right - middle, CONCAVITY_GAP);
    }
    Ok(t)
}

fn holevo_nonneg(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let Instance { morphism: f, omega, .. } = generic(rng)?;
    let xi = random_state(rng, f.codomain());
    let lambda = random_lambda(rng);
    let mut t = Trial::default();
    t.nonnegative("chi_f", holevo_change(&f, lambda, &omega, &xi)?, tol);
    Ok(t)
}

const LAMBDAS: [f64; 3] = [0.1, 0.5, 0.9];

/// Orthogonal pair and a morphism, plus whether the morphism is known to preserve the orthogonality.
fn affinity_case(rng: &mut ChaCha8Rng, case: usize) -> Result<(Morphism, State, State, bool)> {
    Ok(match case {
        0 => {
            let shape = loop {
                let s = random_shape(rng, 4, 4, false);
                if s.total_dim() > 1 {
                    break s;
                }
            };
            let f = random_isomorphism_to(rng, &shape);
            let (w, x) = random_orthogonal_pair(rng, &shape);
            (f, w, x, true)
        }
        1 => {
            let f = generic(rng)?.morphism;
            let g = generic(rng)?.morphism;
            let w = random_state(rng, f.codomain()).zero_extend_left(g.codomain());
            let x = State::zero_extend_right(f.codomain(), &random_state(rng, g.codomain()));
            (Morphism::external_sum(&f, &g), w, x, true)
        }
        2 => {
            let m = rng.random_range(2..=4);
            let shape = AlgebraShape::matrix(m);
            let u = linalg::sample_unitary_with(m, rng);
            let eig: Vec<f64> = (0..m).map(|k| k as f64 + rng.random_range(0.1..0.9)).collect();
            let obs = &u * linalg::real_diag(&eig) * u.adjoint();
            let f = Morphism::measurement(&shape, 0, &obs, 1e-9)?;
            let r = rng.random_range(1..m);
            let (w, x) = (weighted_projection(rng, &u, 0..r), weighted_projection(rng, &u, r..m));
            (f, State::from_block_masses(shape.clone(), vec![w]), State::from_block_masses(shape, vec![x]), true)
        }
        3 => {
            let a = loop {
                let s = random_shape(rng, 3, 4, false);
                if s.total_dim() > 1 {
                    break s;
                }
            };
            let b = random_shape(rng, 3, 4, false);
            let (w, x) = random_orthogonal_pair(rng, &a);
            (Morphism::summand_projection(&a, &b), w, x, true)
        }
        4 => {
            let n = rng.random_range(2..=4);
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            (Morphism::initial(&AlgebraShape::classical(n)), State::dirac(n, i), State::dirac(n, j), false)
        }
        5 => {
            let local = linalg::tensor(&linalg::sample_unitary_with(2, rng), &linalg::sample_unitary_with(2, rng));
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let phi_plus = ComplexMatrix::from_column_slice(4, 1, &[C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)]);
            let phi_minus = ComplexMatrix::from_column_slice(4, 1, &[C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-s, 0.0)]);
            let shape = AlgebraShape::matrix(4);
            let w = State::pure_in_block(&shape, 0, &(&local * phi_plus))?;
            let x = State::pure_in_block(&shape, 0, &(&local * phi_minus))?;
            (Morphism::factor_inclusion_right(2, 2), w, x, false)
        }
        _ => {
            let m = rng.random_range(2..=4);
            let shape = AlgebraShape::matrix(m);
            let (w, x) = random_orthogonal_pair(rng, &shape);
            (Morphism::initial(&shape), w, x, false)
        }
    })
}

fn orthogonal_affinity(rng: &mut ChaCha8Rng, i: usize, tol: f64) -> Result<Trial> {
    let case = i % 7;
    let lambda = LAMBDAS[(i / 7) % 3];
    let (f, omega, xi, preserving) = affinity_case(rng, case)?;
    let mut t = Trial::default();
    t.require("constructed states are orthogonal", omega.is_orthogonal_to(&xi, tol)?);
    let detected = f.preserves_orthogonality(&omega, &xi, tol)?;
    t.require(&format!("construction {case}: preserves_orthogonality = {detected}, expected {preserving}"), detected == preserving);
    let chi = holevo_change(&f, lambda, &omega, &xi)?;
    if preserving {
        t.close(&format!("chi_f on preserving construction {case} at lambda {lambda}"), chi, AFFINE_TOL);
    } else {
        t.exceeds(&format!("|chi_f| on non-preserving construction {case} at lambda {lambda}"), chi.abs(), NON_AFFINE_GAP);
    }

    let (mu, zeta) = (rng.random_range(0.05..0.95), State::tracial(omega.shape()));
    let nested = State::convex_combine(lambda, &omega, &State::convex_combine(mu, &xi, &zeta)?)?;
    let s = lambda + (1.0 - lambda) * mu;
    let regrouped = State::convex_combine(s, &State::convex_combine(lambda / s, &omega, &xi)?, &zeta)?;
    t.close("mixing associativity", nested.max_abs_diff(&regrouped)?, 1e-12);
    Ok(t)
}

fn commutative_positivity(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let Instance { morphism: f, omega, .. } = generate_with(&InstanceFamily::classical(), rng)?;
    let mut t = Trial::default();
    t.nonnegative("S_f on commutative algebras", entropy_change(&f, &omega)?, tol);
    Ok(t)
}

fn support_image(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let f = generic(rng)?.morphism;
    let omega = random_low_rank_state(rng, f.codomain());
    let p = omega.support(tol).projection;
    let q = f.apply(&f.pullback(&omega)?.support(tol).projection)?;
    let mut t = Trial::default();
    // Q ≥ P for projections iff QP = P
    t.close("f(P_(w o f)) P_w - P_w", q.multiply(&p)?.max_abs_diff(&p)?, 1e-8);
    let one = crate::algebra::AlgebraElement::identity(f.codomain());
    let q_perp = one.sub(&q)?;
    t.close("f(P_(w o f)^perp) P_w", q_perp.multiply(&p)?.max_abs(), 1e-8);
    Ok(t)
}

fn overlap_persistence(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let f = generic(rng)?.morphism;
    let omega = random_low_rank_state(rng, f.codomain());
    let xi = random_low_rank_state(rng, f.codomain());
    let mut t = Trial::default();
    if omega.is_orthogonal_to(&xi, tol)? {
        return Ok(t);
    }
    let (pw, px) = (f.pullback(&omega)?, f.pullback(&xi)?);
    let overlap = pw.support(tol).projection.multiply(&px.support(tol).projection)?.max_abs();
    t.exceeds("overlap of the pulled-back supports", overlap, tol);
    Ok(t)
}

fn pure_vanishing(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let shape = random_shape(rng, 4, 4, false);
    let block = rng.random_range(0..shape.num_blocks());
    let pure = State::pure_in_block(&shape, block, &linalg::sample_pure_vector_with(shape.dim(block), rng))?;
    let mixed = random_state(rng, &shape);
    let mut t = Trial::default();
    t.close("S_A on a pure state", segal(&pure), tol);
    t.nonnegative("S_A on a random state", segal(&mixed), tol);
    Ok(t)
}

fn negative_existence(rng: &mut ChaCha8Rng, _: usize, _tol: f64) -> Result<Trial> {
    let shape = loop {
        let s = random_shape(rng, 4, 4, false);
        if !s.is_commutative() {
            break s;
        }
    };
    let block = (0..shape.num_blocks()).find(|&x| shape.dim(x) > 1).expect("noncommutative");
    let m = shape.dim(block);
    let v = linalg::sample_pure_vector_with(m, rng);
    let rho = &v * v.adjoint();
    let obs = loop {
        let a = linalg::sample_hermitian_with(m, rng);
        if linalg::max_abs(&(&a * &rho - &rho * &a)) > 1e-3 {
            break a;
        }
    };
    let f = Morphism::measurement(&shape, block, &obs, 1e-9)?;
    let omega = State::pure_in_block(&shape, block, &v)?;
    let mut t = Trial::default();
    t.require("measurement is not an isomorphism", !f.is_isomorphism());
    t.exceeds("-S_f for a measurement of a noncommuting pure state", -entropy_change(&f, &omega)?, NEGATIVE_MARGIN);
    Ok(t)
}

fn external_affinity(rng: &mut ChaCha8Rng, i: usize, tol: f64) -> Result<Trial> {
    let family = if i.is_multiple_of(2) { InstanceFamily::classical() } else { InstanceFamily::default() };
    let Instance { morphism: f, omega, .. } = generate_with(&family, rng)?;
    let Instance { morphism: g, omega: xi, .. } = generate_with(&family, rng)?;
    let lambda = random_lambda(rng);
    let sum = Morphism::external_sum(&f, &g);
    let state = State::external_sum(lambda, &omega, &xi)?;
    let mut t = Trial::default();
    let s = entropy_change(&sum, &state)? - lambda * entropy_change(&f, &omega)? - (1.0 - lambda) * entropy_change(&g, &xi)?;
    t.close("S external affinity", s, tol);
    let k = k_functor(&sum, &state)? - lambda * k_functor(&f, &omega)? - (1.0 - lambda) * k_functor(&g, &xi)?;
    t.close("K external affinity", k, K_AFFINE_TOL);
    Ok(t)
}

/// The `K` deviation from affinity (predicted to be `−h(λ)`) and `χ_S` for a
/// Z-measurement in the basis given by the columns of `u`, mixing its two eigenstates.
pub fn k_counterexample_instance(u: &ComplexMatrix, lambda: f64) -> Result<(f64, f64)> {
    let shape = AlgebraShape::matrix(2);
    let obs = u * linalg::real_diag(&[1.0, -1.0]) * u.adjoint();
    let f = Morphism::measurement(&shape, 0, &obs, 1e-9)?;
    let omega = State::pure_in_block(&shape, 0, &u.columns(0, 1).into_owned())?;
    let xi = State::pure_in_block(&shape, 0, &u.columns(1, 1).into_owned())?;
    let mix = State::convex_combine(lambda, &omega, &xi)?;
    let k_dev = k_functor(&f, &mix)? - lambda * k_functor(&f, &omega)? - (1.0 - lambda) * k_functor(&f, &xi)?;
    let chi = holevo_change(&f, lambda, &omega, &xi)?;
    Ok((k_dev, chi))
}

fn k_counterexample(rng: &mut ChaCha8Rng, i: usize, tol: f64) -> Result<Trial> {
    let u = linalg::sample_unitary_with(2, rng);
    let lambda = if i.is_multiple_of(2) { 0.5 } else { rng.random_range(0.05..0.95) };
    let (k_dev, chi) = k_counterexample_instance(&u, lambda)?;
    let h = shannon(&[lambda, 1.0 - lambda])?;
    let mut t = Trial::default();
    t.close("K deviation + h(lambda)", k_dev + h, tol);
    t.exceeds("|K deviation|", k_dev.abs(), NON_AFFINE_GAP);
    t.close("chi_S on the same instance", chi, tol);
    Ok(t)
}

/// `ω + εH` for a traceless block-diagonal Hermitian direction `H` with
/// `‖H‖_op = 1`, projected back onto the states by clipping negative eigenvalues.
fn perturb(omega: &State, direction: &[ComplexMatrix], eps: f64) -> Result<State> {
    let masses = omega
        .block_masses()
        .iter()
        .zip(direction)
        .map(|(m, h)| {
            let e = linalg::eigh(&(m + h * C64::new(eps, 0.0)), f64::INFINITY)?;
            Ok(e.map(|l| l.max(0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(State::from_block_masses(omega.shape().clone(), masses))
}

fn continuity(rng: &mut ChaCha8Rng, _: usize, _tol: f64) -> Result<Trial> {
    let f = generic(rng)?.morphism;
    let omega = random_faithful_state(rng, f.codomain());
    let shape = f.codomain();
    let mut h: Vec<ComplexMatrix> = shape.blocks().iter().map(|&m| linalg::sample_hermitian_with(m, rng)).collect();
    let trace: f64 = h.iter().map(|b| linalg::trace(b).re).sum();
    let shift = C64::new(trace / shape.total_dim() as f64, 0.0);
    for b in h.iter_mut() {
        let n = b.nrows();
        *b -= linalg::identity(n) * shift;
    }
    let norm = h.iter().map(linalg::operator_norm).fold(0.0, f64::max);
    h.iter_mut().for_each(|b| *b /= C64::new(norm, 0.0));

    let base = entropy_change(&f, &omega)?;
    let gaps = [1e2, 1e3, 1e4, 1e5]
        .iter()
        .map(|&n| Ok((entropy_change(&f, &perturb(&omega, &h, 1.0 / n)?)? - base).abs()))
        .collect::<Result<Vec<f64>>>()?;
    // The pointwise gap of a smooth function can dip through zero at coarse
    // steps, so the schedule is judged by its tail supremum sup_{m >= n} gap_m.
    let tail: Vec<f64> = (0..3).map(|k| gaps[k..].iter().cloned().fold(0.0, f64::max)).collect();
    let mut t = Trial::default();
    t.require(&format!("tail sup of |S_f(w_n) - S_f(w)| does not shrink: {gaps:?}"), tail[2] < tail[0] || tail[0] <= 1e-12);
    t.close("sup_(n >= 1e4) |S_f(w_n) - S_f(w)|", tail[2], CONTINUITY_TOL);
    Ok(t)
}

/// `p_x ρ_x = U_x (⊞_y τ_{yx} ⊗ q_y σ_y) U_x†` for random `τ`, `q`, `σ`.
fn constructed_factorization<R: Rng + ?Sized>(rng: &mut R, f: &Morphism) -> (State, Vec<Vec<Option<ComplexMatrix>>>) {
    let (nx, ny) = (f.codomain().num_blocks(), f.domain().num_blocks());
    let used: Vec<usize> = (0..ny).filter(|&y| (0..nx).any(|x| f.multiplicity(x, y) > 0)).collect();
    let mut q = vec![0.0; ny];
    for (&y, w) in used.iter().zip(linalg::sample_simplex_with(used.len(), rng)) {
        q[y] = w;
    }
    let sigma: Vec<ComplexMatrix> = f.domain().blocks().iter().map(|&n| linalg::sample_density_with(n, rng)).collect();
    let mut tau: Vec<Vec<Option<ComplexMatrix>>> = vec![vec![None; nx]; ny];
    for y in 0..ny {
        let mut total = 0.0;
        for (x, slot) in tau[y].iter_mut().enumerate() {
            let c = f.multiplicity(x, y);
            if c > 0 {
                let g = linalg::sample_complex_gaussian(c, c, rng);
                let t = &g * g.adjoint();
                total += linalg::trace(&t).re;
                *slot = Some(t);
            }
        }
        for t in tau[y].iter_mut().flatten() {
            *t /= C64::new(total, 0.0);
        }
    }
    let masses = (0..nx)
        .map(|x| {
            let m = f.codomain().dim(x);
            let mut inner = ComplexMatrix::zeros(m, m);
            let layout = f.layout(x);
            for y in 0..ny {
                let Some(t) = &tau[y][x] else { continue };
                let q_sigma = &sigma[y] * C64::new(q[y], 0.0);
                let segs: Vec<_> = layout.iter().filter(|s| s.y == y).collect();
                for (i, a) in segs.iter().enumerate() {
                    for (j, b) in segs.iter().enumerate() {
                        inner.view_mut((a.offset, b.offset), (a.size, b.size)).copy_from(&(&q_sigma * t[(i, j)]));
                    }
                }
            }
            let u = &f.unitaries()[x];
            u * inner * u.adjoint()
        })
        .collect();
    (State::from_block_masses(f.codomain().clone(), masses), tau)
}

/// The displayed entropy change for `diag(p)` through `B ↦ 1_2 ⊗ B`.
pub fn quartic_formula(p: [f64; 4]) -> f64 {
    let term = |a: f64, b: f64| if a > 0.0 { -a * (a / (a + b)).ln() } else { 0.0 };
    term(p[0], p[2]) + term(p[1], p[3]) + term(p[2], p[0]) + term(p[3], p[1])
}

fn check_existing(t: &mut Trial, f: &Morphism, omega: &State, out: &QuantumDisintegration, tol: f64) -> Result<()> {
    if let Some(data) = out.data() {
        let s_f = entropy_change(f, omega)?;
        let h = disintegration_entropy(f, omega, data, DISINTEGRATION_TOL)?;
        t.close("disintegration entropy - S_f", h - s_f, DISINTEGRATION_MATCH_TOL);
        t.nonnegative("S_f when a disintegration exists", s_f, tol);
    }
    Ok(())
}

fn disintegration(rng: &mut ChaCha8Rng, i: usize, tol: f64) -> Result<Trial> {
    let mut t = Trial::default();
    match i % 4 {
        0 => {
            let Instance { morphism: f, omega, .. } = generate_with(&InstanceFamily::classical(), rng)?;
            let phi: Vec<usize> = f.multiplicities().iter().map(|r| r.iter().position(|&c| c == 1).expect("function")).collect();
            let psi = classical_disintegrate(&phi, f.domain().num_blocks(), omega.weights())?;
            let out = quantum_disintegrate(&f, &omega, DISINTEGRATION_TOL)?;
            t.require("classical instance has a disintegration", out.exists());
            if let Some(data) = out.data() {
                for (y, row) in data.tau.iter().enumerate() {
                    if data.q[y] <= 0.0 {
                        continue;
                    }
                    for (x, tau) in row.iter().enumerate() {
                        let v = tau.as_ref().map_or(0.0, |m| m[(0, 0)].re);
                        t.close("tau vs classical psi", v - psi.row(y)[x], 1e-10);
                    }
                }
            }
            let q = f.pullback(&omega)?;
            let back = psi.push(q.weights());
            let worst = back.iter().zip(omega.weights()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            t.close("psi o q - p", worst, 1e-12);
            check_existing(&mut t, &f, &omega, &out, tol)?;
        }
        1 => {
            let f = generic(rng)?.morphism;
            let (omega, tau) = constructed_factorization(rng, &f);
            let out = quantum_disintegrate(&f, &omega, DISINTEGRATION_TOL)?;
            t.require("constructed factorization is detected", out.exists());
            if let Some(data) = out.data() {
                for (row, expected) in data.tau.iter().zip(&tau) {
                    for (got, want) in row.iter().zip(expected) {
                        if let (Some(g), Some(w)) = (got, want) {
                            t.close("recovered tau", linalg::max_abs_diff(g, w), 1e-8);
                        }
                    }
                }
            }
            check_existing(&mut t, &f, &omega, &out, tol)?;
        }
        2 => {
            let f = Morphism::factor_inclusion(2, 2);
            let a = linalg::sample_simplex_with(2, rng);
            let b = linalg::sample_simplex_with(2, rng);
            let product = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
            let omega = State::from_density(linalg::real_diag(&product))?;
            let out = quantum_disintegrate(&f, &omega, DISINTEGRATION_TOL)?;
            t.require("p1 p4 = p2 p3 admits a disintegration", out.exists());
            check_existing(&mut t, &f, &omega, &out, tol)?;

            let p = loop {
                let p = linalg::sample_simplex_with(4, rng);
                if (p[0] * p[3] - p[1] * p[2]).abs() > 1e-3 {
                    break [p[0], p[1], p[2], p[3]];
                }
            };
            let omega = State::from_density(linalg::real_diag(&p))?;
            let out = quantum_disintegrate(&f, &omega, DISINTEGRATION_TOL)?;
            t.require("p1 p4 != p2 p3 admits no disintegration", !out.exists());
            let s_f = entropy_change(&f, &omega)?;
            t.close("S_f vs the quartic formula", s_f - quartic_formula(p), tol);
            t.nonnegative("S_f without a disintegration", s_f, tol);
        }
        _ => {
            let Instance { morphism: f, omega, .. } = generic(rng)?;
            let out = quantum_disintegrate(&f, &omega, DISINTEGRATION_TOL)?;
            check_existing(&mut t, &f, &omega, &out, tol)?;
        }
    }
    Ok(t)
}

fn characterization_fit(rng: &mut ChaCha8Rng, _: usize, tol: f64) -> Result<Trial> {
    let Instance { morphism: f, omega, .. } = generic(rng)?;
    let h = entropy_change;
    let mut t = Trial::default();
    t.samples.push((h(&f, &omega)?, entropy_change(&f, &omega)?));

    // S is determined by its values on spectral resolutions
    let r = Morphism::spectral_resolution(&omega, 1e-9)?;
    t.close("H along the spectral resolution", h(&r, &omega)?, tol);
    let classical = r.pullback(&omega)?;
    t.close("H_A(w) - H_B(w o r)", segal(&omega) - segal(&classical), tol);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert_eq!("all".parse::<SuiteSelection>().unwrap(), SuiteSelection::All);
        assert!(matches!("nope".parse::<SuiteName>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn generation_is_deterministic() {
        let fam = InstanceFamily::default().with_orthogonal_pair();
        let a = generate_instance(&fam, Seed::new(5)).unwrap();
        let b = generate_instance(&fam, Seed::new(5)).unwrap();
        assert_eq!(a, b);
        assert!(a.omega.is_orthogonal_to(a.xi.as_ref().unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn classical_family_yields_functions() {
        for s in 0..20 {
            let inst = generate_instance(&InstanceFamily::classical(), Seed::new(s)).unwrap();
            assert!(inst.morphism.domain().is_commutative() && inst.morphism.codomain().is_commutative());
            assert!(inst.morphism.multiplicities().iter().all(|r| r.iter().sum::<usize>() == 1));
        }
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        for n in SuiteName::ALL {
            let r = run_suite(n, 28, Seed::new(3), 1e-9);
            assert!(r.pass, "{n}: {:?}", r.failures);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = run_suite(SuiteName::Disintegration, 16, Seed::new(11), 1e-9);
        let b = run_suite(SuiteName::Disintegration, 16, Seed::new(11), 1e-9);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn quartic_formula_matches_known_value() {
        let shannon_gap = shannon(&[0.5, 0.25, 0.125, 0.125]).unwrap() - shannon(&[0.625, 0.375]).unwrap();
        assert!((quartic_formula([0.5, 0.25, 0.125, 0.125]) - shannon_gap).abs() < 1e-15);
        assert!((quartic_formula([0.5, 0.25, 0.125, 0.125]) - 0.551_444_327_8).abs() < 1e-10);
    }
}
