use thiserror::Error;

/// Errors raised by the numerical core, the harness, and the JSON layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {defect:.3e} exceeds tolerance {tol:.1e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e} < -{tol:.1e}")]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("not a probability vector (simplex invariant): {0}")]
    NotProbabilityVector(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid algebra shape: {0}")]
    InvalidShape(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("input states are not mutually orthogonal")]
    NotOrthogonalInput,

    #[error("observable has a single distinct eigenvalue; the measurement domain collapses to C")]
    DegenerateSpectrum,

    #[error("disintegration data is inconsistent with (f, omega): {0}")]
    InconsistentData(String),

    #[error("no multiplicity solution found after {attempts} attempts")]
    InfeasibleShapes { attempts: usize },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
