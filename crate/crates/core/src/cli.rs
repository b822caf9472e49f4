//! The `nce` command line: JSON files in, numbers or JSON out.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 bad input or usage.

use crate::disintegration::{classical_disintegrate, disintegration_entropy, quantum_disintegrate, DISINTEGRATION_TOL};
use crate::entropy::{entropy_change, holevo_change, segal, Units};
use crate::error::{Error, Result};
use crate::harness::{run_selection, SuiteSelection};
use crate::json::{self, BundleJson, DisintegrationJson, ElementJson, MorphismJson, StateJson};
use crate::linalg::{real_diag, ComplexMatrix, Seed, C64};
use crate::morphism::Morphism;
use crate::state::State;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "nce", version, about = "Entropy, pullbacks and disintegrations on finite-dimensional C*-algebras")]
pub struct Cli {
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segal entropy of a state.
    Entropy { state: PathBuf },
    /// The pulled-back state ω∘f, as JSON.
    Pullback { morphism: PathBuf, state: PathBuf },
    /// Entropy change S_f(ω) = S(ω) − S(ω∘f).
    Change { morphism: PathBuf, state: PathBuf },
    /// Holevo information change χ_f(λ; ω, ξ).
    Holevo {
        morphism: PathBuf,
        state_a: PathBuf,
        state_b: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
    /// Support projection of a state, as JSON.
    Support {
        state: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Whether two states have orthogonal supports.
    Orthogonal {
        state_a: PathBuf,
        state_b: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Decide whether (f, ω, ω∘f) has a disintegration.
    Disintegrate {
        morphism: PathBuf,
        state: PathBuf,
        /// Treat f as a function between finite sets and build the classical disintegration.
        #[arg(long)]
        classical: bool,
        /// Relative tolerance of the factorization test.
        #[arg(long, default_value_t = DISINTEGRATION_TOL)]
        tol: f64,
    },
    /// Emit a worked instance; with --out, also write morphism.json and state.json.
    Example {
        name: ExampleName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites and print the report.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, env = "NCE_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    /// Bell state through the inclusion M_2 → M_2 ⊗ M_2.
    Bell,
    /// |+⟩ measured in the Z basis.
    PlusMeasurement,
    /// diag(1/2, 1/4, 1/8, 1/8) through B ↦ 1_2 ⊗ B.
    RemarkQuartic,
}

/// The worked instances behind `nce example`.
pub fn example(name: ExampleName) -> (Morphism, State, &'static str) {
    let c = |x: f64| C64::new(x, 0.0);
    match name {
        ExampleName::Bell => {
            let mut rho = ComplexMatrix::zeros(4, 4);
            for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
                rho[(i, j)] = c(0.5);
            }
            let omega = State::from_density(rho).expect("Bell density");
            (Morphism::factor_inclusion(2, 2), omega, "Bell state on M_4 through the inclusion of a tensor factor; S_f = -log 2")
        }
        ExampleName::PlusMeasurement => {
            let z = Morphism::measurement(&crate::algebra::AlgebraShape::matrix(2), 0, &real_diag(&[1.0, -1.0]), 1e-10)
                .expect("distinct eigenvalues");
            let omega = State::from_density(ComplexMatrix::from_element(2, 2, c(0.5))).expect("|+><+|");
            (z, omega, "pure |+> state measured in the Z basis; S_f = -log 2 without entanglement")
        }
        ExampleName::RemarkQuartic => {
            let omega = State::from_density(real_diag(&[0.5, 0.25, 0.125, 0.125])).expect("diagonal density");
            (
                Morphism::factor_inclusion(2, 2),
                omega,
                "diag(1/2, 1/4, 1/8, 1/8) through B -> 1_2 (x) B; S_f > 0 but no disintegration since p1 p4 != p2 p3",
            )
        }
    }
}

/// Formats a scalar with 12 significant digits.
pub fn format_scalar(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<State> {
    json::state_from_str(&read(path)?).map_err(|e| with_path(e, path))
}

fn load_morphism(path: &Path) -> Result<Morphism> {
    json::morphism_from_str(&read(path)?).map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    writeln!(out, "{}", json::to_string_pretty(value)).map_err(|e| Error::Parse(format!("stdout: {e}")))
}

fn write_line(out: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::Parse(format!("stdout: {e}")))
}

#[derive(Serialize)]
struct SupportJson {
    rank: usize,
    ranks: Vec<usize>,
    projection: ElementJson,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let units = if cli.bits { Units::Bits } else { Units::Nats };
    let scalar = |out: &mut dyn Write, nats: f64| write_line(out, &format_scalar(units.convert(nats)));
    match cli.command {
        Command::Entropy { state } => scalar(out, segal(&load_state(&state)?))?,
        Command::Pullback { morphism, state } => {
            let pulled = load_morphism(&morphism)?.pullback(&load_state(&state)?)?;
            write_json(out, &StateJson::from(&pulled))?;
        }
        Command::Change { morphism, state } => {
            scalar(out, entropy_change(&load_morphism(&morphism)?, &load_state(&state)?)?)?;
        }
        Command::Holevo { morphism, state_a, state_b, lambda } => {
            let f = load_morphism(&morphism)?;
            scalar(out, holevo_change(&f, lambda, &load_state(&state_a)?, &load_state(&state_b)?)?)?;
        }
        Command::Support { state, tol } => {
            let s = load_state(&state)?.support(tol);
            write_json(out, &SupportJson { rank: s.rank(), ranks: s.ranks.clone(), projection: ElementJson::from(&s.projection) })?;
        }
        Command::Orthogonal { state_a, state_b, tol } => {
            let orthogonal = load_state(&state_a)?.is_orthogonal_to(&load_state(&state_b)?, tol)?;
            write_line(out, &orthogonal.to_string())?;
        }
        Command::Disintegrate { morphism, state, classical, tol } => {
            let f = load_morphism(&morphism)?;
            let omega = load_state(&state)?;
            let report = if classical {
                if !f.domain().is_commutative() || !f.codomain().is_commutative() {
                    return Err(Error::ShapeMismatch("--classical needs commutative domain and codomain".into()));
                }
                let phi: Vec<usize> = f
                    .multiplicities()
                    .iter()
                    .map(|r| r.iter().position(|&c| c == 1).expect("each point maps somewhere"))
                    .collect();
                let psi = classical_disintegrate(&phi, f.domain().num_blocks(), omega.weights())?;
                DisintegrationJson::classical(&psi, units.convert(entropy_change(&f, &omega)?))
            } else {
                let outcome = quantum_disintegrate(&f, &omega, tol)?;
                let production = outcome
                    .data()
                    .map(|d| disintegration_entropy(&f, &omega, d, tol.max(1e-9)))
                    .transpose()?
                    .map(|h| units.convert(h));
                DisintegrationJson::quantum(&outcome, production)
            };
            write_json(out, &report)?;
        }
        Command::Example { name, out: dir } => {
            let (f, omega, description) = example(name);
            let bundle = BundleJson {
                name: name.to_possible_value().expect("named").get_name().to_string(),
                description: description.to_string(),
                morphism: MorphismJson::from(&f),
                state: StateJson::from(&omega),
            };
            if let Some(dir) = dir {
                std::fs::create_dir_all(&dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                for (file, text) in [
                    ("morphism.json", json::to_string_pretty(&bundle.morphism)),
                    ("state.json", json::to_string_pretty(&bundle.state)),
                ] {
                    let path = dir.join(file);
                    std::fs::write(&path, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                }
            }
            write_json(out, &bundle)?;
        }
        Command::Verify { suite, trials, seed, tol } => {
            let selection: SuiteSelection = suite.parse()?;
            let mut report = run_selection(selection, trials, Seed::new(seed), tol);
            report.suites = report.suites.into_iter().map(|s| s.in_units(units)).collect();
            match selection {
                SuiteSelection::One(_) => write_json(out, &report.suites[0])?,
                SuiteSelection::All => write_json(out, &report)?,
            }
            return Ok(if report.pass { 0 } else { 1 });
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_formatting() {
        assert_eq!(format_scalar(-std::f64::consts::LN_2), "-0.693147180560");
        assert_eq!(format_scalar(1.0), "1.00000000000");
        assert_eq!(format_scalar(0.0), "0");
        assert_eq!(format_scalar(-0.0), "0");
        assert_eq!(format_scalar(1.5e-7), "1.50000000000e-7");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["nce", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(run(["nce", "verify", "--suite", "nope"], &mut out, &mut err), 2);
        assert_eq!(run(["nce", "--help"], &mut out, &mut err), 0);
    }
}
