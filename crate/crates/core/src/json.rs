//! JSON wire formats.
//!
//! Complex numbers are `[re, im]`, matrices are row-major nested arrays.
//!
//! ```json
//! {"shape": [1, 2], "weights": [0.5, 0.5], "densities": [[[[1, 0]]], [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}
//! {"domain": [2], "codomain": [4], "multiplicities": [[2]], "unitaries": null}
//! ```

use crate::algebra::{AlgebraElement, AlgebraShape};
use crate::disintegration::{QuantumDisintegration, StochasticMap, Violation};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::morphism::Morphism;
use crate::state::State;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub type ComplexJson = [f64; 2];
pub type MatrixJson = Vec<Vec<ComplexJson>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson, what: &str) -> Result<ComplexMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::Parse(format!("{what}: row {i} has {} entries, row 0 has {cols}", rows[i].len())));
    }
    let mut m = ComplexMatrix::zeros(n, cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, z) in r.iter().enumerate() {
            m[(i, j)] = C64::new(z[0], z[1]);
        }
    }
    Ok(m)
}

fn shape_from_json(blocks: &[usize], what: &str) -> Result<AlgebraShape> {
    AlgebraShape::new(blocks.to_vec()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub shape: Vec<usize>,
    pub blocks: Vec<MatrixJson>,
}

impl From<&AlgebraElement> for ElementJson {
    fn from(a: &AlgebraElement) -> Self {
        ElementJson { shape: a.shape().blocks().to_vec(), blocks: a.blocks().iter().map(matrix_to_json).collect() }
    }
}

impl ElementJson {
    pub fn to_element(&self) -> Result<AlgebraElement> {
        let shape = shape_from_json(&self.shape, "shape")?;
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(x, b)| matrix_from_json(b, &format!("blocks[{x}]")))
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::new(shape, blocks)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub shape: Vec<usize>,
    pub weights: Vec<f64>,
    pub densities: Vec<MatrixJson>,
}

impl From<&State> for StateJson {
    fn from(s: &State) -> Self {
        StateJson {
            shape: s.shape().blocks().to_vec(),
            weights: s.weights().to_vec(),
            densities: s.densities().iter().map(matrix_to_json).collect(),
        }
    }
}

impl StateJson {
    pub fn to_state(&self) -> Result<State> {
        let shape = shape_from_json(&self.shape, "shape")?;
        let densities = self
            .densities
            .iter()
            .enumerate()
            .map(|(x, d)| matrix_from_json(d, &format!("densities[{x}]")))
            .collect::<Result<Vec<_>>>()?;
        State::new(shape, self.weights.clone(), densities)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub domain: Vec<usize>,
    pub codomain: Vec<usize>,
    pub multiplicities: Vec<Vec<usize>>,
    #[serde(default)]
    pub unitaries: Option<Vec<MatrixJson>>,
}

impl From<&Morphism> for MorphismJson {
    fn from(f: &Morphism) -> Self {
        MorphismJson {
            domain: f.domain().blocks().to_vec(),
            codomain: f.codomain().blocks().to_vec(),
            multiplicities: f.multiplicities().to_vec(),
            unitaries: Some(f.unitaries().iter().map(matrix_to_json).collect()),
        }
    }
}

impl MorphismJson {
    pub fn to_morphism(&self) -> Result<Morphism> {
        let domain = shape_from_json(&self.domain, "domain")?;
        let codomain = shape_from_json(&self.codomain, "codomain")?;
        let unitaries = self
            .unitaries
            .as_ref()
            .map(|us| {
                us.iter()
                    .enumerate()
                    .map(|(x, u)| matrix_from_json(u, &format!("unitaries[{x}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Morphism::new(domain, codomain, self.multiplicities.clone(), unitaries)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauEntryJson {
    pub y: usize,
    pub x: usize,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauJson {
    pub q: Vec<f64>,
    pub sigma: Vec<MatrixJson>,
    pub entries: Vec<TauEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisintegrationJson {
    pub exists: bool,
    pub tau: Option<TauJson>,
    /// Present for classical disintegrations: row `y` is `ψ_y`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Vec<f64>>>,
    pub violations: Vec<Violation>,
    pub entropy_production: Option<f64>,
}

impl DisintegrationJson {
    pub fn quantum(out: &QuantumDisintegration, entropy_production: Option<f64>) -> Self {
        let tau = out.data().map(|d| TauJson {
            q: d.q.clone(),
            sigma: d.sigma.iter().map(matrix_to_json).collect(),
            entries: d
                .tau
                .iter()
                .enumerate()
                .flat_map(|(y, row)| {
                    row.iter()
                        .enumerate()
                        .filter_map(move |(x, t)| t.as_ref().map(|t| TauEntryJson { y, x, matrix: matrix_to_json(t) }))
                })
                .collect(),
        });
        DisintegrationJson { exists: out.exists(), tau, psi: None, violations: out.violations().to_vec(), entropy_production }
    }

    pub fn classical(psi: &StochasticMap, entropy_production: f64) -> Self {
        DisintegrationJson {
            exists: true,
            tau: None,
            psi: Some(psi.rows().to_vec()),
            violations: Vec::new(),
            entropy_production: Some(entropy_production),
        }
    }
}

/// A named worked instance: a morphism together with a state on its codomain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleJson {
    pub name: String,
    pub description: String,
    pub morphism: MorphismJson,
    pub state: StateJson,
}

/// Parses JSON, reporting line, column and the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn state_from_str(text: &str) -> Result<State> {
    parse::<StateJson>(text, "state")?.to_state()
}

pub fn morphism_from_str(text: &str) -> Result<Morphism> {
    parse::<MorphismJson>(text, "morphism")?.to_morphism()
}

pub fn to_string_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}
