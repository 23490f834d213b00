//! The JSON scenario format.
//!
//! Complex numbers are `[re, im]` pairs. Observables are given either as a
//! full matrix or as a projector onto a named post state (or an explicit
//! amplitude list). Checks are a bare kind name or an object with optional
//! `observables` and `states`.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "dimension": 2,
//!   "labels": ["0", "1"],
//!   "pre_state": [[0.6, 0], [0.8, 0]],
//!   "post_states": {"0": [[1, 0], [0, 0]], "1": [[0, 0], [1, 0]]},
//!   "observables": {"sigma_z": {"matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]}},
//!   "checks": ["born", {"kind": "consistency2", "observables": ["sigma_z"]}]
//! }
//! ```

use indexmap::IndexMap;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WeakError};
use crate::hilbert::{projector_onto, Labels, Observable, StateVector};
use crate::scenarios::{Scenario, DEFAULT_TOLERANCE};
use crate::suite::{CheckKind, CheckSpec};
use crate::MAX_DIMENSION;

pub const SCHEMA_VERSION: &str = "1";

pub type Amplitudes = Vec<[f64; 2]>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub schema_version: String,
    pub dimension: usize,
    pub labels: Vec<String>,
    pub pre_state: Amplitudes,
    #[serde(default)]
    pub post_states: IndexMap<String, Amplitudes>,
    #[serde(default)]
    pub observables: IndexMap<String, ObservableSpec>,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap_floor: Option<f64>,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Matrix { matrix: Vec<Amplitudes> },
    Projector { projector_onto: StateRef },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateRef {
    Name(String),
    Amplitudes(Amplitudes),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckEntry {
    Kind(CheckKind),
    Spec(CheckSpec),
}

impl CheckEntry {
    pub fn spec(&self) -> CheckSpec {
        match self {
            CheckEntry::Kind(k) => CheckSpec::new(*k),
            CheckEntry::Spec(s) => s.clone(),
        }
    }
}

fn schema(path: impl Into<String>, message: impl ToString) -> WeakError {
    WeakError::Schema {
        path: path.into(),
        message: message.to_string(),
    }
}

fn at(path: impl Into<String>) -> impl FnOnce(WeakError) -> WeakError {
    let path = path.into();
    move |e| match e {
        WeakError::Schema { .. } => e,
        other => schema(path, other),
    }
}

fn complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn pairs(values: impl IntoIterator<Item = Complex64>) -> Amplitudes {
    values.into_iter().map(|z| [z.re, z.im]).collect()
}

fn state(labels: &Labels, amplitudes: &[[f64; 2]], path: &str) -> Result<StateVector> {
    if amplitudes.len() != labels.len() {
        return Err(schema(
            path,
            format!("expected {} amplitudes, found {}", labels.len(), amplitudes.len()),
        ));
    }
    StateVector::new(labels.clone(), complex(amplitudes)).map_err(at(path))
}

impl ScenarioDocument {
    /// Parses and validates a document. Structural errors carry the JSON
    /// path of the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "document".to_string() } else { path };
            schema(path, e.into_inner())
        })?;
        doc.to_scenario()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Builds the scenario, normalizing every state.
    pub fn to_scenario(&self) -> Result<Scenario> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!("unsupported version {:?}, expected {SCHEMA_VERSION:?}", self.schema_version),
            ));
        }
        if self.dimension == 0 || self.dimension > MAX_DIMENSION {
            return Err(schema("dimension", format!("must be in 1..={MAX_DIMENSION}")));
        }
        if self.labels.len() != self.dimension {
            return Err(schema(
                "labels",
                format!("expected {} labels, found {}", self.dimension, self.labels.len()),
            ));
        }
        let labels = Labels::new(self.labels.iter().cloned()).map_err(at("labels"))?;
        let pre = state(&labels, &self.pre_state, "pre_state")?;

        let mut scenario = Scenario::new(pre);
        for (name, amplitudes) in &self.post_states {
            let s = state(&labels, amplitudes, &format!("post_states.{name}"))?;
            scenario = scenario.with_post(name.clone(), s)?;
        }
        for (name, spec) in &self.observables {
            let observable = match spec {
                ObservableSpec::Matrix { matrix } => {
                    let path = format!("observables.{name}.matrix");
                    let n = labels.len();
                    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                        return Err(schema(path, format!("expected a {n}x{n} matrix")));
                    }
                    let entries: Vec<Complex64> = matrix.iter().flat_map(|row| complex(row)).collect();
                    let m = Array2::from_shape_vec((n, n), entries).expect("shape checked");
                    Observable::new(name.clone(), labels.clone(), m).map_err(at(path))?
                }
                ObservableSpec::Projector { projector_onto: target } => {
                    let path = format!("observables.{name}.projector_onto");
                    let s = match target {
                        StateRef::Name(state_name) => scenario.resolve_state(state_name).map_err(at(path))?,
                        StateRef::Amplitudes(a) => state(&labels, a, &path)?,
                    };
                    projector_onto(&s).renamed(name.clone())
                }
            };
            scenario = scenario.with_observable(observable)?;
        }
        for (i, entry) in self.checks.iter().enumerate() {
            let spec = entry.spec();
            for (j, o) in spec.observables.iter().enumerate() {
                scenario.observable(o).map_err(at(format!("checks[{i}].observables[{j}]")))?;
            }
            for (j, s) in spec.states.iter().enumerate() {
                scenario.resolve_state(s).map_err(at(format!("checks[{i}].states[{j}]")))?;
            }
            if spec.kind == CheckKind::Equivalence && spec.observables.len() != 2 {
                return Err(schema(
                    format!("checks[{i}].observables"),
                    "equivalence needs exactly two observables",
                ));
            }
            scenario = scenario.with_check(spec);
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(schema("tolerance", "must be a positive finite number"));
        }
        scenario.tolerance = self.tolerance;
        if let Some(floor) = self.overlap_floor {
            if !(floor.is_finite() && floor >= 0.0) {
                return Err(schema("overlap_floor", "must be a non-negative finite number"));
            }
            scenario.overlap_floor = floor;
        }
        Ok(scenario)
    }

    /// Serializes a scenario. Observables are written as full matrices.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            dimension: scenario.dimension(),
            labels: scenario.labels.as_slice().to_vec(),
            pre_state: pairs(scenario.pre_state.amplitudes().iter().copied()),
            post_states: scenario
                .post_states
                .iter()
                .map(|(k, s)| (k.clone(), pairs(s.amplitudes().iter().copied())))
                .collect(),
            observables: scenario
                .observables
                .iter()
                .map(|(k, o)| {
                    let matrix = o.matrix().rows().into_iter().map(|r| pairs(r.iter().copied())).collect();
                    (k.clone(), ObservableSpec::Matrix { matrix })
                })
                .collect(),
            checks: scenario
                .checks
                .iter()
                .map(|c| {
                    if c.observables.is_empty() && c.states.is_empty() {
                        CheckEntry::Kind(c.kind)
                    } else {
                        CheckEntry::Spec(c.clone())
                    }
                })
                .collect(),
            tolerance: scenario.tolerance,
            overlap_floor: (scenario.overlap_floor != crate::DEFAULT_OVERLAP_FLOOR).then_some(scenario.overlap_floor),
        }
    }
}
