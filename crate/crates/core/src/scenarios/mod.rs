//! Built-in scenarios and the generic scenario container.

pub mod hardy;
pub mod spin;

use indexmap::IndexMap;

use crate::error::{Result, WeakError};
use crate::hilbert::{Labels, Observable, StateVector};
use crate::suite::CheckSpec;
use crate::weak::{PostState, DEFAULT_OVERLAP_FLOOR};

/// Default residual tolerance for scenario checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// A pre-selection with named post-selections and observables over one space.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub labels: Labels,
    pub pre_state: StateVector,
    pub post_states: IndexMap<String, StateVector>,
    pub observables: IndexMap<String, Observable>,
    pub checks: Vec<CheckSpec>,
    pub tolerance: f64,
    pub overlap_floor: f64,
}

impl Scenario {
    pub fn new(pre_state: StateVector) -> Self {
        Self {
            labels: pre_state.labels().clone(),
            pre_state,
            post_states: IndexMap::new(),
            observables: IndexMap::new(),
            checks: Vec::new(),
            tolerance: DEFAULT_TOLERANCE,
            overlap_floor: DEFAULT_OVERLAP_FLOOR,
        }
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn with_post(mut self, name: impl Into<String>, state: StateVector) -> Result<Self> {
        self.labels.ensure_same(state.labels())?;
        self.post_states.insert(name.into(), state);
        Ok(self)
    }

    /// Registers `observable` under its own name.
    pub fn with_observable(mut self, observable: Observable) -> Result<Self> {
        self.labels.ensure_same(observable.labels())?;
        self.observables.insert(observable.name().to_string(), observable);
        Ok(self)
    }

    pub fn with_check(mut self, check: CheckSpec) -> Self {
        self.checks.push(check);
        self
    }

    pub fn observable(&self, name: &str) -> Result<&Observable> {
        self.observables.get(name).ok_or_else(|| WeakError::Unknown {
            kind: "observable",
            name: name.to_string(),
        })
    }

    pub fn post(&self, name: &str) -> Result<&StateVector> {
        self.post_states.get(name).ok_or_else(|| WeakError::Unknown {
            kind: "post state",
            name: name.to_string(),
        })
    }

    /// A named post state, or else the basis state carrying that label.
    pub fn resolve_state(&self, name: &str) -> Result<StateVector> {
        if let Some(s) = self.post_states.get(name) {
            return Ok(s.clone());
        }
        StateVector::basis_named(&self.labels, name).ok_or_else(|| WeakError::Unknown {
            kind: "state",
            name: name.to_string(),
        })
    }

    /// Post states in declaration order.
    pub fn post_basis(&self) -> Vec<PostState> {
        self.post_states
            .iter()
            .map(|(name, s)| PostState::new(name.clone(), s.clone()))
            .collect()
    }

    /// The listed observables, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<Vec<Observable>> {
        names.iter().map(|n| self.observable(n).cloned()).collect()
    }

    /// Computational basis states of the scenario's labels.
    pub fn computational_basis(&self) -> Vec<StateVector> {
        (0..self.labels.len())
            .map(|i| StateVector::basis(&self.labels, i).expect("index in range"))
            .collect()
    }
}
