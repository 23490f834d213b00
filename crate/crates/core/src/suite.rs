//! Named identity checks run against a [`Scenario`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WeakError};
use crate::hilbert::{Observable, StateVector};
use crate::scenarios::Scenario;
use crate::weak::{
    abl_probability, check_born_reduction, check_consistency_one, check_consistency_two, observable_distance,
    variance_via_weak_values, weak_equivalence_residual, ColumnResidual,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Weak values of a complete projector resolution sum to 1 per column.
    Consistency1,
    /// `sum_x h_A^* Pr h_B = <psi|AB|psi>` for each pair of observables.
    Consistency2,
    /// Weighted row averages equal expectation values.
    Born,
    /// Variance from weak values equals the direct variance.
    Variance,
    /// `|w(|a><a|)|^2` matches the ABL ratio for every post-selection.
    Abl,
    /// Two observables are equivalent in the pre-selection.
    Equivalence,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Consistency1,
        CheckKind::Consistency2,
        CheckKind::Born,
        CheckKind::Variance,
        CheckKind::Abl,
        CheckKind::Equivalence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Consistency1 => "consistency1",
            CheckKind::Consistency2 => "consistency2",
            CheckKind::Born => "born",
            CheckKind::Variance => "variance",
            CheckKind::Abl => "abl",
            CheckKind::Equivalence => "equivalence",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == name)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A check request. Empty `observables` means every registered observable;
/// empty `states` means the computational basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub kind: CheckKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
}

impl CheckSpec {
    pub fn new(kind: CheckKind) -> Self {
        Self {
            kind,
            observables: Vec::new(),
            states: Vec::new(),
        }
    }

    pub fn observables<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.observables = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn states<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states = names.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub kind: CheckKind,
    /// What was checked, e.g. `consistency2[sigma_x,sigma_y]`.
    pub subject: String,
    /// Largest residual over the evaluated columns; `None` if the check errored.
    pub residual: Option<f64>,
    /// Post-selections skipped because they are orthogonal to the pre-selection.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub tolerance: f64,
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.outcomes.iter().filter_map(|o| o.residual).fold(0.0, f64::max)
    }
}

struct Evaluation {
    residual: f64,
    skipped: Vec<String>,
}

impl Evaluation {
    fn scalar(residual: f64) -> Self {
        Self {
            residual,
            skipped: Vec::new(),
        }
    }

    fn columns(columns: &[ColumnResidual]) -> Self {
        Self {
            residual: ColumnResidual::max(columns),
            skipped: columns.iter().filter(|c| c.residual.is_none()).map(|c| c.post.clone()).collect(),
        }
    }
}

fn subject(kind: CheckKind, parts: &[&str]) -> String {
    if parts.is_empty() {
        kind.to_string()
    } else {
        format!("{kind}[{}]", parts.join(","))
    }
}

fn selected<'a>(scenario: &'a Scenario, spec: &CheckSpec) -> Result<Vec<&'a Observable>> {
    if spec.observables.is_empty() {
        if scenario.observables.is_empty() {
            return Err(WeakError::EmptyObservableSet);
        }
        return Ok(scenario.observables.values().collect());
    }
    spec.observables.iter().map(|n| scenario.observable(n)).collect()
}

fn states(scenario: &Scenario, spec: &CheckSpec) -> Result<Vec<StateVector>> {
    if spec.states.is_empty() {
        Ok(scenario.computational_basis())
    } else {
        spec.states.iter().map(|n| scenario.resolve_state(n)).collect()
    }
}

/// Expands a spec into the individual checks it stands for and evaluates
/// them against `scenario.tolerance`.
pub fn run_check(scenario: &Scenario, spec: &CheckSpec) -> Vec<CheckOutcome> {
    let mut jobs: Vec<(String, Result<Evaluation>)> = Vec::new();
    let pre = &scenario.pre_state;
    let post = scenario.post_basis();
    match spec.kind {
        CheckKind::Consistency1 => {
            let result = states(scenario, spec)
                .and_then(|s| check_consistency_one(pre, &post, &s))
                .map(|c| Evaluation::columns(&c));
            let names: Vec<&str> = spec.states.iter().map(String::as_str).collect();
            jobs.push((subject(spec.kind, &names), result));
        }
        CheckKind::Consistency2 => match selected(scenario, spec) {
            Ok(obs) => {
                for (i, a) in obs.iter().enumerate() {
                    for b in &obs[i..] {
                        let r = check_consistency_two(pre, &post, a, b).map(Evaluation::scalar);
                        jobs.push((subject(spec.kind, &[a.name(), b.name()]), r));
                    }
                }
            }
            Err(e) => jobs.push((subject(spec.kind, &[]), Err(e))),
        },
        CheckKind::Born | CheckKind::Variance => match selected(scenario, spec) {
            Ok(obs) => {
                for a in obs {
                    let r = if spec.kind == CheckKind::Born {
                        check_born_reduction(pre, &post, a)
                    } else {
                        variance_via_weak_values(pre, &post, a).map(|v| v.residual())
                    };
                    jobs.push((subject(spec.kind, &[a.name()]), r.map(Evaluation::scalar)));
                }
            }
            Err(e) => jobs.push((subject(spec.kind, &[]), Err(e))),
        },
        CheckKind::Abl => {
            let result = states(scenario, spec).and_then(|intermediates| {
                let mut eval = Evaluation::scalar(0.0);
                for x in &post {
                    for a in &intermediates {
                        match abl_probability(pre, &x.state, a) {
                            Ok(p) => eval.residual = eval.residual.max(p.residual()),
                            Err(WeakError::NullPostSelection { .. }) => {
                                if !eval.skipped.contains(&x.name) {
                                    eval.skipped.push(x.name.clone());
                                }
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok(eval)
            });
            let names: Vec<&str> = spec.states.iter().map(String::as_str).collect();
            jobs.push((subject(spec.kind, &names), result));
        }
        CheckKind::Equivalence => {
            let names: Vec<&str> = spec.observables.iter().map(String::as_str).collect();
            let result = if spec.observables.len() != 2 {
                Err(WeakError::DimensionMismatch {
                    expected: 2,
                    found: spec.observables.len(),
                })
            } else {
                selected(scenario, spec).and_then(|obs| {
                    let columns = weak_equivalence_residual(pre, &post, obs[0], obs[1])?;
                    let mut eval = Evaluation::columns(&columns);
                    eval.residual = eval.residual.max(observable_distance(pre, obs[0], obs[1])?);
                    Ok(eval)
                })
            };
            jobs.push((subject(spec.kind, &names), result));
        }
    }
    jobs.into_iter()
        .map(|(subject, result)| match result {
            Ok(eval) => CheckOutcome {
                kind: spec.kind,
                subject,
                residual: Some(eval.residual),
                skipped: eval.skipped,
                error: None,
                passed: eval.residual < scenario.tolerance,
            },
            Err(e) => CheckOutcome {
                kind: spec.kind,
                subject,
                residual: None,
                skipped: Vec::new(),
                error: Some(e.to_string()),
                passed: false,
            },
        })
        .collect()
}

/// Runs every check declared on the scenario.
pub fn run_checks(scenario: &Scenario) -> SuiteReport {
    SuiteReport {
        tolerance: scenario.tolerance,
        outcomes: scenario.checks.iter().flat_map(|spec| run_check(scenario, spec)).collect(),
    }
}
