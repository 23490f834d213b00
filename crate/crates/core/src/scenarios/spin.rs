//! A spin-1/2 particle measured with the Pauli operators.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use super::Scenario;
use crate::error::{Result, WeakError};
use crate::hilbert::{projector_onto, Labels, Observable, StateVector};
use crate::suite::{CheckKind, CheckSpec};
use crate::weak::{weak_value_table, TableOptions, WeakValueTable};

pub const SIGMA_X: &str = "sigma_x";
pub const SIGMA_Y: &str = "sigma_y";
pub const SIGMA_Z: &str = "sigma_z";
pub const SIGMA_X_PLUS_Y: &str = "sigma_x+sigma_y";
pub const P_PLUS: &str = "P_+";
pub const P_MINUS: &str = "P_-";

const TOLERANCE: f64 = 1e-12;

/// Real amplitudes of the pre-selection `alpha|0> + beta|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinScenarioParams {
    pub alpha: f64,
    pub beta: f64,
}

impl SpinScenarioParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let norm_sq = alpha * alpha + beta * beta;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > TOLERANCE {
            return Err(WeakError::NotNormalized { norm_sq });
        }
        Ok(Self { alpha, beta })
    }

    /// `|0_x> = (|0> + |1>)/sqrt2`.
    pub fn plus_x() -> Self {
        Self {
            alpha: FRAC_1_SQRT_2,
            beta: FRAC_1_SQRT_2,
        }
    }
}

impl Default for SpinScenarioParams {
    fn default() -> Self {
        Self { alpha: 0.6, beta: 0.8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinBasis {
    /// `|0>, |1>`
    Computational,
    /// `|0_y> = (|0> + i|1>)/sqrt2`, `|1_y> = (|0> - i|1>)/sqrt2`
    YBasis,
}

pub fn spin_labels() -> Labels {
    Labels::new(["0", "1"]).expect("static labels")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(name: &str, entries: [Complex64; 4]) -> Observable {
    let m = ndarray::Array2::from_shape_vec((2, 2), entries.to_vec()).expect("2x2");
    Observable::new(name, spin_labels(), m).expect("Hermitian")
}

pub fn spin_registry() -> Vec<Observable> {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let sx = pauli(SIGMA_X, [o, one, one, o]);
    let sy = pauli(SIGMA_Y, [o, -i, i, o]);
    let sz = pauli(SIGMA_Z, [one, o, o, -one]);
    let sxy = sx.plus(&sy).expect("same space").renamed(SIGMA_X_PLUS_Y);
    let plus_x = StateVector::from_real(spin_labels(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("valid");
    let minus_x = StateVector::from_real(spin_labels(), &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).expect("valid");
    vec![
        sx,
        sy,
        sz,
        sxy,
        projector_onto(&plus_x).renamed(P_PLUS),
        projector_onto(&minus_x).renamed(P_MINUS),
    ]
}

fn post_states(basis: SpinBasis) -> Vec<(&'static str, StateVector)> {
    let l = spin_labels();
    let s = FRAC_1_SQRT_2;
    match basis {
        SpinBasis::Computational => vec![
            ("0", StateVector::basis(&l, 0).expect("basis")),
            ("1", StateVector::basis(&l, 1).expect("basis")),
        ],
        SpinBasis::YBasis => vec![
            ("0_y", StateVector::new(l.clone(), vec![c(s, 0.0), c(0.0, s)]).expect("valid")),
            ("1_y", StateVector::new(l, vec![c(s, 0.0), c(0.0, -s)]).expect("valid")),
        ],
    }
}

pub fn build_spin(params: SpinScenarioParams, post_basis: SpinBasis) -> Result<Scenario> {
    let params = SpinScenarioParams::new(params.alpha, params.beta)?;
    let pre = StateVector::from_real(spin_labels(), &[params.alpha, params.beta])?;
    let mut scenario = Scenario::new(pre);
    for (name, state) in post_states(post_basis) {
        scenario = scenario.with_post(name, state)?;
    }
    for observable in spin_registry() {
        scenario = scenario.with_observable(observable)?;
    }
    Ok(scenario
        .with_check(CheckSpec::new(CheckKind::Consistency1))
        .with_check(CheckSpec::new(CheckKind::Consistency2))
        .with_check(CheckSpec::new(CheckKind::Born))
        .with_check(CheckSpec::new(CheckKind::Variance))
        .with_check(CheckSpec::new(CheckKind::Abl)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinTable {
    /// Pauli operators for `|0_x>` in the y basis.
    PauliY,
    /// `sigma_x` and `sigma_x + sigma_y` for `|0_x>` in the y basis.
    Composite,
    /// Pauli operators in the computational basis, with squared sums.
    Pauli,
    /// `P_+` and `P_-` in the computational basis, with column sums.
    Projectors,
}

impl SpinTable {
    pub const ALL: [(&'static str, SpinTable); 4] = [
        ("pauli-y", SpinTable::PauliY),
        ("composite", SpinTable::Composite),
        ("pauli", SpinTable::Pauli),
        ("projectors", SpinTable::Projectors),
    ];
}

/// Builds a spin table. `params` is ignored by the `|0_x>` tables.
pub fn spin_table(variant: SpinTable, params: SpinScenarioParams) -> Result<WeakValueTable> {
    let (params, basis, rows, title): (_, _, &[&str], _) = match variant {
        SpinTable::PauliY => (
            SpinScenarioParams::plus_x(),
            SpinBasis::YBasis,
            &[SIGMA_X, SIGMA_Y, SIGMA_Z],
            "Spin: Pauli operators, y-basis post-selection",
        ),
        SpinTable::Composite => (
            SpinScenarioParams::plus_x(),
            SpinBasis::YBasis,
            &[SIGMA_X, SIGMA_X_PLUS_Y],
            "Spin: composed weak-value vectors",
        ),
        SpinTable::Pauli => (
            params,
            SpinBasis::Computational,
            &[SIGMA_X, SIGMA_Y, SIGMA_Z],
            "Spin: Pauli operators",
        ),
        SpinTable::Projectors => (
            params,
            SpinBasis::Computational,
            &[P_PLUS, P_MINUS],
            "Spin: orthogonal projectors",
        ),
    };
    let scenario = build_spin(params, basis)?;
    let table = weak_value_table(
        &scenario.pre_state,
        &scenario.post_basis(),
        &scenario.select(rows)?,
        TableOptions::default(),
    )?
    .titled(title);
    Ok(match variant {
        SpinTable::Pauli => table.with_square_sums(),
        SpinTable::Projectors => table.with_column_sums(),
        _ => table,
    })
}
