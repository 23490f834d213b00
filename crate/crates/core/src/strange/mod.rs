//! Post-selections that produce strange weak values.
//!
//! Everything here works in the real span of the scenario: the pre-selection
//! and the observable must have real entries, and the post-selection `phi`
//! ranges over the cone `<phi|psi> = cos(xi)` of real unit vectors.

mod classify;
mod oracle;
mod planar;
mod solver;

pub use classify::*;
pub use oracle::*;
pub use planar::*;
pub use solver::*;

use std::f64::consts::FRAC_PI_2;

use ndarray::Array1;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, WeakError};
use crate::hilbert::{Observable, StateVector};

/// Largest cone angle accepted; `cos(xi)` must stay away from zero.
pub const XI_CEILING: f64 = FRAC_PI_2 - 1e-3;

/// Imaginary parts below this count as real.
pub const REAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Minimize,
    Maximize,
}

impl Objective {
    /// True if `a` is strictly better than `b` under this objective.
    pub fn prefers(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Minimize => a < b,
            Objective::Maximize => a > b,
        }
    }
}

pub(crate) fn ensure_real_state(s: &StateVector) -> Result<()> {
    let max_imag = s.max_imag();
    if max_imag > REAL_TOLERANCE {
        return Err(WeakError::ComplexGeometry { max_imag });
    }
    Ok(())
}

pub(crate) fn ensure_real_observable(a: &Observable) -> Result<()> {
    let max_imag = a.max_imag();
    if max_imag > REAL_TOLERANCE {
        return Err(WeakError::ComplexGeometry { max_imag });
    }
    Ok(())
}

/// Accepts `xi` in `(0, XI_CEILING)`.
pub fn ensure_xi(xi: f64) -> Result<()> {
    if xi.is_finite() && xi > 0.0 && xi < XI_CEILING {
        Ok(())
    } else {
        Err(WeakError::XiOutOfRange {
            xi,
            ceiling: XI_CEILING,
        })
    }
}

pub(crate) fn real_part(s: &StateVector) -> Array1<f64> {
    s.amplitudes().mapv(|z| z.re)
}

pub(crate) fn dot(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.dot(b)
}

pub(crate) fn to_state(s: &StateVector, v: &Array1<f64>) -> Result<StateVector> {
    StateVector::new(s.labels().clone(), v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

/// Point on the cone through `psi` in direction `dir` (any vector; only its
/// component orthogonal to `psi` is used). `None` if that component vanishes.
pub(crate) fn cone_point(psi: &Array1<f64>, dir: &Array1<f64>, xi: f64) -> Option<Array1<f64>> {
    let perp = dir - &(psi * dot(psi, dir));
    let norm = perp.dot(&perp).sqrt();
    if norm < 1e-14 {
        return None;
    }
    Some(psi * xi.cos() + &(perp * (xi.sin() / norm)))
}
