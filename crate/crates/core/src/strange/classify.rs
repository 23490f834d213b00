use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, WeakError};
use crate::hilbert::{Observable, Spectrum, StateVector};

/// Slack allowed at either end of the spectrum before a value is strange.
pub const SPECTRUM_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strangeness {
    Within,
    AboveMax,
    BelowMin,
}

impl Strangeness {
    pub fn as_str(self) -> &'static str {
        match self {
            Strangeness::Within => "within",
            Strangeness::AboveMax => "above_max",
            Strangeness::BelowMin => "below_min",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrangenessReport {
    pub value: f64,
    pub spectrum_min: f64,
    pub spectrum_max: f64,
    pub classification: Strangeness,
}

/// Places a real weak value relative to `[a_1, a_N]`.
pub fn classify_strangeness(value: f64, spectrum: &Spectrum) -> StrangenessReport {
    let (lo, hi) = (spectrum.min(), spectrum.max());
    let classification = if value > hi + SPECTRUM_SLACK {
        Strangeness::AboveMax
    } else if value < lo - SPECTRUM_SLACK {
        Strangeness::BelowMin
    } else {
        Strangeness::Within
    };
    StrangenessReport {
        value,
        spectrum_min: lo,
        spectrum_max: hi,
        classification,
    }
}

/// Pre-selection `alpha|N> + beta|1>` and post-selection `(|N> + |1>)/sqrt2`
/// built from the extreme eigenvectors of `a`. The resulting weak value is
/// `a_N + (a_1 - a_N) w_1`, with `w_1 = 1 / (1 + alpha/beta)` the weak value
/// of `|1><1|`; it exceeds `a_N` exactly when `alpha/beta < -1`.
pub fn two_level_construction(spectrum: &Spectrum, alpha: f64, beta: f64) -> Result<(StateVector, StateVector)> {
    if spectrum.len() < 2 {
        return Err(WeakError::DimensionMismatch {
            expected: 2,
            found: spectrum.len(),
        });
    }
    let top = &spectrum.eigenvectors[spectrum.len() - 1];
    let bottom = &spectrum.eigenvectors[0];
    let mix = |p: f64, q: f64| {
        let raw = top.amplitudes().mapv(|z| z * p) + bottom.amplitudes().mapv(|z| z * q);
        StateVector::new(top.labels().clone(), raw.to_vec())
    };
    Ok((mix(alpha, beta)?, mix(1.0, 1.0)?))
}

/// Weak value of `a` for the two-level construction.
pub fn two_level_weak_value(a: &Observable, spectrum: &Spectrum, alpha: f64, beta: f64) -> Result<Complex64> {
    let (pre, post) = two_level_construction(spectrum, alpha, beta)?;
    crate::weak::weak_value(&pre, &post, a)
}
