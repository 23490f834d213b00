//! Weak values, weak-value tables, and the probabilistic identities they satisfy.

mod identities;
mod table;

pub use identities::*;
pub use table::*;

use num_complex::Complex64;

use crate::error::{Result, WeakError};
use crate::hilbert::{Observable, StateVector};

/// Smallest `|<phi|psi>|` for which a weak value is considered defined.
pub const DEFAULT_OVERLAP_FLOOR: f64 = 1e-12;

/// `<post|A|pre> / <post|pre>` with the default overlap floor.
pub fn weak_value(pre: &StateVector, post: &StateVector, a: &Observable) -> Result<Complex64> {
    weak_value_with_floor(pre, post, a, DEFAULT_OVERLAP_FLOOR)
}

pub fn weak_value_with_floor(
    pre: &StateVector,
    post: &StateVector,
    a: &Observable,
    overlap_floor: f64,
) -> Result<Complex64> {
    let overlap = post.inner(pre)?;
    if overlap.norm() < overlap_floor {
        return Err(WeakError::NullPostSelection {
            overlap: overlap.norm(),
        });
    }
    Ok(a.sandwich(post, pre)? / overlap)
}
