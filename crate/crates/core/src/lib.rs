//! Weak values of finite-dimensional pure states.
//!
//! The crate is organized bottom-up:
//!
//! * [`hilbert`]: labeled states, Hermitian observables, tensor products and
//!   a deterministic Jacobi spectral decomposition.
//! * [`weak`]: weak values `<phi|A|psi>/<phi|psi>`, weak-value tables over a
//!   complete post-selection basis, and the identities those tables satisfy
//!   (completeness, Born reduction, variance, bilinear consistency, ABL,
//!   joint probability, observable equivalence).
//! * [`strange`]: post-selections that push weak values outside the
//!   spectrum, from the planar closed form to the constrained extremum.
//! * [`scenarios`]: the Hardy interferometer pair and the spin-1/2 system.
//! * [`document`] and [`suite`]: the JSON scenario format and the residual
//!   check suite driven by it.

pub mod document;
pub mod error;
pub mod hilbert;
pub mod scenarios;
pub mod strange;
pub mod suite;
pub mod weak;

pub use error::{Result, WeakError};
pub use hilbert::{
    inner_product, make_state, projector_onto, spectral_decomposition, tensor_operator, tensor_product, Labels,
    Observable, Spectrum, StateVector,
};
pub use num_complex::Complex64;
pub use strange::{
    classify_strangeness, grid_oracle_extremal, planar_postselection, solve_optimal_postselection, Branch, Objective,
    OptimalPostSelection, PlanarGeometry, Strangeness, StrangenessReport, XI_CEILING,
};
pub use weak::{weak_value, weak_value_table, PostState, TableOptions, WeakValueTable, DEFAULT_OVERLAP_FLOOR};

/// Largest Hilbert-space dimension the engine accepts.
pub const MAX_DIMENSION: usize = 64;
