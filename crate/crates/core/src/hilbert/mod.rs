//! Dense complex linear algebra over small labeled Hilbert spaces.

mod operator;
mod spectral;
mod state;

pub use operator::{hermitian_deviation, projector_onto, tensor_operator, Observable, HERMITIAN_TOLERANCE};
pub use spectral::{hermitian_eigen, spectral_decomposition, spectral_decomposition_matrix, Spectrum, DEGENERACY_GAP};
pub use state::{inner_product, make_state, tensor_product, Labels, StateVector, ZERO_NORM};
