use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeakError {
    #[error("zero vector cannot be normalized (norm {norm:e})")]
    ZeroVector { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis labels differ: {left:?} vs {right:?}")]
    LabelMismatch { left: Vec<String>, right: Vec<String> },

    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),

    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::MAX_DIMENSION)]
    DimensionTooLarge(usize),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("not Hermitian (max |M - M^dagger| = {max_deviation:e})")]
    NotHermitian { max_deviation: f64 },

    #[error("post-selection has vanishing overlap with the pre-selection (|<phi|psi>| = {overlap:e})")]
    NullPostSelection { overlap: f64 },

    #[error("post-selection basis is not orthonormal (max deviation {max_deviation:e})")]
    NotOrthonormal { max_deviation: f64 },

    #[error("post-selection basis is incomplete ({found} of {dimension} states)")]
    IncompleteBasis { found: usize, dimension: usize },

    #[error("scenario is not real-restricted (max imaginary part {max_imag:e})")]
    ComplexGeometry { max_imag: f64 },

    #[error("intermediate state is orthogonal to the pre-selection")]
    OrthogonalIntermediate,

    #[error("xi must be in (0, xi_ceiling), got {xi} (xi_ceiling = {ceiling})")]
    XiOutOfRange { xi: f64, ceiling: f64 },

    #[error("grid resolution {0} is below the minimum of 8 points per angle")]
    ResolutionTooCoarse(usize),

    #[error("grid oracle supports dimension <= {max}, got {found}")]
    OracleDimension { found: usize, max: usize },

    #[error("grid of {points:e} points exceeds the oracle budget")]
    GridTooLarge { points: f64 },

    #[error("coefficients are not normalized (sum of squared moduli {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("constraint system leaves a {null_dimension}-dimensional solution space")]
    Underdetermined { null_dimension: usize },

    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },

    #[error("no observables supplied")]
    EmptyObservableSet,

    /// A scenario document failed validation at `path`.
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, WeakError>;
