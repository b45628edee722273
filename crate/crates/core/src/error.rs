use thiserror::Error;

use crate::quantum::QubitLabel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit label {0} appears more than once in the register")]
    LabelCollision(QubitLabel),

    #[error("qubit label {0} is not part of the register")]
    UnknownLabel(QubitLabel),

    #[error("label set must be a nonempty proper subset of the register")]
    ImproperSubset,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not an orthogonal projector (max deviation {deviation:.3e})")]
    NotProjector { deviation: f64 },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("density matrix is not physical: {0}")]
    NotPhysical(String),

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("expected register {expected}, got {got}")]
    RegisterShape { expected: String, got: String },

    #[error("visibility undefined: all counts are zero")]
    UndefinedVisibility,

    #[error("tomography data incomplete: {0}")]
    IncompleteTomography(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
