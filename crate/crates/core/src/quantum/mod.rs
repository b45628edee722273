//! Labeled multi-qubit pure states and density matrices.

pub mod density;
pub mod linalg;
pub mod register;
pub mod state;

pub use density::DensityMatrix;
pub use linalg::CMatrix;
pub use register::{Dof, Party, QubitLabel, Register};
pub use state::{Projection, Projector, PureState};
