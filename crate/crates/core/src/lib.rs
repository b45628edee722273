//! Simulation and analysis of entanglement distillation by Schmidt
//! projection on partially hyperentangled photon pairs.
//!
//! The numerical core is generic over [`Real`]; the aliases below fix the
//! scalar to `f64`, which is what the measurement and I/O layers use.

pub mod error;
pub mod lab;
pub mod measures;
pub mod photonic;
pub mod quantum;
pub mod random;
pub mod scalar;
pub mod schmidt;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PureState = quantum::PureState<f64>;
pub type DensityMatrix = quantum::DensityMatrix<f64>;
pub type Projector = quantum::Projector<f64>;
pub type OpticalElement = photonic::OpticalElement<f64>;
pub type SourceSetting = photonic::SourceSetting<f64>;
pub type NoiseChannel = photonic::NoiseChannel<f64>;
pub type GateConfig = schmidt::GateConfig<f64>;
pub type DistillationOutcome = schmidt::DistillationOutcome<f64>;
pub type SchmidtSubspace = schmidt::SchmidtSubspace<f64>;
pub type CMatrix = quantum::CMatrix<f64>;

pub type PureState32 = quantum::PureState<f32>;
pub type DensityMatrix32 = quantum::DensityMatrix<f32>;
