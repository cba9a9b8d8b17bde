//! Fock-space operators, finite-activity Lévy simulation and the chaos
//! bridge between them.

pub mod error;
pub mod fock;
pub mod levy;
pub mod malliavin;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type HVector64 = fock::HVector<f64>;
pub type SymTensor64 = fock::SymTensor<f64>;
pub type FockVector64 = fock::FockVector<f64>;
pub type MarkedFock64 = fock::MarkedFock<f64>;
pub type ExpCombo64 = fock::ExpCombo<f64>;
pub type DenseOperator64 = fock::DenseOperator<f64>;
pub type FockVector32 = fock::FockVector<f32>;
pub type HVector32 = fock::HVector<f32>;
pub type ChaosCoefficients64 = malliavin::ChaosCoefficients<f64>;
pub type MarkedChaos64 = malliavin::MarkedChaos<f64>;
