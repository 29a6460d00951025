pub mod analytic;
pub mod cost;
pub mod error;
pub mod fock;
pub mod format;
pub mod linalg;
pub mod measurement;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod szilard;
pub mod validation;

pub use cost::{CostInputs, Temperature};
pub use error::{Result, SosError};
pub use fock::{FockRep, QuantumState, Space, Subsystem};
pub use linalg::{CMatrix, CVector, C64};
pub use measurement::ObservedSystem;
pub use model::SosParams;
pub use szilard::SzilardCycle;
