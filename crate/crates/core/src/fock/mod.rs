//! Truncated Fock-space numerics: ladder operators, states, fidelity and
//! partial traces.

mod coherent;
mod rep;
mod state;

pub use coherent::{
    coherent_vector, coherent_vector_with_tol, displaced_thermal_state, displacement_elements,
    weyl_operator, DisplacedThermal,
};
pub use rep::{auto_dim, bose_occupation, FockRep, TRUNCATION_TOL};
pub use state::{
    partial_trace, trace_distance, trace_distance_matrices, uhlmann_fidelity, QuantumState,
    Space, StateJson, Subsystem, HERMITIAN_TOL, NEGATIVITY_TOL, TRACE_TOL,
};
