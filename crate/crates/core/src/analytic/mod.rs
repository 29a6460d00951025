//! Closed-form results: dyad propagation, pointer overlaps, minimal work and
//! tunneling rates.

pub mod bessel;
mod propagator;
mod tunneling;

pub use bessel::{i0_scaled, ln_i0};
pub use propagator::{
    alpha_trajectory, assemble, displacement_phase, phi_factor, propagate_rank1,
    propagate_state, superposition_blocks, Rank1Block,
};
pub use tunneling::{
    b0_diagonal, b0_lab, b0_operator, b0_series, laguerre, thermal_v0_squared,
    thermal_v0_squared_bessel, thermal_weyl_average, tunneling_coupling,
    tunneling_rate_finite_t, tunneling_rate_zero_t, FiniteTTunneling, TunnelingRegime,
    TunnelingResult,
};

use crate::error::{Result, SosError};

/// Zero-temperature pointer overlap `e^{-4D²}`.
pub fn epsilon_zero_t(d: f64) -> f64 {
    (-4.0 * d * d).exp()
}

/// Readout error `exp{-4D² tanh(ω₀/2T)} = exp{-W̄/Θ}`.
pub fn epsilon_finite_t(d: f64, omega0: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return epsilon_zero_t(d);
    }
    (-4.0 * d * d * (0.5 * omega0 / temperature).tanh()).exp()
}

/// Work `Θ ln(1/ε)` needed to reach readout error `ε`.
pub fn min_work(epsilon: f64, theta: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(SosError::param("epsilon", format!("must lie in (0, 1], got {epsilon}")));
    }
    Ok(-theta * epsilon.ln())
}
