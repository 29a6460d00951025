//! Numerical Lindblad integrator used as the reference for every closed form.

mod fourier;
mod generator;
mod integrator;

pub use fourier::{fourier_component, FourierOptions};
pub use generator::{
    build_sos_generator, GeneratorSpec, Lindbladian, SosGeneratorOptions, TUNNELING_RATE_FACTOR,
};
pub use integrator::{
    evolve, evolve_with, Diagnostics, EvolveOptions, Trajectory, POSITIVITY_ABORT,
};

use serde_json::json;

use crate::error::{Result, SosError};
use crate::fock::{weyl_operator, FockRep, QuantumState, Space, Subsystem};
use crate::format::sig12;
use crate::linalg::{kron, trace, CMatrix, C64};
use crate::model::sigma3;

/// Embeds a single-factor operator into `space` (identity on the other factors).
pub fn embed(space: &Space, which: Subsystem, op: &CMatrix) -> Result<CMatrix> {
    let mut out: Option<CMatrix> = None;
    let mut found = false;
    for &(s, d) in space.factors() {
        let factor = if s == which {
            if op.nrows() != d || op.ncols() != d {
                return Err(SosError::DimensionMismatch(format!(
                    "operator is {}x{}, {s:?} factor has dimension {d}",
                    op.nrows(),
                    op.ncols()
                )));
            }
            found = true;
            op.clone()
        } else {
            CMatrix::identity(d, d)
        };
        out = Some(match out {
            None => factor,
            Some(acc) => kron(&acc, &factor),
        });
    }
    if !found {
        return Err(SosError::DimensionMismatch(format!("space has no {which:?} factor")));
    }
    Ok(out.expect("space has factors"))
}

/// Outgoing spin-population flow `-½ s Tr(τ³ ℒρ₀)` with `s = sign Tr(τ³ρ₀)`.
///
/// For `ρ₀ = |Ω₋><Ω₋|` this is the rate `½Tr(τ³ dρ/dt|₀)` into the `+` sector;
/// for `ρ⁽⁺⁾` it is the same flow out of `+`, so it is nonnegative for both.
pub fn initial_spin_flow(gen: &GeneratorSpec, rho0: &QuantumState) -> Result<f64> {
    let tau3 = embed(rho0.space(), Subsystem::Spin, &sigma3())?;
    if tau3.nrows() != gen.dim() {
        return Err(SosError::DimensionMismatch(
            "state and generator dimensions differ".into(),
        ));
    }
    let s = trace(&(&tau3 * rho0.matrix())).re.signum();
    let flow = trace(&(&tau3 * gen.apply(rho0.matrix()))).re;
    Ok(-0.5 * s * flow)
}

/// The periodic family `V(t) = W(2D e^{-iω₀t})` on the oscillator.
pub fn weyl_family(d: f64, omega0: f64, rep: &FockRep) -> impl Fn(f64) -> CMatrix + '_ {
    move |t| weyl_operator(C64::from_polar(2.0 * d, -omega0 * t), rep)
}

/// CSV with columns `time, trace, min_eig` followed by the real and imaginary
/// parts of each named observable. Requires stored states.
pub fn trajectory_csv(traj: &Trajectory, observables: &[(&str, &CMatrix)]) -> Result<String> {
    let values = observable_values(traj, observables)?;
    let mut out = String::from("time,trace,min_eig");
    for (name, _) in observables {
        out.push_str(&format!(",{name}_re,{name}_im"));
    }
    out.push('\n');
    for i in 0..traj.len() {
        out.push_str(&format!(
            "{},{},{}",
            sig12(traj.times[i]),
            sig12(traj.traces[i]),
            sig12(traj.min_eigenvalues[i])
        ));
        for v in &values {
            out.push_str(&format!(",{},{}", sig12(v[i].re), sig12(v[i].im)));
        }
        out.push('\n');
    }
    Ok(out)
}

/// JSON record of the same data plus integration diagnostics.
pub fn trajectory_json(
    traj: &Trajectory,
    observables: &[(&str, &CMatrix)],
) -> Result<serde_json::Value> {
    let values = observable_values(traj, observables)?;
    let mut obs = serde_json::Map::new();
    for ((name, _), v) in observables.iter().zip(&values) {
        let re: Vec<f64> = v.iter().map(|z| z.re).collect();
        let im: Vec<f64> = v.iter().map(|z| z.im).collect();
        obs.insert(name.to_string(), json!({ "re": re, "im": im }));
    }
    Ok(json!({
        "times": traj.times,
        "trace": traj.traces,
        "min_eig": traj.min_eigenvalues.iter().map(|x| if x.is_nan() { None } else { Some(*x) }).collect::<Vec<_>>(),
        "observables": obs,
        "diagnostics": serde_json::to_value(traj.diagnostics)?,
    }))
}

fn observable_values(traj: &Trajectory, observables: &[(&str, &CMatrix)]) -> Result<Vec<Vec<C64>>> {
    if !observables.is_empty() && traj.matrices().len() != traj.len() {
        return Err(SosError::InvalidState(
            "observables need a trajectory with stored states".into(),
        ));
    }
    observables
        .iter()
        .map(|(name, op)| {
            if op.nrows() != traj.space().dim() {
                return Err(SosError::DimensionMismatch(format!(
                    "observable {name} does not act on the trajectory space"
                )));
            }
            Ok(traj.matrices().iter().map(|rho| trace(&(*op * rho))).collect())
        })
        .collect()
}
