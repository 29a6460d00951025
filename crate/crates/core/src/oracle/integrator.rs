//! Adaptive Dormand–Prince 5(4) integration of `dρ/dt = ℒρ` in full matrix form.

use serde::Serialize;

use crate::error::{Result, SosError};
use crate::fock::{QuantumState, Space};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, hermitize, real, CMatrix};
use crate::oracle::generator::{GeneratorSpec, Lindbladian};

// The generator is autonomous, so the stage nodes c_i never enter.
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Abort threshold for negative eigenvalues at output times.
pub const POSITIVITY_ABORT: f64 = -1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Keep every output state; otherwise only the last one is kept.
    pub store_states: bool,
    /// Eigen-decompose output states to monitor positivity.
    pub check_positivity: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 2_000_000,
            store_states: true,
            check_positivity: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub max_trace_drift: f64,
    pub min_eigenvalue: f64,
    pub max_hermiticity_defect: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub traces: Vec<f64>,
    /// Smallest eigenvalue per output time (`NaN` when not monitored).
    pub min_eigenvalues: Vec<f64>,
    pub diagnostics: Diagnostics,
    states: Vec<CMatrix>,
    space: Space,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Stored matrices: all output times, or only the last when states were not kept.
    pub fn matrices(&self) -> &[CMatrix] {
        &self.states
    }

    pub fn final_matrix(&self) -> &CMatrix {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn final_state(&self) -> Result<QuantumState> {
        QuantumState::new_unchecked(self.final_matrix().clone(), self.space.clone())
    }

    pub fn state(&self, i: usize) -> Result<QuantumState> {
        let m = self.states.get(i).ok_or_else(|| {
            SosError::InvalidState(format!("state {i} not stored in this trajectory"))
        })?;
        QuantumState::new_unchecked(m.clone(), self.space.clone())
    }
}

/// Integrates with default options.
pub fn evolve(gen: &GeneratorSpec, rho0: &QuantumState, grid: &[f64]) -> Result<Trajectory> {
    evolve_with(gen, rho0, grid, EvolveOptions::default(), |_, _, _| {})
}

/// Integrates `ρ₀` over `grid`, calling `observe(i, t_i, ρ(t_i))` at every
/// output time.
pub fn evolve_with(
    gen: &GeneratorSpec,
    rho0: &QuantumState,
    grid: &[f64],
    options: EvolveOptions,
    mut observe: impl FnMut(usize, f64, &CMatrix),
) -> Result<Trajectory> {
    if rho0.dim() != gen.dim() {
        return Err(SosError::DimensionMismatch(format!(
            "state has dimension {}, generator acts on {}",
            rho0.dim(),
            gen.dim()
        )));
    }
    if grid.is_empty() || grid[0] != 0.0 {
        return Err(SosError::param("t_grid", "must start at 0"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|t| !t.is_finite()) {
        return Err(SosError::param("t_grid", "must be finite and strictly ascending"));
    }
    let lind = gen.compile();
    let mut stepper = Stepper::new(&lind, rho0.matrix().clone(), options);
    let mut traj = Trajectory {
        times: Vec::with_capacity(grid.len()),
        traces: Vec::with_capacity(grid.len()),
        min_eigenvalues: Vec::with_capacity(grid.len()),
        diagnostics: Diagnostics {
            min_eigenvalue: f64::INFINITY,
            ..Diagnostics::default()
        },
        states: Vec::new(),
        space: rho0.space().clone(),
    };
    let tr0 = stepper.y.trace().re;
    for (i, &t) in grid.iter().enumerate() {
        stepper.advance_to(t)?;
        let tr = stepper.y.trace().re;
        let min_eig = if options.check_positivity {
            hermitian_eigenvalues(&stepper.y)[0]
        } else {
            f64::NAN
        };
        let d = &mut traj.diagnostics;
        d.max_trace_drift = d.max_trace_drift.max((tr - tr0).abs());
        if options.check_positivity {
            d.min_eigenvalue = d.min_eigenvalue.min(min_eig);
            if min_eig < POSITIVITY_ABORT {
                return Err(stepper.failure(format!(
                    "minimum eigenvalue {min_eig:.3e} below {POSITIVITY_ABORT:.0e}"
                )));
            }
        }
        observe(i, t, &stepper.y);
        traj.times.push(t);
        traj.traces.push(tr);
        traj.min_eigenvalues.push(min_eig);
        if options.store_states || i + 1 == grid.len() {
            traj.states.push(stepper.y.clone());
        }
    }
    let d = &mut traj.diagnostics;
    d.max_hermiticity_defect = stepper.max_defect;
    d.accepted_steps = stepper.accepted;
    d.rejected_steps = stepper.rejected;
    d.evaluations = stepper.evaluations;
    if !options.check_positivity {
        d.min_eigenvalue = f64::NAN;
    }
    Ok(traj)
}

struct Stepper<'a> {
    lind: &'a Lindbladian,
    opts: EvolveOptions,
    t: f64,
    h: f64,
    y: CMatrix,
    k: Vec<CMatrix>,
    accepted: usize,
    rejected: usize,
    evaluations: usize,
    max_defect: f64,
}

impl<'a> Stepper<'a> {
    fn new(lind: &'a Lindbladian, y: CMatrix, opts: EvolveOptions) -> Self {
        let n = y.nrows();
        let mut k = vec![CMatrix::zeros(n, n); 7];
        lind.apply_into(&y, &mut k[0]);
        // initial step from the generator scale
        let scale = k[0].norm() / y.norm().max(1e-300);
        let h = if scale > 0.0 { 0.01 / scale } else { f64::INFINITY };
        Stepper {
            lind,
            opts,
            t: 0.0,
            h,
            y,
            k,
            accepted: 0,
            rejected: 0,
            evaluations: 1,
            max_defect: 0.0,
        }
    }

    fn failure(&self, reason: String) -> SosError {
        SosError::Integration {
            t: self.t,
            reason,
            steps: self.accepted,
            rejected: self.rejected,
        }
    }

    fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.t < target {
            if self.accepted + self.rejected >= self.opts.max_steps {
                return Err(self.failure(format!(
                    "step budget of {} exhausted",
                    self.opts.max_steps
                )));
            }
            let remaining = target - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h < 1e-14 * self.t.max(1.0) && !last {
                return Err(self.failure(format!("step size underflow (h = {h:.3e})")));
            }
            let (y_new, err) = self.trial(h);
            let sc = self.opts.atol + self.opts.rtol * self.y.norm().max(y_new.norm());
            let ratio = err / sc;
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if ratio <= 1.0 {
                self.max_defect = self.max_defect.max(hermiticity_defect(&y_new));
                self.y = hermitize(&y_new);
                self.t = if last { target } else { self.t + h };
                self.k.swap(0, 6);
                self.accepted += 1;
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * factor.min(1.0);
            }
        }
        Ok(())
    }

    /// One Dormand–Prince trial step of size `h`: the fifth-order solution and
    /// the Frobenius norm of the embedded error estimate. Leaves `ℒ(y_new)` in
    /// `k[6]` for reuse.
    fn trial(&mut self, h: f64) -> (CMatrix, f64) {
        let mut stage = CMatrix::zeros(self.y.nrows(), self.y.ncols());
        for s in 0..6 {
            stage.copy_from(&self.y);
            for (j, &a) in A[s].iter().enumerate() {
                if a != 0.0 {
                    crate::linalg::axpy(&mut stage, real(h * a), &self.k[j]);
                }
            }
            self.lind.apply_into(&stage, &mut self.k[s + 1]);
            self.evaluations += 1;
        }
        // stage now holds the fifth-order solution; k[6] = ℒ(y_new)
        let mut err = CMatrix::zeros(self.y.nrows(), self.y.ncols());
        for (j, &e) in E.iter().enumerate() {
            if e != 0.0 {
                crate::linalg::axpy(&mut err, real(h * e), &self.k[j]);
            }
        }
        (stage, err.norm())
    }
}
