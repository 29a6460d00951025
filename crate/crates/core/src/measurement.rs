//! The measurement protocol on 𝒪 ⊗ SOS: an instantaneous CNOT pulse writes the
//! observed bit onto the spin, after which the SOS relaxes into a mixture of
//! pointer states with Born-rule weights.
//!
//! 𝒪 is a qubit with basis `(|φ₊>, |φ₋>)`; the composite order is
//! 𝒪 ⊗ spin ⊗ oscillator.

use serde::Serialize;

use crate::analytic::{alpha_trajectory, tunneling_rate_finite_t};
use crate::error::{Result, SosError};
use crate::fock::{partial_trace, trace_distance_matrices, DisplacedThermal, FockRep, QuantumState, Space, Subsystem};
use crate::linalg::{kron, outer, real, trace, CMatrix, CVector, C64};
use crate::model::{biased_gibbs_state, derive_rates, sigma1, sos_hamiltonian, spin_projector, SosParams};
use crate::oracle::{build_sos_generator, embed, evolve_with, Diagnostics, EvolveOptions, SosGeneratorOptions};

/// Amplitudes of the observed state `c₋|φ₋> + c₊|φ₊>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedSystem {
    c_minus: C64,
    c_plus: C64,
}

impl ObservedSystem {
    pub fn new(c_minus: C64, c_plus: C64) -> Result<Self> {
        let norm = c_minus.norm_sqr() + c_plus.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SosError::param(
                "c_minus/c_plus",
                format!("|c₋|² + |c₊|² must be 1, got {norm}"),
            ));
        }
        Ok(ObservedSystem { c_minus, c_plus })
    }

    /// `c₋ = √p₋ e^{iφ}`, `c₊ = √(1-p₋)`.
    pub fn from_probability(p_minus: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_minus) {
            return Err(SosError::param("p_minus", format!("must lie in [0, 1], got {p_minus}")));
        }
        ObservedSystem::new(
            C64::from_polar(p_minus.sqrt(), phase),
            real((1.0 - p_minus).sqrt()),
        )
    }

    pub fn c_minus(&self) -> C64 {
        self.c_minus
    }

    pub fn c_plus(&self) -> C64 {
        self.c_plus
    }

    pub fn p_minus(&self) -> f64 {
        self.c_minus.norm_sqr()
    }

    pub fn p_plus(&self) -> f64 {
        self.c_plus.norm_sqr()
    }

    pub fn ket(&self) -> CVector {
        CVector::from_vec(vec![self.c_plus, self.c_minus])
    }
}

/// 𝒪 projector on `|φ_μ>`.
pub fn observed_projector(mu: i8) -> CMatrix {
    spin_projector(mu)
}

/// `P₊ ⊗ I + P₋ ⊗ (-iσ¹ ⊗ I)`: the spin flips, up to the phase `-i`, exactly
/// when 𝒪 is in `|φ₋>`.
pub fn pulse_unitary(fock_dim: usize) -> CMatrix {
    let id = CMatrix::identity(2 * fock_dim, 2 * fock_dim);
    let flip = kron(&sigma1(), &CMatrix::identity(fock_dim, fock_dim)) * C64::new(0.0, -1.0);
    kron(&observed_projector(1), &id) + kron(&observed_projector(-1), &flip)
}

#[derive(Debug, Clone)]
pub struct PulseOutcome {
    pub state: QuantumState,
    pub warnings: Vec<String>,
}

/// Applies the CNOT pulse to `|φ><φ| ⊗ ρ_SOS`.
pub fn cnot_pulse(system: &ObservedSystem, sos_state: &QuantumState) -> Result<PulseOutcome> {
    let n = match sos_state.space().factors() {
        [(Subsystem::Spin, 2), (Subsystem::Oscillator, n)] => *n,
        _ => {
            return Err(SosError::DimensionMismatch(
                "CNOT pulse needs a spin⊗oscillator state".into(),
            ))
        }
    };
    let mut warnings = Vec::new();
    let up = trace(&(kron(&spin_projector(1), &CMatrix::identity(n, n)) * sos_state.matrix())).re;
    if (up - 1.0).abs() > 1e-8 {
        warnings.push(format!(
            "SOS is not in a '+' stable state (spin-up population {up:.6})"
        ));
    }
    let phi = system.ket();
    let rho = kron(&outer(&phi, &phi), sos_state.matrix());
    let u = pulse_unitary(n);
    let out = &u * rho * u.adjoint();
    Ok(PulseOutcome {
        state: QuantumState::new_unchecked(out, Space::observed_spin_oscillator(n))?,
        warnings,
    })
}

/// Energy `Tr(H ρ_after) - Tr(H ρ_before)` delivered by the pulse.
pub fn pulse_work(
    system: &ObservedSystem,
    params: &SosParams,
    rep: &FockRep,
) -> Result<f64> {
    let before = biased_gibbs_state(1, params, rep)?;
    let after = cnot_pulse(system, &before)?.state;
    let h = sos_hamiltonian(params, rep)?;
    let e0 = trace(&(&h * before.matrix())).re;
    let e1 = trace(&(kron(&CMatrix::identity(2, 2), &h) * after.matrix())).re;
    Ok(e1 - e0)
}

/// Mean pulse work over the inputs `c₋ = 1` and `c₋ = 0`, analytically `2D²ω₀`.
pub fn ensemble_average_work(params: &SosParams, rep: &FockRep) -> Result<f64> {
    let flip = pulse_work(&ObservedSystem::new(real(1.0), real(0.0))?, params, rep)?;
    let keep = pulse_work(&ObservedSystem::new(real(0.0), real(1.0))?, params, rep)?;
    Ok(0.5 * (flip + keep))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageTimes {
    /// Pulse duration (instantaneous).
    pub t_m: f64,
    /// Dequantization, `1/Γ`.
    pub t_d: f64,
    /// Recording, `1/γ`.
    pub t_r: f64,
    /// Memory lifetime, `1/Γ_tun`.
    pub t_e: f64,
}

impl StageTimes {
    /// `t_D < t_R < t_E`.
    pub fn is_ordered(&self) -> bool {
        self.t_d < self.t_r && self.t_r < self.t_e
    }
}

pub fn stage_times(params: &SosParams) -> StageTimes {
    let rates = derive_rates(params);
    let inv = |r: f64| if r > 0.0 { 1.0 / r } else { f64::INFINITY };
    StageTimes {
        t_m: 0.0,
        t_d: inv(rates.big_gamma),
        t_r: inv(rates.gamma),
        t_e: inv(tunneling_rate_finite_t(params).exact.rate),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOptions {
    /// Output samples over the horizon (besides `t = 0`).
    pub samples: usize,
    pub evolve: EvolveOptions,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        ProtocolOptions {
            samples: 100,
            evolve: EvolveOptions {
                store_states: false,
                ..EvolveOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackSample {
    pub t: f64,
    /// Oscillator displacement `<a>` in the `-` spin sector, normalized by its weight.
    pub re: f64,
    pub im: f64,
    /// `D(2e^{-(iω₀+γ_net/2)t} - 1)`.
    pub analytic_re: f64,
    pub analytic_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementReport {
    /// Numerical pulse work.
    pub work_invested: f64,
    /// `|c₋|² 4D²ω₀`.
    pub work_expected: f64,
    /// Mean work over `c₋ ∈ {0, 1}`; `2D²ω₀`.
    pub ensemble_average_work: f64,
    /// Least-squares weights `(p₋, p₊)` of the final pointer on the two pointer states.
    pub born_weights: (f64, f64),
    /// Trace distance of the final pointer to `|c₋|²ρ(-D) + |c₊|²ρ(+D)`.
    pub pointer_trace_distance: f64,
    /// Largest trace distance of the reduced 𝒪 state from `|c₋|²P₋ + |c₊|²P₊`.
    pub observed_max_distance: f64,
    pub stage_times: StageTimes,
    /// `(t, trace norm of <φ₊|ρ|φ₋>)`.
    pub coherence_envelope: Vec<(f64, f64)>,
    pub pointer_track: Vec<TrackSample>,
    /// Largest `|<a>_- - D₋(t)|` along the track (0 when `c₋ = 0`).
    pub track_deviation: f64,
    pub horizon: f64,
    pub fock_dim: usize,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<String>,
}

/// Runs pulse plus relaxation up to `horizon` and reports the outcome.
pub fn run_protocol(
    system: &ObservedSystem,
    params: &SosParams,
    rep: &FockRep,
    horizon: f64,
) -> Result<MeasurementReport> {
    run_protocol_with(system, params, rep, horizon, ProtocolOptions::default())
}

pub fn run_protocol_with(
    system: &ObservedSystem,
    params: &SosParams,
    rep: &FockRep,
    horizon: f64,
    options: ProtocolOptions,
) -> Result<MeasurementReport> {
    params.validate()?;
    let rates = derive_rates(params);
    let mut warnings = Vec::new();
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(SosError::param("horizon", format!("must be > 0, got {horizon}")));
    }
    if rates.gamma_net <= 0.0 {
        return Err(SosError::param("G_o_omega0", "recording needs a positive damping rate"));
    }
    if horizon < 10.0 / rates.gamma_net {
        warnings.push(format!(
            "horizon {horizon} is shorter than 10/γ_net = {}",
            10.0 / rates.gamma_net
        ));
    }
    let n = rep.dim();
    let sos0 = biased_gibbs_state(1, params, rep)?;
    let pulse = cnot_pulse(system, &sos0)?;
    warnings.extend(pulse.warnings);
    let rho0 = pulse.state;
    let space = rho0.space().clone();

    let work_invested = pulse_work(system, params, rep)?;
    let gen = build_sos_generator(params, rep, SosGeneratorOptions::default())?.lift(2);

    let a_minus = embed(
        &Space::spin_oscillator(n),
        Subsystem::Oscillator,
        rep.a(),
    )? * kron(&spin_projector(-1), &CMatrix::identity(n, n));
    let a_minus = kron(&CMatrix::identity(2, 2), &a_minus);
    let p_spin_minus = kron(
        &CMatrix::identity(2, 2),
        &kron(&spin_projector(-1), &CMatrix::identity(n, n)),
    );
    let observed_target = observed_projector(-1) * real(system.p_minus())
        + observed_projector(1) * real(system.p_plus());

    let grid: Vec<f64> = (0..=options.samples)
        .map(|k| horizon * k as f64 / options.samples as f64)
        .collect();
    let mut envelope = Vec::with_capacity(grid.len());
    let mut track = Vec::new();
    let mut observed_max: f64 = 0.0;
    let mut observed_err: Option<SosError> = None;
    let traj = evolve_with(&gen, &rho0, &grid, options.evolve, |_, t, rho| {
        // <φ₊|ρ|φ₋> block
        let block = rho.view((0, 2 * n), (2 * n, 2 * n)).clone_owned();
        envelope.push((t, block.singular_values().sum()));
        match QuantumState::new_unchecked(rho.clone(), space.clone())
            .and_then(|s| partial_trace(&s, &[Subsystem::Observed]))
            .and_then(|r| trace_distance_matrices(r.matrix(), &observed_target))
        {
            Ok(d) => observed_max = observed_max.max(d),
            Err(e) => observed_err = Some(e),
        }
        let w = trace(&(&p_spin_minus * rho)).re;
        if w > 1e-12 {
            let z = trace(&(&a_minus * rho)) / w;
            let analytic = alpha_trajectory(-1, real(params.d), t, params);
            track.push(TrackSample {
                t,
                re: z.re,
                im: z.im,
                analytic_re: analytic.re,
                analytic_im: analytic.im,
            });
        }
    })?;
    if let Some(e) = observed_err {
        return Err(e);
    }

    let final_state = traj.final_state()?;
    let pointer = partial_trace(&final_state, &[Subsystem::Oscillator])?;
    let target_minus = pointer_state(-1, params, rep)?;
    let target_plus = pointer_state(1, params, rep)?;
    let born_weights = hilbert_schmidt_weights(pointer.matrix(), &target_minus, &target_plus)?;
    let target = &target_minus * real(system.p_minus()) + &target_plus * real(system.p_plus());
    let pointer_trace_distance = trace_distance_matrices(pointer.matrix(), &target)?;
    let track_deviation = track
        .iter()
        .map(|s| C64::new(s.re - s.analytic_re, s.im - s.analytic_im).norm())
        .fold(0.0, f64::max);

    Ok(MeasurementReport {
        work_invested,
        work_expected: system.p_minus() * 4.0 * params.d * params.d * params.omega0,
        ensemble_average_work: ensemble_average_work(params, rep)?,
        born_weights,
        pointer_trace_distance,
        observed_max_distance: observed_max,
        stage_times: stage_times(params),
        coherence_envelope: envelope,
        pointer_track: track,
        track_deviation,
        horizon,
        fock_dim: n,
        diagnostics: traj.diagnostics,
        warnings,
    })
}

/// Pointer state `ρ_T(μD)` on the oscillator.
fn pointer_state(mu: i8, params: &SosParams, rep: &FockRep) -> Result<CMatrix> {
    Ok(DisplacedThermal::new(real(mu as f64 * params.d), params.omega0, params.temperature)
        .state(rep)?
        .into_matrix())
}

/// Least-squares `(w₋, w₊)` minimizing `||ρ - w₋ρ₋ - w₊ρ₊||_HS`.
fn hilbert_schmidt_weights(rho: &CMatrix, minus: &CMatrix, plus: &CMatrix) -> Result<(f64, f64)> {
    let ip = |x: &CMatrix, y: &CMatrix| trace(&(x * y)).re;
    let (g11, g12, g22) = (ip(minus, minus), ip(minus, plus), ip(plus, plus));
    let (b1, b2) = (ip(minus, rho), ip(plus, rho));
    let det = g11 * g22 - g12 * g12;
    if det.abs() < 1e-14 * g11 * g22 {
        return Err(SosError::InvalidState(
            "pointer states are indistinguishable (D too small)".into(),
        ));
    }
    Ok(((g22 * b1 - g12 * b2) / det, (g11 * b2 - g12 * b1) / det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn params(d: f64, t: f64) -> SosParams {
        SosParams::new(1.0, d, t, 1.0, 0.1, 0.0, 0.0).unwrap()
    }

    #[test]
    fn amplitudes_must_be_normalized() {
        assert!(ObservedSystem::new(real(0.6), real(0.6)).is_err());
        let s = ObservedSystem::from_probability(0.25, 1.0).unwrap();
        assert!((s.p_minus() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pulse_is_unitary() {
        let u = pulse_unitary(5);
        assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(20, 20))) < 1e-15);
    }

    #[test]
    fn no_flip_without_minus_amplitude() {
        let p = params(1.0, 0.0);
        let rep = FockRep::new(40).unwrap();
        let sys = ObservedSystem::new(real(0.0), real(1.0)).unwrap();
        assert!(pulse_work(&sys, &p, &rep).unwrap().abs() < 1e-12);
        let sos = biased_gibbs_state(1, &p, &rep).unwrap();
        let out = cnot_pulse(&sys, &sos).unwrap();
        assert!(out.warnings.is_empty());
        let reduced = partial_trace(&out.state, &[Subsystem::Spin, Subsystem::Oscillator]).unwrap();
        assert!(max_abs(&(reduced.matrix() - sos.matrix())) < 1e-15);
    }

    #[test]
    fn flip_costs_the_barrier() {
        for &t in &[0.0, 1.0] {
            let p = params(1.0, t);
            let rep = p.auto_rep(p.d);
            let sys = ObservedSystem::new(real(1.0), real(0.0)).unwrap();
            let w = pulse_work(&sys, &p, &rep).unwrap();
            assert!((w - 4.0).abs() < 1e-9, "T={t}: {w}");
            assert!((ensemble_average_work(&p, &rep).unwrap() - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_input_dephases_observed_system() {
        let p = params(1.0, 0.0);
        let rep = FockRep::new(40).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sys = ObservedSystem::new(real(h), real(h)).unwrap();
        let out = cnot_pulse(&sys, &biased_gibbs_state(1, &p, &rep).unwrap()).unwrap();
        let o = partial_trace(&out.state, &[Subsystem::Observed]).unwrap();
        assert!(max_abs(&(o.matrix() - CMatrix::identity(2, 2) * real(0.5))) < 1e-12);
    }

    #[test]
    fn non_stable_input_is_flagged() {
        let p = params(1.0, 0.0);
        let rep = FockRep::new(40).unwrap();
        let sys = ObservedSystem::new(real(1.0), real(0.0)).unwrap();
        let wrong = biased_gibbs_state(-1, &p, &rep).unwrap();
        assert_eq!(cnot_pulse(&sys, &wrong).unwrap().warnings.len(), 1);
    }

    #[test]
    fn stage_time_example() {
        let p = SosParams::new(1.0, 3.0, 0.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        let s = stage_times(&p);
        assert!((s.t_d - 1.0 / 36.0).abs() < 1e-15);
        assert_eq!(s.t_r, 1.0);
        assert!((s.t_e / (2.0 * 36f64.exp()) - 1.0).abs() < 1e-12);
        assert!(s.is_ordered());
        // t_E ε = 2/G₁(0) at T = 0
        assert!((s.t_e * crate::analytic::epsilon_zero_t(3.0) - 2.0).abs() < 1e-12);
    }
}
