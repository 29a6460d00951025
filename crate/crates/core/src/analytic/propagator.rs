//! Closed-form zero-temperature evolution of labeled coherent dyads
//! `amp |μ;α><β;ν|` under the damped, dephased SOS master equation.
//!
//! Each spin sector is a damped oscillator displaced by `μD`, so a dyad stays a
//! dyad: labels relax toward `μD`, `νD` and the amplitude picks up the
//! dephasing factor, the coherent-state overlap factor `e^Φ`, and a phase from
//! re-expressing the shifted coherent states in the lab frame.

use crate::error::{Result, SosError};
use crate::fock::FockRep;
use crate::linalg::{CMatrix, C64, I};
use crate::model::{derive_rates, spin_coherent, SosParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank1Block {
    pub mu: i8,
    pub nu: i8,
    pub alpha: C64,
    pub beta: C64,
    pub amp: C64,
}

impl Rank1Block {
    pub fn new(mu: i8, alpha: C64, beta: C64, nu: i8, amp: C64) -> Self {
        Rank1Block {
            mu,
            nu,
            alpha,
            beta,
            amp,
        }
    }

    /// The adjoint dyad `conj(amp) |ν;β><α;μ|`.
    pub fn adjoint(&self) -> Self {
        Rank1Block {
            mu: self.nu,
            nu: self.mu,
            alpha: self.beta,
            beta: self.alpha,
            amp: self.amp.conj(),
        }
    }

    /// Dense matrix on spin⊗oscillator.
    pub fn to_matrix(&self, rep: &FockRep) -> Result<CMatrix> {
        let left = spin_coherent(self.mu, self.alpha, rep)?;
        let right = spin_coherent(self.nu, self.beta, rep)?;
        Ok(left * right.adjoint() * self.amp)
    }
}

/// Sum of dyads as a dense matrix.
pub fn assemble(blocks: &[Rank1Block], rep: &FockRep) -> Result<CMatrix> {
    let n = 2 * rep.dim();
    blocks.iter().try_fold(CMatrix::zeros(n, n), |acc, b| Ok(acc + b.to_matrix(rep)?))
}

fn relaxation(params: &SosParams, t: f64) -> C64 {
    let gamma_net = derive_rates(params).gamma_net;
    (-(I * params.omega0 + 0.5 * gamma_net) * t).exp()
}

/// `α_μ(t) = α e^{-(iω₀+γ_net/2)t} + μD(1 - e^{-(iω₀+γ_net/2)t})`.
pub fn alpha_trajectory(mu: i8, alpha0: C64, t: f64, params: &SosParams) -> C64 {
    let e = relaxation(params, t);
    let center = C64::new(mu as f64 * params.d, 0.0);
    center + (alpha0 - center) * e
}

/// `Φ(t) = (e^{-γt} - 1)[½|α-μD|² + ½|β-νD|² - (α-μD)conj(β-νD)]`.
pub fn phi_factor(block: &Rank1Block, t: f64, params: &SosParams) -> C64 {
    let gamma = derive_rates(params).gamma;
    let a = block.alpha - block.mu as f64 * params.d;
    let b = block.beta - block.nu as f64 * params.d;
    (-gamma * t).exp_m1() * (0.5 * a.norm_sqr() + 0.5 * b.norm_sqr() - a * b.conj())
}

/// Phase `μD Im(α - α_μ(t)) - νD Im(β - β_ν(t))` accumulated by the shifted
/// frames; vanishes for real trajectories and when `D = 0`.
pub fn displacement_phase(block: &Rank1Block, t: f64, params: &SosParams) -> f64 {
    let at = alpha_trajectory(block.mu, block.alpha, t, params);
    let bt = alpha_trajectory(block.nu, block.beta, t, params);
    params.d * (block.mu as f64 * (block.alpha - at).im - block.nu as f64 * (block.beta - bt).im)
}

/// Zero-temperature dyad propagator.
pub fn propagate_rank1(block: &Rank1Block, t: f64, params: &SosParams) -> Result<Rank1Block> {
    if params.temperature > 0.0 {
        return Err(SosError::UnsupportedRegime(format!(
            "closed-form dyad propagation needs T = 0, got T = {}",
            params.temperature
        )));
    }
    if !(t >= 0.0) {
        return Err(SosError::param("t", format!("must be >= 0, got {t}")));
    }
    let rates = derive_rates(params);
    let dmu = (block.mu - block.nu) as f64;
    let exponent = -0.5 * rates.big_gamma * dmu * dmu * t
        + phi_factor(block, t, params)
        + I * displacement_phase(block, t, params);
    Ok(Rank1Block {
        mu: block.mu,
        nu: block.nu,
        alpha: alpha_trajectory(block.mu, block.alpha, t, params),
        beta: alpha_trajectory(block.nu, block.beta, t, params),
        amp: block.amp * exponent.exp(),
    })
}

/// Propagates every block and assembles `ρ(t)`.
pub fn propagate_state(
    blocks: &[Rank1Block],
    t: f64,
    params: &SosParams,
    rep: &FockRep,
) -> Result<CMatrix> {
    let moved = blocks
        .iter()
        .map(|b| propagate_rank1(b, t, params))
        .collect::<Result<Vec<_>>>()?;
    assemble(&moved, rep)
}

/// Dyad expansion of `|ψ><ψ|` for `ψ = Σ c_k |μ_k; α_k>`.
pub fn superposition_blocks(terms: &[(C64, i8, C64)]) -> Vec<Rank1Block> {
    let mut out = Vec::with_capacity(terms.len() * terms.len());
    for &(ci, mi, ai) in terms {
        for &(cj, mj, aj) in terms {
            out.push(Rank1Block::new(mi, ai, aj, mj, ci * cj.conj()));
        }
    }
    out
}
