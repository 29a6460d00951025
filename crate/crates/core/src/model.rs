//! Physical parameters of the spin-oscillator system (SOS), the rates derived
//! from them, and the Hamiltonian and dressing constructions.
//!
//! Units are natural (ħ = k_B = 1). The spin basis is ordered `|+>, |->`, so
//! `σ³ = diag(1, -1)`, and the spin is the most significant tensor factor.
//!
//! The Hamiltonian is the normal-ordered `ω₀(a† - Dσ³)(a - Dσ³)` whose
//! degenerate ground energy is 0; the dressed form `ω₀ b†b - ω₀D²` differs from
//! it by the constant `ω₀D²`, which never enters a dynamical quantity.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SosError};
use crate::fock::{
    bose_occupation, coherent_vector, weyl_operator, DisplacedThermal, FockRep, QuantumState, Space,
};
use crate::linalg::{kron, real, CMatrix, CVector, C64};

/// Spin-oscillator parameters and the four environment spectral values the
/// model ever evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SosParams {
    pub omega0: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    /// `G_o(ω₀)`, the dissipation rate γ.
    #[serde(rename = "G_o_omega0")]
    pub g_o_omega0: f64,
    #[serde(rename = "G_o_0")]
    pub g_o_0: f64,
    #[serde(rename = "G_3_0")]
    pub g_3_0: f64,
    #[serde(rename = "G_1_0")]
    pub g_1_0: f64,
}

impl SosParams {
    pub fn new(
        omega0: f64,
        d: f64,
        temperature: f64,
        g_o_omega0: f64,
        g_o_0: f64,
        g_3_0: f64,
        g_1_0: f64,
    ) -> Result<Self> {
        let p = SosParams {
            omega0,
            d,
            temperature,
            g_o_omega0,
            g_o_0,
            g_3_0,
            g_1_0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |field: &'static str, v: f64| {
            if !v.is_finite() || v < 0.0 {
                Err(SosError::param(field, format!("must be finite and >= 0, got {v}")))
            } else {
                Ok(())
            }
        };
        if !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(SosError::param("omega0", format!("must be > 0, got {}", self.omega0)));
        }
        finite_nonneg("D", self.d)?;
        finite_nonneg("T", self.temperature)?;
        finite_nonneg("G_o_omega0", self.g_o_omega0)?;
        finite_nonneg("G_o_0", self.g_o_0)?;
        finite_nonneg("G_3_0", self.g_3_0)?;
        finite_nonneg("G_1_0", self.g_1_0)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SosParams = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn with_temperature(mut self, t: f64) -> Self {
        self.temperature = t;
        self
    }

    /// Boltzmann factor `e^{-ω₀/T}`, exactly 0 at `T = 0`.
    pub fn boltzmann(&self) -> f64 {
        if self.temperature <= 0.0 {
            0.0
        } else {
            (-self.omega0 / self.temperature).exp()
        }
    }

    pub fn n_bar(&self) -> f64 {
        bose_occupation(self.omega0, self.temperature)
    }

    /// Fock dimension for states displaced by up to `alpha_max` at this temperature.
    pub fn auto_rep(&self, alpha_max: f64) -> FockRep {
        DisplacedThermal::new(real(alpha_max), self.omega0, self.temperature)
            .auto_rep()
    }
}

/// Rates and energy scales derived from [`SosParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedRates {
    pub gamma: f64,
    pub gamma_up: f64,
    pub gamma_net: f64,
    pub big_gamma: f64,
    pub w_bar: f64,
    pub theta: f64,
    pub theta_prime: f64,
    /// Pointer readout error `exp{-4D² tanh(ω₀/2T)}`.
    pub epsilon: f64,
}

/// Noise temperature `Θ = ω₀/(e^{ω₀/T} - 1) + ω₀/2`.
pub fn noise_temperature(omega0: f64, temperature: f64) -> f64 {
    omega0 * bose_occupation(omega0, temperature) + 0.5 * omega0
}

/// Tunneling noise temperature `Θ' = (ω₀/2)(1-q)/(1 - sqrt(1-(1-q)²))`, `q = e^{-ω₀/T}`.
pub fn tunneling_noise_temperature(omega0: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.5 * omega0;
    }
    let y = -(-omega0 / temperature).exp_m1();
    // 1 - sqrt(1 - y²) = y² / (1 + sqrt(1 - y²))
    let root = (1.0 - y * y).max(0.0).sqrt();
    0.5 * omega0 * (1.0 + root) / y
}

pub fn derive_rates(params: &SosParams) -> DerivedRates {
    let q = params.boltzmann();
    let gamma = params.g_o_omega0;
    let d2 = params.d * params.d;
    let w_bar = 2.0 * d2 * params.omega0;
    let theta = noise_temperature(params.omega0, params.temperature);
    DerivedRates {
        gamma,
        gamma_up: gamma * q,
        gamma_net: gamma * (1.0 - q),
        big_gamma: 4.0 * d2 * params.g_o_0 + params.g_3_0,
        w_bar,
        theta,
        theta_prime: tunneling_noise_temperature(params.omega0, params.temperature),
        epsilon: (-w_bar / theta).exp(),
    }
}

pub fn sigma3() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(-1.0)])
}

pub fn sigma1() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)])
}

/// Projector on spin `mu` (`+1` or `-1`).
pub fn spin_projector(mu: i8) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    let k = spin_index(mu);
    p[(k, k)] = real(1.0);
    p
}

pub fn spin_index(mu: i8) -> usize {
    if mu >= 0 {
        0
    } else {
        1
    }
}

pub fn spin_ket(mu: i8) -> CVector {
    let mut v = CVector::zeros(2);
    v[spin_index(mu)] = real(1.0);
    v
}

fn require_rep(rep: &FockRep) -> Result<()> {
    if rep.dim() < 2 {
        return Err(SosError::InvalidRepresentation(
            "Fock dimension must be at least 2".into(),
        ));
    }
    Ok(())
}

/// Block-diagonal spin⊗oscillator operator with block `f(mu)` in spin sector `mu`.
pub fn spin_block_diag(f: impl Fn(i8) -> CMatrix) -> CMatrix {
    kron(&spin_projector(1), &f(1)) + kron(&spin_projector(-1), &f(-1))
}

/// Dressed annihilation operator `b = a - Dσ³`.
pub fn dressed_annihilation(params: &SosParams, rep: &FockRep) -> CMatrix {
    spin_block_diag(|mu| rep.a() - rep.identity() * real(mu as f64 * params.d))
}

/// `H = ω₀(a† - Dσ³)(a - Dσ³)` on spin⊗oscillator.
pub fn sos_hamiltonian(params: &SosParams, rep: &FockRep) -> Result<CMatrix> {
    require_rep(rep)?;
    let b = dressed_annihilation(params, rep);
    Ok((b.adjoint() * &b).scale(params.omega0))
}

/// Dressing unitary `U = exp{D(a - a†)σ³}`, i.e. `W(±D)` in the spin sectors.
pub fn dressing_unitary(params: &SosParams, rep: &FockRep) -> Result<CMatrix> {
    require_rep(rep)?;
    Ok(spin_block_diag(|mu| {
        weyl_operator(real(mu as f64 * params.d), rep)
    }))
}

/// `|mu> ⊗ |alpha>`.
pub fn spin_coherent(mu: i8, alpha: C64, rep: &FockRep) -> Result<CVector> {
    let osc = coherent_vector(alpha, rep)?;
    Ok(spin_ket(mu).kronecker(&osc))
}

/// Ground state `|Ω_mu> = |mu; mu D>`.
pub fn ground_state(mu: i8, params: &SosParams, rep: &FockRep) -> Result<CVector> {
    spin_coherent(mu, real(mu as f64 * params.d), rep)
}

/// Spin-flipped excitation `|Ω*_mu> = |mu; -mu D>`.
pub fn excited_state(mu: i8, params: &SosParams, rep: &FockRep) -> Result<CVector> {
    spin_coherent(mu, real(-(mu as f64) * params.d), rep)
}

/// Biased Gibbs state `ρ^(μ) = P_μ ⊗ ρ_T(μD)`; the projector `|Ω_μ><Ω_μ|` at `T = 0`.
pub fn biased_gibbs_state(mu: i8, params: &SosParams, rep: &FockRep) -> Result<QuantumState> {
    let osc = DisplacedThermal::new(real(mu as f64 * params.d), params.omega0, params.temperature)
        .state(rep)?;
    QuantumState::new(
        kron(&spin_projector(mu), osc.matrix()),
        Space::spin_oscillator(rep.dim()),
    )
}
