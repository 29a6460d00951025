//! The zero-Bohr-frequency tunneling operator `B̂₀` and dissipative tunneling
//! rates between the two stable spin states.
//!
//! In the dressed frame `B̂₀` is diagonal in the Fock basis,
//! `<k|B̂₀|k> = e^{-2D²} L_k(4D²)`. Its thermal second moment is the
//! Hille–Hardy sum
//!
//! `<V₀²>_T = Σ_k (1-q) q^k e^{-x} L_k(x)² = exp{-x(1+q)/(1-q)} I₀(2x√q/(1-q))`
//!
//! with `x = 4D²`, `q = e^{-ω₀/T}`. The rate is `½ G₁(0) <V₀²>_T`.

use serde::Serialize;

use crate::analytic::bessel::i0_scaled;
use crate::fock::{displacement_elements, FockRep};
use crate::linalg::{real, CMatrix};
use crate::model::{tunneling_noise_temperature, SosParams};

/// Laguerre polynomials `L_k(x)` for `k = 0..len`.
pub fn laguerre(x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len > 0 {
        out.push(1.0);
    }
    if len > 1 {
        out.push(1.0 - x);
    }
    for k in 1..len.saturating_sub(1) {
        let kf = k as f64;
        out.push(((2.0 * kf + 1.0 - x) * out[k] - kf * out[k - 1]) / (kf + 1.0));
    }
    out
}

/// Diagonal of `B̂₀` in the dressed Fock basis: `e^{-2D²} L_k(4D²)`.
pub fn b0_diagonal(d: f64, len: usize) -> Vec<f64> {
    let x = 4.0 * d * d;
    let scale = (-0.5 * x).exp();
    laguerre(x, len).into_iter().map(|l| scale * l).collect()
}

/// `B̂₀` on the oscillator in the dressed Fock basis.
pub fn b0_operator(params: &SosParams, rep: &FockRep) -> CMatrix {
    let diag = b0_diagonal(params.d, rep.dim());
    CMatrix::from_fn(rep.dim(), rep.dim(), |i, j| {
        if i == j {
            real(diag[i])
        } else {
            real(0.0)
        }
    })
}

/// Direct evaluation of `e^{-2D²} Σ_n (-1)ⁿ (2D)^{2n}/(n!)² (a†)ⁿ aⁿ`,
/// truncated after `terms` terms.
pub fn b0_series(d: f64, rep: &FockRep, terms: usize) -> CMatrix {
    let mut out = CMatrix::zeros(rep.dim(), rep.dim());
    let mut lower = rep.identity();
    let mut raise = rep.identity();
    let mut coeff = 1.0;
    for n in 0..terms {
        if n > 0 {
            let nf = n as f64;
            coeff *= -4.0 * d * d / (nf * nf);
            lower = rep.a() * lower;
            raise *= rep.adag();
        }
        out += (&raise * &lower) * real(coeff);
    }
    out * real((-2.0 * d * d).exp())
}

/// Rows needed so that exact displacement elements from the first `dim`
/// levels lose nothing measurable.
fn padded_rows(dim: usize, d: f64) -> usize {
    let reach = (dim as f64).sqrt() + d + 8.0;
    (reach * reach).ceil() as usize
}

/// Lab-frame image `U† (σ ⊗ B̂₀) U` with `σ` either the spin identity or `σ¹`,
/// evaluated with exact displacement matrix elements so that the truncation
/// edge does not leak into the result.
fn lab_frame(params: &SosParams, rep: &FockRep, flip: bool) -> CMatrix {
    let n = rep.dim();
    let rows = padded_rows(n, params.d);
    let diag = b0_diagonal(params.d, rows);
    // W(μD) = D(-μD); rows x n
    let shift = |mu: f64| displacement_elements(real(-mu * params.d), rows, n);
    let plus = shift(1.0);
    let minus = shift(-1.0);
    let weighted = |m: &CMatrix| {
        let mut w = m.clone();
        for (k, mut row) in w.row_iter_mut().enumerate() {
            row *= real(diag[k]);
        }
        w
    };
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    if flip {
        let pm = plus.adjoint() * weighted(&minus);
        out.view_mut((0, n), (n, n)).copy_from(&pm);
        out.view_mut((n, 0), (n, n)).copy_from(&pm.adjoint());
    } else {
        out.view_mut((0, 0), (n, n)).copy_from(&(plus.adjoint() * weighted(&plus)));
        out.view_mut((n, n), (n, n)).copy_from(&(minus.adjoint() * weighted(&minus)));
    }
    out
}

/// Lab-frame `B̂₀` (spin-block-diagonal) on spin⊗oscillator.
pub fn b0_lab(params: &SosParams, rep: &FockRep) -> CMatrix {
    lab_frame(params, rep, false)
}

/// Lab-frame tunneling coupling `B̂₀τ¹` on spin⊗oscillator.
pub fn tunneling_coupling(params: &SosParams, rep: &FockRep) -> CMatrix {
    lab_frame(params, rep, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TunnelingRegime {
    ZeroT,
    FiniteTExact,
    FiniteTLeading,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TunnelingResult {
    pub rate: f64,
    /// Temperature entering `exp{-W̄/Θ}`-type exponents for this estimate.
    pub exponent_temperature: f64,
    pub regime: TunnelingRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteTTunneling {
    pub exact: TunnelingResult,
    pub leading: TunnelingResult,
}

/// `½ G₁(0) e^{-4D²}`.
pub fn tunneling_rate_zero_t(params: &SosParams) -> TunnelingResult {
    TunnelingResult {
        rate: 0.5 * params.g_1_0 * (-4.0 * params.d * params.d).exp(),
        exponent_temperature: 0.5 * params.omega0,
        regime: TunnelingRegime::ZeroT,
    }
}

/// Thermal average of a Weyl operator, `<W(α)>_T = exp{-|α|²(n̄ + ½)}`.
pub fn thermal_weyl_average(alpha_sq: f64, omega0: f64, temperature: f64) -> f64 {
    let n_bar = crate::fock::bose_occupation(omega0, temperature);
    (-alpha_sq * (n_bar + 0.5)).exp()
}

/// `<V₀²>_T` in closed form (Hille–Hardy), overflow-safe for large `D`.
pub fn thermal_v0_squared(d: f64, omega0: f64, temperature: f64) -> f64 {
    let x = 4.0 * d * d;
    if temperature <= 0.0 {
        return (-x).exp();
    }
    let s = (-0.5 * omega0 / temperature).exp();
    let q = s * s;
    let y = 2.0 * x * s / (1.0 - q);
    // exp{-x(1+q)/(1-q) + y} = exp{-x(1-s)/(1+s)}
    (-x * (1.0 - s) / (1.0 + s)).exp() * i0_scaled(y)
}

/// The thermal second moment as it follows from the Weyl average
/// `exp{-|α|²/(2(1-q))}`:
/// `exp{-4D²/(1-q)} I₀(4D² sqrt((1-q)^{-2} - 1))`.
///
/// That Weyl average is only correct at `T = 0`; this form is kept to expose
/// the difference, see [`thermal_v0_squared`] for the exact moment.
pub fn thermal_v0_squared_bessel(d: f64, omega0: f64, temperature: f64) -> f64 {
    let x = 4.0 * d * d;
    if temperature <= 0.0 {
        return (-x).exp();
    }
    let y1 = -(-omega0 / temperature).exp_m1();
    let y = x * (1.0 / (y1 * y1) - 1.0).max(0.0).sqrt();
    (-x / y1 + y).exp() * i0_scaled(y)
}

/// Exact and leading-exponent finite-temperature rates.
pub fn tunneling_rate_finite_t(params: &SosParams) -> FiniteTTunneling {
    let half_g = 0.5 * params.g_1_0;
    let theta_prime = tunneling_noise_temperature(params.omega0, params.temperature);
    let w_bar = 2.0 * params.d * params.d * params.omega0;
    FiniteTTunneling {
        exact: TunnelingResult {
            rate: half_g * thermal_v0_squared(params.d, params.omega0, params.temperature),
            exponent_temperature: theta_prime,
            regime: TunnelingRegime::FiniteTExact,
        },
        leading: TunnelingResult {
            rate: half_g * (-w_bar / theta_prime).exp(),
            exponent_temperature: theta_prime,
            regime: TunnelingRegime::FiniteTLeading,
        },
    }
}
