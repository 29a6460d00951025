use crate::analytic::tunneling_coupling;
use crate::error::{Result, SosError};
use crate::fock::FockRep;
use crate::linalg::{hermiticity_defect, kron, max_abs, real, CMatrix, Operator, C64, I};
use crate::model::{dressed_annihilation, sigma3, sos_hamiltonian, SosParams};

/// A Lindblad generator in the form
///
/// `ℒρ = -i[H, ρ] + Σ_j c_j (L_j ρ L_j† - ½{L_j†L_j, ρ}) - Σ_k (r_k/2)[A_k, [A_k, ρ]]`.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    hamiltonian: CMatrix,
    jumps: Vec<(CMatrix, f64)>,
    dephasing: Vec<(CMatrix, f64)>,
}

impl GeneratorSpec {
    pub fn new(hamiltonian: CMatrix) -> Result<Self> {
        if !hamiltonian.is_square() {
            return Err(SosError::DimensionMismatch("Hamiltonian must be square".into()));
        }
        let scale = max_abs(&hamiltonian).max(1.0);
        if hermiticity_defect(&hamiltonian) > 1e-12 * scale {
            return Err(SosError::InvalidParameter {
                field: "hamiltonian",
                reason: "must be Hermitian".into(),
            });
        }
        Ok(GeneratorSpec {
            hamiltonian,
            jumps: Vec::new(),
            dephasing: Vec::new(),
        })
    }

    /// Generator with no Hamiltonian part.
    pub fn zero(dim: usize) -> Self {
        GeneratorSpec {
            hamiltonian: CMatrix::zeros(dim, dim),
            jumps: Vec::new(),
            dephasing: Vec::new(),
        }
    }

    fn check(&self, op: &CMatrix, rate: f64, field: &'static str) -> Result<()> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(SosError::param(field, format!("rate must be >= 0, got {rate}")));
        }
        if op.shape() != self.hamiltonian.shape() {
            return Err(SosError::DimensionMismatch(format!(
                "{field} operator is {:?}, generator acts on {:?}",
                op.shape(),
                self.hamiltonian.shape()
            )));
        }
        Ok(())
    }

    pub fn with_jump(mut self, op: CMatrix, rate: f64) -> Result<Self> {
        self.check(&op, rate, "jump")?;
        if rate > 0.0 {
            self.jumps.push((op, rate));
        }
        Ok(self)
    }

    /// Adds `-(rate/2)[A, [A, ρ]]`; `A` must be Hermitian.
    pub fn with_dephasing(mut self, op: CMatrix, rate: f64) -> Result<Self> {
        self.check(&op, rate, "dephasing")?;
        if hermiticity_defect(&op) > 1e-12 * max_abs(&op).max(1.0) {
            return Err(SosError::InvalidParameter {
                field: "dephasing",
                reason: "operator must be Hermitian".into(),
            });
        }
        if rate > 0.0 {
            self.dephasing.push((op, rate));
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(CMatrix, f64)] {
        &self.jumps
    }

    pub fn dephasing(&self) -> &[(CMatrix, f64)] {
        &self.dephasing
    }

    /// The same generator acting on `X ⊗ (this space)` with `X` of dimension
    /// `outer` evolving trivially.
    pub fn lift(&self, outer: usize) -> GeneratorSpec {
        let id = CMatrix::identity(outer, outer);
        let up = |m: &CMatrix| kron(&id, m);
        GeneratorSpec {
            hamiltonian: up(&self.hamiltonian),
            jumps: self.jumps.iter().map(|(m, r)| (up(m), *r)).collect(),
            dephasing: self.dephasing.iter().map(|(m, r)| (up(m), *r)).collect(),
        }
    }

    /// Every term as a jump `(L, c)`: dephasing by `A` at rate `r` is the jump
    /// `A` at rate `r`.
    fn all_jumps(&self) -> impl Iterator<Item = &(CMatrix, f64)> {
        self.jumps.iter().chain(self.dephasing.iter())
    }

    /// Largest entry of `Σ_j Tr(ℒ E_ij)` over matrix units, i.e. the column
    /// sums of the superoperator; zero for a trace-preserving generator.
    pub fn trace_preservation_defect(&self) -> f64 {
        // Tr ℒ(E_ij) = [i(H† - H) + Σ c (L†L - L†L)]_ji, evaluated term by term
        let mut m = (self.hamiltonian.adjoint() - &self.hamiltonian) * I;
        for (l, c) in self.all_jumps() {
            let ll = l.adjoint() * l;
            let k = &ll * real(-0.5 * c);
            // contribution of -i(Kρ - ρK†) plus c LρL†
            m += (&k + k.adjoint()) + ll * real(*c);
        }
        max_abs(&m)
    }

    pub fn compile(&self) -> Lindbladian {
        let mut k = self.hamiltonian.clone();
        for (l, c) in self.all_jumps() {
            k -= (l.adjoint() * l) * C64::new(0.0, 0.5 * c);
        }
        Lindbladian {
            dim: self.dim(),
            k: Operator::new(&k),
            jumps: self
                .all_jumps()
                .map(|(l, c)| (Operator::new(l), *c))
                .collect(),
        }
    }

    /// `ℒρ` for Hermitian `ρ`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.compile().apply(rho)
    }
}

/// A compiled generator `ℒρ = -i(Kρ - ρK†) + Σ c LρL†`,
/// `K = H - (i/2)Σ c L†L`, with operators stored sparse when that pays.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    dim: usize,
    k: Operator,
    jumps: Vec<(Operator, f64)>,
}

impl Lindbladian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ℒρ` for Hermitian `ρ`; uses `ρK† = (Kρ)†` and `LρL† = L(Lρ)†`, so the
    /// result is exactly Hermitian.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        self.apply_into(rho, &mut out);
        out
    }

    pub fn apply_into(&self, rho: &CMatrix, out: &mut CMatrix) {
        let kr = self.k.left(rho);
        let n = self.dim;
        let ks = kr.as_slice();
        // -i(X - X†), column-major
        for (j, col) in out.as_mut_slice().chunks_exact_mut(n).enumerate() {
            for (i, o) in col.iter_mut().enumerate() {
                let d = ks[j * n + i] - ks[i * n + j].conj();
                *o = C64::new(d.im, -d.re);
            }
        }
        for (l, c) in &self.jumps {
            let lr = l.left(rho).adjoint();
            l.left_acc(&lr, real(*c), out);
        }
    }
}

/// Tunneling dephasing term `A = B̂₀τ¹` in the lab frame with the rate that
/// makes the initial spin flow equal `½ G₁(0) <B̂₀²>`.
pub const TUNNELING_RATE_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SosGeneratorOptions {
    pub include_tunneling: bool,
    /// Multiplies `G₁(0)` in the `B̂₀τ¹` double commutator.
    pub tunneling_rate_factor: f64,
}

impl Default for SosGeneratorOptions {
    fn default() -> Self {
        SosGeneratorOptions {
            include_tunneling: false,
            tunneling_rate_factor: TUNNELING_RATE_FACTOR,
        }
    }
}

impl SosGeneratorOptions {
    pub fn with_tunneling() -> Self {
        SosGeneratorOptions {
            include_tunneling: true,
            ..Self::default()
        }
    }
}

/// SOS master-equation generator on spin⊗oscillator: `H = ω₀b†b`, damping
/// by `b` at `γ`, pumping by `b†` at `γe^{-ω₀/T}` (KMS), spin dephasing `τ³`
/// at `Γ`, and optionally the tunneling term.
pub fn build_sos_generator(
    params: &SosParams,
    rep: &FockRep,
    options: SosGeneratorOptions,
) -> Result<GeneratorSpec> {
    params.validate()?;
    let rates = crate::model::derive_rates(params);
    let h = sos_hamiltonian(params, rep)?;
    let b = dressed_annihilation(params, rep);
    let tau3 = kron(&sigma3(), &rep.identity());
    let mut spec = GeneratorSpec::new(h)?
        .with_jump(b.clone(), rates.gamma)?
        .with_jump(b.adjoint(), rates.gamma_up)?
        .with_dephasing(tau3, rates.big_gamma)?;
    if options.include_tunneling && params.g_1_0 > 0.0 {
        spec = spec.with_dephasing(
            tunneling_coupling(params, rep),
            options.tunneling_rate_factor * params.g_1_0,
        )?;
    }
    Ok(spec)
}
