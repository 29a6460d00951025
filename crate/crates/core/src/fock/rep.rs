use crate::error::{Result, SosError};
use crate::linalg::{real, CMatrix};

/// Default bound on the trace lost to truncation by any constructed state.
pub const TRUNCATION_TOL: f64 = 1e-9;

/// Truncated Fock representation of one oscillator with cached ladder operators.
///
/// The truncated commutator `[a, a†]` equals the identity except for its last
/// diagonal entry, which is `-(dim - 1)`.
#[derive(Debug, Clone)]
pub struct FockRep {
    dim: usize,
    a: CMatrix,
    adag: CMatrix,
    number: CMatrix,
}

impl FockRep {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(SosError::InvalidRepresentation(format!(
                "Fock dimension must be at least 2, got {dim}"
            )));
        }
        let mut a = CMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = real((n as f64).sqrt());
        }
        let adag = a.adjoint();
        let number = CMatrix::from_fn(dim, dim, |i, j| if i == j { real(i as f64) } else { real(0.0) });
        Ok(FockRep { dim, a, adag, number })
    }

    /// Representation sized by [`auto_dim`].
    pub fn auto(alpha_max: f64, n_bar: f64) -> Self {
        FockRep::new(auto_dim(alpha_max, n_bar)).expect("auto_dim is at least 2")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn adag(&self) -> &CMatrix {
        &self.adag
    }

    pub fn number(&self) -> &CMatrix {
        &self.number
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.dim, self.dim)
    }
}

/// Smallest dimension allowed by the truncation rule
/// `ceil((|alpha|_max + 4 sqrt(n_bar + 1))^2) + 8`.
pub fn auto_dim(alpha_max: f64, n_bar: f64) -> usize {
    let reach = alpha_max.abs() + 4.0 * (n_bar.max(0.0) + 1.0).sqrt();
    (reach * reach).ceil() as usize + 8
}

/// Bose occupation `1/(e^{omega0/T} - 1)`; zero at `T = 0`.
pub fn bose_occupation(omega0: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        0.0
    } else {
        1.0 / (omega0 / temperature).exp_m1()
    }
}
