//! Density matrices on tensor products of the observed system, the spin and the
//! oscillator, and the distance measures used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SosError};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, psd_sqrt, CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    Observed,
    Spin,
    Oscillator,
}

/// Ordered tensor factors; the first factor is the most significant index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    factors: Vec<(Subsystem, usize)>,
}

impl Space {
    pub fn new(factors: Vec<(Subsystem, usize)>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&(_, d)| d == 0) {
            return Err(SosError::InvalidRepresentation(
                "space needs at least one non-empty factor".into(),
            ));
        }
        for (i, (s, _)) in factors.iter().enumerate() {
            if factors[..i].iter().any(|(t, _)| t == s) {
                return Err(SosError::InvalidRepresentation(format!(
                    "subsystem {s:?} listed twice"
                )));
            }
        }
        Ok(Space { factors })
    }

    pub fn oscillator(n: usize) -> Self {
        Space {
            factors: vec![(Subsystem::Oscillator, n)],
        }
    }

    pub fn spin_oscillator(n: usize) -> Self {
        Space {
            factors: vec![(Subsystem::Spin, 2), (Subsystem::Oscillator, n)],
        }
    }

    pub fn observed_spin_oscillator(n: usize) -> Self {
        Space {
            factors: vec![
                (Subsystem::Observed, 2),
                (Subsystem::Spin, 2),
                (Subsystem::Oscillator, n),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|&(_, d)| d).product()
    }

    pub fn factors(&self) -> &[(Subsystem, usize)] {
        &self.factors
    }

    pub fn factor_dim(&self, s: Subsystem) -> Option<usize> {
        self.factors.iter().find(|(t, _)| *t == s).map(|&(_, d)| d)
    }

    pub fn contains(&self, s: Subsystem) -> bool {
        self.factor_dim(s).is_some()
    }
}

/// Tolerances of the state invariants.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const NEGATIVITY_TOL: f64 = 1e-8;

/// Dense density matrix tagged with its tensor layout.
#[derive(Debug, Clone)]
pub struct QuantumState {
    matrix: CMatrix,
    space: Space,
}

impl QuantumState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, space: Space) -> Result<Self> {
        let state = Self::new_unchecked(matrix, space)?;
        state.validate()?;
        Ok(state)
    }

    /// Only checks that the shape agrees with the space.
    pub fn new_unchecked(matrix: CMatrix, space: Space) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(SosError::DimensionMismatch(format!(
                "matrix is {}x{}, space has dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                space.dim()
            )));
        }
        Ok(QuantumState { matrix, space })
    }

    /// Projector onto a normalized copy of `psi`.
    pub fn pure(psi: &CVector, space: Space) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(SosError::InvalidState("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        QuantumState::new(&v * v.adjoint(), space)
    }

    pub fn validate(&self) -> Result<()> {
        let herm = hermiticity_defect(&self.matrix);
        if herm > HERMITIAN_TOL {
            return Err(SosError::InvalidState(format!(
                "hermiticity defect {herm:.3e}"
            )));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(SosError::InvalidState(format!("trace {tr}")));
        }
        let low = self.min_eigenvalue();
        if low < -NEGATIVITY_TOL {
            return Err(SosError::InvalidState(format!(
                "minimum eigenvalue {low:.3e}"
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (op * &self.matrix).trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    pub fn to_json_value(&self) -> StateJson {
        let n = self.dim();
        let mut real_part = Vec::with_capacity(n * n);
        let mut imag_part = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                real_part.push(self.matrix[(i, j)].re);
                imag_part.push(self.matrix[(i, j)].im);
            }
        }
        StateJson {
            dim: n,
            real_part,
            imag_part,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_value())?)
    }

    /// Parses the `{dim, real_part, imag_part}` layout. Without an explicit
    /// space the state is tagged as a single oscillator.
    pub fn from_json(text: &str, space: Option<Space>) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(text)?;
        let n = raw.dim;
        if raw.real_part.len() != n * n || raw.imag_part.len() != n * n {
            return Err(SosError::DimensionMismatch(format!(
                "expected {} entries per part for dim {n}",
                n * n
            )));
        }
        let matrix = CMatrix::from_fn(n, n, |i, j| {
            C64::new(raw.real_part[i * n + j], raw.imag_part[i * n + j])
        });
        let space = space.unwrap_or_else(|| Space::oscillator(n));
        QuantumState::new(matrix, space)
    }
}

/// Serialized form of a [`QuantumState`]: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateJson {
    pub dim: usize,
    pub real_part: Vec<f64>,
    pub imag_part: Vec<f64>,
}

fn unravel(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

/// Reduced state on the subsystems in `keep`, in the order they appear in the
/// parent space.
pub fn partial_trace(state: &QuantumState, keep: &[Subsystem]) -> Result<QuantumState> {
    for s in keep {
        if !state.space.contains(*s) {
            return Err(SosError::DimensionMismatch(format!(
                "subsystem {s:?} is not part of the state space"
            )));
        }
    }
    let factors = state.space.factors();
    let dims: Vec<usize> = factors.iter().map(|&(_, d)| d).collect();
    let kept: Vec<bool> = factors.iter().map(|(s, _)| keep.contains(s)).collect();
    let reduced_factors: Vec<(Subsystem, usize)> = factors
        .iter()
        .zip(&kept)
        .filter(|(_, &k)| k)
        .map(|(f, _)| *f)
        .collect();
    let reduced_space = Space::new(reduced_factors)?;
    let rd = reduced_space.dim();
    let n = state.dim();

    let reduced_index = |multi: &[usize]| -> usize {
        let mut idx = 0;
        for (k, &m) in multi.iter().enumerate() {
            if kept[k] {
                idx = idx * dims[k] + m;
            }
        }
        idx
    };

    let mut out = CMatrix::zeros(rd, rd);
    let mut mi = vec![0; dims.len()];
    let mut mj = vec![0; dims.len()];
    for i in 0..n {
        unravel(i, &dims, &mut mi);
        let ri = reduced_index(&mi);
        for j in 0..n {
            unravel(j, &dims, &mut mj);
            let traced_equal = (0..dims.len()).all(|k| kept[k] || mi[k] == mj[k]);
            if traced_equal {
                out[(ri, reduced_index(&mj))] += state.matrix[(i, j)];
            }
        }
    }
    QuantumState::new_unchecked(out, reduced_space)
}

/// `½ Σ |λ(a − b)|`.
pub fn trace_distance(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    trace_distance_matrices(a.matrix(), b.matrix())
}

pub fn trace_distance_matrices(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(SosError::DimensionMismatch(format!(
            "trace distance between {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let diff = a - b;
    Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>())
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))` (not squared).
pub fn uhlmann_fidelity(rho: &QuantumState, sigma: &QuantumState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(SosError::DimensionMismatch(format!(
            "fidelity between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let root = psd_sqrt(rho.matrix())?;
    // reject a bad second argument with the same threshold
    psd_sqrt(sigma.matrix())?;
    let inner = &root * sigma.matrix() * &root;
    let values = hermitian_eigenvalues(&inner);
    if values.iter().any(|x| x.is_nan()) {
        return Err(SosError::InvalidState("eigensolver returned NaN in fidelity".into()));
    }
    let f: f64 = values
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron, real};

    fn ket(components: &[C64]) -> CVector {
        CVector::from_column_slice(components)
    }

    #[test]
    fn product_state_partial_trace_returns_factor() {
        let a = QuantumState::pure(&ket(&[real(0.6), c(0.0, 0.8)]), Space::oscillator(2)).unwrap();
        let b = QuantumState::pure(&ket(&[real(1.0), real(1.0), real(0.0)]), Space::oscillator(3))
            .unwrap();
        let joint = QuantumState::new(
            kron(a.matrix(), b.matrix()),
            Space::spin_oscillator(3),
        )
        .unwrap();
        let spin = partial_trace(&joint, &[Subsystem::Spin]).unwrap();
        let osc = partial_trace(&joint, &[Subsystem::Oscillator]).unwrap();
        assert!(trace_distance_matrices(spin.matrix(), a.matrix()).unwrap() < 1e-14);
        assert!(trace_distance_matrices(osc.matrix(), b.matrix()).unwrap() < 1e-14);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let h = 1.0 / 2f64.sqrt();
        let bell = ket(&[real(h), real(0.0), real(0.0), real(h)]);
        let space = Space::new(vec![(Subsystem::Observed, 2), (Subsystem::Spin, 2)]).unwrap();
        let joint = QuantumState::pure(&bell, space).unwrap();
        let red = partial_trace(&joint, &[Subsystem::Spin]).unwrap();
        let mixed = CMatrix::identity(2, 2).scale(0.5);
        assert!(crate::linalg::max_abs(&(red.matrix() - mixed)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_missing_tag() {
        let s = QuantumState::pure(&ket(&[real(1.0), real(0.0)]), Space::oscillator(2)).unwrap();
        assert!(matches!(
            partial_trace(&s, &[Subsystem::Spin]),
            Err(SosError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn distances_for_pure_states() {
        let zero = QuantumState::pure(&ket(&[real(1.0), real(0.0)]), Space::oscillator(2)).unwrap();
        let one = QuantumState::pure(&ket(&[real(0.0), real(1.0)]), Space::oscillator(2)).unwrap();
        assert!(trace_distance(&zero, &zero).unwrap() < 1e-15);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-14);
        assert!((uhlmann_fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        let plus = QuantumState::pure(&ket(&[real(0.6), real(0.8)]), Space::oscillator(2)).unwrap();
        assert!((uhlmann_fidelity(&zero, &plus).unwrap() - 0.6).abs() < 1e-7);
    }

    #[test]
    fn invalid_states_rejected() {
        let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![real(1.1), real(-0.1)]));
        assert!(QuantumState::new(bad, Space::oscillator(2)).is_err());
        let half = CMatrix::identity(2, 2).scale(0.4);
        assert!(QuantumState::new(half, Space::oscillator(2)).is_err());
        let mut skew = CMatrix::identity(2, 2).scale(0.5);
        skew[(0, 1)] = real(0.1);
        assert!(QuantumState::new(skew, Space::oscillator(2)).is_err());
    }

    #[test]
    fn json_layout_round_trip() {
        let s = QuantumState::pure(&ket(&[real(0.6), c(0.0, 0.8)]), Space::oscillator(2)).unwrap();
        let text = s.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["real_part"].as_array().unwrap().len(), 4);
        // row-major: entry (0,1) = 0.6 * conj(0.8i) = -0.48i
        assert!((v["imag_part"][1].as_f64().unwrap() + 0.48).abs() < 1e-15);
        let back = QuantumState::from_json(&text, None).unwrap();
        assert!(crate::linalg::max_abs(&(back.matrix() - s.matrix())) < 1e-15);
    }
}
