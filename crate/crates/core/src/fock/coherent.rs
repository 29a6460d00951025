//! Coherent vectors, Weyl operators and displaced thermal (biased Gibbs) states.
//!
//! Two displacement conventions meet here. The Weyl operator follows the
//! model's convention `W(alpha) = exp{alpha a - conj(alpha) a†}`, while the
//! exact matrix elements in [`displacement_elements`] use the common
//! `D(beta) = exp{beta a† - conj(beta) a}`; the two are related by
//! `W(alpha) = D(-conj(alpha))`, so `W(alpha)|0> = |-conj(alpha)>`.

use crate::error::{Result, SosError};
use crate::fock::rep::{bose_occupation, FockRep, TRUNCATION_TOL};
use crate::fock::state::{QuantumState, Space};
use crate::linalg::{expm, CMatrix, CVector, C64};

/// Coherent state components `e^{-|alpha|^2/2} alpha^n / sqrt(n!)`, not
/// renormalized after truncation.
pub fn coherent_vector(alpha: C64, rep: &FockRep) -> Result<CVector> {
    coherent_vector_with_tol(alpha, rep, TRUNCATION_TOL)
}

pub fn coherent_vector_with_tol(alpha: C64, rep: &FockRep, tol: f64) -> Result<CVector> {
    let n = rep.dim();
    let mut v = CVector::zeros(n);
    v[0] = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for k in 1..n {
        v[k] = v[k - 1] * alpha / (k as f64).sqrt();
    }
    let deficit = 1.0 - v.norm_squared();
    if deficit > tol {
        return Err(SosError::Truncation { dim: n, deficit });
    }
    Ok(v)
}

/// `W(alpha) = exp{alpha a - conj(alpha) a†}` built from the truncated ladder
/// operators, hence exactly unitary; matrix elements are accurate away from the
/// truncation edge.
pub fn weyl_operator(alpha: C64, rep: &FockRep) -> CMatrix {
    let generator = rep.a() * alpha - rep.adag() * alpha.conj();
    expm(&generator)
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for k in 1..=n {
        out.push(out[k - 1] + (k as f64).ln());
    }
    out
}

/// Generalized Laguerre values `L_j^{(k)}(x)` for `j = 0..len` by forward recurrence.
fn laguerre_row(k: usize, x: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let kf = k as f64;
    out.push(1.0);
    if len > 1 {
        out.push(1.0 + kf - x);
    }
    for j in 1..len.saturating_sub(1) {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + kf - x) * out[j] - (jf + kf) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Exact matrix elements `<m|D(beta)|n>` of the (infinite-dimensional)
/// displacement operator `D(beta) = exp{beta a† - conj(beta) a}` for
/// `m < rows`, `n < cols`.
pub fn displacement_elements(beta: C64, rows: usize, cols: usize) -> CMatrix {
    let x = beta.norm_sqr();
    if x == 0.0 {
        return CMatrix::from_fn(rows, cols, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
    }
    let lnf = ln_factorials(rows.max(cols));
    let ln_abs = x.sqrt().ln();
    let phase = beta / x.sqrt();
    let neg_conj_phase = -phase.conj();
    let mut out = CMatrix::zeros(rows, cols);

    let element = |lo: usize, hi: usize, lag: f64, ph: C64| -> C64 {
        if lag == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let k = hi - lo;
        let log_mag = 0.5 * (lnf[lo] - lnf[hi]) + k as f64 * ln_abs - 0.5 * x + lag.abs().ln();
        ph.powu(k as u32) * (lag.signum() * log_mag.exp())
    };

    // m >= n: L_n^{(m-n)}
    for k in 0..rows {
        let len = cols.min(rows - k);
        if len == 0 {
            continue;
        }
        let lag = laguerre_row(k, x, len);
        for n in 0..len {
            out[(n + k, n)] = element(n, n + k, lag[n], phase);
        }
    }
    // m < n: L_m^{(n-m)}, phase (-conj(beta))^k
    for k in 1..cols {
        let len = rows.min(cols - k);
        if len == 0 {
            continue;
        }
        let lag = laguerre_row(k, x, len);
        for m in 0..len {
            out[(m, m + k)] = element(m, m + k, lag[m], neg_conj_phase);
        }
    }
    out
}

/// A displaced thermal state of the oscillator: the pointer state
/// `(1 - e^{-omega0/T}) exp{-(omega0/T)(a† - conj(alpha))(a - alpha)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedThermal {
    pub alpha: C64,
    pub omega0: f64,
    pub temperature: f64,
}

impl DisplacedThermal {
    pub fn new(alpha: C64, omega0: f64, temperature: f64) -> Self {
        DisplacedThermal {
            alpha,
            omega0,
            temperature,
        }
    }

    pub fn n_bar(&self) -> f64 {
        bose_occupation(self.omega0, self.temperature)
    }

    /// Fock dimension given by the auto-truncation rule for this state.
    pub fn auto_rep(&self) -> FockRep {
        let mut rep = FockRep::auto(self.alpha.norm(), self.n_bar());
        while self.deficit(rep.dim()) >= TRUNCATION_TOL {
            rep = FockRep::new(rep.dim() + 8).expect("dimension grows");
        }
        rep
    }

    fn thermal_cutoff(&self) -> usize {
        if self.temperature <= 0.0 {
            return 1;
        }
        let beta = self.omega0 / self.temperature;
        (17.0 * std::f64::consts::LN_10 / beta).ceil() as usize + 1
    }

    fn unnormalized(&self, dim: usize) -> CMatrix {
        if self.temperature <= 0.0 {
            let rep = FockRep::new(dim).expect("caller checks dim");
            let v = coherent_vector_with_tol(self.alpha, &rep, f64::INFINITY)
                .expect("infinite tolerance");
            return &v * v.adjoint();
        }
        let q = (-self.omega0 / self.temperature).exp();
        let cutoff = self.thermal_cutoff();
        let disp = displacement_elements(self.alpha, dim, cutoff);
        let mut weighted = disp.clone();
        let mut p = 1.0 - q;
        for k in 0..cutoff {
            weighted.column_mut(k).scale_mut(p);
            p *= q;
        }
        weighted * disp.adjoint()
    }

    /// Trace lost by truncating this state to `dim` levels.
    pub fn deficit(&self, dim: usize) -> f64 {
        1.0 - self.unnormalized(dim.max(2)).trace().re
    }

    /// Truncated state renormalized to unit trace; fails if more than
    /// [`TRUNCATION_TOL`] of the trace lies beyond the truncation.
    pub fn state(&self, rep: &FockRep) -> Result<QuantumState> {
        self.state_with_tol(rep, TRUNCATION_TOL)
    }

    pub fn state_with_tol(&self, rep: &FockRep, tol: f64) -> Result<QuantumState> {
        let raw = self.unnormalized(rep.dim());
        let tr = raw.trace().re;
        let deficit = 1.0 - tr;
        if deficit > tol {
            return Err(SosError::Truncation {
                dim: rep.dim(),
                deficit,
            });
        }
        let m = crate::linalg::hermitize(&raw).unscale(tr);
        QuantumState::new(m, Space::oscillator(rep.dim()))
    }
}

/// Convenience wrapper for [`DisplacedThermal::state`].
pub fn displaced_thermal_state(spec: &DisplacedThermal, rep: &FockRep) -> Result<QuantumState> {
    spec.state(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::state::trace_distance;
    use crate::linalg::{c, max_abs, real};

    #[test]
    fn vacuum_coherent_is_ground_state() {
        let rep = FockRep::new(10).unwrap();
        let v = coherent_vector(real(0.0), &rep).unwrap();
        assert_eq!(v[0], real(1.0));
        assert!(v.iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coherent_overlap_law() {
        // brute-force component sum against e^{-|alpha-beta|^2}
        let rep = FockRep::new(64).unwrap();
        let labels = [c(0.0, 0.0), c(1.0, -0.5), c(-2.0, 1.5), c(0.3, 2.9), c(-3.0, 0.0)];
        for &a in &labels {
            for &b in &labels {
                let va = coherent_vector(a, &rep).unwrap();
                let vb = coherent_vector(b, &rep).unwrap();
                let overlap: C64 = va.iter().zip(vb.iter()).map(|(x, y)| x.conj() * y).sum();
                let expect = (-(a - b).norm_sqr()).exp();
                assert!((overlap.norm_sqr() - expect).abs() < 1e-8, "{a} {b}");
            }
        }
    }

    #[test]
    fn coherent_mean_photon_number() {
        let rep = FockRep::new(48).unwrap();
        let alpha = c(1.2, -0.7);
        let v = coherent_vector(alpha, &rep).unwrap();
        let n = (v.adjoint() * rep.number() * &v)[(0, 0)].re;
        assert!((n - alpha.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn coherent_truncation_error_reports_deficit() {
        let rep = FockRep::new(10).unwrap();
        match coherent_vector(real(3.0), &rep) {
            Err(SosError::Truncation { dim, deficit }) => {
                assert_eq!(dim, 10);
                assert!(deficit > 0.1);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn weyl_identity_and_inverse() {
        let rep = FockRep::new(40).unwrap();
        assert!(max_abs(&(weyl_operator(real(0.0), &rep) - rep.identity())) < 1e-15);
        let a = c(0.8, -1.1);
        let prod = weyl_operator(a, &rep) * weyl_operator(-a, &rep);
        assert!(max_abs(&(prod - rep.identity())) < 1e-8);
    }

    #[test]
    fn weyl_composition_law_phase() {
        let rep = FockRep::new(64).unwrap();
        let (a, b) = (real(1.0), c(0.0, 1.0));
        let lhs = weyl_operator(a, &rep) * weyl_operator(b, &rep);
        let phase = (0.5 * (a.conj() * b - a * b.conj())).exp();
        let rhs = weyl_operator(a + b, &rep) * phase;
        let interior = 24;
        let diff = lhs.view((0, 0), (interior, interior)) - rhs.view((0, 0), (interior, interior));
        assert!(diff.iter().all(|z| z.norm() < 1e-6));
    }

    #[test]
    fn weyl_maps_vacuum_to_negated_label() {
        let rep = FockRep::new(48).unwrap();
        let alpha = c(0.7, 0.4);
        let w = weyl_operator(alpha, &rep);
        let target = coherent_vector(-alpha.conj(), &rep).unwrap();
        let overlap: C64 = target.iter().zip(w.column(0).iter()).map(|(x, y)| x.conj() * y).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_displacement_elements_match_padded_exponential() {
        let beta = c(1.3, -0.6);
        let big = FockRep::new(90).unwrap();
        // D(beta) = W(-conj(beta))
        let dense = weyl_operator(-beta.conj(), &big);
        let exact = displacement_elements(beta, 30, 30);
        let diff = exact - dense.view((0, 0), (30, 30));
        assert!(diff.iter().all(|z| z.norm() < 1e-10));
        // first column is the coherent vector
        let v = coherent_vector(beta, &FockRep::new(30).unwrap()).unwrap();
        let col = displacement_elements(beta, 30, 1);
        assert!((col.column(0) - v).norm() < 1e-13);
    }

    #[test]
    fn zero_temperature_pointer_is_coherent_projector() {
        let rep = FockRep::new(40).unwrap();
        let d = 1.0;
        let rho = DisplacedThermal::new(real(d), 1.0, 0.0).state(&rep).unwrap();
        let v = coherent_vector(real(d), &rep).unwrap();
        let proj = &v * v.adjoint();
        assert!(max_abs(&(rho.matrix() - proj)) < 1e-9);
    }

    #[test]
    fn thermal_mean_occupation_is_bose() {
        let rep = FockRep::new(64).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            let rho = DisplacedThermal::new(real(0.0), 1.0, t).state(&rep).unwrap();
            let n = rho.expectation(rep.number()).re;
            assert!((n - bose_occupation(1.0, t)).abs() < 1e-6);
        }
    }

    #[test]
    fn displaced_thermal_equals_weyl_conjugated_thermal() {
        let alpha = c(0.9, 0.5);
        let (omega0, t) = (1.0, 1.0);
        let rep = FockRep::new(48).unwrap();
        let direct = DisplacedThermal::new(alpha, omega0, t).state(&rep).unwrap();

        let padded = FockRep::new(140).unwrap();
        let q = (-omega0 / t).exp();
        let thermal = CMatrix::from_fn(140, 140, |i, j| {
            if i == j {
                real((1.0 - q) * q.powi(i as i32))
            } else {
                real(0.0)
            }
        });
        let w = weyl_operator(-alpha.conj(), &padded);
        let conj = &w * thermal * w.adjoint();
        let block = conj.view((0, 0), (48, 48)).into_owned();
        let tr = block.trace().re;
        let other = QuantumState::new(block.unscale(tr), Space::oscillator(48)).unwrap();
        assert!(trace_distance(&direct, &other).unwrap() < 1e-8);
    }

    #[test]
    fn insufficient_dimension_is_truncation_error() {
        let rep = FockRep::new(12).unwrap();
        let r = DisplacedThermal::new(real(1.5), 1.0, 3.0).state(&rep);
        assert!(matches!(r, Err(SosError::Truncation { .. })));
    }

    #[test]
    fn auto_rep_satisfies_deficit_bound() {
        let spec = DisplacedThermal::new(real(1.5), 1.0, 5.0);
        let rep = spec.auto_rep();
        assert!(spec.deficit(rep.dim()) < TRUNCATION_TOL);
        assert!(spec.state(&rep).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn deficit_never_grows_with_dimension(
            re in -2.0f64..2.0, im in -2.0f64..2.0, t in 0.0f64..3.0, dim in 4usize..60,
        ) {
            let spec = DisplacedThermal::new(c(re, im), 1.0, t);
            let d1 = spec.deficit(dim);
            let d2 = spec.deficit(dim + 1);
            proptest::prop_assert!(d2 <= d1 + 1e-13);
        }
    }
}
