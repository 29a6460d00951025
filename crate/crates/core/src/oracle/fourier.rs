use std::f64::consts::PI;

use crate::error::{Result, SosError};
use crate::linalg::{max_abs, CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierOptions {
    pub samples: usize,
    pub max_samples: usize,
    /// Largest change allowed when the sample count doubles.
    pub tol: f64,
}

impl Default for FourierOptions {
    fn default() -> Self {
        FourierOptions {
            samples: 256,
            max_samples: 8192,
            tol: 1e-8,
        }
    }
}

/// `(ω₀/2π) ∫_0^{2π/ω₀} e^{-imω₀t} V(t) dt` by the periodic trapezoid rule.
///
/// The sample count doubles (reusing earlier samples) until the estimate moves
/// by less than `tol`; if that never happens an aliasing error is returned.
pub fn fourier_component(
    family: impl Fn(f64) -> CMatrix,
    m: i32,
    omega0: f64,
    options: FourierOptions,
) -> Result<CMatrix> {
    if !(omega0 > 0.0) {
        return Err(SosError::param("omega0", "must be > 0"));
    }
    if options.samples < 2 {
        return Err(SosError::param("samples", "need at least 2"));
    }
    let period = 2.0 * PI / omega0;
    let term = |t: f64| family(t) * C64::from_polar(1.0, -(m as f64) * omega0 * t);
    // sum over samples at k·period/n
    let mut n = options.samples;
    let mut sum = (0..n)
        .map(|k| term(k as f64 * period / n as f64))
        .reduce(|a, b| a + b)
        .expect("samples >= 2");
    let mut estimate = &sum / C64::from(n as f64);
    loop {
        // midpoints of the current grid
        let step = period / n as f64;
        let extra = (0..n)
            .map(|k| term((k as f64 + 0.5) * step))
            .reduce(|a, b| a + b)
            .expect("samples >= 2");
        sum += extra;
        n *= 2;
        let refined = &sum / C64::from(n as f64);
        let change = max_abs(&(&refined - &estimate));
        estimate = refined;
        if change <= options.tol {
            return Ok(estimate);
        }
        if n >= options.max_samples {
            return Err(SosError::Aliasing { change });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, I};

    #[test]
    fn constant_family() {
        let v = fourier_component(|_| identity(3), 0, 2.0, FourierOptions::default()).unwrap();
        assert!(max_abs(&(v - identity(3))) < 1e-14);
    }

    #[test]
    fn single_harmonic() {
        let w = 1.5;
        let fam = |t: f64| identity(2) * (I * w * t).exp();
        let one = fourier_component(fam, 1, w, FourierOptions::default()).unwrap();
        let zero = fourier_component(fam, 0, w, FourierOptions::default()).unwrap();
        assert!(max_abs(&(one - identity(2))) < 1e-13);
        assert!(max_abs(&zero) < 1e-13);
    }

    #[test]
    fn aliasing_is_reported() {
        let opts = FourierOptions {
            samples: 4,
            max_samples: 16,
            tol: 1e-8,
        };
        let fam = |t: f64| identity(1) * (I * 40.0 * t).exp() * C64::from(t.sin().exp());
        assert!(matches!(
            fourier_component(fam, 0, 1.0, opts),
            Err(SosError::Aliasing { .. })
        ));
    }
}
