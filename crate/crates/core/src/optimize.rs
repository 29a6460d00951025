//! Scalar maximization and a small adaptive integrator for low-dimensional ODEs.

use crate::error::{Result, SosError};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// stopping when the bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    if !(a < b) || !(tol > 0.0) {
        return Err(SosError::Optimizer(format!("bad bracket [{a}, {b}] or tolerance {tol}")));
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iters = 0;
    while hi - lo > tol {
        iters += 1;
        if iters > 500 {
            return Err(SosError::Optimizer("golden-section search did not converge".into()));
        }
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(SosError::Optimizer(format!("objective not finite near x = {x1}")));
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)))
}

/// Dormand–Prince 5(4) for `dy/dt = rhs(t, y)` on `[t0, t1]` with mixed
/// absolute/relative error control; returns `y(t1)` and the number of accepted steps.
pub fn integrate(
    rhs: impl Fn(f64, &[f64]) -> Vec<f64>,
    t0: f64,
    t1: f64,
    y0: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<(Vec<f64>, usize)> {
    const A: [&[f64]; 6] = [
        &[1.0 / 5.0],
        &[3.0 / 40.0, 9.0 / 40.0],
        &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
        &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
        &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
        &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok((y, 0));
    }
    let mut h = span * 1e-3;
    let mut steps = 0;
    let mut k: Vec<Vec<f64>> = vec![rhs(t, &y)];
    while t < t1 {
        if steps > 10_000_000 {
            return Err(SosError::Integration {
                t,
                reason: "step budget exhausted".into(),
                steps,
                rejected: 0,
            });
        }
        let last = t + h >= t1;
        let hs = if last { t1 - t } else { h };
        k.truncate(1);
        let mut stage = vec![0.0; n];
        for s in 0..6 {
            for i in 0..n {
                stage[i] = y[i] + hs * A[s].iter().zip(&k).map(|(a, kj)| a * kj[i]).sum::<f64>();
            }
            k.push(rhs(t + C[s] * hs, &stage));
        }
        let mut err: f64 = 0.0;
        for i in 0..n {
            let e = hs * E.iter().zip(&k).map(|(w, kj)| w * kj[i]).sum::<f64>();
            let sc = atol + rtol * y[i].abs().max(stage[i].abs());
            err = err.max((e / sc).abs());
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = stage;
            let fsal = k.pop().expect("seven stages");
            k.clear();
            k.push(fsal);
            steps += 1;
            if !last {
                h = hs * factor;
            }
        } else {
            h = hs * factor.min(1.0);
            if h < 1e-15 * span {
                return Err(SosError::Integration {
                    t,
                    reason: "step size underflow".into(),
                    steps,
                    rejected: 0,
                });
            }
        }
    }
    Ok((y, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 4.0, 1e-10).unwrap();
        // flat peak: x is only determined to ~sqrt(eps)
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_bracket() {
        assert!(golden_section_max(|x| x, 1.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn exponential_and_oscillator() {
        let (y, _) = integrate(|_, y| vec![-y[0]], 0.0, 3.0, &[1.0], 1e-12, 1e-14).unwrap();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-12);
        let (y, _) =
            integrate(|_, y| vec![y[1], -y[0]], 0.0, 10.0, &[1.0, 0.0], 1e-12, 1e-14).unwrap();
        assert!((y[0] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn time_dependent_rhs() {
        let (y, _) = integrate(|t, _| vec![2.0 * t], 1.0, 2.0, &[0.0], 1e-12, 1e-14).unwrap();
        assert!((y[0] - 3.0).abs() < 1e-13);
    }
}
