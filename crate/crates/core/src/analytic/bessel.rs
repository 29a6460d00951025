//! Exponentially scaled modified Bessel function of order zero.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 20.0;

/// `e^{-x} I₀(x)` for `x ≥ 0`; power series below 20, asymptotic expansion above.
pub fn i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_LIMIT {
        let h = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        while term > 1e-17 * sum {
            term *= h / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // e^{-x} I₀(x) ~ (2πx)^{-1/2} Σ ((2k-1)!!)² / (k! (8x)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
            if next >= term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

/// `ln I₀(x)`, finite for arguments where `I₀` itself overflows.
pub fn ln_i0(x: f64) -> f64 {
    x.abs() + i0_scaled(x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trapezoid rule on `(1/π)∫₀^π e^{x(cos θ - 1)} dθ`, spectrally accurate
    /// for periodic integrands.
    fn quadrature(x: f64) -> f64 {
        let n = 2000;
        let h = PI / n as f64;
        let mut s = 0.5 * (1.0 + (-2.0 * x).exp());
        for k in 1..n {
            s += (x * ((k as f64 * h).cos() - 1.0)).exp();
        }
        s * h / PI
    }

    #[test]
    fn origin() {
        assert_eq!(i0_scaled(0.0), 1.0);
        assert_eq!(ln_i0(0.0), 0.0);
    }

    #[test]
    fn matches_integral_representation() {
        for &x in &[0.1, 1.0, 4.0, 12.5, 19.9, 20.1, 35.0, 120.0, 900.0] {
            let want = quadrature(x);
            let got = i0_scaled(x);
            assert!(((got - want) / want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn reference_values() {
        // I₀(1) and I₀(5)
        assert!((i0_scaled(1.0) * 1f64.exp() - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert!((i0_scaled(5.0) * 5f64.exp() - 27.239_871_823_604_45).abs() < 1e-11);
    }

    #[test]
    fn continuous_across_branch_switch() {
        let lo = i0_scaled(SERIES_LIMIT - 1e-12);
        let hi = i0_scaled(SERIES_LIMIT + 1e-12);
        assert!(((lo - hi) / lo).abs() < 1e-13);
    }
}
