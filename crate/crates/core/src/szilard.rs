//! Quantum Szilard engine: a two-level system with `H(t) = (E₀/2)(f² I - f σ³)`
//! powered by a measurement that errs with probability `ε`.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Result, SosError};
use crate::optimize::{golden_section_max, integrate};

/// Entropy `S(ε) = -ε ln ε - (1-ε) ln(1-ε)` in nats.
pub fn binary_entropy(eps: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    term(eps) + term(1.0 - eps)
}

fn check_temperature(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(SosError::param("T", format!("must be > 0, got {t}")));
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&eps) {
        return Err(SosError::param("epsilon", format!("must lie in [0, 1/2], got {eps}")));
    }
    Ok(())
}

/// Quasistatic work `T[ln 2 - ln(e^{-E₀/T} + 1)]` of a perfectly informed cycle.
pub fn w_se(e0: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    Ok(t * (LN_2 - (-e0 / t).exp().ln_1p()))
}

/// Net work `w_se(E₀) - εE₀` when stage iii pays `E₀` with probability `ε`.
pub fn w_se_faulty(e0: f64, t: f64, eps: f64) -> Result<f64> {
    check_epsilon(eps)?;
    Ok(w_se(e0, t)? - eps * e0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorkMaximum {
    /// Optimal level shift; `None` when the work keeps growing with `E₀` (`ε = 0`).
    pub e0_star: Option<f64>,
    pub work: f64,
}

/// Closed-form optimum `E₀* = T ln((1-ε)/ε)`, `W = T[ln 2 - S(ε)]`.
pub fn w_se_max(eps: f64, t: f64) -> Result<WorkMaximum> {
    check_epsilon(eps)?;
    check_temperature(t)?;
    let e0_star = if eps == 0.0 {
        None
    } else {
        Some(t * ((1.0 - eps) / eps).ln())
    };
    Ok(WorkMaximum {
        e0_star,
        work: t * (LN_2 - binary_entropy(eps)),
    })
}

/// Golden-section maximization of [`w_se_faulty`] over `E₀ ∈ [0, 60T]`.
pub fn w_se_max_numeric(eps: f64, t: f64) -> Result<WorkMaximum> {
    check_epsilon(eps)?;
    check_temperature(t)?;
    if eps == 0.0 {
        return Ok(WorkMaximum {
            e0_star: None,
            work: t * LN_2,
        });
    }
    let f = |e0: f64| w_se_faulty(e0, t, eps).unwrap_or(f64::NEG_INFINITY);
    let (e0, w) = golden_section_max(f, 0.0, 60.0 * t, 1e-9 * t)?;
    Ok(WorkMaximum {
        e0_star: Some(e0),
        work: w,
    })
}

/// Efficiency `η(ε) = (T/Θ)(ln 2 - S(ε))/(-ln ε)`.
pub fn efficiency(eps: f64, t: f64, theta: f64) -> Result<f64> {
    check_temperature(t)?;
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(SosError::param("epsilon", format!("must lie in (0, 1/2], got {eps}")));
    }
    if !(theta > 0.0) {
        return Err(SosError::param("theta", format!("must be > 0, got {theta}")));
    }
    Ok((t / theta) * (LN_2 - binary_entropy(eps)) / (-eps.ln()))
}

pub const EPS_LOWER: f64 = 1e-6;
pub const EPS_UPPER: f64 = 0.5 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyMaximum {
    pub eps_bar: f64,
    pub eta_bar: f64,
}

/// Maximizes `η` over `ε ∈ (10⁻⁶, ½ - 10⁻⁶)`: a 64-point log-spaced pre-scan
/// brackets the peak, golden-section search refines it.
pub fn maximize_efficiency(t: f64, theta: f64) -> Result<EfficiencyMaximum> {
    let eta = |e: f64| efficiency(e, t, theta).unwrap_or(f64::NEG_INFINITY);
    let n = 64;
    let (la, lb) = (EPS_LOWER.ln(), EPS_UPPER.ln());
    let grid: Vec<f64> = (0..n)
        .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
        .collect();
    let values: Vec<f64> = grid.iter().map(|&e| eta(e)).collect();
    let best = (0..n)
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("non-empty grid");
    // the scan must show a single interior peak
    let rising = values[..=best].windows(2).all(|w| w[1] >= w[0]);
    let falling = values[best..].windows(2).all(|w| w[1] <= w[0]);
    if !(rising && falling) || best == 0 || best == n - 1 {
        return Err(SosError::Optimizer(
            "efficiency is not unimodal on the scan grid".into(),
        ));
    }
    let (eps_bar, eta_bar) = golden_section_max(eta, grid[best - 1], grid[best + 1], 1e-9)?;
    Ok(EfficiencyMaximum { eps_bar, eta_bar })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SzilardCycle {
    #[serde(rename = "T")]
    pub temperature: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub epsilon: f64,
}

impl SzilardCycle {
    pub fn new(temperature: f64, e0: f64, epsilon: f64) -> Result<Self> {
        check_temperature(temperature)?;
        check_epsilon(epsilon)?;
        if !(e0 >= 0.0 && e0.is_finite()) {
            return Err(SosError::param("E0", format!("must be >= 0, got {e0}")));
        }
        Ok(SzilardCycle {
            temperature,
            e0,
            epsilon,
        })
    }
}

/// Work done on, heat given to, and energy change of the TLS during one stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StageBalance {
    pub work: f64,
    pub heat: f64,
    pub energy_change: f64,
}

impl StageBalance {
    pub fn closure_error(&self) -> f64 {
        (self.energy_change - self.work - self.heat).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleLedger {
    /// Work delivered to the outside over the cycle, `-(W_iii + W_iv)`.
    pub work_extracted: f64,
    /// Expected work `εE₀` paid in stage iii.
    pub work_invested_stage_iii: f64,
    pub heat_absorbed: f64,
    pub energy_change: f64,
    /// Stages i–iv.
    pub stages: [StageBalance; 4],
    /// Upper-level population after stage iv.
    pub final_excited_population: f64,
    pub steps: usize,
}

impl CycleLedger {
    /// Largest `|ΔE - W - Q|` over the stages and the whole cycle.
    pub fn closure_error(&self) -> f64 {
        let total = StageBalance {
            work: self.stages.iter().map(|s| s.work).sum(),
            heat: self.heat_absorbed,
            energy_change: self.energy_change,
        };
        self.stages
            .iter()
            .map(StageBalance::closure_error)
            .fold(total.closure_error(), f64::max)
    }
}

/// Runs stages i–iv. Stage iv lowers `f` linearly from 1 to 0 over `ramp_time`
/// while the TLS relaxes by a detailed-balance population equation (downward
/// rate `r`, upward `r e^{-E₀f/T}`); `W = ∫ Tr(ρ dH)` and `Q = ∫ Tr(dρ H)` are
/// integrated alongside the populations.
pub fn quasistatic_cycle(cycle: &SzilardCycle, ramp_time: f64, rate: f64) -> Result<CycleLedger> {
    if !(ramp_time >= 0.0 && ramp_time.is_finite()) {
        return Err(SosError::param("ramp_time", format!("must be >= 0, got {ramp_time}")));
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(SosError::param("r", format!("must be > 0, got {rate}")));
    }
    let SzilardCycle {
        temperature: t,
        e0,
        epsilon: eps,
    } = *cycle;
    // Level energies of the favoured (+) and disfavoured (−) states at field f.
    let e_plus = |f: f64| 0.5 * e0 * (f * f - f);
    let e_minus = |f: f64| 0.5 * e0 * (f * f + f);

    // i: f = 0, ρ = I/2, H = 0. ii: measurement at H = 0, no energy exchange.
    let stage_i = StageBalance::default();
    let stage_ii = StageBalance::default();
    // iii: sudden f: 0 → 1; the wrongly recorded branch (weight ε) sits in the
    // raised level, which costs E₀.
    let stage_iii = StageBalance {
        work: eps * e0,
        heat: 0.0,
        energy_change: eps * e0,
    };
    let e_start = eps * e_minus(1.0) + (1.0 - eps) * e_plus(1.0);

    let (y, steps) = if ramp_time == 0.0 {
        // sudden quench: populations frozen
        (vec![eps, eps * (e_minus(0.0) - e_minus(1.0)) + (1.0 - eps) * (e_plus(0.0) - e_plus(1.0)), 0.0], 0)
    } else {
        let df = -1.0 / ramp_time;
        let rhs = |s: f64, y: &[f64]| {
            let f = 1.0 - s / ramp_time;
            let p_minus = y[0];
            let gap = e0 * f;
            let flow = -rate * p_minus + rate * (-gap / t).exp() * (1.0 - p_minus);
            let de_plus = 0.5 * e0 * (2.0 * f - 1.0) * df;
            let de_minus = 0.5 * e0 * (2.0 * f + 1.0) * df;
            vec![
                flow,
                p_minus * de_minus + (1.0 - p_minus) * de_plus,
                // dQ = Σ E_i dp_i with dp₊ = -dp₋
                flow * (e_minus(f) - e_plus(f)),
            ]
        };
        integrate(rhs, 0.0, ramp_time, &[eps, 0.0, 0.0], 1e-12, 1e-15)?
    };
    let p_final = y[0];
    let e_end = p_final * e_minus(0.0) + (1.0 - p_final) * e_plus(0.0);
    let stage_iv = StageBalance {
        work: y[1],
        heat: y[2],
        energy_change: e_end - e_start,
    };
    let stages = [stage_i, stage_ii, stage_iii, stage_iv];
    Ok(CycleLedger {
        work_extracted: -(stage_iii.work + stage_iv.work),
        work_invested_stage_iii: stage_iii.work,
        heat_absorbed: stages.iter().map(|s| s.heat).sum(),
        energy_change: stages.iter().map(|s| s.energy_change).sum(),
        stages,
        final_excited_population: p_final,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(w_se(0.0, 1.0).unwrap(), 0.0);
        assert!((w_se(1.0, 1.0).unwrap() - 0.379_885_493_041_722_4).abs() < 1e-14);
        let sat = w_se(40.0, 1.0).unwrap();
        assert!(((sat - LN_2) / LN_2).abs() < 1e-15 * 1e2);
        assert!(w_se(1.0, 0.0).is_err());
    }

    #[test]
    fn faulty_optimum_example() {
        let m = w_se_max(0.06, 1.0).unwrap();
        assert!((m.e0_star.unwrap() - (0.94f64 / 0.06).ln()).abs() < 1e-15);
        assert!((m.work - 0.466_179_658_059_341).abs() < 1e-13);
        let n = w_se_max_numeric(0.06, 1.0).unwrap();
        assert!((n.work - m.work).abs() < 1e-8);
        assert!((n.e0_star.unwrap() - m.e0_star.unwrap()).abs() < 1e-4);
    }

    #[test]
    fn limits_of_the_optimum() {
        let perfect = w_se_max(0.0, 2.0).unwrap();
        assert_eq!(perfect.e0_star, None);
        assert!((perfect.work - 2.0 * LN_2).abs() < 1e-15);
        assert!(w_se_max(0.5, 1.0).unwrap().work.abs() < 1e-15);
        assert!(w_se_max(0.6, 1.0).is_err());
    }

    #[test]
    fn efficiency_endpoints_vanish() {
        assert!(efficiency(EPS_LOWER, 1.0, 1.0).unwrap() < 1e-3 * 60.0);
        assert!(efficiency(EPS_UPPER, 1.0, 1.0).unwrap() < 1e-3);
        assert!(efficiency(0.5, 1.0, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn efficiency_peak() {
        let m = maximize_efficiency(1.0, 1.0).unwrap();
        assert!((m.eps_bar - 0.06).abs() < 0.01, "{m:?}");
        assert!((m.eta_bar - 0.17).abs() < 0.01, "{m:?}");
        let half = maximize_efficiency(1.0, 2.0).unwrap();
        assert!((half.eta_bar - 0.5 * m.eta_bar).abs() < 1e-12);
        assert!((half.eps_bar - m.eps_bar).abs() < 1e-6);
    }

    #[test]
    fn sudden_quench_extracts_nothing() {
        let c = SzilardCycle::new(1.0, 1.0, 0.0).unwrap();
        let l = quasistatic_cycle(&c, 0.0, 1.0).unwrap();
        assert!(l.work_extracted.abs() < 1e-15);
        assert!(l.closure_error() < 1e-12);
    }
}
