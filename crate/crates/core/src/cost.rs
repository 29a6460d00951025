//! Cost of an N-gate computation: failure probability of forgetful gates and
//! the minimal work needed to keep it below a target.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SosError};
use crate::model::noise_temperature;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;

/// A temperature either in natural units (energy, `k_B = 1`) or tagged as kelvin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Natural(f64),
    Kelvin(f64),
}

impl Temperature {
    pub fn value(self) -> f64 {
        match self {
            Temperature::Natural(v) | Temperature::Kelvin(v) => v,
        }
    }

    pub fn is_kelvin(self) -> bool {
        matches!(self, Temperature::Kelvin(_))
    }

    /// Energy per unit of the value, in joules, when kelvin-tagged.
    fn joules_per_unit(self) -> Option<f64> {
        self.is_kelvin().then_some(K_B)
    }
}

impl FromStr for Temperature {
    type Err = SosError;

    /// `"300K"`, `"300 K"`, `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, kelvin) = match s.strip_suffix(['K', 'k']) {
            Some(rest) => (rest.trim_end(), true),
            None => (s, false),
        };
        let v: f64 = num
            .parse()
            .map_err(|_| SosError::param("theta", format!("cannot parse temperature {s:?}")))?;
        Ok(if kelvin {
            Temperature::Kelvin(v)
        } else {
            Temperature::Natural(v)
        })
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Temperature::Natural(v) => write!(f, "{v}"),
            Temperature::Kelvin(v) => write!(f, "{v}K"),
        }
    }
}

impl Serialize for Temperature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Temperature::Natural(v) => s.serialize_f64(*v),
            Temperature::Kelvin(_) => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Temperature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Temperature::Natural(v)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Inputs of the N-gate cost model. `theta` may be omitted when `omega0` and
/// `T` are given; it is then the noise temperature `ω₀(n̄ + ½)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostInputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Temperature>,
    #[serde(rename = "N")]
    pub n: f64,
    pub delta: f64,
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

impl CostInputs {
    /// The supercomputer scenario: 10²¹ gates at 300 K, `κ = 10⁻⁸`, `δ = 10⁻⁴`.
    pub fn supercomputer() -> Self {
        CostInputs {
            theta: Some(Temperature::Kelvin(300.0)),
            n: 1e21,
            delta: 1e-4,
            kappa: 1e-8,
            omega0: None,
            temperature: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: CostInputs = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.resolved_theta()?;
        check_n(self.n)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(SosError::param("delta", format!("must lie in (0, 1), got {}", self.delta)));
        }
        check_kappa(self.kappa)
    }

    /// `Θ`, given directly or derived from `(ω₀, T)`.
    pub fn resolved_theta(&self) -> Result<Temperature> {
        let theta = match (self.theta, self.omega0, self.temperature) {
            (Some(t), _, _) => t,
            (None, Some(w), Some(t)) => {
                if !(w > 0.0 && t >= 0.0) {
                    return Err(SosError::param("omega0", "need omega0 > 0 and T >= 0 to derive theta"));
                }
                Temperature::Natural(noise_temperature(w, t))
            }
            _ => return Err(SosError::param("theta", "give theta or both omega0 and T")),
        };
        if !(theta.value() > 0.0 && theta.value().is_finite()) {
            return Err(SosError::param("theta", format!("must be > 0, got {theta}")));
        }
        Ok(theta)
    }
}

fn check_n(n: f64) -> Result<()> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(SosError::param("N", format!("must be >= 1, got {n}")));
    }
    Ok(())
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa <= 1.0) {
        return Err(SosError::param("kappa", format!("must lie in (0, 1], got {kappa}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailureProbability {
    pub delta: f64,
    pub ln_delta: f64,
    /// Set when `Nκ⁻¹e^{-W̄/Θ} ≥ 1`: the small-failure assumption is violated and
    /// `delta` is reported as 1.
    pub clamped: bool,
}

/// `δ = N κ⁻¹ e^{-W̄/Θ}` for per-gate work `W̄`, evaluated in log space.
pub fn failure_probability(n: f64, kappa: f64, w_bar: f64, theta: f64) -> Result<FailureProbability> {
    check_n(n)?;
    check_kappa(kappa)?;
    if !(theta > 0.0) {
        return Err(SosError::param("theta", format!("must be > 0, got {theta}")));
    }
    if !(w_bar >= 0.0) {
        return Err(SosError::param("w_bar", format!("must be >= 0, got {w_bar}")));
    }
    let ln_delta = n.ln() - kappa.ln() - w_bar / theta;
    let clamped = ln_delta >= 0.0;
    Ok(FailureProbability {
        delta: if clamped { 1.0 } else { ln_delta.exp() },
        ln_delta,
        clamped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub theta: f64,
    /// `W̄_N = ΘN(ln N + ln 1/δ + ln 1/κ)` in the units of `theta`.
    pub work: f64,
    pub work_per_gate: f64,
    /// Landauer-style comparison `Θ N ln 2`.
    pub landauer_work: f64,
    pub ratio_to_landauer: f64,
    pub work_joules: Option<f64>,
    pub landauer_joules: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn min_total_work(inputs: &CostInputs) -> Result<CostReport> {
    inputs.validate()?;
    let theta = inputs.resolved_theta()?;
    let CostInputs { n, delta, kappa, .. } = *inputs;
    let per_gate = theta.value() * (n.ln() - delta.ln() - kappa.ln());
    let work = n * per_gate;
    let landauer = theta.value() * n * LN_2;
    let mut warnings = vec![];
    // the estimate assumes δκ ≫ 1/N
    if delta.ln() + kappa.ln() <= -n.ln() {
        warnings.push(format!(
            "delta*kappa = {:.3e} is not much larger than 1/N = {:.3e}; the estimate is outside its validity range",
            delta * kappa,
            1.0 / n
        ));
    }
    let joules = theta.joules_per_unit();
    Ok(CostReport {
        theta: theta.value(),
        work,
        work_per_gate: per_gate,
        landauer_work: landauer,
        ratio_to_landauer: work / landauer,
        work_joules: joules.map(|j| work * j),
        landauer_joules: joules.map(|j| landauer * j),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kelvin_tags() {
        assert_eq!("300K".parse::<Temperature>().unwrap(), Temperature::Kelvin(300.0));
        assert_eq!(" 4.2 k".parse::<Temperature>().unwrap(), Temperature::Kelvin(4.2));
        assert_eq!("2".parse::<Temperature>().unwrap(), Temperature::Natural(2.0));
        assert!("hot".parse::<Temperature>().is_err());
    }

    #[test]
    fn single_gate_reductions() {
        let p = failure_probability(1.0, 1.0, LN_2, 1.0).unwrap();
        assert!((p.delta - 0.5).abs() < 1e-15 && !p.clamped);
        assert_eq!(failure_probability(1.0, 1.0, 1e6, 1.0).unwrap().delta, 0.0);
        let clamped = failure_probability(10.0, 0.1, 0.0, 1.0).unwrap();
        assert!(clamped.clamped && clamped.delta == 1.0);
    }

    #[test]
    fn log_space_example() {
        let p = failure_probability(1e6, 1e-8, 40.0, 1.0).unwrap();
        assert!((p.delta / 4.248_354_255_291_589e-4 - 1.0).abs() < 1e-12, "{}", p.delta);
    }
}
