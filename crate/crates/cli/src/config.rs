use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Overlays `overrides` on `defaults`; keys unknown to the defaults are errors
/// so that typos never pass silently.
pub fn merge(defaults: &Value, overrides: &Value, command: &str) -> Result<Value, ConfigError> {
    let mut out = defaults
        .as_object()
        .cloned()
        .expect("defaults are an object");
    let Some(over) = overrides.as_object() else {
        return Err(ConfigError("config must be a JSON object".into()));
    };
    for (k, v) in over {
        if !out.contains_key(k) {
            let mut known: Vec<&str> = out.keys().map(String::as_str).collect();
            known.sort_unstable();
            return Err(ConfigError(format!(
                "unknown field `{k}` for `{command}` (known: {})",
                known.join(", ")
            )));
        }
        out.insert(k.clone(), v.clone());
    }
    Ok(Value::Object(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

/// `param:min:max:count:lin|log`
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl FromStr for Sweep {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |why: &str| ConfigError(format!("sweep `{s}`: {why} (expected param:min:max:count:lin|log)"));
        let [param, min, max, count, spacing] = parts[..] else {
            return Err(bad("wrong number of fields"));
        };
        let num = |x: &str, what: &str| x.parse::<f64>().map_err(|_| bad(&format!("{what} is not a number")));
        let (min, max) = (num(min, "min")?, num(max, "max")?);
        let count: usize = count.parse().map_err(|_| bad("count is not an integer"))?;
        let spacing = match spacing {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            _ => return Err(bad("spacing must be lin or log")),
        };
        if param.is_empty() {
            return Err(bad("empty parameter name"));
        }
        if !(min < max) {
            return Err(bad("min must be below max"));
        }
        if count < 2 {
            return Err(bad("count must be at least 2"));
        }
        if spacing == Spacing::Log && min <= 0.0 {
            return Err(bad("log spacing needs min > 0"));
        }
        Ok(Sweep {
            param: param.to_string(),
            min,
            max,
            count,
            spacing,
        })
    }
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                match self.spacing {
                    Spacing::Lin => self.min + (self.max - self.min) * s,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * s).exp(),
                }
            })
            .collect()
    }
}

/// Cartesian product of the sweeps, first sweep slowest.
pub fn grid(sweeps: &[Sweep]) -> Vec<Vec<(String, f64)>> {
    let mut points = vec![vec![]];
    for s in sweeps {
        let values = s.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push((s.param.clone(), v));
                    q
                })
            })
            .collect();
    }
    points
}

pub fn apply_point(config: &Value, point: &[(String, f64)], command: &str) -> Result<Value, ConfigError> {
    let mut over = Map::new();
    for (k, v) in point {
        over.insert(k.clone(), Value::from(*v));
    }
    merge(config, &Value::Object(over), command)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_and_expands_sweeps() {
        let s: Sweep = "D:0.5:2:4:lin".parse().unwrap();
        assert_eq!(s.values(), vec![0.5, 1.0, 1.5, 2.0]);
        let l: Sweep = "T:0.01:100:5:log".parse().unwrap();
        let v = l.values();
        assert!((v[2] - 1.0).abs() < 1e-12 && (v[4] - 100.0).abs() < 1e-9);
        for bad in ["D:1:0:3:lin", "D:0:1:1:lin", "D:0:1:3:log", "D:0:1:3", "D:a:1:3:lin", "D:0:1:3:cubic"] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_is_row_major() {
        let a: Sweep = "x:0:1:2:lin".parse().unwrap();
        let b: Sweep = "y:0:2:3:lin".parse().unwrap();
        let g = grid(&[a, b]);
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], vec![("x".to_string(), 0.0), ("y".to_string(), 1.0)]);
    }

    #[test]
    fn merge_rejects_unknown_keys() {
        let d = json!({"D": 1.0, "T": 0.0});
        assert_eq!(merge(&d, &json!({"T": 2.0}), "x").unwrap(), json!({"D": 1.0, "T": 2.0}));
        let e = merge(&d, &json!({"Dee": 2.0}), "x").unwrap_err();
        assert!(e.0.contains("`Dee`"));
    }
}
