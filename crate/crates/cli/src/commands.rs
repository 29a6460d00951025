use serde::Deserialize;
use serde_json::{json, Value};
use sos_core::analytic::{
    propagate_rank1, thermal_v0_squared_bessel, tunneling_rate_finite_t, Rank1Block,
};
use sos_core::cost::{min_total_work, CostInputs};
use sos_core::format::sig12;
use sos_core::measurement::{run_protocol_with, ProtocolOptions};
use sos_core::model::{biased_gibbs_state, derive_rates, ground_state, spin_coherent};
use sos_core::oracle::{build_sos_generator, evolve_with, initial_spin_flow, EvolveOptions, SosGeneratorOptions};
use sos_core::szilard::{
    binary_entropy, efficiency, maximize_efficiency, quasistatic_cycle, w_se_max, EPS_LOWER, EPS_UPPER,
};
use sos_core::{FockRep, ObservedSystem, QuantumState, SosError, SosParams, Space, SzilardCycle, C64};

use crate::output::Section;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(SosError),
    Io(std::io::Error),
}

impl From<SosError> for CliError {
    fn from(e: SosError) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("bad config: {e}"))
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub tol: Option<f64>,
    pub fock_dim: Option<usize>,
}

impl Options {
    fn rep(&self, auto: impl FnOnce() -> FockRep) -> Result<FockRep, CliError> {
        match self.fock_dim {
            Some(n) => Ok(FockRep::new(n)?),
            None => Ok(auto()),
        }
    }
}

fn sos_defaults(g_o_0: f64, g_3_0: f64, g_1_0: f64) -> serde_json::Map<String, Value> {
    let v = json!({
        "omega0": 1.0, "D": 1.0, "T": 0.0,
        "G_o_omega0": 1.0, "G_o_0": g_o_0, "G_3_0": g_3_0, "G_1_0": g_1_0,
    });
    v.as_object().cloned().expect("object")
}

fn with(mut base: serde_json::Map<String, Value>, extra: Value) -> Value {
    for (k, v) in extra.as_object().expect("object") {
        base.insert(k.clone(), v.clone());
    }
    Value::Object(base)
}

fn params(config: &Value) -> Result<SosParams, CliError> {
    let p: SosParams = serde_json::from_value(config.clone())?;
    p.validate()?;
    Ok(p)
}

pub fn defaults(command: &str) -> Value {
    match command {
        "decoherence" => with(
            sos_defaults(0.05, 0.0, 0.0),
            json!({"alpha_re": 0.3, "alpha_im": 0.2, "p_minus": 0.5, "horizon": 10.0, "points": 50}),
        ),
        "tunneling" => with(
            sos_defaults(0.25, 0.1, 1.0),
            json!({"D": [0.25, 0.5, 0.75, 1.0, 1.25, 1.5]}),
        ),
        "measure" => with(
            sos_defaults(0.1, 0.05, 0.0),
            json!({"p_minus": 0.5, "phase": 0.0, "horizon": 30.0, "samples": 100}),
        ),
        "szilard" => json!({
            "T": 1.0, "theta": null, "points": 200,
            "E0": null, "epsilon": 0.0, "ramp_time": 100.0, "r": 1.0,
        }),
        "cost" => {
            let mut v = serde_json::to_value(CostInputs::supercomputer()).expect("serializes");
            let m = v.as_object_mut().expect("object");
            m.insert("omega0".into(), Value::Null);
            m.insert("T".into(), Value::Null);
            v
        }
        _ => json!({}),
    }
}

pub fn run(command: &str, config: &Value, opts: &Options) -> Result<Section, CliError> {
    match command {
        "decoherence" => decoherence(config, opts),
        "tunneling" => tunneling(config, opts),
        "measure" => measure(config, opts),
        "szilard" => szilard(config),
        "cost" => cost(config),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}

#[derive(Deserialize)]
struct DecoherenceExtra {
    alpha_re: f64,
    alpha_im: f64,
    p_minus: f64,
    horizon: f64,
    points: usize,
}

/// Cat state `c₋|-;α> + c₊|+;α>`: closed-form coherence magnitude against the
/// trace norm of the integrated `(-,+)` block.
fn decoherence(config: &Value, opts: &Options) -> Result<Section, CliError> {
    let p = params(config)?;
    let x: DecoherenceExtra = serde_json::from_value(config.clone())?;
    if !(x.horizon > 0.0) || x.points < 1 {
        return Err(CliError::Config("`horizon` must be > 0 and `points` >= 1".into()));
    }
    let sys = ObservedSystem::from_probability(x.p_minus, 0.0)?;
    let alpha = C64::new(x.alpha_re, x.alpha_im);
    let rep = opts.rep(|| p.auto_rep(alpha.norm().max(p.d)))?;
    let n = rep.dim();
    let psi = spin_coherent(-1, alpha, &rep)? * sys.c_minus() + spin_coherent(1, alpha, &rep)? * sys.c_plus();
    let rho = QuantumState::pure(&psi, Space::spin_oscillator(n))?;
    let block = Rank1Block::new(-1, alpha, alpha, 1, sys.c_minus() * sys.c_plus().conj());
    // fail early on T > 0, before the integration
    propagate_rank1(&block, 0.0, &p)?;
    let gen = build_sos_generator(&p, &rep, SosGeneratorOptions::default())?;
    let grid: Vec<f64> = (0..=x.points).map(|k| x.horizon * k as f64 / x.points as f64).collect();
    let mut section = Section::new(&["t", "analytic", "oracle", "abs_diff"]);
    let mut rows = vec![];
    let opts_e = EvolveOptions { store_states: false, ..EvolveOptions::default() };
    let traj = evolve_with(&gen, &rho, &grid, opts_e, |_, t, m| {
        let oracle: f64 = m.view((n, 0), (n, n)).singular_values().iter().sum();
        rows.push((t, oracle));
    })?;
    let mut worst: f64 = 0.0;
    for (t, oracle) in rows {
        let analytic = propagate_rank1(&block, t, &p)?.amp.norm();
        worst = worst.max((analytic - oracle).abs());
        section.rows.push(vec![t, analytic, oracle, (analytic - oracle).abs()]);
    }
    let tol = opts.tol.unwrap_or(1e-5);
    section.notes.push(format!("fock_dim={n} max_abs_diff={} tol={tol:e}", sig12(worst)));
    if worst > tol {
        section.failure = Some(format!("max |analytic - oracle| = {worst:e} exceeds {tol:e}"));
    }
    section.summary = json!({
        "fock_dim": n,
        "max_abs_diff": worst,
        "tol": tol,
        "diagnostics": traj.diagnostics,
    });
    Ok(section)
}

fn tunneling(config: &Value, opts: &Options) -> Result<Section, CliError> {
    let ds: Vec<f64> = match &config["D"] {
        Value::Array(a) => a
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| CliError::Config("`D` entries must be numbers".into())))
            .collect::<Result<_, _>>()?,
        v => vec![v.as_f64().ok_or_else(|| CliError::Config("`D` must be a number or a list".into()))?],
    };
    let tol = opts.tol.unwrap_or(1e-3);
    let mut section = Section::new(&[
        "D", "T", "rate_exact", "rate_leading", "rate_weyl_avg", "rate_oracle", "oracle_over_exact",
    ]);
    let mut worst: f64 = 0.0;
    for d in ds {
        let mut c = config.clone();
        c["D"] = json!(d);
        let p = params(&c)?;
        let rep = opts.rep(|| {
            let auto = p.auto_rep(p.d);
            if auto.dim() >= 64 { auto } else { FockRep::new(64).expect("valid") }
        })?;
        let rates = tunneling_rate_finite_t(&p);
        let weyl_avg = 0.5 * p.g_1_0 * thermal_v0_squared_bessel(p.d, p.omega0, p.temperature);
        let gen = build_sos_generator(&p, &rep, SosGeneratorOptions::with_tunneling())?;
        let rho = if p.temperature > 0.0 {
            biased_gibbs_state(-1, &p, &rep)?
        } else {
            QuantumState::pure(&ground_state(-1, &p, &rep)?, Space::spin_oscillator(rep.dim()))?
        };
        let oracle = initial_spin_flow(&gen, &rho)?;
        let ratio = if rates.exact.rate > 0.0 { oracle / rates.exact.rate } else { f64::NAN };
        if rates.exact.rate > 0.0 {
            worst = worst.max((ratio - 1.0).abs());
        }
        section.rows.push(vec![
            p.d, p.temperature, rates.exact.rate, rates.leading.rate, weyl_avg, oracle, ratio,
        ]);
    }
    section.notes.push(format!("max |oracle/exact - 1| = {} tol={tol:e}", sig12(worst)));
    if worst > tol {
        section.failure = Some(format!("oracle and closed form differ by {worst:e} (tol {tol:e})"));
    }
    section.summary = json!({"max_rel_diff": worst, "tol": tol});
    Ok(section)
}

#[derive(Deserialize)]
struct MeasureExtra {
    p_minus: f64,
    phase: f64,
    horizon: f64,
    samples: usize,
}

fn measure(config: &Value, opts: &Options) -> Result<Section, CliError> {
    let p = params(config)?;
    let x: MeasureExtra = serde_json::from_value(config.clone())?;
    let sys = ObservedSystem::from_probability(x.p_minus, x.phase)?;
    let rep = opts.rep(|| p.auto_rep(p.d))?;
    let rates = derive_rates(&p);
    if !(rates.gamma_net > 0.0) {
        return Err(CliError::Config("`G_o_omega0` must be > 0 for the recording stage".into()));
    }
    let options = ProtocolOptions {
        samples: x.samples.max(1),
        ..ProtocolOptions::default()
    };
    let report = run_protocol_with(&sys, &p, &rep, x.horizon / rates.gamma_net, options)?;
    let mut section = Section::new(&[
        "t", "coherence", "track_re", "track_im", "analytic_re", "analytic_im",
    ]);
    for (k, &(t, coh)) in report.coherence_envelope.iter().enumerate() {
        let tr = report.pointer_track.get(k);
        let f = |g: fn(&sos_core::measurement::TrackSample) -> f64| tr.map(g).unwrap_or(f64::NAN);
        section.rows.push(vec![
            t,
            coh,
            f(|s| s.re),
            f(|s| s.im),
            f(|s| s.analytic_re),
            f(|s| s.analytic_im),
        ]);
    }
    let (wm, wp) = report.born_weights;
    section.notes.push(format!(
        "fock_dim={} born_weights=({}, {}) expected=({}, {})",
        report.fock_dim,
        sig12(wm),
        sig12(wp),
        sig12(sys.p_minus()),
        sig12(sys.p_plus())
    ));
    section.notes.push(format!(
        "work_invested={} work_expected={} ensemble_average_work={}",
        sig12(report.work_invested),
        sig12(report.work_expected),
        sig12(report.ensemble_average_work)
    ));
    section.notes.push(format!(
        "pointer_trace_distance={} track_deviation={}",
        sig12(report.pointer_trace_distance),
        sig12(report.track_deviation)
    ));
    for w in &report.warnings {
        section.notes.push(format!("warning: {w}"));
    }
    if let Some(tol) = opts.tol {
        let dev = (wm - sys.p_minus()).abs().max((wp - sys.p_plus()).abs());
        if dev > tol {
            section.failure = Some(format!("Born weights deviate by {dev:e} (tol {tol:e})"));
        }
    }
    section.summary = serde_json::to_value(&report)?;
    Ok(section)
}

#[derive(Deserialize)]
struct SzilardConfig {
    #[serde(rename = "T")]
    temperature: f64,
    theta: Option<f64>,
    points: usize,
    #[serde(rename = "E0")]
    e0: Option<f64>,
    epsilon: f64,
    ramp_time: f64,
    r: f64,
}

fn szilard(config: &Value) -> Result<Section, CliError> {
    let c: SzilardConfig = serde_json::from_value(config.clone())?;
    let t = c.temperature;
    let theta = c.theta.unwrap_or(t);
    if c.points < 2 {
        return Err(CliError::Config("`points` must be >= 2".into()));
    }
    let best = maximize_efficiency(t, theta)?;
    let mut section = Section::new(&["epsilon", "eta", "w_max", "e0_star"]);
    let (a, b) = (EPS_LOWER.ln(), EPS_UPPER.ln());
    for k in 0..c.points {
        let eps = (a + (b - a) * k as f64 / (c.points - 1) as f64).exp();
        let m = w_se_max(eps, t)?;
        section.rows.push(vec![
            eps,
            efficiency(eps, t, theta)?,
            m.work,
            m.e0_star.unwrap_or(f64::INFINITY),
        ]);
    }
    section.notes.push(format!(
        "eps_bar={} eta_bar={} (T={}, theta={})",
        sig12(best.eps_bar),
        sig12(best.eta_bar),
        sig12(t),
        sig12(theta)
    ));
    let mut summary = json!({
        "T": t,
        "theta": theta,
        "eps_bar": best.eps_bar,
        "eta_bar": best.eta_bar,
        "w_max_at_eps_bar": t * (std::f64::consts::LN_2 - binary_entropy(best.eps_bar)),
    });
    if let Some(e0) = c.e0 {
        let ledger = quasistatic_cycle(&SzilardCycle::new(t, e0, c.epsilon)?, c.ramp_time, c.r)?;
        section.notes.push(format!(
            "cycle E0={} epsilon={} ramp_time={}: work_extracted={} heat_absorbed={} closure={}",
            sig12(e0),
            sig12(c.epsilon),
            sig12(c.ramp_time),
            sig12(ledger.work_extracted),
            sig12(ledger.heat_absorbed),
            sig12(ledger.closure_error())
        ));
        summary["cycle"] = serde_json::to_value(&ledger)?;
    }
    section.summary = summary;
    Ok(section)
}

fn cost(config: &Value) -> Result<Section, CliError> {
    let inputs: CostInputs = serde_json::from_value(config.clone())?;
    let r = min_total_work(&inputs)?;
    let mut section = Section::new(&[
        "N", "delta", "kappa", "theta", "work", "work_per_gate", "landauer_work",
        "ratio_to_landauer", "work_joules", "landauer_joules",
    ]);
    section.rows.push(vec![
        inputs.n,
        inputs.delta,
        inputs.kappa,
        r.theta,
        r.work,
        r.work_per_gate,
        r.landauer_work,
        r.ratio_to_landauer,
        r.work_joules.unwrap_or(f64::NAN),
        r.landauer_joules.unwrap_or(f64::NAN),
    ]);
    let unit = match inputs.resolved_theta()? {
        sos_core::Temperature::Kelvin(_) => "theta in kelvin; work in units of k_B*K, joules given",
        sos_core::Temperature::Natural(_) => "natural units (k_B = 1)",
    };
    section.notes.push(unit.to_string());
    for w in &r.warnings {
        section.notes.push(format!("warning: {w}"));
    }
    section.summary = serde_json::to_value(&r)?;
    Ok(section)
}
