use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sos_core::fock::FockRep;
use sos_core::linalg::{real, C64};
use sos_core::measurement::{run_protocol, run_protocol_with, ObservedSystem, ProtocolOptions};
use sos_core::model::{derive_rates, SosParams};

fn params(t: f64) -> SosParams {
    SosParams::new(1.0, 1.0, t, 1.0, 0.1, 0.05, 0.0).unwrap()
}

fn symmetric() -> ObservedSystem {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ObservedSystem::new(real(h), real(h)).unwrap()
}

#[test]
fn born_rule_at_zero_temperature() {
    let p = params(0.0);
    let rep = FockRep::new(24).unwrap();
    let report = run_protocol(&symmetric(), &p, &rep, 30.0).unwrap();
    let (pm, pp) = report.born_weights;
    assert!((pm - 0.5).abs() < 1e-4 && (pp - 0.5).abs() < 1e-4, "{pm} {pp}");
    assert!(report.pointer_trace_distance < 1e-3, "{}", report.pointer_trace_distance);
    assert!(report.observed_max_distance < 1e-8);
    assert!((report.ensemble_average_work - 2.0).abs() < 1e-9);
    assert!((report.work_invested - 2.0).abs() < 1e-9);
    let d = report.diagnostics;
    assert!(d.max_trace_drift < 1e-8 && d.min_eigenvalue > -1e-6);
}

#[test]
fn born_rule_at_finite_temperature() {
    let p = params(1.0);
    let rep = p.auto_rep(p.d);
    let horizon = 30.0 / derive_rates(&p).gamma_net;
    let report = run_protocol(&symmetric(), &p, &rep, horizon).unwrap();
    let (pm, pp) = report.born_weights;
    assert!((pm - 0.5).abs() < 1e-4 && (pp - 0.5).abs() < 1e-4, "{pm} {pp}");
    assert!(report.pointer_trace_distance < 1e-3);
}

#[test]
fn flipped_pointer_follows_moving_label() {
    let p = params(0.0);
    let rep = FockRep::new(24).unwrap();
    let sys = ObservedSystem::new(real(1.0), real(0.0)).unwrap();
    let report = run_protocol(&sys, &p, &rep, 12.0).unwrap();
    assert!(report.track_deviation < 1e-4, "{}", report.track_deviation);
    assert!((report.work_invested - 4.0).abs() < 1e-9);
}

#[test]
fn coherence_envelope_never_grows() {
    let p = params(0.0);
    let rep = FockRep::new(24).unwrap();
    let report = run_protocol(&symmetric(), &p, &rep, 10.0).unwrap();
    for w in report.coherence_envelope.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-8, "{w:?}");
    }
    assert!(report.coherence_envelope.last().unwrap().1 < 1e-3);
}

#[test]
fn born_weights_for_random_inputs() {
    let p = params(0.0);
    let rep = FockRep::new(24).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = ProtocolOptions {
        samples: 10,
        ..ProtocolOptions::default()
    };
    for _ in 0..20 {
        let pm: f64 = rng.random();
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let sys = ObservedSystem::new(
            C64::from_polar(pm.sqrt(), phase),
            C64::from_polar((1.0 - pm).sqrt(), 0.3),
        )
        .unwrap();
        let report = run_protocol_with(&sys, &p, &rep, 30.0, opts).unwrap();
        let (wm, wp) = report.born_weights;
        assert!((wm - pm).abs() < 1e-6 + 1e-7, "{wm} vs {pm}");
        assert!((wp - (1.0 - pm)).abs() < 1e-6 + 1e-7);
        assert!((wm + wp - 1.0).abs() < 1e-6);
    }
}
