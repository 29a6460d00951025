use std::process::{Command, Output};

use serde_json::Value;

fn sos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = sos(&a);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn szilard_optimum_in_window() {
    let v = json_of(&["szilard"]);
    let s = &v["results"][0]["summary"];
    let eps = s["eps_bar"].as_f64().unwrap();
    let eta = s["eta_bar"].as_f64().unwrap();
    assert!((eps - 0.06).abs() <= 0.01, "{eps}");
    assert!((eta - 0.17).abs() <= 0.01, "{eta}");
}

#[test]
fn cost_default_is_hundreds_of_joules() {
    let v = json_of(&["cost"]);
    let r = &v["results"][0];
    let cols: Vec<&str> = r["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let j = cols.iter().position(|c| *c == "work_joules").unwrap();
    let w = r["rows"][0][j].as_f64().unwrap();
    assert!((w.log10() - 2.0).abs() <= 0.5, "{w}");
}

#[test]
fn zero_temperature_tunneling_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "t.json", r#"{"T": 0, "D": [0.5, 1.0]}"#);
    let v = json_of(&["tunneling", "--config", &cfg, "--fock-dim", "32"]);
    let r = &v["results"][0];
    for row in r["rows"].as_array().unwrap() {
        let d = row[0].as_f64().unwrap();
        let rate = row[2].as_f64().unwrap();
        let expect = 0.5 * (-4.0 * d * d).exp();
        assert!((rate / expect - 1.0).abs() < 1e-10, "D={d}: {rate} vs {expect}");
        let oracle = row[5].as_f64().unwrap();
        assert!((oracle / expect - 1.0).abs() < 1e-6, "D={d}: oracle {oracle}");
    }
}

#[test]
fn decoherence_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "d.json", r#"{"horizon": 3, "points": 6}"#);
    let o = sos(&["decoherence", "--config", &cfg, "--fock-dim", "32"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "t,analytic,oracle,abs_diff"), "{text}");
}

#[test]
fn sweep_points_stay_in_order_and_output_is_reproducible() {
    let args = ["szilard", "--sweep", "T:0.5:4:4:log", "--sweep", "r:1:2:2:lin"];
    let a = sos(&args);
    let b = sos(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&args);
    let pts: Vec<(f64, f64)> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["point"]["T"].as_f64().unwrap(), r["point"]["r"].as_f64().unwrap()))
        .collect();
    assert_eq!(pts.len(), 8);
    for w in pts.windows(2) {
        assert!(w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1), "{pts:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cost.csv");
    let o = sos(&["cost", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), sos(&["cost"]).stdout);
}

#[test]
fn bad_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "bad.json", r#"{"kapa": 1e-8}"#);
    let o = sos(&["cost", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`kapa`"));

    let neg = write_config(&dir, "neg.json", r#"{"delta": 2}"#);
    assert_eq!(sos(&["cost", "--config", &neg]).status.code(), Some(2));
    assert_eq!(sos(&["szilard", "--sweep", "T:1:0:3:lin"]).status.code(), Some(2));
    assert_eq!(sos(&["szilard", "--sweep", "Tee:1:2:3:lin"]).status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let ok = sos(&["validate", "--only", "7,9"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.contains("# PASS  7") && text.contains("# PASS  9"), "{text}");
    assert_eq!(sos(&["validate", "--only", "8"]).status.code(), Some(2));
}

#[test]
fn validate_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(&dir, "g.json", r#"{"dim": 2, "real_part": [0.75, 0, 0, 0.25], "imag_part": [0, 0.1, -0.1, 0]}"#);
    let o = sos(&["validate", "--state", &good]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).trim_end().ends_with(",1"));

    let bad = write_config(&dir, "b.json", r#"{"dim": 2, "real_part": [1.5, 0, 0, -0.5], "imag_part": [0, 0, 0, 0]}"#);
    assert_eq!(sos(&["validate", "--state", &bad]).status.code(), Some(2));
    let short = write_config(&dir, "s.json", r#"{"dim": 2, "real_part": [1], "imag_part": [0]}"#);
    assert_eq!(sos(&["validate", "--state", &short]).status.code(), Some(2));
}
