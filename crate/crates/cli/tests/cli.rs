use serde_json::Value;
use smallball_core::catalog::Family;
use std::f64::consts::PI;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallball")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn half_slepian_law_json() {
    let o = run(&["law", "--process", "slepian", "--c", "0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!((v["K"].as_f64().unwrap() - 4.0 / PI.sqrt()).abs() < 1e-14);
    assert_eq!(v["a"].as_f64(), Some(1.0));
    assert_eq!(v["d"].as_f64(), Some(2.0));
    assert_eq!(v["E"].as_f64(), Some(0.25));
    assert_eq!(v["variable"], "norm_eps");
    assert_eq!(v["path"], "closed");
    // parse and re-emit
    assert_eq!(serde_json::to_string(&v).unwrap() + "\n", text);
}

#[test]
fn config_is_echoed() {
    let o = run(&["law", "--process", "bridge-c-int", "--l", "1", "--m", "1"]);
    let err = String::from_utf8(o.stderr).unwrap();
    let line = err.lines().find(|l| l.starts_with("config ")).expect("config line");
    let cfg: Value = serde_json::from_str(&line["config ".len()..]).unwrap();
    assert_eq!(cfg["beta"], "0");
    assert_eq!(cfg["count"], 2000);
}

#[test]
fn centered_bridge_spectrum_csv() {
    let o = run(&["spectrum", "--process", "bridge-c", "--l", "0", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,r_n,mu_n,lambda_n,multiplicity"));
    let want = [(2.0 * PI).powi(2), (2.0 * PI).powi(2), (4.0 * PI).powi(2)];
    for (line, w) in lines.zip(want) {
        let f: Vec<&str> = line.split(',').collect();
        let mu: f64 = f[2].parse().unwrap();
        assert!((mu / w - 1.0).abs() < 1e-10, "{line}");
        assert_eq!(f[4], "2");
    }
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        &["spectrum", "--process", "slepian", "--c", "2", "--count", "5", "--format", "json"][..],
        &["law", "--process", "wiener-c-int", "--l", "2", "--path", "both", "--format", "csv"][..],
        &["rank", "--family", "slepian-int", "--c", "1", "--m", "3", "--format", "json"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn rho_sum_suite_passes() {
    let o = run(&["verify", "--suite", "rho-sum", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.contains("random ell=2 x100 seed=7: rho-sum residual") && l.contains("pass")));
    assert!(text.trim_end().ends_with("0 failed"));
}

#[test]
fn verify_failure_exits_one() {
    // a coarse grid from the environment misses the 1e-4 agreement
    let o = Command::new(env!("CARGO_BIN_EXE_smallball"))
        .args(["verify", "--suite", "nystrom"])
        .env("SMALLBALL_GRID", "120")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(String::from_utf8(o.stderr).unwrap().contains("\"grid\":120"));
}

#[test]
fn eval_columns() {
    let o = run(&["eval", "--process", "bridge-c-int", "--eps", "0.3,0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eps,asymptotic,saddlepoint,imhof,ratio");
    let f: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((f[2] / 0.363856 - 1.0).abs() < 1e-5);
    assert!((f[3] / f[2] - 1.0).abs() < 1e-6);
    assert!((f[4] - f[1] / f[2]).abs() < 1e-15);
}

#[test]
fn help_lists_every_process() {
    let text = stdout(&run(&["--help"]));
    for f in Family::ALL {
        assert!(text.contains(f.id()), "{}", f.id());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["law", "--process", "slepian", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["law", "--process", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["law", "--process", "slepian", "--l", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--process", "bridge-c-int", "--eps", "0.001"]).status.code(), Some(3));
}

#[test]
fn list_json() {
    let v: Value = serde_json::from_str(&stdout(&run(&["list", "--format", "json"]))).unwrap();
    assert_eq!(v.as_array().unwrap().len(), Family::ALL.len());
}
