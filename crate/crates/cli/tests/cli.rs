use std::path::PathBuf;
use std::process::{Command, Output};

use kasep_core::{symmetric_p, ParameterPoint, Params, Rational};
use serde_json::Value;

fn kasep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kasep")).args(args).env_remove("KASEP_PRECISION").output().expect("spawn kasep")
}

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn f64_of(v: &Value) -> f64 {
    v.as_str().expect("decimal string").parse().unwrap()
}

#[test]
fn lambda0_vanishes_at_unit_fugacity() {
    let o = kasep(&["asep", "lambda0", "--N", "2", "--xi", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(f64_of(&v["lambda0"]).abs() < 1e-60);
    assert_eq!(v["precision"], 256);
    assert!(v["iterations"].as_u64().is_some());
    assert!(v["residual"].as_f64().unwrap() < 1e-30);
}

#[test]
fn precision_from_environment_and_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_kasep"));
        c.args(["asep", "lambda0", "--N", "1", "--xi", "2"]).args(extra).env_remove("KASEP_PRECISION");
        if let Some(p) = env {
            c.env("KASEP_PRECISION", p);
        }
        json(&c.output().unwrap())["precision"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 256);
    assert_eq!(run(Some("128"), &[]), 128);
    assert_eq!(run(Some("128"), &["--precision", "192"]), 192);
}

#[test]
fn symmetric_polynomial_has_zero_residual() {
    let o = kasep(&["koorn", "sym", "--m", "1", "--N", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["residual"], "0");
    assert_eq!(v["lambda"], serde_json::json!([1, 1]));
    assert_eq!(v["poly"]["nvars"], 2);
}

#[test]
fn nonsymmetric_polynomial_is_verified() {
    let o = kasep(&["koorn", "nonsym", "--m", "1", "--N", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verified"], true);
    assert_eq!(v["lambda"], serde_json::json!([-1, -1]));
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 2);

    let o = kasep(&["koorn", "nonsym", "--m", "1", "--N", "2", "--lambda", "1,-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["lambda"], serde_json::json!([1, -1]));
    assert_eq!(json(&o)["verified"], true);
    // only signed permutations of (m^N) are supported
    assert_eq!(kasep(&["koorn", "nonsym", "--m", "1", "--N", "2", "--lambda", "0,-1"]).status.code(), Some(2));
}

#[test]
fn mpa_components_sum_to_symmetric_polynomial() {
    let o = kasep(&["mpa", "eval", "--m", "1", "--N", "2", "--x", "1/2,3/5", "--K", "64", "--side", "right"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let comps: Vec<f64> = v["components"].as_array().unwrap().iter().map(f64_of).collect();
    assert_eq!(comps.len(), 4);
    let p = symmetric_p(&Params::<Rational>::from_point(&ParameterPoint::default_point(), &()), 2, 1).unwrap();
    let oracle = p.poly.evaluate(&[Rational::new(1, 2), Rational::new(3, 5)]).unwrap().to_f64();
    let sum: f64 = comps.iter().sum();
    assert!((sum - oracle).abs() <= 1e-12 * oracle.abs().max(1.0), "sum {sum} oracle {oracle}");
    assert!(v["tail_estimate"].as_f64().unwrap() < 1e-10);
}

#[test]
fn e_mu_report_fields() {
    let o = kasep(&["limit", "e-mu", "--mu", "1/10", "--N", "2", "--m-list", "8,16,32,64", "--K", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let raw = v["raw"].as_array().unwrap();
    assert_eq!(raw.iter().map(|r| r["m"].as_u64().unwrap()).collect::<Vec<_>>(), vec![8, 16, 32, 64]);
    let ext = f64_of(&v["extrapolated"]);
    let err = f64_of(&v["error"]);
    let reference = f64_of(&v["lambda0_reference"]);
    assert_eq!(v["agree"], true);
    assert!((ext - reference).abs() <= err + 1e-15);
    // reference computed independently through the lambda0 subcommand
    let l = json(&kasep(&["asep", "lambda0", "--N", "2", "--xi", "1.1051709180756476248117078264902466682245"]));
    assert!((f64_of(&l["lambda0"]) - reference).abs() < 1e-12);
}

#[test]
fn f0_characterisation_and_its_degenerate_point() {
    let o = kasep(&["limit", "f0-char", "--N", "2", "--xi", "3/2", "--x", "6/5,9/10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
    let o = kasep(&["limit", "f0-char", "--N", "2", "--xi", "3/2", "--x", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_with_default_config() {
    let cfg = config("default.cfg");
    let o = kasep(&["verify", "all", "--params", &cfg, "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let crit = v["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 9);
    for c in crit {
        assert_ne!(c["verdict"], "fail", "{c}");
    }
    let summary = String::from_utf8_lossy(&o.stderr);
    assert_eq!(summary.lines().filter(|l| l.starts_with("criterion ")).count(), 9);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = kasep(&["verify", "all", "--only", "1,4,7", "--seed", "3", "--output", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        // summary goes to stdout when the report goes to a file
        assert!(String::from_utf8_lossy(&o.stdout).contains("criterion 7"));
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ja.is_empty());
    assert_eq!(ja, jb);
    let other = kasep(&["verify", "all", "--only", "1", "--seed", "4"]);
    assert_eq!(json(&other)["seed"], 4);
}

#[test]
fn rate_config_matches_hecke_config() {
    let a = kasep(&["asep", "lambda0", "--N", "2", "--xi", "3/2", "--params", &config("physical.cfg")]);
    let b = kasep(&["asep", "lambda0", "--N", "2", "--xi", "3/2", "--params", &config("physical_rates.cfg")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_flags_exit_2() {
    for args in [
        &["asep", "lambda0", "--N", "2"][..],
        &["asep", "lambda0", "--N", "2", "--xi", "abc"],
        &["asep", "lambda0", "--N", "0", "--xi", "1"],
        &["koorn", "frobnicate"],
        &["mpa", "eval", "--m", "1", "--N", "2", "--x", "1/2"],
        &["mpa", "eval", "--m", "1", "--N", "2", "--x", "1/2,1/3", "--side", "up"],
        &["limit", "e-mu", "--mu", "1/10", "--N", "2", "--m-list", "16,8"],
        &["verify", "all", "--only", "10"],
        &["asep", "lambda0", "--N", "2", "--xi", "1", "--precision", "16"],
        &["asep", "lambda0", "--N", "2", "--xi", "1", "--params", "/nonexistent/kasep.cfg"],
    ] {
        let o = kasep(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn failing_checks_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s1.cfg");
    // s = 1 makes the D eigenvalues collide
    std::fs::write(&cfg, "s_half=1\n").unwrap();
    let o = kasep(&["verify", "all", "--only", "2", "--params", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "fail");

    // truncated series no longer converge at s = 1
    let o = kasep(&["mpa", "eval", "--m", "1", "--N", "1", "--x", "2", "--params", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["kasep", "koorn", "sym", "--m", "1", "--N", "1"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(kasep_cli::run(args, &mut out, &mut err), 0);
    assert_eq!(out, kasep(&args[1..]).stdout);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(kasep_cli::run(["kasep", "--help"], &mut out, &mut err), 0);
    assert!(String::from_utf8_lossy(&out).contains("verify"));
}
