use std::process::{Command, Output};

use serde_json::Value;

fn hopfkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfkit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("timing_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn matched_pair_report_is_deterministic() {
    let args = ["verify", "matched-pair", "--item", "section5", "--window", "3,2", "--json"];
    let (a, b) = (hopfkit(&args), hopfkit(&args));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let (mut ja, mut jb) = (json(&a), json(&b));
    assert_eq!(ja["status"], "pass");
    assert_eq!(ja["window"]["max_degree"], 3);
    assert_eq!(ja["certificate_id"].as_str().map(str::len), Some(64));
    strip_timing(&mut ja);
    strip_timing(&mut jb);
    assert_eq!(serde_json::to_string(&ja).unwrap(), serde_json::to_string(&jb).unwrap());
}

#[test]
fn documented_invocations_pass() {
    for args in [
        &["summarize-corollary", "--case", "2a", "--alpha", "1", "--zeta", "q", "--cyclotomic-order", "8"][..],
        &["verify", "cocycle", "--item", "sigma_alpha", "--alpha", "0", "--window", "4,2"],
        &["verify", "skew-pairing", "--item", "tau_xi_beta", "--param", "xi=-1", "--param", "beta=1/3", "--window", "3,1"],
        &["verify", "galois", "--item", "theta_beta", "--param", "beta=2"],
        &["kappa", "--item", "H_alpha", "--param", "alpha=-2"],
        &["unrolled", "--param", "ell=3", "--window", "2,1"],
    ] {
        let out = hopfkit(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}\n{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
    }
}

#[test]
fn failures_exit_one_with_witnesses() {
    let out = hopfkit(&["unrolled", "--param", "b=1/2", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let j = json(&out);
    assert_eq!(j["status"], "fail");
    let w = &j["children"][0]["witnesses"][0];
    assert_eq!(w["rhs"], "0");
    assert_ne!(w["lhs"], "0");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "hopf", "--item", "nope"][..],
        &["verify", "hopf", "--item", "E", "--window", "4"],
        &["verify", "hopf"],
        &["verify", "hopf", "--item", "sigma_alpha"],
        &["catalog", "build", "E_def", "--param", "lambda=0"],
        &["catalog", "build", "tau_xi_beta", "--param", "xi=2"],
        &["catalog", "build", "E", "--param", "beta=1"],
        &["summarize-corollary", "--case", "3c"],
        &["classify", "--target", "skew-pairing", "--assume", "lambda=0"],
        &["frobnicate"],
    ] {
        let out = hopfkit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("hopfkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = hopfkit(&["verify", "twisting", "--item", "theta_zeta", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    // without --json the summary goes to stdout and the JSON only to the file
    let out = hopfkit(&["verify", "twisting", "--item", "theta_zeta", "--out", path.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS verify-twisting"));
    let j: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(j["check"], "verify-twisting");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn catalog_listing_and_build() {
    let j = json(&hopfkit(&["catalog", "list", "--json"]));
    let names: Vec<&str> = j.as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    for n in ["H", "U", "E", "E_def", "section5", "sigma_alpha", "psi_zeta", "theta_zeta", "unrolled"] {
        assert!(names.contains(&n), "{n}");
    }
    let out = hopfkit(&["catalog", "build", "psi_zeta", "--zeta", "q^3", "--cyclotomic-order", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["params"]["zeta"], "q^3");
    assert!(!j["form"]["nonzero"].as_array().unwrap().is_empty());
}

#[test]
fn classify_reports_branches() {
    let out = hopfkit(&["classify", "--target", "psi", "--assume", "zeta^2=1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let notes: Vec<&str> = j["notes"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.contains(&"forced zero: p_bg, p_cg, p_ha"), "{notes:?}");
    assert!(notes.iter().any(|n| n.starts_with("under zeta^2=1: contradiction 2 = 0")), "{notes:?}");
}

#[test]
fn threads_flag_is_accepted() {
    let out = hopfkit(&["--threads", "2", "verify", "hopf", "--item", "U", "--window", "3,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
