use std::fs;
use std::process::{Command, Output};

fn gaswall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaswall")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gaswall(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn f(v: &serde_json::Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn equilibrium_gue_pushed() {
    let v = json(&["equilibrium", "--preset", "gue", "--wall", "1.0"]);
    assert!((f(&v["r_star"]) - std::f64::consts::SQRT_2).abs() < 1e-10);
    assert!((f(&v["mu"]) - 0.943_147_18).abs() < 1e-8);
    assert_eq!(v["phase"], "pushed");
    assert_eq!(v["x"].as_array().unwrap().len(), 101);
}

#[test]
fn equilibrium_ginue_pulled() {
    let v = json(&["equilibrium", "--preset", "ginue", "--wall", "2.0"]);
    assert_eq!(f(&v["c"]), 0.0);
    assert_eq!(v["phase"], "pulled");
    let d = f(&v["density"][0]);
    assert!((d - 1.0 / std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn equilibrium_thomas_fermi() {
    let v = json(&["equilibrium", "--family", "thomas_fermi", "--d", "1", "--pot", "quadratic:0.5", "--wall", "1.0"]);
    assert!((f(&v["mu"]) - (1.0 + 1.0 / 6.0)).abs() < 1e-12);
}

#[test]
fn equilibrium_wishart() {
    let v = json(&["equilibrium", "--preset", "wishart_c1", "--wall", "2"]);
    assert!((f(&v["rate"]) - 0.034_073_59).abs() < 1e-8);
}

#[test]
fn sweep_csv_rows() {
    let out = gaswall(&["sweep", "--preset", "gue", "--grid", "0.5,1.0,1.2,1.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,f,df,d2f,d3f,phase"));
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert!((row[1].parse::<f64>().unwrap() - 0.017_036_795_139_986_33).abs() < 1e-12);
    assert!(text.lines().nth(4).unwrap().ends_with(",pulled"));
    // Scalar block goes to stderr without --out.
    let side: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!((f(&side["jump"]) + 2f64.sqrt()).abs() < 1e-3);
}

#[test]
fn sweep_ginue_and_fit() {
    let v = json(&["sweep", "--preset", "ginue", "--grid", "0.5,2", "--fit-window"]);
    assert!((f(&v["f"][0]) - 0.088_761_090_279_972_6).abs() < 1e-12);
    assert!((f(&v["c_star"]) - 2.0 / 3.0).abs() < 1e-3);
    assert!((f(&v["c_star_fit"]) / f(&v["c_star"]) - 1.0).abs() < 0.05);
}

#[test]
fn sweep_pulled_grid_is_zero() {
    let v = json(&["sweep", "--preset", "gue", "--from", "1.5", "--to", "3", "--points", "5"]);
    assert!(v["f"].as_array().unwrap().iter().all(|x| f(x) == 0.0));
    assert!(v["c_star_fit"].is_null());
}

#[test]
fn identities_default_and_targeted() {
    let out = gaswall(&["identities"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert!(gaswall(&["identities", "--suite", "wronskian", "--d", "4"]).status.success());
    assert!(gaswall(&["identities", "--suite", "shell", "--d", "3", "--pairs", "10"]).status.success());
}

#[test]
fn identity_failure_exit_code() {
    // Ten partial-sum terms are far from the 1e-3 target.
    let out = gaswall(&["identities", "--suite", "multipole", "--terms", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_input_exit_codes() {
    assert_eq!(gaswall(&["mc", "--n", "1"]).status.code(), Some(2));
    assert_eq!(gaswall(&["equilibrium", "--family", "loggas", "--pot", "monomial:3:1"]).status.code(), Some(2));
    assert_eq!(gaswall(&["equilibrium", "--family", "yukawa", "--a", "-1"]).status.code(), Some(2));
    assert_eq!(gaswall(&["sweep", "--preset", "gue", "--grid", "1.2,1.0"]).status.code(), Some(2));
    assert_eq!(gaswall(&["identities", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(gaswall(&["bogus"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exit_code() {
    // A constant potential does not confine the gas: no critical radius.
    assert_eq!(gaswall(&["equilibrium", "--family", "loggas", "--pot", "1"]).status.code(), Some(3));
}

#[test]
fn thread_variable_is_checked() {
    let out = Command::new(env!("CARGO_BIN_EXE_gaswall"))
        .args(["presets"])
        .env("GASWALL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_gaswall"))
        .args(["presets"])
        .env("GASWALL_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn presets_listed() {
    let out = gaswall(&["presets"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["gue", "ginue", "wishart_c1", "tf1"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name},"))), "{name}");
    }
}

#[test]
fn mc_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = gaswall(&[
            "mc", "--preset", "gue", "--n", "40", "--sweeps", "2000", "--seed", "7", "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (fs::read(&p).unwrap(), fs::read(dir.path().join(format!("{name}.json"))).unwrap())
    };
    let (a, a_side) = run("a.csv");
    let (b, b_side) = run("b.csv");
    assert_eq!(a, b);
    assert_eq!(a_side, b_side);
    let side: serde_json::Value = serde_json::from_slice(&a_side).unwrap();
    assert!(f(&side["l1_distance"]) < 0.2);
    assert_eq!(side["seed"], 7);
    assert!(String::from_utf8(a).unwrap().starts_with("lo,hi,center,mass,density\n"));
}

#[test]
fn mc_ginue_surface_condensation() {
    let v = json(&["mc", "--preset", "ginue", "--wall", "0.8", "--n", "100", "--sweeps", "3000", "--seed", "1"]);
    assert!(f(&v["surface_mass"]) > 2.0 * f(&v["surface_bulk_prediction"]), "{v}");
}

#[test]
fn mc_rejects_unsampleable_models() {
    assert_eq!(gaswall(&["mc", "--preset", "tf1"]).status.code(), Some(2));
    assert_eq!(gaswall(&["mc", "--preset", "wishart_c1"]).status.code(), Some(2));
}
