use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypvortex"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn residual_max(report: &serde_json::Value, name: &str) -> f64 {
    report["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no residual {name}"))["max"]
        .as_f64()
        .unwrap()
}

#[test]
fn verify_thooft_asd_passes() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = run(&["verify", "--potential", "thooft:0:1", "--duality", "asd", "--report", rep.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&rep);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["pass"], true);
    assert!(residual_max(&r, "off_duality_density") < 1e-10);
    assert_eq!(r["tolerances"]["duality_residual"], 1e-10);
    assert_eq!(r["command"][1], "verify");
}

#[test]
fn verify_disc_family_vortex_passes() {
    let o = run(&["verify", "--potential", "disc-family:2.5", "--kind", "vortex"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn verify_nonharmonic_fails_with_the_laplacian_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = run(&["verify", "--potential", "generic-nonharmonic", "--report", rep.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r = json(&rep);
    assert_eq!(r["pass"], false);
    assert!(residual_max(&r, "off_duality_density") > 1e-3);
    assert!(residual_max(&r, "off_duality_vs_laplacian_rel") < 1e-8);
    let o = run(&["check-report", rep.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn chern_c1_values() {
    let o = run(&["chern", "--potential", "fhp2", "--which", "c1", "--expect", "1.5", "--json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let q = &r["quadrature"][0];
    assert!((q["value"].as_f64().unwrap() - 1.5).abs() < 5e-3);
    assert!(q["error"].as_f64().unwrap() <= 5e-3);
    let o = run(&["chern", "--potential", "disc-family:1", "--which", "c1", "--expect", "0", "--json"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r["quadrature"][0]["value"].as_f64().unwrap().abs() < 1e-3);
    // a wrong expectation is a verification failure
    let o = run(&["chern", "--potential", "fhp2", "--which", "c1", "--expect", "1.0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn chern_c2_basic_instanton() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let o = run(&["chern", "--potential", "thooft:0:1", "--which", "c2", "--expect", "1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("potential,which,value,error,converged,expected,tolerance"));
    assert_eq!(code(&run(&["check-report", csv.to_str().unwrap()])), 0);
}

#[test]
fn spec_file_matches_shorthand() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("p.json");
    std::fs::write(&spec, r#"{"family": "disc-family", "params": {"c": 2.5}}"#).unwrap();
    let a = run(&["verify", "--spec-file", spec.to_str().unwrap(), "--json"]);
    let b = run(&["verify", "--potential", "disc-family:2.5", "--json"]);
    assert_eq!(code(&a), 0);
    let ra: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(ra["residuals"], rb["residuals"]);
    assert_eq!(ra["potential"], rb["potential"]);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, r#"{"family": "disc-family", "params": {"c": "x"}}"#).unwrap();
    for args in [
        vec!["verify", "--potential", "thooft:0"],
        vec!["verify", "--potential", "nope"],
        vec!["verify", "--spec-file", spec.to_str().unwrap()],
        vec!["verify"],
        vec!["chern", "--potential", "fhp2"],
        vec!["chern", "--potential", "thooft:0,1,0,0:1", "--which", "c1"],
        vec!["sweep", "--c", "0,1"],
        vec!["sweep", "--c-range", "3:1:0.5"],
        vec!["bogus"],
    ] {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
    let o = bin().env("HYPVORTEX_THREADS", "zero").args(["verify", "--potential", "fhp1"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn unconverged_quadrature_exits_3() {
    let o = run(&["chern", "--potential", "fhp2", "--which", "c1", "--quad-tol", "1e-30"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
    assert!(stdout(&o).contains("not converged"));
}

#[test]
fn sweep_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let rep = dir.path().join("s.json");
    let o = run(&[
        "sweep", "--c", "1,1.5,2,2.5,3", "--out", out.to_str().unwrap(), "--report", rep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let mut rd = csv::Reader::from_path(&out).unwrap();
    let head: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        &head[..7],
        ["c", "r", "loop_integral", "re_hol", "im_hol", "alpha", "c1"].map(String::from)
    );
    let rows: Vec<Vec<f64>> = rd
        .records()
        .map(|r| r.unwrap().iter().take(9).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 15);
    for row in &rows {
        let (c, alpha, c1) = (row[0], row[5], row[6]);
        assert!((c1 - (c - 1.0)).abs() < 5e-3);
        if c == 2.5 {
            assert_eq!(alpha, 0.25);
        }
    }
    // holonomy approaches e^{2πic} as r decreases
    for c in [1.5, 2.0, 2.5, 3.0] {
        let lim = (2.0 * std::f64::consts::PI * c).sin_cos();
        let errs: Vec<f64> = rows
            .iter()
            .filter(|r| r[0] == c)
            .map(|r| ((r[3] - lim.1).powi(2) + (r[4] - lim.0).powi(2)).sqrt())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{c}: {errs:?}");
    }
    assert_eq!(code(&run(&["check-report", out.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["check-report", rep.to_str().unwrap()])), 0);
    // a tampered row flips the re-ingested verdict
    let text = std::fs::read_to_string(&out).unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, text.replacen(",true,", ",false,", 1)).unwrap();
    assert_eq!(code(&run(&["check-report", bad.to_str().unwrap()])), 1);
}

#[test]
fn thread_cap_does_not_change_results() {
    let args = ["chern", "--potential", "fhp1", "--which", "c1", "--json"];
    let one = bin().env("HYPVORTEX_THREADS", "1").args(args).output().unwrap();
    let many = bin().env("HYPVORTEX_THREADS", "4").args(args).output().unwrap();
    let a: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&many)).unwrap();
    assert_eq!(a["quadrature"], b["quadrature"]);
}
