use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foguel-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn check_exit_codes_follow_status() {
    assert_eq!(code(&lab(&["check", "--case", "h:s,s*", "--symbol", "builtin:hilbert"])), 1);
    assert_eq!(code(&lab(&["check", "--case", "t:s,s", "--symbol", "builtin:zero"])), 0);
}

#[test]
fn check_reads_symbol_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("phi.json");
    std::fs::write(&p, r#"{"kind":"coeffs","entries":[[-1,1,0],[1,-1,0]]}"#).unwrap();
    let src = format!("file:{}", p.display());
    let o = lab(&["check", "--case", "t:s*,s", "--symbol", &src]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["witnesses"]["Theta"]["entries"], serde_json::json!([[0, 1.0, 0.0]]));
    assert!(v["thresholds"]["quotient_tol"].is_number());
}

#[test]
fn usage_and_runtime_errors() {
    assert_eq!(code(&lab(&["check", "--case", "q:s,s", "--symbol", "builtin:zero"])), 10);
    assert_eq!(code(&lab(&["check", "--case", "t:s,s", "--symbol", "builtin:nope"])), 10);
    assert_eq!(code(&lab(&["check", "--case", "t:s,s"])), 10);
    assert_eq!(code(&lab(&["frobnicate"])), 10);
    let o = lab(&["check", "--case", "t:s,s", "--symbol", "file:/nonexistent/phi.json"]);
    assert_eq!(code(&o), 11);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/phi.json"));
    assert_eq!(code(&lab(&["profile", "--case", "t:s*,s", "--symbol", "builtin:z"])), 10);
}

#[test]
fn help_documents_exit_codes() {
    let o = lab(&["--help"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("Exit status") && s.contains("FOGUEL_LAB_THREADS"));
}

#[test]
fn certify_examples() {
    let o = lab(&["certify", "--case", "h:s,s", "--symbol", "builtin:one", "--trunc", "32"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["max_residual"], 0.0);
    assert_eq!(v["decomposition"]["theta"]["entries"], serde_json::json!([[-1, -1.0, 0.0]]));

    let o = lab(&["certify", "--case", "t:s,s*", "--symbol", "builtin:family_1_minus_zbar2_theta?theta=z"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["max_residual"].as_f64().unwrap() <= 1e-8);

    let o = lab(&["certify", "--case", "h:s,s*", "--symbol", "builtin:hilbert"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["certificate"].is_null());
}

#[test]
fn certify_writes_files_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let o = lab(&[
        "certify", "--case", "h:s,s", "--symbol", "builtin:one", "--trunc", "8", "--format", "csv", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let first: Vec<f64> = text.lines().next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first.len(), 16);
    // Row 0 of −S*: entry (0, 1) = −1.
    assert_eq!(first[2], -1.0);
}

#[test]
fn profile_csv_schema() {
    let o = lab(&[
        "profile", "--case", "t:s,s", "--symbol", "builtin:z", "--trunc", "64", "--nmax", "16", "--format", "csv",
    ]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("n,norm"));
    for line in lines.clone().take_while(|l| !l.starts_with('#')) {
        let (n, v) = line.split_once(',').unwrap();
        assert_eq!(n.parse::<f64>().unwrap(), v.parse::<f64>().unwrap());
    }
    assert!(s.contains("# class=power(alpha=1.000)"));

    let o = lab(&[
        "profile", "--case", "h:s,s*", "--symbol", "builtin:one", "--trunc", "64", "--nmax", "32", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("# class=bounded"));
}

#[test]
fn identities_and_corpus() {
    let o = lab(&["identities", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["max_residual"].as_f64().unwrap() <= 1e-10);

    let o = lab(&["corpus"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["mismatches"], 0);

    let o = lab(&["corpus", "--filter", "no-such-entry"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["entries"], 0);

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    std::fs::write(
        &p,
        r#"{"entries":[{"name":"zero","symbol":{"kind":"builtin","name":"zero"},"case":"t:s,s","expected":"fails","provenance":{"source":"trivial","note":"deliberately wrong"}}]}"#,
    )
    .unwrap();
    let o = lab(&["corpus", "--corpus", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["mismatches"], 1);
}

#[test]
fn demo_reports_hilbert_bound() {
    let o = lab(&["demo-hilbert", "--format", "csv", "--trunc", "256", "--nmax", "32"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("section norms < π: true"));
    assert!(s.contains("X_n bounded: false"));
    assert!(s.contains("BMOA test on (P+psi)': fails"));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["check", "--case", "h:s,s*", "--symbol", "builtin:cauchy?alpha=2"];
    assert_eq!(lab(&args).stdout, lab(&args).stdout);
    let args = ["identities", "--seed", "3", "--trials", "10"];
    assert_eq!(lab(&args).stdout, lab(&args).stdout);
}

#[test]
fn thread_cap_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_foguel-lab"))
        .args(["corpus", "--filter", "zero"])
        .env("FOGUEL_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_foguel-lab"))
        .args(["corpus"])
        .env("FOGUEL_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 10);
}

#[test]
fn every_report_echoes_thresholds() {
    let runs: [&[&str]; 6] = [
        &["check", "--case", "t:s,s", "--symbol", "builtin:z", "--trunc", "32"],
        &["certify", "--case", "h:s,s", "--symbol", "builtin:one", "--trunc", "8"],
        &["profile", "--case", "t:s,s", "--symbol", "builtin:z", "--trunc", "32", "--nmax", "16"],
        &["identities", "--trials", "3", "--trunc", "40"],
        &["corpus", "--filter", "zero"],
        &["demo-hilbert", "--trunc", "64", "--nmax", "8"],
    ];
    for args in runs {
        let o = lab(args);
        assert!(json(&o)["thresholds"]["coeff_zero_tol"].is_number(), "{args:?}");
        let mut csv: Vec<&str> = args.to_vec();
        csv.extend(["--format", "csv"]);
        let o = lab(&csv);
        assert!(stdout(&o).contains("# coeff_zero_tol="), "{csv:?}");
    }
}
