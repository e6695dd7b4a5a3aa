use std::process::{Command, Output};

fn pcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn quartic_pcurvature_all_zero() {
    let o = pcurve(&["pcurv", "--example", "quartic-sqrt", "--primes", "2..50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all zero"));
}

#[test]
fn exp_pcurvature_fails_with_verdict_code() {
    let o = pcurve(&["pcurv", "--example", "exp", "--primes", "2..20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("not all zero"));
}

#[test]
fn connection_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quartic.json");
    let o = pcurve(&["example", "quartic-sqrt"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, &o.stdout).unwrap();
    let o = pcurve(&[
        "pcurv",
        "--conn",
        path.to_str().unwrap(),
        "--primes",
        "3..13",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all zero"));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(pcurve(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        pcurve(&["pcurv", "--example", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(
        pcurve(&["pcurv", "--conn", "/nonexistent.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pcurve(&["pcurv", "--example", "exp", "--primes", "9"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pcurve(&["theta", "--t", "0.1,0.01"]).status.code(), Some(1));
    assert_eq!(
        pcurve(&["certify", "--case", "hyperbolic"]).status.code(),
        Some(1)
    );
    assert_eq!(
        pcurve(&["certify", "--case", "p1", "--pmax", "50"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(pcurve(&["--help"]).status.code(), Some(0));
    assert_eq!(pcurve(&["--version"]).status.code(), Some(0));
}

#[test]
fn constants_carry_error_bounds() {
    let o = pcurve(&["constants", "--which", "rinf", "--digits", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("5.63250359279863557460"), "{s}");
    assert!(s.contains("± 2^-"));
}

#[test]
fn json_constants() {
    let o = pcurve(&["--json", "constants"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["eremenko"]
        .as_str()
        .unwrap()
        .starts_with("0.834626841674"));
    assert!(v["ec_rinf"].as_str().unwrap().starts_with("3.094920984287"));
}

#[test]
fn certify_p1_json() {
    let o = pcurve(&["--json", "certify", "--case", "p1", "--pmax", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["case"], "p1");
    assert_eq!(v["pass"], true);
}

#[test]
fn heights_pass() {
    let o = pcurve(&["heights", "--digits", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-0.748752485503"));
}

#[test]
fn divcheck_isogeny_at_two() {
    let o = pcurve(&[
        "divcheck",
        "--example",
        "isogeny-pushforward",
        "--prime",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("divisible (witness 1)"));
}

#[test]
fn radius_verdicts() {
    assert_eq!(
        pcurve(&["radius", "--example", "exp", "--prime", "3"])
            .status
            .code(),
        Some(2)
    );
    let o = pcurve(&[
        "radius",
        "--example",
        "quartic-sqrt",
        "--prime",
        "3",
        "--order",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn elliptic_expansion_needs_y() {
    let o = pcurve(&["expand", "--example", "isogeny-pushforward", "--order", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exp_expansion_coefficients() {
    let o = pcurve(&["expand", "--example", "exp", "--order", "5"]);
    assert!(stdout(&o).contains("[1, 1, 1/2, 1/6, 1/24, 1/120]"));
}

#[test]
fn ks_image() {
    let o = pcurve(&["ks"]);
    assert_eq!(stdout(&o).trim(), "(1/2)/(t^2 - t) dt");
}

#[test]
fn example_list() {
    let s = stdout(&pcurve(&["example"]));
    for n in [
        "trivial",
        "exp",
        "legendre-gm",
        "quartic-sqrt",
        "isogeny-pushforward",
    ] {
        assert!(s.lines().any(|l| l == n));
    }
}
