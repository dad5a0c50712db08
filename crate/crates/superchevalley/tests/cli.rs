//! End-to-end checks of the command-line binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superchevalley"))
}

#[test]
fn verify_axioms_passes() {
    let out = bin().arg("verify-axioms").output().expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("0 violations / 289 entries"), "{}", stdout);
    assert!(stdout.contains("result: PASS"), "{}", stdout);
}

#[test]
fn verify_axioms_json_has_schema() {
    let out = bin().args(["verify-axioms", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"], "PASS");
}

#[test]
fn bracket_command() {
    let out = bin().args(["bracket", "E(a1)", "F(a1)"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "H1");
    // unknown roots are rejected with a nonzero exit
    let out = bin().args(["bracket", "E(a1+a1)", "F(a1)"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn table_json_is_well_formed() {
    let out = bin().args(["table", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["basis"].as_array().unwrap().len(), 17);
    assert_eq!(v["roots"].as_array().unwrap().len(), 14);
    assert_eq!(v["brackets"]["[E(e1-e2-e3), F(e1-e2-e3)]"], "H1");
}

#[test]
fn straighten_command() {
    let out = bin()
        .args(["straighten", "E(2e2)^(2); E(2e2)^(3)"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("(10) E(2e2)^(5)"), "{}", stdout);
    assert!(stdout.contains("coefficients in Z_a: true"), "{}", stdout);
}

#[test]
fn factorize_roundtrip() {
    let out = bin()
        .args([
            "factorize",
            "xO(a1+a2+a3; x1) xO(-a1-a2-a3; x2) hC(H[2e2]; 2) xE(2e3; a)",
            "--odd-vars",
            "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("roundtrip: PASS"), "{}", stdout);
}

#[test]
fn grouplike_and_lie_check() {
    let out = bin().args(["grouplike", "--k", "2", "--trunc", "8"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("group-like: true"));
    let out = bin().arg("lie-check").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("dimension: 9|8"));
}

#[test]
fn specialize_guards_forbidden_values() {
    let out = bin().args(["specialize", "--a", "2", "jacobi"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 violations / 4913 triples"));
    for bad in ["0", "-1"] {
        let out = bin().args(["specialize", "--a", bad, "jacobi"]).output().unwrap();
        assert!(!out.status.success(), "a = {} must be rejected", bad);
    }
}

#[test]
fn check_lemmas_small() {
    let out = bin().args(["check-lemmas", "--odd-vars", "4"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("result: PASS"), "{}", stdout);
}

#[test]
fn odd_cap_env_is_honored() {
    let out = bin()
        .env("SUPERCHEVALLEY_ODD_CAP", "2")
        .args(["factorize", "xO(a1; x1)", "--odd-vars", "4"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "{}", err);
}
