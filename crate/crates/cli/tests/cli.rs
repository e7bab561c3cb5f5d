use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qpencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpencil")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn planted_ip1s_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = qpencil(&["gen", "--q", "9", "--n", "5", "--seed", "7", "--plant-ip1s", "-o", path(d)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (a, b, sol) = (d.join("A.json"), d.join("B.json"), d.join("sol.json"));
    let out = qpencil(&["ip1s", path(&a), path(&b), "-o", path(&sol)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(qpencil(&["verify", path(&a), path(&b), path(&sol)]).status.code(), Some(0));
    assert_eq!(qpencil(&["verify", path(&a), path(&b), path(&d.join("secret.json"))]).status.code(), Some(0));
}

#[test]
fn planted_ip2s_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let blocks = "K1, L(x-3,1,1), L(x,1,D), Linf(1,1)";
    let out = qpencil(&["gen", "--q", "11", "--n", "6", "--seed", "1", "--blocks", blocks, "--plant-ip2s", "-o", path(d)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (a, b, sol) = (d.join("A.json"), d.join("B.json"), d.join("sol.json"));
    assert_eq!(qpencil(&["ip2s", path(&a), path(&b), "-o", path(&sol)]).status.code(), Some(0));
    assert!(fs::read_to_string(&sol).unwrap().contains("gamma"));
    assert_eq!(qpencil(&["verify", path(&a), path(&b), path(&sol)]).status.code(), Some(0));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = qpencil(&["gen", "--q", "5", "--n", "4", "--seed", seed, "--plant-ip2s", "-o", path(dir.path())]);
        assert!(out.status.success());
        ["A.json", "B.json", "secret.json"].map(|f| fs::read_to_string(dir.path().join(f)).unwrap())
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn empty_pencil() {
    let out = qpencil(&["gen", "--q", "7", "--n", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"n\":0"));
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.json");
    fs::write(&a, &text).unwrap();
    assert_eq!(qpencil(&["ip1s", path(&a), path(&a)]).status.code(), Some(0));
}

#[test]
fn different_kronecker_indices_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = d.join("a");
    let b = d.join("b");
    assert!(qpencil(&["gen", "--q", "7", "--n", "3", "--blocks", "K1", "-o", path(&a)]).status.success());
    assert!(qpencil(&["gen", "--q", "7", "--n", "3", "--blocks", "K0,K0,K0", "-o", path(&b)]).status.success());
    let (pa, pb) = (a.join("A.json"), b.join("A.json"));
    assert_eq!(qpencil(&["ip1s", path(&pa), path(&pb)]).status.code(), Some(2));
    assert_eq!(qpencil(&["ip2s", path(&pa), path(&pb)]).status.code(), Some(2));
}

#[test]
fn corrupted_solution_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(qpencil(&["gen", "--q", "13", "--n", "4", "--seed", "5", "--plant-ip1s", "-o", path(d)]).status.success());
    let (a, b, secret) = (d.join("A.json"), d.join("B.json"), d.join("secret.json"));
    let text = fs::read_to_string(&secret).unwrap();

    // Bump the first entry of S.
    let start = text.find("[[").unwrap() + 2;
    let end = start + text[start..].find([',', ']']).unwrap();
    let v: u64 = text[start..end].parse().unwrap();
    let bad = format!("{}{}{}", &text[..start], (v + 1) % 13, &text[end..]);
    let corrupt = d.join("bad.json");
    fs::write(&corrupt, bad).unwrap();
    assert_eq!(qpencil(&["verify", path(&a), path(&b), path(&corrupt)]).status.code(), Some(2));

    fs::write(&corrupt, "{\"S\": [[1]]}").unwrap();
    assert_eq!(qpencil(&["verify", path(&a), path(&b), path(&corrupt)]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qpencil(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qpencil(&["gen", "--q", "6", "--n", "2"]).status.code(), Some(1));
    assert_eq!(qpencil(&["canon", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(qpencil(&["gen", "--q", "7", "--n", "2", "--plant-ip1s"]).status.code(), Some(1));
}

#[test]
fn canon_prints_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(qpencil(&["gen", "--q", "5", "--n", "4", "--blocks", "K0, L(x^2+2,1,1), Linf(1,D)", "-o", path(d)]).status.success());
    let out = qpencil(&["canon", path(&d.join("A.json"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kronecker\":[0]"));
    assert!(text.contains("\"place\":\"inf\""));
}
