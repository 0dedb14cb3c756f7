use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayley-wreath"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.toml"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Build `name` into a temp dir and return the structure path.
fn build(name: &str, dir: &tempfile::TempDir) -> (PathBuf, Output) {
    let out = dir.path().join(name);
    let o = run(&["build", "--config", config(name).to_str().unwrap(), "--out", out.to_str().unwrap()]);
    (out.join("structure.json"), o)
}

#[test]
fn build_lamplighter_reports_four_multipliers() {
    let dir = tempfile::tempdir().unwrap();
    let (structure, o) = build("lamplighter", &dir);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("4 multipliers"));
    assert!(structure.exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(structure.with_file_name("report.json")).unwrap()).unwrap();
    assert_eq!(report["multipliers"].as_array().unwrap().len(), 4);
    assert!(report["base_validation"]["quasigeodesic"]["lambda"].is_string());
}

#[test]
fn build_dihedral_reports_six_multipliers() {
    let dir = tempfile::tempdir().unwrap();
    let (_, o) = build("dihedral", &dir);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("6 multipliers"));
}

#[test]
fn corrupted_hspec_reports_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let (structure, o) = build("broken", &dir);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not associative at ("), "{}", stderr(&o));
    assert!(!structure.exists());
}

#[test]
fn word_problem_and_normal_forms() {
    let dir = tempfile::tempdir().unwrap();
    let (s, _) = build("dihedral", &dir);
    let s = s.to_str().unwrap();

    let o = run(&["wp", "--structure", s, ""]);
    assert_eq!(stdout(&o).lines().next(), Some("trivial"));
    let o = run(&["wp", "--structure", s, "x1 t x1 t"]);
    assert_eq!(stdout(&o).lines().next(), Some("trivial"));
    let o = run(&["wp", "--structure", s, "a t", "--trace"]);
    let out = stdout(&o);
    assert!(out.contains("nontrivial"));
    assert_eq!(out.lines().count(), 5);

    // t^2 x1 with m = 1
    let o = run(&["nf", "--structure", s, "t t x1"]);
    assert_eq!(stdout(&o).trim(), "B0 C C B C C B C C*");

    let o = run(&["mul", "--structure", s, "B0 C* C", "x1"]);
    assert_eq!(stdout(&o).trim(), "B0 C C*");

    let o = run(&["enum", "--structure", s, "--depth", "4"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    assert!(stdout(&o).contains("B0 C* C\t{} @ 1"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (s, _) = build("lamplighter", &dir);
    let s = s.to_str().unwrap();
    assert_eq!(run(&["build", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(run(&["nf"]).status.code(), Some(2));
    assert_eq!(run(&["mul", "--structure", s, "C* B0", "t"]).status.code(), Some(5));
    assert_eq!(run(&["nf", "--structure", s, "t q"]).status.code(), Some(6));
    assert_eq!(run(&["mul", "--structure", s, "B0 C*", "q"]).status.code(), Some(6));
    assert_eq!(run(&["verify", "--structure", s, "--window", "1:2"]).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "base = 3\n").unwrap();
    assert_eq!(run(&["build", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_passes_on_fixture_groups() {
    for name in ["lamplighter", "dihedral", "z3_z_z5"] {
        let o = run(&["verify", "--config", config(name).to_str().unwrap(), "--depth", "8", "--mult-depth", "6"]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert!(stdout(&o).ends_with("all checks passed\n"));
    }
}

#[test]
fn verify_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (s, _) = build("lamplighter", &dir);
    let s = s.to_str().unwrap();
    let json = dir.path().join("verify.json");
    let args = ["verify", "--structure", s, "--depth", "8", "--seed", "3", "--window=-1:1", "--json", json.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let twin: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(twin["passed"], true);
    let seq = run(&[&args[..], &["--sequential"]].concat());
    assert_eq!(seq.stdout, a.stdout);
}

#[test]
fn corrupted_structure_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (s, _) = build("lamplighter", &dir);
    let mut j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    // hand R_t's automaton to t^-1 and vice versa
    let m = j["multipliers"].as_array_mut().unwrap();
    let (t, ti) = (m[2]["automaton"].clone(), m[3]["automaton"].clone());
    m[2]["automaton"] = ti;
    m[3]["automaton"] = t;
    std::fs::write(&s, serde_json::to_string(&j).unwrap()).unwrap();
    let o = run(&["verify", "--structure", s.to_str().unwrap(), "--depth", "6"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("counterexample"));
}
