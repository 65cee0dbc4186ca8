use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use braidword::testing::fixtures;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_braidword"));
    c.env_remove("BRAIDWORD_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let unknot = write(dir.path(), "u.bmc", "capR @ 0\ncupL @ 0\n");
    let o = run(&["check", s(&unknot)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("level 1: ^ v"));

    let o = run(&["invariants", s(&unknot)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["writhe"], 0);
    assert_eq!(v["turning"], 2);
    assert_eq!(v["cycle"], serde_json::json!(["capR", "cupL"]));
    assert_eq!(v["components"], 1);

    let knot = write(dir.path(), "k.bmc", fixtures::WHOLE_PROCESS_ORIENTED);
    let v: serde_json::Value = serde_json::from_slice(&run(&["invariants", s(&knot)]).stdout).unwrap();
    assert_eq!(v["writhe"], 2);

    let bad = write(dir.path(), "bad.bmc", "capR @ 0\ncupR @ 0\n");
    let o = run(&["check", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("type error"));
    assert_eq!(
        run(&["invariants", s(&dir.path().join("missing"))]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn json_outputs_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let knot = write(dir.path(), "k.bmc", fixtures::WHOLE_PROCESS_ORIENTED);
    for args in [
        vec!["--json", "check", s(&knot)],
        vec!["--json", "bridge", s(&knot)],
        vec!["--json", "oracle", s(&knot)],
        vec!["--json", "equiv", s(&knot), s(&knot)],
        vec!["--json", "braid", "equal", "-n", "3", "s1", "s2"],
    ] {
        let o = run(&args);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object(), "{args:?}");
    }
}

#[test]
fn render_draws_caps_cups_and_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let knot = write(dir.path(), "k.bmc", fixtures::EXAMPLE_KNOT);
    let out = stdout(&run(&["render", s(&knot)]));
    assert!(out.contains("/\\") && out.contains("\\/"));
    assert!(out.contains('x') && out.contains("x\u{304}"));
}

#[test]
fn orient_matches_reference_and_rejects_links() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write(dir.path(), "raw.txt", fixtures::WHOLE_PROCESS_UNORIENTED);
    let o = run(&["orient", s(&raw)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fixtures::WHOLE_PROCESS_ORIENTED);
    let reversed = stdout(&run(&["orient", "--reverse", s(&raw)]));
    assert!(reversed.starts_with("capL @ 0"));

    let minimal = write(dir.path(), "min.txt", "cap @ 0\ncup @ 0\n");
    assert_eq!(stdout(&run(&["orient", s(&minimal)])), "capR @ 0\ncupL @ 0\n");

    let two = write(dir.path(), "two.txt", "cap @ 0\ncup @ 0\ncap @ 0\ncup @ 0\n");
    assert_eq!(run(&["orient", s(&two)]).status.code(), Some(1));
}

#[test]
fn reduce_writes_instance() {
    let dir = tempfile::tempdir().unwrap();
    let knot = write(dir.path(), "knot.bmc", fixtures::WHOLE_PROCESS_ORIENTED);
    let out = dir.path().join("out");
    let o = run(&["reduce", s(&knot), "--out-dir", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rhs = std::fs::read_to_string(out.join("knot.rhs.bmc")).unwrap();
    let expected = braidword::build_instance(&fixtures::whole_process_oriented()).unwrap();
    assert_eq!(rhs, expected.rhs_text());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("knot.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["manifest"]["writhe"], 2);

    // both sides report the same writhe and cycle
    let inv = |p: &Path| -> serde_json::Value { serde_json::from_slice(&run(&["invariants", s(p)]).stdout).unwrap() };
    let (l, r) = (inv(&out.join("knot.lhs.bmc")), inv(&out.join("knot.rhs.bmc")));
    assert_eq!(l["writhe"], r["writhe"]);
    assert_eq!(l["cycle"], r["cycle"]);

    let unknot = write(dir.path(), "u.bmc", "capR @ 0\ncupL @ 0\n");
    run(&["reduce", s(&unknot), "--out-dir", s(&out)]);
    assert_eq!(
        std::fs::read_to_string(out.join("u.rhs.bmc")).unwrap(),
        "capR @ 0\ncupL @ 0\n"
    );

    let open = write(dir.path(), "open.bmc", "dom: ^ ^\nsigma+ @ 0\n");
    assert_eq!(run(&["reduce", s(&open), "--out-dir", s(&out)]).status.code(), Some(1));
}

#[test]
fn equiv_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let left = write(dir.path(), "l.bmc", fixtures::ISOTOPIC_LEFT);
    let right = write(dir.path(), "r.bmc", fixtures::ISOTOPIC_RIGHT);
    assert_eq!(run(&["equiv", s(&left), s(&left)]).status.code(), Some(0));
    let o = run(&["--json", "equiv", s(&left), s(&right)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "equal");
    assert!(!v["path"].as_array().unwrap().is_empty());

    let knot = write(dir.path(), "k.bmc", fixtures::WHOLE_PROCESS_ORIENTED);
    let partner = write(dir.path(), "p.bmc", fixtures::WHOLE_PROCESS_REALIZATION);
    let o = run(&["equiv", "--max-states", "100", s(&knot), s(&partner)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("unknown"));

    let unknot = write(dir.path(), "u.bmc", "capR @ 0\ncupL @ 0\n");
    assert_eq!(run(&["equiv", s(&left), s(&unknot)]).status.code(), Some(1));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let knot = write(dir.path(), "k.bmc", fixtures::WHOLE_PROCESS_ORIENTED);
    let partner = write(dir.path(), "p.bmc", fixtures::WHOLE_PROCESS_REALIZATION);
    let cfg = write(dir.path(), "c.toml", "max_states = 60\noutput = \"json\"\n");
    let o = bin()
        .env("BRAIDWORD_CONFIG", &cfg)
        .args(["equiv", s(&knot), s(&partner)])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "unknown");
    assert!(v["stats"]["states_visited"].as_u64().unwrap() <= 60);

    let small = write(dir.path(), "limit.toml", "crossing_limit = 3\n");
    let o = run(&["--config", s(&small), "oracle", s(&knot)]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--config", s(&small), "oracle", "--crossing-limit", "10", s(&knot)]);
    assert_eq!(o.status.code(), Some(0));

    let broken = write(dir.path(), "broken.toml", "max_states = 0\n");
    let o = bin()
        .env("BRAIDWORD_CONFIG", &broken)
        .args(["check", s(&knot)])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn braid_equal_exit_codes() {
    assert_eq!(
        run(&["braid", "equal", "-n", "3", "s1 s2 s1", "s2 s1 s2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["braid", "equal", "-n", "3", "s1 s2", "s2 s1"]).status.code(),
        Some(4)
    );
    assert_eq!(
        run(&["braid", "equal", "-n", "3", "s1 s3", "s1"]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let knot = write(dir.path(), "k.bmc", fixtures::WHOLE_PROCESS_ORIENTED);
    let partner = write(dir.path(), "p.bmc", fixtures::WHOLE_PROCESS_REALIZATION);
    let out = stdout(&run(&["oracle", s(&knot)]));
    assert_eq!(out.lines().last(), Some("knotted"));
    assert!(out.lines().next().unwrap().contains("-20:1"));
    assert_eq!(stdout(&run(&["oracle", s(&partner)])), "0:1\nconsistent-with-unknot\n");
}

#[test]
fn commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let knot = write(dir.path(), "k.bmc", fixtures::EXAMPLE_KNOT);
    for cmd in ["bridge", "render", "invariants", "oracle"] {
        assert_eq!(run(&[cmd, s(&knot)]).stdout, run(&[cmd, s(&knot)]).stdout, "{cmd}");
    }
    let (a, b) = fixtures::braid_relation_pair();
    let pa = write(dir.path(), "a.bmc", &braidword::serialize_diagram(&a));
    let pb = write(dir.path(), "b.bmc", &braidword::serialize_diagram(&b));
    assert_eq!(
        run(&["equiv", s(&pa), s(&pb)]).stdout,
        run(&["equiv", s(&pa), s(&pb)]).stdout
    );
}
