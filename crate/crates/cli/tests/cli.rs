use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const TWO_CYCLE: &str = "dfa\nstates: 2\nletters: 1\n0 0 1\n1 0 0\n";
const IDENTITY: &str = "dfa\nstates: 3\nletters: a b\n0 a 0\n1 a 1\n2 a 2\n0 b 0\n1 b 1\n2 b 2\n";
const TRIVIAL: &str = "semigroup\norder: 1\n0\n";
const M3: &str = "semigroup\norder: 3\n# identity, e, i with {e, i} right-zero\n0 1 2\n1 1 2\n2 1 2\n";

fn loctest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loctest"))
        .args(args)
        .env_remove("LOCTEST_CAP")
        .output()
        .expect("binary runs")
}

fn loctest_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_loctest"))
        .args(args)
        .env_remove("LOCTEST_CAP")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_two_cycle_fails_with_condition_one() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "two_cycle.dfa", TWO_CYCLE);
    let out = loctest(&["check", "--property", "loc-idem", "--route", "graph", "--input", f.to_str().unwrap(), "--witness"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("loc-idem: fails"), "{text}");
    assert!(text.contains("GraphCondition1"), "{text}");
}

#[test]
fn check_trivial_semigroup_holds() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "trivial.sgp", TRIVIAL);
    let out = loctest(&["check", "--property", "right-lt", "--route", "oracle", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn routes_agree_on_every_property() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("two_cycle.dfa", TWO_CYCLE), ("identity.dfa", IDENTITY)] {
        let f = write(dir.path(), name, text);
        for property in ["loc-idem", "right-lt", "left-lt"] {
            let codes: Vec<Option<i32>> = ["graph", "semigroup", "oracle"]
                .iter()
                .map(|route| {
                    loctest(&["check", "--property", property, "--route", route, "--input", f.to_str().unwrap()])
                        .status
                        .code()
                })
                .collect();
            assert!(codes.iter().all(|c| *c == codes[0] && matches!(c, Some(0 | 1))), "{name} {property}: {codes:?}");
        }
    }
}

#[test]
fn json_verdict_round_trips_and_verifies() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "m3.sgp", M3);
    let out = loctest(&["check", "--property", "right-lt", "--route", "semigroup", "--input", f.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout(&out);
    let verdict = loctest::decide::Verdict::from_json(json.trim()).unwrap();
    assert!(!verdict.holds);
    assert_eq!(verdict.witness.as_ref().unwrap().variant_name(), "UnitSharing");
    for field in ["\"property\"", "\"holds\"", "\"route\"", "\"witness\"", "\"stats\""] {
        assert!(json.contains(field));
    }
    let v = write(dir.path(), "verdict.json", &json);
    let out = loctest(&["verify-witness", "--input", f.to_str().unwrap(), "--verdict", v.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    // a tampered witness is rejected
    let tampered = json.replace("\"index\":0", "\"index\":1");
    assert_ne!(tampered, json);
    let v = write(dir.path(), "tampered.json", &tampered);
    let out = loctest(&["verify-witness", "--input", f.to_str().unwrap(), "--verdict", v.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn graph_route_on_semigroup_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "m3.sgp", M3);
    let out = loctest(&["check", "--property", "loc-idem", "--route", "graph", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_input_and_flags_exit_two() {
    let dir = TempDir::new().unwrap();
    let dup = write(dir.path(), "dup.dfa", "dfa\nstates: 2\nletters: 1\n0 0 1\n0 0 1\n");
    let out = loctest(&["check", "--property", "loc-idem", "--route", "graph", "--input", dup.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = loctest(&["check", "--property", "nonsense", "--route", "graph", "--input", dup.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = loctest(&["check", "--property", "loc-idem", "--route", "graph", "--input", "/nonexistent/file"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    // three generators of the full transformation monoid on 3 points
    let f = write(
        dir.path(),
        "t3.dfa",
        "dfa\nstates: 3\nletters: 3\n0 0 1\n1 0 2\n2 0 0\n0 1 1\n1 1 0\n2 1 2\n0 2 0\n1 2 0\n2 2 2\n",
    );
    let path = f.to_str().unwrap();
    let out = loctest(&["check", "--property", "loc-idem", "--route", "oracle", "--input", path, "--cap", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_loctest"))
        .args(["semigroup-of", "--input", path])
        .env("LOCTEST_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = loctest(&["check", "--property", "loc-idem", "--route", "graph", "--input", path, "--product-cap", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn semigroup_of_two_cycle() {
    let out = loctest_stdin(&["semigroup-of", "--input", "-"], TWO_CYCLE);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "semigroup\norder: 2\n1 0\n0 1\n# word 0: 0\n# word 1: 0 0\n");
    // the printed table parses back
    assert_eq!(loctest::semigroup::parse_cayley(&stdout(&out)).unwrap().to_text(), "semigroup\norder: 2\n1 0\n0 1\n");
}

#[test]
fn gen_and_enumerate_stream_parseable_automata() {
    let out = loctest(&["gen", "--states", "3", "--letters", "2", "--completeness", "0.8", "--seed", "9", "--count", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(loctest::automaton::parse_dfa_many(&text).unwrap().len(), 7);
    assert_eq!(stdout(&loctest(&["gen", "--states", "3", "--letters", "2", "--completeness", "0.8", "--seed", "9", "--count", "7"])), text);

    let out = loctest(&["enumerate", "--states", "2", "--letters", "2", "--complete-only"]);
    assert_eq!(loctest::automaton::parse_dfa_many(&stdout(&out)).unwrap().len(), 16);
    let out = loctest(&["gen", "--states", "2", "--letters", "1", "--completeness", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cross_validate_is_identical_sequential_and_parallel() {
    let gen = loctest(&["gen", "--states", "4", "--letters", "2", "--completeness", "0.9", "--seed", "3", "--count", "40"]);
    let input = stdout(&gen);
    for format in ["text", "json", "csv"] {
        let seq = loctest_stdin(&["cross-validate", "--input", "-", "--format", format, "--sequential"], &input);
        let par = loctest_stdin(&["cross-validate", "--input", "-", "--format", format, "--jobs", "4"], &input);
        assert_eq!(seq.status.code(), Some(0));
        assert_eq!(par.status.code(), Some(0));
        assert_eq!(seq.stdout, par.stdout, "{format}");
    }
}

#[test]
fn cross_validate_exhaustive_suite() {
    let out = loctest(&["cross-validate", "--suite", "exhaustive", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let summary: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(summary["summary"]["instances"], 745);
    assert_eq!(summary["summary"]["disagreements"], 0);
    assert!(text.lines().next().unwrap().contains("ChaCha8Rng"));
}
