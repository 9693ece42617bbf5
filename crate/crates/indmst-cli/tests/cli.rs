//! End-to-end checks of the installed binary: output contents, the exit-code
//! contract, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_indmst");

const SQUARE: &str = "\
p ind-mst 4 6
e 1 2 4 1
e 2 3 5 1
e 3 4 6 1
e 4 1 7 1
e 1 3 1 0
e 2 4 2 0
";

const DISCONNECTED: &str = "\
p ind-mst 4 2
e 1 2 1 1
e 3 4 1 1
";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_square_reports_objective_33() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "square.txt", SQUARE);
    for algorithm in ["greedy", "simplified", "efficient", "brute"] {
        let out = run(&["solve", "--algorithm", algorithm, &path]);
        assert!(out.status.success(), "{algorithm}: {out:?}");
        assert!(
            stdout(&out).contains("\"objective\": 33"),
            "{algorithm} output:\n{}",
            stdout(&out)
        );
    }
}

#[test]
fn solve_square_tsv_lists_step_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "square.txt", SQUARE);
    let out = run(&["solve", "--output", "tsv", &path]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("objective\t33"), "{text}");
    assert!(text.contains("ultimate_weight\t7"), "{text}");
}

#[test]
fn solve_trace_flag_audits_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "square.txt", SQUARE);
    let out = run(&["solve", "--trace", &path]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("final-state: pass"), "{err}");
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["solve", "/definitely/not/here.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_instance_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.txt", "p ind-mst 2 1\ne 1 9 5 1\n");
    let out = run(&["solve", &path]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn disconnected_instance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "disc.txt", DISCONNECTED);
    let out = run(&["solve", &path]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn brute_over_cap_exits_4_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "square.txt", SQUARE);
    let out = run(&["solve", "--algorithm", "brute", "--cap", "1", &path]);
    assert_eq!(out.status.code(), Some(4), "{out:?}");

    let out = Command::new(BIN)
        .args(["solve", "--algorithm", "brute", &path])
        .env("INDMST_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{out:?}");

    // an explicit flag beats the environment
    let out = Command::new(BIN)
        .args(["solve", "--algorithm", "brute", "--cap", "12", &path])
        .env("INDMST_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn gen_is_byte_deterministic_and_solvable() {
    let args = ["gen", "--n", "6", "--m", "12", "--seed", "41"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "gen.txt", &stdout(&first));
    let solve = run(&["solve", &path]);
    assert!(solve.status.success(), "{solve:?}");
    let verify = run(&["verify", &path]);
    assert!(verify.status.success(), "{verify:?}");
}

#[test]
fn verify_square_lists_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "square.txt", SQUARE);
    let out = run(&["verify", &path]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    for check in [
        "objective-equivalence: pass",
        "lower-bound-identity: pass",
        "trace-audit: pass",
        "extension-property: pass",
        "verdict: pass",
    ] {
        assert!(text.contains(check), "missing '{check}' in:\n{text}");
    }
}

#[test]
fn verify_corpus_output_is_independent_of_jobs() {
    let serial = run(&["verify", "--corpus", "16", "--seed", "3", "--jobs", "1"]);
    let parallel = run(&["verify", "--corpus", "16", "--seed", "3", "--jobs", "4"]);
    assert!(serial.status.success(), "{serial:?}");
    assert!(parallel.status.success(), "{parallel:?}");
    assert_eq!(serial.stdout, parallel.stdout);
    assert!(stdout(&serial).contains("verdict: pass"));
}

#[test]
fn trace_square_passes_audit() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "square.txt", SQUARE);
    let out = run(&["trace", &path]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("objective: 33"), "{text}");
    assert!(text.contains("final-state: pass"), "{text}");
    assert!(text.contains("swap: remove 1, add 4, gain 4"), "{text}");
}

#[test]
fn verify_without_input_or_corpus_exits_2() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}
