use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use hof::circuit::CircuitError;
use hof::cli::{circuit_eval, cmd_fuzz, EXIT_ERROR, EXIT_FUEL, EXIT_IO, EXIT_OK};
use hof::gen::GenConfig;
use hof::lang::Term;

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name)
}

fn hof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hof")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_prints_types() {
    let o = hof(&["check", path_str(&program("iterator.hof"))]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(stdout(&o), "N -> (N -> N -> N) -> N -> N\n");

    let dir = tempfile::tempdir().unwrap();
    let succ = dir.path().join("succ.hof");
    std::fs::write(&succ, "main = succ\n").unwrap();
    let o = hof(&["check", path_str(&succ)]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(EXIT_OK), "N -> N\n".to_string()));

    let o = hof(&["check", path_str(&program("ill_typed.hof"))]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&o.stderr).contains("type"));

    let o = hof(&["check", path_str(&dir.path().join("missing.hof"))]);
    assert_eq!(o.status.code(), Some(EXIT_IO));
}

#[test]
fn eval_on_both_engines() {
    let sum = program("sum5.hof");
    for engine in ["symbolic", "circuit"] {
        let o = hof(&["eval", path_str(&sum), "--engine", engine]);
        assert_eq!((o.status.code(), stdout(&o)), (Some(EXIT_OK), "15\n".to_string()), "{engine}");
    }
    let o = hof(&["eval", path_str(&sum), "--engine", "symbolic", "--fuel", "2"]);
    assert_eq!(o.status.code(), Some(EXIT_FUEL));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FuelExhausted"));
    let o = hof(&["eval", path_str(&sum), "--engine", "circuit", "--fuel", "2"]);
    assert_eq!(o.status.code(), Some(EXIT_FUEL));
    let o = hof(&["eval", path_str(&program("double_comp.hof"))]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
}

#[test]
fn eval_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.txt");
    let o = hof(&["eval", path_str(&program("sum5.hof")), "--trace", path_str(&trace)]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("step 1 ["));
    assert!(text.ends_with("normal: 15\n"));

    let log = dir.path().join("events.txt");
    let o = hof(&["eval", path_str(&program("sum5.hof")), "--engine", "circuit", "--trace", path_str(&log)]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.contains("expand 0 PR-SHELL n=5\n"));
}

#[test]
fn netlist_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.net");
    let o = hof(&["netlist", path_str(&program("double_comp.hof")), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("board ")).count(), 2);

    let o = hof(&["netlist", path_str(&program("lit.hof")), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("board ")).count(), 1);

    let o = hof(&["netlist", path_str(&program("sum5.hof")), "-o", path_str(&out), "--format", "dot"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("digraph"));

    let ho = dir.path().join("ho.hof");
    std::fs::write(&ho, "main = \\f:N -> N. f 1\n").unwrap();
    let o = hof(&["netlist", path_str(&ho), "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotFirstOrder"));
}

#[test]
fn diff_compares_engines() {
    let o = hof(&["diff", path_str(&program("sum5.hof"))]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(EXIT_OK), "symbolic=15 circuit=15\n".to_string()));
    let o = hof(&["diff", path_str(&program("lit.hof"))]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(EXIT_OK), "symbolic=7 circuit=7\n".to_string()));
    let o = hof(&["diff", path_str(&program("sum5.hof")), "--fuel", "3"]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
}

#[test]
fn pinned_corpus_agrees() {
    for name in ["sum5.hof", "triangular.hof", "twice.hof"] {
        let o = hof(&["diff", path_str(&program(name))]);
        assert_eq!(o.status.code(), Some(EXIT_OK), "{name}");
    }
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["fuzz", "--count", "50", "--seed", "7", "--max-depth", "4", "--max-count", "5"];
    let (a, b) = (hof(&args), hof(&args));
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    let o = hof(&["fuzz", "--count", "1", "--seed", "0", "--max-depth", "0", "--max-count", "1"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
}

/// Drops every `succ` board's effect by running the program with `succ`
/// replaced by the identity.
fn broken_engine(t: &Arc<Term>, fuel: usize) -> Result<u64, CircuitError> {
    let text = t.to_string().replace("succ", "id[N]");
    circuit_eval(&hof::parse(&text).unwrap(), fuel)
}

#[test]
fn fuzz_reports_counterexamples() {
    let mut out = Vec::new();
    let cfg = GenConfig { max_depth: 4, max_count: 5 };
    let failures = cmd_fuzz(40, 3, cfg, broken_engine, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(failures > 0);
    let first = text.lines().find(|l| l.starts_with("counterexample ")).unwrap();
    let program = first.split_once(": ").unwrap().1;
    assert!(hof::parse(program).is_ok());
    assert!(text.ends_with(&format!("{failures} disagreements\n")));
}
