mod common;

use std::sync::Arc;

use hof::circuit::{elaborate, instantiate, run, run_as, BoardKind, Circuit, CircuitError, Residue};
use hof::lang::{parse, Term};
use hof::netlist::{emit_dot, emit_netlist};
use hof::symbolic::evaluate_nat;
use num_bigint::BigUint;

use common::{read_program, sum_program};

fn elaborated(t: &Arc<Term>) -> Circuit {
    elaborate(instantiate(t).unwrap(), 1_000_000).unwrap()
}

fn traversed_with_origin(c: &Circuit, origin: &Arc<Term>) -> usize {
    let residue = Residue::of(c).unwrap();
    let id = Arc::as_ptr(origin) as usize;
    residue.traversed.iter().filter(|b| c.board(**b).origin == Some(id)).count()
}

#[test]
fn sum_at_five_has_one_base_and_four_stages() {
    let t = sum_program(5);
    let Term::App(pr, _) = &*t else { panic!() };
    let Term::Pr { h, g, .. } = &**pr else { panic!() };
    let c = elaborated(&t);
    assert_eq!(run(&c).unwrap(), 15);
    assert_eq!(traversed_with_origin(&c, g), 4);
    assert_eq!(traversed_with_origin(&c, h), 1);
    let expand: Vec<_> = c.events().iter().map(|e| e.to_string()).filter(|e| e.contains("PR-SHELL")).collect();
    assert_eq!(expand, ["board 0 PR-SHELL : N -> N", "expand 0 PR-SHELL n=5"]);
}

#[test]
fn iterator_of_succ_chains_three_boards() {
    let c = elaborated(&parse(r"iter[N] 4 (\n:N. succ) 1").unwrap());
    assert_eq!(run(&c).unwrap(), 4);
    let residue = Residue::of(&c).unwrap();
    let succs = residue.boards.values().filter(|(k, _)| *k == BoardKind::PrimSucc).count();
    assert_eq!(succs, 3);
    assert_eq!(residue.links.len(), 3);
}

#[test]
fn lambda_wiring_without_substitution() {
    let t = parse(r"(\y:N -> N. \x:N. y x) succ 3").unwrap();
    let c = elaborated(&t);
    assert_eq!(run(&c).unwrap(), 4);
    assert_eq!(run(&c).unwrap(), evaluate_nat(&t, 1000).unwrap());
}

#[test]
fn wide_values() {
    let c = elaborated(&parse("add 18446744073709551615 1").unwrap());
    assert!(matches!(run(&c), Err(CircuitError::Overflow(_))));
    let expected = BigUint::from(u64::MAX) + 1u32;
    assert_eq!(run_as::<BigUint>(&c).unwrap(), expected);
    assert_eq!(run_as::<u128>(&c).unwrap(), u128::from(u64::MAX) + 1);
}

#[test]
fn composition_netlist_matches_hand_count() {
    let c = elaborated(&parse(&read_program("double_comp.hof")).unwrap());
    let text = emit_netlist(&c).unwrap();
    let count = |p: &str| text.lines().filter(|l| l.starts_with(p)).count();
    assert_eq!((count("board "), count("link "), count("root ")), (2, 1, 1));
    assert!(text.lines().filter(|l| l.starts_with("board ")).all(|l| l.contains("PRIM-SUCC : N -> N")));
}

#[test]
fn netlist_counts_match_residue() {
    for src in ["7", "comp[N, N, N] (succ, succ) 2", r"\x:N. add x x", "(1, succ 2)"] {
        let c = elaborated(&parse(src).unwrap());
        let residue = Residue::of(&c).unwrap();
        let text = emit_netlist(&c).unwrap();
        let count = |p: &str| text.lines().filter(|l| l.starts_with(p)).count();
        assert_eq!(count("board "), residue.boards.len(), "{src}");
        assert_eq!(count("link "), residue.links.len(), "{src}");
        assert_eq!(count("root "), residue.roots.len(), "{src}");
    }
}

#[test]
fn higher_order_main_has_no_netlist() {
    let c = elaborated(&parse(r"\f:N -> N. f 1").unwrap());
    assert!(matches!(emit_netlist(&c), Err(CircuitError::NotFirstOrder { .. })));
    assert!(emit_dot(&c).starts_with("digraph"));
}

#[test]
fn sum_dot_has_four_stage_clusters() {
    let t = sum_program(5);
    let c = elaborated(&t);
    let dot = emit_dot(&c);
    let pr_cluster = dot.lines().position(|l| l.contains("subgraph cluster_0 ")).unwrap();
    let stage_clusters = dot
        .lines()
        .skip(pr_cluster)
        .filter(|l| l.trim_start().starts_with("label=\"LAMBDA-SHELL#"))
        .count();
    // each stage is a two-argument lambda: an outer and an inner shell
    assert_eq!(stage_clusters, 8);
    let outer: Vec<_> = c
        .boards()
        .iter()
        .filter(|b| b.parent == Some(c.boards()[0].id) && b.kind == BoardKind::LambdaShell)
        .map(|b| b.id)
        .collect();
    assert_eq!(outer.len(), 4);
    // consecutive stages are linked: stage i's result feeds stage i+1
    for pair in outer.windows(2) {
        let linked = c.links().iter().any(|l| l.from.board.0 >= pair[0].0 && l.to.board == pair[1]);
        assert!(linked);
    }
}

#[test]
fn event_log_replays() {
    for name in ["sum5.hof", "triangular.hof", "twice.hof", "double_comp.hof"] {
        let c = elaborated(&parse(&read_program(name)).unwrap());
        c.validate_event_log().unwrap();
        assert!(c.render_event_log().lines().all(|l| l.starts_with("board ")
            || l.starts_with("link ")
            || l.starts_with("expand ")));
    }
}
