#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use hof::lang::{parse, Term};

/// f(1) = 1, f(n) = f(n-1) + n, applied to `n`.
pub fn sum_program(n: u64) -> Arc<Term> {
    parse(&format!(r"pr[0](1, \n:N. \r:N. add r (succ n)) {n}")).unwrap()
}

/// iter[N] n (\i:N. \a:N. add a i) 1
pub fn triangular_iter(n: u64) -> Arc<Term> {
    parse(&format!(r"iter[N] {n} (\i:N. \a:N. add a i) 1")).unwrap()
}

pub fn read_program(name: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/programs/");
    std::fs::read_to_string(format!("{path}{name}")).unwrap()
}
