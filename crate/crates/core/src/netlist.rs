//! Netlist and DOT serialization of circuits.
//!
//! The text netlist holds only the first-order residue: primitive boards,
//! the wires between them, the sockets fed by external inputs and the root
//! outputs. It is byte-deterministic for a given circuit.

use std::collections::BTreeMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

use crate::circuit::{BoardId, Circuit, CircuitError, Residue};

pub const NETLIST_VERSION: u32 = 1;

/// Content hash of a program's canonical text.
pub fn source_hash(source: &str) -> String {
    hex::encode(Sha256::digest(source.as_bytes()))
}

/// Serializes the residue of an elaborated circuit. Fails with
/// `NotFirstOrder` while higher-order structure is reachable from the root.
pub fn emit_netlist(c: &Circuit) -> Result<String, CircuitError> {
    let residue = Residue::of(c)?;
    let mut out = String::new();
    writeln!(out, "hofnetlist {NETLIST_VERSION}").unwrap();
    writeln!(out, "source sha256:{}", source_hash(c.source())).unwrap();
    for (id, (kind, ty)) in &residue.boards {
        writeln!(out, "board {id} {kind} : {ty}").unwrap();
    }
    for link in &residue.links {
        writeln!(out, "link {link}").unwrap();
    }
    for link in &residue.inputs {
        writeln!(out, "input {link}").unwrap();
    }
    for root in &residue.roots {
        writeln!(out, "root {root}").unwrap();
    }
    Ok(out)
}

fn node(id: BoardId) -> String {
    format!("b{id}")
}

/// Renders any circuit, elaborated or not, as a DOT digraph. Boards are nodes
/// labelled `<kind>#<id>`; expanded shells become clusters around the boards
/// their expansion created.
pub fn emit_dot(c: &Circuit) -> String {
    let mut children: BTreeMap<Option<BoardId>, Vec<BoardId>> = BTreeMap::new();
    for b in c.boards() {
        children.entry(b.parent).or_default().push(b.id);
    }
    let mut out = String::from("digraph hof {\n  rankdir=LR;\n  node [shape=box];\n");
    if let Some(top) = children.get(&None) {
        for id in top {
            write_board(c, &children, *id, 1, &mut out);
        }
    }
    for link in c.links() {
        writeln!(
            out,
            "  {} -> {} [label=\"{} -> {}\"];",
            node(link.from.board),
            node(link.to.board),
            link.from.path,
            link.to.path
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn write_board(c: &Circuit, children: &BTreeMap<Option<BoardId>, Vec<BoardId>>, id: BoardId, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let board = c.board(id);
    let label = format!("{}#{}", board.kind, id);
    match children.get(&Some(id)) {
        None => writeln!(out, "{pad}{} [label=\"{label}\"];", node(id)).unwrap(),
        Some(inner) => {
            writeln!(out, "{pad}subgraph cluster_{id} {{").unwrap();
            writeln!(out, "{pad}  label=\"{label}\";").unwrap();
            writeln!(out, "{pad}  {} [label=\"{label}\", shape=point];", node(id)).unwrap();
            for child in inner {
                write_board(c, children, *child, depth + 1, out);
            }
            writeln!(out, "{pad}}}").unwrap();
        }
    }
}
