//! Wire-level evaluation.
//!
//! Routing boards (expanded shells, pairs, projections) only pass values
//! through, so the value on any terminal is found by following incoming links
//! back to a primitive board's output plug. Collapsing those chains yields the
//! first-order residue: primitive boards and direct links between them.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Debug;

use num_traits::{CheckedAdd, FromPrimitive, Unsigned};

use crate::types::Ty;

use super::board::{BoardId, BoardKind};
use super::port::{leaves, Path, Polarity, Step, Terminal};
use super::{Circuit, CircuitError, Link};

/// Natural-number carrier for dataflow evaluation (`u32`, `u64`, `u128`,
/// big integers, ...).
pub trait NatValue: Clone + Debug + Unsigned + CheckedAdd + FromPrimitive {}

impl<T: Clone + Debug + Unsigned + CheckedAdd + FromPrimitive> NatValue for T {}

/// The first-order circuit left after collapsing every routing chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    pub boards: BTreeMap<BoardId, (BoardKind, Ty)>,
    pub links: BTreeSet<Link>,
    /// Output terminals, each on a primitive board or an external input.
    pub roots: Vec<Terminal>,
    /// Sockets fed directly by an external input of the root.
    pub inputs: BTreeSet<Link>,
    /// Every board a value passes through on its way to the roots, routing
    /// boards included.
    pub traversed: BTreeSet<BoardId>,
}

fn raw_polarity(path: &Path) -> Polarity {
    if path.flips() % 2 == 0 {
        Polarity::Plug
    } else {
        Polarity::Socket
    }
}

fn is_primitive_plug(c: &Circuit, t: &Terminal) -> bool {
    c.board(t.board).kind.is_primitive() && raw_polarity(&t.path) == Polarity::Plug
}

/// Follows incoming links from `t` back to the primitive plug or external
/// input that drives it.
fn source_of(
    c: &Circuit,
    t: &Terminal,
    inputs: &BTreeSet<Terminal>,
    traversed: &mut BTreeSet<BoardId>,
) -> Result<Terminal, CircuitError> {
    let mut cur = t.clone();
    for _ in 0..=c.links().len() {
        traversed.insert(cur.board);
        if is_primitive_plug(c, &cur) || inputs.contains(&cur) {
            return Ok(cur);
        }
        match c.incoming(&cur) {
            Some(link) => cur = link.from.clone(),
            None => {
                let board = c.board(cur.board);
                return Err(if board.kind.is_shell() && raw_polarity(&cur.path) == Polarity::Plug {
                    CircuitError::NotFirstOrder { terminal: cur, ty: board.ty.clone() }
                } else {
                    CircuitError::DanglingSocket(cur)
                });
            }
        }
    }
    Err(CircuitError::CycleDetected(t.clone()))
}

fn input_sockets(kind: BoardKind) -> Vec<Path> {
    match kind {
        BoardKind::PrimSucc => vec![Path(vec![Step::In])],
        BoardKind::PrimAdd => vec![Path(vec![Step::In]), Path(vec![Step::Out, Step::In])],
        _ => Vec::new(),
    }
}

impl Residue {
    /// The residue reachable from `outputs`.
    pub fn from_terminals(c: &Circuit, outputs: &[Terminal]) -> Result<Residue, CircuitError> {
        let mut residue = Residue {
            boards: BTreeMap::new(),
            links: BTreeSet::new(),
            roots: Vec::new(),
            inputs: BTreeSet::new(),
            traversed: BTreeSet::new(),
        };
        let inputs: BTreeSet<Terminal> = c.root_inputs().into_iter().collect();
        let mut work = VecDeque::new();
        for t in outputs {
            let src = source_of(c, t, &inputs, &mut residue.traversed)?;
            if !inputs.contains(&src) {
                work.push_back(src.board);
            }
            residue.roots.push(src);
        }
        while let Some(id) = work.pop_front() {
            let board = c.board(id);
            if residue.boards.insert(id, (board.kind, board.ty.clone())).is_some() {
                continue;
            }
            for path in input_sockets(board.kind) {
                let socket = Terminal::new(id, path);
                let src = source_of(c, &socket, &inputs, &mut residue.traversed)?;
                if inputs.contains(&src) {
                    residue.inputs.insert(Link { from: src, to: socket });
                } else {
                    work.push_back(src.board);
                    residue.links.insert(Link { from: src, to: socket });
                }
            }
        }
        Ok(residue)
    }

    /// The residue of a whole circuit, reachable from its root. Fails with
    /// `NotFirstOrder` if higher-order structure is still reachable or the
    /// root itself takes a function argument.
    pub fn of(c: &Circuit) -> Result<Residue, CircuitError> {
        let root = c.root().ok_or_else(|| CircuitError::Internal("circuit has no root".into()))?;
        if let Some((suffix, _)) = leaves(&root.ty).into_iter().find(|(p, _)| p.flips() > 1) {
            return Err(CircuitError::NotFirstOrder { terminal: root.terminal(&suffix), ty: root.ty.clone() });
        }
        Residue::from_terminals(c, &c.root_outputs())
    }

    /// Values of every primitive output in topological order.
    pub fn evaluate<V: NatValue>(&self) -> Result<HashMap<BoardId, V>, CircuitError> {
        let mut driver: HashMap<&Terminal, &Terminal> = HashMap::new();
        let mut pending: HashMap<BoardId, usize> = self.boards.keys().map(|id| (*id, 0)).collect();
        let mut consumers: HashMap<BoardId, Vec<BoardId>> = HashMap::new();
        for link in &self.links {
            driver.insert(&link.to, &link.from);
            *pending.get_mut(&link.to.board).expect("link into residue board") += 1;
            consumers.entry(link.from.board).or_default().push(link.to.board);
        }
        let mut ready: VecDeque<BoardId> =
            pending.iter().filter(|(_, n)| **n == 0).map(|(id, _)| *id).collect::<BTreeSet<_>>().into_iter().collect();
        let mut values: HashMap<BoardId, V> = HashMap::new();
        while let Some(id) = ready.pop_front() {
            let kind = self.boards[&id].0;
            let input = |path: Path| -> Result<V, CircuitError> {
                let socket = Terminal::new(id, path);
                match driver.get(&socket) {
                    Some(src) => Ok(values[&src.board].clone()),
                    None => Err(CircuitError::DanglingSocket(socket)),
                }
            };
            let out_terminal = || Terminal::new(id, output_path(kind));
            let v = match kind {
                BoardKind::Lit(n) => V::from_u64(n).ok_or_else(|| CircuitError::Overflow(out_terminal()))?,
                BoardKind::PrimSucc => input(Path(vec![Step::In]))?
                    .checked_add(&V::one())
                    .ok_or_else(|| CircuitError::Overflow(out_terminal()))?,
                BoardKind::PrimAdd => input(Path(vec![Step::In]))?
                    .checked_add(&input(Path(vec![Step::Out, Step::In]))?)
                    .ok_or_else(|| CircuitError::Overflow(out_terminal()))?,
                _ => return Err(CircuitError::DanglingSocket(Terminal::new(id, Path(vec![Step::In])))),
            };
            values.insert(id, v);
            for next in consumers.get(&id).into_iter().flatten() {
                let n = pending.get_mut(next).expect("consumer in residue");
                *n -= 1;
                if *n == 0 {
                    ready.push_back(*next);
                }
            }
        }
        if let Some((id, _)) = pending.iter().find(|(id, _)| !values.contains_key(id)) {
            return Err(CircuitError::CycleDetected(Terminal::new(*id, output_path(self.boards[id].0))));
        }
        Ok(values)
    }

    /// Value on the first root.
    pub fn root_value<V: NatValue>(&self) -> Result<V, CircuitError> {
        let root = self.roots.first().ok_or_else(|| CircuitError::Internal("residue has no root".into()))?;
        let values = self.evaluate::<V>()?;
        values.get(&root.board).cloned().ok_or_else(|| CircuitError::DanglingSocket(root.clone()))
    }
}

/// Output plug of a residue board.
pub(crate) fn output_path(kind: BoardKind) -> Path {
    match kind {
        BoardKind::Lit(_) => Path::root(),
        BoardKind::PrimAdd => Path(vec![Step::Out, Step::Out]),
        _ => Path(vec![Step::Out]),
    }
}

/// Evaluates an elaborated circuit whose root has type `N`.
pub fn run(c: &Circuit) -> Result<u64, CircuitError> {
    run_as::<u64>(c)
}

/// [`run`] over any natural-number carrier.
pub fn run_as<V: NatValue>(c: &Circuit) -> Result<V, CircuitError> {
    let root = c.root().ok_or_else(|| CircuitError::Internal("circuit has no root".into()))?;
    if !root.ty.is_nat() {
        return Err(CircuitError::RootNotNat(root.ty.clone()));
    }
    Residue::of(c)?.root_value::<V>()
}

/// Value on a single terminal of a possibly partial circuit.
pub(crate) fn value_at(c: &Circuit, t: &Terminal) -> Result<u64, CircuitError> {
    Residue::from_terminals(c, std::slice::from_ref(t))?.root_value::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Bundle;

    #[test]
    fn literal_circuit() {
        let mut c = Circuit::new();
        let seven = c.add_board(BoardKind::Lit(7), Ty::Nat);
        c.set_root(Bundle::outer(seven, Ty::Nat));
        assert_eq!(run(&c).unwrap(), 7);
        assert_eq!(run_as::<u128>(&c).unwrap(), 7);
    }

    #[test]
    fn dangling_and_cycles() {
        let nn = Ty::arrow(Ty::Nat, Ty::Nat);
        let mut c = Circuit::new();
        let s = c.add_board(BoardKind::PrimSucc, nn.clone());
        let sb = Bundle::outer(s, nn.clone());
        c.set_root(sb.sub(Step::Out));
        assert!(matches!(run(&c), Err(CircuitError::DanglingSocket(_))));
        // feed succ its own output
        c.connect(&sb.sub(Step::Out), &sb.sub(Step::In)).unwrap();
        assert!(matches!(run(&c), Err(CircuitError::CycleDetected(_))));
    }

    #[test]
    fn overflow_is_detected() {
        let nn = Ty::arrow(Ty::Nat, Ty::Nat);
        let mut c = Circuit::new();
        let s = c.add_board(BoardKind::PrimSucc, nn.clone());
        let big = c.add_board(BoardKind::Lit(u64::from(u8::MAX)), Ty::Nat);
        let sb = Bundle::outer(s, nn);
        c.apply_links(&sb, &Bundle::outer(big, Ty::Nat)).unwrap();
        c.set_root(sb.sub(Step::Out));
        assert!(matches!(run_as::<u8>(&c), Err(CircuitError::Overflow(_))));
        assert_eq!(run(&c).unwrap(), 256);
    }
}
