//! Objects as boards of plugs and sockets.
//!
//! Composition and application establish links between boards. Higher-order
//! structure (lambda, composition, iterator and recursion shells) is expanded
//! by [`elaborate`] until only first-order wiring between primitive boards
//! is reachable from the root, which [`run`] then evaluates as a dataflow
//! graph.
//!
//! Links always join two `N` terminals. Which end is the source follows from
//! the raw polarity of each terminal on its board: a plug is a source seen
//! from outside and a target seen from inside, and a socket the other way
//! round. Every target has at most one incoming link, so the wire driving a
//! terminal is always unique.

mod board;
mod dataflow;
mod elaborate;
mod port;

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::lang::TypeError;
use crate::types::Ty;

pub use board::{Board, BoardId, BoardKind};
pub use dataflow::{run, run_as, NatValue, Residue};
pub use elaborate::{elaborate, instantiate};
pub use port::{leaves, type_at, Bundle, Path, Polarity, PortTree, Step, Terminal};

use elaborate::ElabState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("link type mismatch: expected {expected}, found {found}")]
    LinkTypeMismatch { expected: Ty, found: Ty },
    #[error("socket {0} already has an incoming link")]
    SocketOccupied(Terminal),
    #[error("elaboration fuel exhausted after {0} expansions")]
    FuelExhausted(usize),
    #[error("count wire {0} does not reduce to a literal")]
    UnresolvedCount(Terminal),
    #[error("socket {0} is not linked")]
    DanglingSocket(Terminal),
    #[error("cycle through {0} in the wire graph")]
    CycleDetected(Terminal),
    #[error("port {terminal} has higher-order type {ty}")]
    NotFirstOrder { terminal: Terminal, ty: Ty },
    #[error("root has type {0}, expected N")]
    RootNotNat(Ty),
    #[error("arithmetic overflow at {0}")]
    Overflow(Terminal),
    #[error("ill-typed program: {0}")]
    Type(#[from] TypeError),
    #[error("internal elaboration error: {0}")]
    Internal(String),
}

/// A connector from a source terminal to a target terminal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub from: Terminal,
    pub to: Terminal,
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

/// One reconfiguration step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    BoardAdded { id: BoardId, kind: BoardKind, ty: Ty },
    LinkAdded(Link),
    Expanded { id: BoardId, kind: BoardKind, count: Option<u64> },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::BoardAdded { id, kind, ty } => write!(f, "board {id} {kind} : {ty}"),
            Event::LinkAdded(link) => write!(f, "link {link}"),
            Event::Expanded { id, kind, count: Some(n) } => write!(f, "expand {id} {kind} n={n}"),
            Event::Expanded { id, kind, count: None } => write!(f, "expand {id} {kind}"),
        }
    }
}

/// Bookkeeping for one application: the argument type and how many link
/// events it appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplyRecord {
    pub arg_ty: Ty,
    pub links: usize,
}

/// The two ends a composition exposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composite {
    pub input: Bundle,
    pub output: Bundle,
}

pub struct Circuit {
    boards: Vec<Board>,
    links: Vec<Link>,
    incoming: HashMap<Terminal, usize>,
    events: Vec<Event>,
    applications: Vec<ApplyRecord>,
    root: Option<Bundle>,
    source: String,
    elaborated: bool,
    elab: Option<Box<ElabState>>,
}

impl Default for Circuit {
    fn default() -> Self {
        Circuit::new()
    }
}

impl Circuit {
    pub fn new() -> Circuit {
        Circuit {
            boards: Vec::new(),
            links: Vec::new(),
            incoming: HashMap::new(),
            events: Vec::new(),
            applications: Vec::new(),
            root: None,
            source: String::new(),
            elaborated: false,
            elab: None,
        }
    }

    pub fn boards(&self) -> &[Board] {
        &self.boards
    }

    pub fn board(&self, id: BoardId) -> &Board {
        &self.boards[id.0 as usize]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn applications(&self) -> &[ApplyRecord] {
        &self.applications
    }

    pub fn root(&self) -> Option<&Bundle> {
        self.root.as_ref()
    }

    pub fn set_root(&mut self, root: Bundle) {
        self.root = Some(root);
    }

    /// Canonical text of the program the circuit was built from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_elaborated(&self) -> bool {
        self.elaborated
    }

    /// The link driving `t`, if any.
    pub fn incoming(&self, t: &Terminal) -> Option<&Link> {
        self.incoming.get(t).map(|&i| &self.links[i])
    }

    pub fn add_board(&mut self, kind: BoardKind, ty: Ty) -> BoardId {
        let id = BoardId(self.boards.len() as u32);
        self.events.push(Event::BoardAdded { id, kind, ty: ty.clone() });
        self.boards.push(Board::new(id, kind, ty));
        id
    }

    fn board_mut(&mut self, id: BoardId) -> &mut Board {
        &mut self.boards[id.0 as usize]
    }

    fn log_expand(&mut self, id: BoardId, count: Option<u64>) {
        let kind = self.board(id).kind;
        self.events.push(Event::Expanded { id, kind, count });
    }

    fn check_terminal(&self, t: &Terminal) -> Result<(), CircuitError> {
        let board = self
            .boards
            .get(t.board.0 as usize)
            .ok_or_else(|| CircuitError::Internal(format!("no board {}", t.board)))?;
        match board.interface.at(&t.path) {
            Some(PortTree::Terminal(_)) => Ok(()),
            _ => Err(CircuitError::Internal(format!("{t} is not a wire terminal"))),
        }
    }

    /// Adds a single wire link.
    pub fn add_link(&mut self, from: Terminal, to: Terminal) -> Result<(), CircuitError> {
        self.check_terminal(&from)?;
        self.check_terminal(&to)?;
        if self.incoming.contains_key(&to) {
            return Err(CircuitError::SocketOccupied(to));
        }
        self.incoming.insert(to.clone(), self.links.len());
        let link = Link { from, to };
        self.events.push(Event::LinkAdded(link.clone()));
        self.links.push(link);
        Ok(())
    }

    /// Links a providing bundle into a consuming bundle of the same type,
    /// one link per `N` leaf. Leaves under an odd number of arrow inputs run
    /// the other way. Returns the number of links added.
    pub fn connect(&mut self, provider: &Bundle, consumer: &Bundle) -> Result<usize, CircuitError> {
        if provider.ty != consumer.ty {
            return Err(CircuitError::LinkTypeMismatch {
                expected: consumer.ty.clone(),
                found: provider.ty.clone(),
            });
        }
        debug_assert_eq!(provider.polarity(), Polarity::Plug, "provider {provider:?}");
        debug_assert_eq!(consumer.polarity(), Polarity::Socket, "consumer {consumer:?}");
        let pairs: Vec<(Terminal, Terminal)> = leaves(&provider.ty)
            .into_iter()
            .map(|(suffix, flipped)| {
                let (p, c) = (provider.terminal(&suffix), consumer.terminal(&suffix));
                if flipped {
                    (c, p)
                } else {
                    (p, c)
                }
            })
            .collect();
        if let Some((_, to)) = pairs.iter().find(|(_, to)| self.incoming.contains_key(to)) {
            return Err(CircuitError::SocketOccupied(to.clone()));
        }
        let n = pairs.len();
        for (from, to) in pairs {
            self.add_link(from, to)?;
        }
        Ok(n)
    }

    /// Application as link establishment: the argument is plugged into the
    /// function's input subtree. A function-typed argument `A -> B` gets two
    /// links at base type: one handing it the function's `A` output, one
    /// returning its `B` result.
    pub fn apply_links(&mut self, function: &Bundle, arg: &Bundle) -> Result<usize, CircuitError> {
        let Some((dom, _)) = function.ty.as_arrow() else {
            return Err(CircuitError::LinkTypeMismatch {
                expected: Ty::arrow(arg.ty.clone(), Ty::Nat),
                found: function.ty.clone(),
            });
        };
        if *dom != arg.ty {
            return Err(CircuitError::LinkTypeMismatch { expected: dom.clone(), found: arg.ty.clone() });
        }
        let links = self.connect(arg, &function.sub(Step::In))?;
        self.applications.push(ApplyRecord { arg_ty: arg.ty.clone(), links });
        Ok(links)
    }

    /// Composition as a link from the output of `first` to the input of
    /// `second`. The composite takes `first`'s input and gives `second`'s
    /// output.
    pub fn compose_link(&mut self, first: &Bundle, second: &Bundle) -> Result<Composite, CircuitError> {
        let (Some(_), Some(_)) = (first.ty.as_arrow(), second.ty.as_arrow()) else {
            return Err(CircuitError::LinkTypeMismatch { expected: first.ty.clone(), found: second.ty.clone() });
        };
        self.connect(&first.sub(Step::Out), &second.sub(Step::In))?;
        Ok(Composite { input: first.sub(Step::In), output: second.sub(Step::Out) })
    }

    /// Terminals of the root bundle that carry results out of the circuit.
    pub fn root_outputs(&self) -> Vec<Terminal> {
        let Some(root) = &self.root else { return Vec::new() };
        leaves(&root.ty)
            .into_iter()
            .filter(|(_, flipped)| !flipped)
            .map(|(suffix, _)| root.terminal(&suffix))
            .collect()
    }

    /// Terminals of the root bundle where external inputs enter.
    pub fn root_inputs(&self) -> Vec<Terminal> {
        let Some(root) = &self.root else { return Vec::new() };
        leaves(&root.ty)
            .into_iter()
            .filter(|(_, flipped)| *flipped)
            .map(|(suffix, _)| root.terminal(&suffix))
            .collect()
    }

    pub fn write_event_log(&self, mut out: impl Write) -> io::Result<()> {
        for e in &self.events {
            writeln!(out, "{e}")?;
        }
        Ok(())
    }

    pub fn render_event_log(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }

    /// Replays the event log and checks that every link joins two wire
    /// terminals of existing boards and that no target ever has two incoming
    /// links.
    pub fn validate_event_log(&self) -> Result<(), CircuitError> {
        let mut replay = Circuit::new();
        for e in &self.events {
            match e {
                Event::BoardAdded { kind, ty, .. } => {
                    replay.add_board(*kind, ty.clone());
                }
                Event::LinkAdded(link) => replay.add_link(link.from.clone(), link.to.clone())?,
                Event::Expanded { id, .. } => {
                    if id.0 as usize >= replay.boards.len() {
                        return Err(CircuitError::Internal(format!("expansion of unknown board {id}")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Circuit")
            .field("boards", &self.boards.len())
            .field("links", &self.links.len())
            .field("root", &self.root)
            .field("elaborated", &self.elaborated)
            .finish()
    }
}
