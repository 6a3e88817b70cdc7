use std::fmt;

use crate::types::Ty;

use super::port::{Polarity, PortTree};

/// Boards are numbered sequentially in creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoardId(pub u32);

impl fmt::Display for BoardId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoardKind {
    PrimSucc,
    PrimAdd,
    PrimId,
    Lit(u64),
    LambdaShell,
    CompBoard,
    IterShell,
    PrShell,
    Pair,
    Proj,
}

impl BoardKind {
    /// Boards that compute on wires; everything else only routes them.
    pub fn is_primitive(self) -> bool {
        matches!(self, BoardKind::PrimSucc | BoardKind::PrimAdd | BoardKind::Lit(_))
    }

    /// Boards whose internal wiring is created by expansion.
    pub fn is_shell(self) -> bool {
        matches!(
            self,
            BoardKind::LambdaShell | BoardKind::CompBoard | BoardKind::IterShell | BoardKind::PrShell | BoardKind::PrimId
        )
    }
}

impl fmt::Display for BoardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoardKind::PrimSucc => f.write_str("PRIM-SUCC"),
            BoardKind::PrimAdd => f.write_str("PRIM-ADD"),
            BoardKind::PrimId => f.write_str("PRIM-ID"),
            BoardKind::Lit(n) => write!(f, "LIT({n})"),
            BoardKind::LambdaShell => f.write_str("LAMBDA-SHELL"),
            BoardKind::CompBoard => f.write_str("COMP-BOARD"),
            BoardKind::IterShell => f.write_str("ITER-SHELL"),
            BoardKind::PrShell => f.write_str("PR-SHELL"),
            BoardKind::Pair => f.write_str("PAIR"),
            BoardKind::Proj => f.write_str("PROJ"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Board {
    pub id: BoardId,
    pub kind: BoardKind,
    pub ty: Ty,
    /// Plug polarity at the board's own type.
    pub interface: PortTree,
    /// The shell whose expansion created this board.
    pub parent: Option<BoardId>,
    /// Identity of the syntax node the board was built from; copies of the
    /// same function share it.
    pub origin: Option<usize>,
}

impl Board {
    pub fn new(id: BoardId, kind: BoardKind, ty: Ty) -> Board {
        let interface = PortTree::new(&ty, Polarity::Plug);
        Board { id, kind, ty, interface, parent: None, origin: None }
    }
}
