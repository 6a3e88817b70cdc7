//! A simply typed higher-order combinator language with two evaluators.
//!
//! The [`symbolic`] engine rewrites terms with the recursion equations of
//! primitive recursion and the iterator. The [`circuit`] machine turns the
//! same terms into boards of plugs and sockets, reconfigures links until only
//! first-order wiring remains, and evaluates that wiring as a dataflow graph.
//! [`netlist`] serializes the first-order residue.

pub mod circuit;
pub mod cli;
pub mod gen;
pub mod lang;
pub mod netlist;
pub mod symbolic;
pub mod types;

pub use lang::{parse, parse_program, parse_term, print_canonical, typecheck, Program, Term};
pub use types::{type_equal, Ty};

/// Default value type for wire-level evaluation.
pub type Nat = u64;

/// Default step/expansion budget.
pub const DEFAULT_FUEL: usize = 1_000_000;
