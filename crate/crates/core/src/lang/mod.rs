//! Surface syntax, AST, parser and typechecker.

mod ast;
mod parser;
mod print;
mod subst;
mod typecheck;

pub use ast::{Def, Name, Program, Term};
pub use parser::{parse, parse_program, parse_term, parse_type, ParseError};
pub use print::print_canonical;
pub use subst::subst;
pub use typecheck::{comp_type, iter_type, typecheck, typecheck_in, Context, TypeError};
