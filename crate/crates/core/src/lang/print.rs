//! Canonical, fully parenthesized rendering of terms.
//!
//! `parse_term(&t.to_string())` yields `t` back for every term.

use std::fmt;

use super::ast::Term;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Lit(n) => write!(f, "{n}"),
            Term::Var(x) => f.write_str(x),
            Term::Lam(x, ty, body) => write!(f, "(\\{x}:{ty}. {body})"),
            Term::App(a, b) => write!(f, "({a} {b})"),
            Term::Pair(l, r) => write!(f, "({l}, {r})"),
            Term::Fst(t) => write!(f, "(fst {t})"),
            Term::Snd(t) => write!(f, "(snd {t})"),
            Term::Succ => f.write_str("succ"),
            Term::Add => f.write_str("add"),
            Term::IdAt(ty) => write!(f, "id[{ty}]"),
            Term::Pr { h, g, k } => write!(f, "pr[{k}]({h}, {g})"),
            Term::Iter(ty) => write!(f, "iter[{ty}]"),
            Term::Comp(a, b, c) => write!(f, "comp[{a}, {b}, {c}]"),
        }
    }
}

/// Canonical printing; the same as `Display`.
pub fn print_canonical(t: &Term) -> String {
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Ty;

    #[test]
    fn fixed_format() {
        assert_eq!(print_canonical(&Term::Lit(5)), "5");
        assert_eq!(print_canonical(&Term::app(Term::succ(), Term::lit(1))), "(succ 1)");
        assert_eq!(print_canonical(&Term::lam("x", Ty::Nat, Term::var("x"))), "(\\x:N. x)");
        assert_eq!(
            print_canonical(&Term::comp(Ty::Nat, Ty::Nat, Ty::Nat)),
            "comp[N, N, N]"
        );
    }
}
