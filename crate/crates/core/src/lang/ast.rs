use std::collections::BTreeSet;
use std::sync::Arc;

use crate::types::Ty;

pub type Name = Arc<str>;

/// Terms of the combinator language.
///
/// Numerals start at 1: both recursion combinators bottom out at 1, and the
/// only arithmetic primitives (`succ`, `add`) never leave that range.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Lit(u64),
    Var(Name),
    Lam(Name, Ty, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    Succ,
    Add,
    IdAt(Ty),
    /// Primitive recursion with `k` curried parameters besides the count.
    Pr {
        h: Arc<Term>,
        g: Arc<Term>,
        k: usize,
    },
    /// The iterator at carrier type `A`.
    Iter(Ty),
    /// Composition `((A -> B) ; (B -> C)) -> (A -> C)`.
    Comp(Ty, Ty, Ty),
}

impl Term {
    pub fn lit(n: u64) -> Arc<Term> {
        assert!(n >= 1, "numerals start at 1");
        Arc::new(Term::Lit(n))
    }

    pub fn var(name: &str) -> Arc<Term> {
        Arc::new(Term::Var(name.into()))
    }

    pub fn lam(name: &str, ty: Ty, body: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Lam(name.into(), ty, body))
    }

    pub fn app(f: Arc<Term>, a: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::App(f, a))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: Arc<Term>, args: impl IntoIterator<Item = Arc<Term>>) -> Arc<Term> {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pair(l: Arc<Term>, r: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Pair(l, r))
    }

    pub fn fst(t: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Fst(t))
    }

    pub fn snd(t: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Snd(t))
    }

    pub fn succ() -> Arc<Term> {
        Arc::new(Term::Succ)
    }

    pub fn add() -> Arc<Term> {
        Arc::new(Term::Add)
    }

    pub fn id_at(ty: Ty) -> Arc<Term> {
        Arc::new(Term::IdAt(ty))
    }

    pub fn pr(k: usize, h: Arc<Term>, g: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Pr { h, g, k })
    }

    pub fn iter(at: Ty) -> Arc<Term> {
        Arc::new(Term::Iter(at))
    }

    pub fn comp(a: Ty, b: Ty, c: Ty) -> Arc<Term> {
        Arc::new(Term::Comp(a, b, c))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(self: &Arc<Term>) -> (&Arc<Term>, Vec<&Arc<Term>>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = &**head {
            args.push(a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) | Term::Pair(a, b) | Term::Pr { h: a, g: b, .. } => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Fst(t) | Term::Snd(t) => t.collect_free(bound, out),
            Term::Lit(_) | Term::Succ | Term::Add | Term::IdAt(_) | Term::Iter(_) | Term::Comp(..) => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Lam(_, _, b) | Term::Fst(b) | Term::Snd(b) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) | Term::Pr { h: a, g: b, .. } => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl std::fmt::Debug for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// A parsed `.hof` file: named definitions followed by `main`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub defs: Vec<Def>,
    pub main: Arc<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: Name,
    pub ty: Ty,
    pub body: Arc<Term>,
}
