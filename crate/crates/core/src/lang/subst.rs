//! Capture-avoiding substitution.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::ast::{Name, Term};

/// `body[arg/x]`, renaming binders that would capture free variables of `arg`.
pub fn subst(body: &Arc<Term>, x: &str, arg: &Arc<Term>) -> Arc<Term> {
    let fv = arg.free_vars();
    go(body, x, arg, &fv)
}

fn go(t: &Arc<Term>, x: &str, arg: &Arc<Term>, fv: &BTreeSet<Name>) -> Arc<Term> {
    match &**t {
        Term::Var(y) if &**y == x => arg.clone(),
        Term::Lam(y, _, _) if &**y == x => t.clone(),
        Term::Lam(y, ty, b) => {
            if !mentions(b, x) {
                return t.clone();
            }
            if fv.contains(y) {
                let mut avoid = b.free_vars();
                avoid.extend(fv.iter().cloned());
                avoid.insert(x.into());
                let fresh = fresh_name(y, &avoid);
                let renamed = go(b, y, &Arc::new(Term::Var(fresh.clone())), &BTreeSet::new());
                Arc::new(Term::Lam(fresh, ty.clone(), go(&renamed, x, arg, fv)))
            } else {
                Arc::new(Term::Lam(y.clone(), ty.clone(), go(b, x, arg, fv)))
            }
        }
        Term::App(a, b) => rebuild2(t, a, b, x, arg, fv, Term::App),
        Term::Pair(a, b) => rebuild2(t, a, b, x, arg, fv, Term::Pair),
        Term::Pr { h, g, k } => {
            let (h2, g2) = (go(h, x, arg, fv), go(g, x, arg, fv));
            if Arc::ptr_eq(&h2, h) && Arc::ptr_eq(&g2, g) {
                t.clone()
            } else {
                Arc::new(Term::Pr { h: h2, g: g2, k: *k })
            }
        }
        Term::Fst(a) => {
            let a2 = go(a, x, arg, fv);
            if Arc::ptr_eq(&a2, a) { t.clone() } else { Arc::new(Term::Fst(a2)) }
        }
        Term::Snd(a) => {
            let a2 = go(a, x, arg, fv);
            if Arc::ptr_eq(&a2, a) { t.clone() } else { Arc::new(Term::Snd(a2)) }
        }
        _ => t.clone(),
    }
}

fn rebuild2(
    t: &Arc<Term>,
    a: &Arc<Term>,
    b: &Arc<Term>,
    x: &str,
    arg: &Arc<Term>,
    fv: &BTreeSet<Name>,
    mk: fn(Arc<Term>, Arc<Term>) -> Term,
) -> Arc<Term> {
    let (a2, b2) = (go(a, x, arg, fv), go(b, x, arg, fv));
    if Arc::ptr_eq(&a2, a) && Arc::ptr_eq(&b2, b) {
        t.clone()
    } else {
        Arc::new(mk(a2, b2))
    }
}

/// Cheap syntactic check for whether `x` occurs free in `t`.
fn mentions(t: &Term, x: &str) -> bool {
    match t {
        Term::Var(y) => &**y == x,
        Term::Lam(y, _, b) => &**y != x && mentions(b, x),
        Term::App(a, b) | Term::Pair(a, b) | Term::Pr { h: a, g: b, .. } => {
            mentions(a, x) || mentions(b, x)
        }
        Term::Fst(a) | Term::Snd(a) => mentions(a, x),
        _ => false,
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while avoid.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    candidate.into()
}
