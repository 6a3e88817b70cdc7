//! Typing rules for the combinator language.

use thiserror::Error;

use super::ast::{Name, Term};
use crate::types::Ty;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch in `{location}`: expected {expected}, found {found}")]
    TypeMismatch { expected: Ty, found: Ty, location: String },
    #[error("`{location}` is applied but has non-function type {found}")]
    NotAFunction { found: Ty, location: String },
    #[error("`{location}` is projected but has non-product type {found}")]
    NotAPair { found: Ty, location: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
}

/// Types of the variables in scope, innermost last.
pub type Context = Vec<(Name, Ty)>;

/// Type of a closed term.
pub fn typecheck(t: &Term) -> Result<Ty, TypeError> {
    typecheck_in(&mut Vec::new(), t)
}

/// Type of `t` under `ctx`. The context is restored before returning.
pub fn typecheck_in(ctx: &mut Context, t: &Term) -> Result<Ty, TypeError> {
    match t {
        Term::Lit(_) => Ok(Ty::Nat),
        Term::Var(x) => ctx
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Term::Lam(x, ty, body) => {
            ctx.push((x.clone(), ty.clone()));
            let body_ty = typecheck_in(ctx, body);
            ctx.pop();
            Ok(Ty::arrow(ty.clone(), body_ty?))
        }
        Term::App(f, a) => {
            let fty = typecheck_in(ctx, f)?;
            let aty = typecheck_in(ctx, a)?;
            match fty.as_arrow() {
                Some((dom, cod)) if *dom == aty => Ok(cod.clone()),
                Some((dom, _)) => Err(TypeError::TypeMismatch {
                    expected: dom.clone(),
                    found: aty,
                    location: t.to_string(),
                }),
                None => Err(TypeError::NotAFunction { found: fty, location: f.to_string() }),
            }
        }
        Term::Pair(l, r) => Ok(Ty::prod(typecheck_in(ctx, l)?, typecheck_in(ctx, r)?)),
        Term::Fst(p) | Term::Snd(p) => {
            let pty = typecheck_in(ctx, p)?;
            match pty.as_prod() {
                Some((l, r)) => Ok(if matches!(t, Term::Fst(_)) { l.clone() } else { r.clone() }),
                None => Err(TypeError::NotAPair { found: pty, location: p.to_string() }),
            }
        }
        Term::Succ => Ok(Ty::nat_fn(1)),
        Term::Add => Ok(Ty::nat_fn(2)),
        Term::IdAt(ty) => Ok(Ty::arrow(ty.clone(), ty.clone())),
        Term::Iter(a) => Ok(iter_type(a)),
        Term::Comp(a, b, c) => Ok(comp_type(a, b, c)),
        Term::Pr { h, g, k } => {
            let expect = |term: &Term, found: Ty, expected: Ty| {
                if found == expected {
                    Ok(())
                } else {
                    Err(TypeError::TypeMismatch { expected, found, location: term.to_string() })
                }
            };
            let hty = typecheck_in(ctx, h)?;
            expect(h, hty, Ty::nat_fn(*k))?;
            let gty = typecheck_in(ctx, g)?;
            expect(g, gty, Ty::nat_fn(k + 2))?;
            Ok(Ty::nat_fn(k + 1))
        }
    }
}

/// `N -> (N -> (A -> A)) -> (A -> A)`
pub fn iter_type(a: &Ty) -> Ty {
    let endo = Ty::arrow(a.clone(), a.clone());
    Ty::arrow(Ty::Nat, Ty::arrow(Ty::arrow(Ty::Nat, endo.clone()), endo))
}

/// `((A -> B) ; (B -> C)) -> (A -> C)`
pub fn comp_type(a: &Ty, b: &Ty, c: &Ty) -> Ty {
    Ty::arrow(
        Ty::prod(Ty::arrow(a.clone(), b.clone()), Ty::arrow(b.clone(), c.clone())),
        Ty::arrow(a.clone(), c.clone()),
    )
}

impl super::ast::Program {
    /// Checks every definition against its annotation and returns the
    /// inlined `main` together with its type.
    pub fn check(&self) -> Result<(std::sync::Arc<Term>, Ty), TypeError> {
        let mut ctx: Context = Vec::new();
        for def in &self.defs {
            let found = typecheck_in(&mut ctx, &def.body)?;
            if found != def.ty {
                return Err(TypeError::TypeMismatch {
                    expected: def.ty.clone(),
                    found,
                    location: def.name.to_string(),
                });
            }
            ctx.push((def.name.clone(), def.ty.clone()));
        }
        typecheck_in(&mut ctx, &self.main)?;
        let main = self.inline();
        let ty = typecheck(&main)?;
        Ok((main, ty))
    }
}
