//! Seeded random generator of closed, well-typed programs of type `N`.
//!
//! Terms are built top-down by target type. At each node a category is drawn
//! with weights primitives 50, composition 20, recursion 20 and
//! lambda/application 10, then a constructor valid at the target type is
//! picked from it. Recursion counts are literals up to `max_count`,
//! recursion is not nested inside a step function, stage bodies see no
//! function-typed variables, and a step on functions uses its argument once.
//! Together these keep values and unfoldings small.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::{Name, Term};
use crate::types::Ty;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_count: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_depth: 6, max_count: 8 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Category {
    Primitive,
    Composition,
    Recursion,
    Lambda,
}

const WEIGHTS: [(Category, u32); 4] = [
    (Category::Primitive, 50),
    (Category::Composition, 20),
    (Category::Recursion, 20),
    (Category::Lambda, 10),
];

type Ctx = Vec<(Name, Ty)>;

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    fresh: usize,
}

/// Bodies of recursion stages see only base-typed variables, so an already
/// iterated function is never iterated again.
fn wires_only(ctx: &Ctx) -> Ctx {
    ctx.iter().filter(|(_, t)| t.is_nat()).cloned().collect()
}

fn nn() -> Ty {
    Ty::nat_fn(1)
}

impl Generator {
    pub fn new(seed: u64, cfg: GenConfig) -> Generator {
        assert!(cfg.max_count >= 1, "counts start at 1");
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), cfg, fresh: 0 }
    }

    /// The next program in the sequence determined by the seed.
    pub fn program(&mut self) -> Arc<Term> {
        self.fresh = 0;
        self.term(&Ty::Nat, self.cfg.max_depth, &Vec::new(), true)
    }

    fn category(&mut self) -> Category {
        WEIGHTS.choose_weighted(&mut self.rng, |(_, w)| *w).expect("nonzero weights").0
    }

    fn literal(&mut self) -> Arc<Term> {
        Term::lit(self.rng.gen_range(1..=self.cfg.max_count))
    }

    fn var_of(&mut self, ty: &Ty, ctx: &Ctx) -> Option<Arc<Term>> {
        let found: Vec<&Name> = ctx.iter().filter(|(_, t)| t == ty).map(|(x, _)| x).collect();
        found.choose(&mut self.rng).map(|x| Arc::new(Term::Var((*x).clone())))
    }

    fn bind(&mut self, ty: &Ty, ctx: &Ctx) -> (Name, Ctx) {
        let name: Name = format!("x{}", self.fresh).into();
        self.fresh += 1;
        let mut inner = ctx.clone();
        inner.push((name.clone(), ty.clone()));
        (name, inner)
    }

    fn term(&mut self, ty: &Ty, depth: usize, ctx: &Ctx, rec: bool) -> Arc<Term> {
        if ty.is_nat() {
            self.nat(depth, ctx, rec)
        } else {
            self.function(ty, depth, ctx, rec)
        }
    }

    fn nat_leaf(&mut self, ctx: &Ctx) -> Arc<Term> {
        if self.rng.gen_bool(0.5) {
            if let Some(v) = self.var_of(&Ty::Nat, ctx) {
                return v;
            }
        }
        self.literal()
    }

    fn nat(&mut self, depth: usize, ctx: &Ctx, rec: bool) -> Arc<Term> {
        if depth == 0 {
            return self.nat_leaf(ctx);
        }
        let d = depth - 1;
        match self.category() {
            Category::Composition => {
                let f = self.function(&nn(), d, ctx, rec);
                let g = self.function(&nn(), d, ctx, rec);
                let x = self.nat(d, ctx, rec);
                Term::app(Term::apps(Term::comp(Ty::Nat, Ty::Nat, Ty::Nat), [Term::pair(f, g)]), x)
            }
            Category::Recursion if rec => match self.rng.gen_range(0..4) {
                0 => {
                    let c = self.step(&Ty::Nat, d, ctx);
                    let (n, x) = (self.literal(), self.nat(d, ctx, rec));
                    Term::apps(Term::iter(Ty::Nat), [n, c, x])
                }
                1 => {
                    let c = self.function_step(d, ctx);
                    let f = self.function(&nn(), d, ctx, rec);
                    let (n, x) = (self.literal(), self.nat(d, ctx, rec));
                    Term::apps(Term::iter(nn()), [n, c, f, x])
                }
                2 => {
                    let wires = wires_only(ctx);
                    let h = self.nat(d, &wires, false);
                    let g = self.function(&Ty::nat_fn(2), d, &wires, false);
                    Term::app(Term::pr(0, h, g), self.literal())
                }
                _ => {
                    let wires = wires_only(ctx);
                    let h = self.function(&nn(), d, &wires, false);
                    let g = self.function(&Ty::nat_fn(3), d, &wires, false);
                    let x = self.nat(d, ctx, rec);
                    Term::apps(Term::pr(1, h, g), [self.literal(), x])
                }
            },
            Category::Lambda => {
                let arg_ty = if self.rng.gen_bool(0.5) { Ty::Nat } else { nn() };
                let (x, inner) = self.bind(&arg_ty, ctx);
                let body = self.nat(d, &inner, rec);
                let arg = self.term(&arg_ty, d, ctx, rec);
                Term::app(Term::lam(&x, arg_ty, body), arg)
            }
            _ => match self.rng.gen_range(0..3) {
                0 => self.nat_leaf(ctx),
                1 => Term::app(Term::succ(), self.nat(d, ctx, rec)),
                _ => Term::apps(Term::add(), [self.nat(d, ctx, rec), self.nat(d, ctx, rec)]),
            },
        }
    }

    /// A step function `N -> (A -> A)` for the iterator.
    fn step(&mut self, a: &Ty, depth: usize, ctx: &Ctx) -> Arc<Term> {
        let (i, inner) = self.bind(&Ty::Nat, &wires_only(ctx));
        let body = self.function(&Ty::arrow(a.clone(), a.clone()), depth, &inner, false);
        Term::lam(&i, Ty::Nat, body)
    }

    /// A step `N -> ((N -> N) -> (N -> N))` that uses its function argument
    /// once, composing it with a fresh function on either side.
    fn function_step(&mut self, depth: usize, ctx: &Ctx) -> Arc<Term> {
        let (i, inner) = self.bind(&Ty::Nat, &wires_only(ctx));
        let other = self.function(&nn(), depth, &inner, false);
        let (f, _) = self.bind(&nn(), &inner);
        let fv = Term::var(&f);
        let pair = if self.rng.gen_bool(0.5) { Term::pair(fv, other) } else { Term::pair(other, fv) };
        let body = Term::app(Term::comp(Ty::Nat, Ty::Nat, Ty::Nat), pair);
        Term::lam(&i, Ty::Nat, Term::lam(&f, nn(), body))
    }

    fn function(&mut self, ty: &Ty, depth: usize, ctx: &Ctx, rec: bool) -> Arc<Term> {
        let (dom, cod) = ty.as_arrow().map(|(a, b)| (a.clone(), b.clone())).expect("function type");
        if depth > 0 {
            let d = depth - 1;
            let endo = dom == cod;
            match self.category() {
                Category::Composition if dom.is_nat() && cod.is_nat() => {
                    let f = self.function(&nn(), d, ctx, rec);
                    let g = self.function(&nn(), d, ctx, rec);
                    return Term::app(Term::comp(Ty::Nat, Ty::Nat, Ty::Nat), Term::pair(f, g));
                }
                Category::Recursion if rec && endo => {
                    let c = self.step(&dom, d, ctx);
                    return Term::apps(Term::iter(dom), [self.literal(), c]);
                }
                Category::Lambda | Category::Recursion | Category::Composition => {
                    let (x, inner) = self.bind(&dom, ctx);
                    let body = self.term(&cod, d, &inner, rec);
                    return Term::lam(&x, dom, body);
                }
                Category::Primitive => {}
            }
        }
        let mut options: Vec<Arc<Term>> = Vec::new();
        if let Some(v) = self.var_of(ty, ctx) {
            options.push(v);
        }
        if *ty == nn() {
            options.push(Term::succ());
        }
        if *ty == Ty::nat_fn(2) {
            options.push(Term::add());
        }
        if dom == cod {
            options.push(Term::id_at(dom.clone()));
        }
        if let Some(t) = options.choose(&mut self.rng) {
            return t.clone();
        }
        let (x, inner) = self.bind(&dom, ctx);
        let body = self.term(&cod, depth.saturating_sub(1), &inner, rec);
        Term::lam(&x, dom, body)
    }
}
