//! Building boards from terms and expanding shells.
//!
//! A term is built into a value: the bundle of ports that provides it and,
//! for a function, what applying it does. Applying a function links the
//! argument into its input subtree and then activates the function's current
//! stage, which wires up the shell's internals. Base-typed values are wires
//! and fan out freely. A function value is consumed by its first use; every
//! further use gets a structural copy rebuilt from the recipe that made it.
//!
//! [`instantiate`] builds the boards of the term itself and records its
//! applications without activating them. [`elaborate`] then runs those
//! activations in order; activations nested inside them run immediately.

use std::cell::{Cell, RefCell};
use std::collections::{HashMap, VecDeque};
use std::rc::Rc;
use std::sync::Arc;

use crate::lang::{comp_type, iter_type, print_canonical, typecheck, typecheck_in, Context, Name, Term};
use crate::types::Ty;

use super::board::{BoardId, BoardKind};
use super::dataflow::value_at;
use super::port::{type_at, Bundle, Path, Step, Terminal};
use super::{ApplyRecord, Circuit, CircuitError};

type Slot = Rc<RefCell<Option<Attach>>>;

fn slot(a: Attach) -> Slot {
    Rc::new(RefCell::new(Some(a)))
}

fn empty_slot() -> Slot {
    Rc::new(RefCell::new(None))
}

/// Where a value's wires are. Pairs built from two separate values keep
/// their components apart instead of routing them through a board.
#[derive(Clone)]
enum Shape {
    One(Bundle),
    Pair(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn bundle(&self) -> Result<&Bundle, CircuitError> {
        match self {
            Shape::One(b) => Ok(b),
            Shape::Pair(..) => Err(CircuitError::Internal("function value without a port".into())),
        }
    }

    fn side(&self, step: Step) -> Shape {
        match (self, step) {
            (Shape::One(b), _) => Shape::One(b.sub(step)),
            (Shape::Pair(l, _), Step::Left) => (**l).clone(),
            (Shape::Pair(_, r), _) => (**r).clone(),
        }
    }
}

/// How to rebuild a value from scratch.
enum Sem {
    Term(Arc<Term>, Env),
    App(Rc<Sem>, Rc<Sem>),
    Proj(Rc<Sem>, Step),
    /// A base-typed wire, which is shared rather than copied.
    Wire(Shape, Ty),
}

/// What applying a function value does.
#[derive(Clone)]
enum Attach {
    /// Not a function.
    Base,
    Port(Rc<Port>),
    /// Apply each stage to the previous result.
    Chain(Rc<Vec<Val>>),
    Pair(Slot, Slot),
    Proj(Slot, Step),
}

/// A function port on a board together with the stage it is at.
struct Port {
    board: BoardId,
    path: Path,
    stage: Stage,
}

#[derive(Clone)]
enum Stage {
    /// Primitive arithmetic: the wires already compute.
    Prim,
    /// `add` before its first argument.
    Add,
    Id,
    Lambda { param: Name, body: Arc<Term>, env: Env },
    Comp,
    Iter,
    IterStep { count: Terminal },
    Pr { h: Arc<Term>, g: Arc<Term>, env: Env, k: usize, args: Vec<Val> },
}

#[derive(Clone)]
struct Val {
    ty: Ty,
    shape: Shape,
    attach: Slot,
    sem: Rc<Sem>,
    used: Rc<Cell<bool>>,
}

impl Val {
    fn new(ty: Ty, shape: Shape, attach: Slot, sem: Rc<Sem>) -> Val {
        Val { ty, shape, attach, sem, used: Rc::new(Cell::new(false)) }
    }

    fn wire(ty: Ty, shape: Shape) -> Val {
        let sem = Rc::new(Sem::Wire(shape.clone(), ty.clone()));
        Val::new(ty, shape, slot(Attach::Base), sem)
    }
}

/// An argument as the activated function sees it.
#[derive(Clone)]
struct Arg {
    attach: Slot,
    sem: Rc<Sem>,
}

impl From<&Val> for Arg {
    fn from(v: &Val) -> Arg {
        Arg { attach: v.attach.clone(), sem: v.sem.clone() }
    }
}

#[derive(Clone, Default)]
struct Env(Option<Rc<Frame>>);

struct Frame {
    name: Name,
    val: Val,
    next: Env,
}

impl Env {
    fn bind(&self, name: Name, val: Val) -> Env {
        Env(Some(Rc::new(Frame { name, val, next: self.clone() })))
    }

    fn lookup(&self, name: &str) -> Option<&Val> {
        let mut cur = self.0.as_ref();
        while let Some(frame) = cur {
            if &*frame.name == name {
                return Some(&frame.val);
            }
            cur = frame.next.0.as_ref();
        }
        None
    }

    fn context(&self) -> Context {
        let mut ctx = Vec::new();
        let mut cur = self.0.as_ref();
        while let Some(frame) = cur {
            ctx.push((frame.name.clone(), frame.val.ty.clone()));
            cur = frame.next.0.as_ref();
        }
        ctx.reverse();
        ctx
    }
}

/// An application recorded by [`instantiate`] and activated by [`elaborate`].
struct Pending {
    function: Slot,
    arg: Arg,
    result: Slot,
}

/// Elaboration state carried from [`instantiate`] to [`elaborate`].
pub(crate) struct ElabState {
    deferred: bool,
    agenda: VecDeque<Pending>,
    root: Option<Val>,
    fuel: usize,
    spent: usize,
    parents: Vec<BoardId>,
    lam_types: HashMap<usize, Ty>,
}

impl ElabState {
    fn new() -> ElabState {
        ElabState {
            deferred: true,
            agenda: VecDeque::new(),
            root: None,
            fuel: usize::MAX,
            spent: 0,
            parents: Vec::new(),
            lam_types: HashMap::new(),
        }
    }
}

struct Elab<'a> {
    c: &'a mut Circuit,
    st: &'a mut ElabState,
}

fn term_id(t: &Arc<Term>) -> usize {
    Arc::as_ptr(t) as usize
}

impl Elab<'_> {
    fn spend(&mut self) -> Result<(), CircuitError> {
        if self.st.spent >= self.st.fuel {
            return Err(CircuitError::FuelExhausted(self.st.spent));
        }
        self.st.spent += 1;
        Ok(())
    }

    fn add_board(&mut self, kind: BoardKind, ty: Ty, origin: Option<usize>) -> Result<BoardId, CircuitError> {
        self.spend()?;
        let id = self.c.add_board(kind, ty);
        let parent = self.st.parents.last().copied();
        let board = self.c.board_mut(id);
        board.parent = parent;
        board.origin = origin;
        Ok(id)
    }

    /// A new board whose outer port is a function at `stage`.
    fn function_board(&mut self, kind: BoardKind, ty: Ty, t: &Arc<Term>, env: &Env, stage: Stage) -> Result<Val, CircuitError> {
        let id = self.add_board(kind, ty.clone(), Some(term_id(t)))?;
        let port = Port { board: id, path: Path::root(), stage };
        let sem = Rc::new(Sem::Term(t.clone(), env.clone()));
        Ok(Val::new(ty.clone(), Shape::One(Bundle::outer(id, ty)), slot(Attach::Port(Rc::new(port))), sem))
    }

    fn literal(&mut self, n: u64, origin: Option<usize>) -> Result<Val, CircuitError> {
        let id = self.add_board(BoardKind::Lit(n), Ty::Nat, origin)?;
        Ok(Val::wire(Ty::Nat, Shape::One(Bundle::outer(id, Ty::Nat))))
    }

    fn lam_type(&mut self, t: &Arc<Term>, env: &Env) -> Result<Ty, CircuitError> {
        if let Some(ty) = self.st.lam_types.get(&term_id(t)) {
            return Ok(ty.clone());
        }
        let ty = typecheck_in(&mut env.context(), t)?;
        self.st.lam_types.insert(term_id(t), ty.clone());
        Ok(ty)
    }

    fn build(&mut self, t: &Arc<Term>, env: &Env) -> Result<Val, CircuitError> {
        match &**t {
            Term::Lit(n) => self.literal(*n, Some(term_id(t))),
            Term::Var(x) => {
                let v = env.lookup(x).ok_or_else(|| CircuitError::Internal(format!("unbound variable {x}")))?;
                let v = v.clone();
                self.take(&v)
            }
            Term::Lam(x, _, body) => {
                let ty = self.lam_type(t, env)?;
                let stage = Stage::Lambda { param: x.clone(), body: body.clone(), env: env.clone() };
                self.function_board(BoardKind::LambdaShell, ty, t, env, stage)
            }
            Term::App(f, a) => {
                let fv = self.build(f, env)?;
                let av = self.build(a, env)?;
                self.apply(fv, av)
            }
            Term::Pair(l, r) => {
                let lv = self.build(l, env)?;
                let rv = self.build(r, env)?;
                Ok(Val::new(
                    Ty::prod(lv.ty.clone(), rv.ty.clone()),
                    Shape::Pair(Box::new(lv.shape), Box::new(rv.shape)),
                    slot(Attach::Pair(lv.attach, rv.attach)),
                    Rc::new(Sem::Term(t.clone(), env.clone())),
                ))
            }
            Term::Fst(p) => {
                let pv = self.build(p, env)?;
                Ok(project(&pv, Step::Left))
            }
            Term::Snd(p) => {
                let pv = self.build(p, env)?;
                Ok(project(&pv, Step::Right))
            }
            Term::Succ => self.function_board(BoardKind::PrimSucc, Ty::nat_fn(1), t, env, Stage::Prim),
            Term::Add => self.function_board(BoardKind::PrimAdd, Ty::nat_fn(2), t, env, Stage::Add),
            Term::IdAt(a) => {
                let ty = Ty::arrow(a.clone(), a.clone());
                self.function_board(BoardKind::PrimId, ty, t, env, Stage::Id)
            }
            Term::Pr { h, g, k } => {
                let stage = Stage::Pr { h: h.clone(), g: g.clone(), env: env.clone(), k: *k, args: Vec::new() };
                self.function_board(BoardKind::PrShell, Ty::nat_fn(k + 1), t, env, stage)
            }
            Term::Iter(a) => self.function_board(BoardKind::IterShell, iter_type(a), t, env, Stage::Iter),
            Term::Comp(a, b, c) => self.function_board(BoardKind::CompBoard, comp_type(a, b, c), t, env, Stage::Comp),
        }
    }

    /// A use of `v`: wires are shared, a function is handed out once and
    /// copied afterwards.
    fn take(&mut self, v: &Val) -> Result<Val, CircuitError> {
        if v.ty.order() == 0 || !v.used.replace(true) {
            return Ok(v.clone());
        }
        self.materialize(&v.sem.clone())
    }

    fn materialize(&mut self, sem: &Rc<Sem>) -> Result<Val, CircuitError> {
        match &**sem {
            Sem::Term(t, env) => self.build(t, env),
            Sem::App(f, a) => {
                let fv = self.materialize(f)?;
                let av = self.materialize(a)?;
                self.apply(fv, av)
            }
            Sem::Proj(p, side) => {
                let pv = self.materialize(p)?;
                Ok(project(&pv, *side))
            }
            Sem::Wire(shape, ty) => Ok(Val::wire(ty.clone(), shape.clone())),
        }
    }

    /// Links every leaf of `shape` into `consumer`.
    fn link_into(&mut self, shape: &Shape, consumer: &Bundle) -> Result<usize, CircuitError> {
        match shape {
            Shape::One(b) => self.c.connect(b, consumer),
            Shape::Pair(l, r) => {
                let n = self.link_into(l, &consumer.sub(Step::Left))?;
                Ok(n + self.link_into(r, &consumer.sub(Step::Right))?)
            }
        }
    }

    fn apply(&mut self, f: Val, a: Val) -> Result<Val, CircuitError> {
        let fb = f.shape.bundle()?.clone();
        let Some((_, cod)) = f.ty.as_arrow() else {
            return Err(CircuitError::Internal(format!("applying a value of type {}", f.ty)));
        };
        let links = match &a.shape {
            Shape::One(b) => self.c.apply_links(&fb, b)?,
            pair => {
                let links = self.link_into(pair, &fb.sub(Step::In))?;
                self.c.applications.push(ApplyRecord { arg_ty: a.ty.clone(), links });
                links
            }
        };
        debug_assert!(links > 0);
        let result = Val::new(
            cod.clone(),
            Shape::One(fb.sub(Step::Out)),
            empty_slot(),
            Rc::new(Sem::App(f.sem.clone(), a.sem.clone())),
        );
        if self.st.deferred {
            self.st.agenda.push_back(Pending { function: f.attach, arg: Arg::from(&a), result: result.attach.clone() });
        } else {
            let r = self.activate(&f.attach, Arg::from(&a))?;
            *result.attach.borrow_mut() = Some(r);
        }
        Ok(result)
    }
}

fn project(p: &Val, side: Step) -> Val {
    let ty = type_at(&p.ty, &Path(vec![side])).expect("projection of a product");
    let attach = match &*p.attach.borrow() {
        Some(Attach::Pair(l, _)) if side == Step::Left => l.clone(),
        Some(Attach::Pair(_, r)) => r.clone(),
        _ => slot(Attach::Proj(p.attach.clone(), side)),
    };
    Val::new(ty, p.shape.side(side), attach, Rc::new(Sem::Proj(p.sem.clone(), side)))
}

/// The attachment in `s` with projections looked through.
fn resolve(s: &Slot) -> Result<Attach, CircuitError> {
    let a = s.borrow().clone().ok_or_else(|| CircuitError::Internal("application used before activation".into()))?;
    match a {
        Attach::Proj(p, side) => match resolve(&p)? {
            Attach::Pair(l, _) if side == Step::Left => resolve(&l),
            Attach::Pair(_, r) => resolve(&r),
            _ => Err(CircuitError::Internal("projection of a non-pair".into())),
        },
        a => Ok(a),
    }
}

impl Elab<'_> {
    /// Wires up what applying the function attached at `f` to `arg` does and
    /// returns the result's attachment. The argument's links are already in.
    fn activate(&mut self, f: &Slot, arg: Arg) -> Result<Attach, CircuitError> {
        self.spend()?;
        match resolve(f)? {
            Attach::Port(port) => self.activate_port(&port, arg),
            Attach::Chain(stages) => {
                let mut cur = arg;
                for s in stages.iter() {
                    let r = self.activate(&s.attach, cur.clone())?;
                    cur = Arg { attach: slot(r), sem: Rc::new(Sem::App(s.sem.clone(), cur.sem)) };
                }
                resolve(&cur.attach)
            }
            Attach::Base | Attach::Pair(..) | Attach::Proj(..) => {
                Err(CircuitError::Internal("activating a value that is not a function".into()))
            }
        }
    }

    fn activate_port(&mut self, port: &Port, arg: Arg) -> Result<Attach, CircuitError> {
        let x = port.board;
        let ty = type_at(&self.c.board(x).ty, &port.path).expect("port path inside its board");
        let inside = Bundle { board: x, path: port.path.clone(), inner: true, ty };
        let (input, output) = (inside.sub(Step::In), inside.sub(Step::Out));
        let next = |stage: Stage| Attach::Port(Rc::new(Port { board: x, path: port.path.child(Step::Out), stage }));
        match &port.stage {
            Stage::Prim => Ok(Attach::Base),
            Stage::Add => Ok(next(Stage::Prim)),
            Stage::Id => {
                self.c.log_expand(x, None);
                self.c.connect(&input, &output)?;
                resolve(&arg.attach)
            }
            Stage::Lambda { param, body, env } => {
                self.c.log_expand(x, None);
                let param_val = Val::new(input.ty.clone(), Shape::One(input), arg.attach, arg.sem);
                let env = env.bind(param.clone(), param_val);
                self.st.parents.push(x);
                let result = self.build(body, &env).and_then(|v| {
                    self.link_into(&v.shape, &output)?;
                    resolve(&v.attach)
                });
                self.st.parents.pop();
                result
            }
            Stage::Comp => {
                self.c.log_expand(x, None);
                let (fb, gb) = (input.sub(Step::Left), input.sub(Step::Right));
                let f = Val::new(
                    fb.ty.clone(),
                    Shape::One(fb.clone()),
                    slot(Attach::Proj(arg.attach.clone(), Step::Left)),
                    Rc::new(Sem::Proj(arg.sem.clone(), Step::Left)),
                );
                let g = Val::new(
                    gb.ty.clone(),
                    Shape::One(gb.clone()),
                    slot(Attach::Proj(arg.attach, Step::Right)),
                    Rc::new(Sem::Proj(arg.sem, Step::Right)),
                );
                self.c.connect(&output.sub(Step::In), &fb.sub(Step::In))?;
                self.c.compose_link(&fb, &gb)?;
                self.c.connect(&gb.sub(Step::Out), &output.sub(Step::Out))?;
                Ok(Attach::Chain(Rc::new(vec![f, g])))
            }
            Stage::Iter => Ok(next(Stage::IterStep { count: Terminal::new(x, port.path.child(Step::In)) })),
            Stage::IterStep { count } => {
                let n = self.count(count)?;
                self.c.log_expand(x, Some(n));
                let c = Val::new(input.ty.clone(), Shape::One(input), arg.attach, arg.sem);
                self.st.parents.push(x);
                let result = self.iterate(&c, n, &output);
                self.st.parents.pop();
                result
            }
            Stage::Pr { h, g, env, k, args } => {
                let mut args = args.clone();
                args.push(Val::wire(Ty::Nat, Shape::One(input)));
                if args.len() <= *k {
                    let stage = Stage::Pr { h: h.clone(), g: g.clone(), env: env.clone(), k: *k, args };
                    return Ok(next(stage));
                }
                let n = self.count(&Terminal::new(x, Path(vec![Step::In])))?;
                self.c.log_expand(x, Some(n));
                self.st.parents.push(x);
                let result = self.recurse(h, g, env, &args, n, &output);
                self.st.parents.pop();
                result.map(|_| Attach::Base)
            }
        }
    }

    /// Resolves a count wire to its literal by evaluating what drives it.
    fn count(&mut self, t: &Terminal) -> Result<u64, CircuitError> {
        match value_at(self.c, t) {
            Ok(n) => Ok(n),
            Err(CircuitError::Overflow(at)) => Err(CircuitError::Overflow(at)),
            Err(_) => Err(CircuitError::UnresolvedCount(t.clone())),
        }
    }

    /// `n - 1` copies of `c`, the i-th applied to the literal `i` and chained
    /// in order between `output`'s input and output.
    fn iterate(&mut self, c: &Val, n: u64, output: &Bundle) -> Result<Attach, CircuitError> {
        let mut stages: Vec<Val> = Vec::new();
        for i in 1..n {
            let ci = self.take(c)?;
            let lit = self.literal(i, None)?;
            let stage = self.apply(ci, lit)?;
            let sb = stage.shape.bundle()?.clone();
            match stages.last() {
                None => {
                    self.c.connect(&output.sub(Step::In), &sb.sub(Step::In))?;
                }
                Some(prev) => {
                    let pb = prev.shape.bundle()?.clone();
                    self.c.compose_link(&pb, &sb)?;
                }
            }
            stages.push(stage);
        }
        match stages.last() {
            None => self.c.connect(&output.sub(Step::In), &output.sub(Step::Out))?,
            Some(last) => {
                let lb = last.shape.bundle()?.clone();
                self.c.connect(&lb.sub(Step::Out), &output.sub(Step::Out))?
            }
        };
        Ok(Attach::Chain(Rc::new(stages)))
    }

    /// The base `h xs` followed by `n - 1` stages `g i r xs`.
    fn recurse(&mut self, h: &Arc<Term>, g: &Arc<Term>, env: &Env, args: &[Val], n: u64, output: &Bundle) -> Result<(), CircuitError> {
        let xs = &args[1..];
        let mut r = self.build(h, env)?;
        for x in xs {
            r = self.apply(r, x.clone())?;
        }
        for i in 1..n {
            let mut s = self.build(g, env)?;
            let lit = self.literal(i, None)?;
            s = self.apply(s, lit)?;
            s = self.apply(s, r)?;
            for x in xs {
                s = self.apply(s, x.clone())?;
            }
            r = s;
        }
        self.link_into(&r.shape, output)?;
        Ok(())
    }
}

/// Builds the boards of a closed, well-typed term. Applications are linked
/// but not activated, so no shell is expanded yet.
pub fn instantiate(t: &Arc<Term>) -> Result<Circuit, CircuitError> {
    let ty = typecheck(t)?;
    let mut c = Circuit::new();
    c.source = print_canonical(t);
    let mut st = ElabState::new();
    let mut e = Elab { c: &mut c, st: &mut st };
    let root = e.build(t, &Env::default())?;
    let bundle = match &root.shape {
        Shape::One(b) => b.clone(),
        pair => {
            let id = e.add_board(BoardKind::Pair, ty.clone(), None)?;
            let b = Bundle::outer(id, ty);
            e.link_into(pair, &b.inside())?;
            b
        }
    };
    st.root = Some(root);
    st.deferred = false;
    c.set_root(bundle);
    c.elab = Some(Box::new(st));
    Ok(c)
}

/// Expands shells until only first-order wiring is reachable from the root.
/// Each board and each activation costs one unit of `fuel`. A root taking
/// base-typed arguments is applied to its own external inputs.
pub fn elaborate(mut c: Circuit, fuel: usize) -> Result<Circuit, CircuitError> {
    let Some(mut st) = c.elab.take() else {
        c.elaborated = true;
        return Ok(c);
    };
    st.fuel = fuel;
    st.spent = 0;
    let mut e = Elab { c: &mut c, st: &mut st };
    while let Some(p) = e.st.agenda.pop_front() {
        let r = e.activate(&p.function, p.arg)?;
        *p.result.borrow_mut() = Some(r);
    }
    if let Some(mut root) = e.st.root.take() {
        while let (Some((dom, cod)), Shape::One(b)) = (root.ty.as_arrow(), &root.shape) {
            if dom.order() > 0 {
                break;
            }
            let input = Val::wire(dom.clone(), Shape::One(b.sub(Step::In)));
            let r = e.activate(&root.attach, Arg::from(&input))?;
            root = Val::new(cod.clone(), Shape::One(b.sub(Step::Out)), slot(r), root.sem.clone());
        }
    }
    c.elaborated = true;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{run, Residue};
    use crate::lang::parse_term;
    use crate::symbolic;

    fn circuit(src: &str) -> Circuit {
        let t = parse_term(src).unwrap();
        elaborate(instantiate(&t).unwrap(), 100_000).unwrap()
    }

    fn eval(src: &str) -> u64 {
        run(&circuit(src)).unwrap()
    }

    fn kinds(c: &Circuit) -> Vec<String> {
        c.boards().iter().map(|b| b.kind.to_string()).collect()
    }

    #[test]
    fn succ_is_one_board() {
        let c = instantiate(&parse_term("succ").unwrap()).unwrap();
        assert_eq!(kinds(&c), ["PRIM-SUCC"]);
        assert!(c.links().is_empty());
    }

    #[test]
    fn comp_instantiates_without_expanding() {
        let c = instantiate(&parse_term("comp[N, N, N] (succ, succ)").unwrap()).unwrap();
        assert_eq!(kinds(&c), ["COMP-BOARD", "PRIM-SUCC", "PRIM-SUCC"]);
        assert_eq!(c.links().len(), 4);
        assert!(c.events().iter().all(|e| !e.to_string().starts_with("expand")));
        let c = elaborate(c, 100).unwrap();
        assert_eq!(c.links().len(), 7);
        let residue = Residue::of(&c).unwrap();
        assert_eq!(residue.boards.len(), 2);
        assert_eq!(residue.links.len(), 1);
        assert_eq!(residue.inputs.len(), 1);
    }

    #[test]
    fn application_through_a_parameter() {
        assert_eq!(eval("(\\y:N -> N. \\x:N. y x) succ 3"), 4);
        assert_eq!(eval("comp[N, N, N] (succ, succ) 3"), 5);
        assert_eq!(eval("id[N -> N] succ 1"), 2);
    }

    #[test]
    fn iterator_chains_n_minus_one_copies() {
        let t = parse_term("iter[N] 4 (\\i:N. succ) 1").unwrap();
        let c = elaborate(instantiate(&t).unwrap(), 1000).unwrap();
        assert_eq!(run(&c).unwrap(), 4);
        let succs = c.boards().iter().filter(|b| b.kind == BoardKind::PrimSucc).count();
        assert_eq!(succs, 3);
        let expand: Vec<_> = c.events().iter().map(|e| e.to_string()).filter(|e| e.starts_with("expand")).collect();
        assert_eq!(
            expand,
            ["expand 0 ITER-SHELL n=4", "expand 2 LAMBDA-SHELL", "expand 6 LAMBDA-SHELL", "expand 9 LAMBDA-SHELL"]
        );
        assert_eq!(eval("iter[N] 1 (\\i:N. succ) 7"), 7);
    }

    #[test]
    fn primitive_recursion_stages() {
        let src = "pr[0](1, \\n:N. \\r:N. add r (succ n)) 5";
        let c = circuit(src);
        assert_eq!(run(&c).unwrap(), 15);
        let pr = c.boards().iter().find(|b| b.kind == BoardKind::PrShell).unwrap().id;
        let stages = c
            .boards()
            .iter()
            .filter(|b| b.parent == Some(pr) && b.kind == BoardKind::LambdaShell)
            .count();
        assert_eq!(stages, 4);
        assert_eq!(eval("pr[1](succ, \\n:N. \\r:N. \\x:N. add r x) 3 4"), 13);
    }

    #[test]
    fn reused_function_is_copied() {
        let c = circuit("(\\f:N -> N. f (f 1)) (\\x:N. add x x)");
        assert_eq!(run(&c).unwrap(), 4);
        let shells = c.boards().iter().filter(|b| b.kind == BoardKind::LambdaShell).count();
        assert_eq!(shells, 3);
    }

    #[test]
    fn higher_order_iteration() {
        // iterate "compose with succ" on functions
        let src = "iter[N -> N] 3 (\\i:N. \\f:N -> N. comp[N, N, N] (f, succ)) succ 1";
        assert_eq!(eval(src), 4);
        let t = parse_term(src).unwrap();
        assert_eq!(symbolic::evaluate_nat(&t, 10_000).unwrap(), 4);
    }

    #[test]
    fn first_order_root_takes_inputs() {
        let c = circuit("\\x:N. \\y:N. add y (succ x)");
        let residue = Residue::of(&c).unwrap();
        assert_eq!(residue.boards.len(), 2);
        assert_eq!(residue.inputs.len(), 2);
        assert!(matches!(run(&c), Err(CircuitError::RootNotNat(_))));
    }

    #[test]
    fn count_from_an_input_is_unresolved() {
        let t = parse_term("\\n:N. iter[N] n (\\i:N. succ) 1").unwrap();
        let err = elaborate(instantiate(&t).unwrap(), 1000).unwrap_err();
        assert!(matches!(err, CircuitError::UnresolvedCount(_)));
    }

    #[test]
    fn staged_count() {
        assert_eq!(eval("iter[N] (pr[0](1, \\n:N. \\r:N. add r r) 3) (\\i:N. succ) 1"), 4);
    }

    #[test]
    fn fuel_bounds_elaboration() {
        let t = parse_term("iter[N] 50 (\\i:N. succ) 1").unwrap();
        let err = elaborate(instantiate(&t).unwrap(), 10).unwrap_err();
        assert_eq!(err, CircuitError::FuelExhausted(10));
    }

    #[test]
    fn unelaborated_shell_is_not_first_order() {
        let c = instantiate(&parse_term("iter[N] 2 (\\i:N. succ) 1").unwrap()).unwrap();
        assert!(matches!(Residue::of(&c), Err(CircuitError::NotFirstOrder { .. })));
    }

    #[test]
    fn pairs_of_functions() {
        assert_eq!(eval("(\\p:(N -> N ; N). fst p (snd p)) (succ, 2)"), 3);
        assert_eq!(eval("snd (1, add 2 3)"), 5);
        assert_eq!(eval("(\\p:(N -> N ; N -> N). add (fst p 1) (fst p 2)) (succ, succ)"), 5);
    }

    #[test]
    fn event_log_is_deterministic_and_valid() {
        let src = "pr[0](1, \\n:N. \\r:N. add r (succ n)) 5";
        let (a, b) = (circuit(src), circuit(src));
        assert_eq!(a.render_event_log(), b.render_event_log());
        a.validate_event_log().unwrap();
    }
}
