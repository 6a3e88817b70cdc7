//! Direct-recursive reference evaluator.
//!
//! Functions are native closures and the recursion combinators are unfolded
//! by plain recursion on the count, so nothing here shares code with either
//! engine under test.

use std::rc::Rc;

use hof::lang::Term;

#[derive(Clone)]
pub enum Value {
    Nat(u64),
    Pair(Rc<Value>, Rc<Value>),
    Fun(Rc<dyn Fn(Value) -> Value>),
}

impl Value {
    pub fn nat(&self) -> u64 {
        match self {
            Value::Nat(n) => *n,
            _ => panic!("oracle: expected a natural"),
        }
    }

    pub fn call(&self, arg: Value) -> Value {
        match self {
            Value::Fun(f) => f(arg),
            _ => panic!("oracle: expected a function"),
        }
    }

    fn fun(f: impl Fn(Value) -> Value + 'static) -> Value {
        Value::Fun(Rc::new(f))
    }
}

type Env = Vec<(String, Value)>;

pub fn eval(t: &Term) -> Value {
    eval_in(&Vec::new(), t)
}

pub fn eval_nat(t: &Term) -> u64 {
    eval(t).nat()
}

fn eval_in(env: &Env, t: &Term) -> Value {
    match t {
        Term::Lit(n) => Value::Nat(*n),
        Term::Var(x) => env.iter().rev().find(|(y, _)| **y == **x).expect("oracle: unbound").1.clone(),
        Term::Lam(x, _, body) => {
            let (env, x, body) = (env.clone(), x.to_string(), body.clone());
            Value::fun(move |v| {
                let mut inner = env.clone();
                inner.push((x.clone(), v));
                eval_in(&inner, &body)
            })
        }
        Term::App(f, a) => eval_in(env, f).call(eval_in(env, a)),
        Term::Pair(l, r) => Value::Pair(Rc::new(eval_in(env, l)), Rc::new(eval_in(env, r))),
        Term::Fst(p) => match eval_in(env, p) {
            Value::Pair(l, _) => (*l).clone(),
            _ => panic!("oracle: fst of non-pair"),
        },
        Term::Snd(p) => match eval_in(env, p) {
            Value::Pair(_, r) => (*r).clone(),
            _ => panic!("oracle: snd of non-pair"),
        },
        Term::Succ => Value::fun(|v| Value::Nat(v.nat() + 1)),
        Term::Add => Value::fun(|a| {
            let a = a.nat();
            Value::fun(move |b| Value::Nat(a + b.nat()))
        }),
        Term::IdAt(_) => Value::fun(|v| v),
        Term::Comp(..) => Value::fun(|p| match p {
            Value::Pair(f, g) => Value::fun(move |x| g.call(f.call(x))),
            _ => panic!("oracle: comp of non-pair"),
        }),
        Term::Iter(_) => Value::fun(|n| {
            let n = n.nat();
            Value::fun(move |c| {
                Value::fun(move |a| iterate(n, &c, a))
            })
        }),
        Term::Pr { h, g, k } => {
            let h = eval_in(env, h);
            let g = eval_in(env, g);
            curry(k + 1, Vec::new(), Rc::new(move |args: Vec<Value>| {
                let n = args[0].nat();
                primrec(n, &h, &g, &args[1..])
            }))
        }
    }
}

/// R(1)(c)(a) = a ; R(n+1)(c)(a) = c(n)(R(n)(c)(a))
fn iterate(n: u64, c: &Value, a: Value) -> Value {
    if n == 1 {
        a
    } else {
        c.call(Value::Nat(n - 1)).call(iterate(n - 1, c, a))
    }
}

/// f(1, xs) = h(xs) ; f(n+1, xs) = g(n, f(n, xs), xs)
fn primrec(n: u64, h: &Value, g: &Value, xs: &[Value]) -> Value {
    if n == 1 {
        xs.iter().fold(h.clone(), |f, x| f.call(x.clone()))
    } else {
        let prev = primrec(n - 1, h, g, xs);
        let applied = g.call(Value::Nat(n - 1)).call(prev);
        xs.iter().fold(applied, |f, x| f.call(x.clone()))
    }
}

fn curry(remaining: usize, got: Vec<Value>, done: Rc<dyn Fn(Vec<Value>) -> Value>) -> Value {
    Value::fun(move |v| {
        let mut got = got.clone();
        got.push(v);
        if remaining == 1 {
            done(got)
        } else {
            curry(remaining - 1, got, done.clone())
        }
    })
}
