//! Term-rewriting evaluator.
//!
//! Reduction is leftmost-outermost with no sharing, so a trace shows every
//! unfolding of the recursion equations in the order it happens. Addition
//! fires only once both operands are literals.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::lang::{subst, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Beta,
    PairFst,
    PairSnd,
    PrBase,
    PrStep,
    IterBase,
    IterStep,
    Comp,
    DeltaSucc,
    DeltaAdd,
    DeltaId,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Beta => "BETA",
            Rule::PairFst => "PAIR-FST",
            Rule::PairSnd => "PAIR-SND",
            Rule::PrBase => "PR-BASE",
            Rule::PrStep => "PR-STEP",
            Rule::IterBase => "ITER-BASE",
            Rule::IterStep => "ITER-STEP",
            Rule::Comp => "COMP",
            Rule::DeltaSucc => "DELTA-SUCC",
            Rule::DeltaAdd => "DELTA-ADD",
            Rule::DeltaId => "DELTA-ID",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted after {steps_taken} steps")]
    FuelExhausted { steps_taken: usize, last_term: Arc<Term> },
    #[error("stuck term: {0}")]
    StuckTerm(Arc<Term>),
    #[error("arithmetic overflow in {0}")]
    Overflow(Arc<Term>),
}

/// The rewrite history of one normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Arc<Term>,
    /// `(rule, term_after)`; the term before step `i` is the term after step
    /// `i - 1`, or `initial` for the first step.
    pub steps: Vec<(Rule, Arc<Term>)>,
}

impl Trace {
    pub fn final_term(&self) -> &Arc<Term> {
        self.steps.last().map(|(_, t)| t).unwrap_or(&self.initial)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `(rule, before, after)` for every step.
    pub fn entries(&self) -> impl Iterator<Item = (Rule, &Arc<Term>, &Arc<Term>)> {
        let befores = std::iter::once(&self.initial).chain(self.steps.iter().map(|(_, t)| t));
        self.steps.iter().zip(befores).map(|((rule, after), before)| (*rule, before, after))
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.steps.iter().map(|(r, _)| *r)
    }

    pub fn write_to(&self, mut out: impl Write) -> io::Result<()> {
        for (k, (rule, term)) in self.steps.iter().enumerate() {
            writeln!(out, "step {} [{}]: {}", k + 1, rule, term)?;
        }
        writeln!(out, "normal: {}", self.final_term())
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("trace is UTF-8")
    }
}

/// Performs one leftmost-outermost rewrite, or returns `None` for a normal
/// form.
pub fn step(t: &Arc<Term>) -> Result<Option<(Rule, Arc<Term>)>, EvalError> {
    if let Some(hit) = head_rule(t)? {
        return Ok(Some(hit));
    }
    let out = match &**t {
        Term::App(f, a) => {
            if let Some((r, f2)) = step(f)? {
                Some((r, Arc::new(Term::App(f2, a.clone()))))
            } else {
                step(a)?.map(|(r, a2)| (r, Arc::new(Term::App(f.clone(), a2))))
            }
        }
        Term::Lam(x, ty, body) => step(body)?.map(|(r, b)| (r, Arc::new(Term::Lam(x.clone(), ty.clone(), b)))),
        Term::Pair(l, r) => {
            if let Some((rule, l2)) = step(l)? {
                Some((rule, Arc::new(Term::Pair(l2, r.clone()))))
            } else {
                step(r)?.map(|(rule, r2)| (rule, Arc::new(Term::Pair(l.clone(), r2))))
            }
        }
        Term::Fst(p) => step(p)?.map(|(r, p2)| (r, Arc::new(Term::Fst(p2)))),
        Term::Snd(p) => step(p)?.map(|(r, p2)| (r, Arc::new(Term::Snd(p2)))),
        Term::Pr { h, g, k } => {
            if let Some((r, h2)) = step(h)? {
                Some((r, Arc::new(Term::Pr { h: h2, g: g.clone(), k: *k })))
            } else {
                step(g)?.map(|(r, g2)| (r, Arc::new(Term::Pr { h: h.clone(), g: g2, k: *k })))
            }
        }
        _ => None,
    };
    if out.is_none() {
        check_not_stuck(t)?;
    }
    Ok(out)
}

fn as_lit(t: &Term) -> Option<u64> {
    match t {
        Term::Lit(n) => Some(*n),
        _ => None,
    }
}

/// The rewrite rule applicable at the root of `t`, if any.
fn head_rule(t: &Arc<Term>) -> Result<Option<(Rule, Arc<Term>)>, EvalError> {
    match &**t {
        Term::App(f, a) => {
            if let Term::Lam(x, _, body) = &**f {
                return Ok(Some((Rule::Beta, subst(body, x, a))));
            }
        }
        Term::Fst(p) => {
            if let Term::Pair(l, _) = &**p {
                return Ok(Some((Rule::PairFst, l.clone())));
            }
            return Ok(None);
        }
        Term::Snd(p) => {
            if let Term::Pair(_, r) = &**p {
                return Ok(Some((Rule::PairSnd, r.clone())));
            }
            return Ok(None);
        }
        _ => return Ok(None),
    }
    let (head, args) = t.spine();
    let rewrite = match (&**head, args.as_slice()) {
        (Term::Succ, [n]) => match as_lit(n) {
            Some(n) => {
                let m = n.checked_add(1).ok_or_else(|| EvalError::Overflow(t.clone()))?;
                Some((Rule::DeltaSucc, Term::lit(m)))
            }
            None => None,
        },
        (Term::Add, [a, b]) => match (as_lit(a), as_lit(b)) {
            (Some(a), Some(b)) => {
                let m = a.checked_add(b).ok_or_else(|| EvalError::Overflow(t.clone()))?;
                Some((Rule::DeltaAdd, Term::lit(m)))
            }
            _ => None,
        },
        (Term::IdAt(_), [x]) => Some((Rule::DeltaId, (*x).clone())),
        (Term::Comp(..), [p, x]) => match &***p {
            Term::Pair(f, g) => Some((Rule::Comp, Term::app(g.clone(), Term::app(f.clone(), (*x).clone())))),
            _ => None,
        },
        (Term::Iter(_), [n, c, a]) => match as_lit(n) {
            Some(1) => Some((Rule::IterBase, (*a).clone())),
            Some(m) => {
                let prev = Term::lit(m - 1);
                let rec = Term::apps(head.clone(), [prev.clone(), (*c).clone(), (*a).clone()]);
                Some((Rule::IterStep, Term::apps((*c).clone(), [prev, rec])))
            }
            None => None,
        },
        (Term::Pr { h, g, k }, [n, xs @ ..]) if xs.len() == *k => {
            let xs = xs.iter().map(|x| (*x).clone());
            match as_lit(n) {
                Some(1) => Some((Rule::PrBase, Term::apps(h.clone(), xs))),
                Some(m) => {
                    let prev = Term::lit(m - 1);
                    let rec = Term::apps(Term::app(head.clone(), prev.clone()), xs.clone());
                    Some((Rule::PrStep, Term::apps(Term::apps(g.clone(), [prev, rec]), xs)))
                }
                None => None,
            }
        }
        _ => None,
    };
    Ok(rewrite)
}

/// A combinator spine whose required arguments are all normal must have
/// fired; if it did not, the term is stuck.
fn check_not_stuck(t: &Arc<Term>) -> Result<(), EvalError> {
    let (head, args) = t.spine();
    let stuck = match (&**head, args.as_slice()) {
        (Term::Succ, [n]) => n.is_closed() && as_lit(n).is_none(),
        (Term::Add, [a, b]) => a.is_closed() && b.is_closed() && (as_lit(a).is_none() || as_lit(b).is_none()),
        (Term::Iter(_), [n, ..]) if args.len() == 3 => n.is_closed() && as_lit(n).is_none(),
        (Term::Pr { k, .. }, [n, ..]) if args.len() == k + 1 => n.is_closed() && as_lit(n).is_none(),
        (Term::Comp(..), [p, _]) => p.is_closed() && !matches!(&***p, Term::Pair(..)),
        _ => false,
    };
    if stuck {
        Err(EvalError::StuckTerm(t.clone()))
    } else {
        Ok(())
    }
}

/// Rewrites `t` to normal form, recording every step.
pub fn normalize(t: &Arc<Term>, fuel: usize) -> Result<Trace, EvalError> {
    let mut trace = Trace { initial: t.clone(), steps: Vec::new() };
    let mut current = t.clone();
    while let Some((rule, next)) = step(&current)? {
        if trace.steps.len() == fuel {
            return Err(EvalError::FuelExhausted { steps_taken: fuel, last_term: current });
        }
        trace.steps.push((rule, next.clone()));
        current = next;
    }
    Ok(trace)
}

/// Like [`normalize`] without keeping intermediate terms. Returns the normal
/// form and the number of steps taken.
pub fn evaluate(t: &Arc<Term>, fuel: usize) -> Result<(Arc<Term>, usize), EvalError> {
    let mut current = t.clone();
    let mut steps = 0;
    while let Some((_, next)) = step(&current)? {
        if steps == fuel {
            return Err(EvalError::FuelExhausted { steps_taken: fuel, last_term: current });
        }
        steps += 1;
        current = next;
    }
    Ok((current, steps))
}

/// Evaluates a closed program of type `N` to its numeral.
pub fn evaluate_nat(t: &Arc<Term>, fuel: usize) -> Result<u64, EvalError> {
    let (normal, _) = evaluate(t, fuel)?;
    as_lit(&normal).ok_or(EvalError::StuckTerm(normal))
}
