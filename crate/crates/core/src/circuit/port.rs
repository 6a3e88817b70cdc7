//! Port trees: the plugs and sockets a type exposes.
//!
//! A value of type `N` is one wire terminal. A product is a pair of subtrees
//! of the same polarity. A function is a subtree for its input with the
//! polarity flipped and a subtree for its output with the polarity kept, so a
//! function-typed socket contains a plug for the argument it hands out and a
//! socket for the result it takes back.

use std::fmt;

use crate::types::Ty;

use super::board::BoardId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Plug,
    Socket,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plug => Polarity::Socket,
            Polarity::Socket => Polarity::Plug,
        }
    }

    fn flip_if(self, cond: bool) -> Polarity {
        if cond {
            self.flip()
        } else {
            self
        }
    }
}

/// One step into a port tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    In,
    Out,
    Left,
    Right,
}

impl Step {
    fn as_str(self) -> &'static str {
        match self {
            Step::In => "in",
            Step::Out => "out",
            Step::Left => "0",
            Step::Right => "1",
        }
    }
}

/// Preorder index path into a port tree, e.g. `in.0` or `out.out`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<Step>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, step: Step) -> Path {
        let mut steps = self.0.clone();
        steps.push(step);
        Path(steps)
    }

    pub fn join(&self, suffix: &Path) -> Path {
        let mut steps = self.0.clone();
        steps.extend_from_slice(&suffix.0);
        Path(steps)
    }

    /// Number of `in` steps, i.e. how many times the polarity flips.
    pub fn flips(&self) -> usize {
        self.0.iter().filter(|s| **s == Step::In).count()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // the single terminal of a base-typed board is its output
        if self.0.is_empty() {
            return f.write_str("out");
        }
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(step.as_str())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PortTree {
    Terminal(Polarity),
    Pair(Box<PortTree>, Box<PortTree>),
    Function { input: Box<PortTree>, output: Box<PortTree> },
}

impl PortTree {
    pub fn new(ty: &Ty, polarity: Polarity) -> PortTree {
        match ty {
            Ty::Nat => PortTree::Terminal(polarity),
            Ty::Prod(l, r) => PortTree::Pair(
                Box::new(PortTree::new(l, polarity)),
                Box::new(PortTree::new(r, polarity)),
            ),
            Ty::Arrow(a, b) => PortTree::Function {
                input: Box::new(PortTree::new(a, polarity.flip())),
                output: Box::new(PortTree::new(b, polarity)),
            },
        }
    }

    /// Every terminal with its path, in preorder.
    pub fn terminals(&self) -> Vec<(Path, Polarity)> {
        let mut out = Vec::new();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, prefix: &mut Vec<Step>, out: &mut Vec<(Path, Polarity)>) {
        match self {
            PortTree::Terminal(p) => out.push((Path(prefix.clone()), *p)),
            PortTree::Pair(l, r) => {
                for (step, sub) in [(Step::Left, l), (Step::Right, r)] {
                    prefix.push(step);
                    sub.collect(prefix, out);
                    prefix.pop();
                }
            }
            PortTree::Function { input, output } => {
                for (step, sub) in [(Step::In, input), (Step::Out, output)] {
                    prefix.push(step);
                    sub.collect(prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    pub fn at(&self, path: &Path) -> Option<&PortTree> {
        path.0.iter().try_fold(self, |node, step| match (node, step) {
            (PortTree::Pair(l, _), Step::Left) => Some(&**l),
            (PortTree::Pair(_, r), Step::Right) => Some(&**r),
            (PortTree::Function { input, .. }, Step::In) => Some(&**input),
            (PortTree::Function { output, .. }, Step::Out) => Some(&**output),
            _ => None,
        })
    }
}

/// The type found at `path` inside `ty`.
pub fn type_at(ty: &Ty, path: &Path) -> Option<Ty> {
    path.0.iter().try_fold(ty.clone(), |t, step| match (&t, step) {
        (Ty::Prod(l, _), Step::Left) => Some((**l).clone()),
        (Ty::Prod(_, r), Step::Right) => Some((**r).clone()),
        (Ty::Arrow(a, _), Step::In) => Some((**a).clone()),
        (Ty::Arrow(_, b), Step::Out) => Some((**b).clone()),
        _ => None,
    })
}

/// Leaf paths of `ty` with whether each leaf's polarity is flipped relative
/// to the root.
pub fn leaves(ty: &Ty) -> Vec<(Path, bool)> {
    PortTree::new(ty, Polarity::Plug)
        .terminals()
        .into_iter()
        .map(|(p, pol)| (p, pol == Polarity::Socket))
        .collect()
}

/// A wire terminal: one `N` leaf of one board.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Terminal {
    pub board: BoardId,
    pub path: Path,
}

impl Terminal {
    pub fn new(board: BoardId, path: Path) -> Terminal {
        Terminal { board, path }
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.board, self.path)
    }
}

/// A subtree of a board's interface, seen either from outside the board or
/// from inside it. The inside view swaps plugs and sockets: a board's input
/// socket is where its internals draw the argument from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bundle {
    pub board: BoardId,
    pub path: Path,
    pub inner: bool,
    pub ty: Ty,
}

impl Bundle {
    pub fn outer(board: BoardId, ty: Ty) -> Bundle {
        Bundle { board, path: Path::root(), inner: false, ty }
    }

    pub fn sub(&self, step: Step) -> Bundle {
        let path = self.path.child(step);
        let ty = type_at(&self.ty, &Path(vec![step])).expect("bundle step must match its type");
        Bundle { board: self.board, path, inner: self.inner, ty }
    }

    pub fn inside(&self) -> Bundle {
        Bundle { inner: true, ..self.clone() }
    }

    /// Polarity seen from the bundle's side, for a board whose interface is a
    /// plug of `board_ty`.
    pub fn polarity(&self) -> Polarity {
        let raw = if self.path.flips() % 2 == 0 { Polarity::Plug } else { Polarity::Socket };
        raw.flip_if(self.inner)
    }

    pub fn terminal(&self, suffix: &Path) -> Terminal {
        Terminal::new(self.board, self.path.join(suffix))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_flips_input() {
        let tree = PortTree::new(&Ty::arrow(Ty::Nat, Ty::Nat), Polarity::Plug);
        let terms = tree.terminals();
        assert_eq!(
            terms,
            vec![
                (Path(vec![Step::In]), Polarity::Socket),
                (Path(vec![Step::Out]), Polarity::Plug)
            ]
        );
    }

    #[test]
    fn higher_order_socket_contains_plug() {
        // F : (N -> N) -> N hands its argument an input and takes its result
        let f = Ty::arrow(Ty::arrow(Ty::Nat, Ty::Nat), Ty::Nat);
        let rendered: Vec<_> = PortTree::new(&f, Polarity::Plug)
            .terminals()
            .into_iter()
            .map(|(p, pol)| format!("{p}:{pol:?}"))
            .collect();
        assert_eq!(rendered, ["in.in:Plug", "in.out:Socket", "out:Plug"]);
    }

    #[test]
    fn paths_render() {
        assert_eq!(Path::root().to_string(), "out");
        assert_eq!(Path(vec![Step::In, Step::Left]).to_string(), "in.0");
        assert_eq!(leaves(&Ty::prod(Ty::Nat, Ty::Nat)).len(), 2);
    }
}
