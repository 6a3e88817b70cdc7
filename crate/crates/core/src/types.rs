//! Type expressions: the base type of naturals, function arrows and binary
//! products.

use std::fmt;
use std::sync::Arc;

/// A monomorphic type.
///
/// Children are reference counted so types can be cloned freely and shared
/// between threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Nat,
    Arrow(Arc<Ty>, Arc<Ty>),
    Prod(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Arc::new(dom), Arc::new(cod))
    }

    pub fn prod(left: Ty, right: Ty) -> Ty {
        Ty::Prod(Arc::new(left), Arc::new(right))
    }

    /// `N -> N -> ... -> N` with `arity` arguments.
    pub fn nat_fn(arity: usize) -> Ty {
        (0..arity).fold(Ty::Nat, |acc, _| Ty::arrow(Ty::Nat, acc))
    }

    /// Order of the type: 0 for `N`, arrows raise the order of their domain
    /// by one, products take the maximum of their components.
    pub fn order(&self) -> usize {
        match self {
            Ty::Nat => 0,
            Ty::Prod(l, r) => l.order().max(r.order()),
            Ty::Arrow(d, c) => (d.order() + 1).max(c.order()),
        }
    }

    pub fn is_nat(&self) -> bool {
        matches!(self, Ty::Nat)
    }

    pub fn as_arrow(&self) -> Option<(&Ty, &Ty)> {
        match self {
            Ty::Arrow(d, c) => Some((d, c)),
            _ => None,
        }
    }

    pub fn as_prod(&self) -> Option<(&Ty, &Ty)> {
        match self {
            Ty::Prod(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Number of `N` leaves, i.e. the number of wires needed to carry a
    /// value of this type.
    pub fn width(&self) -> usize {
        match self {
            Ty::Nat => 1,
            Ty::Arrow(a, b) | Ty::Prod(a, b) => a.width() + b.width(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Ty::Nat => 1,
            Ty::Arrow(a, b) | Ty::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Structural type equality.
pub fn type_equal(a: &Ty, b: &Ty) -> bool {
    a == b
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Nat => f.write_str("N"),
            Ty::Prod(l, r) => write!(f, "({l} ; {r})"),
            Ty::Arrow(d, c) => {
                if d.as_arrow().is_some() {
                    write!(f, "({d}) -> {c}")
                } else {
                    write!(f, "{d} -> {c}")
                }
            }
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn() -> Ty {
        Ty::arrow(Ty::Nat, Ty::Nat)
    }

    #[test]
    fn equality_examples() {
        assert!(type_equal(&Ty::Nat, &Ty::Nat));
        assert!(type_equal(&nn(), &nn()));
        let right = Ty::arrow(Ty::Nat, nn());
        let left = Ty::arrow(nn(), Ty::Nat);
        assert!(!type_equal(&right, &left));
    }

    #[test]
    fn order_examples() {
        assert_eq!(Ty::Nat.order(), 0);
        assert_eq!(nn().order(), 1);
        assert_eq!(Ty::arrow(nn(), nn()).order(), 2);
        assert_eq!(Ty::nat_fn(3).order(), 1);
        assert_eq!(Ty::prod(Ty::Nat, nn()).order(), 1);
    }

    #[test]
    fn display_is_right_associative() {
        assert_eq!(Ty::nat_fn(2).to_string(), "N -> N -> N");
        assert_eq!(Ty::arrow(nn(), Ty::Nat).to_string(), "(N -> N) -> N");
        assert_eq!(Ty::prod(nn(), Ty::Nat).to_string(), "(N -> N ; N)");
    }
}
