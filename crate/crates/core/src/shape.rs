//! Parse-tree shapes.
//!
//! A [`Shape`] describes the type of the parse tree a regex produces. Literal
//! regexes compute their shape from the keep marks, and [`simplify`] removes
//! redundant unit components from it.

use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Unit,
    Char,
    String,
    /// Non-negative count, produced by simplifying a list of units.
    Nat,
    /// Signed integer (the result type of [`digit`](crate::regex::digit)).
    Int,
    Bool,
    Pair(Arc<Shape>, Arc<Shape>),
    Sum(Arc<Shape>, Arc<Shape>),
    Option(Arc<Shape>),
    List(Arc<Shape>),
}

impl Shape {
    pub fn pair(a: Shape, b: Shape) -> Shape {
        Shape::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn sum(a: Shape, b: Shape) -> Shape {
        Shape::Sum(Arc::new(a), Arc::new(b))
    }

    pub fn option(a: Shape) -> Shape {
        Shape::Option(Arc::new(a))
    }

    pub fn list(a: Shape) -> Shape {
        Shape::List(Arc::new(a))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Shape::Unit)
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, Shape::Sum(..) | Shape::Option(_) | Shape::List(_))
    }

    /// True when no simplification rule applies anywhere in the descriptor.
    pub fn is_simplified(&self) -> bool {
        match self {
            Shape::Pair(a, b) => {
                !a.is_unit() && !b.is_unit() && a.is_simplified() && b.is_simplified()
            }
            Shape::Sum(a, b) => {
                !a.is_unit() && !b.is_unit() && a.is_simplified() && b.is_simplified()
            }
            Shape::Option(a) => !matches!(**a, Shape::List(_)) && a.is_simplified(),
            Shape::List(a) => !a.is_unit() && a.is_simplified(),
            _ => true,
        }
    }
}

/// Removes redundant units bottom-up until no rule applies.
///
/// Rules: `(Unit, Unit)`, `(a, Unit)` and `(Unit, a)` drop the units;
/// `List Unit` becomes `Nat`; `Either Unit Unit` becomes `Bool`;
/// `Either a Unit` and `Either Unit a` become `Maybe a`;
/// `Maybe (List a)` becomes `List a`.
pub fn simplify(shape: &Shape) -> Shape {
    match shape {
        Shape::Pair(a, b) => simplify_pair(simplify(a), simplify(b)),
        Shape::Sum(a, b) => simplify_sum(simplify(a), simplify(b)),
        Shape::Option(a) => simplify_option(simplify(a)),
        Shape::List(a) => simplify_list(simplify(a)),
        other => other.clone(),
    }
}

// The node-level rules below assume simplified children and return a
// simplified result.

pub(crate) fn simplify_pair(a: Shape, b: Shape) -> Shape {
    match (a.is_unit(), b.is_unit()) {
        (true, true) => Shape::Unit,
        (false, true) => a,
        (true, false) => b,
        (false, false) => Shape::pair(a, b),
    }
}

pub(crate) fn simplify_sum(a: Shape, b: Shape) -> Shape {
    match (a.is_unit(), b.is_unit()) {
        (true, true) => Shape::Bool,
        (false, true) => simplify_option(a),
        (true, false) => simplify_option(b),
        (false, false) => Shape::sum(a, b),
    }
}

pub(crate) fn simplify_option(a: Shape) -> Shape {
    match a {
        list @ Shape::List(_) => list,
        other => Shape::option(other),
    }
}

pub(crate) fn simplify_list(a: Shape) -> Shape {
    if a.is_unit() {
        Shape::Nat
    } else {
        Shape::list(a)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn arg(f: &mut fmt::Formatter<'_>, s: &Shape) -> fmt::Result {
            if s.is_atomic() {
                write!(f, "{s}")
            } else {
                write!(f, "({s})")
            }
        }
        match self {
            Shape::Unit => f.write_str("Unit"),
            Shape::Char => f.write_str("Char"),
            Shape::String => f.write_str("String"),
            Shape::Nat => f.write_str("Nat"),
            Shape::Int => f.write_str("Integer"),
            Shape::Bool => f.write_str("Bool"),
            Shape::Pair(a, b) => write!(f, "({a}, {b})"),
            Shape::Sum(a, b) => {
                f.write_str("Either ")?;
                arg(f, a)?;
                f.write_str(" ")?;
                arg(f, b)
            }
            Shape::Option(a) => {
                f.write_str("Maybe ")?;
                arg(f, a)
            }
            Shape::List(a) => {
                f.write_str("List ")?;
                arg(f, a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves() -> Vec<Shape> {
        vec![Shape::Unit, Shape::Char]
    }

    /// Every descriptor over {Unit, Char, Pair, Sum, Option, List} up to `depth`.
    fn enumerate(depth: usize) -> Vec<Shape> {
        if depth == 1 {
            return leaves();
        }
        let smaller = enumerate(depth - 1);
        let mut out = leaves();
        for s in &smaller {
            out.push(Shape::option(s.clone()));
            out.push(Shape::list(s.clone()));
        }
        for a in &smaller {
            for b in &smaller {
                out.push(Shape::pair(a.clone(), b.clone()));
                out.push(Shape::sum(a.clone(), b.clone()));
            }
        }
        out
    }

    #[test]
    fn quoted_rules() {
        assert_eq!(
            simplify(&Shape::pair(Shape::Unit, Shape::Unit)),
            Shape::Unit
        );
        assert_eq!(simplify(&Shape::list(Shape::Unit)), Shape::Nat);
        assert_eq!(simplify(&Shape::sum(Shape::Unit, Shape::Unit)), Shape::Bool);
        assert_eq!(simplify(&Shape::Char), Shape::Char);
    }

    #[test]
    fn sum_with_unit_list_becomes_list() {
        let s = Shape::sum(Shape::list(Shape::Char), Shape::Unit);
        assert_eq!(simplify(&s), Shape::list(Shape::Char));
    }

    #[test]
    fn nested_units_vanish() {
        let s = Shape::pair(
            Shape::pair(Shape::Unit, Shape::list(Shape::Unit)),
            Shape::pair(Shape::Char, Shape::Unit),
        );
        assert_eq!(simplify(&s), Shape::pair(Shape::Nat, Shape::Char));
    }

    #[test]
    fn idempotent_and_simplified_exhaustive() {
        // ~360k descriptors; depth 6 is covered by the proptest below.
        for s in enumerate(4) {
            let once = simplify(&s);
            assert!(once.is_simplified(), "{s} -> {once}");
            assert_eq!(simplify(&once), once, "{s}");
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_shape() -> impl Strategy<Value = Shape> {
            let leaf = prop_oneof![
                Just(Shape::Unit),
                Just(Shape::Char),
                Just(Shape::String),
                Just(Shape::Nat),
                Just(Shape::Bool),
            ];
            leaf.prop_recursive(6, 64, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::pair(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::sum(a, b)),
                    inner.clone().prop_map(Shape::option),
                    inner.prop_map(Shape::list),
                ]
            })
        }

        proptest! {
            #[test]
            fn simplify_is_idempotent(s in arb_shape()) {
                let once = simplify(&s);
                prop_assert!(once.is_simplified());
                prop_assert_eq!(simplify(&once), once);
            }
        }
    }

    #[test]
    fn display_matches_host_notation() {
        let s = Shape::option(Shape::pair(
            Shape::Nat,
            Shape::pair(Shape::Char, Shape::list(Shape::Char)),
        ));
        assert_eq!(s.to_string(), "Maybe (Nat, (Char, List Char))");
        assert_eq!(
            Shape::sum(Shape::list(Shape::Char), Shape::Unit).to_string(),
            "Either (List Char) Unit"
        );
    }
}
