//! Dynamic parse trees.

use std::fmt;
use std::sync::Arc;

use crate::plist::PList;
use crate::shape::Shape;

/// A parse tree produced by running a compiled regex.
///
/// Children are reference counted and lists are persistent, so cloning a
/// value is constant time regardless of its size. `Maybe a` values are
/// encoded as sums: `Left payload` is present, `Right ()` is absent.
#[derive(Clone, PartialEq, Eq)]
pub enum Value {
    Unit,
    Char(char),
    Str(Arc<str>),
    Nat(u64),
    Int(i128),
    Bool(bool),
    Pair(Arc<Value>, Arc<Value>),
    Left(Arc<Value>),
    Right(Arc<Value>),
    List(PList<Value>),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn left(v: Value) -> Value {
        Value::Left(Arc::new(v))
    }

    pub fn right(v: Value) -> Value {
        Value::Right(Arc::new(v))
    }

    pub fn string(s: impl Into<Arc<str>>) -> Value {
        Value::Str(s.into())
    }

    pub fn list<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::List(items.into_iter().collect())
    }

    pub fn empty_list() -> Value {
        Value::List(PList::new())
    }

    pub fn some(v: Value) -> Value {
        Value::left(v)
    }

    pub fn none() -> Value {
        Value::right(Value::Unit)
    }

    pub fn as_char(&self) -> Option<char> {
        match self {
            Value::Char(c) => Some(*c),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i128> {
        match self {
            Value::Int(n) => Some(*n),
            Value::Nat(n) => Some(i128::from(*n)),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&PList<Value>> {
        match self {
            Value::List(items) => Some(items),
            _ => None,
        }
    }

    /// Whether this value is a parse tree of the given shape.
    pub fn conforms(&self, shape: &Shape) -> bool {
        match (self, shape) {
            (Value::Unit, Shape::Unit)
            | (Value::Char(_), Shape::Char)
            | (Value::Str(_), Shape::String)
            | (Value::Nat(_), Shape::Nat)
            | (Value::Int(_), Shape::Int)
            | (Value::Bool(_), Shape::Bool) => true,
            (Value::Pair(a, b), Shape::Pair(sa, sb)) => a.conforms(sa) && b.conforms(sb),
            (Value::Left(a), Shape::Sum(sa, _)) => a.conforms(sa),
            (Value::Right(b), Shape::Sum(_, sb)) => b.conforms(sb),
            (Value::Left(a), Shape::Option(sa)) => a.conforms(sa),
            (Value::Right(b), Shape::Option(_)) => matches!(**b, Value::Unit),
            (Value::List(items), Shape::List(s)) => items.iter().all(|v| v.conforms(s)),
            _ => false,
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders in the host notation used by machine traces: `()`, `'c'`,
/// `("s")`, `(a, b)`, `Left x`, `[< x, y]`.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Char(c) => write!(f, "{c:?}"),
            Value::Str(s) => write!(f, "{:?}", &**s),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => f.write_str(if *b { "True" } else { "False" }),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Left(a) => write_tagged(f, "Left", a),
            Value::Right(b) => write_tagged(f, "Right", b),
            Value::List(items) => {
                f.write_str("[<")?;
                for (i, v) in items.iter().enumerate() {
                    f.write_str(if i == 0 { " " } else { ", " })?;
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn write_tagged(f: &mut fmt::Formatter<'_>, tag: &str, v: &Value) -> fmt::Result {
    match v {
        Value::Left(_) | Value::Right(_) => write!(f, "{tag} ({v})"),
        _ => write!(f, "{tag} {v}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn option_encoding_conforms() {
        let shape = Shape::option(Shape::Char);
        assert!(Value::some(Value::Char('x')).conforms(&shape));
        assert!(Value::none().conforms(&shape));
        assert!(!Value::right(Value::Char('x')).conforms(&shape));
    }

    #[test]
    fn nested_conformance() {
        let shape = Shape::pair(Shape::Nat, Shape::list(Shape::Char));
        let v = Value::pair(
            Value::Nat(2),
            Value::list([Value::Char('a'), Value::Char('b')]),
        );
        assert!(v.conforms(&shape));
        let bad = Value::pair(Value::Nat(2), Value::list([Value::Unit]));
        assert!(!bad.conforms(&shape));
    }

    #[test]
    fn display_uses_snoc_notation() {
        let v = Value::pair(Value::Unit, Value::Char('3'));
        assert_eq!(v.to_string(), "((), '3')");
        assert_eq!(
            Value::list([Value::Char('a'), Value::Char('b')]).to_string(),
            "[< 'a', 'b']"
        );
        assert_eq!(Value::empty_list().to_string(), "[<]");
        assert_eq!(
            Value::left(Value::right(Value::Unit)).to_string(),
            "Left (Right ())"
        );
    }
}
