//! The core typed regex AST, its character conditions and smart constructors.
//!
//! Every [`TypedRegex`] node carries the [`Shape`] of the parse tree it
//! yields. Conversions are opaque functions on [`Value`]s tagged with their
//! domain and codomain shapes; they must be pure, since a single regex may be
//! executed from many threads at once.
//!
//! Integer results (see [`digit`]) are `i128`, the widest native integer.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::shape::Shape;
use crate::value::Value;

/// An opaque character predicate. Predicates never compare equal to each
/// other, not even to themselves.
#[derive(Clone)]
pub struct Predicate(Arc<dyn Fn(char) -> bool + Send + Sync>);

impl Predicate {
    pub fn new(f: impl Fn(char) -> bool + Send + Sync + 'static) -> Self {
        Predicate(Arc::new(f))
    }

    pub fn test(&self, c: char) -> bool {
        (self.0)(c)
    }

    pub(crate) fn ptr_eq(&self, other: &Predicate) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as *const u8 as usize
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<pred>")
    }
}

/// Single character conditional.
#[derive(Clone, Debug)]
pub enum CharCond {
    /// Matches if the character is in the set.
    OneOf(BTreeSet<char>),
    /// Matches if the character is in the inclusive range.
    Range(char, char),
    Pred(Predicate),
}

impl CharCond {
    pub fn one_of<I: IntoIterator<Item = char>>(chars: I) -> Self {
        CharCond::OneOf(chars.into_iter().collect())
    }

    pub fn single(c: char) -> Self {
        CharCond::OneOf(BTreeSet::from([c]))
    }

    pub fn range(lo: char, hi: char) -> Self {
        assert!(lo <= hi, "empty range {lo:?}-{hi:?}");
        CharCond::Range(lo, hi)
    }

    pub fn any() -> Self {
        CharCond::Range('\0', char::MAX)
    }

    pub fn pred(f: impl Fn(char) -> bool + Send + Sync + 'static) -> Self {
        CharCond::Pred(Predicate::new(f))
    }

    pub fn satisfies(&self, c: char) -> bool {
        satisfies(self, c)
    }

    /// Structural identity: like [`cond_equal`](crate::group::cond_equal) but
    /// a predicate is identical to itself.
    pub(crate) fn identical(&self, other: &CharCond) -> bool {
        match (self, other) {
            (CharCond::Pred(a), CharCond::Pred(b)) => a.ptr_eq(b),
            _ => crate::group::cond_equal(self, other),
        }
    }
}

pub fn satisfies(cond: &CharCond, c: char) -> bool {
    match cond {
        CharCond::OneOf(set) => set.contains(&c),
        CharCond::Range(lo, hi) => *lo <= c && c <= *hi,
        CharCond::Pred(p) => p.test(c),
    }
}

impl fmt::Display for CharCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharCond::OneOf(set) => set.iter().try_for_each(|c| write!(f, "{c}")),
            CharCond::Range(lo, hi) => write!(f, "{lo}-{hi}"),
            CharCond::Pred(_) => f.write_str("<pred>"),
        }
    }
}

type UnaryFn = dyn Fn(Value) -> Value + Send + Sync;
type BinaryFn = dyn Fn(Value, Value) -> Value + Send + Sync;

struct ConversionInner {
    name: Cow<'static, str>,
    from: Shape,
    to: Shape,
    f: Box<UnaryFn>,
}

/// A named unary function on parse trees with declared domain and codomain.
#[derive(Clone)]
pub struct Conversion(Arc<ConversionInner>);

impl Conversion {
    pub fn new(
        name: impl Into<Cow<'static, str>>,
        from: Shape,
        to: Shape,
        f: impl Fn(Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        Conversion(Arc::new(ConversionInner {
            name: name.into(),
            from,
            to,
            f: Box::new(f),
        }))
    }

    pub fn apply(&self, v: Value) -> Value {
        (self.0.f)(v)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn from_shape(&self) -> &Shape {
        &self.0.from
    }

    pub fn to_shape(&self) -> &Shape {
        &self.0.to
    }

    pub(crate) fn ptr_eq(&self, other: &Conversion) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

impl fmt::Debug for Conversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : {} -> {}",
            self.name(),
            self.from_shape(),
            self.to_shape()
        )
    }
}

struct ReducerInner {
    name: Cow<'static, str>,
    left: Shape,
    right: Shape,
    to: Shape,
    f: Box<BinaryFn>,
}

/// A named binary function combining the two topmost stack values.
#[derive(Clone)]
pub struct Reducer(Arc<ReducerInner>);

impl Reducer {
    pub fn new(
        name: impl Into<Cow<'static, str>>,
        left: Shape,
        right: Shape,
        to: Shape,
        f: impl Fn(Value, Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        Reducer(Arc::new(ReducerInner {
            name: name.into(),
            left,
            right,
            to,
            f: Box::new(f),
        }))
    }

    pub fn apply(&self, x: Value, y: Value) -> Value {
        (self.0.f)(x, y)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn left_shape(&self) -> &Shape {
        &self.0.left
    }

    pub fn right_shape(&self) -> &Shape {
        &self.0.right
    }

    pub fn to_shape(&self) -> &Shape {
        &self.0.to
    }

    pub(crate) fn ptr_eq(&self, other: &Reducer) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

impl fmt::Debug for Reducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : {} -> {} -> {}",
            self.name(),
            self.left_shape(),
            self.right_shape(),
            self.to_shape()
        )
    }
}

/// Stock conversions used by the compiler and the literal lowering.
pub mod conv {
    use super::*;

    fn pair_parts(v: Value) -> (Value, Value) {
        match v {
            Value::Pair(a, b) => ((*a).clone(), (*b).clone()),
            other => panic!("expected a pair, got {other}"),
        }
    }

    pub fn to_unit(from: Shape) -> Conversion {
        Conversion::new("\\_ => ()", from, Shape::Unit, |_| Value::Unit)
    }

    pub fn fst(a: Shape, b: Shape) -> Conversion {
        Conversion::new("fst", Shape::pair(a.clone(), b), a, |v| pair_parts(v).0)
    }

    pub fn snd(a: Shape, b: Shape) -> Conversion {
        Conversion::new("snd", Shape::pair(a, b.clone()), b, |v| pair_parts(v).1)
    }

    pub fn inject_left(a: Shape, b: Shape) -> Conversion {
        Conversion::new("Left", a.clone(), Shape::sum(a, b), Value::left)
    }

    pub fn inject_right(a: Shape, b: Shape) -> Conversion {
        Conversion::new("Right", b.clone(), Shape::sum(a, b), Value::right)
    }

    pub fn mk_pair(a: Shape, b: Shape) -> Reducer {
        Reducer::new(
            "MkPair",
            a.clone(),
            b.clone(),
            Shape::pair(a, b),
            Value::pair,
        )
    }

    /// `(:<)`: appends the top value to the list below it.
    pub fn snoc(elem: Shape) -> Reducer {
        let list = Shape::list(elem.clone());
        Reducer::new("(:<)", list.clone(), elem, list, |xs, x| match xs {
            Value::List(items) => Value::List(items.snoc(x)),
            other => panic!("expected a list, got {other}"),
        })
    }

    /// `(a, List a) -> List a`.
    pub fn prepend(elem: Shape) -> Conversion {
        let list = Shape::list(elem.clone());
        Conversion::new("(::)", Shape::pair(elem, list.clone()), list, |v| {
            let (x, xs) = pair_parts(v);
            match xs {
                Value::List(items) => Value::List(items.cons(x)),
                other => panic!("expected a list, got {other}"),
            }
        })
    }

    /// `Either a a -> a`.
    pub fn collapse_sum(a: Shape) -> Conversion {
        Conversion::new(
            "either id id",
            Shape::sum(a.clone(), a.clone()),
            a,
            |v| match v {
                Value::Left(x) | Value::Right(x) => (*x).clone(),
                other => panic!("expected a sum, got {other}"),
            },
        )
    }

    /// `List a -> Nat`.
    pub fn length(elem: Shape) -> Conversion {
        Conversion::new("length", Shape::list(elem), Shape::Nat, |v| match v {
            Value::List(items) => Value::Nat(items.len() as u64),
            other => panic!("expected a list, got {other}"),
        })
    }

    /// `Either () () -> Bool`, the left alternative being `True`.
    pub fn sum_to_bool() -> Conversion {
        Conversion::new(
            "isLeft",
            Shape::sum(Shape::Unit, Shape::Unit),
            Shape::Bool,
            |v| Value::Bool(matches!(v, Value::Left(_))),
        )
    }

    /// `Either a () -> Maybe a`; the value encoding is unchanged.
    pub fn left_to_option(a: Shape) -> Conversion {
        Conversion::new(
            "leftToMaybe",
            Shape::sum(a.clone(), Shape::Unit),
            Shape::option(a),
            |v| v,
        )
    }

    /// `Either () a -> Maybe a`.
    pub fn right_to_option(a: Shape) -> Conversion {
        Conversion::new(
            "rightToMaybe",
            Shape::sum(Shape::Unit, a.clone()),
            Shape::option(a),
            |v| match v {
                Value::Left(_) => Value::none(),
                Value::Right(x) => Value::Left(x),
                other => panic!("expected a sum, got {other}"),
            },
        )
    }

    /// `Maybe (List a) -> List a`, absent becoming the empty list.
    pub fn option_list_to_list(elem: Shape) -> Conversion {
        let list = Shape::list(elem);
        Conversion::new(
            "fromMaybe [<]",
            Shape::option(list.clone()),
            list,
            |v| match v {
                Value::Left(xs) => (*xs).clone(),
                Value::Right(_) => Value::empty_list(),
                other => panic!("expected an option, got {other}"),
            },
        )
    }

    /// `Char -> Integer`, the digit's numeric value.
    pub fn digit_value() -> Conversion {
        Conversion::new("digitValue", Shape::Char, Shape::Int, |v| match v {
            Value::Char(c) => Value::Int(i128::from(c as u32) - i128::from('0' as u32)),
            other => panic!("expected a char, got {other}"),
        })
    }
}

#[derive(Clone, Debug)]
pub enum Node {
    /// Matches the empty word.
    Empty,
    MatchChar(CharCond),
    Seq(TypedRegex, TypedRegex),
    Alt(TypedRegex, TypedRegex),
    /// Kleene star.
    Rep(TypedRegex),
    /// Same language, parse tree transformed by the conversion.
    Conv(TypedRegex, Conversion),
    /// Forfeits structured parsing and yields the matched substring.
    Group(TypedRegex),
}

/// A typed regex: an immutable, shareable AST annotated with its yield shape.
#[derive(Clone)]
pub struct TypedRegex {
    node: Arc<Node>,
    shape: Shape,
}

impl TypedRegex {
    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Shape of the parse trees this regex yields.
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn empty() -> Self {
        TypedRegex {
            node: Arc::new(Node::Empty),
            shape: Shape::Unit,
        }
    }

    pub fn match_cond(cond: CharCond) -> Self {
        TypedRegex {
            node: Arc::new(Node::MatchChar(cond)),
            shape: Shape::Char,
        }
    }

    pub fn seq(a: TypedRegex, b: TypedRegex) -> Self {
        let shape = Shape::pair(a.shape.clone(), b.shape.clone());
        TypedRegex {
            node: Arc::new(Node::Seq(a, b)),
            shape,
        }
    }

    pub fn alt(a: TypedRegex, b: TypedRegex) -> Self {
        let shape = Shape::sum(a.shape.clone(), b.shape.clone());
        TypedRegex {
            node: Arc::new(Node::Alt(a, b)),
            shape,
        }
    }

    pub fn rep(a: TypedRegex) -> Self {
        let shape = Shape::list(a.shape.clone());
        TypedRegex {
            node: Arc::new(Node::Rep(a)),
            shape,
        }
    }

    /// Panics if the conversion's domain differs from the regex's shape.
    pub fn conv(a: TypedRegex, f: Conversion) -> Self {
        assert_eq!(
            f.from_shape(),
            &a.shape,
            "conversion {} applied to the wrong shape",
            f.name()
        );
        let shape = f.to_shape().clone();
        TypedRegex {
            node: Arc::new(Node::Conv(a, f)),
            shape,
        }
    }

    pub fn group(a: TypedRegex) -> Self {
        TypedRegex {
            node: Arc::new(Node::Group(a)),
            shape: Shape::String,
        }
    }

    /// Whether every word this regex matches is non-empty.
    pub fn is_consuming(&self) -> bool {
        is_consuming(self)
    }
}

impl fmt::Debug for TypedRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypedRegex")
            .field("shape", &self.shape)
            .field("node", &self.node)
            .finish()
    }
}

pub fn is_consuming(re: &TypedRegex) -> bool {
    match re.node() {
        Node::Empty => false,
        Node::MatchChar(_) => true,
        Node::Seq(a, b) => is_consuming(a) || is_consuming(b),
        Node::Alt(a, b) => is_consuming(a) && is_consuming(b),
        Node::Rep(_) => false,
        Node::Conv(a, _) | Node::Group(a) => is_consuming(a),
    }
}

// Smart constructors.

/// Transforms the parse tree; `to` is the shape `f` produces.
pub fn map(
    re: TypedRegex,
    to: Shape,
    f: impl Fn(Value) -> Value + Send + Sync + 'static,
) -> TypedRegex {
    let from = re.shape().clone();
    TypedRegex::conv(re, Conversion::new("map", from, to, f))
}

/// Alternation of two regexes of the same shape, forgetting which matched.
pub fn or(a: TypedRegex, b: TypedRegex) -> Result<TypedRegex> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape().clone(),
            right: b.shape().clone(),
        });
    }
    let shape = a.shape().clone();
    Ok(TypedRegex::conv(
        TypedRegex::alt(a, b),
        conv::collapse_sum(shape),
    ))
}

pub fn seq(a: TypedRegex, b: TypedRegex) -> TypedRegex {
    TypedRegex::seq(a, b)
}

pub fn alt(a: TypedRegex, b: TypedRegex) -> TypedRegex {
    TypedRegex::alt(a, b)
}

/// `a *> b`: matches both, keeps the second parse tree.
pub fn discard_left(a: TypedRegex, b: TypedRegex) -> TypedRegex {
    let f = conv::snd(a.shape().clone(), b.shape().clone());
    TypedRegex::conv(TypedRegex::seq(a, b), f)
}

/// `a <* b`: matches both, keeps the first parse tree.
pub fn discard_right(a: TypedRegex, b: TypedRegex) -> TypedRegex {
    let f = conv::fst(a.shape().clone(), b.shape().clone());
    TypedRegex::conv(TypedRegex::seq(a, b), f)
}

pub fn match_char(c: char) -> TypedRegex {
    TypedRegex::conv(
        TypedRegex::match_cond(CharCond::single(c)),
        conv::to_unit(Shape::Char),
    )
}

pub fn any_char() -> TypedRegex {
    TypedRegex::match_cond(CharCond::any())
}

pub fn range(lo: char, hi: char) -> TypedRegex {
    TypedRegex::match_cond(CharCond::range(lo, hi))
}

pub fn one_of(chars: &str) -> TypedRegex {
    TypedRegex::match_cond(CharCond::one_of(chars.chars()))
}

pub fn predicate(f: impl Fn(char) -> bool + Send + Sync + 'static) -> TypedRegex {
    TypedRegex::match_cond(CharCond::pred(f))
}

/// A decimal digit, yielding its integer value.
pub fn digit() -> TypedRegex {
    TypedRegex::conv(
        TypedRegex::match_cond(CharCond::range('0', '9')),
        conv::digit_value(),
    )
}

/// Matches exactly the given text, yielding unit.
pub fn text(s: &str) -> TypedRegex {
    let mut chars = s.chars().rev();
    let Some(last) = chars.next() else {
        return TypedRegex::empty();
    };
    chars.fold(match_char(last), |acc, c| discard_left(match_char(c), acc))
}

pub fn rep0(re: TypedRegex) -> TypedRegex {
    TypedRegex::rep(re)
}

/// One or more repetitions, as `re` followed by `rep0(re)`.
pub fn rep1(re: TypedRegex) -> TypedRegex {
    let elem = re.shape().clone();
    let tail = TypedRegex::rep(re.clone());
    TypedRegex::conv(TypedRegex::seq(re, tail), conv::prepend(elem))
}

/// Optional match, yielding `Maybe a`.
pub fn optional(re: TypedRegex) -> TypedRegex {
    let a = re.shape().clone();
    let sum = TypedRegex::alt(re, TypedRegex::empty());
    TypedRegex::conv(sum, conv::left_to_option(a))
}

/// Discards structure and yields the matched substring.
pub fn ignore(re: TypedRegex) -> TypedRegex {
    TypedRegex::group(re)
}
