//! Statically typed wrappers over [`TypedRegex`] and the runtime.
//!
//! A [`Tyre<T>`] is a regex whose parse trees are Rust values of type `T`.
//! The correspondence between `T` and the regex's [`Shape`] is checked when
//! the wrapper is built, so extraction after a successful parse cannot fail.

use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::literal::compile_literal;
use crate::regex::{self as re, Conversion, TypedRegex};
use crate::runtime::{self, CharStream, Program};
use crate::shape::Shape;
use crate::value::Value;

/// Rust types that parse trees can be read into.
pub trait Parsed: Sized {
    fn from_value(v: &Value) -> Self;
    fn into_value(self) -> Value;
}

/// Rust types with a fixed parse-tree shape.
pub trait Shaped: Parsed {
    fn shape() -> Shape;
}

/// A sum of two parse trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Either<A, B> {
    Left(A),
    Right(B),
}

impl Parsed for Value {
    fn from_value(v: &Value) -> Self {
        v.clone()
    }
    fn into_value(self) -> Value {
        self
    }
}

impl Parsed for () {
    fn from_value(_: &Value) -> Self {}
    fn into_value(self) -> Value {
        Value::Unit
    }
}

impl Shaped for () {
    fn shape() -> Shape {
        Shape::Unit
    }
}

impl Parsed for char {
    fn from_value(v: &Value) -> Self {
        v.as_char().expect("char parse tree")
    }
    fn into_value(self) -> Value {
        Value::Char(self)
    }
}

impl Shaped for char {
    fn shape() -> Shape {
        Shape::Char
    }
}

impl Parsed for String {
    fn from_value(v: &Value) -> Self {
        v.as_str().expect("string parse tree").to_string()
    }
    fn into_value(self) -> Value {
        Value::string(self)
    }
}

impl Shaped for String {
    fn shape() -> Shape {
        Shape::String
    }
}

impl Parsed for u64 {
    fn from_value(v: &Value) -> Self {
        match v {
            Value::Nat(n) => *n,
            other => panic!("expected a natural number, got {other}"),
        }
    }
    fn into_value(self) -> Value {
        Value::Nat(self)
    }
}

impl Shaped for u64 {
    fn shape() -> Shape {
        Shape::Nat
    }
}

impl Parsed for i128 {
    fn from_value(v: &Value) -> Self {
        match v {
            Value::Int(n) => *n,
            other => panic!("expected an integer, got {other}"),
        }
    }
    fn into_value(self) -> Value {
        Value::Int(self)
    }
}

impl Shaped for i128 {
    fn shape() -> Shape {
        Shape::Int
    }
}

impl Parsed for bool {
    fn from_value(v: &Value) -> Self {
        match v {
            Value::Bool(b) => *b,
            other => panic!("expected a boolean, got {other}"),
        }
    }
    fn into_value(self) -> Value {
        Value::Bool(self)
    }
}

impl Shaped for bool {
    fn shape() -> Shape {
        Shape::Bool
    }
}

impl<A: Parsed, B: Parsed> Parsed for (A, B) {
    fn from_value(v: &Value) -> Self {
        let (a, b) = v.as_pair().expect("pair parse tree");
        (A::from_value(a), B::from_value(b))
    }
    fn into_value(self) -> Value {
        Value::pair(self.0.into_value(), self.1.into_value())
    }
}

impl<A: Shaped, B: Shaped> Shaped for (A, B) {
    fn shape() -> Shape {
        Shape::pair(A::shape(), B::shape())
    }
}

impl<A: Parsed, B: Parsed> Parsed for Either<A, B> {
    fn from_value(v: &Value) -> Self {
        match v {
            Value::Left(a) => Either::Left(A::from_value(a)),
            Value::Right(b) => Either::Right(B::from_value(b)),
            other => panic!("expected a sum, got {other}"),
        }
    }
    fn into_value(self) -> Value {
        match self {
            Either::Left(a) => Value::left(a.into_value()),
            Either::Right(b) => Value::right(b.into_value()),
        }
    }
}

impl<A: Shaped, B: Shaped> Shaped for Either<A, B> {
    fn shape() -> Shape {
        Shape::sum(A::shape(), B::shape())
    }
}

impl<A: Parsed> Parsed for Option<A> {
    fn from_value(v: &Value) -> Self {
        match v {
            Value::Left(a) => Some(A::from_value(a)),
            Value::Right(_) => None,
            other => panic!("expected an option, got {other}"),
        }
    }
    fn into_value(self) -> Value {
        match self {
            Some(a) => Value::some(a.into_value()),
            None => Value::none(),
        }
    }
}

impl<A: Shaped> Shaped for Option<A> {
    fn shape() -> Shape {
        Shape::option(A::shape())
    }
}

impl<A: Parsed> Parsed for Vec<A> {
    fn from_value(v: &Value) -> Self {
        v.as_list()
            .expect("list parse tree")
            .iter()
            .map(A::from_value)
            .collect()
    }
    fn into_value(self) -> Value {
        Value::list(self.into_iter().map(Parsed::into_value))
    }
}

impl<A: Shaped> Shaped for Vec<A> {
    fn shape() -> Shape {
        Shape::list(A::shape())
    }
}

/// A regex yielding parse trees of type `T`.
pub struct Tyre<T> {
    regex: TypedRegex,
    marker: PhantomData<fn() -> T>,
}

impl<T> Clone for Tyre<T> {
    fn clone(&self) -> Self {
        Tyre {
            regex: self.regex.clone(),
            marker: PhantomData,
        }
    }
}

impl<T> std::fmt::Debug for Tyre<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.regex.fmt(f)
    }
}

impl<T: Shaped> Tyre<T> {
    /// Wraps an untyped-at-compile-time regex, checking its shape.
    pub fn from_regex(regex: TypedRegex) -> Result<Self> {
        let expected = T::shape();
        if regex.shape() != &expected {
            return Err(Error::ShapeMismatch {
                left: expected,
                right: regex.shape().clone(),
            });
        }
        Ok(Tyre {
            regex,
            marker: PhantomData,
        })
    }

    /// Compiles a regex literal whose computed shape must be `T`'s.
    pub fn literal(text: &str) -> Result<Self> {
        Self::from_regex(compile_literal(text)?.regex)
    }
}

impl Tyre<Value> {
    /// Wraps any regex, yielding dynamic parse trees.
    pub fn dynamic(regex: TypedRegex) -> Self {
        Tyre {
            regex,
            marker: PhantomData,
        }
    }
}

impl<T: Parsed> Tyre<T> {
    pub fn regex(&self) -> &TypedRegex {
        &self.regex
    }

    /// Maps the parse tree. The function must be pure.
    pub fn map<U: Shaped>(self, f: impl Fn(T) -> U + Send + Sync + 'static) -> Tyre<U> {
        let from = self.regex.shape().clone();
        let c = Conversion::new("map", from, U::shape(), move |v| {
            f(T::from_value(&v)).into_value()
        });
        Tyre {
            regex: TypedRegex::conv(self.regex, c),
            marker: PhantomData,
        }
    }

    pub fn then<U: Parsed>(self, other: Tyre<U>) -> Tyre<(T, U)> {
        Tyre {
            regex: re::seq(self.regex, other.regex),
            marker: PhantomData,
        }
    }

    pub fn or_else<U: Parsed>(self, other: Tyre<U>) -> Tyre<Either<T, U>> {
        Tyre {
            regex: re::alt(self.regex, other.regex),
            marker: PhantomData,
        }
    }

    /// `self *> other`.
    pub fn skip_then<U: Parsed>(self, other: Tyre<U>) -> Tyre<U> {
        Tyre {
            regex: re::discard_left(self.regex, other.regex),
            marker: PhantomData,
        }
    }

    /// `self <* other`.
    pub fn then_skip<U: Parsed>(self, other: Tyre<U>) -> Tyre<T> {
        Tyre {
            regex: re::discard_right(self.regex, other.regex),
            marker: PhantomData,
        }
    }

    pub fn rep0(self) -> Tyre<Vec<T>> {
        Tyre {
            regex: re::rep0(self.regex),
            marker: PhantomData,
        }
    }

    pub fn rep1(self) -> Tyre<Vec<T>> {
        Tyre {
            regex: re::rep1(self.regex),
            marker: PhantomData,
        }
    }

    pub fn optional(self) -> Tyre<Option<T>> {
        Tyre {
            regex: re::optional(self.regex),
            marker: PhantomData,
        }
    }

    pub fn ignore(self) -> Tyre<String> {
        Tyre {
            regex: re::ignore(self.regex),
            marker: PhantomData,
        }
    }

    pub fn compile(&self) -> Parser<T> {
        Parser {
            program: Program::new(&self.regex),
            marker: PhantomData,
        }
    }
}

impl<T: Parsed> Tyre<T> {
    /// Alternation of two regexes of the same type, forgetting which matched.
    pub fn or(self, other: Tyre<T>) -> Tyre<T> {
        let regex = re::or(self.regex, other.regex).expect("equal types have equal shapes");
        Tyre {
            regex,
            marker: PhantomData,
        }
    }
}

pub fn text(s: &str) -> Tyre<()> {
    Tyre {
        regex: re::text(s),
        marker: PhantomData,
    }
}

pub fn match_char(c: char) -> Tyre<()> {
    Tyre {
        regex: re::match_char(c),
        marker: PhantomData,
    }
}

pub fn any_char() -> Tyre<char> {
    Tyre {
        regex: re::any_char(),
        marker: PhantomData,
    }
}

pub fn range(lo: char, hi: char) -> Tyre<char> {
    Tyre {
        regex: re::range(lo, hi),
        marker: PhantomData,
    }
}

pub fn one_of(chars: &str) -> Tyre<char> {
    Tyre {
        regex: re::one_of(chars),
        marker: PhantomData,
    }
}

pub fn predicate(f: impl Fn(char) -> bool + Send + Sync + 'static) -> Tyre<char> {
    Tyre {
        regex: re::predicate(f),
        marker: PhantomData,
    }
}

pub fn digit() -> Tyre<i128> {
    Tyre {
        regex: re::digit(),
        marker: PhantomData,
    }
}

pub fn empty() -> Tyre<()> {
    Tyre {
        regex: TypedRegex::empty(),
        marker: PhantomData,
    }
}

/// A compiled [`Tyre`].
#[derive(Clone, Debug)]
pub struct Parser<T> {
    program: Program,
    marker: PhantomData<fn() -> T>,
}

impl<T: Parsed> Parser<T> {
    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn is_match(&self, input: &str) -> bool {
        runtime::is_match(self.program.machine(), input)
    }

    pub fn parse(&self, input: &str) -> Option<T> {
        runtime::run_full(self.program.machine(), input).map(|v| T::from_value(&v))
    }

    pub fn parse_prefix<'a>(&self, input: &'a str, greedy: bool) -> (Option<T>, &'a str) {
        let (r, rest) = runtime::parse_prefix(self.program.machine(), input, greedy);
        (r.value.map(|v| T::from_value(&v)), rest)
    }

    /// Matched substrings with their parse trees, and the text after the
    /// last match.
    pub fn disjoint_matches(
        &self,
        input: &str,
        greedy: bool,
    ) -> Result<(Vec<(String, T)>, String)> {
        let (pairs, tail) = runtime::disjoint_matches(&self.program, input, greedy)?.into_pairs();
        Ok((
            pairs
                .into_iter()
                .map(|(s, v)| (s, T::from_value(&v)))
                .collect(),
            tail,
        ))
    }

    pub fn substitute(&self, input: &str, mut replacer: impl FnMut(T) -> String) -> Result<String> {
        runtime::substitute(&self.program, input, |v| replacer(T::from_value(v)))
    }

    pub fn get_token<I: Iterator<Item = char>>(
        &self,
        stream: &mut CharStream<I>,
        greedy: bool,
    ) -> Option<T> {
        runtime::get_token(self.program.machine(), stream, greedy).map(|v| T::from_value(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_digits() -> Tyre<i128> {
        digit().then(digit()).map(|(a, b)| 10 * a + b)
    }

    #[test]
    fn time_format_substitution() {
        let time = two_digits().then_skip(match_char(':')).then(two_digits());
        let out = time
            .compile()
            .substitute("Look, it is 11:15.", |(h, m)| format!("{m} past {h}"))
            .unwrap();
        assert_eq!(out, "Look, it is 15 past 11.");
    }

    #[test]
    fn literal_checks_type() {
        assert!(Tyre::<char>::literal("A[0-9]!").is_ok());
        assert!(matches!(
            Tyre::<String>::literal("A[0-9]!"),
            Err(Error::ShapeMismatch { .. })
        ));
        let p = Tyre::<char>::literal("A[0-9]!").unwrap().compile();
        assert_eq!(p.parse("A3"), Some('3'));
    }

    #[test]
    fn combinators() {
        let p = one_of("ab").or_else(digit()).rep0().compile();
        assert_eq!(
            p.parse("a1b"),
            Some(vec![Either::Left('a'), Either::Right(1), Either::Left('b')])
        );
        let p = range('a', 'z').rep1().ignore().optional().compile();
        assert_eq!(p.parse("abc"), Some(Some("abc".to_string())));
        assert_eq!(p.parse(""), Some(None));
        let p = digit().or(digit().map(|d| d + 100)).compile();
        assert_eq!(p.parse("7"), Some(7));
    }

    #[test]
    fn tokenizing_digits() {
        let semi_digit = match_char(';').skip_then(digit()).compile();
        let mut stream = CharStream::new(";1;2;3".chars().cycle());
        let first: Vec<i128> = (0..6)
            .map(|_| semi_digit.get_token(&mut stream, true).unwrap())
            .collect();
        assert_eq!(first, [1, 2, 3, 1, 2, 3]);
    }

    #[test]
    fn non_consuming_regexes_are_rejected() {
        let p = any_char().rep0().compile();
        assert_eq!(
            p.disjoint_matches("abc", true).unwrap_err(),
            Error::NotConsuming
        );
    }
}
