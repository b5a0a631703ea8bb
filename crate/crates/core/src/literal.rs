//! Regex string literals.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! alt     := concat ('|' alt)?
//! concat  := postfix*                      (empty concat is the empty word)
//! postfix := atom ('?' | '*' | '+' | '!')*
//! atom    := '(' alt ')' | '[' item+ ']' | '.' | '\' special | char
//! item    := cchar ('-' cchar)?
//! ```
//!
//! Both alternation and concatenation associate to the right. The special
//! characters are `( ) [ ] | ? * + . ! \`; inside brackets `-` may also be
//! escaped. The `!` mark keeps the structure of its operand in the parse
//! tree; everything outside a kept sub-regex flattens to unit.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::regex::{self, conv, CharCond, TypedRegex};
use crate::shape::{self, Shape};

const SPECIAL: &[char] = &['(', ')', '[', ']', '|', '?', '*', '+', '.', '!', '\\'];

/// The literal-level regex AST.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UntypedRegex {
    Exactly(char),
    OneOf(BTreeSet<char>),
    To(char, char),
    Any,
    Concat(Box<UntypedRegex>, Box<UntypedRegex>),
    Alt(Box<UntypedRegex>, Box<UntypedRegex>),
    Optional(Box<UntypedRegex>),
    Rep0(Box<UntypedRegex>),
    Rep1(Box<UntypedRegex>),
    Keep(Box<UntypedRegex>),
    Epsilon,
}

impl UntypedRegex {
    pub fn concat(a: UntypedRegex, b: UntypedRegex) -> Self {
        UntypedRegex::Concat(Box::new(a), Box::new(b))
    }

    pub fn alt(a: UntypedRegex, b: UntypedRegex) -> Self {
        UntypedRegex::Alt(Box::new(a), Box::new(b))
    }

    pub fn optional(a: UntypedRegex) -> Self {
        UntypedRegex::Optional(Box::new(a))
    }

    pub fn rep0(a: UntypedRegex) -> Self {
        UntypedRegex::Rep0(Box::new(a))
    }

    pub fn rep1(a: UntypedRegex) -> Self {
        UntypedRegex::Rep1(Box::new(a))
    }

    /// Marks `a` as kept. Keeping is idempotent.
    pub fn keep(a: UntypedRegex) -> Self {
        match a {
            kept @ UntypedRegex::Keep(_) => kept,
            other => UntypedRegex::Keep(Box::new(other)),
        }
    }

    pub fn contains_keep(&self) -> bool {
        use UntypedRegex::*;
        match self {
            Keep(_) => true,
            Concat(a, b) | Alt(a, b) => a.contains_keep() || b.contains_keep(),
            Optional(a) | Rep0(a) | Rep1(a) => a.contains_keep(),
            Exactly(_) | OneOf(_) | To(..) | Any | Epsilon => false,
        }
    }

    /// Fully parenthesised rendering that parses back to `self`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn write_escaped(f: &mut fmt::Formatter<'_>, c: char, in_class: bool) -> fmt::Result {
    if SPECIAL.contains(&c) || (in_class && c == '-') {
        write!(f, "\\{c}")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for UntypedRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use UntypedRegex::*;
        match self {
            Exactly(c) => write_escaped(f, *c, false),
            OneOf(set) => {
                f.write_str("[")?;
                for c in set {
                    write_escaped(f, *c, true)?;
                }
                f.write_str("]")
            }
            To(lo, hi) => {
                f.write_str("[")?;
                write_escaped(f, *lo, true)?;
                f.write_str("-")?;
                write_escaped(f, *hi, true)?;
                f.write_str("]")
            }
            Any => f.write_str("."),
            Epsilon => f.write_str("()"),
            Concat(a, b) => write!(f, "({a})({b})"),
            Alt(a, b) => write!(f, "(({a})|({b}))"),
            Optional(a) => write!(f, "({a})?"),
            Rep0(a) => write!(f, "({a})*"),
            Rep1(a) => write!(f, "({a})+"),
            Keep(a) => write!(f, "({a})!"),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::MalformedLiteral {
            position,
            message: message.into(),
        })
    }

    fn alt(&mut self) -> Result<UntypedRegex> {
        let first = self.concat()?;
        if self.peek() == Some('|') {
            self.pos += 1;
            let rest = self.alt()?;
            return Ok(UntypedRegex::alt(first, rest));
        }
        Ok(first)
    }

    fn concat(&mut self) -> Result<UntypedRegex> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.postfix()?);
        }
        let mut items = items.into_iter().rev();
        let Some(last) = items.next() else {
            return Ok(UntypedRegex::Epsilon);
        };
        Ok(items.fold(last, |acc, item| UntypedRegex::concat(item, acc)))
    }

    fn postfix(&mut self) -> Result<UntypedRegex> {
        let mut re = self.atom()?;
        while let Some(c) = self.peek() {
            re = match c {
                '?' => UntypedRegex::optional(re),
                '*' => UntypedRegex::rep0(re),
                '+' => UntypedRegex::rep1(re),
                '!' => UntypedRegex::keep(re),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(re)
    }

    fn atom(&mut self) -> Result<UntypedRegex> {
        let start = self.pos;
        let Some(c) = self.bump() else {
            return self.error(start, "unexpected end of literal");
        };
        match c {
            '(' => {
                let inner = self.alt()?;
                if self.bump() != Some(')') {
                    return self.error(start, "unclosed '('");
                }
                Ok(inner)
            }
            '[' => self.class(start),
            ']' => self.error(start, "unmatched ']'"),
            '.' => Ok(UntypedRegex::Any),
            '?' | '*' | '+' | '!' => self.error(start, format!("dangling postfix operator '{c}'")),
            '\\' => self.escaped(false).map(UntypedRegex::Exactly),
            other => Ok(UntypedRegex::Exactly(other)),
        }
    }

    /// Reads the character after a backslash.
    fn escaped(&mut self, in_class: bool) -> Result<char> {
        let at = self.pos - 1;
        match self.bump() {
            None => self.error(at, "trailing backslash"),
            Some(c) if SPECIAL.contains(&c) || (in_class && c == '-') => Ok(c),
            Some(c) => self.error(at, format!("invalid escape '\\{c}'")),
        }
    }

    fn class_char(&mut self, open: usize) -> Result<Option<char>> {
        match self.bump() {
            None => self.error(open, "unclosed '['"),
            Some(']') => Ok(None),
            Some('\\') => self.escaped(true).map(Some),
            Some(c) => Ok(Some(c)),
        }
    }

    fn class(&mut self, open: usize) -> Result<UntypedRegex> {
        let mut singles = BTreeSet::new();
        let mut ranges = Vec::new();
        loop {
            let item_start = self.pos;
            let Some(lo) = self.class_char(open)? else {
                break;
            };
            let is_range = self.peek() == Some('-') && self.chars.get(self.pos + 1) != Some(&']');
            if !is_range {
                singles.insert(lo);
                continue;
            }
            self.pos += 1;
            let Some(hi) = self.class_char(open)? else {
                return self.error(open, "unclosed '['");
            };
            if lo > hi {
                return self.error(item_start, format!("bad range '{lo}-{hi}'"));
            }
            ranges.push((lo, hi));
        }
        match (singles.is_empty(), ranges.as_slice()) {
            (true, []) => self.error(open, "empty bracket class"),
            (true, [(lo, hi)]) => Ok(UntypedRegex::To(*lo, *hi)),
            _ => {
                for (lo, hi) in ranges {
                    singles.extend(lo..=hi);
                }
                Ok(UntypedRegex::OneOf(singles))
            }
        }
    }
}

pub fn parse_literal(text: &str) -> Result<UntypedRegex> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let re = parser.alt()?;
    if let Some(c) = parser.peek() {
        // `alt` only stops early on an unmatched close paren.
        debug_assert_eq!(c, ')');
        return parser.error(parser.pos, "unmatched ')'");
    }
    Ok(re)
}

/// The simplified parse-tree shape of a literal regex.
pub fn shape(re: &UntypedRegex) -> Shape {
    use UntypedRegex::*;
    if !re.contains_keep() {
        return Shape::Unit;
    }
    match re {
        Keep(a) => keep_shape(a),
        Concat(a, b) => shape::simplify_pair(shape(a), shape(b)),
        Alt(a, b) => shape::simplify_sum(shape(a), shape(b)),
        Optional(a) => shape::simplify_option(shape(a)),
        Rep0(a) | Rep1(a) => shape::simplify_list(shape(a)),
        Exactly(_) | OneOf(_) | To(..) | Any | Epsilon => unreachable!("leaves hold no keep"),
    }
}

/// The simplified shape of a kept regex.
pub fn keep_shape(re: &UntypedRegex) -> Shape {
    shape::simplify(&raw_keep_shape(re))
}

/// Keep shape before simplification.
pub fn raw_keep_shape(re: &UntypedRegex) -> Shape {
    use UntypedRegex::*;
    match re {
        Exactly(_) | Epsilon => Shape::Unit,
        OneOf(_) | To(..) | Any => Shape::Char,
        Concat(a, b) => Shape::pair(raw_keep_shape(a), raw_keep_shape(b)),
        Alt(a, b) => Shape::sum(raw_keep_shape(a), raw_keep_shape(b)),
        Optional(a) => Shape::option(raw_keep_shape(a)),
        Rep0(a) | Rep1(a) => Shape::list(raw_keep_shape(a)),
        Keep(a) => raw_keep_shape(a),
    }
}

/// A compiled literal: its shape and a typed regex yielding that shape.
#[derive(Clone, Debug)]
pub struct CompiledLiteral {
    pub shape: Shape,
    pub regex: TypedRegex,
}

pub fn compile_literal(text: &str) -> Result<CompiledLiteral> {
    let re = parse_literal(text)?;
    let regex = lower(&re);
    Ok(CompiledLiteral {
        shape: regex.shape().clone(),
        regex,
    })
}

/// Translates an untyped regex into a typed regex yielding `shape(re)`.
///
/// Each simplification step is realised by a conversion node, and unkept
/// sub-regexes are converted to unit.
pub fn lower(re: &UntypedRegex) -> TypedRegex {
    use UntypedRegex::*;
    if !re.contains_keep() {
        return to_unit(lower_raw(re));
    }
    match re {
        Keep(a) => lower_kept(a),
        Concat(a, b) => pair_node(lower(a), lower(b)),
        Alt(a, b) => sum_node(lower(a), lower(b)),
        Optional(a) => option_node(lower(a)),
        Rep0(a) => list_node(regex::rep0(lower(a))),
        Rep1(a) => list_node(regex::rep1(lower(a))),
        Exactly(_) | OneOf(_) | To(..) | Any | Epsilon => unreachable!("leaves hold no keep"),
    }
}

fn lower_kept(re: &UntypedRegex) -> TypedRegex {
    use UntypedRegex::*;
    match re {
        Exactly(c) => regex::match_char(*c),
        OneOf(set) => TypedRegex::match_cond(CharCond::OneOf(set.clone())),
        To(lo, hi) => TypedRegex::match_cond(CharCond::range(*lo, *hi)),
        Any => regex::any_char(),
        Epsilon => TypedRegex::empty(),
        Concat(a, b) => pair_node(lower_kept(a), lower_kept(b)),
        Alt(a, b) => sum_node(lower_kept(a), lower_kept(b)),
        Optional(a) => option_node(lower_kept(a)),
        Rep0(a) => list_node(regex::rep0(lower_kept(a))),
        Rep1(a) => list_node(regex::rep1(lower_kept(a))),
        Keep(a) => lower_kept(a),
    }
}

/// Unsimplified structural translation, used under a unit conversion.
fn lower_raw(re: &UntypedRegex) -> TypedRegex {
    use UntypedRegex::*;
    match re {
        Exactly(c) => regex::match_char(*c),
        OneOf(set) => TypedRegex::match_cond(CharCond::OneOf(set.clone())),
        To(lo, hi) => TypedRegex::match_cond(CharCond::range(*lo, *hi)),
        Any => regex::any_char(),
        Epsilon => TypedRegex::empty(),
        Concat(a, b) => TypedRegex::seq(lower_raw(a), lower_raw(b)),
        Alt(a, b) => TypedRegex::alt(lower_raw(a), lower_raw(b)),
        Optional(a) => regex::optional(lower_raw(a)),
        Rep0(a) => regex::rep0(lower_raw(a)),
        Rep1(a) => regex::rep1(lower_raw(a)),
        Keep(a) => lower_raw(a),
    }
}

fn to_unit(re: TypedRegex) -> TypedRegex {
    if re.shape().is_unit() {
        return re;
    }
    let from = re.shape().clone();
    TypedRegex::conv(re, conv::to_unit(from))
}

fn pair_node(a: TypedRegex, b: TypedRegex) -> TypedRegex {
    let (sa, sb) = (a.shape().clone(), b.shape().clone());
    let seq = TypedRegex::seq(a, b);
    match (sa.is_unit(), sb.is_unit()) {
        (true, true) => to_unit(seq),
        (false, true) => TypedRegex::conv(seq, conv::fst(sa, sb)),
        (true, false) => TypedRegex::conv(seq, conv::snd(sa, sb)),
        (false, false) => seq,
    }
}

fn sum_node(a: TypedRegex, b: TypedRegex) -> TypedRegex {
    let (sa, sb) = (a.shape().clone(), b.shape().clone());
    let sum = TypedRegex::alt(a, b);
    match (sa.is_unit(), sb.is_unit()) {
        (true, true) => TypedRegex::conv(sum, conv::sum_to_bool()),
        (false, true) => option_fix(TypedRegex::conv(sum, conv::left_to_option(sa))),
        (true, false) => option_fix(TypedRegex::conv(sum, conv::right_to_option(sb))),
        (false, false) => sum,
    }
}

fn option_node(a: TypedRegex) -> TypedRegex {
    option_fix(regex::optional(a))
}

/// `Maybe (List a)` collapses to `List a`.
fn option_fix(re: TypedRegex) -> TypedRegex {
    match re.shape() {
        Shape::Option(inner) => match &**inner {
            Shape::List(elem) => {
                let f = conv::option_list_to_list((**elem).clone());
                TypedRegex::conv(re, f)
            }
            _ => re,
        },
        _ => re,
    }
}

/// `List Unit` collapses to `Nat`.
fn list_node(re: TypedRegex) -> TypedRegex {
    if re.shape() == &Shape::list(Shape::Unit) {
        return TypedRegex::conv(re, conv::length(Shape::Unit));
    }
    re
}

#[cfg(test)]
mod tests {
    use super::*;
    use UntypedRegex::*;

    fn p(s: &str) -> UntypedRegex {
        parse_literal(s).unwrap()
    }

    fn err_at(s: &str) -> usize {
        match parse_literal(s) {
            Err(Error::MalformedLiteral { position, .. }) => position,
            other => panic!("expected malformed literal for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn table_rows() {
        assert_eq!(p("a"), Exactly('a'));
        assert_eq!(p("[ab]"), OneOf(BTreeSet::from(['a', 'b'])));
        assert_eq!(p("[a-c]"), To('a', 'c'));
        assert_eq!(p("."), Any);
        assert_eq!(p("ab"), UntypedRegex::concat(Exactly('a'), Exactly('b')));
        assert_eq!(p("a|b"), UntypedRegex::alt(Exactly('a'), Exactly('b')));
        assert_eq!(p("a?"), UntypedRegex::optional(Exactly('a')));
        assert_eq!(p("a*"), UntypedRegex::rep0(Exactly('a')));
        assert_eq!(p("a+"), UntypedRegex::rep1(Exactly('a')));
        assert_eq!(p("a!"), UntypedRegex::keep(Exactly('a')));
        assert_eq!(p(""), Epsilon);
    }

    #[test]
    fn precedence_and_associativity() {
        // postfix > concatenation > alternation; both binary forms nest right
        let expected = UntypedRegex::alt(
            UntypedRegex::concat(Exactly('a'), UntypedRegex::rep0(Exactly('b'))),
            UntypedRegex::alt(Exactly('c'), Exactly('d')),
        );
        assert_eq!(p("ab*|c|d"), expected);
        assert_eq!(
            p("abc"),
            UntypedRegex::concat(
                Exactly('a'),
                UntypedRegex::concat(Exactly('b'), Exactly('c'))
            )
        );
    }

    #[test]
    fn keep_collapses() {
        assert_eq!(p("a!!"), UntypedRegex::keep(Exactly('a')));
        assert_eq!(p("(a!)!"), UntypedRegex::keep(Exactly('a')));
    }

    #[test]
    fn bracket_forms() {
        assert_eq!(p("[a-cx]"), OneOf(BTreeSet::from(['a', 'b', 'c', 'x'])));
        assert_eq!(p("[a-bd-e]"), OneOf(BTreeSet::from(['a', 'b', 'd', 'e'])));
        assert_eq!(p("[-a]"), OneOf(BTreeSet::from(['-', 'a'])));
        assert_eq!(p("[a-]"), OneOf(BTreeSet::from(['-', 'a'])));
        assert_eq!(p("[\\]\\-]"), OneOf(BTreeSet::from([']', '-'])));
        assert_eq!(p("[(.)]"), OneOf(BTreeSet::from(['(', '.', ')'])));
    }

    #[test]
    fn escapes() {
        assert_eq!(p("\\*"), Exactly('*'));
        assert_eq!(p("\\\\"), Exactly('\\'));
        assert_eq!(
            p("a\\|b"),
            UntypedRegex::concat(
                Exactly('a'),
                UntypedRegex::concat(Exactly('|'), Exactly('b'))
            )
        );
    }

    #[test]
    fn malformed() {
        assert_eq!(err_at("(ab"), 0);
        assert_eq!(err_at("ab)"), 2);
        assert_eq!(err_at("*a"), 0);
        assert_eq!(err_at("a|+"), 2);
        assert_eq!(err_at("[]"), 0);
        assert_eq!(err_at("x[ab"), 1);
        assert_eq!(err_at("[z-a]"), 1);
        assert_eq!(err_at("ab\\"), 2);
        assert_eq!(err_at("\\n"), 0);
        assert_eq!(err_at("a]"), 1);
        assert_eq!(err_at("("), 0);
    }

    #[test]
    fn shape_goldens() {
        let time1 = p("(([01][0-9])|([2][0-3])):[0-5][0-9]");
        assert_eq!(shape(&time1), Shape::Unit);
        let kept_alt = p("((([a-z])+)!)|(hj)");
        assert_eq!(shape(&kept_alt), Shape::list(Shape::Char));
        let nested = p("((ab*[vkw]([a-z])+)|(hj))!");
        let expected = Shape::option(Shape::pair(
            Shape::Nat,
            Shape::pair(Shape::Char, Shape::list(Shape::Char)),
        ));
        assert_eq!(shape(&nested), expected);
        assert_eq!(shape(&p("A[0-9]!")), Shape::Char);
    }

    #[test]
    fn keep_shape_rows() {
        assert_eq!(keep_shape(&Exactly('x')), Shape::Unit);
        let rep = UntypedRegex::rep0(OneOf(BTreeSet::from(['a', 'b'])));
        assert_eq!(keep_shape(&rep), Shape::list(Shape::Char));
        assert_eq!(keep_shape(&p("a?")), Shape::option(Shape::Unit));
        assert_eq!(keep_shape(&p("a|b")), Shape::Bool);
        assert_eq!(keep_shape(&p("a*")), Shape::Nat);
    }

    #[test]
    fn lowering_agrees_with_shape() {
        for lit in [
            "(([01][0-9])|([2][0-3])):[0-5][0-9]",
            "((([a-z])+)!)|(hj)",
            "((ab*[vkw]([a-z])+)|(hj))!",
            "A[0-9]!",
            "(a!)(b!)",
            "(a?)!",
            "((a|b)*)!c",
            "x(([0-9]+)!)?y",
            "",
        ] {
            let re = p(lit);
            assert_eq!(lower(&re).shape(), &shape(&re), "{lit}");
        }
    }

    #[test]
    fn render_reparses() {
        for lit in ["a(b|c)*!", "[a-z]+\\.?", "((x!)|())", "[\\-+.]"] {
            let re = p(lit);
            assert_eq!(p(&re.render()), re, "{lit} -> {}", re.render());
        }
    }
}
