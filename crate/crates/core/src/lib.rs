//! Typed regular expressions.
//!
//! Regexes carry the shape of the parse trees they produce. Literals such as
//! `"(([0-9])!)+"` are parsed and assigned a shape, lowered to a
//! [`TypedRegex`], compiled to a Moore machine (an NFA whose transitions run
//! small stack programs) and executed in lock step, so parsing never
//! backtracks.
//!
//! ```
//! use tyre::typed::{digit, match_char};
//!
//! let two = || digit().then(digit()).map(|(a, b)| 10 * a + b);
//! let time = two().then_skip(match_char(':')).then(two()).compile();
//! let out = time.substitute("at 11:15", |(h, m)| format!("{m} past {h}")).unwrap();
//! assert_eq!(out, "at 15 past 11");
//! ```

pub mod compile;
pub mod error;
pub mod group;
pub mod literal;
pub mod machine;
pub mod plist;
pub mod regex;
pub mod runtime;
pub mod shape;
pub mod typed;
pub mod value;

pub use compile::compile;
pub use error::{Error, ExecError, Result};
pub use literal::{compile_literal, parse_literal, CompiledLiteral, UntypedRegex};
pub use machine::{validate_machine, MooreMachine};
pub use regex::{CharCond, TypedRegex};
pub use runtime::Program;
pub use shape::Shape;
pub use typed::Tyre;
pub use value::Value;
