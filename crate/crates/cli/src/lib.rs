//! The `tyre` command-line tool.

pub mod bench;
pub mod json;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use tyre::group::{build_nfa, merge_states};
use tyre::runtime::{self, CharStream, Program, Segment};
use tyre::{compile_literal, Value};

use crate::bench::{Family, CSV_HEADER};
use crate::json::value_to_json;

#[derive(Parser, Debug)]
#[command(name = "tyre", version, about = "Typed regular expressions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Read input from FILE instead of stdin.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GreedyArgs {
    /// Prefer the longest match (default).
    #[arg(long, overrides_with = "no_greedy")]
    pub greedy: bool,
    /// Prefer the shortest match.
    #[arg(long = "no-greedy")]
    pub no_greedy: bool,
}

impl GreedyArgs {
    pub fn greedy(self) -> bool {
        !self.no_greedy
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exit 0 if the whole input matches, 1 otherwise.
    Match {
        regex: String,
        #[command(flatten)]
        input: InputArgs,
        /// Match each line separately and print the matching ones.
        #[arg(long)]
        line: bool,
    },
    /// Print the parse tree of the whole input.
    Parse {
        regex: String,
        #[command(flatten)]
        input: InputArgs,
        /// Print the parse tree as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Replace every match, line by line. `$0` expands to the matched text and
    /// `$json` to the parse tree as JSON.
    Substitute {
        regex: String,
        #[arg(long)]
        template: String,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        greedy: GreedyArgs,
    },
    /// Print one JSON token per line until the regex stops matching.
    Tokenize {
        regex: String,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        greedy: GreedyArgs,
    },
    /// Dump the compiled machine, the NFA before and after merging, or an
    /// execution trace.
    Dump {
        regex: String,
        /// Machine as JSON (the default when no other output is requested).
        #[arg(long)]
        dump: bool,
        /// Routine-free NFA before and after state merging, as JSON.
        #[arg(long = "dump-nfa")]
        dump_nfa: bool,
        /// Trace the machine on INPUT.
        #[arg(long, value_name = "INPUT")]
        trace: Option<String>,
    },
    /// Time a benchmark family and write CSV.
    Bench {
        #[arg(long)]
        family: Family,
        #[arg(long, num_args = 1.., required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Regex(#[from] tyre::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    NoMatch,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::NoMatch => 1,
        }
    }
}

pub const ERROR_CODE: i32 = 2;

fn read_input(args: &InputArgs, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    match &args.input {
        Some(path) => text = fs::read_to_string(path)?,
        None => {
            stdin.read_to_string(&mut text)?;
        }
    }
    if text.ends_with('\n') {
        text.pop();
    }
    Ok(text)
}

/// Splits on LF, ignoring a final empty segment.
fn lines(text: &str) -> Vec<&str> {
    let mut v: Vec<&str> = text.split('\n').collect();
    if v.last() == Some(&"") {
        v.pop();
    }
    v
}

fn program(regex: &str) -> Result<Program, CliError> {
    Ok(Program::new(&compile_literal(regex)?.regex))
}

fn expand(template: &str, matched: &str, v: &Value) -> String {
    template
        .replace("$json", &value_to_json(v).to_string())
        .replace("$0", matched)
}

pub fn run(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<Status, CliError> {
    match cli.command {
        Command::Match { regex, input, line } => {
            let p = program(&regex)?;
            let text = read_input(&input, stdin)?;
            if line {
                let mut any = false;
                for l in lines(&text) {
                    if runtime::is_match(p.machine(), l) {
                        writeln!(out, "{l}")?;
                        any = true;
                    }
                }
                return Ok(if any {
                    Status::Success
                } else {
                    Status::NoMatch
                });
            }
            Ok(if runtime::is_match(p.machine(), &text) {
                Status::Success
            } else {
                Status::NoMatch
            })
        }
        Command::Parse { regex, input, json } => {
            let p = program(&regex)?;
            let text = read_input(&input, stdin)?;
            match runtime::run_full(p.machine(), &text) {
                Some(v) if json => writeln!(out, "{}", value_to_json(&v))?,
                Some(v) => writeln!(out, "{v}")?,
                None => {
                    writeln!(out, "no match")?;
                    return Ok(Status::NoMatch);
                }
            }
            Ok(Status::Success)
        }
        Command::Substitute {
            regex,
            template,
            input,
            greedy,
        } => {
            let p = program(&regex)?;
            let text = read_input(&input, stdin)?;
            for l in lines(&text) {
                let matches = runtime::disjoint_matches(&p, l, greedy.greedy())?;
                let mut rewritten = String::with_capacity(l.len());
                for seg in &matches.segments {
                    match seg {
                        Segment::Gap(g) => rewritten.push_str(g),
                        Segment::Match(s, v) => rewritten.push_str(&expand(&template, s, v)),
                    }
                }
                writeln!(out, "{rewritten}")?;
            }
            Ok(Status::Success)
        }
        Command::Tokenize {
            regex,
            input,
            greedy,
        } => {
            let p = program(&regex)?;
            let text = read_input(&input, stdin)?;
            let mut stream = CharStream::new(text.chars());
            while let Some(c) = stream.next() {
                stream.unread(&[c]);
                let Some((v, consumed)) =
                    runtime::next_token(p.machine(), &mut stream, greedy.greedy())
                else {
                    break;
                };
                writeln!(out, "{}", value_to_json(&v))?;
                // An empty token would repeat forever.
                if consumed == 0 {
                    break;
                }
            }
            Ok(Status::Success)
        }
        Command::Dump {
            regex,
            dump,
            dump_nfa,
            trace,
        } => {
            let lit = compile_literal(&regex)?;
            let m = tyre::compile(&lit.regex);
            if dump || (!dump_nfa && trace.is_none()) {
                writeln!(out, "{}", json::machine_json(&m))?;
            }
            if dump_nfa {
                let before = build_nfa(&lit.regex);
                let after = merge_states(before.clone());
                let doc = serde_json::json!({
                    "before": json::nfa_json(&before),
                    "after": json::nfa_json(&after),
                });
                writeln!(out, "{doc}")?;
            }
            if let Some(input) = trace {
                write!(out, "{}", runtime::trace(&m, &input))?;
            }
            Ok(Status::Success)
        }
        Command::Bench {
            family,
            sizes,
            samples,
            out: path,
        } => {
            if samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let rows = bench::run(family, &sizes, samples);
            let mut csv = String::from(CSV_HEADER);
            csv.push('\n');
            for r in rows {
                csv.push_str(&r.to_string());
                csv.push('\n');
            }
            match path {
                Some(p) => fs::write(p, csv)?,
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(Status::Success)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], stdin: &str) -> (Result<Status, CliError>, String) {
        let cli = Cli::try_parse_from(std::iter::once("tyre").chain(args.iter().copied())).unwrap();
        let mut out = Vec::new();
        let r = run(cli, &mut stdin.as_bytes(), &mut out);
        (r, String::from_utf8(out).unwrap())
    }

    const TIME1: &str = "(([01][0-9])|([2][0-3])):[0-5][0-9]";

    #[test]
    fn match_exit_status() {
        assert_eq!(
            run_args(&["match", TIME1], "11:15\n").0.unwrap(),
            Status::Success
        );
        assert_eq!(
            run_args(&["match", TIME1], "99:99").0.unwrap(),
            Status::NoMatch
        );
        assert!(matches!(
            run_args(&["match", "("], "").0,
            Err(CliError::Regex(_))
        ));
    }

    #[test]
    fn match_lines() {
        let (r, out) = run_args(&["match", "--line", TIME1], "11:15\nnope\n23:59\n");
        assert_eq!(r.unwrap(), Status::Success);
        assert_eq!(out, "11:15\n23:59\n");
    }

    #[test]
    fn parse_outputs() {
        assert_eq!(run_args(&["parse", "--json", "A[0-9]!"], "A3").1, "\"3\"\n");
        assert_eq!(run_args(&["parse", "A[0-9]!"], "A3").1, "'3'\n");
        assert_eq!(
            run_args(&["parse", "--json", "([a]!)([b]!)"], "ab").1,
            "[\"a\",\"b\"]\n"
        );
        // A kept literal character carries no information.
        assert_eq!(run_args(&["parse", "--json", "(a!)(b!)"], "ab").1, "null\n");
        assert_eq!(
            run_args(&["parse", "--json", "((([a-z])+)!)|(HJ)"], "HJ").1,
            "[]\n"
        );
        let (r, out) = run_args(&["parse", "A[0-9]!"], "B3");
        assert_eq!(r.unwrap(), Status::NoMatch);
        assert_eq!(out, "no match\n");
    }

    #[test]
    fn substitution() {
        assert_eq!(
            run_args(&["substitute", "[0-9]+!", "--template", "N"], "a12b3").1,
            "aNbN\n"
        );
        assert_eq!(
            run_args(&["substitute", "[0-9]+!", "--template", "$0"], "a12b3\nx").1,
            "a12b3\nx\n"
        );
        assert_eq!(
            run_args(&["substitute", "[0-9]+!", "--template", "<$json>"], "a12").1,
            "a<[\"1\",\"2\"]>\n"
        );
        assert!(matches!(
            run_args(&["substitute", "a*", "--template", "x"], "aaa").0,
            Err(CliError::Regex(tyre::Error::NotConsuming))
        ));
    }

    #[test]
    fn tokenizing() {
        assert_eq!(
            run_args(&["tokenize", ";([0-9]!)"], ";1;2;3").1,
            "\"1\"\n\"2\"\n\"3\"\n"
        );
        assert_eq!(run_args(&["tokenize", ";([0-9]!)"], "").1, "");
        assert_eq!(run_args(&["tokenize", "x"], "abc").1, "");
        assert_eq!(run_args(&["tokenize", "(a*)!"], "aab").1, "2\n0\n");
        assert_eq!(run_args(&["tokenize", "(a*)!"], "aa").1, "2\n");
    }

    #[test]
    fn dumps() {
        let (_, out) = run_args(&["dump", "A[0-9]"], "");
        let j: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(j["state_count"], 2);
        let (_, out) = run_args(&["dump", "--dump-nfa", "(a|a)|a"], "");
        let j: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(j["before"]["state_count"], 3);
        assert_eq!(j["after"]["state_count"], 1);
        let (_, out) = run_args(&["dump", "A[0-9]!", "--trace", "A3"], "");
        assert!(out.contains("PushChar | [< 'A']"), "{out}");
        assert!(out.contains("Transform snd | [< '3']"), "{out}");
    }

    #[test]
    fn bench_rows() {
        let (r, out) = run_args(
            &[
                "bench",
                "--family",
                "star",
                "--sizes",
                "10",
                "20",
                "--samples",
                "2",
            ],
            "",
        );
        r.unwrap();
        let rows: Vec<&str> = out.lines().collect();
        assert_eq!(rows[0], CSV_HEADER);
        assert_eq!(rows.len(), 5);
        assert!(rows[1].starts_with("star,10,0,"));
        assert!(
            Cli::try_parse_from(["tyre", "bench", "--family", "nope", "--sizes", "1"]).is_err()
        );
    }
}
