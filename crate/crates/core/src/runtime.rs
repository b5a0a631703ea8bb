//! Lock-step execution of Moore machines.
//!
//! All threads advance together over the input. Threads that meet in the
//! same state are merged, keeping the earliest in priority order, so the
//! number of live threads never exceeds the number of states plus one and
//! parsing is linear in the input length for a fixed machine.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, ExecError, Result};
use crate::machine::{
    conforms_stack, exec_instruction, Edge, Instruction, MooreMachine, Target, ThreadData,
};
use crate::regex::{CharCond, TypedRegex};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq)]
pub struct Thread {
    pub state: Target,
    pub data: ThreadData,
}

/// Observes executed instructions; used for traces.
trait Observer {
    fn instruction(&mut self, _instr: &Instruction, _td: &ThreadData) {}
    fn transition(&mut self, _from: usize, _edge: &Edge) {}
}

struct Silent;
impl Observer for Silent {}

/// Executes machines, optionally checking every stack against its shape.
#[derive(Debug)]
pub struct Executor<'m> {
    machine: &'m MooreMachine,
    checked: bool,
    max_live: usize,
    seen: Vec<u64>,
    epoch: u64,
}

impl<'m> Executor<'m> {
    pub fn new(machine: &'m MooreMachine) -> Self {
        Executor {
            machine,
            checked: false,
            max_live: 0,
            seen: vec![0; machine.state_count() + 1],
            epoch: 0,
        }
    }

    /// Checked mode validates every instruction's precondition and every
    /// thread's stack against its state's shape, and asserts the thread bound.
    pub fn checked(machine: &'m MooreMachine) -> Self {
        Executor {
            checked: true,
            ..Executor::new(machine)
        }
    }

    pub fn machine(&self) -> &'m MooreMachine {
        self.machine
    }

    /// Largest thread pool observed so far.
    pub fn max_live(&self) -> usize {
        self.max_live
    }

    fn slot(&self, t: Target) -> usize {
        match t {
            Target::State(s) => s,
            Target::Accept => self.machine.state_count(),
        }
    }

    fn run_routine(
        &self,
        routine: &[Instruction],
        current: Option<char>,
        td: &mut ThreadData,
        obs: &mut dyn Observer,
    ) -> Result<(), ExecError> {
        for instr in routine {
            exec_instruction(instr, current, td, self.checked)?;
            obs.instruction(instr, td);
        }
        Ok(())
    }

    /// Keeps the first thread per state and, in checked mode, verifies stacks.
    fn dedup(&mut self, threads: Vec<Thread>) -> Result<Vec<Thread>, ExecError> {
        self.epoch += 1;
        let mut out = Vec::with_capacity(threads.len().min(self.seen.len()));
        for t in threads {
            let slot = self.slot(t.state);
            if self.seen[slot] == self.epoch {
                continue;
            }
            self.seen[slot] = self.epoch;
            if self.checked {
                let expected = self.machine.shape_of(t.state);
                if !conforms_stack(&t.data.stack, &expected) {
                    return Err(ExecError::ShapeViolation(format!(
                        "thread at {} has stack {:?}, expected {expected:?}",
                        t.state, t.data.stack
                    )));
                }
            }
            out.push(t);
        }
        self.max_live = self.max_live.max(out.len());
        if self.checked {
            assert!(
                out.len() <= self.machine.state_count() + 1,
                "{} live threads for {} states",
                out.len(),
                self.machine.state_count()
            );
        }
        Ok(out)
    }

    fn init_observed(&mut self, obs: &mut dyn Observer) -> Result<Vec<Thread>, ExecError> {
        let mut threads = Vec::with_capacity(self.machine.init().len());
        for entry in self.machine.init() {
            let mut data = ThreadData::new();
            self.run_routine(&entry.routine, None, &mut data, obs)?;
            threads.push(Thread {
                state: entry.target,
                data,
            });
        }
        self.dedup(threads)
    }

    fn step_observed(
        &mut self,
        threads: &[Thread],
        c: char,
        obs: &mut dyn Observer,
    ) -> Result<Vec<Thread>, ExecError> {
        let mut next = Vec::new();
        for t in threads {
            let Target::State(s) = t.state else { continue };
            for edge in self.machine.next(s, c) {
                obs.transition(s, edge);
                let mut data = t.data.clone();
                if data.rec {
                    data.recorded.push_back(c);
                }
                self.run_routine(&edge.routine, Some(c), &mut data, obs)?;
                next.push(Thread {
                    state: edge.target,
                    data,
                });
            }
        }
        self.dedup(next)
    }

    /// One thread per init entry, merged by state.
    pub fn init_threads(&mut self) -> Result<Vec<Thread>, ExecError> {
        self.init_observed(&mut Silent)
    }

    /// Advances every live thread over `c`.
    pub fn step(&mut self, threads: &[Thread], c: char) -> Result<Vec<Thread>, ExecError> {
        self.step_observed(threads, c, &mut Silent)
    }

    /// Parses the whole input.
    pub fn run_full(&mut self, input: &str) -> Result<Option<Value>, ExecError> {
        let mut threads = self.init_threads()?;
        for c in input.chars() {
            if threads.is_empty() {
                return Ok(None);
            }
            threads = self.step(&threads, c)?;
        }
        Ok(accepted(&threads))
    }

    /// Parses a prefix of the input pulled from `next`. Returns the value and
    /// the number of characters it consumed.
    pub fn parse_prefix_with(
        &mut self,
        mut next: impl FnMut() -> Option<char>,
        greedy: bool,
    ) -> Result<Option<(Value, usize)>, ExecError> {
        let mut threads = self.init_threads()?;
        let mut consumed = 0;
        let mut event = accepted(&threads).map(|v| (v, 0));
        if !greedy && event.is_some() {
            return Ok(event);
        }
        while threads.iter().any(|t| !t.state.is_accept()) {
            let Some(c) = next() else { break };
            consumed += 1;
            threads = self.step(&threads, c)?;
            if let Some(v) = accepted(&threads) {
                event = Some((v, consumed));
                if !greedy {
                    break;
                }
            }
        }
        Ok(event)
    }

    pub fn parse_prefix(
        &mut self,
        input: &str,
        greedy: bool,
    ) -> Result<Option<(Value, usize)>, ExecError> {
        let mut chars = input.chars();
        self.parse_prefix_with(|| chars.next(), greedy)
    }
}

fn accepted(threads: &[Thread]) -> Option<Value> {
    let t = threads.iter().find(|t| t.state.is_accept())?;
    match t.data.stack.as_slice() {
        [v] => Some(v.clone()),
        other => panic!("accepting thread with stack of depth {}", other.len()),
    }
}

fn infallible<T>(r: Result<T, ExecError>) -> T {
    r.unwrap_or_else(|e| panic!("ill-typed machine: {e}"))
}

pub fn init_threads(m: &MooreMachine) -> Vec<Thread> {
    infallible(Executor::new(m).init_threads())
}

pub fn step(m: &MooreMachine, threads: &[Thread], c: char) -> Vec<Thread> {
    infallible(Executor::new(m).step(threads, c))
}

/// The parse tree of the whole input, if it matches.
pub fn run_full(m: &MooreMachine, input: &str) -> Option<Value> {
    infallible(Executor::new(m).run_full(input))
}

/// Whether the whole input matches.
pub fn is_match(m: &MooreMachine, input: &str) -> bool {
    run_full(m, input).is_some()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrefixResult {
    pub value: Option<Value>,
    pub consumed: usize,
}

/// Parses the longest (greedy) or shortest matching prefix. Returns the
/// result and the unparsed remainder.
pub fn parse_prefix<'a>(m: &MooreMachine, input: &'a str, greedy: bool) -> (PrefixResult, &'a str) {
    match infallible(Executor::new(m).parse_prefix(input, greedy)) {
        Some((v, n)) => {
            let split = input.char_indices().nth(n).map_or(input.len(), |(i, _)| i);
            (
                PrefixResult {
                    value: Some(v),
                    consumed: n,
                },
                &input[split..],
            )
        }
        None => (
            PrefixResult {
                value: None,
                consumed: 0,
            },
            input,
        ),
    }
}

/// A compiled regex together with the facts the runtime checks at its
/// boundary.
#[derive(Clone, Debug)]
pub struct Program {
    machine: MooreMachine,
    consuming: bool,
}

impl Program {
    pub fn new(re: &TypedRegex) -> Self {
        Program {
            machine: crate::compile::compile(re),
            consuming: re.is_consuming(),
        }
    }

    pub fn machine(&self) -> &MooreMachine {
        &self.machine
    }

    pub fn is_consuming(&self) -> bool {
        self.consuming
    }

    fn require_consuming(&self) -> Result<()> {
        if self.consuming {
            Ok(())
        } else {
            Err(Error::NotConsuming)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Gap(String),
    Match(String, Value),
}

/// The input split into alternating unmatched gaps and matches.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Matches {
    pub segments: Vec<Segment>,
}

impl Matches {
    /// Matched substrings with their parse trees, and the text after the
    /// last match.
    pub fn into_pairs(self) -> (Vec<(String, Value)>, String) {
        let mut pairs = Vec::new();
        let mut tail = String::new();
        for seg in self.segments {
            match seg {
                Segment::Gap(g) => tail = g,
                Segment::Match(s, v) => {
                    pairs.push((s, v));
                    tail.clear();
                }
            }
        }
        (pairs, tail)
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Match(_, v) => Some(v),
            Segment::Gap(_) => None,
        })
    }
}

/// Scans left to right for non-overlapping matches.
pub fn disjoint_matches(p: &Program, input: &str, greedy: bool) -> Result<Matches> {
    p.require_consuming()?;
    let chars: Vec<char> = input.chars().collect();
    let mut exec = Executor::new(&p.machine);
    let mut segments = Vec::new();
    let mut gap = String::new();
    let mut i = 0;
    while i < chars.len() {
        let mut pos = i;
        let found = infallible(exec.parse_prefix_with(
            || {
                let c = chars.get(pos).copied();
                pos += 1;
                c
            },
            greedy,
        ));
        match found {
            Some((v, n)) if n > 0 => {
                if !gap.is_empty() {
                    segments.push(Segment::Gap(std::mem::take(&mut gap)));
                }
                segments.push(Segment::Match(chars[i..i + n].iter().collect(), v));
                i += n;
            }
            _ => {
                gap.push(chars[i]);
                i += 1;
            }
        }
    }
    if !gap.is_empty() {
        segments.push(Segment::Gap(gap));
    }
    Ok(Matches { segments })
}

/// Replaces every disjoint match (greedy) with `replacer` applied to its
/// parse tree.
pub fn substitute(
    p: &Program,
    input: &str,
    mut replacer: impl FnMut(&Value) -> String,
) -> Result<String> {
    substitute_with(p, input, |_, v| replacer(v))
}

/// Like [`substitute`], but the replacer also sees the matched text.
pub fn substitute_with(
    p: &Program,
    input: &str,
    mut replacer: impl FnMut(&str, &Value) -> String,
) -> Result<String> {
    let matches = disjoint_matches(p, input, true)?;
    let mut out = String::with_capacity(input.len());
    for seg in &matches.segments {
        match seg {
            Segment::Gap(g) => out.push_str(g),
            Segment::Match(s, v) => out.push_str(&replacer(s, v)),
        }
    }
    Ok(out)
}

/// A lazily consumed character source with pushback.
pub struct CharStream<I> {
    source: I,
    pushed: VecDeque<char>,
}

impl<I: Iterator<Item = char>> CharStream<I> {
    pub fn new(source: I) -> Self {
        CharStream {
            source,
            pushed: VecDeque::new(),
        }
    }

    /// Returns characters to the front of the stream.
    pub fn unread(&mut self, chars: &[char]) {
        for &c in chars.iter().rev() {
            self.pushed.push_front(c);
        }
    }

    pub fn into_parts(self) -> (VecDeque<char>, I) {
        (self.pushed, self.source)
    }
}

impl<I: Iterator<Item = char>> Iterator for CharStream<I> {
    type Item = char;

    fn next(&mut self) -> Option<char> {
        self.pushed.pop_front().or_else(|| self.source.next())
    }
}

/// Parses one token from the front of the stream. On success the stream
/// resumes after the token; on failure it is left as it was. Greedy mode
/// reads no further once every thread has died, but never terminates on an
/// endless stream that keeps some thread alive.
pub fn get_token<I: Iterator<Item = char>>(
    m: &MooreMachine,
    stream: &mut CharStream<I>,
    greedy: bool,
) -> Option<Value> {
    next_token(m, stream, greedy).map(|(v, _)| v)
}

/// Like [`get_token`], also returning the number of characters consumed.
pub fn next_token<I: Iterator<Item = char>>(
    m: &MooreMachine,
    stream: &mut CharStream<I>,
    greedy: bool,
) -> Option<(Value, usize)> {
    let mut pulled = Vec::new();
    let found = infallible(Executor::new(m).parse_prefix_with(
        || {
            let c = stream.next()?;
            pulled.push(c);
            Some(c)
        },
        greedy,
    ));
    match found {
        Some((v, n)) => {
            stream.unread(&pulled[n..]);
            Some((v, n))
        }
        None => {
            stream.unread(&pulled);
            None
        }
    }
}

/// One line of an execution trace.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceRow {
    /// The initial stack of a starting thread.
    Start {
        target: Target,
        stack: String,
    },
    Char {
        c: char,
    },
    Transition {
        from: usize,
        to: Target,
        check: String,
    },
    Instruction {
        name: String,
        stack: String,
    },
    Accept {
        value: String,
    },
    Reject,
}

/// A per-instruction execution log in the layout of a routine/stack table.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
}

fn render_stack(stack: &[Value]) -> String {
    if stack.is_empty() {
        return "[<]".to_string();
    }
    let items: Vec<String> = stack.iter().map(Value::to_string).collect();
    format!("[< {}]", items.join(", "))
}

/// The condition check a guard performs on `c`.
pub fn render_check(guard: &CharCond, c: char) -> String {
    match guard {
        CharCond::OneOf(set) if set.len() == 1 => {
            format!("{c:?} == {:?}", set.iter().next().unwrap())
        }
        CharCond::OneOf(set) => format!("{c:?} in {:?}", set.iter().collect::<String>()),
        CharCond::Range(lo, hi) => format!("{lo:?} <= {c:?} && {c:?} <= {hi:?}"),
        CharCond::Pred(_) => format!("<pred> {c:?}"),
    }
}

struct Recorder {
    rows: Vec<TraceRow>,
    current: char,
}

impl Observer for Recorder {
    fn instruction(&mut self, instr: &Instruction, td: &ThreadData) {
        self.rows.push(TraceRow::Instruction {
            name: instr.to_string(),
            stack: render_stack(&td.stack),
        });
    }

    fn transition(&mut self, from: usize, edge: &Edge) {
        self.rows.push(TraceRow::Transition {
            from,
            to: edge.target,
            check: render_check(&edge.guard, self.current),
        });
    }
}

/// Runs the machine over the whole input, logging every transition and
/// instruction, including those of threads later discarded by merging.
pub fn trace(m: &MooreMachine, input: &str) -> Trace {
    let mut exec = Executor::new(m);
    let mut rec = Recorder {
        rows: Vec::new(),
        current: '\0',
    };
    let mut threads = infallible(exec.init_observed(&mut rec));
    for t in &threads {
        rec.rows.push(TraceRow::Start {
            target: t.state,
            stack: render_stack(&t.data.stack),
        });
    }
    for c in input.chars() {
        rec.current = c;
        rec.rows.push(TraceRow::Char { c });
        threads = infallible(exec.step_observed(&threads, c, &mut rec));
    }
    match accepted(&threads) {
        Some(v) => rec.rows.push(TraceRow::Accept {
            value: v.to_string(),
        }),
        None => rec.rows.push(TraceRow::Reject),
    }
    Trace { rows: rec.rows }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ROUTINE | STACK")?;
        for row in &self.rows {
            match row {
                TraceRow::Start { target, stack } => writeln!(f, "start {target} | {stack}")?,
                TraceRow::Char { c } => writeln!(f, "Current character: {c:?}.")?,
                TraceRow::Transition { from, to, check } => {
                    writeln!(f, "Condition check: {check} ({from} -> {to})")?
                }
                TraceRow::Instruction { name, stack } => writeln!(f, "{name} | {stack}")?,
                TraceRow::Accept { value } => writeln!(f, "Accept: {value}.")?,
                TraceRow::Reject => writeln!(f, "Reject.")?,
            }
        }
        Ok(())
    }
}
