//! Typed Moore machines.
//!
//! A machine is an NFA without silent transitions and with a single
//! accepting state. Every transition (and every initial state) is labelled
//! with a [`Routine`] of stack [`Instruction`]s that builds the parse tree
//! while the NFA runs. Each non-accepting state is assigned a stack shape;
//! the accepting state's stack shape is the singleton of the machine's yield.
//!
//! Shapes are checked by [`validate_machine`] and, optionally, at run time in
//! checked mode, standing in for the guarantees a dependently typed host
//! would give statically.

use std::fmt;

use crate::error::ExecError;
use crate::plist::PList;
use crate::regex::{CharCond, Conversion, Reducer};
use crate::shape::Shape;
use crate::value::Value;

/// A machine state: a non-accepting state index, or the accepting state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    State(usize),
    Accept,
}

impl Target {
    pub fn offset(self, by: usize) -> Target {
        match self {
            Target::State(s) => Target::State(s + by),
            Target::Accept => Target::Accept,
        }
    }

    pub fn is_accept(self) -> bool {
        self == Target::Accept
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::State(s) => write!(f, "{s}"),
            Target::Accept => f.write_str("accept"),
        }
    }
}

/// Stack shape: one descriptor per stack slot, top of stack last.
pub type StackShape = Vec<Shape>;

#[derive(Clone)]
pub enum Instruction {
    /// Pushes a constant of the given shape.
    Push(Value, Shape),
    /// Pushes the character consumed by the current transition.
    PushChar,
    /// Pops `y`, then `x`, and pushes `f(x, y)`.
    ReducePair(Reducer),
    /// Maps the top of the stack.
    Transform(Conversion),
    /// Pushes the recorded string, lowers the record flag and flushes the buffer.
    EmitString,
    /// Raises the record flag and starts collecting characters.
    Record,
}

impl Instruction {
    pub fn name(&self) -> &'static str {
        match self {
            Instruction::Push(..) => "Push",
            Instruction::PushChar => "PushChar",
            Instruction::ReducePair(_) => "ReducePair",
            Instruction::Transform(_) => "Transform",
            Instruction::EmitString => "EmitString",
            Instruction::Record => "Record",
        }
    }

    /// Shapes of the stack slots the instruction pops and pushes.
    pub fn contract(&self) -> (Vec<Shape>, Vec<Shape>) {
        match self {
            Instruction::Push(_, s) => (vec![], vec![s.clone()]),
            Instruction::PushChar => (vec![], vec![Shape::Char]),
            Instruction::ReducePair(f) => (
                vec![f.left_shape().clone(), f.right_shape().clone()],
                vec![f.to_shape().clone()],
            ),
            Instruction::Transform(f) => (vec![f.from_shape().clone()], vec![f.to_shape().clone()]),
            Instruction::EmitString => (vec![], vec![Shape::String]),
            Instruction::Record => (vec![], vec![]),
        }
    }

    /// Same instruction, comparing functions by identity.
    pub(crate) fn identical(&self, other: &Instruction) -> bool {
        match (self, other) {
            (Instruction::Push(a, sa), Instruction::Push(b, sb)) => a == b && sa == sb,
            (Instruction::ReducePair(a), Instruction::ReducePair(b)) => a.ptr_eq(b),
            (Instruction::Transform(a), Instruction::Transform(b)) => a.ptr_eq(b),
            (Instruction::PushChar, Instruction::PushChar)
            | (Instruction::EmitString, Instruction::EmitString)
            | (Instruction::Record, Instruction::Record) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn label(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
            if name.contains(' ') {
                write!(f, " ({name})")
            } else {
                write!(f, " {name}")
            }
        }
        f.write_str(self.name())?;
        match self {
            Instruction::Push(v, _) => label(f, &v.to_string()),
            Instruction::ReducePair(r) => label(f, r.name()),
            Instruction::Transform(c) => label(f, c.name()),
            _ => Ok(()),
        }
    }
}

impl fmt::Debug for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A routine in execution order.
pub type Routine = Vec<Instruction>;

/// True if the routine can run before any character has been consumed.
pub fn is_init_routine(routine: &[Instruction]) -> bool {
    !routine.iter().any(|i| matches!(i, Instruction::PushChar))
}

pub(crate) fn routines_identical(a: &[Instruction], b: &[Instruction]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.identical(y))
}

#[derive(Clone, Debug)]
pub struct InitEntry {
    pub target: Target,
    pub routine: Routine,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub guard: CharCond,
    pub target: Target,
    pub routine: Routine,
}

impl Edge {
    /// Same guard, target and routine, comparing functions by identity.
    pub fn identical(&self, other: &Edge) -> bool {
        self.target == other.target
            && self.guard.identical(&other.guard)
            && routines_identical(&self.routine, &other.routine)
    }
}

/// A routine-labelled NFA yielding parse trees of shape `yield_shape`.
///
/// Edge and init order is significant: earlier entries have priority when
/// threads meet in the same state.
#[derive(Clone, Debug)]
pub struct MooreMachine {
    pub(crate) shapes: Vec<StackShape>,
    pub(crate) yield_shape: Shape,
    pub(crate) init: Vec<InitEntry>,
    pub(crate) edges: Vec<Vec<Edge>>,
}

impl MooreMachine {
    /// Assembles a machine from raw parts. Use [`validate_machine`] to check
    /// that the routines respect the declared shapes.
    pub fn from_parts(
        shapes: Vec<StackShape>,
        yield_shape: Shape,
        init: Vec<InitEntry>,
        edges: Vec<Vec<Edge>>,
    ) -> Self {
        assert_eq!(shapes.len(), edges.len(), "one edge list per state");
        MooreMachine {
            shapes,
            yield_shape,
            init,
            edges,
        }
    }

    /// Number of non-accepting states.
    pub fn state_count(&self) -> usize {
        self.shapes.len()
    }

    pub fn yield_shape(&self) -> &Shape {
        &self.yield_shape
    }

    pub fn lookup(&self, state: usize) -> &StackShape {
        &self.shapes[state]
    }

    pub fn shape_of(&self, target: Target) -> StackShape {
        match target {
            Target::State(s) => self.shapes[s].clone(),
            Target::Accept => vec![self.yield_shape.clone()],
        }
    }

    pub fn init(&self) -> &[InitEntry] {
        &self.init
    }

    pub fn edges(&self, state: usize) -> &[Edge] {
        &self.edges[state]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// All transitions available from `state` on `c`, in priority order.
    pub fn next(&self, state: usize, c: char) -> impl Iterator<Item = &Edge> {
        self.edges[state]
            .iter()
            .filter(move |e| e.guard.satisfies(c))
    }
}

/// Per-thread mutable state: the value stack and the record buffer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ThreadData {
    pub stack: Vec<Value>,
    pub recorded: PList<char>,
    pub rec: bool,
}

impl ThreadData {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Whether `stack` has exactly the given shape.
pub fn conforms_stack(stack: &[Value], shape: &[Shape]) -> bool {
    stack.len() == shape.len() && stack.iter().zip(shape).all(|(v, s)| v.conforms(s))
}

fn top_conforms(stack: &[Value], top: &[Shape]) -> bool {
    stack.len() >= top.len()
        && stack[stack.len() - top.len()..]
            .iter()
            .zip(top)
            .all(|(v, s)| v.conforms(s))
}

fn pop(td: &mut ThreadData, instr: &Instruction) -> Result<Value, ExecError> {
    td.stack.pop().ok_or_else(|| ExecError::StackUnderflow {
        instruction: instr.to_string(),
    })
}

/// Executes one instruction. With `checked`, the instruction's stack
/// precondition is verified first.
pub fn exec_instruction(
    instr: &Instruction,
    current: Option<char>,
    td: &mut ThreadData,
    checked: bool,
) -> Result<(), ExecError> {
    if checked {
        let (pre, _) = instr.contract();
        if !top_conforms(&td.stack, &pre) {
            return Err(ExecError::ShapeViolation(format!(
                "{instr} expects top of stack {pre:?}, found {:?}",
                td.stack
            )));
        }
    }
    match instr {
        Instruction::Push(v, _) => td.stack.push(v.clone()),
        Instruction::PushChar => td
            .stack
            .push(Value::Char(current.ok_or(ExecError::MissingChar)?)),
        Instruction::ReducePair(f) => {
            let y = pop(td, instr)?;
            let x = pop(td, instr)?;
            td.stack.push(f.apply(x, y));
        }
        Instruction::Transform(f) => {
            let x = pop(td, instr)?;
            td.stack.push(f.apply(x));
        }
        Instruction::EmitString => {
            let s: String = td.recorded.iter().collect();
            td.stack.push(Value::string(s));
            td.recorded = PList::new();
            td.rec = false;
        }
        Instruction::Record => {
            td.rec = true;
            td.recorded = PList::new();
        }
    }
    Ok(())
}

/// Executes a routine left to right.
pub fn exec_routine(
    routine: &[Instruction],
    current: Option<char>,
    td: &mut ThreadData,
    checked: bool,
) -> Result<(), ExecError> {
    routine
        .iter()
        .try_for_each(|i| exec_instruction(i, current, td, checked))
}

/// Where a shape violation was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    Init { index: usize },
    Edge { from: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub site: Site,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.site {
            Site::Init { index } => write!(f, "init entry {index}: {}", self.message),
            Site::Edge { from, index } => {
                write!(f, "edge {index} of state {from}: {}", self.message)
            }
        }
    }
}

/// Runs the routine's instruction contracts over `pre`, returning the
/// resulting stack shape or a description of the first mismatch.
pub fn routine_post(routine: &[Instruction], pre: &[Shape]) -> Result<StackShape, String> {
    let mut stack = pre.to_vec();
    for (i, instr) in routine.iter().enumerate() {
        let (pops, pushes) = instr.contract();
        if stack.len() < pops.len() || stack[stack.len() - pops.len()..] != pops[..] {
            return Err(format!(
                "instruction {i} ({instr}) expects {pops:?} on top of {stack:?}"
            ));
        }
        stack.truncate(stack.len() - pops.len());
        stack.extend(pushes);
    }
    Ok(stack)
}

/// Checks every routine against the machine's stack shapes. An empty result
/// means the machine is well typed.
pub fn validate_machine(m: &MooreMachine) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check =
        |site: Site, routine: &[Instruction], pre: &[Shape], target: Target| match routine_post(
            routine, pre,
        ) {
            Err(message) => out.push(Violation { site, message }),
            Ok(post) => {
                let expected = m.shape_of(target);
                if post != expected {
                    out.push(Violation {
                        site,
                        message: format!(
                            "routine ends with {post:?}, target {target} expects {expected:?}"
                        ),
                    });
                }
            }
        };
    for (index, entry) in m.init.iter().enumerate() {
        check(Site::Init { index }, &entry.routine, &[], entry.target);
    }
    for (from, edges) in m.edges.iter().enumerate() {
        for (index, edge) in edges.iter().enumerate() {
            check(
                Site::Edge { from, index },
                &edge.routine,
                &m.shapes[from],
                edge.target,
            );
        }
    }
    for (index, entry) in m.init.iter().enumerate() {
        if !is_init_routine(&entry.routine) {
            out.push(Violation {
                site: Site::Init { index },
                message: "init routine contains PushChar".to_string(),
            });
        }
    }
    out
}
