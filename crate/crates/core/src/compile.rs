//! Thompson construction from typed regexes to Moore machines.

use std::collections::{BTreeSet, HashSet};

use crate::group;
use crate::machine::{Edge, InitEntry, Instruction, MooreMachine, Routine, Target};
use crate::regex::{conv, CharCond, Conversion, Node, TypedRegex};
use crate::shape::Shape;
use crate::value::Value;

/// Compiles a typed regex. The result yields `re.shape()`.
pub fn compile(re: &TypedRegex) -> MooreMachine {
    match re.node() {
        Node::Empty => build_empty(),
        Node::MatchChar(c) => build_pred(c.clone()),
        Node::Seq(a, b) => build_concat(compile(a), compile(b)),
        Node::Alt(a, b) => build_alt(compile(a), compile(b)),
        Node::Rep(a) => build_star(compile(a)),
        Node::Conv(a, f) => build_conv(compile(a), f.clone()),
        Node::Group(a) => group::compile_group(a),
    }
}

pub fn build_pred(cond: CharCond) -> MooreMachine {
    MooreMachine::from_parts(
        vec![vec![]],
        Shape::Char,
        vec![InitEntry {
            target: Target::State(0),
            routine: vec![],
        }],
        vec![vec![Edge {
            guard: cond,
            target: Target::Accept,
            routine: vec![Instruction::PushChar],
        }]],
    )
}

pub fn build_empty() -> MooreMachine {
    MooreMachine::from_parts(
        vec![],
        Shape::Unit,
        vec![InitEntry {
            target: Target::Accept,
            routine: vec![Instruction::Push(Value::Unit, Shape::Unit)],
        }],
        vec![],
    )
}

fn append_on_accept(target: Target, routine: &mut Routine, instr: &Instruction) {
    if target.is_accept() {
        routine.push(instr.clone());
    }
}

pub fn build_alt(r: MooreMachine, s: MooreMachine) -> MooreMachine {
    let left = Instruction::Transform(conv::inject_left(
        r.yield_shape.clone(),
        s.yield_shape.clone(),
    ));
    let right = Instruction::Transform(conv::inject_right(
        r.yield_shape.clone(),
        s.yield_shape.clone(),
    ));
    let yield_shape = Shape::sum(r.yield_shape, s.yield_shape);
    let offset = r.shapes.len();

    let mut init = r.init;
    for e in &mut init {
        append_on_accept(e.target, &mut e.routine, &left);
    }
    for mut e in s.init {
        e.target = e.target.offset(offset);
        append_on_accept(e.target, &mut e.routine, &right);
        init.push(e);
    }

    let mut edges = r.edges;
    for es in &mut edges {
        for e in es.iter_mut() {
            append_on_accept(e.target, &mut e.routine, &left);
        }
    }
    for mut es in s.edges {
        for e in &mut es {
            e.target = e.target.offset(offset);
            append_on_accept(e.target, &mut e.routine, &right);
        }
        edges.push(es);
    }

    let mut shapes = r.shapes;
    shapes.extend(s.shapes);
    MooreMachine {
        shapes,
        yield_shape,
        init,
        edges,
    }
}

pub fn build_star(r: MooreMachine) -> MooreMachine {
    let elem = r.yield_shape.clone();
    let list = Shape::list(elem.clone());
    let snoc = Instruction::ReducePair(conv::snoc(elem));
    let push_empty = Instruction::Push(Value::empty_list(), list.clone());

    // An accepting start of the body would loop on the empty word; the
    // star's own accepting start already covers zero iterations.
    let starts: Vec<InitEntry> = r
        .init
        .into_iter()
        .filter(|e| !e.target.is_accept())
        .collect();

    let mut init: Vec<InitEntry> = starts
        .iter()
        .map(|e| {
            let mut routine = Vec::with_capacity(e.routine.len() + 1);
            routine.push(push_empty.clone());
            routine.extend(e.routine.iter().cloned());
            InitEntry {
                target: e.target,
                routine,
            }
        })
        .collect();
    init.push(InitEntry {
        target: Target::Accept,
        routine: vec![push_empty],
    });

    let edges = r
        .edges
        .into_iter()
        .map(|es| {
            let mut out = Vec::with_capacity(es.len());
            let mut seen = HashSet::new();
            let mut add = |e: Edge, out: &mut Vec<Edge>| {
                if seen.insert(edge_key(&e)) {
                    out.push(e);
                }
            };
            for e in es {
                if !e.target.is_accept() {
                    add(e, &mut out);
                    continue;
                }
                let mut base = e.routine;
                base.push(snoc.clone());
                add(
                    Edge {
                        guard: e.guard.clone(),
                        target: Target::Accept,
                        routine: base.clone(),
                    },
                    &mut out,
                );
                for s in &starts {
                    let mut routine = base.clone();
                    routine.extend(s.routine.iter().cloned());
                    add(
                        Edge {
                            guard: e.guard.clone(),
                            target: s.target,
                            routine,
                        },
                        &mut out,
                    );
                }
            }
            out
        })
        .collect();

    let shapes = r
        .shapes
        .into_iter()
        .map(|sh| {
            let mut v = Vec::with_capacity(sh.len() + 1);
            v.push(list.clone());
            v.extend(sh);
            v
        })
        .collect();
    MooreMachine {
        shapes,
        yield_shape: list,
        init,
        edges,
    }
}

pub fn build_concat(r: MooreMachine, s: MooreMachine) -> MooreMachine {
    let mk_pair =
        Instruction::ReducePair(conv::mk_pair(r.yield_shape.clone(), s.yield_shape.clone()));
    let yield_shape = Shape::pair(r.yield_shape.clone(), s.yield_shape.clone());
    let offset = r.shapes.len();

    let s_starts: Vec<InitEntry> = s
        .init
        .into_iter()
        .map(|mut e| {
            e.target = e.target.offset(offset);
            append_on_accept(e.target, &mut e.routine, &mk_pair);
            e
        })
        .collect();
    let join = |routine: Routine, out: &mut Vec<(Target, Routine)>| {
        for st in &s_starts {
            let mut joined = routine.clone();
            joined.extend(st.routine.iter().cloned());
            out.push((st.target, joined));
        }
    };

    let mut init = Vec::with_capacity(r.init.len());
    for e in r.init {
        if e.target.is_accept() {
            let mut joined = Vec::new();
            join(e.routine, &mut joined);
            init.extend(
                joined
                    .into_iter()
                    .map(|(target, routine)| InitEntry { target, routine }),
            );
        } else {
            init.push(e);
        }
    }

    let mut edges: Vec<Vec<Edge>> = r
        .edges
        .into_iter()
        .map(|es| {
            let mut out = Vec::with_capacity(es.len());
            for e in es {
                if e.target.is_accept() {
                    let mut joined = Vec::new();
                    join(e.routine, &mut joined);
                    out.extend(joined.into_iter().map(|(target, routine)| Edge {
                        guard: e.guard.clone(),
                        target,
                        routine,
                    }));
                } else {
                    out.push(e);
                }
            }
            out
        })
        .collect();
    for mut es in s.edges {
        for e in &mut es {
            e.target = e.target.offset(offset);
            append_on_accept(e.target, &mut e.routine, &mk_pair);
        }
        edges.push(es);
    }

    let mut shapes = r.shapes;
    shapes.extend(s.shapes.into_iter().map(|sh| {
        let mut v = Vec::with_capacity(sh.len() + 1);
        v.push(r.yield_shape.clone());
        v.extend(sh);
        v
    }));
    MooreMachine {
        shapes,
        yield_shape,
        init,
        edges,
    }
}

pub fn build_conv(mut m: MooreMachine, f: Conversion) -> MooreMachine {
    assert_eq!(
        f.from_shape(),
        &m.yield_shape,
        "conversion {} applied to the wrong shape",
        f.name()
    );
    let t = Instruction::Transform(f.clone());
    for e in &mut m.init {
        append_on_accept(e.target, &mut e.routine, &t);
    }
    for es in &mut m.edges {
        for e in es.iter_mut() {
            append_on_accept(e.target, &mut e.routine, &t);
        }
    }
    m.yield_shape = f.to_shape().clone();
    m
}

#[derive(PartialEq, Eq, Hash)]
enum GuardKey {
    OneOf(BTreeSet<char>),
    Range(char, char),
    Pred(usize),
}

#[derive(PartialEq, Eq, Hash)]
enum InstrKey {
    Push(String),
    PushChar,
    Reduce(usize),
    Transform(usize),
    EmitString,
    Record,
}

/// Hashable identity of an edge, agreeing with `Edge::identical`.
fn edge_key(e: &Edge) -> (Target, GuardKey, Vec<InstrKey>) {
    let guard = match &e.guard {
        CharCond::OneOf(s) => GuardKey::OneOf(s.clone()),
        CharCond::Range(lo, hi) => GuardKey::Range(*lo, *hi),
        CharCond::Pred(p) => GuardKey::Pred(p.addr()),
    };
    let routine = e
        .routine
        .iter()
        .map(|i| match i {
            Instruction::Push(v, s) => InstrKey::Push(format!("{v}:{s}")),
            Instruction::PushChar => InstrKey::PushChar,
            Instruction::ReducePair(r) => InstrKey::Reduce(r.addr()),
            Instruction::Transform(c) => InstrKey::Transform(c.addr()),
            Instruction::EmitString => InstrKey::EmitString,
            Instruction::Record => InstrKey::Record,
        })
        .collect();
    (e.target, guard, routine)
}
