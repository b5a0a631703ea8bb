//! Compilation of `Group` subtrees: a routine-free NFA, shrunk by merging
//! states with equal outgoing transitions, wrapped as a string-yielding
//! machine.

use std::collections::{BTreeSet, HashMap};

use crate::machine::{Edge, InitEntry, Instruction, MooreMachine, Target};
use crate::regex::{CharCond, Node, TypedRegex};
use crate::shape::Shape;

/// An NFA without routines. Per source state, a list of guards each leading
/// to a set of targets.
#[derive(Clone, Debug)]
pub struct PlainNfa {
    pub starts: Vec<Target>,
    pub edges: Vec<Vec<(CharCond, Vec<Target>)>>,
}

impl PlainNfa {
    pub fn state_count(&self) -> usize {
        self.edges.len()
    }

    fn offset(mut self, by: usize) -> PlainNfa {
        for t in &mut self.starts {
            *t = t.offset(by);
        }
        for es in &mut self.edges {
            for (_, ts) in es.iter_mut() {
                for t in ts.iter_mut() {
                    *t = t.offset(by);
                }
            }
        }
        self
    }

    /// Whether the NFA accepts `input`.
    pub fn accepts(&self, input: &str) -> bool {
        let mut current: BTreeSet<Target> = self.starts.iter().copied().collect();
        for c in input.chars() {
            let mut next = BTreeSet::new();
            for t in &current {
                if let Target::State(s) = t {
                    for (g, ts) in &self.edges[*s] {
                        if g.satisfies(c) {
                            next.extend(ts.iter().copied());
                        }
                    }
                }
            }
            current = next;
        }
        current.contains(&Target::Accept)
    }
}

fn push_unique(ts: &mut Vec<Target>, t: Target) {
    if !ts.contains(&t) {
        ts.push(t);
    }
}

fn replace_accept(ts: &[Target], with: &[Target]) -> Vec<Target> {
    let mut out = Vec::with_capacity(ts.len() + with.len());
    for &t in ts {
        if t.is_accept() {
            for &w in with {
                push_unique(&mut out, w);
            }
        } else {
            push_unique(&mut out, t);
        }
    }
    out
}

/// The Thompson construction without routine bookkeeping.
pub fn build_nfa(re: &TypedRegex) -> PlainNfa {
    match re.node() {
        Node::Empty => PlainNfa {
            starts: vec![Target::Accept],
            edges: vec![],
        },
        Node::MatchChar(c) => PlainNfa {
            starts: vec![Target::State(0)],
            edges: vec![vec![(c.clone(), vec![Target::Accept])]],
        },
        Node::Alt(a, b) => {
            let r = build_nfa(a);
            let s = build_nfa(b).offset(r.state_count());
            let mut starts = r.starts;
            for t in s.starts {
                push_unique(&mut starts, t);
            }
            let mut edges = r.edges;
            edges.extend(s.edges);
            PlainNfa { starts, edges }
        }
        Node::Seq(a, b) => {
            let r = build_nfa(a);
            let s = build_nfa(b).offset(r.state_count());
            let starts = replace_accept(&r.starts, &s.starts);
            let mut edges: Vec<_> = r
                .edges
                .into_iter()
                .map(|es| {
                    es.into_iter()
                        .map(|(g, ts)| (g, replace_accept(&ts, &s.starts)))
                        .collect()
                })
                .collect();
            edges.extend(s.edges);
            PlainNfa { starts, edges }
        }
        Node::Rep(a) => {
            let r = build_nfa(a);
            let body: Vec<Target> = r
                .starts
                .iter()
                .copied()
                .filter(|t| !t.is_accept())
                .collect();
            let mut starts = body.clone();
            starts.push(Target::Accept);
            let mut looped = body;
            looped.insert(0, Target::Accept);
            let edges = r
                .edges
                .into_iter()
                .map(|es| {
                    es.into_iter()
                        .map(|(g, ts)| (g, replace_accept(&ts, &looped)))
                        .collect()
                })
                .collect();
            PlainNfa { starts, edges }
        }
        Node::Conv(a, _) | Node::Group(a) => build_nfa(a),
    }
}

/// Equality of character conditions by constructor and arguments.
/// Predicates are opaque and never equal, not even to themselves.
pub fn cond_equal(a: &CharCond, b: &CharCond) -> bool {
    match (a, b) {
        (CharCond::OneOf(x), CharCond::OneOf(y)) => x == y,
        (CharCond::Range(a1, b1), CharCond::Range(a2, b2)) => a1 == a2 && b1 == b2,
        _ => false,
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum GuardKey {
    OneOf(BTreeSet<char>),
    Range(char, char),
    /// Unique per guard occurrence, so predicate guards never compare equal.
    Pred(usize),
}

type StateKey = BTreeSet<(GuardKey, BTreeSet<Target>)>;

/// Merges states with equal outgoing transitions until none remain. Of each
/// class of equal states the lowest index survives; surviving states keep
/// their relative order. Starts are redirected and deduplicated.
pub fn merge_states(nfa: PlainNfa) -> PlainNfa {
    let mut pred_ids = 0usize;
    let guards: Vec<Vec<GuardKey>> = nfa
        .edges
        .iter()
        .map(|es| {
            es.iter()
                .map(|(g, _)| match g {
                    CharCond::OneOf(s) => GuardKey::OneOf(s.clone()),
                    CharCond::Range(lo, hi) => GuardKey::Range(*lo, *hi),
                    CharCond::Pred(_) => {
                        pred_ids += 1;
                        GuardKey::Pred(pred_ids)
                    }
                })
                .collect()
        })
        .collect();

    // rep[s] is the state s has been merged into.
    let n = nfa.state_count();
    let mut rep: Vec<usize> = (0..n).collect();
    let resolve = |rep: &[usize], t: Target| match t {
        Target::State(s) => Target::State(rep[s]),
        Target::Accept => Target::Accept,
    };
    loop {
        let mut classes: HashMap<StateKey, usize> = HashMap::new();
        let mut merged = false;
        let snapshot = rep.clone();
        for s in (0..n).filter(|&s| snapshot[s] == s) {
            let key: StateKey = nfa.edges[s]
                .iter()
                .zip(&guards[s])
                .map(|((_, ts), g)| {
                    (
                        g.clone(),
                        ts.iter().map(|&t| resolve(&snapshot, t)).collect(),
                    )
                })
                .collect();
            match classes.get(&key) {
                Some(&keep) => {
                    rep[s] = keep;
                    merged = true;
                }
                None => {
                    classes.insert(key, s);
                }
            }
        }
        if !merged {
            break;
        }
        // Path compression: every state points at a surviving state.
        for s in 0..n {
            let mut r = rep[s];
            while rep[r] != r {
                r = rep[r];
            }
            rep[s] = r;
        }
    }

    let survivors: Vec<usize> = (0..n).filter(|&s| rep[s] == s).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &s) in survivors.iter().enumerate() {
        index[s] = i;
    }
    let rename = |t: Target| match t {
        Target::State(s) => Target::State(index[rep[s]]),
        Target::Accept => Target::Accept,
    };
    let mut starts = Vec::new();
    for &t in &nfa.starts {
        push_unique(&mut starts, rename(t));
    }
    let edges = survivors
        .iter()
        .map(|&s| {
            let mut out: Vec<(CharCond, Vec<Target>)> = Vec::new();
            for ((g, ts), key) in nfa.edges[s].iter().zip(&guards[s]) {
                let mut targets = Vec::new();
                for &t in ts {
                    push_unique(&mut targets, rename(t));
                }
                // Equal guards on one state collapse into one entry.
                let dup = out
                    .iter()
                    .position(|(g2, _)| !matches!(key, GuardKey::Pred(_)) && cond_equal(g, g2));
                match dup {
                    Some(i) => {
                        for t in targets {
                            push_unique(&mut out[i].1, t);
                        }
                    }
                    None => out.push((g.clone(), targets)),
                }
            }
            out
        })
        .collect();
    PlainNfa { starts, edges }
}

/// Wraps an NFA as a machine yielding the matched substring.
pub fn nfa_to_machine(nfa: &PlainNfa) -> MooreMachine {
    let init = nfa
        .starts
        .iter()
        .map(|&t| InitEntry {
            target: t,
            routine: if t.is_accept() {
                vec![Instruction::Record, Instruction::EmitString]
            } else {
                vec![Instruction::Record]
            },
        })
        .collect();
    let edges = nfa
        .edges
        .iter()
        .map(|es| {
            let mut out = Vec::new();
            for (g, ts) in es {
                for &t in ts {
                    let routine = if t.is_accept() {
                        vec![Instruction::EmitString]
                    } else {
                        vec![]
                    };
                    out.push(Edge {
                        guard: g.clone(),
                        target: t,
                        routine,
                    });
                }
            }
            out
        })
        .collect();
    MooreMachine::from_parts(vec![vec![]; nfa.state_count()], Shape::String, init, edges)
}

pub fn compile_group(inner: &TypedRegex) -> MooreMachine {
    nfa_to_machine(&merge_states(build_nfa(inner)))
}
