//! JSON encoding of parse trees, machines and NFAs.

use serde_json::{json, Value as Json};
use tyre::group::PlainNfa;
use tyre::machine::{Routine, Target};
use tyre::{CharCond, MooreMachine, Value};

/// unit → null, char → one-character string, string → string, numbers →
/// numbers, pair → two-element array, sum → `{"left": v}` / `{"right": v}`,
/// list → array. Integers outside the `i64` range are written as strings.
pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Unit => Json::Null,
        Value::Char(c) => Json::String(c.to_string()),
        Value::Str(s) => Json::String(s.to_string()),
        Value::Nat(n) => json!(n),
        Value::Int(n) => match i64::try_from(*n) {
            Ok(n) => json!(n),
            Err(_) => Json::String(n.to_string()),
        },
        Value::Bool(b) => Json::Bool(*b),
        Value::Pair(a, b) => json!([value_to_json(a), value_to_json(b)]),
        Value::Left(a) => json!({ "left": value_to_json(a) }),
        Value::Right(b) => json!({ "right": value_to_json(b) }),
        Value::List(items) => Json::Array(items.iter().map(value_to_json).collect()),
    }
}

fn target_json(t: Target) -> Json {
    match t {
        Target::State(s) => json!(s),
        Target::Accept => json!("accept"),
    }
}

pub fn guard_text(g: &CharCond) -> String {
    g.to_string()
}

fn routine_json(r: &Routine) -> Json {
    Json::Array(r.iter().map(|i| Json::String(i.to_string())).collect())
}

pub fn machine_json(m: &MooreMachine) -> Json {
    let shapes: Vec<Json> = (0..m.state_count())
        .map(|s| {
            Json::Array(
                m.lookup(s)
                    .iter()
                    .map(|sh| Json::String(sh.to_string()))
                    .collect(),
            )
        })
        .collect();
    let init: Vec<Json> = m
        .init()
        .iter()
        .map(|e| json!({ "to": target_json(e.target), "routine": routine_json(&e.routine) }))
        .collect();
    let mut edges = Vec::new();
    for s in 0..m.state_count() {
        for e in m.edges(s) {
            edges.push(json!({
                "from": s,
                "guard": guard_text(&e.guard),
                "to": target_json(e.target),
                "routine": routine_json(&e.routine),
            }));
        }
    }
    json!({
        "state_count": m.state_count(),
        "yield": m.yield_shape().to_string(),
        "shapes": shapes,
        "init": init,
        "edges": edges,
    })
}

pub fn nfa_json(n: &PlainNfa) -> Json {
    let mut edges = Vec::new();
    for (s, es) in n.edges.iter().enumerate() {
        for (g, ts) in es {
            edges.push(json!({
                "from": s,
                "guard": guard_text(g),
                "to": ts.iter().copied().map(target_json).collect::<Vec<_>>(),
            }));
        }
    }
    json!({
        "state_count": n.state_count(),
        "starts": n.starts.iter().copied().map(target_json).collect::<Vec<_>>(),
        "edges": edges,
    })
}
