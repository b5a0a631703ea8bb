//! Test oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tyre::UntypedRegex;

pub const ALPHABET: [char; 3] = ['a', 'b', 'c'];

/// End positions of all ways `re` matches `s` starting at `i`, by naive
/// backtracking over the syntax tree.
fn ends(re: &UntypedRegex, s: &[char], i: usize) -> BTreeSet<usize> {
    use UntypedRegex::*;
    let one = |ok: bool| {
        if ok {
            BTreeSet::from([i + 1])
        } else {
            BTreeSet::new()
        }
    };
    match re {
        Epsilon => BTreeSet::from([i]),
        Exactly(c) => one(s.get(i) == Some(c)),
        OneOf(set) => one(s.get(i).is_some_and(|c| set.contains(c))),
        To(lo, hi) => one(s.get(i).is_some_and(|c| lo <= c && c <= hi)),
        Any => one(i < s.len()),
        Keep(a) => ends(a, s, i),
        Concat(a, b) => ends(a, s, i)
            .into_iter()
            .flat_map(|j| ends(b, s, j))
            .collect(),
        Alt(a, b) => {
            let mut out = ends(a, s, i);
            out.extend(ends(b, s, i));
            out
        }
        Optional(a) => {
            let mut out = ends(a, s, i);
            out.insert(i);
            out
        }
        Rep0(a) => star_ends(a, s, i),
        Rep1(a) => ends(a, s, i)
            .into_iter()
            .flat_map(|j| star_ends(a, s, j))
            .collect(),
    }
}

fn star_ends(a: &UntypedRegex, s: &[char], i: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([i]);
    let mut todo = vec![i];
    while let Some(j) = todo.pop() {
        for k in ends(a, s, j) {
            if out.insert(k) {
                todo.push(k);
            }
        }
    }
    out
}

pub fn oracle_match(re: &UntypedRegex, s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    ends(re, &chars, 0).contains(&chars.len())
}

/// Lengths of all prefixes of `s` matched by `re`.
pub fn oracle_prefixes(re: &UntypedRegex, s: &str) -> BTreeSet<usize> {
    let chars: Vec<char> = s.chars().collect();
    ends(re, &chars, 0)
}

/// All words over the alphabet of length at most `max`.
pub fn words(max: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut start = 0;
    for _ in 0..max {
        let end = out.len();
        for i in start..end {
            for c in ALPHABET {
                let w = format!("{}{c}", out[i]);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

fn wrap_unary(inner: &UntypedRegex, out: &mut Vec<UntypedRegex>) {
    out.push(UntypedRegex::rep0(inner.clone()));
    out.push(UntypedRegex::optional(inner.clone()));
    if !matches!(inner, UntypedRegex::Keep(_)) {
        out.push(UntypedRegex::keep(inner.clone()));
    }
}

/// Every regex of depth at most `depth` over single letters, concatenation,
/// alternation, star, option and keep. Nested keeps are excluded since they
/// collapse.
pub fn enumerate(depth: usize) -> Vec<UntypedRegex> {
    let mut all: Vec<UntypedRegex> = ALPHABET.iter().map(|&c| UntypedRegex::Exactly(c)).collect();
    for _ in 1..depth {
        let prev = all.clone();
        let mut next = Vec::new();
        for a in &prev {
            wrap_unary(a, &mut next);
        }
        for a in &prev {
            for b in &prev {
                next.push(UntypedRegex::concat(a.clone(), b.clone()));
                next.push(UntypedRegex::alt(a.clone(), b.clone()));
            }
        }
        // Keep only regexes of exactly the new depth; shallower ones are in `all`.
        let known: BTreeSet<String> = all.iter().map(|r| r.render()).collect();
        next.retain(|r| !known.contains(&r.render()));
        all.extend(next);
    }
    all
}

/// Random regexes of depth at most `depth` from the same constructors.
pub fn arb_regex(depth: u32) -> impl Strategy<Value = UntypedRegex> {
    let leaf = prop_oneof![Just('a'), Just('b'), Just('c')].prop_map(UntypedRegex::Exactly);
    leaf.prop_recursive(depth.saturating_sub(1), 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| UntypedRegex::concat(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| UntypedRegex::alt(a, b)),
            inner.clone().prop_map(UntypedRegex::rep0),
            inner.clone().prop_map(UntypedRegex::optional),
            inner.prop_map(UntypedRegex::keep),
        ]
    })
}

pub fn depth(re: &UntypedRegex) -> usize {
    use UntypedRegex::*;
    match re {
        Concat(a, b) | Alt(a, b) => 1 + depth(a).max(depth(b)),
        Optional(a) | Rep0(a) | Rep1(a) | Keep(a) => 1 + depth(a),
        _ => 1,
    }
}

/// A reproducible sample of `n` values from a strategy.
pub fn sample<S: Strategy>(strategy: S, n: usize, seed: u8) -> Vec<S::Value> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

/// The unbalanced left-nested alternation of `n` copies of `a`.
pub fn alt_family(n: usize) -> UntypedRegex {
    let mut re = UntypedRegex::Exactly('a');
    for _ in 1..n {
        re = UntypedRegex::alt(re, UntypedRegex::Exactly('a'));
    }
    UntypedRegex::keep(re)
}

/// Random literal ASTs over every constructor, including characters that
/// need escaping. Nested keeps are collapsed by construction.
pub fn arb_ast(depth: u32) -> impl Strategy<Value = UntypedRegex> {
    let ch = prop_oneof![
        proptest::sample::select(vec!['a', 'b', 'z', '0', '-', '^', ' ', 'é']),
        proptest::sample::select(vec!['(', ')', '[', ']', '|', '?', '*', '+', '.', '!', '\\']),
        any::<char>(),
    ];
    let leaf = prop_oneof![
        ch.clone().prop_map(UntypedRegex::Exactly),
        proptest::collection::btree_set(ch.clone(), 1..5).prop_map(UntypedRegex::OneOf),
        (ch.clone(), ch).prop_map(|(a, b)| UntypedRegex::To(a.min(b), a.max(b))),
        Just(UntypedRegex::Any),
        Just(UntypedRegex::Epsilon),
    ];
    leaf.prop_recursive(depth, 128, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| UntypedRegex::concat(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| UntypedRegex::alt(a, b)),
            inner.clone().prop_map(UntypedRegex::rep0),
            inner.clone().prop_map(UntypedRegex::rep1),
            inner.clone().prop_map(UntypedRegex::optional),
            inner.prop_map(UntypedRegex::keep),
        ]
    })
}
