mod common;

use common::*;
use proptest::prelude::*;
use tyre::group::{build_nfa, merge_states, nfa_to_machine};
use tyre::literal::{lower, parse_literal, shape};
use tyre::runtime::{parse_prefix, Executor};
use tyre::{compile, validate_machine, TypedRegex, UntypedRegex, Value};

fn leaves(re: &TypedRegex) -> usize {
    use tyre::regex::Node::*;
    match re.node() {
        Empty => 0,
        MatchChar(_) => 1,
        Seq(a, b) | Alt(a, b) => leaves(a) + leaves(b),
        Rep(a) | Conv(a, _) | Group(a) => leaves(a),
    }
}

#[test]
fn oracle_basics() {
    let re = UntypedRegex::concat(
        UntypedRegex::rep0(UntypedRegex::Exactly('a')),
        UntypedRegex::Exactly('b'),
    );
    assert!(oracle_match(&re, "aab"));
    assert!(oracle_match(&re, "b"));
    assert!(!oracle_match(&re, "aa"));
    let nested = UntypedRegex::rep0(UntypedRegex::rep0(UntypedRegex::optional(
        UntypedRegex::Exactly('a'),
    )));
    assert!(oracle_match(&nested, ""));
    assert!(oracle_match(&nested, "aaa"));
    assert_eq!(words(2).len(), 13);
    assert_eq!(enumerate(1).len(), 3);
    assert_eq!(enumerate(2).len(), 3 + 9 + 18);
}

#[test]
fn shallow_regexes_agree_with_oracle() {
    let ws = words(4);
    for re in enumerate(3) {
        let typed = lower(&re);
        let m = compile(&typed);
        assert!(validate_machine(&m).is_empty(), "{re}");
        let expected = shape(&re);
        for w in &ws {
            let got = Executor::checked(&m).run_full(w).unwrap();
            assert_eq!(got.is_some(), oracle_match(&re, w), "{re} on {w:?}");
            if let Some(v) = got {
                assert!(v.conforms(&expected), "{re} on {w:?}: {v} !: {expected}");
            }
        }
    }
}

#[test]
fn time_literal_parses() {
    let re = parse_literal("(([01][0-9])!|([2][0-3])!):([0-5][0-9])!").unwrap();
    let m = compile(&lower(&re));
    let v = tyre::runtime::run_full(&m, "21:05").unwrap();
    assert!(v.conforms(&shape(&re)));
    assert_eq!(v.to_string(), "(Right ('2', '1'), ('0', '5'))");
}

#[test]
fn kept_alternation_with_empty_list_arm() {
    let re = parse_literal("((([a-z])+)!)|(HJ)").unwrap();
    let m = compile(&lower(&re));
    assert_eq!(tyre::runtime::run_full(&m, "HJ"), Some(Value::empty_list()));
    assert_eq!(
        tyre::runtime::run_full(&m, "ab"),
        Some(Value::list([Value::Char('a'), Value::Char('b')]))
    );
    // Both arms match; the left one has priority.
    let re = parse_literal("((([a-z])+)!)|(hj)").unwrap();
    let m = compile(&lower(&re));
    assert_eq!(
        tyre::runtime::run_full(&m, "hj"),
        Some(Value::list([Value::Char('h'), Value::Char('j')]))
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn compiled_machines_match_oracle(re in arb_regex(4)) {
        let m = compile(&lower(&re));
        prop_assert!(validate_machine(&m).is_empty());
        let expected = shape(&re);
        for w in words(6) {
            let mut ex = Executor::checked(&m);
            let got = ex.run_full(&w).unwrap();
            prop_assert_eq!(got.is_some(), oracle_match(&re, &w), "{} on {:?}", re, w);
            prop_assert!(ex.max_live() <= m.state_count() + 1);
            if let Some(v) = got {
                prop_assert!(v.conforms(&expected));
            }
        }
    }

    #[test]
    fn group_machines_match_oracle(re in arb_regex(4)) {
        let typed = lower(&re);
        let plain = build_nfa(&typed);
        let merged = merge_states(plain.clone());
        prop_assert!(merged.state_count() <= plain.state_count());
        let m = nfa_to_machine(&merged);
        prop_assert!(validate_machine(&m).is_empty());
        for w in words(6) {
            let got = Executor::checked(&m).run_full(&w).unwrap();
            prop_assert_eq!(got.is_some(), oracle_match(&re, &w), "{} on {:?}", re, w);
            if let Some(v) = got {
                prop_assert_eq!(v, Value::string(w.as_str()));
            }
        }
    }

    #[test]
    fn prefixes_are_extremal(re in arb_regex(4), w in "[abc]{0,6}") {
        let m = compile(&lower(&re));
        let ends = oracle_prefixes(&re, &w);
        let (greedy, _) = parse_prefix(&m, &w, true);
        let (lazy, _) = parse_prefix(&m, &w, false);
        prop_assert_eq!(greedy.value.is_some(), !ends.is_empty());
        prop_assert_eq!(lazy.value.is_some(), !ends.is_empty());
        if greedy.value.is_some() {
            prop_assert_eq!(Some(&greedy.consumed), ends.last());
            prop_assert_eq!(Some(&lazy.consumed), ends.first());
            prop_assert!(greedy.consumed >= lazy.consumed);
        }
    }

    #[test]
    fn group_yields_consumed_text(re in arb_regex(4), w in "[abc]{0,6}") {
        let m = compile(&TypedRegex::group(lower(&re)));
        let (r, rest) = parse_prefix(&m, &w, true);
        if let Some(v) = r.value {
            let consumed: String = w.chars().take(r.consumed).collect();
            prop_assert_eq!(v, Value::string(consumed.as_str()));
            prop_assert_eq!(format!("{consumed}{rest}"), w);
        }
    }

    #[test]
    fn deep_machines_are_well_typed(re in arb_regex(5)) {
        let typed = lower(&re);
        let m = compile(&typed);
        prop_assert!(validate_machine(&m).is_empty());
        prop_assert!(m.state_count() <= 1 + leaves(&typed));
        prop_assert_eq!(m.yield_shape(), typed.shape());
    }

    #[test]
    fn execution_is_deterministic(re in arb_regex(4), w in "[abc]{0,6}") {
        let m = compile(&lower(&re));
        prop_assert_eq!(tyre::runtime::run_full(&m, &w), tyre::runtime::run_full(&m, &w));
    }

    #[test]
    fn consuming_regexes_reject_empty(re in arb_regex(4)) {
        let typed = lower(&re);
        if typed.is_consuming() {
            prop_assert!(!oracle_match(&re, ""));
        }
    }

    #[test]
    fn rendering_round_trips(re in arb_ast(4)) {
        prop_assert_eq!(parse_literal(&re.render()).unwrap(), re);
    }
}
