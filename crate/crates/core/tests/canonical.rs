mod common;

use common::*;
use timed_learn_core::reset::{hi, normal_form, syntactic_reset, ResetTrace};
use timed_learn_core::transform::{canonicalize, is_strict, STAGES};
use timed_learn_core::{bounded_oracle_equal, equivalent, isomorphic, ClockUpdate, Rational, Region, Side, Verdict};

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn minimality_example_needs_six_states() {
    let top = min_top();
    let stages = canonicalize(&top).unwrap();
    let names: Vec<&str> = stages.stages.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, STAGES);
    let canonical = stages.result();
    assert_eq!(canonical.states().len(), 6);
    assert!(is_strict(canonical));
    let a_at_one = canonical
        .transitions()
        .iter()
        .find(|t| &t.source == canonical.initial() && t.letter.as_str() == "a" && t.guard == Region::Point(1))
        .expect("a at x=1 from the start");
    assert_eq!(a_at_one.update, ClockUpdate::Reset);
    assert!(equivalent(&top, canonical).unwrap().is_equivalent());
    // the non-strict input is smaller
    let input_states = top.complete_with_sink().unwrap().states().len();
    assert_eq!(input_states, 5);
    assert!(input_states < canonical.states().len());
}

#[test]
fn canonicalize_is_idempotent_on_examples() {
    for a in [min_top(), two_a(), xa_yb(), a_s(), a_q()] {
        let once = canonicalize(&a).unwrap().result().clone();
        let twice = canonicalize(&once).unwrap().result().clone();
        assert!(isomorphic(&once, &twice));
    }
}

#[test]
fn equivalent_languages_share_the_canonical_form() {
    let from_target = canonicalize(&two_a()).unwrap().result().clone();
    let from_conjecture = canonicalize(&a_t2()).unwrap().result().clone();
    assert!(isomorphic(&from_target, &from_conjecture));
    assert!(isomorphic(&from_target, &a_t2()));
}

#[test]
fn half_integral_words_decide_equivalence() {
    let (s, q) = (a_s(), a_q());
    assert_eq!(bounded_oracle_equal(&s, &q, 2, 2).unwrap(), None);
    let quarter = bounded_oracle_equal(&s, &q, 2, 4).unwrap().expect("quarter grid separates");
    assert_ne!(s.accepts(&quarter).unwrap(), q.accepts(&quarter).unwrap());
    match equivalent(&s, &q).unwrap() {
        Verdict::Counterexample { word, accepted_by } => {
            let (in_s, in_q) = (s.accepts(&word).unwrap(), q.accepts(&word).unwrap());
            assert_ne!(in_s, in_q);
            assert_eq!(accepted_by == Side::Left, in_s);
        }
        Verdict::Equivalent => panic!("A_s and A_q differ"),
    }
}

#[test]
fn hi_values() {
    assert_eq!(hi(&r("2.7")), r("5/2"));
    assert_eq!(hi(&r("1.2")), r("3/2"));
    assert_eq!(hi(&r("2")), r("2"));
    assert_eq!(hi(&r("0")), r("0"));
}

#[test]
fn normal_form_under_both_traces() {
    let u = w("0.3:a 1.9:b");
    let reset = ResetTrace::new(vec![r("0"), r("0"), r("0")], &u).unwrap();
    assert_eq!(normal_form(&reset, &u).unwrap(), w("1/2:a 3/2:b"));
    let keep = ResetTrace::new(vec![r("0"), r("0.3"), r("0")], &u).unwrap();
    assert_eq!(normal_form(&keep, &u).unwrap(), w("1/2:a 2:b"));
    // a trace that neither resets nor adds the delay is rejected
    assert!(ResetTrace::new(vec![r("0"), r("0.2"), r("0")], &u).is_err());
}

#[test]
fn syntactic_reset_of_the_xa_yb_language() {
    let a = xa_yb();
    assert_eq!(syntactic_reset(&a, &w("0.3:a")).unwrap(), r("3/10"));
    for u in ["0.3:a 1.7:b", "1/2:a 3/2:b", "0.9:a 1.1:b"] {
        assert!(a.accepts(&w(u)).unwrap());
        assert_eq!(syntactic_reset(&a, &w(u)).unwrap(), r("0"), "{u}");
    }
    assert_eq!(syntactic_reset(&a, &w("")).unwrap(), r("0"));
    // outside (0,1) the residual is empty, so the clock can be reset
    assert_eq!(syntactic_reset(&a, &w("1.5:a")).unwrap(), r("0"));
}
