mod common;

use common::gen;
use proptest::prelude::*;
use timed_learn_core::reset::{normal_form, reset_trace, syntactic_reset};
use timed_learn_core::transform::{canonicalize, eliminate_bad_states_offline, is_strict};
use timed_learn_core::{bounded_oracle_equal, equivalent, isomorphic, Automaton, Rational, Region, Side, Verdict};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        ..ProptestConfig::default()
    }
}

/// Every state visited holds a clock value inside its region.
fn respects_regions(acc: &Automaton, u: &timed_learn_core::TimedWord) -> bool {
    let run = acc.run(u).unwrap();
    let inside = |s, v: &Rational| acc.region(s).is_some_and(|g| g.contains(v, acc.k()));
    run.steps.iter().all(|st| inside(&st.state, &st.clock)) && inside(&run.final_state, &run.final_clock)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normal_forms_follow_the_same_transitions(a in gen::automaton(), u in gen::word()) {
        let a = a.complete_with_sink().unwrap();
        let trace = reset_trace(&a, &u).unwrap();
        let nf = normal_form(&trace, &u).unwrap();
        prop_assert!(nf.is_half_integral());
        prop_assert_eq!(a.run(&nf).unwrap().transition_sequence(), a.run(&u).unwrap().transition_sequence());
    }

    #[test]
    fn acceptor_stages_keep_clocks_in_their_regions(a in gen::automaton(), u in gen::word()) {
        let stages = canonicalize(&a).unwrap();
        for (name, acc) in &stages.stages[1..] {
            prop_assert!(acc.is_acceptor(), "{name}");
            prop_assert!(respects_regions(acc, &u), "{name} on {u}");
        }
    }

    #[test]
    fn canonical_forms_are_strict_with_bounded_resets(a in gen::automaton(), u in gen::word()) {
        let canonical = canonicalize(&a).unwrap().result().clone();
        prop_assert!(is_strict(&canonical));
        prop_assert!(equivalent(&a, &canonical).unwrap().is_equivalent());
        let k = canonical.k();
        for g in canonical.regions().unwrap().values() {
            prop_assert!(matches!(g, Region::Point(0)) || matches!(g, Region::Open(n) if *n < k), "{g}");
        }
        let run = canonical.run(&u).unwrap();
        let reached = run.steps.iter().skip(1).map(|s| &s.clock).chain([&run.final_clock]);
        for v in reached {
            prop_assert!(*v <= Rational::from_integer(k.into()));
            prop_assert!(v.is_zero() || !v.is_integer());
        }
        // the canonical form realizes the syntactic reset function
        prop_assert_eq!(&run.final_clock, &syntactic_reset(&a, &u).unwrap());
    }

    #[test]
    fn eliminating_bad_states_is_idempotent(a in gen::automaton()) {
        let strict = canonicalize(&a).unwrap().stages[3].1.clone();
        let once = eliminate_bad_states_offline(&strict).unwrap();
        let twice = eliminate_bad_states_offline(&once).unwrap();
        prop_assert!(isomorphic(&once, &twice));
        prop_assert!(equivalent(&strict, &once).unwrap().is_equivalent());
    }

    #[test]
    fn equivalence_agrees_with_the_bounded_oracle(a in gen::automaton(), b in gen::automaton()) {
        let verdict = equivalent(&a, &b).unwrap();
        let oracle = bounded_oracle_equal(&a, &b, 3, 4).unwrap();
        match &verdict {
            Verdict::Equivalent => prop_assert_eq!(&oracle, &None),
            Verdict::Counterexample { word, accepted_by } => {
                let (in_a, in_b) = (a.accepts(word).unwrap(), b.accepts(word).unwrap());
                prop_assert_ne!(in_a, in_b);
                prop_assert_eq!(*accepted_by == Side::Left, in_a);
                if word.len() <= 3 && word.is_half_integral() {
                    prop_assert!(oracle.is_some());
                }
            }
        }
        if let Some(found) = oracle {
            prop_assert!(!verdict.is_equivalent());
            prop_assert_ne!(a.accepts(&found).unwrap(), b.accepts(&found).unwrap());
        }
    }

    #[test]
    fn counterexamples_against_canonical_variants_are_genuine(a in gen::automaton(), b in gen::automaton()) {
        let ca = canonicalize(&a).unwrap().result().clone();
        prop_assert!(equivalent(&ca, &a).unwrap().is_equivalent());
        if let Verdict::Counterexample { word, accepted_by } = equivalent(&ca, &b).unwrap() {
            let in_ca = ca.accepts(&word).unwrap();
            prop_assert_ne!(in_ca, b.accepts(&word).unwrap());
            prop_assert_eq!(accepted_by == Side::Left, in_ca);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn smart_learning_finds_the_canonical_form(a in gen::automaton()) {
        use timed_learn_core::learn::{learn_smart, LearnConfig};
        use timed_learn_core::teacher::SimulatedTeacher;
        let teacher = SimulatedTeacher::new(&a).unwrap();
        let learned = learn_smart(&teacher, &LearnConfig::default(), None).unwrap();
        let canonical = canonicalize(&a).unwrap().result().clone();
        prop_assert!(isomorphic(&learned.automaton, &canonical));
    }
}
