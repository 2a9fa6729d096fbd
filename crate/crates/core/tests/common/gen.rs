//! Proptest strategies for small random automata and words.

use proptest::prelude::*;
use timed_learn_core::{Automaton, AutomatonBuilder, ClockUpdate, Letter, Rational, Region, TimedWord};

const LETTERS: [&str; 2] = ["a", "b"];

/// Slot contents: `None` is a missing transition, else (target, reset?).
type Slot = Option<(usize, bool)>;

/// Random deterministic automata with up to four states over `{a, b}`, `K ≤ 2`.
pub fn automaton() -> impl Strategy<Value = Automaton> {
    (1usize..=4, 0u32..=2).prop_flat_map(|(n, k)| {
        let slots = n * LETTERS.len() * Region::count(k);
        let slot = prop_oneof![
            1 => Just(None),
            4 => (0..n, any::<bool>()).prop_map(Some),
        ];
        (
            Just((n, k)),
            proptest::collection::vec(slot, slots),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|((n, k), slots, accepting)| build(n, k, &slots, &accepting))
    })
}

fn build(n: usize, k: u32, slots: &[Slot], accepting: &[bool]) -> Automaton {
    let name = |i: usize| format!("s{i}");
    let mut b = AutomatonBuilder::new(k, LETTERS);
    for (i, acc) in accepting.iter().enumerate().take(n) {
        b = b.state(&name(i));
        if *acc {
            b = b.accepting(&name(i));
        }
    }
    let regions = Region::all(k);
    let mut it = slots.iter();
    for q in 0..n {
        for letter in LETTERS {
            for g in &regions {
                if let Some(Some((t, reset))) = it.next() {
                    let update = if *reset { ClockUpdate::Reset } else { ClockUpdate::Keep };
                    b = b.edge(&name(q), &name(*t), letter, *g, update);
                }
            }
        }
    }
    b.build().expect("generated automata are well formed")
}

/// Timed words of length up to four with delays `n/d` below 4.
pub fn word() -> impl Strategy<Value = TimedWord> {
    let delay = prop_oneof![Just(1u64), Just(2), Just(3), Just(4), Just(10)]
        .prop_flat_map(|d| (0..4 * d, Just(d)))
        .prop_map(|(n, d)| Rational::new(n, d));
    let letter = (0..LETTERS.len()).prop_map(|i| Letter::new(LETTERS[i]).unwrap());
    proptest::collection::vec((delay, letter), 0..=4).prop_map(TimedWord::from_pairs)
}
