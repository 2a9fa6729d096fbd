#![allow(dead_code)]

use timed_learn_core::{Automaton, AutomatonBuilder, ClockUpdate::*, Region::*, TimedWord};

pub fn w(s: &str) -> TimedWord {
    s.parse().expect("word literal")
}

/// `a` strictly inside (0,1) without reset, then `b` within less than a unit of the start.
pub fn a_s() -> Automaton {
    AutomatonBuilder::new(1, ["a", "b"])
        .edge("0", "1", "a", Open(0), Keep)
        .edge("1", "2", "b", Open(0), Reset)
        .accepting("2")
        .build()
        .unwrap()
}

/// Same half-integral words as `a_s`, but `b` must come immediately.
pub fn a_q() -> Automaton {
    AutomatonBuilder::new(1, ["a", "b"])
        .edge("0", "1", "a", Open(0), Reset)
        .edge("1", "2", "b", Point(0), Reset)
        .accepting("2")
        .build()
        .unwrap()
}

/// Top automaton of the minimality example: not strict, 4 states plus the sink.
pub fn min_top() -> Automaton {
    AutomatonBuilder::new(2, ["a", "b", "c", "d"])
        .edge("q0", "q1", "a", Point(1), Keep)
        .edge("q1", "q2", "b", Open(1), Keep)
        .edge("q2", "f", "c", Point(2), Keep)
        .edge("q0", "q2", "d", Open(1), Keep)
        .accepting("f")
        .build()
        .unwrap()
}

/// `(x·a)(y·b)` with `0 < x < 1` and `x + y = 2`.
pub fn xa_yb() -> Automaton {
    AutomatonBuilder::new(2, ["a", "b"])
        .edge("q0", "q1", "a", Open(0), Keep)
        .edge("q1", "q2", "b", Point(2), Keep)
        .accepting("q2")
        .build()
        .unwrap()
}

/// `(x·a)(y·a)` with `0 < x < 1` and `x + y = 2`, the learning example.
pub fn two_a() -> Automaton {
    AutomatonBuilder::new(2, ["a"])
        .edge("q0", "q1", "a", Open(0), Keep)
        .edge("q1", "q2", "a", Point(2), Keep)
        .accepting("q2")
        .build()
        .unwrap()
}

const ALL2: [timed_learn_core::Region; 6] = [Point(0), Open(0), Point(1), Open(1), Point(2), AboveK];

/// Final conjecture of the smart run: keep on the first `a`, reset at `x=2`.
pub fn a_t2() -> Automaton {
    AutomatonBuilder::new(2, ["a"])
        .region("eps", Point(0))
        .region("half", Open(0))
        .region("acc", Point(0))
        .region("sink", Point(0))
        .accepting("acc")
        .edge("eps", "half", "a", Open(0), Keep)
        .edges("eps", "sink", "a", [Point(0), Point(1), Open(1), Point(2), AboveK], Reset)
        .edge("half", "acc", "a", Point(2), Reset)
        .edges("half", "sink", "a", [Open(0), Point(1), Open(1), AboveK], Reset)
        .edges("acc", "sink", "a", ALL2, Reset)
        .edges("sink", "sink", "a", ALL2, Reset)
        .build()
        .unwrap()
}

/// First wrong conjecture of the all-reset branch, constant 1.
pub fn a_t0_second() -> Automaton {
    AutomatonBuilder::new(1, ["a"])
        .region("eps", Point(0))
        .region("half", Point(0))
        .region("acc", Point(0))
        .accepting("acc")
        .edge("eps", "half", "a", Open(0), Reset)
        .edges("eps", "eps", "a", [Point(0), Point(1), AboveK], Reset)
        .edges("half", "eps", "a", [Point(0), Open(0), Point(1)], Reset)
        .edge("half", "acc", "a", AboveK, Reset)
        .edges("acc", "eps", "a", [Point(0), Open(0), Point(1), AboveK], Reset)
        .build()
        .unwrap()
}

/// Second wrong conjecture of the all-reset branch, constant 2.
pub fn a_t0_third() -> Automaton {
    AutomatonBuilder::new(2, ["a"])
        .region("eps", Point(0))
        .region("half", Point(0))
        .region("acc", Point(0))
        .region("sink", Point(0))
        .accepting("acc")
        .edge("eps", "half", "a", Open(0), Reset)
        .edges("eps", "sink", "a", [Point(0), Point(1), Open(1), Point(2), AboveK], Reset)
        .edge("half", "acc", "a", Open(1), Reset)
        .edges("half", "sink", "a", [Point(0), Open(0), Point(1), Point(2), AboveK], Reset)
        .edges("acc", "sink", "a", ALL2, Reset)
        .edges("sink", "sink", "a", ALL2, Reset)
        .build()
        .unwrap()
}

/// Conjecture of `T_1` at constant 2: keep on `a` in (0,1), accept at `x=2`.
pub fn a_t1() -> Automaton {
    AutomatonBuilder::new(2, ["a"])
        .region("eps", Point(0))
        .region("half", Open(0))
        .region("acc", Point(0))
        .accepting("acc")
        .edge("eps", "half", "a", Open(0), Keep)
        .edges("eps", "eps", "a", [Point(0), Point(1), Open(1), Point(2), AboveK], Reset)
        .edge("half", "acc", "a", Point(2), Reset)
        .edges("half", "eps", "a", [Open(0), Point(1), Open(1), AboveK], Reset)
        .edges("acc", "eps", "a", ALL2, Reset)
        .build()
        .unwrap()
}

/// Owned copy of a learning event.
#[derive(Clone, Debug)]
pub enum Snap {
    Started(timed_learn_core::learn::ObservationTable),
    Processed(timed_learn_core::learn::Action, timed_learn_core::learn::ObservationTable),
    Conjectured(timed_learn_core::learn::ObservationTable, Automaton),
    Refined(TimedWord, timed_learn_core::learn::ObservationTable),
}

pub fn snap(e: &timed_learn_core::learn::LearnEvent<'_>) -> Snap {
    use timed_learn_core::learn::LearnEvent::*;
    match e {
        Started { table } => Snap::Started((*table).clone()),
        Processed { action, table } => Snap::Processed((*action).clone(), (*table).clone()),
        Conjectured { table, conjecture } => Snap::Conjectured((*table).clone(), (*conjecture).clone()),
        Refined { counterexample, table } => Snap::Refined((*counterexample).clone(), (*table).clone()),
    }
}

pub mod gen;
