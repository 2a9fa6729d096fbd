//! One-clock deterministic timed automata: exact semantics, canonical
//! acceptors, equivalence checking, and active learning.
#![no_std]

extern crate alloc;

pub mod automaton;
pub mod equiv;
pub mod error;
pub mod learn;
pub mod rational;
pub mod region;
pub mod reset;
pub mod teacher;
pub mod transform;
pub mod word;

pub use automaton::{
    isomorphic, sigma_k, Automaton, AutomatonBuilder, ClockUpdate, Diagnostic, Run, StateId, Step,
    Transition,
};
pub use equiv::{bounded_oracle_equal, complement, equivalent, state_lang_equal, Side, Verdict};
pub use error::{AutomatonError, ParseError};
pub use rational::Rational;
pub use region::Region;
pub use word::{Letter, TimedLetter, TimedWord};
