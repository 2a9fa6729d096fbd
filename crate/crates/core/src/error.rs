use alloc::string::String;

use thiserror::Error;

use crate::automaton::Diagnostic;

/// Failures while reading textual input (rationals, words, guards).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("invalid letter `{0}`: letters are nonempty and contain no whitespace")]
    Letter(String),
    #[error("invalid timed word token `{0}`, expected `delay:letter`")]
    WordToken(String),
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
}

/// Structural errors raised while building or transforming automata.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("region {region} is not a region for constant {k}")]
    BadRegion { region: String, k: u32 },
    #[error("automaton is not deterministic: {0}")]
    Nondeterministic(Diagnostic),
    #[error("automaton is not complete: {0}")]
    Incomplete(Diagnostic),
    #[error("automaton is not an acceptor")]
    NotAcceptor,
    #[error("acceptor invariant violated: {0}")]
    AcceptorViolation(Diagnostic),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no transition from `{state}` on `{letter}` with clock in {region}")]
    Stuck {
        state: String,
        letter: String,
        region: String,
    },
    #[error("alphabets differ")]
    AlphabetMismatch,
}
