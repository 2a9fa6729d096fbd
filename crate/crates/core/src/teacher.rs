//! Teachers answering membership, equivalence and (optionally) reset queries.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use spin::Mutex;
use thiserror::Error;

use crate::automaton::{Automaton, Dense};
use crate::equiv::{equivalent, Verdict};
use crate::error::AutomatonError;
use crate::rational::Rational;
use crate::reset::SyntacticReset;
use crate::word::{Letter, TimedWord};

#[derive(Debug, Error)]
pub enum TeacherError {
    #[error("teacher cannot answer reset queries")]
    Unsupported,
    #[error("word uses letters outside the alphabet: {0}")]
    ForeignWord(TimedWord),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("{0}")]
    Other(String),
}

/// Number of queries of each kind answered so far.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct QueryCounts {
    pub membership: u64,
    pub equivalence: u64,
    pub reset: u64,
}

/// Shared query tally; a spin lock rather than 64-bit atomics, which not every
/// target has.
#[derive(Default, Debug)]
pub struct QueryCounter(Mutex<QueryCounts>);

impl QueryCounter {
    pub fn membership(&self) {
        self.0.lock().membership += 1;
    }

    pub fn equivalence(&self) {
        self.0.lock().equivalence += 1;
    }

    pub fn reset(&self) {
        self.0.lock().reset += 1;
    }

    pub fn snapshot(&self) -> QueryCounts {
        *self.0.lock()
    }
}

pub trait Teacher {
    fn alphabet(&self) -> &[Letter];

    fn member(&self, w: &TimedWord) -> Result<bool, TeacherError>;

    fn equivalence(&self, candidate: &Automaton) -> Result<Verdict, TeacherError>;

    /// The syntactic reset value of `u`; only smart teachers know it.
    fn reset(&self, _u: &TimedWord) -> Result<Rational, TeacherError> {
        Err(TeacherError::Unsupported)
    }

    fn counts(&self) -> QueryCounts;
}

impl<T: Teacher + ?Sized> Teacher for &T {
    fn alphabet(&self) -> &[Letter] {
        (**self).alphabet()
    }
    fn member(&self, w: &TimedWord) -> Result<bool, TeacherError> {
        (**self).member(w)
    }
    fn equivalence(&self, candidate: &Automaton) -> Result<Verdict, TeacherError> {
        (**self).equivalence(candidate)
    }
    fn reset(&self, u: &TimedWord) -> Result<Rational, TeacherError> {
        (**self).reset(u)
    }
    fn counts(&self) -> QueryCounts {
        (**self).counts()
    }
}

/// A teacher backed by a hidden target automaton.
pub struct SimulatedTeacher {
    target: Automaton,
    dense: Dense,
    resets: SyntacticReset,
    cache: Mutex<BTreeMap<TimedWord, bool>>,
    counter: QueryCounter,
}

impl SimulatedTeacher {
    pub fn new(target: &Automaton) -> Result<Self, AutomatonError> {
        let complete = target.complete_with_sink()?;
        complete.require_valid()?;
        let dense = Dense::from_automaton(&complete)?;
        let resets = SyntacticReset::new(&complete)?;
        Ok(SimulatedTeacher {
            target: complete,
            dense,
            resets,
            cache: Mutex::new(BTreeMap::new()),
            counter: QueryCounter::default(),
        })
    }

    pub fn target(&self) -> &Automaton {
        &self.target
    }

    /// The automaton realizing the syntactic reset function of the target language.
    pub fn reset_automaton(&self) -> &Automaton {
        self.resets.automaton()
    }
}

impl Teacher for SimulatedTeacher {
    fn alphabet(&self) -> &[Letter] {
        self.target.alphabet()
    }

    fn member(&self, w: &TimedWord) -> Result<bool, TeacherError> {
        self.counter.membership();
        if let Some(&hit) = self.cache.lock().get(w) {
            return Ok(hit);
        }
        let answer = self
            .dense
            .run_final(w)
            .map(|(q, _)| self.dense.accepting[q])
            .ok_or_else(|| TeacherError::ForeignWord(w.clone()))?;
        self.cache.lock().insert(w.clone(), answer);
        Ok(answer)
    }

    fn equivalence(&self, candidate: &Automaton) -> Result<Verdict, TeacherError> {
        self.counter.equivalence();
        Ok(equivalent(candidate, &self.target)?)
    }

    fn reset(&self, u: &TimedWord) -> Result<Rational, TeacherError> {
        self.counter.reset();
        Ok(self.resets.value(u)?)
    }

    fn counts(&self) -> QueryCounts {
        self.counter.snapshot()
    }
}

/// Hands out queued counterexamples before deferring to the inner teacher.
pub struct ScriptedTeacher<T> {
    inner: T,
    script: Mutex<VecDeque<TimedWord>>,
    counter: QueryCounter,
}

impl<T: Teacher> ScriptedTeacher<T> {
    pub fn new(inner: T, counterexamples: impl IntoIterator<Item = TimedWord>) -> Self {
        ScriptedTeacher {
            inner,
            script: Mutex::new(counterexamples.into_iter().collect()),
            counter: QueryCounter::default(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.script.lock().len()
    }
}

impl<T: Teacher> Teacher for ScriptedTeacher<T> {
    fn alphabet(&self) -> &[Letter] {
        self.inner.alphabet()
    }

    fn member(&self, w: &TimedWord) -> Result<bool, TeacherError> {
        self.counter.membership();
        self.inner.member(w)
    }

    fn equivalence(&self, candidate: &Automaton) -> Result<Verdict, TeacherError> {
        self.counter.equivalence();
        let next = self.script.lock().pop_front();
        match next {
            Some(w) => {
                let side = if candidate.accepts(&w)? {
                    crate::equiv::Side::Left
                } else {
                    crate::equiv::Side::Right
                };
                Ok(Verdict::Counterexample { word: w, accepted_by: side })
            }
            None => self.inner.equivalence(candidate),
        }
    }

    fn reset(&self, u: &TimedWord) -> Result<Rational, TeacherError> {
        self.counter.reset();
        self.inner.reset(u)
    }

    fn counts(&self) -> QueryCounts {
        self.counter.snapshot()
    }
}

type MemberFn = Box<dyn Fn(&TimedWord) -> bool + Send + Sync>;
type EquivFn = Box<dyn Fn(&Automaton, u64) -> Option<TimedWord> + Send + Sync>;
type ResetFn = Box<dyn Fn(&TimedWord) -> Rational + Send + Sync>;

/// A teacher defined by closures, for languages without an automaton.
pub struct FnTeacher {
    alphabet: Vec<Letter>,
    member: MemberFn,
    equivalence: EquivFn,
    reset: Option<ResetFn>,
    counter: QueryCounter,
}

impl FnTeacher {
    /// `equivalence` gets the candidate and the number of earlier equivalence queries,
    /// and returns a counterexample or `None` to accept.
    pub fn new(
        alphabet: Vec<Letter>,
        member: impl Fn(&TimedWord) -> bool + Send + Sync + 'static,
        equivalence: impl Fn(&Automaton, u64) -> Option<TimedWord> + Send + Sync + 'static,
    ) -> Self {
        FnTeacher {
            alphabet,
            member: Box::new(member),
            equivalence: Box::new(equivalence),
            reset: None,
            counter: QueryCounter::default(),
        }
    }

    pub fn with_reset(mut self, reset: impl Fn(&TimedWord) -> Rational + Send + Sync + 'static) -> Self {
        self.reset = Some(Box::new(reset));
        self
    }
}

impl Teacher for FnTeacher {
    fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    fn member(&self, w: &TimedWord) -> Result<bool, TeacherError> {
        self.counter.membership();
        Ok((self.member)(w))
    }

    fn equivalence(&self, candidate: &Automaton) -> Result<Verdict, TeacherError> {
        let asked = self.counter.snapshot().equivalence;
        self.counter.equivalence();
        Ok(match (self.equivalence)(candidate, asked) {
            None => Verdict::Equivalent,
            Some(word) => {
                let accepted_by = if candidate.accepts(&word)? {
                    crate::equiv::Side::Left
                } else {
                    crate::equiv::Side::Right
                };
                Verdict::Counterexample { word, accepted_by }
            }
        })
    }

    fn reset(&self, u: &TimedWord) -> Result<Rational, TeacherError> {
        self.counter.reset();
        match &self.reset {
            Some(f) => Ok(f(u)),
            None => Err(TeacherError::Unsupported),
        }
    }

    fn counts(&self) -> QueryCounts {
        self.counter.snapshot()
    }
}
