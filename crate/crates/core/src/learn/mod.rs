//! Observation tables and the two learning loops.

mod normal;
mod smart;
mod table;

use alloc::string::String;
use thiserror::Error;

use crate::automaton::Automaton;
use crate::error::AutomatonError;
use crate::teacher::{QueryCounts, Teacher, TeacherError};
use crate::transform;
use crate::word::TimedWord;

pub use normal::{learn_normal, Decisions, Schedule};
pub use smart::{learn_smart, process_step, refine_smart};
pub use table::{Action, HiSym, HiWord, Inconsistency, ObservationTable, Row};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error(transparent)]
    Teacher(#[from] TeacherError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("cap exceeded: {what} went past {limit}")]
    CapExceeded { what: &'static str, limit: u64 },
    #[error("counterexample {0} added nothing to the table")]
    NoProgress(TimedWord),
    #[error("every branch of the pool was pruned")]
    Exhausted,
    #[error("table precondition violated: {0}")]
    Precondition(String),
}

/// Iteration caps; divergent targets hit one of them instead of looping forever.
#[derive(Clone, Debug)]
pub struct LearnConfig {
    pub max_pool: u64,
    pub max_tables: u64,
    pub max_k: u32,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            max_pool: 100_000,
            max_tables: 1_000_000,
            max_k: 16,
        }
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct LearnerStats {
    pub membership_queries: u64,
    pub equivalence_queries: u64,
    pub tables_processed: u64,
    pub pool_peak: u64,
}

impl LearnerStats {
    fn with_queries(mut self, before: QueryCounts, after: QueryCounts) -> Self {
        self.membership_queries = after.membership - before.membership;
        self.equivalence_queries = after.equivalence - before.equivalence;
        self
    }
}

/// Progress notifications, for tracing and golden tests.
#[derive(Debug)]
pub enum LearnEvent<'a> {
    /// The initial table with its membership bits. In normal mode the reset
    /// values are still undecided; later events carry fully decided tables.
    Started { table: &'a ObservationTable },
    Processed {
        action: &'a Action,
        table: &'a ObservationTable,
    },
    Conjectured {
        table: &'a ObservationTable,
        conjecture: &'a Automaton,
    },
    Refined {
        counterexample: &'a TimedWord,
        table: &'a ObservationTable,
    },
}

pub type Observer<'o> = &'o mut dyn FnMut(&LearnEvent<'_>);

#[derive(Clone, Debug)]
pub struct Learned {
    pub automaton: Automaton,
    pub table: ObservationTable,
    pub stats: LearnerStats,
}

/// Turns an accepted strict acceptor into the canonical one using equivalence queries only.
pub fn postprocess_to_canonical<T: Teacher + ?Sized>(
    a: &Automaton,
    teacher: &T,
) -> Result<Automaton, LearnError> {
    let ask = |cand: &Automaton| -> Result<bool, LearnError> {
        Ok(teacher.equivalence(cand)?.is_equivalent())
    };
    let rl = transform::eliminate_bad_states(a, ask)?;
    let merged = transform::merge_states_validated(&rl, ask)?;
    Ok(transform::reduce_constant(&merged)?)
}
