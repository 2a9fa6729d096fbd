use alloc::collections::{BTreeMap, BinaryHeap, VecDeque};
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::equiv::Verdict;
use crate::reset::enumerate_normal_forms;
use crate::teacher::{Teacher, TeacherError};
use crate::word::TimedWord;

use super::{Action, HiWord, LearnConfig, LearnError, LearnEvent, Learned, LearnerStats, ObservationTable, Observer};

/// Order in which pool branches are advanced.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Schedule {
    /// Fewest kept clocks first, then fewest steps. Branches that rarely keep
    /// the clock are cheap to refute, and the syntactic branch keeps it rarely.
    #[default]
    CheapestFirst,
    /// Generation by generation, every branch one step at a time.
    LockStep,
}

/// How reset values of new cells are chosen.
#[derive(Clone, Copy, Default)]
pub enum Decisions<'a> {
    /// Branch on every admissible choice.
    #[default]
    Enumerate,
    /// Follow one choice per word: `true` keeps the clock running.
    Follow(&'a dyn Fn(&TimedWord) -> Result<bool, TeacherError>),
}

/// Event held back until the branch has decided every reset value.
#[derive(Clone)]
enum Announce {
    Processed(Action),
    Refined(TimedWord),
}

#[derive(Clone)]
struct Branch {
    table: ObservationTable,
    pending: VecDeque<HiWord>,
    announce: Option<Announce>,
    keeps: u32,
    steps: u32,
}

enum Pool {
    Cheapest {
        heap: BinaryHeap<Reverse<(u32, u32, u64)>>,
        store: BTreeMap<u64, Branch>,
        seq: u64,
    },
    Fifo(VecDeque<Branch>),
}

impl Pool {
    fn new(schedule: Schedule) -> Self {
        match schedule {
            Schedule::CheapestFirst => Pool::Cheapest {
                heap: BinaryHeap::new(),
                store: BTreeMap::new(),
                seq: 0,
            },
            Schedule::LockStep => Pool::Fifo(VecDeque::new()),
        }
    }

    fn push(&mut self, b: Branch) {
        match self {
            Pool::Cheapest { heap, store, seq } => {
                heap.push(Reverse((b.keeps, b.steps, *seq)));
                store.insert(*seq, b);
                *seq += 1;
            }
            Pool::Fifo(q) => q.push_back(b),
        }
    }

    fn pop(&mut self) -> Option<Branch> {
        match self {
            Pool::Cheapest { heap, store, .. } => {
                let Reverse((_, _, id)) = heap.pop()?;
                store.remove(&id)
            }
            Pool::Fifo(q) => q.pop_front(),
        }
    }

    fn len(&self) -> usize {
        match self {
            Pool::Cheapest { store, .. } => store.len(),
            Pool::Fifo(q) => q.len(),
        }
    }
}

fn fill_membership<T: Teacher + ?Sized>(
    table: &mut ObservationTable,
    teacher: &T,
) -> Result<(), LearnError> {
    for w in table.missing_membership() {
        let bit = teacher.member(&table.to_timed(&w))?;
        table.set_member(w, bit);
    }
    Ok(())
}

/// Reset values admissible for `w` given its prefix: 0, or the prefix value plus
/// the delay unless that is a positive integer.
fn choices(table: &ObservationTable, w: &HiWord) -> (u32, Option<u32>) {
    let (prefix, last) = w.split_at(w.len() - 1);
    let base = table.reset(prefix).expect("prefixes decided first");
    let kept = base + last[0].halves;
    (0, (kept % 2 == 1).then_some(kept))
}

/// Learns a strict acceptor from membership and equivalence queries alone, guessing
/// reset values over a pool of tables.
pub fn learn_normal<T: Teacher + ?Sized>(
    teacher: &T,
    config: &LearnConfig,
    schedule: Schedule,
    decisions: Decisions<'_>,
    mut observer: Option<Observer<'_>>,
) -> Result<Learned, LearnError> {
    let before = teacher.counts();
    let mut stats = LearnerStats::default();
    let mut pool = Pool::new(schedule);
    let mut table = ObservationTable::new(teacher.alphabet().to_vec());
    fill_membership(&mut table, teacher)?;
    if let Some(obs) = observer.as_mut() {
        obs(&LearnEvent::Started { table: &table });
    }
    pool.push(Branch {
        pending: table.missing_resets().into(),
        table,
        announce: None,
        keeps: 0,
        steps: 0,
    });
    let mut dropped_for_k = false;
    loop {
        stats.pool_peak = stats.pool_peak.max(pool.len() as u64);
        if pool.len() as u64 > config.max_pool {
            return Err(LearnError::CapExceeded {
                what: "pool",
                limit: config.max_pool,
            });
        }
        let Some(mut branch) = pool.pop() else {
            return Err(if dropped_for_k {
                LearnError::CapExceeded {
                    what: "K",
                    limit: config.max_k as u64,
                }
            } else {
                LearnError::Exhausted
            });
        };

        if let Some(w) = branch.pending.pop_front() {
            let (reset, keep) = choices(&branch.table, &w);
            let picks: Vec<u32> = match decisions {
                Decisions::Enumerate => core::iter::once(reset).chain(keep).collect(),
                Decisions::Follow(f) => {
                    if f(&branch.table.to_timed(&w))? {
                        match keep {
                            Some(v) => Vec::from([v]),
                            None if choices_keep_is_zero(&branch.table, &w) => Vec::from([0]),
                            None => {
                                return Err(LearnError::Precondition(format!(
                                    "keeping the clock after {} gives a positive integer",
                                    branch.table.to_timed(&w)
                                )))
                            }
                        }
                    } else {
                        Vec::from([reset])
                    }
                }
            };
            let last = picks.len() - 1;
            for (i, v) in picks.iter().enumerate() {
                let mut child = if i == last {
                    // move the parent into the final child instead of cloning it
                    core::mem::replace(
                        &mut branch,
                        Branch {
                            table: ObservationTable::new(Vec::new()),
                            pending: VecDeque::new(),
                            announce: None,
                            keeps: 0,
                            steps: 0,
                        },
                    )
                } else {
                    branch.clone()
                };
                child.table.set_reset(w.clone(), *v);
                child.keeps += u32::from(*v != 0);
                pool.push(child);
            }
            continue;
        }

        if let Some(announce) = branch.announce.take() {
            if let Some(obs) = observer.as_mut() {
                match &announce {
                    Announce::Processed(action) => obs(&LearnEvent::Processed {
                        action,
                        table: &branch.table,
                    }),
                    Announce::Refined(word) => obs(&LearnEvent::Refined {
                        counterexample: word,
                        table: &branch.table,
                    }),
                }
            }
        }

        stats.tables_processed += 1;
        if stats.tables_processed > config.max_tables {
            return Err(LearnError::CapExceeded {
                what: "tables",
                limit: config.max_tables,
            });
        }
        branch.steps += 1;
        let Ok(next) = branch.table.next_action() else {
            continue;
        };
        match next {
            Some(action) => {
                branch.table.apply(&action);
                if branch.table.k() > config.max_k {
                    dropped_for_k = true;
                    continue;
                }
                fill_membership(&mut branch.table, teacher)?;
                branch.pending = branch.table.missing_resets().into();
                branch.announce = Some(Announce::Processed(action));
                pool.push(branch);
            }
            None => {
                let Ok(conjecture) = branch.table.conjecture() else {
                    continue;
                };
                if let Some(obs) = observer.as_mut() {
                    obs(&LearnEvent::Conjectured {
                        table: &branch.table,
                        conjecture: &conjecture,
                    });
                }
                match teacher.equivalence(&conjecture)? {
                    Verdict::Equivalent => {
                        let stats = stats.with_queries(before, teacher.counts());
                        return Ok(Learned {
                            automaton: conjecture,
                            table: branch.table,
                            stats,
                        });
                    }
                    Verdict::Counterexample { word, .. } => {
                        let mut added = 0;
                        for form in enumerate_normal_forms(&word) {
                            let hi = branch.table.from_timed(&form).ok_or_else(|| {
                                LearnError::Precondition(format!(
                                    "normal form {form} leaves the alphabet"
                                ))
                            })?;
                            added += branch.table.add_with_prefixes(&hi);
                        }
                        // nothing new: this branch would repeat the same conjecture forever
                        if added == 0 {
                            continue;
                        }
                        fill_membership(&mut branch.table, teacher)?;
                        branch.pending = branch.table.missing_resets().into();
                        branch.announce = Some(Announce::Refined(word));
                        pool.push(branch);
                    }
                }
            }
        }
    }
}

fn choices_keep_is_zero(table: &ObservationTable, w: &HiWord) -> bool {
    let (prefix, last) = w.split_at(w.len() - 1);
    table.reset(prefix) == Some(0) && last[0].halves == 0
}
