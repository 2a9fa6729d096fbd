use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::equiv::Verdict;
use crate::rational::Rational;
use crate::reset::{normal_form, ResetTrace};
use crate::teacher::Teacher;
use crate::word::TimedWord;

use super::{Action, LearnConfig, LearnError, LearnEvent, Learned, LearnerStats, ObservationTable, Observer};

fn halves_of(value: &Rational, w: &TimedWord) -> Result<u32, LearnError> {
    value
        .as_halves()
        .and_then(|h| u32::try_from(h).ok())
        .ok_or_else(|| {
            LearnError::Precondition(format!("reset value {value} of {w} is not half-integral"))
        })
}

/// Fills empty cells with membership and reset queries.
pub(super) fn fill_smart<T: Teacher + ?Sized>(
    table: &mut ObservationTable,
    teacher: &T,
) -> Result<(), LearnError> {
    for w in table.missing_membership() {
        let bit = teacher.member(&table.to_timed(&w))?;
        table.set_member(w, bit);
    }
    let missing: Vec<_> = table
        .cell_words()
        .into_iter()
        .filter(|w| table.reset(w).is_none())
        .collect();
    for w in missing {
        let timed = table.to_timed(&w);
        let r = teacher.reset(&timed)?;
        table.set_reset(w, halves_of(&r, &timed)?);
    }
    Ok(())
}

/// Applies the next Process action and fills the new cells.
pub fn process_step<T: Teacher + ?Sized>(
    table: &mut ObservationTable,
    teacher: &T,
) -> Result<Action, LearnError> {
    let action = table.next_action()?.ok_or_else(|| {
        LearnError::Precondition("table is already closed, consistent and valid".to_string())
    })?;
    table.apply(&action);
    fill_smart(table, teacher)?;
    Ok(action)
}

/// Adds the normal form of `w` under the teacher's reset values, with its prefixes,
/// to `S`. Returns how many words were new.
pub fn refine_smart<T: Teacher + ?Sized>(
    table: &mut ObservationTable,
    w: &TimedWord,
    teacher: &T,
) -> Result<usize, LearnError> {
    let mut values = Vec::with_capacity(w.len() + 1);
    for i in 0..=w.len() {
        values.push(teacher.reset(&w.prefix(i))?);
    }
    let trace = ResetTrace::new(values, w)?;
    let form = normal_form(&trace, w)?;
    let hi = table.from_timed(&form).ok_or_else(|| {
        LearnError::Precondition(format!("normal form {form} leaves the alphabet"))
    })?;
    let added = table.add_with_prefixes(&hi);
    fill_smart(table, teacher)?;
    Ok(added)
}

/// Learns the canonical acceptor from a teacher that also answers reset queries.
pub fn learn_smart<T: Teacher + ?Sized>(
    teacher: &T,
    config: &LearnConfig,
    mut observer: Option<Observer<'_>>,
) -> Result<Learned, LearnError> {
    let before = teacher.counts();
    let mut table = ObservationTable::new(teacher.alphabet().to_vec());
    fill_smart(&mut table, teacher)?;
    if let Some(obs) = observer.as_mut() {
        obs(&LearnEvent::Started { table: &table });
    }
    let mut stats = LearnerStats {
        tables_processed: 1,
        pool_peak: 1,
        ..LearnerStats::default()
    };
    let mut last_conjecture: Option<(usize, u32)> = None;
    loop {
        match table.next_action()? {
            Some(action) => {
                table.apply(&action);
                if table.k() > config.max_k {
                    return Err(LearnError::CapExceeded {
                        what: "K",
                        limit: config.max_k as u64,
                    });
                }
                stats.tables_processed += 1;
                if stats.tables_processed > config.max_tables {
                    return Err(LearnError::CapExceeded {
                        what: "tables",
                        limit: config.max_tables,
                    });
                }
                fill_smart(&mut table, teacher)?;
                if let Some(obs) = observer.as_mut() {
                    obs(&LearnEvent::Processed {
                        action: &action,
                        table: &table,
                    });
                }
            }
            None => {
                let conjecture = table.conjecture()?;
                let progress = (table.distinct_rows(), table.k());
                if last_conjecture.is_some_and(|prev| progress <= prev) {
                    return Err(LearnError::Precondition(format!(
                        "conjecture with {} rows at K={} does not improve on the previous one",
                        progress.0, progress.1
                    )));
                }
                last_conjecture = Some(progress);
                if let Some(obs) = observer.as_mut() {
                    obs(&LearnEvent::Conjectured {
                        table: &table,
                        conjecture: &conjecture,
                    });
                }
                match teacher.equivalence(&conjecture)? {
                    Verdict::Equivalent => {
                        let stats = stats.with_queries(before, teacher.counts());
                        return Ok(Learned {
                            automaton: conjecture,
                            table,
                            stats,
                        });
                    }
                    Verdict::Counterexample { word, .. } => {
                        if refine_smart(&mut table, &word, teacher)? == 0 {
                            return Err(LearnError::NoProgress(word));
                        }
                        if let Some(obs) = observer.as_mut() {
                            obs(&LearnEvent::Refined {
                                counterexample: &word,
                                table: &table,
                            });
                        }
                    }
                }
            }
        }
    }
}
