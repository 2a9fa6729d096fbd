//! Reset functions, half-integral normal forms and the syntactic reset function.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::automaton::{Automaton, Dense};
use crate::error::AutomatonError;
use crate::rational::Rational;
use crate::transform;
use crate::word::TimedWord;

/// The unique half-integral value in the region of `x` (`⌊x⌋ + 1/2` off the integers).
pub fn hi(x: &Rational) -> Rational {
    if x.is_integer() {
        x.clone()
    } else {
        Rational::from_big(x.floor() * 2u32 + 1u32, 2u32.into()).expect("nonzero denominator")
    }
}

/// Clock values after each prefix of a word, starting with `ε`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResetTrace {
    values: Vec<Rational>,
}

impl ResetTrace {
    /// Checks the reset-function law: starts at 0, each step resets or adds the delay.
    pub fn new(values: Vec<Rational>, u: &TimedWord) -> Result<Self, AutomatonError> {
        if values.len() != u.len() + 1 {
            return Err(AutomatonError::Precondition(alloc::format!(
                "trace has {} values for a word of length {}",
                values.len(),
                u.len()
            )));
        }
        if !values[0].is_zero() {
            return Err(AutomatonError::Precondition("trace must start at 0".into()));
        }
        for (i, tl) in u.letters().iter().enumerate() {
            let next = &values[i + 1];
            if !next.is_zero() && *next != &values[i] + &tl.delay {
                return Err(AutomatonError::Precondition(alloc::format!(
                    "trace value {next} after letter {} neither resets nor adds the delay",
                    i + 1
                )));
            }
        }
        Ok(ResetTrace { values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn last(&self) -> &Rational {
        self.values.last().expect("traces are nonempty")
    }
}

/// Clock value after every prefix of `u` under `a`.
pub fn reset_trace(a: &Automaton, u: &TimedWord) -> Result<ResetTrace, AutomatonError> {
    let run = a.run(u)?;
    let mut values: Vec<Rational> = run.steps.iter().map(|s| s.clock.clone()).collect();
    values.push(run.final_clock);
    Ok(ResetTrace { values })
}

/// The half-integral word following the same transitions as `u` under the reset
/// function recorded in `trace`.
pub fn normal_form(trace: &ResetTrace, u: &TimedWord) -> Result<TimedWord, AutomatonError> {
    if trace.values.len() != u.len() + 1 {
        return Err(AutomatonError::Precondition(alloc::format!(
            "trace has {} values for a word of length {}",
            trace.values.len(),
            u.len()
        )));
    }
    let mut out = TimedWord::empty();
    for (i, tl) in u.letters().iter().enumerate() {
        out.push(normal_delay(&trace.values[i], &tl.delay), tl.letter.clone());
    }
    Ok(out)
}

/// Least nonnegative half-integral `t'` with `hi(r) + t'` in the region of `r + t`.
fn normal_delay(r: &Rational, t: &Rational) -> Rational {
    hi(&(r + t))
        .checked_sub(&hi(r))
        .expect("hi is monotone, so the difference is nonnegative")
}

/// Every normal form `u` can have, over all reset decisions along its prefixes.
pub fn enumerate_normal_forms(u: &TimedWord) -> BTreeSet<TimedWord> {
    let n = u.len();
    let mut out = BTreeSet::new();
    if n == 0 {
        out.insert(TimedWord::empty());
        return out;
    }
    // the decision after the last letter never influences the normal form
    let free = n - 1;
    for mask in 0u64..(1u64 << free) {
        let mut clock = Rational::zero();
        let mut w = TimedWord::empty();
        for (i, tl) in u.letters().iter().enumerate() {
            w.push(normal_delay(&clock, &tl.delay), tl.letter.clone());
            let value = &clock + &tl.delay;
            clock = if i < free && mask & (1 << i) != 0 {
                value
            } else {
                Rational::zero()
            };
        }
        out.insert(w);
    }
    out
}

/// Evaluates the syntactic reset function of `L(A)` through an automaton whose reset
/// function is that syntactic one, computed once at construction.
#[derive(Clone, Debug)]
pub struct SyntacticReset {
    automaton: Automaton,
    dense: Dense,
}

impl SyntacticReset {
    pub fn new(a: &Automaton) -> Result<Self, AutomatonError> {
        let automaton = transform::syntactic_reset_automaton(a)?;
        let dense = Dense::from_automaton(&automaton)?;
        Ok(SyntacticReset { automaton, dense })
    }

    /// The automaton whose reset function is the syntactic one.
    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn value(&self, u: &TimedWord) -> Result<Rational, AutomatonError> {
        self.dense
            .run_final(u)
            .map(|(_, clock)| clock)
            .ok_or_else(|| AutomatonError::Precondition("word leaves the alphabet".into()))
    }

    pub fn trace(&self, u: &TimedWord) -> Result<ResetTrace, AutomatonError> {
        let mut values = Vec::with_capacity(u.len() + 1);
        for i in 0..=u.len() {
            values.push(self.value(&u.prefix(i))?);
        }
        Ok(ResetTrace { values })
    }
}

/// The syntactic reset value of `u` for `L(a)`.
pub fn syntactic_reset(a: &Automaton, u: &TimedWord) -> Result<Rational, AutomatonError> {
    SyntacticReset::new(a)?.value(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: u64, d: u64) -> Rational {
        Rational::new(n, d)
    }

    fn w(s: &str) -> TimedWord {
        s.parse().unwrap()
    }

    #[test]
    fn hi_values() {
        assert_eq!(hi(&q(27, 10)), q(5, 2));
        assert_eq!(hi(&q(6, 5)), q(3, 2));
        assert_eq!(hi(&q(3, 1)), q(3, 1));
    }

    #[test]
    fn normal_forms_of_the_decimal_example() {
        let u = w("0.3:a 1.9:b");
        let reset = ResetTrace::new(vec![q(0, 1), q(0, 1), q(0, 1)], &u).unwrap();
        assert_eq!(normal_form(&reset, &u).unwrap(), w("1/2:a 3/2:b"));
        let keep = ResetTrace::new(vec![q(0, 1), q(3, 10), q(0, 1)], &u).unwrap();
        assert_eq!(normal_form(&keep, &u).unwrap(), w("1/2:a 2:b"));
    }

    #[test]
    fn enumeration_examples() {
        let forms = enumerate_normal_forms(&w("0.2:a 1.3:a"));
        let expected: BTreeSet<_> = [w("1/2:a 3/2:a"), w("1/2:a 1:a")].into_iter().collect();
        assert_eq!(forms, expected);
        assert_eq!(enumerate_normal_forms(&w("0.3:a")).len(), 1);
        let hi_word = w("1/2:a 1:b 3/2:a");
        assert_eq!(enumerate_normal_forms(&hi_word).into_iter().collect::<Vec<_>>(), vec![hi_word]);
    }

    #[test]
    fn trace_law_enforced() {
        let u = w("1:a");
        assert!(ResetTrace::new(vec![q(0, 1), q(1, 2)], &u).is_err());
        assert!(ResetTrace::new(vec![q(0, 1), q(1, 1)], &u).is_ok());
    }
}
