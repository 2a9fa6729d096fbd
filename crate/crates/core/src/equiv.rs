//! Language equivalence through a two-clock region product, with concrete counterexamples.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::automaton::{region_of_ticks, Automaton, ClockUpdate, Dense, Edge};
use crate::error::AutomatonError;
use crate::rational::Rational;
use crate::region::Region;
use crate::word::TimedWord;

/// Which of the two compared automata.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Equivalent,
    /// `word` is accepted by exactly one automaton, namely `accepted_by`.
    Counterexample { word: TimedWord, accepted_by: Side },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&TimedWord> {
        match self {
            Verdict::Equivalent => None,
            Verdict::Counterexample { word, .. } => Some(word),
        }
    }
}

/// Swaps accepting and rejecting states of a complete deterministic automaton.
pub fn complement(a: &Automaton) -> Result<Automaton, AutomatonError> {
    a.require_valid()?;
    let accepting = a
        .states()
        .iter()
        .filter(|s| !a.is_accepting(s))
        .cloned()
        .collect();
    a.with_accepting(accepting)
}

/// Decides `L(a) = L(b)`; both inputs are sink-completed first.
pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<Verdict, AutomatonError> {
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let da = Dense::from_automaton(a)?.completed();
    let db = Dense::from_automaton(b)?.completed();
    Ok(dense_equivalent(&da, &db))
}

/// `L(q, n/2) = L(q', n/2)` where `n/2` is the half-integral value of their common region.
pub fn state_lang_equal(
    acc: &Automaton,
    q: &crate::automaton::StateId,
    q2: &crate::automaton::StateId,
) -> Result<bool, AutomatonError> {
    if !acc.is_acceptor() {
        return Err(AutomatonError::NotAcceptor);
    }
    let missing = |s: &crate::automaton::StateId| AutomatonError::UnknownState(s.to_string());
    let r1 = acc.region(q).ok_or_else(|| missing(q))?;
    let r2 = acc.region(q2).ok_or_else(|| missing(q2))?;
    if r1 != r2 {
        return Err(AutomatonError::Precondition(alloc::format!(
            "states `{q}` and `{q2}` have different regions {r1} and {r2}"
        )));
    }
    if q == q2 {
        return Ok(true);
    }
    let d = Dense::from_automaton(acc)?;
    let i1 = d.index_of(q).ok_or_else(|| missing(q))?;
    let i2 = d.index_of(q2).ok_or_else(|| missing(q2))?;
    Ok(dense_state_lang_equal(&d, i1, i2))
}

/// Index-level version of [`state_lang_equal`]; regions must match.
pub(crate) fn dense_state_lang_equal(d: &Dense, q1: usize, q2: usize) -> bool {
    if q1 == q2 {
        return true;
    }
    if d.accepting[q1] != d.accepting[q2] {
        return false;
    }
    let region = d.region(q1).unwrap_or(Region::Point(0));
    let g = region.index(d.k);
    let mut d = d.clone();
    let mut names = d.name_gen();
    let mut pre = [0usize; 2];
    for (slot, target) in pre.iter_mut().zip([q1, q2]) {
        let p = d.add_state(names.fresh(), false, Region::Point(0));
        for a in 0..d.alphabet.len() {
            d.set_slot(
                p,
                a,
                g,
                Some(Edge {
                    target,
                    update: ClockUpdate::Keep,
                }),
            );
        }
        *slot = p;
    }
    let mut left = d.completed();
    let mut right = left.clone();
    left.initial = pre[0];
    right.initial = pre[1];
    dense_equivalent(&left, &right).is_equivalent()
}

/// Compares membership on every word of length at most `max_len` whose delays are
/// multiples of `1/denom` in `[0, K+1]`; returns the first disagreement.
pub fn bounded_oracle_equal(
    a: &Automaton,
    b: &Automaton,
    max_len: usize,
    denom: u64,
) -> Result<Option<TimedWord>, AutomatonError> {
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    if denom == 0 {
        return Err(AutomatonError::Precondition("denominator must be positive".to_string()));
    }
    let da = Dense::from_automaton(a)?.completed();
    let db = Dense::from_automaton(b)?.completed();
    let k = a.k().max(b.k());
    let max_ticks = denom * (k as u64 + 1);
    let letters = da.alphabet.len();
    let mut word: Vec<(u64, usize)> = Vec::new();
    for len in 0..=max_len {
        let start = Walker {
            left: Some((da.initial, 0)),
            right: Some((db.initial, 0)),
        };
        if search_grid(&da, &db, denom, max_ticks, letters, len, start, &mut word) {
            let w = TimedWord::from_pairs(
                word.iter()
                    .map(|&(t, l)| (Rational::new(t, denom), da.alphabet[l].clone())),
            );
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy)]
struct Walker {
    left: Option<(usize, u64)>,
    right: Option<(usize, u64)>,
}

fn tick_step(d: &Dense, cur: Option<(usize, u64)>, ticks: u64, letter: usize, denom: u64) -> Option<(usize, u64)> {
    let (q, clock) = cur?;
    let value = clock + ticks;
    let e = d.slot(q, letter, region_of_ticks(value, denom, d.k).index(d.k))?;
    Some((
        e.target,
        match e.update {
            ClockUpdate::Reset => 0,
            ClockUpdate::Keep => value,
        },
    ))
}

#[allow(clippy::too_many_arguments)]
fn search_grid(
    da: &Dense,
    db: &Dense,
    denom: u64,
    max_ticks: u64,
    letters: usize,
    remaining: usize,
    cur: Walker,
    word: &mut Vec<(u64, usize)>,
) -> bool {
    if remaining == 0 {
        let acc_a = cur.left.is_some_and(|(q, _)| da.accepting[q]);
        let acc_b = cur.right.is_some_and(|(q, _)| db.accepting[q]);
        return acc_a != acc_b;
    }
    for t in 0..=max_ticks {
        for l in 0..letters {
            let next = Walker {
                left: tick_step(da, cur.left, t, l, denom),
                right: tick_step(db, cur.right, t, l, denom),
            };
            word.push((t, l));
            if search_grid(da, db, denom, max_ticks, letters, remaining - 1, next, word) {
                return true;
            }
            word.pop();
        }
    }
    false
}

/// Abstract value of one clock: integer part and zero-fraction flag up to `K`, or above `K`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum ClockClass {
    At { int: u32, frac_zero: bool },
    Above,
}

/// Region of a pair of clocks, with the order of fractional parts when both are
/// at most `K` and have nonzero fractions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct PairClass {
    left: ClockClass,
    right: ClockClass,
    frac_order: Option<Ordering>,
}

fn clock_class(v: &Rational, k: u32) -> ClockClass {
    match Region::of(v, k) {
        Region::Point(n) => ClockClass::At {
            int: n,
            frac_zero: true,
        },
        Region::Open(n) => ClockClass::At {
            int: n,
            frac_zero: false,
        },
        Region::AboveK => ClockClass::Above,
    }
}

fn classify(v1: &Rational, v2: &Rational, k: u32) -> PairClass {
    let left = clock_class(v1, k);
    let right = clock_class(v2, k);
    let frac_order = match (left, right) {
        (
            ClockClass::At {
                frac_zero: false, ..
            },
            ClockClass::At {
                frac_zero: false, ..
            },
        ) => Some(v1.fract().cmp(&v2.fract())),
        _ => None,
    };
    PairClass {
        left,
        right,
        frac_order,
    }
}

/// A concrete pair of clock values inside the class.
fn representative(pc: PairClass, k: u32) -> (Rational, Rational) {
    let (f1, f2) = match pc.frac_order {
        Some(Ordering::Less) => (Rational::new(1, 3), Rational::new(2, 3)),
        Some(Ordering::Greater) => (Rational::new(2, 3), Rational::new(1, 3)),
        _ => (Rational::new(1, 2), Rational::new(1, 2)),
    };
    let value = |c: ClockClass, frac: Rational| match c {
        ClockClass::Above => Rational::from_integer(k as u64 + 1),
        ClockClass::At {
            int,
            frac_zero: true,
        } => Rational::from_integer(int as u64),
        ClockClass::At { int, .. } => Rational::from_integer(int as u64) + frac,
    };
    (value(pc.left, f1), value(pc.right, f2))
}

/// Delays reaching every time-successor class of `(v1, v2)`: the integer crossings up
/// to `K`, the midpoints between them, and one delay past the last crossing.
fn successor_delays(v1: &Rational, v2: &Rational, k: u32) -> Vec<Rational> {
    let mut bounds = BTreeSet::new();
    bounds.insert(Rational::zero());
    for v in [v1, v2] {
        if *v > k as u64 {
            continue;
        }
        for n in 0..=k as u64 {
            if let Some(d) = Rational::from_integer(n).checked_sub(v) {
                bounds.insert(d);
            }
        }
    }
    let bounds: Vec<Rational> = bounds.into_iter().collect();
    let mut out = Vec::with_capacity(2 * bounds.len() + 1);
    for (i, b) in bounds.iter().enumerate() {
        out.push(b.clone());
        match bounds.get(i + 1) {
            Some(next) => out.push((b + next).div_int(2)),
            None => out.push(b + &Rational::from_integer(1)),
        }
    }
    out
}

type Node = (Option<usize>, Option<usize>, PairClass);

struct Parent {
    from: usize,
    delay_class: PairClass,
    letter: usize,
}

fn advance(d: &Dense, q: Option<usize>, value: &Rational, letter: usize) -> (Option<usize>, Rational) {
    let Some(q) = q else {
        return (None, Rational::zero());
    };
    let g = Region::of(value, d.k).index(d.k);
    match d.slot(q, letter, g) {
        Some(e) => (Some(e.target), e.update.apply(value.clone())),
        None => (None, Rational::zero()),
    }
}

/// Breadth-first search of the product; a missing slot behaves as a rejecting sink.
pub(crate) fn dense_equivalent(da: &Dense, db: &Dense) -> Verdict {
    let k = da.k.max(db.k);
    let zero = Rational::zero();
    let start: Node = (Some(da.initial), Some(db.initial), classify(&zero, &zero, k));
    let mut nodes: Vec<Node> = Vec::new();
    let mut parents: Vec<Option<Parent>> = Vec::new();
    let mut index: BTreeMap<Node, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    nodes.push(start);
    parents.push(None);
    index.insert(start, 0);
    queue.push_back(0usize);
    while let Some(id) = queue.pop_front() {
        let (s1, s2, pc) = nodes[id];
        let acc1 = s1.is_some_and(|q| da.accepting[q]);
        let acc2 = s2.is_some_and(|q| db.accepting[q]);
        if acc1 != acc2 {
            let path = collect_path(&parents, id);
            let word = concretize(da, db, k, &path);
            let side = if acc1 { Side::Left } else { Side::Right };
            return Verdict::Counterexample {
                word,
                accepted_by: side,
            };
        }
        if s1.is_none() && s2.is_none() {
            continue;
        }
        let (r1, r2) = representative(pc, k);
        let mut seen_delay = BTreeSet::new();
        for delay in successor_delays(&r1, &r2, k) {
            let v1 = &r1 + &delay;
            let v2 = &r2 + &delay;
            let dc = classify(&v1, &v2, k);
            if !seen_delay.insert(dc) {
                continue;
            }
            for letter in 0..da.alphabet.len() {
                let (n1, c1) = advance(da, s1, &v1, letter);
                let (n2, c2) = advance(db, s2, &v2, letter);
                let node: Node = (n1, n2, classify(&c1, &c2, k));
                if let alloc::collections::btree_map::Entry::Vacant(slot) = index.entry(node) {
                    let nid = nodes.len();
                    slot.insert(nid);
                    nodes.push(node);
                    parents.push(Some(Parent {
                        from: id,
                        delay_class: dc,
                        letter,
                    }));
                    queue.push_back(nid);
                }
            }
        }
    }
    Verdict::Equivalent
}

fn collect_path(parents: &[Option<Parent>], mut id: usize) -> Vec<(PairClass, usize)> {
    let mut path = Vec::new();
    while let Some(p) = &parents[id] {
        path.push((p.delay_class, p.letter));
        id = p.from;
    }
    path.reverse();
    path
}

/// Replays an abstract path with exact values, preferring delays on the grid `1/(4·len)`.
fn concretize(da: &Dense, db: &Dense, k: u32, path: &[(PairClass, usize)]) -> TimedWord {
    let denom = 4 * path.len().max(1) as u64;
    let mut s1 = Some(da.initial);
    let mut s2 = Some(db.initial);
    let mut v1 = Rational::zero();
    let mut v2 = Rational::zero();
    let mut word = TimedWord::empty();
    for &(target, letter) in path {
        let limit = denom * (k as u64 + 2);
        let delay = (0..=limit)
            .map(|p| Rational::new(p, denom))
            .find(|d| classify(&(&v1 + d), &(&v2 + d), k) == target)
            .or_else(|| {
                successor_delays(&v1, &v2, k)
                    .into_iter()
                    .find(|d| classify(&(&v1 + d), &(&v2 + d), k) == target)
            })
            .expect("abstract path is feasible from the concrete valuation");
        let x1 = &v1 + &delay;
        let x2 = &v2 + &delay;
        let (n1, c1) = advance(da, s1, &x1, letter);
        let (n2, c2) = advance(db, s2, &x2, letter);
        s1 = n1;
        s2 = n2;
        v1 = c1;
        v2 = c2;
        word.push(delay, da.alphabet[letter].clone());
    }
    debug_assert_ne!(da.accepts(&word), db.accepts(&word));
    word
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::AutomatonBuilder;
    use crate::automaton::ClockUpdate::*;
    use crate::region::Region::*;

    fn a_s() -> Automaton {
        AutomatonBuilder::new(1, ["a", "b"])
            .edge("0", "1", "a", Open(0), Keep)
            .edge("1", "2", "b", Open(0), Reset)
            .accepting("2")
            .build()
            .unwrap()
    }

    fn a_q() -> Automaton {
        AutomatonBuilder::new(1, ["a", "b"])
            .edge("0", "1", "a", Open(0), Reset)
            .edge("1", "2", "b", Point(0), Reset)
            .accepting("2")
            .build()
            .unwrap()
    }

    #[test]
    fn reflexive() {
        assert_eq!(equivalent(&a_s(), &a_s()).unwrap(), Verdict::Equivalent);
    }

    #[test]
    fn a_s_differs_from_a_q() {
        let v = equivalent(&a_s(), &a_q()).unwrap();
        let Verdict::Counterexample { word, accepted_by } = v else {
            panic!("expected a counterexample");
        };
        let in_s = a_s().complete_with_sink().unwrap().accepts(&word).unwrap();
        let in_q = a_q().complete_with_sink().unwrap().accepts(&word).unwrap();
        assert_ne!(in_s, in_q);
        assert_eq!(accepted_by == Side::Left, in_s);
    }

    #[test]
    fn grid_oracle_sees_difference_only_off_half_grid() {
        assert_eq!(bounded_oracle_equal(&a_s(), &a_q(), 2, 2).unwrap(), None);
        let w = bounded_oracle_equal(&a_s(), &a_q(), 2, 4).unwrap().unwrap();
        assert!(!w.is_half_integral());
    }

    #[test]
    fn complement_swaps_language() {
        let c = a_s().complete_with_sink().unwrap();
        let n = complement(&c).unwrap();
        let w: TimedWord = "1/2:a 1:b".parse().unwrap();
        assert!(n.accepts(&w).unwrap());
        assert_eq!(complement(&n).unwrap(), c);
        assert!(complement(&a_s()).is_err());
    }

    #[test]
    fn delay_candidates_cover_classes() {
        let ds = successor_delays(&Rational::new(1, 3), &Rational::new(1, 2), 1);
        // crossings 0, 1/2, 2/3, then one beyond
        assert_eq!(ds.len(), 6);
    }
}
