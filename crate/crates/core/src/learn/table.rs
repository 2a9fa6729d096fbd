use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::{Automaton, ClockUpdate, Dense, Edge, StateId};
use crate::rational::Rational;
use crate::region::Region;
use crate::word::{Letter, TimedWord};

use super::LearnError;

/// One half-integral timed letter: a delay counted in halves and a letter index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HiSym {
    pub halves: u32,
    pub letter: u16,
}

pub type HiWord = Vec<HiSym>;

/// Contents of a row: per column, the membership bit and the reset value in halves.
pub type Row = Vec<(bool, u32)>;

fn cat(a: &[HiSym], b: &[HiSym]) -> HiWord {
    let mut w = Vec::with_capacity(a.len() + b.len());
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    w
}

/// One step of Process.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Action {
    /// Action 1: a row of an extension matches no row of `S`.
    MoveToS(HiWord),
    /// Action 2: two equal rows split on an extension; the new column.
    AddColumn(HiWord),
    /// Action 3: some clock value past `K` reads differently from `K + 1/2`.
    RaiseForConsistency,
    /// Action 4: some reset value exceeds `K`.
    RaiseForValidity,
}

impl Action {
    /// The action's number in Process.
    pub fn number(&self) -> u8 {
        match self {
            Action::MoveToS(_) => 1,
            Action::AddColumn(_) => 2,
            Action::RaiseForConsistency => 3,
            Action::RaiseForValidity => 4,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Inconsistency {
    /// Equal rows `s1`, `s2` whose extensions by `sym` differ in column `e`.
    A {
        s1: HiWord,
        s2: HiWord,
        sym: HiSym,
        e: HiWord,
    },
    /// `s(t·a)` with `r(s)+t > K` reads unlike `s((K+1/2)·a)`.
    B { word: HiWord },
}

/// The learner's `(K, S, E, T)`. Cells are keyed by the concatenated word, so two
/// cells spelling the same word always agree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ObservationTable {
    k: u32,
    alphabet: Vec<Letter>,
    s: Vec<HiWord>,
    s_set: BTreeSet<HiWord>,
    e: Vec<HiWord>,
    member: BTreeMap<HiWord, bool>,
    reset: BTreeMap<HiWord, u32>,
}

impl ObservationTable {
    /// `K = 0`, `S = E = {ε}`, nothing filled except `r(ε) = 0`.
    pub fn new(alphabet: Vec<Letter>) -> Self {
        let mut reset = BTreeMap::new();
        reset.insert(Vec::new(), 0);
        ObservationTable {
            k: 0,
            alphabet,
            s: vec![Vec::new()],
            s_set: [Vec::new()].into_iter().collect(),
            e: vec![Vec::new()],
            member: BTreeMap::new(),
            reset,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn s(&self) -> &[HiWord] {
        &self.s
    }

    pub fn e(&self) -> &[HiWord] {
        &self.e
    }

    pub fn in_s(&self, w: &HiWord) -> bool {
        self.s_set.contains(w)
    }

    /// `Σ_K` ordered by delay, then letter.
    pub fn sigma_k(&self) -> Vec<HiSym> {
        let mut out = Vec::new();
        for halves in 0..=2 * self.k + 1 {
            for letter in 0..self.alphabet.len() {
                out.push(HiSym {
                    halves,
                    letter: letter as u16,
                });
            }
        }
        out
    }

    /// Extensions `SΣ_K` not already in `S`, in table order.
    pub fn extensions(&self) -> Vec<HiWord> {
        let sigma = self.sigma_k();
        let mut out = Vec::new();
        for s in &self.s {
            for sym in &sigma {
                let w = cat(s, &[*sym]);
                if !self.in_s(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Row words `S ∪ SΣ_K`.
    pub fn row_words(&self) -> Vec<HiWord> {
        let mut out = self.s.clone();
        out.extend(self.extensions());
        out
    }

    /// Every word `u·e` the table needs a cell for.
    pub fn cell_words(&self) -> BTreeSet<HiWord> {
        let mut out = BTreeSet::new();
        for u in self.row_words() {
            for e in &self.e {
                out.insert(cat(&u, e));
            }
        }
        out
    }

    pub fn missing_membership(&self) -> Vec<HiWord> {
        self.cell_words()
            .into_iter()
            .filter(|w| !self.member.contains_key(w))
            .collect()
    }

    /// Words without a reset value, closed under prefixes, shortest first.
    pub fn missing_resets(&self) -> Vec<HiWord> {
        let mut out = BTreeSet::new();
        for w in self.cell_words() {
            for n in 1..=w.len() {
                if !self.reset.contains_key(&w[..n]) {
                    out.insert((n, w[..n].to_vec()));
                }
            }
        }
        out.into_iter().map(|(_, w)| w).collect()
    }

    pub fn set_member(&mut self, w: HiWord, bit: bool) {
        self.member.insert(w, bit);
    }

    pub fn set_reset(&mut self, w: HiWord, halves: u32) {
        self.reset.insert(w, halves);
    }

    pub fn member(&self, w: &[HiSym]) -> Option<bool> {
        self.member.get(w).copied()
    }

    pub fn reset(&self, w: &[HiSym]) -> Option<u32> {
        self.reset.get(w).copied()
    }

    /// Every reset value decided so far, cells or not.
    pub fn resets(&self) -> &BTreeMap<HiWord, u32> {
        &self.reset
    }

    pub fn is_total(&self) -> bool {
        self.cell_words()
            .iter()
            .all(|w| self.member.contains_key(w) && self.reset.contains_key(w))
    }

    fn cell(&self, w: &[HiSym]) -> (bool, u32) {
        let bit = *self.member.get(w).expect("table filled before it is read");
        let r = *self.reset.get(w).expect("table filled before it is read");
        (bit, r)
    }

    pub fn row(&self, u: &[HiSym]) -> Row {
        self.e.iter().map(|e| self.cell(&cat(u, e))).collect()
    }

    /// `r(u)` in halves.
    pub fn r(&self, u: &[HiSym]) -> u32 {
        self.cell(u).1
    }

    pub fn to_timed(&self, w: &[HiSym]) -> TimedWord {
        TimedWord::from_pairs(
            w.iter()
                .map(|sym| (Rational::halves(sym.halves as u64), self.alphabet[sym.letter as usize].clone())),
        )
    }

    /// The half-integral word spelled by `w`, if it is one over this alphabet.
    pub fn from_timed(&self, w: &TimedWord) -> Option<HiWord> {
        w.letters()
            .iter()
            .map(|tl| {
                let halves = u32::try_from(tl.delay.as_halves()?).ok()?;
                let letter = self.alphabet.iter().position(|l| *l == tl.letter)? as u16;
                Some(HiSym { halves, letter })
            })
            .collect()
    }

    /// Adds `w` and its prefixes to `S`; returns how many were new.
    pub fn add_with_prefixes(&mut self, w: &[HiSym]) -> usize {
        let mut added = 0;
        for n in 0..=w.len() {
            let p = w[..n].to_vec();
            if self.s_set.insert(p.clone()) {
                self.s.push(p);
                added += 1;
            }
        }
        added
    }

    fn cell_resets(&self) -> impl Iterator<Item = u32> + '_ {
        self.cell_words().into_iter().map(|w| self.cell(&w).1)
    }

    /// Reset values lie in `[0, K]` minus the positive integers.
    pub fn is_valid(&self) -> bool {
        self.cell_resets()
            .all(|r| r <= 2 * self.k && (r == 0 || r % 2 == 1))
    }

    /// The first extension whose row matches no row of `S`.
    pub fn closedness_witness(&self) -> Option<HiWord> {
        let rows: BTreeSet<Row> = self.s.iter().map(|s| self.row(s)).collect();
        self.extensions().into_iter().find(|w| !rows.contains(&self.row(w)))
    }

    pub fn is_closed(&self) -> bool {
        self.closedness_witness().is_none()
    }

    fn inconsistency_a(&self) -> Option<Inconsistency> {
        let sigma = self.sigma_k();
        let rows: Vec<Row> = self.s.iter().map(|s| self.row(s)).collect();
        for i in 0..self.s.len() {
            for j in i + 1..self.s.len() {
                if rows[i] != rows[j] {
                    continue;
                }
                for sym in &sigma {
                    let w1 = cat(&self.s[i], &[*sym]);
                    let w2 = cat(&self.s[j], &[*sym]);
                    for e in &self.e {
                        if self.cell(&cat(&w1, e)) != self.cell(&cat(&w2, e)) {
                            return Some(Inconsistency::A {
                                s1: self.s[i].clone(),
                                s2: self.s[j].clone(),
                                sym: *sym,
                                e: e.clone(),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    fn inconsistency_b(&self) -> Option<Inconsistency> {
        let k2 = 2 * self.k;
        let violates = |w: &[HiSym]| -> bool {
            let (s, last) = w.split_at(w.len() - 1);
            let sym = last[0];
            if self.r(s) + sym.halves <= k2 {
                return false;
            }
            let probe = cat(
                s,
                &[HiSym {
                    halves: k2 + 1,
                    letter: sym.letter,
                }],
            );
            self.row(w) != self.row(&probe)
        };
        let sigma = self.sigma_k();
        for s in &self.s {
            for sym in &sigma {
                let w = cat(s, &[*sym]);
                if violates(&w) {
                    return Some(Inconsistency::B { word: w });
                }
            }
        }
        // row words of S may carry delays beyond K + 1/2
        self.s
            .iter()
            .filter(|w| w.last().is_some_and(|sym| sym.halves > k2 + 1))
            .find(|w| violates(w))
            .map(|w| Inconsistency::B { word: w.clone() })
    }

    /// First violation of (a), else of (b).
    pub fn inconsistency(&self) -> Option<Inconsistency> {
        self.inconsistency_a().or_else(|| self.inconsistency_b())
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistency().is_none()
    }

    /// The action Process applies next, or `None` once the table is closed,
    /// consistent and valid. Validity comes first so that every row read
    /// afterwards uses reset values within `[0, K]`.
    pub fn next_action(&self) -> Result<Option<Action>, LearnError> {
        if self.cell_resets().any(|r| r > 2 * self.k) {
            return Ok(Some(Action::RaiseForValidity));
        }
        if let Some(r) = self.cell_resets().find(|r| *r != 0 && r % 2 == 0) {
            return Err(LearnError::Precondition(format!(
                "reset value {} is a positive integer",
                Rational::halves(r as u64)
            )));
        }
        if let Some(w) = self.closedness_witness() {
            return Ok(Some(Action::MoveToS(w)));
        }
        match self.inconsistency() {
            Some(Inconsistency::A { sym, e, .. }) => Ok(Some(Action::AddColumn(cat(&[sym], &e)))),
            Some(Inconsistency::B { .. }) => Ok(Some(Action::RaiseForConsistency)),
            None => Ok(None),
        }
    }

    /// Applies `action`; new cells are left for the caller to fill.
    pub fn apply(&mut self, action: &Action) {
        match action {
            Action::MoveToS(w) => {
                self.add_with_prefixes(w);
            }
            Action::AddColumn(e) => {
                if !self.e.contains(e) {
                    self.e.push(e.clone());
                }
            }
            Action::RaiseForConsistency | Action::RaiseForValidity => self.k += 1,
        }
    }

    /// Number of distinct rows of `S`.
    pub fn distinct_rows(&self) -> usize {
        self.s.iter().map(|s| self.row(s)).collect::<BTreeSet<_>>().len()
    }

    /// The strict `K`-acceptor induced by a closed, consistent and valid table.
    /// States are named `q0, q1, …` in order of first appearance in `S`.
    pub fn conjecture(&self) -> Result<Automaton, LearnError> {
        if !self.is_total() {
            return Err(LearnError::Precondition("table has empty cells".to_string()));
        }
        if !(self.is_valid() && self.is_closed() && self.is_consistent()) {
            return Err(LearnError::Precondition(
                "conjectures need a closed, consistent and valid table".to_string(),
            ));
        }
        let mut index: BTreeMap<Row, usize> = BTreeMap::new();
        let mut reps: Vec<&HiWord> = Vec::new();
        for s in &self.s {
            let row = self.row(s);
            if let alloc::collections::btree_map::Entry::Vacant(slot) = index.entry(row) {
                slot.insert(reps.len());
                reps.push(s);
            }
        }
        let mut d = Dense::new(self.k, self.alphabet.clone(), true);
        for (i, s) in reps.iter().enumerate() {
            let (bit, r) = self.cell(s);
            d.add_state(
                StateId::new(format!("q{i}")),
                bit,
                Region::of_halves(r as u64, self.k),
            );
        }
        for (i, s) in reps.iter().enumerate() {
            let r = self.r(s);
            for sym in self.sigma_k() {
                let w = cat(s, &[sym]);
                let target = index[&self.row(&w)];
                let update = if self.r(&w) == 0 {
                    ClockUpdate::Reset
                } else {
                    ClockUpdate::Keep
                };
                let g = Region::of_halves((r + sym.halves) as u64, self.k).index(self.k);
                let edge = Some(Edge { target, update });
                let existing = d.slot(i, sym.letter as usize, g);
                if existing.is_some() && existing != edge {
                    return Err(LearnError::Precondition(format!(
                        "extensions of row {i} disagree on letter {}",
                        self.alphabet[sym.letter as usize]
                    )));
                }
                d.set_slot(i, sym.letter as usize, g, edge);
            }
        }
        Ok(d.to_automaton())
    }
}

/// Prints `S` rows, then extensions.
impl fmt::Display for ObservationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "K = {}", self.k)?;
        write!(f, "{:<32}", "")?;
        for e in &self.e {
            write!(f, " | {:<14}", self.to_timed(e).to_string())?;
        }
        writeln!(f)?;
        let print_row = |f: &mut fmt::Formatter<'_>, u: &HiWord| -> fmt::Result {
            write!(f, "{:<32}", self.to_timed(u).to_string())?;
            for e in &self.e {
                let w = cat(u, e);
                match (self.member(&w), self.reset(&w)) {
                    (Some(b), Some(r)) => {
                        write!(f, " | ({}, {:<10})", u8::from(b), Rational::halves(r as u64).to_string())?
                    }
                    _ => write!(f, " | {:<14}", "?")?,
                }
            }
            writeln!(f)
        };
        for s in &self.s {
            print_row(f, s)?;
        }
        writeln!(f, "{}", "-".repeat(32))?;
        for w in self.extensions() {
            print_row(f, &w)?;
        }
        Ok(())
    }
}
