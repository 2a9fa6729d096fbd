//! One-clock timed automata: data model, validation, runs.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::AutomatonError;
use crate::rational::Rational;
use crate::region::Region;
use crate::word::{Letter, TimedWord};

/// Prefix reserved for generated state names.
pub const GENERATED_PREFIX: &str = "__gen";

/// Opaque state name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(String);

impl StateId {
    pub fn new(s: impl Into<String>) -> Self {
        StateId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId::new(s)
    }
}

/// What a transition does to the clock. `Reset` is bit 0, `Keep` is bit 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ClockUpdate {
    Reset,
    Keep,
}

impl ClockUpdate {
    pub fn bit(self) -> u8 {
        match self {
            ClockUpdate::Reset => 0,
            ClockUpdate::Keep => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(ClockUpdate::Reset),
            1 => Some(ClockUpdate::Keep),
            _ => None,
        }
    }

    pub fn apply(self, v: Rational) -> Rational {
        match self {
            ClockUpdate::Reset => Rational::zero(),
            ClockUpdate::Keep => v,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transition {
    pub source: StateId,
    pub target: StateId,
    pub letter: Letter,
    pub guard: Region,
    pub update: ClockUpdate,
}

/// A problem found by [`Automaton::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Diagnostic {
    /// Two transitions share source, letter and guard.
    Nondeterministic {
        state: StateId,
        letter: Letter,
        guard: Region,
        first: usize,
        second: usize,
    },
    /// No transition covers this slot.
    Incomplete {
        state: StateId,
        letter: Letter,
        region: Region,
    },
    /// Transition `transition` enters a state whose region does not match.
    AcceptorRegion {
        transition: usize,
        expected: Region,
        found: Region,
    },
    InitialRegion {
        found: Region,
    },
    MissingRegion {
        state: StateId,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Nondeterministic {
                state,
                letter,
                guard,
                first,
                second,
            } => write!(
                f,
                "nondeterminism at state `{state}` on `{letter}` with guard {guard}: transitions #{first} and #{second}"
            ),
            Diagnostic::Incomplete {
                state,
                letter,
                region,
            } => write!(
                f,
                "incomplete: no transition from `{state}` on `{letter}` with clock in {region}"
            ),
            Diagnostic::AcceptorRegion {
                transition,
                expected,
                found,
            } => write!(
                f,
                "acceptor invariant: transition #{transition} enters a state of region {found}, but arriving clock values lie in {expected}"
            ),
            Diagnostic::InitialRegion { found } => {
                write!(f, "acceptor invariant: initial state has region {found}, expected {{0}}")
            }
            Diagnostic::MissingRegion { state } => {
                write!(f, "acceptor invariant: state `{state}` has no region")
            }
        }
    }
}

/// A one-clock timed automaton, optionally in acceptor form (`regions` present).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automaton {
    alphabet: Vec<Letter>,
    states: Vec<StateId>,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    k: u32,
    regions: Option<BTreeMap<StateId, Region>>,
}

impl Automaton {
    /// Checks referential integrity; determinism and completeness are left to [`Automaton::validate`].
    pub fn new(
        alphabet: Vec<Letter>,
        states: Vec<StateId>,
        initial: StateId,
        accepting: BTreeSet<StateId>,
        transitions: Vec<Transition>,
        k: u32,
        regions: Option<BTreeMap<StateId, Region>>,
    ) -> Result<Self, AutomatonError> {
        let mut alphabet = alphabet;
        alphabet.sort();
        alphabet.dedup();
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s) {
                return Err(AutomatonError::DuplicateState(s.to_string()));
            }
        }
        let known = |s: &StateId| -> Result<(), AutomatonError> {
            if seen.contains(s) {
                Ok(())
            } else {
                Err(AutomatonError::UnknownState(s.to_string()))
            }
        };
        known(&initial)?;
        for s in &accepting {
            known(s)?;
        }
        let check_region = |r: Region| -> Result<(), AutomatonError> {
            if r.is_valid(k) {
                Ok(())
            } else {
                Err(AutomatonError::BadRegion {
                    region: r.to_string(),
                    k,
                })
            }
        };
        for t in &transitions {
            known(&t.source)?;
            known(&t.target)?;
            if alphabet.binary_search(&t.letter).is_err() {
                return Err(AutomatonError::UnknownLetter(t.letter.to_string()));
            }
            check_region(t.guard)?;
        }
        if let Some(map) = &regions {
            for (s, r) in map {
                known(s)?;
                check_region(*r)?;
            }
        }
        Ok(Automaton {
            alphabet,
            states,
            initial,
            accepting,
            transitions,
            k,
            regions,
        })
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn initial(&self) -> &StateId {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, s: &StateId) -> bool {
        self.accepting.contains(s)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn regions(&self) -> Option<&BTreeMap<StateId, Region>> {
        self.regions.as_ref()
    }

    pub fn is_acceptor(&self) -> bool {
        self.regions.is_some()
    }

    pub fn region(&self, s: &StateId) -> Option<Region> {
        self.regions.as_ref().and_then(|m| m.get(s).copied())
    }

    /// Drops the acceptor annotation.
    pub fn without_regions(&self) -> Automaton {
        Automaton {
            regions: None,
            ..self.clone()
        }
    }

    /// Same automaton with the accepting set replaced.
    pub fn with_accepting(&self, accepting: BTreeSet<StateId>) -> Result<Automaton, AutomatonError> {
        Automaton::new(
            self.alphabet.clone(),
            self.states.clone(),
            self.initial.clone(),
            accepting,
            self.transitions.clone(),
            self.k,
            self.regions.clone(),
        )
    }

    /// Lowest guard that can fire from `s`: its region in acceptor form, else `{0}`.
    fn live_floor(&self, s: &StateId) -> Region {
        self.region(s).unwrap_or(Region::Point(0))
    }

    /// Returns every violated rule; empty iff the automaton is deterministic,
    /// complete, and (in acceptor form) satisfies the acceptor invariants.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut by_slot: BTreeMap<(&StateId, &Letter, Region), usize> = BTreeMap::new();
        for (i, t) in self.transitions.iter().enumerate() {
            if let Some(&first) = by_slot.get(&(&t.source, &t.letter, t.guard)) {
                out.push(Diagnostic::Nondeterministic {
                    state: t.source.clone(),
                    letter: t.letter.clone(),
                    guard: t.guard,
                    first,
                    second: i,
                });
            } else {
                by_slot.insert((&t.source, &t.letter, t.guard), i);
            }
        }
        if let Some(map) = &self.regions {
            for s in &self.states {
                if !map.contains_key(s) {
                    out.push(Diagnostic::MissingRegion { state: s.clone() });
                }
            }
        }
        for s in &self.states {
            let floor = self.live_floor(s);
            for a in &self.alphabet {
                for r in Region::all(self.k) {
                    if r < floor {
                        continue;
                    }
                    if !by_slot.contains_key(&(s, a, r)) {
                        out.push(Diagnostic::Incomplete {
                            state: s.clone(),
                            letter: a.clone(),
                            region: r,
                        });
                    }
                }
            }
        }
        if let Some(map) = &self.regions {
            if let Some(&r0) = map.get(&self.initial) {
                if r0 != Region::Point(0) {
                    out.push(Diagnostic::InitialRegion { found: r0 });
                }
            }
            for (i, t) in self.transitions.iter().enumerate() {
                let Some(&found) = map.get(&t.target) else {
                    continue;
                };
                let expected = match t.update {
                    ClockUpdate::Reset => Region::Point(0),
                    ClockUpdate::Keep => t.guard,
                };
                if expected != found {
                    out.push(Diagnostic::AcceptorRegion {
                        transition: i,
                        expected,
                        found,
                    });
                }
            }
        }
        out
    }

    /// Errors on the first determinism or completeness problem.
    pub fn require_valid(&self) -> Result<(), AutomatonError> {
        match self.validate().into_iter().next() {
            None => Ok(()),
            Some(d @ Diagnostic::Nondeterministic { .. }) => Err(AutomatonError::Nondeterministic(d)),
            Some(d @ Diagnostic::Incomplete { .. }) => Err(AutomatonError::Incomplete(d)),
            Some(d) => Err(AutomatonError::AcceptorViolation(d)),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        !self
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::Nondeterministic { .. }))
    }

    /// Adds a non-accepting sink absorbing every missing slot; all added transitions reset.
    pub fn complete_with_sink(&self) -> Result<Automaton, AutomatonError> {
        let dense = Dense::from_automaton(self)?;
        if dense.is_complete() {
            return Ok(self.clone());
        }
        Ok(dense.completed().to_automaton())
    }

    /// The unique run of `w` from `(initial, 0)`.
    pub fn run(&self, w: &TimedWord) -> Result<Run, AutomatonError> {
        let mut state = self.initial.clone();
        let mut clock = Rational::zero();
        let mut steps = Vec::with_capacity(w.len());
        for tl in w.letters() {
            let value = &clock + &tl.delay;
            let region = Region::of(&value, self.k);
            let mut matching = self.transitions.iter().enumerate().filter(|(_, t)| {
                t.source == state && t.letter == tl.letter && t.guard == region
            });
            let Some((idx, t)) = matching.next() else {
                return Err(AutomatonError::Stuck {
                    state: state.to_string(),
                    letter: tl.letter.to_string(),
                    region: region.to_string(),
                });
            };
            if let Some((second, _)) = matching.next() {
                return Err(AutomatonError::Nondeterministic(Diagnostic::Nondeterministic {
                    state: state.clone(),
                    letter: tl.letter.clone(),
                    guard: region,
                    first: idx,
                    second,
                }));
            }
            steps.push(Step {
                state: state.clone(),
                clock: clock.clone(),
                delay: tl.delay.clone(),
                transition: idx,
            });
            state = t.target.clone();
            clock = t.update.apply(value);
        }
        Ok(Run {
            steps,
            final_state: state,
            final_clock: clock,
        })
    }

    /// Membership; a word with no run is rejected.
    pub fn accepts(&self, w: &TimedWord) -> Result<bool, AutomatonError> {
        match self.run(w) {
            Ok(run) => Ok(self.is_accepting(&run.final_state)),
            Err(AutomatonError::Stuck { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Removes states unreachable from the initial state.
    pub fn prune(&self) -> Result<Automaton, AutomatonError> {
        Ok(Dense::from_automaton(self)?.pruned().to_automaton())
    }

    /// Number of states reachable from the initial state.
    pub fn reachable_count(&self) -> Result<usize, AutomatonError> {
        Ok(Dense::from_automaton(self)?.bfs_order().len())
    }

    /// States in breadth-first order from the initial state, following
    /// transitions sorted by letter then guard.
    pub fn bfs_states(&self) -> Result<Vec<StateId>, AutomatonError> {
        let d = Dense::from_automaton(self)?;
        Ok(d.bfs_order().into_iter().map(|i| d.names[i].clone()).collect())
    }

    /// A fresh `__gen` name not used by this automaton.
    pub fn fresh_name(&self) -> StateId {
        NameGen::new(self.states.iter()).fresh()
    }
}

/// Configuration before a step, with the delay and the transition taken.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub state: StateId,
    pub clock: Rational,
    pub delay: Rational,
    pub transition: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Run {
    pub steps: Vec<Step>,
    pub final_state: StateId,
    pub final_clock: Rational,
}

impl Run {
    /// Indices of the transitions taken, in order.
    pub fn transition_sequence(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.transition).collect()
    }
}

/// `hi([0, K+1)) × Σ`: delays `0, 1/2, …, K + 1/2` with every letter, sorted.
pub fn sigma_k(alphabet: &[Letter], k: u32) -> Vec<(Rational, Letter)> {
    let mut letters = alphabet.to_vec();
    letters.sort();
    let mut out = Vec::new();
    for h in 0..=(2 * k as u64 + 1) {
        for a in &letters {
            out.push((Rational::halves(h), a.clone()));
        }
    }
    out
}

/// Structural equality up to renaming of reachable states.
pub fn isomorphic(a: &Automaton, b: &Automaton) -> bool {
    if a.alphabet != b.alphabet || a.k != b.k || a.is_acceptor() != b.is_acceptor() {
        return false;
    }
    let (Ok(da), Ok(db)) = (Dense::from_automaton(a), Dense::from_automaton(b)) else {
        return false;
    };
    let mut fwd = vec![usize::MAX; da.len()];
    let mut bwd = vec![usize::MAX; db.len()];
    let mut queue = VecDeque::new();
    fwd[da.initial] = db.initial;
    bwd[db.initial] = da.initial;
    queue.push_back((da.initial, db.initial));
    while let Some((p, q)) = queue.pop_front() {
        if da.accepting[p] != db.accepting[q] || da.region(p) != db.region(q) {
            return false;
        }
        let floor = da.live_floor(p);
        for letter in 0..da.alphabet.len() {
            for g in floor..da.nregions() {
                match (da.slot(p, letter, g), db.slot(q, letter, g)) {
                    (None, None) => {}
                    (Some(ea), Some(eb)) => {
                        if ea.update != eb.update {
                            return false;
                        }
                        match (fwd[ea.target], bwd[eb.target]) {
                            (usize::MAX, usize::MAX) => {
                                fwd[ea.target] = eb.target;
                                bwd[eb.target] = ea.target;
                                queue.push_back((ea.target, eb.target));
                            }
                            (x, y) if x == eb.target && y == ea.target => {}
                            _ => return false,
                        }
                    }
                    _ => return false,
                }
            }
        }
    }
    true
}

/// Generates `__gen<N>` names that do not clash with existing ones.
#[derive(Clone, Debug)]
pub struct NameGen {
    next: u64,
}

impl NameGen {
    pub fn new<'a>(existing: impl IntoIterator<Item = &'a StateId>) -> Self {
        let mut next = 0;
        for s in existing {
            if let Some(n) = s
                .as_str()
                .strip_prefix(GENERATED_PREFIX)
                .and_then(|rest| rest.parse::<u64>().ok())
            {
                next = next.max(n + 1);
            }
        }
        NameGen { next }
    }

    pub fn fresh(&mut self) -> StateId {
        let id = StateId::new(format!("{GENERATED_PREFIX}{}", self.next));
        self.next += 1;
        id
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Edge {
    pub target: usize,
    pub update: ClockUpdate,
}

/// Index-based deterministic transition table, one slot per (state, letter, region).
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub k: u32,
    pub alphabet: Vec<Letter>,
    pub names: Vec<StateId>,
    pub initial: usize,
    pub accepting: Vec<bool>,
    pub regions: Option<Vec<Region>>,
    pub slots: Vec<Option<Edge>>,
}

impl Dense {
    pub fn new(k: u32, alphabet: Vec<Letter>, acceptor: bool) -> Dense {
        Dense {
            k,
            alphabet,
            names: Vec::new(),
            initial: 0,
            accepting: Vec::new(),
            regions: if acceptor { Some(Vec::new()) } else { None },
            slots: Vec::new(),
        }
    }

    pub fn from_automaton(a: &Automaton) -> Result<Dense, AutomatonError> {
        let index: BTreeMap<&StateId, usize> =
            a.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut d = Dense::new(a.k, a.alphabet.clone(), a.is_acceptor());
        for s in &a.states {
            d.add_state(
                s.clone(),
                a.is_accepting(s),
                a.region(s).unwrap_or(Region::Point(0)),
            );
        }
        d.initial = index[&a.initial];
        let mut owner: Vec<Option<usize>> = vec![None; d.slots.len()];
        for (i, t) in a.transitions.iter().enumerate() {
            let letter = d.letter_index(&t.letter).expect("letter checked at construction");
            let pos = d.pos(index[&t.source], letter, t.guard.index(a.k));
            if let Some(first) = owner[pos] {
                return Err(AutomatonError::Nondeterministic(Diagnostic::Nondeterministic {
                    state: t.source.clone(),
                    letter: t.letter.clone(),
                    guard: t.guard,
                    first,
                    second: i,
                }));
            }
            owner[pos] = Some(i);
            d.slots[pos] = Some(Edge {
                target: index[&t.target],
                update: t.update,
            });
        }
        Ok(d)
    }

    pub fn to_automaton(&self) -> Automaton {
        let mut transitions = Vec::new();
        for q in 0..self.len() {
            for a in 0..self.alphabet.len() {
                for g in 0..self.nregions() {
                    if let Some(e) = self.slot(q, a, g) {
                        transitions.push(Transition {
                            source: self.names[q].clone(),
                            target: self.names[e.target].clone(),
                            letter: self.alphabet[a].clone(),
                            guard: Region::from_index(g, self.k),
                            update: e.update,
                        });
                    }
                }
            }
        }
        let accepting = (0..self.len())
            .filter(|&q| self.accepting[q])
            .map(|q| self.names[q].clone())
            .collect();
        let regions = self.regions.as_ref().map(|rs| {
            self.names
                .iter()
                .cloned()
                .zip(rs.iter().copied())
                .collect::<BTreeMap<_, _>>()
        });
        Automaton {
            alphabet: self.alphabet.clone(),
            states: self.names.clone(),
            initial: self.names[self.initial].clone(),
            accepting,
            transitions,
            k: self.k,
            regions,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn nregions(&self) -> usize {
        Region::count(self.k)
    }

    fn stride(&self) -> usize {
        self.alphabet.len() * self.nregions()
    }

    pub fn pos(&self, q: usize, letter: usize, g: usize) -> usize {
        q * self.stride() + letter * self.nregions() + g
    }

    pub fn slot(&self, q: usize, letter: usize, g: usize) -> Option<Edge> {
        self.slots[self.pos(q, letter, g)]
    }

    pub fn set_slot(&mut self, q: usize, letter: usize, g: usize, edge: Option<Edge>) {
        let p = self.pos(q, letter, g);
        self.slots[p] = edge;
    }

    pub fn letter_index(&self, l: &Letter) -> Option<usize> {
        self.alphabet.binary_search(l).ok()
    }

    pub fn region(&self, q: usize) -> Option<Region> {
        self.regions.as_ref().map(|r| r[q])
    }

    /// Index of the lowest region that can be observed when leaving `q`.
    pub fn live_floor(&self, q: usize) -> usize {
        self.region(q).map_or(0, |r| r.index(self.k))
    }

    pub fn add_state(&mut self, name: StateId, accepting: bool, region: Region) -> usize {
        let stride = self.stride();
        self.names.push(name);
        self.accepting.push(accepting);
        if let Some(r) = &mut self.regions {
            r.push(region);
        }
        self.slots.extend(core::iter::repeat_n(None, stride));
        self.names.len() - 1
    }

    pub fn name_gen(&self) -> NameGen {
        NameGen::new(self.names.iter())
    }

    pub fn index_of(&self, name: &StateId) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Reachable states in breadth-first order, scanning slots by letter then guard.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            let floor = self.live_floor(q);
            for a in 0..self.alphabet.len() {
                for g in floor..self.nregions() {
                    if let Some(e) = self.slot(q, a, g) {
                        if !seen[e.target] {
                            seen[e.target] = true;
                            queue.push_back(e.target);
                        }
                    }
                }
            }
        }
        order
    }

    /// Keeps reachable states (original relative order) and drops dead slots of acceptors.
    pub fn pruned(&self) -> Dense {
        let mut keep = vec![false; self.len()];
        for q in self.bfs_order() {
            keep[q] = true;
        }
        let mut map = vec![usize::MAX; self.len()];
        let mut out = Dense::new(self.k, self.alphabet.clone(), self.regions.is_some());
        for q in 0..self.len() {
            if keep[q] {
                map[q] = out.add_state(
                    self.names[q].clone(),
                    self.accepting[q],
                    self.region(q).unwrap_or(Region::Point(0)),
                );
            }
        }
        out.initial = map[self.initial];
        for q in 0..self.len() {
            if !keep[q] {
                continue;
            }
            let floor = self.live_floor(q);
            for a in 0..self.alphabet.len() {
                for g in floor..self.nregions() {
                    if let Some(e) = self.slot(q, a, g) {
                        out.set_slot(
                            map[q],
                            a,
                            g,
                            Some(Edge {
                                target: map[e.target],
                                update: e.update,
                            }),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        (0..self.len()).all(|q| {
            let floor = self.live_floor(q);
            (0..self.alphabet.len())
                .all(|a| (floor..self.nregions()).all(|g| self.slot(q, a, g).is_some()))
        })
    }

    /// Fills every missing live slot with a reset into a fresh non-accepting sink.
    pub fn completed(&self) -> Dense {
        if self.is_complete() {
            return self.clone();
        }
        let mut out = self.clone();
        let name = out.name_gen().fresh();
        let sink = out.add_state(name, false, Region::Point(0));
        let to_sink = Some(Edge {
            target: sink,
            update: ClockUpdate::Reset,
        });
        for q in 0..out.len() {
            let floor = out.live_floor(q);
            for a in 0..out.alphabet.len() {
                for g in floor..out.nregions() {
                    if out.slot(q, a, g).is_none() {
                        out.set_slot(q, a, g, to_sink);
                    }
                }
            }
        }
        out
    }

    /// Follows one timed letter from `(q, clock)`.
    pub fn step(&self, q: usize, clock: &Rational, delay: &Rational, letter: usize) -> Option<(usize, Rational)> {
        let value = clock + delay;
        let g = Region::of(&value, self.k).index(self.k);
        let e = self.slot(q, letter, g)?;
        Some((e.target, e.update.apply(value)))
    }

    /// Final configuration of `w`, or `None` when the run gets stuck or a letter is unknown.
    pub fn run_final(&self, w: &TimedWord) -> Option<(usize, Rational)> {
        let mut q = self.initial;
        let mut clock = Rational::zero();
        for tl in w.letters() {
            let a = self.letter_index(&tl.letter)?;
            let (nq, nc) = self.step(q, &clock, &tl.delay, a)?;
            q = nq;
            clock = nc;
        }
        Some((q, clock))
    }

    pub fn accepts(&self, w: &TimedWord) -> bool {
        self.run_final(w).is_some_and(|(q, _)| self.accepting[q])
    }
}

/// Region of `ticks / denom`.
pub(crate) fn region_of_ticks(ticks: u64, denom: u64, k: u32) -> Region {
    if ticks > denom * k as u64 {
        Region::AboveK
    } else if ticks.is_multiple_of(denom) {
        Region::Point((ticks / denom) as u32)
    } else {
        Region::Open((ticks / denom) as u32)
    }
}

/// Small helper for assembling automata by hand.
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    k: u32,
    alphabet: Vec<Letter>,
    states: Vec<StateId>,
    initial: Option<StateId>,
    accepting: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    regions: Option<BTreeMap<StateId, Region>>,
}

impl AutomatonBuilder {
    /// Panics on malformed letters; meant for literals.
    pub fn new<'a>(k: u32, alphabet: impl IntoIterator<Item = &'a str>) -> Self {
        AutomatonBuilder {
            k,
            alphabet: alphabet
                .into_iter()
                .map(|a| Letter::new(a).expect("valid letter"))
                .collect(),
            states: Vec::new(),
            initial: None,
            accepting: BTreeSet::new(),
            transitions: Vec::new(),
            regions: None,
        }
    }

    fn touch(&mut self, s: &str) -> StateId {
        let id = StateId::new(s);
        if !self.states.contains(&id) {
            self.states.push(id.clone());
        }
        if self.initial.is_none() {
            self.initial = Some(id.clone());
        }
        id
    }

    /// Declares a state; the first declared state is initial unless overridden.
    pub fn state(mut self, s: &str) -> Self {
        self.touch(s);
        self
    }

    pub fn initial(mut self, s: &str) -> Self {
        let id = self.touch(s);
        self.initial = Some(id);
        self
    }

    pub fn accepting(mut self, s: &str) -> Self {
        let id = self.touch(s);
        self.accepting.insert(id);
        self
    }

    pub fn region(mut self, s: &str, r: Region) -> Self {
        let id = self.touch(s);
        self.regions.get_or_insert_with(BTreeMap::new).insert(id, r);
        self
    }

    pub fn edge(mut self, from: &str, to: &str, letter: &str, guard: Region, update: ClockUpdate) -> Self {
        let source = self.touch(from);
        let target = self.touch(to);
        self.transitions.push(Transition {
            source,
            target,
            letter: Letter::new(letter).expect("valid letter"),
            guard,
            update,
        });
        self
    }

    /// One transition per region in `guards`.
    pub fn edges(
        mut self,
        from: &str,
        to: &str,
        letter: &str,
        guards: impl IntoIterator<Item = Region>,
        update: ClockUpdate,
    ) -> Self {
        for g in guards {
            self = self.edge(from, to, letter, g, update);
        }
        self
    }

    pub fn build(self) -> Result<Automaton, AutomatonError> {
        let initial = self
            .initial
            .ok_or_else(|| AutomatonError::Precondition("automaton has no states".to_string()))?;
        Automaton::new(
            self.alphabet,
            self.states,
            initial,
            self.accepting,
            self.transitions,
            self.k,
            self.regions,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClockUpdate::*;
    use Region::*;

    fn a_s() -> Automaton {
        AutomatonBuilder::new(1, ["a", "b"])
            .edge("0", "1", "a", Open(0), Keep)
            .edge("1", "2", "b", Open(0), Reset)
            .accepting("2")
            .build()
            .unwrap()
    }

    #[test]
    fn incomplete_slots_are_counted() {
        let a = a_s();
        let missing = a
            .validate()
            .iter()
            .filter(|d| matches!(d, Diagnostic::Incomplete { .. }))
            .count();
        // 3 states, 2 letters, 4 regions, 2 transitions present
        assert_eq!(missing, 3 * 2 * 4 - 2);
        let c = a.complete_with_sink().unwrap();
        assert!(c.validate().is_empty());
        assert_eq!(c.complete_with_sink().unwrap(), c);
    }

    #[test]
    fn nondeterminism_reported() {
        let a = AutomatonBuilder::new(0, ["a"])
            .edge("q", "q", "a", Point(0), Keep)
            .edge("q", "r", "a", Point(0), Keep)
            .build()
            .unwrap();
        assert!(a
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::Nondeterministic { first: 0, second: 1, .. })));
        assert!(a.complete_with_sink().is_err());
    }

    #[test]
    fn empty_automaton_completion() {
        let a = AutomatonBuilder::new(0, ["a"]).state("q").build().unwrap();
        let c = a.complete_with_sink().unwrap();
        assert_eq!(c.states().len(), 2);
        assert_eq!(c.transitions().len(), 2 * 2);
        assert!(c.transitions().iter().all(|t| t.update == Reset));
    }

    #[test]
    fn run_a_s() {
        let a = a_s().complete_with_sink().unwrap();
        let w: TimedWord = "1/2:a 0:b".parse().unwrap();
        let run = a.run(&w).unwrap();
        assert!(a.is_accepting(&run.final_state));
        assert_eq!(run.final_clock, Rational::zero());
        let empty = a.run(&TimedWord::empty()).unwrap();
        assert!(empty.steps.is_empty());
        assert_eq!(&empty.final_state, a.initial());
    }

    #[test]
    fn sigma_k_sizes() {
        let a = [Letter::new("a").unwrap()];
        let s0 = sigma_k(&a, 0);
        assert_eq!(s0.len(), 2);
        assert_eq!(s0[1].0, Rational::new(1, 2));
        assert_eq!(sigma_k(&a, 1).len(), 4);
        let ab = [Letter::new("b").unwrap(), Letter::new("a").unwrap()];
        let s2 = sigma_k(&ab, 2);
        assert_eq!(s2.len(), 12);
        assert_eq!(s2[0].1.as_str(), "a");
    }

    #[test]
    fn isomorphism_ignores_names() {
        let a = a_s().complete_with_sink().unwrap();
        let b = AutomatonBuilder::new(1, ["a", "b"])
            .edge("x", "y", "a", Open(0), Keep)
            .edge("y", "z", "b", Open(0), Reset)
            .accepting("z")
            .build()
            .unwrap()
            .complete_with_sink()
            .unwrap();
        assert!(isomorphic(&a, &b));
        let c = a.with_accepting(BTreeSet::new()).unwrap();
        assert!(!isomorphic(&a, &c));
    }

    #[test]
    fn acceptor_diagnostics() {
        let bad = AutomatonBuilder::new(1, ["a"])
            .region("p", Point(0))
            .region("q", Point(0))
            .edge("p", "q", "a", Open(0), Keep)
            .build()
            .unwrap();
        assert!(bad
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::AcceptorRegion { expected: Open(0), .. })));
    }

    #[test]
    fn name_generator_skips_existing() {
        let names = [StateId::new("__gen3"), StateId::new("q")];
        let mut g = NameGen::new(names.iter());
        assert_eq!(g.fresh().as_str(), "__gen4");
    }
}
