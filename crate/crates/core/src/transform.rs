//! The canonicalization pipeline: acceptor form, bounded resets, strictness,
//! bad-state elimination, state merging and constant reduction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Automaton, ClockUpdate, Dense, Edge, StateId};
use crate::equiv::{dense_equivalent, dense_state_lang_equal, equivalent};
use crate::error::AutomatonError;
use crate::region::Region;

fn acceptor_dense(acc: &Automaton) -> Result<Dense, AutomatonError> {
    if !acc.is_acceptor() {
        return Err(AutomatonError::NotAcceptor);
    }
    Dense::from_automaton(acc)
}

fn region_at(d: &Dense, q: usize) -> Region {
    d.region(q).expect("acceptor form")
}

fn set_region(d: &mut Dense, q: usize, r: Region) {
    d.regions.as_mut().expect("acceptor form")[q] = r;
}

/// Splits every state into one copy per reachable region; keeps the reset function.
pub fn acceptorize(a: &Automaton) -> Result<Automaton, AutomatonError> {
    let plain = Dense::from_automaton(&a.without_regions())?.completed();
    Ok(acceptorize_dense(&plain).to_automaton())
}

fn acceptorize_dense(d: &Dense) -> Dense {
    let mut out = Dense::new(d.k, d.alphabet.clone(), true);
    let mut names = d.name_gen();
    let mut copies: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut named = vec![false; d.len()];
    let mut queue = alloc::collections::VecDeque::new();
    let mut copy_of = |out: &mut Dense, q: usize, g: usize, queue: &mut alloc::collections::VecDeque<(usize, usize, usize)>| -> usize {
        if let Some(&i) = copies.get(&(q, g)) {
            return i;
        }
        let name = if named[q] {
            names.fresh()
        } else {
            named[q] = true;
            d.names[q].clone()
        };
        let i = out.add_state(name, d.accepting[q], Region::from_index(g, d.k));
        copies.insert((q, g), i);
        queue.push_back((q, g, i));
        i
    };
    out.initial = copy_of(&mut out, d.initial, 0, &mut queue);
    while let Some((q, floor, me)) = queue.pop_front() {
        for a in 0..d.alphabet.len() {
            for g in floor..d.nregions() {
                let Some(e) = d.slot(q, a, g) else { continue };
                let target_region = match e.update {
                    ClockUpdate::Reset => 0,
                    ClockUpdate::Keep => g,
                };
                let t = copy_of(&mut out, e.target, target_region, &mut queue);
                out.set_slot(
                    me,
                    a,
                    g,
                    Some(Edge {
                        target: t,
                        update: e.update,
                    }),
                );
            }
        }
    }
    out
}

/// Reroutes every state of region `(K, ∞)` through resets, so clock values stay in `[0, K]`.
pub fn bound_reset_range(acc: &Automaton) -> Result<Automaton, AutomatonError> {
    let d = acceptor_dense(acc)?;
    Ok(bound_reset_range_dense(&d).to_automaton())
}

fn bound_reset_range_dense(d: &Dense) -> Dense {
    let top = d.nregions() - 1;
    let mut out = d.clone();
    for q in 0..d.len() {
        if region_at(d, q) == Region::AboveK {
            for a in 0..d.alphabet.len() {
                let edge = d.slot(q, a, top).map(|e| Edge {
                    target: e.target,
                    update: ClockUpdate::Reset,
                });
                for g in 0..d.nregions() {
                    out.set_slot(q, a, g, edge);
                }
            }
            set_region(&mut out, q, Region::Point(0));
        } else {
            for a in 0..d.alphabet.len() {
                for g in 0..d.nregions() {
                    if let Some(e) = d.slot(q, a, g) {
                        if e.update == ClockUpdate::Keep && region_at(d, e.target) == Region::AboveK {
                            out.set_slot(
                                q,
                                a,
                                g,
                                Some(Edge {
                                    target: e.target,
                                    update: ClockUpdate::Reset,
                                }),
                            );
                        }
                    }
                }
            }
        }
    }
    out.pruned()
}

/// Removes every state of integer region `{n}`, `n ≥ 1`, from the largest `n` down,
/// making every equality-guarded transition reset.
pub fn strictify(acc: &Automaton) -> Result<Automaton, AutomatonError> {
    let d = acceptor_dense(acc)?;
    Ok(strictify_dense(d)?.to_automaton())
}

fn strictify_dense(mut d: Dense) -> Result<Dense, AutomatonError> {
    let regions = d.regions.as_ref().expect("acceptor form");
    if regions.contains(&Region::AboveK) {
        return Err(AutomatonError::Precondition(
            "strictify needs clock values bounded by K; run bound_reset_range first".to_string(),
        ));
    }
    while let Some(m) = max_integer_region(&d) {
        d = strictify_step(&d, m)?;
    }
    reset_at_zero(&mut d);
    Ok(d)
}

/// Keeping a clock that reads 0 is a reset; write it as one so equal languages get
/// identical transitions.
fn reset_at_zero(d: &mut Dense) {
    let zero = Region::Point(0).index(d.k);
    for q in 0..d.len() {
        for a in 0..d.alphabet.len() {
            if let Some(e) = d.slot(q, a, zero) {
                if e.update == ClockUpdate::Keep {
                    d.set_slot(
                        q,
                        a,
                        zero,
                        Some(Edge {
                            target: e.target,
                            update: ClockUpdate::Reset,
                        }),
                    );
                }
            }
        }
    }
}

fn max_integer_region(d: &Dense) -> Option<u32> {
    d.regions
        .as_ref()
        .expect("acceptor form")
        .iter()
        .filter_map(|r| match r {
            Region::Point(n) if *n >= 1 => Some(*n),
            _ => None,
        })
        .max()
}

/// Guards of a resetting transition leaving the critical portion, shifted down by `m`.
fn shifted_guards(guard: Region, m: u32, k: u32) -> Vec<usize> {
    match guard {
        Region::Point(c) => vec![Region::Point(c - m).index(k)],
        Region::Open(c) => vec![Region::Open(c - m).index(k)],
        Region::AboveK => (Region::Open(k - m).index(k)..Region::count(k)).collect(),
    }
}

fn strictify_step(orig: &Dense, m: u32) -> Result<Dense, AutomatonError> {
    let k = orig.k;
    let n = orig.len();
    let critical: Vec<bool> = (0..n).map(|q| region_at(orig, q) == Region::Point(m)).collect();
    let mut d = orig.clone();
    let mut names = d.name_gen();
    let mut bar = vec![usize::MAX; n];
    for (q, slot) in bar.iter_mut().enumerate() {
        match region_at(orig, q) {
            Region::Point(c) if c == m => *slot = q,
            Region::Open(i) if i >= m => {
                *slot = d.add_state(names.fresh(), orig.accepting[q], Region::Open(i - m));
            }
            _ => {}
        }
    }
    // entering a critical state now resets the clock
    for p in (0..n).filter(|&p| !critical[p]) {
        for a in 0..orig.alphabet.len() {
            for g in 0..orig.nregions() {
                if let Some(e) = orig.slot(p, a, g) {
                    if critical[e.target] && e.update == ClockUpdate::Keep {
                        d.set_slot(
                            p,
                            a,
                            g,
                            Some(Edge {
                                target: e.target,
                                update: ClockUpdate::Reset,
                            }),
                        );
                    }
                }
            }
        }
    }
    for q in (0..n).filter(|&q| critical[q]) {
        for a in 0..orig.alphabet.len() {
            for g in 0..orig.nregions() {
                d.set_slot(q, a, g, None);
            }
        }
        set_region(&mut d, q, Region::Point(0));
    }
    // the shifted copy of the critical portion, with clock value lowered by m
    for s in (0..n).filter(|&s| bar[s] != usize::MAX) {
        let from = bar[s];
        for a in 0..orig.alphabet.len() {
            for g in orig.live_floor(s)..orig.nregions() {
                let Some(e) = orig.slot(s, a, g) else { continue };
                let guard = Region::from_index(g, k);
                match (e.update, guard) {
                    (ClockUpdate::Keep, Region::Point(c)) if c == m && critical[e.target] => {
                        d.set_slot(
                            from,
                            a,
                            0,
                            Some(Edge {
                                target: e.target,
                                update: ClockUpdate::Reset,
                            }),
                        );
                    }
                    (ClockUpdate::Keep, Region::Open(c)) if c >= m && bar[e.target] != usize::MAX => {
                        d.set_slot(
                            from,
                            a,
                            Region::Open(c - m).index(k),
                            Some(Edge {
                                target: bar[e.target],
                                update: ClockUpdate::Keep,
                            }),
                        );
                    }
                    (ClockUpdate::Keep, _) => {
                        return Err(AutomatonError::Precondition(format!(
                            "unexpected non-resetting transition from `{}` with guard {guard} while removing region {{{m}}}",
                            orig.names[s]
                        )));
                    }
                    (ClockUpdate::Reset, _) => {
                        for h in shifted_guards(guard, m, k) {
                            d.set_slot(
                                from,
                                a,
                                h,
                                Some(Edge {
                                    target: e.target,
                                    update: ClockUpdate::Reset,
                                }),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(d.pruned())
}

/// The automaton that resets when entering `q` and then behaves as if read at `x = K`.
pub fn build_aq(acc: &Automaton, q: &StateId) -> Result<Automaton, AutomatonError> {
    let d = acceptor_dense(acc)?;
    let i = d
        .index_of(q)
        .ok_or_else(|| AutomatonError::UnknownState(q.to_string()))?;
    Ok(build_aq_dense(&d, i)?.to_automaton())
}

fn build_aq_dense(d: &Dense, q: usize) -> Result<Dense, AutomatonError> {
    if region_at(d, q) == Region::Point(0) {
        return Err(AutomatonError::Precondition(format!(
            "state `{}` already has region {{0}}",
            d.names[q]
        )));
    }
    let at_k = Region::Point(d.k).index(d.k);
    let mut targets = Vec::with_capacity(d.alphabet.len());
    for a in 0..d.alphabet.len() {
        let e = d.slot(q, a, at_k).ok_or_else(|| {
            AutomatonError::Precondition(format!(
                "state `{}` has no transition on `{}` at x={}",
                d.names[q], d.alphabet[a], d.k
            ))
        })?;
        targets.push(e.target);
    }
    let mut out = d.clone();
    for p in (0..d.len()).filter(|&p| p != q) {
        for a in 0..d.alphabet.len() {
            for g in 0..d.nregions() {
                if let Some(e) = d.slot(p, a, g) {
                    if e.target == q && e.update == ClockUpdate::Keep {
                        out.set_slot(
                            p,
                            a,
                            g,
                            Some(Edge {
                                target: q,
                                update: ClockUpdate::Reset,
                            }),
                        );
                    }
                }
            }
        }
    }
    for (a, &t) in targets.iter().enumerate() {
        for g in 0..d.nregions() {
            out.set_slot(
                q,
                a,
                g,
                Some(Edge {
                    target: t,
                    update: ClockUpdate::Reset,
                }),
            );
        }
    }
    set_region(&mut out, q, Region::Point(0));
    Ok(out)
}

/// Replaces the acceptor by `A_q` for every state `q` (nonzero region, breadth-first
/// order) whose swap `eq_check` confirms as language preserving.
pub fn eliminate_bad_states<E, F>(acc: &Automaton, mut eq_check: F) -> Result<Automaton, E>
where
    E: From<AutomatonError>,
    F: FnMut(&Automaton) -> Result<bool, E>,
{
    let mut cur = acceptor_dense(acc)?;
    let order: Vec<StateId> = cur
        .bfs_order()
        .into_iter()
        .filter(|&q| region_at(&cur, q) != Region::Point(0))
        .map(|q| cur.names[q].clone())
        .collect();
    for name in order {
        let Some(q) = cur.index_of(&name) else { continue };
        if region_at(&cur, q) == Region::Point(0) {
            continue;
        }
        let candidate = build_aq_dense(&cur, q)?;
        if eq_check(&candidate.to_automaton())? {
            cur = candidate;
        }
    }
    Ok(cur.pruned().to_automaton())
}

/// Bad-state elimination checked against the input language.
pub fn eliminate_bad_states_offline(acc: &Automaton) -> Result<Automaton, AutomatonError> {
    let reference = Dense::from_automaton(acc)?.completed();
    eliminate_bad_states(acc, |cand| {
        let c = Dense::from_automaton(cand)?.completed();
        Ok(dense_equivalent(&reference, &c).is_equivalent())
    })
}

fn redirect(d: &Dense, keep: usize, drop: usize) -> Dense {
    let mut out = d.clone();
    for slot in out.slots.iter_mut().flatten() {
        if slot.target == drop {
            slot.target = keep;
        }
    }
    out.pruned()
}

/// Repeatedly merges the first pair (breadth-first order) accepted by `accept`,
/// among pairs sharing region and acceptance.
fn merge_loop<E, F>(start: Dense, mut accept: F) -> Result<Dense, E>
where
    F: FnMut(&Dense, usize, usize, &Dense) -> Result<bool, E>,
{
    let mut cur = start;
    'outer: loop {
        let order = cur.bfs_order();
        for (i, &p) in order.iter().enumerate() {
            for &q in &order[i + 1..] {
                if cur.region(p) != cur.region(q) || cur.accepting[p] != cur.accepting[q] {
                    continue;
                }
                let merged = redirect(&cur, p, q);
                if accept(&cur, p, q, &merged)? {
                    cur = merged;
                    continue 'outer;
                }
            }
        }
        return Ok(cur);
    }
}

/// Merges states with equal regions and equal languages at their region's
/// half-integral value; every merge is checked to preserve the language.
pub fn merge_equivalent_states(acc: &Automaton) -> Result<Automaton, AutomatonError> {
    let d = acceptor_dense(acc)?.pruned();
    let merged = merge_loop(d, |cur, p, q, merged| {
        if !dense_state_lang_equal(cur, p, q) {
            return Ok(false);
        }
        if !dense_equivalent(&cur.completed(), &merged.completed()).is_equivalent() {
            return Err(AutomatonError::Precondition(format!(
                "merging `{}` into `{}` changes the language",
                cur.names[q], cur.names[p]
            )));
        }
        Ok(true)
    })?;
    Ok(merged.to_automaton())
}

/// Merges pairs of states with equal regions whenever `check` accepts the merged automaton.
pub fn merge_states_validated<E, F>(acc: &Automaton, mut check: F) -> Result<Automaton, E>
where
    E: From<AutomatonError>,
    F: FnMut(&Automaton) -> Result<bool, E>,
{
    let d = acceptor_dense(acc)?.pruned();
    let merged = merge_loop(d, |_, _, _, merged| check(&merged.to_automaton()))?;
    Ok(merged.to_automaton())
}

fn constant_suffices(d: &Dense, m: u32) -> bool {
    if m >= d.k {
        return true;
    }
    let top = d.nregions() - 1;
    let first_above = Region::Open(m).index(d.k);
    for q in 0..d.len() {
        if region_at(d, q).index(d.k) >= first_above {
            return false;
        }
        for a in 0..d.alphabet.len() {
            let q_a = d.slot(q, a, top);
            if q_a.is_some_and(|e| e.update != ClockUpdate::Reset) {
                return false;
            }
            if (first_above..top).any(|g| d.slot(q, a, g) != q_a) {
                return false;
            }
        }
    }
    true
}

/// Lowers the constant to the least `m` for which all transitions above `m` agree with
/// the transition above `K`, grouping them into one `x>m` transition.
pub fn reduce_constant(acc: &Automaton) -> Result<Automaton, AutomatonError> {
    let d = acceptor_dense(acc)?;
    Ok(reduce_constant_dense(&d).to_automaton())
}

fn reduce_constant_dense(d: &Dense) -> Dense {
    let m = (0..=d.k)
        .find(|&m| constant_suffices(d, m))
        .unwrap_or(d.k);
    if m == d.k {
        return d.clone();
    }
    let mut out = Dense::new(m, d.alphabet.clone(), true);
    for q in 0..d.len() {
        out.add_state(d.names[q].clone(), d.accepting[q], region_at(d, q));
    }
    out.initial = d.initial;
    let top_old = d.nregions() - 1;
    let top_new = out.nregions() - 1;
    for q in 0..d.len() {
        for a in 0..d.alphabet.len() {
            for g in 0..top_new {
                out.set_slot(q, a, g, d.slot(q, a, g));
            }
            out.set_slot(q, a, top_new, d.slot(q, a, top_old));
        }
    }
    out
}

/// Every intermediate automaton of [`canonicalize`], with its stage name.
#[derive(Clone, Debug)]
pub struct Canonicalization {
    pub stages: Vec<(String, Automaton)>,
}

impl Canonicalization {
    pub fn result(&self) -> &Automaton {
        &self.stages.last().expect("at least one stage").1
    }
}

/// Stage names, in pipeline order.
pub const STAGES: [&str; 7] = [
    "complete",
    "acceptorize",
    "bound-reset-range",
    "strictify",
    "eliminate-bad-states",
    "merge-states",
    "reduce-constant",
];

fn rl_stages(a: &Automaton) -> Result<Vec<Automaton>, AutomatonError> {
    let complete = Dense::from_automaton(&a.without_regions())?.completed();
    let acc = acceptorize_dense(&complete).pruned();
    let bounded = bound_reset_range_dense(&acc);
    let strict = strictify_dense(bounded.clone())?;
    let strict_aut = strict.to_automaton();
    let rl = eliminate_bad_states_offline(&strict_aut)?;
    Ok(vec![
        complete.to_automaton(),
        acc.to_automaton(),
        bounded.to_automaton(),
        strict_aut,
        rl,
    ])
}

/// An automaton for `L(a)` whose reset function is the syntactic one.
pub fn syntactic_reset_automaton(a: &Automaton) -> Result<Automaton, AutomatonError> {
    Ok(rl_stages(a)?.pop().expect("nonempty pipeline"))
}

/// Computes the canonical strict acceptor of `L(a)`.
pub fn canonicalize(a: &Automaton) -> Result<Canonicalization, AutomatonError> {
    let mut autos = rl_stages(a)?;
    let merged = merge_equivalent_states(autos.last().expect("nonempty pipeline"))?;
    let reduced = reduce_constant(&merged)?;
    autos.push(merged);
    autos.push(reduced);
    Ok(Canonicalization {
        stages: STAGES
            .iter()
            .map(|s| s.to_string())
            .zip(autos)
            .collect(),
    })
}

/// Checks that `b` accepts the same language as `a`; handy after each stage.
pub fn same_language(a: &Automaton, b: &Automaton) -> Result<bool, AutomatonError> {
    Ok(equivalent(a, b)?.is_equivalent())
}

/// Every transition guarded by `x = n` with `n ≥ 1` resets.
pub fn is_strict(a: &Automaton) -> bool {
    a.transitions().iter().all(|t| match t.guard {
        Region::Point(n) if n >= 1 => t.update == ClockUpdate::Reset,
        _ => true,
    })
}
