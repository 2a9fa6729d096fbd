//! Seeded random automata.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use timed_learn_core::{Automaton, AutomatonBuilder, ClockUpdate, Region};

use crate::error::CliError;

pub const SEED_VAR: &str = "TIMED_LEARN_SEED";

/// The seed from `TIMED_LEARN_SEED`, or a fresh one when it is unset.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_VAR} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(rand::thread_rng().gen()),
    }
}

/// A complete deterministic automaton: every (state, letter, region) slot gets a
/// random target and update.
pub fn random_automaton(seed: u64, states: usize, k: u32, alphabet: &[String]) -> Result<Automaton, CliError> {
    if states == 0 {
        return Err(CliError::Usage("need at least one state".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters: Vec<&str> = alphabet.iter().map(String::as_str).collect();
    let name = |i: usize| format!("q{i}");
    for l in &letters {
        timed_learn_core::Letter::new(*l)?;
    }
    let mut b = AutomatonBuilder::new(k, letters.iter().copied());
    for i in 0..states {
        b = b.state(&name(i));
        if rng.gen_bool(0.3) {
            b = b.accepting(&name(i));
        }
    }
    for q in 0..states {
        for letter in &letters {
            for g in Region::all(k) {
                let target = rng.gen_range(0..states);
                let update = if rng.gen_bool(0.5) { ClockUpdate::Reset } else { ClockUpdate::Keep };
                b = b.edge(&name(q), &name(target), letter, g, update);
            }
        }
    }
    Ok(b.build()?)
}
