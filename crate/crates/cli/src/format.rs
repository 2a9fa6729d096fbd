//! The JSON automaton file format.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use timed_learn_core::{Automaton, ClockUpdate, Letter, StateId, Transition};

use crate::error::CliError;
use crate::guard::parse_guard;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub alphabet: Vec<String>,
    pub k: u32,
    pub states: Vec<String>,
    pub initial: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionFile {
    pub from: String,
    pub to: String,
    pub letter: String,
    pub guard: String,
    pub reset: bool,
}

impl AutomatonFile {
    pub fn from_automaton(a: &Automaton) -> Self {
        let k = a.k();
        AutomatonFile {
            alphabet: a.alphabet().iter().map(|l| l.to_string()).collect(),
            k,
            states: a.states().iter().map(|s| s.to_string()).collect(),
            initial: a.initial().to_string(),
            accepting: a.accepting().iter().map(|s| s.to_string()).collect(),
            transitions: a
                .transitions()
                .iter()
                .map(|t| TransitionFile {
                    from: t.source.to_string(),
                    to: t.target.to_string(),
                    letter: t.letter.to_string(),
                    guard: t.guard.guard_string(k),
                    reset: t.update == ClockUpdate::Reset,
                })
                .collect(),
            regions: a.regions().map(|m| {
                m.iter()
                    .map(|(s, r)| (s.to_string(), r.guard_string(k)))
                    .collect()
            }),
        }
    }

    /// Builds the automaton, expanding macro guards into one transition per region.
    pub fn to_automaton(&self) -> Result<Automaton, CliError> {
        let alphabet = self
            .alphabet
            .iter()
            .map(|l| Letter::new(l.as_str()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let update = if t.reset { ClockUpdate::Reset } else { ClockUpdate::Keep };
            for guard in parse_guard(&t.guard, self.k)? {
                transitions.push(Transition {
                    source: StateId::new(t.from.as_str()),
                    target: StateId::new(t.to.as_str()),
                    letter: Letter::new(t.letter.as_str())?,
                    guard,
                    update,
                });
            }
        }
        let regions = match &self.regions {
            None => None,
            Some(m) => {
                let mut out = BTreeMap::new();
                for (s, g) in m {
                    let covered = parse_guard(g, self.k)?;
                    let [region] = covered[..] else {
                        return Err(CliError::Usage(format!(
                            "region of state `{s}` must be a single region, got `{g}`"
                        )));
                    };
                    out.insert(StateId::new(s.as_str()), region);
                }
                Some(out)
            }
        };
        Ok(Automaton::new(
            alphabet,
            self.states.iter().map(|s| StateId::new(s.as_str())).collect(),
            StateId::new(self.initial.as_str()),
            self.accepting
                .iter()
                .map(|s| StateId::new(s.as_str()))
                .collect::<BTreeSet<_>>(),
            transitions,
            self.k,
            regions,
        )?)
    }
}

pub fn parse_automaton(json: &str) -> Result<Automaton, CliError> {
    let file: AutomatonFile = serde_json::from_str(json)?;
    file.to_automaton()
}

/// Pretty JSON with a trailing newline.
pub fn to_json(a: &Automaton) -> String {
    let mut s = serde_json::to_string_pretty(&AutomatonFile::from_automaton(a))
        .expect("automaton files always serialize");
    s.push('\n');
    s
}
