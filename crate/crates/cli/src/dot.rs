//! Graphviz export. Edges read `letter, guard, bit` with bit 0 for a reset, and
//! resetting edges are dashed.
//!
//! The output carries `K`, the alphabet and state regions in `comment` attributes,
//! so [`parse_dot`] can read it back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;
use timed_learn_core::{Automaton, ClockUpdate, Letter, Region, StateId, Transition};

use crate::guard::parse_guard;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DotError {
    #[error("DOT syntax error near token {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("DOT graph lacks `{0}`")]
    Missing(&'static str),
    #[error("invalid DOT content: {0}")]
    Content(String),
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Name of the invisible entry node, chosen not to clash with any state.
fn entry_name(a: &Automaton) -> String {
    let mut name = String::from("__entry");
    while a.states().iter().any(|s| s.as_str() == name) {
        name.push('_');
    }
    name
}

pub fn export_dot(a: &Automaton) -> String {
    let k = a.k();
    let mut out = String::new();
    let alphabet: Vec<&str> = a.alphabet().iter().map(|l| l.as_str()).collect();
    out.push_str("digraph automaton {\n");
    let _ = writeln!(out, "  comment={};", quote(&format!("k={k}; alphabet={}", alphabet.join(" "))));
    out.push_str("  rankdir=LR;\n");
    let entry = entry_name(a);
    let _ = writeln!(out, "  {} [shape=point, label=\"\"];", quote(&entry));
    for s in a.states() {
        let shape = if a.is_accepting(s) { "doublecircle" } else { "circle" };
        match a.region(s) {
            Some(r) => {
                let _ = writeln!(
                    out,
                    "  {} [shape={shape}, comment={}];",
                    quote(s.as_str()),
                    quote(&format!("region={}", r.guard_string(k)))
                );
            }
            None => {
                let _ = writeln!(out, "  {} [shape={shape}];", quote(s.as_str()));
            }
        }
    }
    let _ = writeln!(out, "  {} -> {};", quote(&entry), quote(a.initial().as_str()));
    for t in a.transitions() {
        let label = format!("{}, {}, {}", t.letter, t.guard.guard_string(k), t.update.bit());
        let style = if t.update == ClockUpdate::Reset { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(t.source.as_str()),
            quote(t.target.as_str()),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, DotError> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    let err = |pos: usize, msg: &str| DotError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | '=' | ';' | ',' => {
                chars.next();
                toks.push(Tok::Sym(match c {
                    '{' => "{",
                    '}' => "}",
                    '[' => "[",
                    ']' => "]",
                    '=' => "=",
                    ';' => ";",
                    _ => ",",
                }));
            }
            '-' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(err(toks.len(), "expected `->`"));
                }
                toks.push(Tok::Sym("->"));
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(e) => s.push(e),
                            None => return Err(err(toks.len(), "unterminated string")),
                        },
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(err(toks.len(), "unterminated string")),
                    }
                }
                toks.push(Tok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_alphanumeric() || ch == '_' || ch == '.' {
                        s.push(ch);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Id(s));
            }
            _ => return Err(err(toks.len(), &format!("unexpected character `{c}`"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> DotError {
        DotError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), DotError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{sym}`")))
        }
    }

    fn id(&mut self) -> Result<String, DotError> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn attrs(&mut self) -> Result<BTreeMap<String, String>, DotError> {
        let mut out = BTreeMap::new();
        if !self.eat("[") {
            return Ok(out);
        }
        while !self.eat("]") {
            let key = self.id()?;
            self.expect("=")?;
            out.insert(key, self.id()?);
            self.eat(",");
            self.eat(";");
        }
        Ok(out)
    }
}

/// Reads back the output of [`export_dot`].
pub fn parse_dot(src: &str) -> Result<Automaton, DotError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    if p.id()? != "digraph" {
        return Err(p.err("expected `digraph`"));
    }
    if matches!(p.peek(), Some(Tok::Id(_))) {
        p.id()?;
    }
    p.expect("{")?;

    let mut graph_comment = None;
    let mut nodes: Vec<(String, BTreeMap<String, String>)> = Vec::new();
    let mut edges: Vec<(String, String, BTreeMap<String, String>)> = Vec::new();
    while !p.eat("}") {
        let first = p.id()?;
        if p.eat("=") {
            let value = p.id()?;
            if first == "comment" {
                graph_comment = Some(value);
            }
        } else if p.eat("->") {
            let to = p.id()?;
            let attrs = p.attrs()?;
            edges.push((first, to, attrs));
        } else {
            let attrs = p.attrs()?;
            if first != "node" && first != "edge" && first != "graph" {
                nodes.push((first, attrs));
            }
        }
        p.eat(";");
    }

    let comment = graph_comment.ok_or(DotError::Missing("comment"))?;
    let mut k = None;
    let mut alphabet = None;
    for part in comment.split(';') {
        if let Some(v) = part.trim().strip_prefix("k=") {
            k = Some(v.parse::<u32>().map_err(|_| DotError::Content(format!("bad constant `{v}`")))?);
        } else if let Some(v) = part.trim().strip_prefix("alphabet=") {
            alphabet = Some(
                v.split_whitespace()
                    .map(Letter::new)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| DotError::Content(e.to_string()))?,
            );
        }
    }
    let k = k.ok_or(DotError::Missing("k"))?;
    let alphabet = alphabet.ok_or(DotError::Missing("alphabet"))?;

    let entry: BTreeSet<&str> = nodes
        .iter()
        .filter(|(_, a)| a.get("shape").map(String::as_str) == Some("point"))
        .map(|(n, _)| n.as_str())
        .collect();
    let single_region = |text: &str| -> Result<Region, DotError> {
        match parse_guard(text, k).map_err(|e| DotError::Content(e.to_string()))?[..] {
            [r] => Ok(r),
            _ => Err(DotError::Content(format!("`{text}` is not a single region"))),
        }
    };
    let mut states = Vec::new();
    let mut accepting = BTreeSet::new();
    let mut regions = BTreeMap::new();
    for (name, attrs) in &nodes {
        if entry.contains(name.as_str()) {
            continue;
        }
        let id = StateId::new(name.as_str());
        if attrs.get("shape").map(String::as_str) == Some("doublecircle") {
            accepting.insert(id.clone());
        }
        if let Some(r) = attrs.get("comment").and_then(|c| c.strip_prefix("region=")) {
            regions.insert(id.clone(), single_region(r)?);
        }
        states.push(id);
    }

    let mut initial = None;
    let mut transitions = Vec::new();
    for (from, to, attrs) in &edges {
        if entry.contains(from.as_str()) {
            initial = Some(StateId::new(to.as_str()));
            continue;
        }
        let label = attrs.get("label").ok_or(DotError::Missing("label"))?;
        let parts: Vec<&str> = label.split(", ").collect();
        let bad = || DotError::Content(format!("bad edge label `{label}`"));
        let [letter, guard, bit] = parts[..] else { return Err(bad()) };
        let update = bit.parse().ok().and_then(ClockUpdate::from_bit).ok_or_else(bad)?;
        transitions.push(Transition {
            source: StateId::new(from.as_str()),
            target: StateId::new(to.as_str()),
            letter: Letter::new(letter).map_err(|e| DotError::Content(e.to_string()))?,
            guard: single_region(guard)?,
            update,
        });
    }
    let initial = initial.ok_or(DotError::Missing("entry edge"))?;
    let regions = (!regions.is_empty()).then_some(regions);
    Automaton::new(alphabet, states, initial, accepting, transitions, k, regions)
        .map_err(|e| DotError::Content(e.to_string()))
}
