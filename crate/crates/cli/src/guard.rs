//! Guard text: single regions (`x=1`, `0<x<1`, `x>2`) and shorthand forms
//! (`0<=x`, `x!=2`, `x∉(0,1)`), expanded to the regions they cover.

use thiserror::Error;
use timed_learn_core::{Rational, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuardError {
    #[error("cannot parse guard `{0}`")]
    Syntax(String),
    #[error("guard `{guard}` splits the region x>{k}")]
    SplitsTop { guard: String, k: u32 },
    #[error("guard `{0}` matches no clock value")]
    Empty(String),
}

/// One end of an interval: the integer and whether it is included.
type Bound = Option<(u64, bool)>;

#[derive(Clone, Copy, Debug)]
struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    const ALL: Interval = Interval { lo: None, hi: None };

    fn contains(&self, v: &Rational) -> bool {
        let above = match self.lo {
            None => true,
            Some((n, true)) => *v >= n,
            Some((n, false)) => *v > n,
        };
        let below = match self.hi {
            None => true,
            Some((n, true)) => *v <= n,
            Some((n, false)) => *v < n,
        };
        above && below
    }

    fn largest_endpoint(&self) -> u64 {
        [self.lo, self.hi].iter().flatten().map(|b| b.0).max().unwrap_or(0)
    }
}

/// Regions of constant `k` covered by `text`, in increasing order.
pub fn parse_guard(text: &str, k: u32) -> Result<Vec<Region>, GuardError> {
    let src: String = text
        .replace('≤', "<=")
        .replace('≥', ">=")
        .replace('≠', "!=")
        .replace('∞', "inf")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let bad = || GuardError::Syntax(text.to_string());
    let (negated, interval) = if src.is_empty() || src == "true" {
        (false, Interval::ALL)
    } else if let Some(n) = src.strip_prefix("x!=") {
        let n = integer(n).ok_or_else(bad)?;
        (true, Interval { lo: Some((n, true)), hi: Some((n, true)) })
    } else if let Some(rest) = src.strip_prefix("x∉").or_else(|| src.strip_prefix("xnotin")) {
        (true, bracketed(rest).ok_or_else(bad)?)
    } else if let Some(rest) = src.strip_prefix("x∈").or_else(|| src.strip_prefix("xin")) {
        (false, bracketed(rest).ok_or_else(bad)?)
    } else {
        (false, chain(&src).ok_or_else(bad)?)
    };

    let holds = |v: &Rational| interval.contains(v) != negated;
    let mut out = Vec::new();
    for r in Region::all(k) {
        if r != Region::AboveK {
            if holds(&r.representative(k)) {
                out.push(r);
            }
            continue;
        }
        // every value above k up to past the last endpoint must agree
        let top = 2 * (interval.largest_endpoint().max(k as u64) + 1) + 1;
        let mut samples = (2 * k as u64 + 1..=top).map(|h| holds(&Rational::halves(h)));
        let first = samples.next().unwrap_or(false);
        if samples.any(|s| s != first) {
            return Err(GuardError::SplitsTop {
                guard: text.to_string(),
                k,
            });
        }
        if first {
            out.push(r);
        }
    }
    if out.is_empty() {
        return Err(GuardError::Empty(text.to_string()));
    }
    Ok(out)
}

fn integer(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `(a,b)`, `[a,b]`, `[a,inf)` and mixtures.
fn bracketed(s: &str) -> Option<Interval> {
    let lo_incl = match s.chars().next()? {
        '[' => true,
        '(' => false,
        _ => return None,
    };
    let hi_incl = match s.chars().last()? {
        ']' => true,
        ')' => false,
        _ => return None,
    };
    let (a, b) = s[1..s.len() - 1].split_once(',')?;
    let hi = if b == "inf" { None } else { Some((integer(b)?, hi_incl)) };
    Some(Interval {
        lo: Some((integer(a)?, lo_incl)),
        hi,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

/// Comparison chains over `x` and integers: `x=1`, `x<2`, `1<x<2`, `2>=x`, `0<=x<1`.
fn chain(s: &str) -> Option<Interval> {
    let mut atoms = Vec::new();
    let mut ops = Vec::new();
    let mut rest = s;
    loop {
        let end = rest.find(['<', '>', '=']).unwrap_or(rest.len());
        atoms.push(&rest[..end]);
        rest = &rest[end..];
        if rest.is_empty() {
            break;
        }
        let (op, len) = if let Some(r) = rest.strip_prefix("<=") {
            (Op::Le, rest.len() - r.len())
        } else if rest.starts_with(">=") {
            (Op::Ge, 2)
        } else if rest.starts_with("==") {
            (Op::Eq, 2)
        } else if rest.starts_with('<') {
            (Op::Lt, 1)
        } else if rest.starts_with('>') {
            (Op::Gt, 1)
        } else {
            (Op::Eq, 1)
        };
        ops.push(op);
        rest = &rest[len..];
    }
    if ops.is_empty() || ops.len() > 2 || atoms.iter().filter(|a| **a == "x").count() != 1 {
        return None;
    }
    let mut iv = Interval::ALL;
    for (i, op) in ops.iter().enumerate() {
        let (left, right) = (atoms[i], atoms[i + 1]);
        // normalize to `x op n`
        let (op, n) = if left == "x" {
            (*op, integer(right)?)
        } else if right == "x" {
            let flipped = match op {
                Op::Lt => Op::Gt,
                Op::Le => Op::Ge,
                Op::Gt => Op::Lt,
                Op::Ge => Op::Le,
                Op::Eq => Op::Eq,
            };
            (flipped, integer(left)?)
        } else {
            return None;
        };
        match op {
            Op::Lt => iv.hi = tighter_hi(iv.hi, (n, false)),
            Op::Le => iv.hi = tighter_hi(iv.hi, (n, true)),
            Op::Gt => iv.lo = tighter_lo(iv.lo, (n, false)),
            Op::Ge => iv.lo = tighter_lo(iv.lo, (n, true)),
            Op::Eq => {
                iv.lo = tighter_lo(iv.lo, (n, true));
                iv.hi = tighter_hi(iv.hi, (n, true));
            }
        }
    }
    Some(iv)
}

fn tighter_lo(cur: Bound, new: (u64, bool)) -> Bound {
    match cur {
        Some(c) if (c.0, !c.1) > (new.0, !new.1) => Some(c),
        _ => Some(new),
    }
}

fn tighter_hi(cur: Bound, new: (u64, bool)) -> Bound {
    match cur {
        Some(c) if (c.0, c.1) < (new.0, new.1) => Some(c),
        _ => Some(new),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Region::*;

    #[test]
    fn single_regions() {
        assert_eq!(parse_guard("x=1", 2).unwrap(), [Point(1)]);
        assert_eq!(parse_guard("0<x<1", 2).unwrap(), [Open(0)]);
        assert_eq!(parse_guard("x>2", 2).unwrap(), [AboveK]);
        assert_eq!(parse_guard(" 1 < x < 2 ", 2).unwrap(), [Open(1)]);
    }

    #[test]
    fn macros_expand() {
        assert_eq!(parse_guard("0<=x", 1).unwrap(), Region::all(1));
        assert_eq!(parse_guard("x!=2", 2).unwrap(), [Point(0), Open(0), Point(1), Open(1), AboveK]);
        assert_eq!(
            parse_guard("x∉(0,1)", 2).unwrap(),
            [Point(0), Point(1), Open(1), Point(2), AboveK]
        );
        assert_eq!(parse_guard("x≥1", 1).unwrap(), [Point(1), AboveK]);
        assert_eq!(parse_guard("x in [1,inf)", 1).unwrap(), [Point(1), AboveK]);
        assert_eq!(parse_guard("0<=x<2", 2).unwrap(), [Point(0), Open(0), Point(1), Open(1)]);
    }

    #[test]
    fn rejects_bad_guards() {
        assert!(matches!(parse_guard("x=3", 2), Err(GuardError::SplitsTop { .. })));
        assert!(matches!(parse_guard("x<1<2", 2), Err(GuardError::Syntax(_))));
        assert!(matches!(parse_guard("y=1", 2), Err(GuardError::Syntax(_))));
        assert!(matches!(parse_guard("x=1/2", 2), Err(GuardError::Syntax(_))));
        assert!(matches!(parse_guard("1<x<1", 2), Err(GuardError::Empty(_))));
    }
}
