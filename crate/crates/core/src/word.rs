//! Letters and timed words.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::ParseError;
use crate::rational::Rational;

/// An alphabet symbol: a nonempty string without whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(String);

impl Letter {
    pub fn new(s: impl Into<String>) -> Result<Self, ParseError> {
        let s = s.into();
        if s.is_empty() || s.chars().any(char::is_whitespace) {
            return Err(ParseError::Letter(s));
        }
        Ok(Letter(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Letter {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Letter::new(s)
    }
}

/// One timed letter: a delay followed by a letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TimedLetter {
    pub delay: Rational,
    pub letter: Letter,
}

/// A finite timed word; the empty word is `ε`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct TimedWord(Vec<TimedLetter>);

impl TimedWord {
    pub fn empty() -> Self {
        TimedWord(Vec::new())
    }

    pub fn new(letters: Vec<TimedLetter>) -> Self {
        TimedWord(letters)
    }

    /// Convenience constructor from `(delay, letter)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Letter)>,
    {
        TimedWord(
            pairs
                .into_iter()
                .map(|(delay, letter)| TimedLetter { delay, letter })
                .collect(),
        )
    }

    pub fn letters(&self) -> &[TimedLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, delay: Rational, letter: Letter) {
        self.0.push(TimedLetter { delay, letter });
    }

    /// The prefix of length `n`.
    pub fn prefix(&self, n: usize) -> TimedWord {
        TimedWord(self.0[..n].to_vec())
    }

    pub fn concat(&self, other: &TimedWord) -> TimedWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TimedWord(v)
    }

    /// Every delay has fractional part 0 or 1/2.
    pub fn is_half_integral(&self) -> bool {
        self.0.iter().all(|l| l.delay.as_halves().is_some())
    }

    /// Parses `delay:letter` tokens and checks letters against `alphabet`.
    pub fn parse_with(s: &str, alphabet: &[Letter]) -> Result<Self, ParseError> {
        let w: TimedWord = s.parse()?;
        for l in &w.0 {
            if !alphabet.contains(&l.letter) {
                return Err(ParseError::UnknownLetter(l.letter.to_string()));
            }
        }
        Ok(w)
    }
}

impl FromStr for TimedWord {
    type Err = ParseError;

    /// Whitespace separated `delay:letter` tokens; `ε` or an empty string is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "ε" || token == "eps" {
                continue;
            }
            let (delay, letter) = token
                .split_once(':')
                .ok_or_else(|| ParseError::WordToken(token.to_string()))?;
            letters.push(TimedLetter {
                delay: delay.parse()?,
                letter: Letter::new(letter)?,
            });
        }
        Ok(TimedWord(letters))
    }
}

impl fmt::Display for TimedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", l.delay, l.letter)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: TimedWord = "0.3:a 1.9:b".parse().unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.letters()[1].delay, Rational::new(19, 10));
        assert_eq!(w.to_string(), "3/10:a 19/10:b");
        assert_eq!(w.to_string().parse::<TimedWord>().unwrap(), w);
        assert!("".parse::<TimedWord>().unwrap().is_empty());
        assert!("0.5a".parse::<TimedWord>().is_err());
    }

    #[test]
    fn half_integral_detection() {
        assert!("1/2:a 3:b".parse::<TimedWord>().unwrap().is_half_integral());
        assert!(!"0.2:a".parse::<TimedWord>().unwrap().is_half_integral());
    }

    #[test]
    fn letters_reject_whitespace() {
        assert!(Letter::new("a b").is_err());
        assert!(Letter::new("").is_err());
        assert!(Letter::new("go").is_ok());
    }
}
