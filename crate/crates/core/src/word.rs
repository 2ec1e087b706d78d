//! Words in the torus mapping class group.
//!
//! The group is generated by the Dehn twists `a` and `b`; a [`Word`] is a
//! freely reduced string over `a`, `a⁻¹`, `b`, `b⁻¹`. The textual form uses
//! `a`, `A`, `b`, `B` (uppercase is the inverse) and accepts power shorthand
//! such as `a4`, `a^-2`, `a⁻¹` or `(ab)^12` on input.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::sl2::Sl2Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse word at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("block index {index} out of range (factorization has {len} blocks)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot split a block of multiplicity {multiplicity} at {k1}")]
    InvalidSplit { multiplicity: u64, k1: u64 },
}

/// One of the four letters `a`, `a⁻¹`, `b`, `b⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenLetter {
    APos,
    ANeg,
    BPos,
    BNeg,
}

impl GenLetter {
    pub fn inverse(self) -> GenLetter {
        match self {
            GenLetter::APos => GenLetter::ANeg,
            GenLetter::ANeg => GenLetter::APos,
            GenLetter::BPos => GenLetter::BNeg,
            GenLetter::BNeg => GenLetter::BPos,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, GenLetter::APos | GenLetter::BPos)
    }

    pub fn as_char(self) -> char {
        match self {
            GenLetter::APos => 'a',
            GenLetter::ANeg => 'A',
            GenLetter::BPos => 'b',
            GenLetter::BNeg => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<GenLetter> {
        match c {
            'a' => Some(GenLetter::APos),
            'A' => Some(GenLetter::ANeg),
            'b' => Some(GenLetter::BPos),
            'B' => Some(GenLetter::BNeg),
            _ => None,
        }
    }

    /// Image in SL(2, Z): `a ↦ [[1,1],[0,1]]`, `b ↦ [[1,0],[-1,1]]`.
    pub fn matrix(self) -> Sl2Matrix {
        match self {
            GenLetter::APos => Sl2Matrix::from_i64([[1, 1], [0, 1]]),
            GenLetter::ANeg => Sl2Matrix::from_i64([[1, -1], [0, 1]]),
            GenLetter::BPos => Sl2Matrix::from_i64([[1, 0], [-1, 1]]),
            GenLetter::BNeg => Sl2Matrix::from_i64([[1, 0], [1, 1]]),
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<GenLetter>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a word, cancelling adjacent letter/inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = GenLetter>>(letters: I) -> Word {
        let mut out: Vec<GenLetter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn letter(l: GenLetter) -> Word {
        Word { letters: vec![l] }
    }

    pub fn a() -> Word {
        Word::letter(GenLetter::APos)
    }

    pub fn b() -> Word {
        Word::letter(GenLetter::BPos)
    }

    pub fn letters(&self) -> &[GenLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^k`; negative exponents invert.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word::from_letters(letters)
    }

    /// `a^k` for any integer `k`.
    pub fn a_pow(k: i64) -> Word {
        Word::a().pow(k)
    }

    /// True when no inverse letter occurs.
    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.is_positive())
    }

    /// Sum of exponents of `a`.
    pub fn a_exponent(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                GenLetter::APos => 1,
                GenLetter::ANeg => -1,
                _ => 0,
            })
            .sum()
    }

    /// Run-length form, e.g. `a4ba2b2`.
    pub fn to_compact(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            out.push(l.as_char());
            if j - i > 1 {
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut parser = Parser { chars, pos: 0, len: s.len() };
        let w = parser.sequence()?;
        if let Some(&(pos, c)) = parser.chars.get(parser.pos) {
            return Err(WordError::Parse { pos, msg: format!("unexpected '{c}'") });
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn byte_pos(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(p, _)| p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Parse { pos: self.byte_pos(), msg: msg.into() })
    }

    fn sequence(&mut self) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        while let Some(c) = self.peek() {
            let atom = if let Some(l) = GenLetter::from_char(c) {
                self.pos += 1;
                Word::letter(l)
            } else if c == '(' {
                self.pos += 1;
                let inner = self.sequence()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                inner
            } else if c == ')' {
                break;
            } else {
                return self.err(format!("unexpected '{c}'"));
            };
            let k = self.exponent()?;
            letters.extend_from_slice(atom.pow(k).letters());
        }
        Ok(Word::from_letters(letters))
    }

    fn exponent(&mut self) -> Result<i64, WordError> {
        match self.peek() {
            Some('^') => {
                self.pos += 1;
                let braced = self.peek() == Some('{');
                if braced {
                    self.pos += 1;
                }
                let negative = self.peek() == Some('-');
                if negative {
                    self.pos += 1;
                }
                let k = self.ascii_digits()?;
                if braced {
                    if self.peek() != Some('}') {
                        return self.err("expected '}'");
                    }
                    self.pos += 1;
                }
                Ok(if negative { -k } else { k })
            }
            Some(c) if c.is_ascii_digit() => self.ascii_digits(),
            Some(c) if c == '⁻' || superscript_digit(c).is_some() => {
                let negative = c == '⁻';
                if negative {
                    self.pos += 1;
                }
                let mut k: i64 = 0;
                let start = self.pos;
                while let Some(d) = self.peek().and_then(superscript_digit) {
                    k = k.checked_mul(10).and_then(|k| k.checked_add(d as i64)).ok_or_else(|| {
                        WordError::Parse { pos: self.byte_pos(), msg: "exponent overflow".into() }
                    })?;
                    self.pos += 1;
                }
                if self.pos == start {
                    return self.err("expected superscript digits");
                }
                Ok(if negative { -k } else { k })
            }
            _ => Ok(1),
        }
    }

    fn ascii_digits(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        let mut k: i64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            k = k
                .checked_mul(10)
                .and_then(|k| k.checked_add(d as i64))
                .ok_or_else(|| WordError::Parse { pos: self.byte_pos(), msg: "exponent overflow".into() })?;
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        Ok(k)
    }
}

/// Evaluates a word in SL(2, Z).
pub fn eval_word(w: &Word) -> Sl2Matrix {
    w.letters()
        .iter()
        .fold(Sl2Matrix::identity(), |acc, l| acc.mul(&l.matrix()))
}

/// Group equality, decided through the faithful representation in SL(2, Z).
pub fn words_equivalent(u: &Word, v: &Word) -> bool {
    eval_word(u) == eval_word(v)
}

/// The monodromy word `(ab)^{6n}` of the elliptic surface E(n).
pub fn standard_fibration_word(n: u64) -> Result<Word, WordError> {
    if n < 1 {
        return Err(WordError::InvalidArgument("n must be at least 1".into()));
    }
    let ab = Word::from_letters([GenLetter::APos, GenLetter::BPos]);
    Ok(ab.pow(6 * n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parses_power_shorthand() {
        assert_eq!(w("a4ba2").to_string(), "aaaabaa");
        assert_eq!(w("a^4 b a^2"), w("a4ba2"));
        assert_eq!(w("a⁴ba²"), w("a4ba2"));
        assert_eq!(w("(ab)^2"), w("abab"));
        assert_eq!(w("(ab)12").len(), 24);
        assert_eq!(w("a^-2"), w("AA"));
        assert_eq!(w("a⁻¹"), w("A"));
        assert_eq!(w("b^{3}"), w("bbb"));
        assert_eq!(w(""), Word::identity());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!("ac".parse::<Word>(), Err(WordError::Parse { pos: 1, .. })));
        assert!("(ab".parse::<Word>().is_err());
        assert!("ab)".parse::<Word>().is_err());
        assert!("a^".parse::<Word>().is_err());
        assert!("3".parse::<Word>().is_err());
    }

    #[test]
    fn constructor_reduces_freely() {
        assert!(w("aA").is_empty());
        assert_eq!(w("abBa"), w("a2"));
        assert!(w("(ab)^3 (ab)^-3").is_empty());
    }

    #[test]
    fn compact_form() {
        assert_eq!(w("a4ba2b2a2b2a4ba2b2a2").to_compact(), "a4ba2b2a2b2a4ba2b2a2");
        assert_eq!(w("AAb").to_compact(), "A2b");
    }

    #[test]
    fn generator_images() {
        assert_eq!(eval_word(&Word::identity()), Sl2Matrix::identity());
        assert_eq!(eval_word(&w("a")), Sl2Matrix::from_i64([[1, 1], [0, 1]]));
        assert_eq!(eval_word(&w("b")), Sl2Matrix::from_i64([[1, 0], [-1, 1]]));
        // [[1,1],[0,1]]·[[1,0],[-1,1]] = [[0,1],[-1,1]]
        assert_eq!(eval_word(&w("ab")), Sl2Matrix::from_i64([[0, 1], [-1, 1]]));
    }

    #[test]
    fn relators() {
        assert!(words_equivalent(&w("aba"), &w("bab")));
        assert!(eval_word(&w("(ab)^6")).is_identity());
        assert!(!words_equivalent(&w("a"), &w("b")));
    }

    #[test]
    fn standard_words() {
        let w1 = standard_fibration_word(1).unwrap();
        assert_eq!(w1.len(), 12);
        assert!(eval_word(&w1).is_identity());
        let w2 = standard_fibration_word(2).unwrap();
        assert_eq!(w2.len(), 24);
        assert_eq!(w2, w("(ab)^12"));
        assert!(standard_fibration_word(0).is_err());
    }

    #[test]
    fn serde_as_string() {
        let word = w("a2B");
        let json = serde_json::to_string(&word).unwrap();
        assert_eq!(json, "\"aaB\"");
        let back: Word = serde_json::from_str("\"a2B\"").unwrap();
        assert_eq!(back, word);
    }
}
