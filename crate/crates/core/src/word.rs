//! Letters, monomial words and the interleaved `x P x P ...` form.
//!
//! Grammar: whitespace-separated tokens `x<j>` / `y<j>` with optional `^n`;
//! a bare `x` or `y` means index 1 and a lone `1` is the identity.

use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the total length of a parsed word.
pub const MAX_WORD_LEN: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Heavy Wigner matrix `x_j`.
    X(u32),
    /// Diagonal (or traffic-model) matrix `y_j`.
    Y(u32),
}

impl Letter {
    pub fn is_x(self) -> bool {
        matches!(self, Letter::X(_))
    }

    pub fn index(self) -> u32 {
        match self {
            Letter::X(j) | Letter::Y(j) => j,
        }
    }

    pub fn parse(s: &str) -> Result<Letter> {
        let w = parse_word(s)?;
        match w.0.as_slice() {
            [l] => Ok(*l),
            _ => Err(Error::parse(0, format!("expected a single letter, got {s:?}"))),
        }
    }
}

impl serde::Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X(j) => write!(f, "x{j}"),
            Letter::Y(j) => write!(f, "y{j}"),
        }
    }
}

/// A product of y letters, kept in the written order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YWord(pub Vec<u32>);

impl YWord {
    pub fn new(letters: Vec<u32>) -> Self {
        YWord(letters)
    }

    pub fn letter(j: u32, power: usize) -> Self {
        YWord(vec![j; power])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Sorted multiset form; diagonal matrices commute.
    pub fn canonical(&self) -> YWord {
        let mut v = self.0.clone();
        v.sort_unstable();
        YWord(v)
    }

    pub fn concat(&self, other: &YWord) -> YWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        YWord(v)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().map(|&j| Letter::Y(j))
    }
}

impl fmt::Display for YWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<Letter> = self.letters().collect();
        write_compressed(f, &letters)
    }
}

/// A monomial in non-commuting letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn power(letter: Letter, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn x_count(&self, j: u32) -> usize {
        self.0.iter().filter(|&&l| l == Letter::X(j)).count()
    }

    pub fn x_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_x()).count()
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_compressed(f, &self.0)
    }
}

fn write_compressed(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let mut r = i + 1;
        while r < letters.len() && letters[r] == letters[i] {
            r += 1;
        }
        if !first {
            write!(f, " ")?;
        }
        first = false;
        write!(f, "{}", letters[i])?;
        if r - i > 1 {
            write!(f, "^{}", r - i)?;
        }
        i = r;
    }
    Ok(())
}

/// Parses a monomial word.
pub fn parse_word(s: &str) -> Result<Word> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let read_int = |i: &mut usize| -> Option<u64> {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == start {
            None
        } else {
            std::str::from_utf8(&b[start..*i]).ok()?.parse().ok()
        }
    };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() || c == b'*' {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            b'x' | b'y' => {
                i += 1;
                let j = match read_int(&mut i) {
                    None => 1,
                    Some(0) => return Err(Error::parse(start + 1, "letter indices start at 1")),
                    Some(j) if j > u32::MAX as u64 => return Err(Error::parse(start + 1, "index too large")),
                    Some(j) => j as u32,
                };
                let mut n = 1u64;
                if i < b.len() && b[i] == b'^' {
                    i += 1;
                    n = read_int(&mut i).ok_or_else(|| Error::parse(i, "expected exponent after '^'"))?;
                }
                if out.len() as u64 + n > MAX_WORD_LEN as u64 {
                    return Err(Error::parse(start, format!("word longer than {MAX_WORD_LEN} letters")));
                }
                let l = if c == b'x' { Letter::X(j) } else { Letter::Y(j) };
                out.extend(std::iter::repeat(l).take(n as usize));
            }
            b'1' => {
                i += 1;
                if i < b.len() && !(b[i].is_ascii_whitespace() || b[i] == b'*') {
                    return Err(Error::parse(i, "unexpected character after identity '1'"));
                }
            }
            _ => {
                let ch = s[start..].chars().next().unwrap_or('?');
                return Err(Error::parse(start, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(Word(out))
}

/// `x_{γ(1)} P_1(y) ⋯ x_{γ(L)} P_L(y)`; with `L = 0` the word is `y_only`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InterleavedWord {
    pub gamma: Vec<u32>,
    pub slots: Vec<YWord>,
    pub y_only: YWord,
}

impl InterleavedWord {
    pub fn pure_x(gamma: Vec<u32>) -> Self {
        let slots = vec![YWord::default(); gamma.len()];
        InterleavedWord { gamma, slots, y_only: YWord::default() }
    }

    /// Interleaved form of a monomial; a leading y block is moved behind the
    /// last heavy letter (cyclic rotation).
    pub fn from_word(w: &Word) -> Self {
        let first_x = w.0.iter().position(|l| l.is_x());
        let Some(p) = first_x else {
            return InterleavedWord { gamma: vec![], slots: vec![], y_only: YWord(w.0.iter().map(|l| l.index()).collect()) };
        };
        let mut gamma = Vec::new();
        let mut slots: Vec<YWord> = Vec::new();
        for &l in &w.0[p..] {
            match l {
                Letter::X(j) => {
                    gamma.push(j);
                    slots.push(YWord::default());
                }
                Letter::Y(j) => slots.last_mut().expect("starts with x").0.push(j),
            }
        }
        let lead: Vec<u32> = w.0[..p].iter().map(|l| l.index()).collect();
        slots.last_mut().expect("nonempty").0.extend(lead);
        InterleavedWord { gamma, slots, y_only: YWord::default() }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::from_word(&parse_word(s)?))
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty() && self.y_only.is_empty()
    }

    pub fn has_y(&self) -> bool {
        !self.y_only.is_empty() || self.slots.iter().any(|s| !s.is_empty())
    }

    pub fn to_word(&self) -> Word {
        if self.gamma.is_empty() {
            return Word(self.y_only.letters().collect());
        }
        let mut v = Vec::new();
        for (j, s) in self.gamma.iter().zip(&self.slots) {
            v.push(Letter::X(*j));
            v.extend(s.letters());
        }
        Word(v)
    }

    pub fn x_indices(&self) -> Vec<u32> {
        let mut v = self.gamma.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for InterleavedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}
