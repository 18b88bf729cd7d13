//! Canonical memo keys for `Φ^(K)` tuples.
//!
//! Moves used: dropping identity arguments, permuting arguments, commuting
//! adjacent y letters, reversing a word (all matrices are real symmetric),
//! moving y letters at either end of a word into a shared pool (diagonal
//! matrices act entrywise), and, for a single argument, cyclic rotation.

use std::collections::BTreeMap;

use crate::word::{Letter, Word, YWord};

/// A normalized argument tuple with at least one heavy letter.
///
/// With one word it is stored rotated; with several, `pool` holds the y
/// letters collected from the ends of the words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentKey {
    words: Vec<Vec<Letter>>,
    pool: Vec<u32>,
}

/// Outcome of normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Normalized {
    /// Some heavy letter occurs an odd number of times.
    Zero,
    /// No heavy letter at all: `φ_y` of the product of everything.
    Diagonal(YWord),
    Key(MomentKey),
}

impl MomentKey {
    pub fn normalize(words: &[Word]) -> Normalized {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        let mut pool: Vec<u32> = Vec::new();
        let mut heavy: Vec<Vec<Letter>> = Vec::new();
        for w in words {
            for l in &w.0 {
                if let Letter::X(j) = l {
                    *counts.entry(*j).or_default() += 1;
                }
            }
            let Some(first) = w.0.iter().position(|l| l.is_x()) else {
                pool.extend(w.0.iter().map(|l| l.index()));
                continue;
            };
            let last = w.0.iter().rposition(|l| l.is_x()).expect("has x");
            pool.extend(w.0[..first].iter().chain(&w.0[last + 1..]).map(|l| l.index()));
            heavy.push(w.0[first..=last].to_vec());
        }
        if counts.values().any(|c| c % 2 == 1) {
            return Normalized::Zero;
        }
        pool.sort_unstable();
        match heavy.len() {
            0 => Normalized::Diagonal(YWord(pool)),
            1 => {
                let mut w = heavy.pop().expect("one word");
                w.extend(pool.into_iter().map(Letter::Y));
                Normalized::Key(MomentKey { words: vec![cyclic_canonical(&w)], pool: Vec::new() })
            }
            _ => {
                let mut ws: Vec<Vec<Letter>> = heavy.iter().map(|w| reversal_canonical(w)).collect();
                ws.sort();
                Normalized::Key(MomentKey { words: ws, pool })
            }
        }
    }

    /// Number of arguments `K`.
    pub fn arity(&self) -> usize {
        self.words.len()
    }

    /// A representative tuple; the first word starts with a heavy letter.
    pub fn words(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self.words.iter().map(|w| Word(w.clone())).collect();
        out[0].0.extend(self.pool.iter().map(|&j| Letter::Y(j)));
        out
    }

    /// The heavy letter the recursion pivots on.
    pub fn pivot(&self) -> u32 {
        self.words[0][0].index()
    }
}

/// Sorts every maximal run of y letters.
fn sort_y_runs(w: &mut [Letter]) {
    let mut i = 0;
    while i < w.len() {
        if w[i].is_x() {
            i += 1;
            continue;
        }
        let start = i;
        while i < w.len() && !w[i].is_x() {
            i += 1;
        }
        w[start..i].sort_unstable();
    }
}

fn reversal_canonical(w: &[Letter]) -> Vec<Letter> {
    let mut a = w.to_vec();
    sort_y_runs(&mut a);
    let mut b: Vec<Letter> = w.iter().rev().copied().collect();
    sort_y_runs(&mut b);
    a.min(b)
}

/// Least rotation (of the word or its reverse) starting with a heavy letter.
fn cyclic_canonical(w: &[Letter]) -> Vec<Letter> {
    let rev: Vec<Letter> = w.iter().rev().copied().collect();
    let mut best: Option<Vec<Letter>> = None;
    for src in [w, rev.as_slice()] {
        for p in (0..src.len()).filter(|&p| src[p].is_x()) {
            let mut r: Vec<Letter> = src[p..].iter().chain(&src[..p]).copied().collect();
            // A y run may wrap around; it ends the rotated word.
            sort_y_runs(&mut r);
            if best.as_ref().map_or(true, |b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.expect("word has a heavy letter")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn key(ws: &[&str]) -> Normalized {
        MomentKey::normalize(&ws.iter().map(|s| parse_word(s).unwrap()).collect::<Vec<_>>())
    }

    #[test]
    fn single_word_rotations_agree() {
        let a = key(&["x1 x2^2 x1 y1"]);
        assert_eq!(a, key(&["y1 x1 x2^2 x1"]));
        assert_eq!(a, key(&["x2 x1 y1 x1 x2"]));
        assert_eq!(a, key(&["x1 y1 x1 x2^2"]));
    }

    #[test]
    fn tuples() {
        assert_eq!(key(&["x1^2", "1", "x2^2"]), key(&["x2^2", "x1^2"]));
        assert_eq!(key(&["y1 x1^2", "x2^2 y2"]), key(&["x1^2 y2", "x2^2", "y1"]));
        assert_eq!(key(&["x1 x2 x1 x2", "x2^2"]), key(&["x2 x1 x2 x1", "x2^2"]));
        // Rotation is not a symmetry once there are several arguments.
        assert_ne!(key(&["x1 x2^2 x1", "x2^2"]), key(&["x2^2 x1^2", "x2^2"]));
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(key(&["x1 x2"]), Normalized::Zero);
        let Normalized::Key(k) = key(&["x1", "x1 y1"]) else { panic!() };
        assert_eq!(k.arity(), 2);
        assert_eq!(k.words(), vec![parse_word("x1 y1").unwrap(), parse_word("x1").unwrap()]);
        assert_eq!(key(&["y2 y1", "1", "y1"]), Normalized::Diagonal(YWord(vec![1, 1, 2])));
        assert_eq!(key(&[]), Normalized::Diagonal(YWord::default()));
    }
}
