//! Splitting a tuple of words around pairs of a pivot letter.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// One way to cut a tuple: `l` has `k` entries, `r` has `k + K - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub k: usize,
    pub l: Vec<Word>,
    pub r: Vec<Word>,
}

/// Per-word choice: number of pairs, L blocks, R blocks.
struct Cut {
    s: usize,
    l: Vec<Word>,
    r: Vec<Word>,
}

fn cuts(w: &[Letter], pivot: Letter, first: bool) -> Vec<Cut> {
    let pos: Vec<usize> = (0..w.len()).filter(|&i| w[i] == pivot).collect();
    let free = if first { &pos[1..] } else { &pos[..] };
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut sel: Vec<usize> = if first { vec![0] } else { Vec::new() };
        sel.extend(free.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p));
        if sel.len() % 2 == 1 || (first && sel.len() < 2) {
            continue;
        }
        let s = sel.len() / 2;
        let block = |a: usize, b: usize| Word(w[a..b].to_vec());
        let l = (0..s).map(|i| block(sel[2 * i] + 1, sel[2 * i + 1])).collect();
        let mut r = Vec::with_capacity(s + 1);
        if !first {
            r.push(block(0, sel.first().copied().unwrap_or(w.len())));
        }
        for i in 0..s {
            let end = sel.get(2 * i + 2).copied().unwrap_or(w.len());
            r.push(block(sel[2 * i + 1] + 1, end));
        }
        out.push(Cut { s, l, r });
    }
    out
}

/// All decompositions of `words` around the pivot `x_j`, for every `k`,
/// in a fixed order. The first word must start with `x_j`.
pub fn all_decompositions(words: &[Word], j: u32) -> Result<Vec<Decomposition>> {
    let pivot = Letter::X(j);
    if words.first().and_then(|w| w.0.first()) != Some(&pivot) {
        return Err(Error::domain(format!("the first word must start with x{j}")));
    }
    if words.iter().map(|w| w.x_count(j)).sum::<usize>() > 60 {
        return Err(Error::resource("pivot letter occurrences", 60));
    }
    let per_word: Vec<Vec<Cut>> = words.iter().enumerate().map(|(m, w)| cuts(&w.0, pivot, m == 0)).collect();
    let mut out = Vec::new();
    if per_word.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut idx = vec![0usize; words.len()];
    'outer: loop {
        let chosen: Vec<&Cut> = idx.iter().zip(&per_word).map(|(&i, c)| &c[i]).collect();
        out.push(Decomposition {
            k: chosen.iter().map(|c| c.s).sum(),
            l: chosen.iter().flat_map(|c| c.l.iter().cloned()).collect(),
            r: chosen.iter().flat_map(|c| c.r.iter().cloned()).collect(),
        });
        for m in (0..words.len()).rev() {
            idx[m] += 1;
            if idx[m] < per_word[m].len() {
                continue 'outer;
            }
            idx[m] = 0;
        }
        break;
    }
    Ok(out)
}

/// Decompositions with exactly `k` pairs.
pub fn enumerate_decompositions(words: &[Word], j: u32, k: usize) -> Result<Vec<Decomposition>> {
    Ok(all_decompositions(words, j)?.into_iter().filter(|d| d.k == k).collect())
}
