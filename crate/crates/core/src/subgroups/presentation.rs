use serde::{Deserialize, Serialize};

use crate::coxeter::CoxeterDiagram;
use crate::error::{Error, Result};

/// Word in signed 1-based generator letters: `k` is generator `k - 1`,
/// `-k` its inverse.
pub type Word = Vec<i32>;

pub fn letter_generator(letter: i32) -> usize {
    (letter.unsigned_abs() - 1) as usize
}

pub fn inverse_word(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

/// Cancels adjacent `x x⁻¹` pairs.
pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Cyclic free reduction: also cancels letters across the ends.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut r = free_reduce(w);
    while r.len() >= 2 && r[0] == -r[r.len() - 1] {
        r.pop();
        r.remove(0);
    }
    r
}

/// Finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, schemars::JsonSchema)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if let Some(&bad) = r.iter().find(|&&x| x == 0 || letter_generator(x) >= generators) {
                return Err(Error::IndexOutOfRange { index: bad.unsigned_abs() as usize, len: generators });
            }
        }
        let relators = relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        Ok(Presentation { generators, relators })
    }

    /// Free group of the given rank.
    pub fn free(generators: usize) -> Self {
        Presentation { generators, relators: Vec::new() }
    }

    /// Generators `g` with `g²` (or `g⁻²`) among the relators.
    pub fn involutions(&self) -> Vec<bool> {
        (0..self.generators)
            .map(|g| {
                let l = g as i32 + 1;
                self.relators.iter().any(|r| r == &vec![l, l] || r == &vec![-l, -l])
            })
            .collect()
    }

    /// `true` when every generator is an involution.
    pub fn is_involutory(&self) -> bool {
        self.involutions().iter().all(|&b| b)
    }

    /// Rewrites inverse letters of involutory generators as positive letters
    /// and cancels the resulting squares.
    pub fn normalize_word(&self, w: &[i32]) -> Word {
        let inv = self.involutions();
        let mut out: Word = Vec::with_capacity(w.len());
        for &x in w {
            let x = if x < 0 && inv[letter_generator(x)] { -x } else { x };
            let cancels = out.last().is_some_and(|&y| y == -x || (y == x && inv[letter_generator(x)]));
            if cancels {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }
}

/// Standard Coxeter presentation: `s_i²` and `(s_i s_j)^m_ij` for `i < j`.
pub fn coxeter_presentation(d: &CoxeterDiagram) -> Presentation {
    let n = d.rank();
    let mut relators: Vec<Word> = (1..=n as i32).map(|g| vec![g, g]).collect();
    for i in 0..n {
        for j in i + 1..n {
            let m = d.label(i, j) as usize;
            let pair = [i as i32 + 1, j as i32 + 1];
            relators.push(pair.iter().copied().cycle().take(2 * m).collect());
        }
    }
    Presentation { generators: n, relators }
}

/// Converts a word over involutory generators to 0-based indices.
pub fn to_indices(w: &[i32]) -> Vec<usize> {
    w.iter().map(|&x| letter_generator(x)).collect()
}

/// 0-based indices to positive 1-based letters.
pub fn from_indices(w: &[usize]) -> Word {
    w.iter().map(|&g| g as i32 + 1).collect()
}
