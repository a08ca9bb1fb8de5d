//! Exhaustive finders for arithmetic cadences and n-divisions.
//!
//! Both searches are brute force with explicit size caps. They are used as
//! checkers on small words, not as tools for the large-threshold regime.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{lex_less, Symbol, Word};

/// Longest word accepted by [`find_n_division`].
pub const NDIV_MAX_LEN: usize = 20;
/// Largest `n` accepted by [`find_n_division`].
pub const NDIV_MAX_N: usize = 5;

/// Equally spaced positions (1-based) carrying the same symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cadence {
    pub positions: Vec<usize>,
    pub difference: usize,
}

impl Cadence {
    pub fn order(&self) -> usize {
        self.positions.len()
    }

    /// Positions are in range, strictly increasing, equally spaced and
    /// carry one symbol.
    pub fn is_valid_on(&self, w: &Word) -> bool {
        let s = w.symbols();
        if self.positions.is_empty() || self.difference == 0 {
            return false;
        }
        let first = self.positions[0];
        if first == 0 || first > s.len() {
            return false;
        }
        let sym = s[first - 1];
        self.positions
            .iter()
            .enumerate()
            .all(|(j, &p)| p == first + j * self.difference && p <= s.len() && s[p - 1] == sym)
    }
}

/// `w = u x_1 ... x_n v` with every `x_i` nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NDivision {
    pub u: Word,
    pub factors: Vec<Word>,
    pub v: Word,
}

impl NDivision {
    pub fn concat(&self) -> Word {
        let mut out = self.u.symbols().to_vec();
        for x in &self.factors {
            out.extend_from_slice(x.symbols());
        }
        out.extend_from_slice(self.v.symbols());
        Word::new(out)
    }

    /// Rearranges the middle factors by `perm` (a permutation of `0..n`).
    pub fn rearranged(&self, perm: &[usize]) -> Word {
        let mut out = self.u.symbols().to_vec();
        for &i in perm {
            out.extend_from_slice(self.factors[i].symbols());
        }
        out.extend_from_slice(self.v.symbols());
        Word::new(out)
    }

    /// Checks the n-division property of `w` against every nontrivial
    /// rearrangement of the factors.
    pub fn is_valid_on<F>(&self, w: &Word, order: F) -> bool
    where
        F: Fn(Symbol, Symbol) -> Ordering + Copy,
    {
        if self.factors.len() < 2 || self.factors.iter().any(Word::is_empty) || self.concat() != *w {
            return false;
        }
        permutations(self.factors.len()).into_iter().skip(1).all(|p| lex_less(w, &self.rearranged(&p), order))
    }
}

/// Smallest difference first, then smallest start.
pub fn find_arithmetic_cadence(w: &Word, order: usize) -> Result<Option<Cadence>> {
    if order == 0 {
        return Err(Error::InvalidArgument("cadence order must be at least 1".into()));
    }
    let s = w.symbols();
    let len = s.len();
    if len == 0 {
        return Ok(None);
    }
    if order == 1 {
        return Ok(Some(Cadence { positions: vec![1], difference: 1 }));
    }
    for d in 1..len {
        let span = (order - 1) * d;
        if span >= len {
            break;
        }
        for start in 0..len - span {
            let sym = s[start];
            if (1..order).all(|j| s[start + j * d] == sym) {
                return Ok(Some(Cadence { positions: (0..order).map(|j| start + j * d + 1).collect(), difference: d }));
            }
        }
    }
    Ok(None)
}

/// Exhaustive n-division search; factorizations are tried with the shortest
/// `u` first, then lexicographically earliest cut positions.
pub fn find_n_division<F>(w: &Word, n: usize, order: F) -> Result<Option<NDivision>>
where
    F: Fn(Symbol, Symbol) -> Ordering + Copy,
{
    if n < 2 {
        return Err(Error::InvalidArgument("n-division needs n >= 2".into()));
    }
    if n > NDIV_MAX_N || w.len() > NDIV_MAX_LEN {
        return Err(Error::CapExceeded(format!(
            "n-division search is capped at n <= {NDIV_MAX_N} and length <= {NDIV_MAX_LEN} (got n={n}, length={})",
            w.len()
        )));
    }
    let len = w.len();
    if len < n {
        return Ok(None);
    }
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().skip(1).collect();
    // cuts[0] = |u|, cuts[n] = |u x_1 .. x_n|
    let mut cuts = vec![0usize; n + 1];
    let mut found = None;
    search_cuts(w, n, 0, 0, &mut cuts, &mut |cuts| {
        let div = NDivision {
            u: w.factor(0, cuts[0]),
            factors: (0..n).map(|i| w.factor(cuts[i], cuts[i + 1])).collect(),
            v: w.factor(cuts[n], len),
        };
        if perms.iter().all(|p| lex_less(w, &div.rearranged(p), order)) {
            found = Some(div);
            true
        } else {
            false
        }
    });
    Ok(found)
}

fn search_cuts<G>(w: &Word, n: usize, idx: usize, min: usize, cuts: &mut [usize], visit: &mut G) -> bool
where
    G: FnMut(&[usize]) -> bool,
{
    // each factor after this cut needs at least one symbol
    let max = w.len() - (n - idx);
    for c in min..=max {
        cuts[idx] = c;
        let done = if idx == n { visit(cuts) } else { search_cuts(w, n, idx + 1, c + 1, cuts, visit) };
        if done {
            return true;
        }
    }
    false
}

/// All permutations of `0..n`, identity first, in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
