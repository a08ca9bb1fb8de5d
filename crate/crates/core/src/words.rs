//! Words over integer alphabets and the projection/condensation operators.
//!
//! A [`Word`] is an immutable sequence of integer symbols. Every operator
//! here returns a fresh word, so certificate checkers can recompute freely.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of an alphabet.
pub type Symbol = u32;

/// A finite word. The empty word is `Word::default()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Symbol>);

/// A finite set of symbols, iterated in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet(BTreeSet<Symbol>);

/// Occurrence statistics of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordStats {
    pub alphabet: Alphabet,
    pub counts: BTreeMap<Symbol, usize>,
    pub max_count: usize,
}

impl WordStats {
    /// Every symbol occurs at most `q` times.
    pub fn is_q_bounded(&self, q: usize) -> bool {
        self.max_count <= q
    }
}

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of occurrences of `a`.
    pub fn count(&self, a: Symbol) -> usize {
        self.0.iter().filter(|&&s| s == a).count()
    }

    /// The set of symbols occurring at least once.
    pub fn alph(&self) -> Alphabet {
        self.0.iter().copied().collect()
    }

    pub fn stats(&self) -> WordStats {
        word_stats(self)
    }

    /// Factor `[start, end)` as a new word.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cuts the word at the given strictly increasing interior indices.
    ///
    /// Returns `None` if a cut is out of order or outside `1..len`.
    pub fn split_at_cuts(&self, cuts: &[usize]) -> Option<Vec<Word>> {
        let mut parts = Vec::with_capacity(cuts.len() + 1);
        let mut start = 0;
        for &c in cuts {
            if c <= start || c >= self.len() {
                return None;
            }
            parts.push(self.factor(start, c));
            start = c;
        }
        parts.push(self.factor(start, self.len()));
        Some(parts)
    }

    /// Splits into `blocks` factors of equal length, or `None` if the length
    /// is not divisible.
    pub fn equal_blocks(&self, blocks: usize) -> Option<Vec<Word>> {
        if blocks == 0 || !self.len().is_multiple_of(blocks) {
            return None;
        }
        let size = self.len() / blocks;
        Some((0..blocks).map(|i| self.factor(i * size, (i + 1) * size)).collect())
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet(BTreeSet::new())
    }

    pub fn contains(&self, a: Symbol) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: Symbol) -> bool {
        self.0.insert(a)
    }

    pub fn remove(&mut self, a: Symbol) -> bool {
        self.0.remove(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &Alphabet) -> Alphabet {
        Alphabet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn as_set(&self) -> &BTreeSet<Symbol> {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<Symbol> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<Symbol> for Alphabet {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Alphabet(iter.into_iter().collect())
    }
}

impl From<BTreeSet<Symbol>> for Alphabet {
    fn from(s: BTreeSet<Symbol>) -> Self {
        Alphabet(s)
    }
}

pub fn word_stats(w: &Word) -> WordStats {
    let mut counts = BTreeMap::new();
    for &s in w.symbols() {
        *counts.entry(s).or_insert(0usize) += 1;
    }
    let max_count = counts.values().copied().max().unwrap_or(0);
    WordStats { alphabet: counts.keys().copied().collect(), counts, max_count }
}

/// Erases every symbol outside `b`.
pub fn project(w: &Word, b: &Alphabet) -> Word {
    w.symbols().iter().copied().filter(|&s| b.contains(s)).collect()
}

/// Projection onto `b` followed by collapsing maximal runs of equal symbols.
pub fn condense(w: &Word, b: &Alphabet) -> Word {
    let mut out: Vec<Symbol> = Vec::new();
    for &s in w.symbols() {
        if b.contains(s) && out.last() != Some(&s) {
            out.push(s);
        }
    }
    Word(out)
}

/// True iff every symbol of `a` occurs exactly once in `w` and nothing else does.
pub fn is_permutation(w: &Word, a: &Alphabet) -> bool {
    if w.len() != a.len() {
        return false;
    }
    let mut seen = BTreeSet::new();
    w.symbols().iter().all(|&s| a.contains(s) && seen.insert(s))
}

/// Lexicographic order: `u < v` iff `v` extends `u` properly, or they first
/// differ at a position where `u` has the smaller symbol under `order`.
pub fn lex_less<F>(u: &Word, v: &Word, order: F) -> bool
where
    F: Fn(Symbol, Symbol) -> Ordering,
{
    for (&a, &b) in u.symbols().iter().zip(v.symbols()) {
        match order(a, b) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    u.len() < v.len()
}

/// `lex_less` under the natural order of integers.
pub fn lex_less_natural(u: &Word, v: &Word) -> bool {
    lex_less(u, v, |a, b| a.cmp(&b))
}

/// Reads the line-oriented word format: one word per line, symbols as
/// whitespace-separated decimal integers, an empty line for the empty word.
pub fn read_words<R: BufRead>(reader: R) -> Result<Vec<Word>> {
    let mut words = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let word = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Symbol>()
                    .map_err(|_| Error::Parse { line: lineno + 1, message: format!("invalid symbol {tok:?}") })
            })
            .collect::<Result<Word>>()?;
        words.push(word);
    }
    Ok(words)
}

pub fn parse_words(text: &str) -> Result<Vec<Word>> {
    read_words(text.as_bytes())
}

pub fn write_words<W: Write>(mut out: W, words: &[Word]) -> Result<()> {
    for w in words {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[Symbol]) -> Word {
        Word::new(v.to_vec())
    }

    fn alph(v: &[Symbol]) -> Alphabet {
        v.iter().copied().collect()
    }

    #[test]
    fn stats_examples() {
        let s = word_stats(&w(&[1, 1, 2]));
        assert_eq!(s.alphabet, alph(&[1, 2]));
        assert_eq!(s.counts, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(s.max_count, 2);

        let e = word_stats(&Word::empty());
        assert!(e.alphabet.is_empty());
        assert!(e.counts.is_empty());
        assert_eq!(e.max_count, 0);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&w(&[1, 2, 3, 3, 2, 1]), &alph(&[1, 3])), w(&[1, 3, 3, 1]));
        assert_eq!(project(&w(&[4, 5, 6]), &Alphabet::new()), Word::empty());
        assert_eq!(project(&w(&[1, 2]), &alph(&[1, 2])), w(&[1, 2]));
    }

    #[test]
    fn condensation_examples() {
        assert_eq!(condense(&w(&[1, 1, 2, 2, 1]), &alph(&[1, 2])), w(&[1, 2, 1]));
        assert_eq!(condense(&w(&[1, 2, 3, 3, 2, 1]), &alph(&[3])), w(&[3]));
        assert_eq!(condense(&w(&[1, 2, 3, 3, 2, 1]), &alph(&[1, 3])), w(&[1, 3, 1]));
        assert_eq!(condense(&Word::empty(), &alph(&[1])), Word::empty());
    }

    #[test]
    fn permutation_examples() {
        assert!(is_permutation(&w(&[2, 1, 3]), &alph(&[1, 2, 3])));
        assert!(!is_permutation(&w(&[1, 1, 2]), &alph(&[1, 2])));
        assert!(!is_permutation(&w(&[1, 2]), &alph(&[1, 2, 3])));
        assert!(!is_permutation(&w(&[1, 4]), &alph(&[1, 2])));
    }

    #[test]
    fn lex_examples() {
        assert!(lex_less_natural(&w(&[1, 2]), &w(&[1, 2, 3])));
        assert!(lex_less_natural(&w(&[1, 3]), &w(&[2, 1])));
        assert!(!lex_less_natural(&w(&[5]), &w(&[5])));
        // reversed order flips the first-difference case
        assert!(lex_less(&w(&[2, 1]), &w(&[1, 3]), |a, b| b.cmp(&a)));
    }

    #[test]
    fn cuts_and_blocks() {
        let x = w(&[1, 2, 3, 4]);
        assert_eq!(x.split_at_cuts(&[2]).unwrap(), vec![w(&[1, 2]), w(&[3, 4])]);
        assert!(x.split_at_cuts(&[0]).is_none());
        assert!(x.split_at_cuts(&[3, 2]).is_none());
        assert!(x.split_at_cuts(&[4]).is_none());
        assert_eq!(x.equal_blocks(4).unwrap().len(), 4);
        assert!(x.equal_blocks(3).is_none());
    }

    #[test]
    fn word_format_round_trip() {
        let text = "1 2 3\n\n7\n";
        let words = parse_words(text).unwrap();
        assert_eq!(words, vec![w(&[1, 2, 3]), Word::empty(), w(&[7])]);
        let mut buf = Vec::new();
        write_words(&mut buf, &words).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), text);
        assert!(parse_words("1 x\n").is_err());
    }
}
