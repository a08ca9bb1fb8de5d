//! Permutation-structure certificates in q-bounded words.
//!
//! A certificate `(A, p, splits)` factors a word into `p` parts such that
//! every part condenses onto `A` as a permutation of `A`. Certificates are
//! cheap to check with [`verify_structure`]; [`find_structure`] produces
//! them by backtracking.
//!
//! For a fixed factorization, a letter can belong to `A` only if it occurs
//! in every part. Two such letters can both belong to `A` only if, inside
//! every part, neither occurs strictly between two occurrences of the
//! other. So `A` is exactly an `m`-clique of this compatibility graph, and
//! the search is: parts count, then cut points, then clique growth.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{condense, is_permutation, word_stats, Alphabet, Symbol, Word};

/// Upper limit on the nominal number of factorizations an exhaustive
/// search may have to enumerate.
pub const EXHAUSTIVE_MAX_FACTORIZATIONS: u64 = 5_000_000;
/// Default node budget for greedy searches.
pub const GREEDY_DEFAULT_BUDGET: u64 = 200_000;
/// Per-alphabet-size limit on enumerated words in [`compute_n`].
pub const COMPUTE_N_MAX_WORDS: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCertificate {
    #[serde(rename = "A")]
    pub alphabet: Alphabet,
    pub p: usize,
    pub splits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub certificate: Option<StructureCertificate>,
    /// When `certificate` is absent, whether that absence is a proof.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Same search order, stopping after `budget` search nodes.
    Greedy {
        budget: u64,
    },
}

impl SearchMode {
    pub fn greedy() -> Self {
        SearchMode::Greedy { budget: GREEDY_DEFAULT_BUDGET }
    }
}

pub fn verify_structure(alpha: &Word, cert: &StructureCertificate, m: usize) -> bool {
    if m == 0 || cert.alphabet.len() != m || cert.p == 0 || cert.p != cert.splits.len() + 1 {
        return false;
    }
    if !cert.alphabet.is_subset(&alpha.alph()) {
        return false;
    }
    let Some(parts) = alpha.split_at_cuts(&cert.splits) else {
        return false;
    };
    parts.iter().all(|part| is_permutation(&condense(part, &cert.alphabet), &cert.alphabet))
}

/// Restricts a certificate to the first `k` letters of its alphabet in
/// first-occurrence order. Sub-alphabets of a certificate alphabet stay
/// certificates with the same factorization.
pub fn restrict_certificate(alpha: &Word, cert: &StructureCertificate, k: usize) -> StructureCertificate {
    let mut chosen = Alphabet::new();
    for &s in alpha.symbols() {
        if chosen.len() == k {
            break;
        }
        if cert.alphabet.contains(s) {
            chosen.insert(s);
        }
    }
    StructureCertificate { alphabet: chosen, p: cert.p, splits: cert.splits.clone() }
}

/// Least alphabet size known to force a certificate, when known exactly.
pub fn known_threshold(m: usize, q: usize) -> Option<usize> {
    match (m, q) {
        (0, _) | (_, 0) => None,
        (1, _) => Some(1),
        (_, 1) => Some(m),
        (_, 2) => Some(m * m - m + 1),
        _ => None,
    }
}

/// Searches for a certificate with `|A| = m` and at most `q` parts,
/// smallest part count first.
pub fn find_structure(alpha: &Word, m: usize, q: usize, mode: SearchMode) -> Result<SearchOutcome> {
    check_inputs(alpha, m, q)?;
    if let SearchMode::Exhaustive = mode {
        let total: u64 = (1..=q).map(|p| factorization_count(alpha.len(), p)).fold(0, u64::saturating_add);
        if total > EXHAUSTIVE_MAX_FACTORIZATIONS {
            return Err(Error::CapExceeded(format!(
                "{total} factorizations for length {} and q={q} (cap {EXHAUSTIVE_MAX_FACTORIZATIONS})",
                alpha.len()
            )));
        }
    }
    let mut searcher = Searcher::new(alpha, m, mode);
    let mut complete = true;
    for p in 1..=q {
        match searcher.search(p) {
            Found::Yes(cert) => {
                return Ok(SearchOutcome { certificate: Some(cert), exhaustive: true });
            }
            Found::No => {}
            Found::OutOfBudget => {
                complete = false;
                break;
            }
        }
    }
    Ok(SearchOutcome { certificate: None, exhaustive: complete })
}

/// Like [`find_structure`] but with exactly `p` parts.
pub fn find_structure_with_parts(alpha: &Word, m: usize, p: usize, mode: SearchMode) -> Result<SearchOutcome> {
    if m == 0 || p == 0 {
        return Err(Error::InvalidArgument("m and p must be at least 1".into()));
    }
    if let SearchMode::Exhaustive = mode {
        let total = factorization_count(alpha.len(), p);
        if total > EXHAUSTIVE_MAX_FACTORIZATIONS {
            return Err(Error::CapExceeded(format!(
                "{total} factorizations for length {} and p={p} (cap {EXHAUSTIVE_MAX_FACTORIZATIONS})",
                alpha.len()
            )));
        }
    }
    let mut searcher = Searcher::new(alpha, m, mode);
    Ok(match searcher.search(p) {
        Found::Yes(cert) => SearchOutcome { certificate: Some(cert), exhaustive: true },
        Found::No => SearchOutcome { certificate: None, exhaustive: true },
        Found::OutOfBudget => SearchOutcome { certificate: None, exhaustive: false },
    })
}

fn check_inputs(alpha: &Word, m: usize, q: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("subalphabet size m must be at least 1".into()));
    }
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let stats = word_stats(alpha);
    if !stats.is_q_bounded(q) {
        return Err(Error::NotQBounded { q, max_count: stats.max_count });
    }
    Ok(())
}

/// Number of ways to cut a word of length `len` into `p` nonempty parts.
fn factorization_count(len: usize, p: usize) -> u64 {
    if p == 0 || len < p {
        return 0;
    }
    let (n, k) = ((len - 1) as u64, (p - 1) as u64);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    acc
}

enum Found {
    Yes(StructureCertificate),
    No,
    OutOfBudget,
}

struct Searcher<'a> {
    word: &'a [Symbol],
    m: usize,
    /// Letters in first-occurrence order.
    letters: Vec<Symbol>,
    /// Occurrence positions per letter index.
    positions: Vec<Vec<usize>>,
    budget: Option<u64>,
    out_of_budget: bool,
}

impl<'a> Searcher<'a> {
    fn new(alpha: &'a Word, m: usize, mode: SearchMode) -> Self {
        let word = alpha.symbols();
        let mut index: HashMap<Symbol, usize> = HashMap::new();
        let mut letters = Vec::new();
        let mut positions: Vec<Vec<usize>> = Vec::new();
        for (i, &s) in word.iter().enumerate() {
            let id = *index.entry(s).or_insert_with(|| {
                letters.push(s);
                positions.push(Vec::new());
                letters.len() - 1
            });
            positions[id].push(i);
        }
        let budget = match mode {
            SearchMode::Exhaustive => None,
            SearchMode::Greedy { budget } => Some(budget),
        };
        Searcher { word, m, letters, positions, budget, out_of_budget: false }
    }

    fn tick(&mut self) -> bool {
        if let Some(b) = self.budget.as_mut() {
            if *b == 0 {
                self.out_of_budget = true;
                return false;
            }
            *b -= 1;
        }
        true
    }

    fn search(&mut self, p: usize) -> Found {
        if self.m > self.letters.len() || self.word.len() < p * self.m {
            return Found::No;
        }
        let mut cuts = Vec::with_capacity(p + 1);
        cuts.push(0);
        let found = self.choose_cuts(p, &mut cuts);
        match found {
            Some(cert) => Found::Yes(cert),
            None if self.out_of_budget => Found::OutOfBudget,
            None => Found::No,
        }
    }

    /// `bounds` holds the part starts chosen so far (first entry 0).
    fn choose_cuts(&mut self, p: usize, bounds: &mut Vec<usize>) -> Option<StructureCertificate> {
        if !self.tick() {
            return None;
        }
        let fixed = bounds.len() - 1;
        if fixed == p - 1 {
            bounds.push(self.word.len());
            let found = self.solve_factorization(bounds);
            bounds.pop();
            return found;
        }
        let start = *bounds.last().unwrap();
        let remaining_parts = p - fixed;
        // every part holds at least m symbols
        let lo = start + self.m;
        let hi = self.word.len().saturating_sub((remaining_parts - 1) * self.m);
        for cut in lo..=hi {
            bounds.push(cut);
            if self.viable_count(bounds, p) >= self.m {
                if let Some(cert) = self.choose_cuts(p, bounds) {
                    return Some(cert);
                }
            }
            bounds.pop();
            if self.out_of_budget {
                return None;
            }
        }
        None
    }

    /// Letters occurring in each fixed part and often enough in the rest.
    fn viable_count(&self, bounds: &[usize], p: usize) -> usize {
        let fixed = bounds.len() - 1;
        let rest_start = *bounds.last().unwrap();
        let needed_rest = p - fixed;
        self.positions
            .iter()
            .filter(|pos| {
                let in_rest = pos.iter().filter(|&&x| x >= rest_start).count();
                in_rest >= needed_rest && bounds.windows(2).all(|w| pos.iter().any(|&x| x >= w[0] && x < w[1]))
            })
            .count()
    }

    fn solve_factorization(&mut self, bounds: &[usize]) -> Option<StructureCertificate> {
        let parts: Vec<(usize, usize)> = bounds.windows(2).map(|w| (w[0], w[1])).collect();
        let part_of = |x: usize| parts.partition_point(|&(_, end)| end <= x);

        // candidates: letters present in every part, in first-occurrence order
        let mut cand: Vec<usize> = Vec::new();
        let mut spans: Vec<Vec<(usize, usize)>> = Vec::new();
        for (id, pos) in self.positions.iter().enumerate() {
            let mut span: Vec<Option<(usize, usize)>> = vec![None; parts.len()];
            for &x in pos {
                let k = part_of(x);
                span[k] = Some(match span[k] {
                    None => (x, x),
                    Some((a, _)) => (a, x),
                });
            }
            if span.iter().all(Option::is_some) {
                cand.push(id);
                spans.push(span.into_iter().flatten().collect());
            }
        }
        if cand.len() < self.m {
            return None;
        }

        let n = cand.len();
        let inside = |x: usize, span: &[(usize, usize)]| span.iter().any(|&(a, b)| a < x && x < b);
        let mut adj = vec![BitSet::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                let compatible = !self.positions[cand[j]].iter().any(|&x| inside(x, &spans[i]))
                    && !self.positions[cand[i]].iter().any(|&x| inside(x, &spans[j]));
                if compatible {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }

        let mut chosen = Vec::with_capacity(self.m);
        let all = BitSet::full(n);
        if self.extend_clique(&adj, &mut chosen, all) {
            let alphabet = chosen.iter().map(|&i| self.letters[cand[i]]).collect();
            Some(StructureCertificate { alphabet, p: parts.len(), splits: bounds[1..bounds.len() - 1].to_vec() })
        } else {
            None
        }
    }

    fn extend_clique(&mut self, adj: &[BitSet], chosen: &mut Vec<usize>, mut cand: BitSet) -> bool {
        if chosen.len() == self.m {
            return true;
        }
        if !self.tick() {
            return false;
        }
        while let Some(v) = cand.first() {
            if chosen.len() + cand.count() < self.m {
                return false;
            }
            cand.remove(v);
            chosen.push(v);
            let next = cand.intersect(&adj[v]);
            if self.extend_clique(adj, chosen, next) {
                return true;
            }
            chosen.pop();
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

#[derive(Clone)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::new(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

/// The extremal 2-bounded word over `m(m-1)` letters that has no
/// certificate with `|A| = m`: the concatenation of `m-1` palindromes
/// `a_1 a_2 .. a_m .. a_2 a_1` over disjoint letter blocks. Letter
/// `a_{i,j}` is coded as `(i-1)m + j`.
pub fn two_bounded_witness(m: usize) -> Result<Word> {
    if m < 2 {
        return Err(Error::InvalidArgument("witness family starts at m = 2".into()));
    }
    let mut out = Vec::with_capacity((m - 1) * (2 * m - 1));
    for i in 1..m {
        let code = |j: usize| ((i - 1) * m + j) as Symbol;
        out.extend((1..=m).map(code));
        out.extend((1..m).rev().map(code));
    }
    Ok(Word::new(out))
}

/// Renames symbols to `1, 2, 3, ..` by order of first occurrence.
pub fn canonical_form(w: &Word) -> Word {
    let mut names: HashMap<Symbol, Symbol> = HashMap::new();
    w.symbols()
        .iter()
        .map(|&s| {
            let next = names.len() as Symbol + 1;
            *names.entry(s).or_insert(next)
        })
        .collect()
}

/// Per-alphabet-size summary of a [`compute_n`] run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeCheck {
    pub size: usize,
    pub words_checked: u64,
    /// A canonical word of this alphabet size with no certificate.
    pub violating_word: Option<Word>,
    /// Sizes below `m` fail without enumeration.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NReport {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub exhaustive: bool,
    pub m: usize,
    pub q: usize,
    pub alphabet_cap: usize,
    /// When `N` is not determined: every size up to this one has a violating word.
    pub lower_bound: Option<usize>,
    pub sizes: Vec<SizeCheck>,
    pub note: Option<String>,
}

/// Least alphabet size `s` such that every q-bounded word over `s` letters
/// admits a certificate with `|A| = m`, found by enumerating canonical words
/// for `s = m, m+1, .., alphabet_cap`.
pub fn compute_n(m: usize, q: usize, alphabet_cap: usize) -> Result<NReport> {
    if m == 0 || q == 0 {
        return Err(Error::InvalidArgument("m and q must be at least 1".into()));
    }
    let mut sizes = Vec::new();
    if m >= 2 {
        // size m-1: any word lacks m letters
        let witness: Word = (1..m as Symbol).collect();
        sizes.push(SizeCheck { size: m - 1, words_checked: 0, violating_word: Some(witness), trivial: true });
    }
    for s in m..=alphabet_cap {
        let mut checked = 0u64;
        let mut violating = None;
        let mut capped = false;
        let mut word = Vec::new();
        let mut counts = vec![0usize; s + 1];
        let mut fail: Option<Error> = None;
        enumerate_canonical(s, q, &mut word, &mut counts, 0, &mut |w| {
            if checked >= COMPUTE_N_MAX_WORDS {
                capped = true;
                return true;
            }
            checked += 1;
            let word = Word::new(w.to_vec());
            match find_structure(&word, m, q, SearchMode::Exhaustive) {
                Ok(out) if out.certificate.is_none() => {
                    violating = Some(word);
                    true
                }
                Ok(_) => false,
                Err(e) => {
                    fail = Some(e);
                    true
                }
            }
        });
        if let Some(e) = fail {
            return Err(e);
        }
        let all_ok = violating.is_none() && !capped;
        sizes.push(SizeCheck { size: s, words_checked: checked, violating_word: violating, trivial: false });
        if capped {
            return Ok(NReport {
                n: None,
                exhaustive: false,
                m,
                q,
                alphabet_cap,
                lower_bound: Some(s),
                sizes,
                note: Some(format!("enumeration cap of {COMPUTE_N_MAX_WORDS} words hit at alphabet size {s}")),
            });
        }
        if all_ok {
            return Ok(NReport {
                n: Some(s),
                exhaustive: true,
                m,
                q,
                alphabet_cap,
                lower_bound: None,
                sizes,
                note: None,
            });
        }
    }
    Ok(NReport {
        n: None,
        exhaustive: false,
        m,
        q,
        alphabet_cap,
        lower_bound: Some(alphabet_cap + 1),
        sizes,
        note: Some(format!("every alphabet size up to the cap {alphabet_cap} has a violating word")),
    })
}

/// Visits every canonical word with exactly `s` distinct letters, each used
/// at most `q` times. The visitor returns `true` to stop.
fn enumerate_canonical<F>(
    s: usize,
    q: usize,
    word: &mut Vec<Symbol>,
    counts: &mut [usize],
    introduced: usize,
    visit: &mut F,
) -> bool
where
    F: FnMut(&[Symbol]) -> bool,
{
    if introduced == s && visit(word) {
        return true;
    }
    for a in 1..=introduced {
        if counts[a] < q {
            counts[a] += 1;
            word.push(a as Symbol);
            let stop = enumerate_canonical(s, q, word, counts, introduced, visit);
            word.pop();
            counts[a] -= 1;
            if stop {
                return true;
            }
        }
    }
    if introduced < s {
        let a = introduced + 1;
        counts[a] = 1;
        word.push(a as Symbol);
        let stop = enumerate_canonical(s, q, word, counts, a, visit);
        word.pop();
        counts[a] = 0;
        if stop {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[Symbol]) -> Word {
        Word::new(v.to_vec())
    }

    fn cert(a: &[Symbol], splits: &[usize]) -> StructureCertificate {
        StructureCertificate { alphabet: a.iter().copied().collect(), p: splits.len() + 1, splits: splits.to_vec() }
    }

    #[test]
    fn verify_examples() {
        assert!(verify_structure(&w(&[1, 2, 3]), &cert(&[1, 2, 3], &[]), 3));
        assert!(verify_structure(&w(&[1, 2, 1, 2]), &cert(&[1, 2], &[2]), 2));
        let witness = w(&[1, 2, 1]);
        assert!(!verify_structure(&witness, &cert(&[1, 2], &[]), 2));
        assert!(!verify_structure(&witness, &cert(&[1, 2], &[1]), 2));
        assert!(!verify_structure(&witness, &cert(&[1, 2], &[2]), 2));
    }

    #[test]
    fn verify_rejects_malformed() {
        let a = w(&[1, 2, 1, 2]);
        // wrong size
        assert!(!verify_structure(&a, &cert(&[1, 2], &[2]), 3));
        // p disagrees with splits
        let mut c = cert(&[1, 2], &[2]);
        c.p = 3;
        assert!(!verify_structure(&a, &c, 2));
        // letter outside alph
        assert!(!verify_structure(&a, &cert(&[1, 9], &[2]), 2));
        // split out of range
        assert!(!verify_structure(&a, &cert(&[1, 2], &[4]), 2));
        assert!(!verify_structure(&a, &cert(&[], &[]), 0));
    }

    #[test]
    fn find_examples() {
        let out = find_structure(&w(&[1, 2, 1]), 2, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!(out, SearchOutcome { certificate: None, exhaustive: true });

        let out = find_structure(&w(&[1, 2, 3, 1, 2, 3]), 3, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!(out.certificate, Some(cert(&[1, 2, 3], &[3])));
    }

    #[test]
    fn find_rejects_unbounded_and_bad_args() {
        assert!(matches!(
            find_structure(&w(&[1, 1, 1]), 1, 2, SearchMode::Exhaustive),
            Err(Error::NotQBounded { q: 2, max_count: 3 })
        ));
        assert!(find_structure(&w(&[1]), 0, 1, SearchMode::Exhaustive).is_err());
        let long = Word::new((0..4000).map(|i| (i % 2000) as Symbol).collect());
        assert!(matches!(find_structure(&long, 2, 3, SearchMode::Exhaustive), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn condensed_runs_count_once() {
        // 1 1 2: projection onto {1,2} condenses to 1 2
        let out = find_structure(&w(&[1, 1, 2]), 2, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!(out.certificate, Some(cert(&[1, 2], &[])));
        // 1 3 1 2: letter 3 inside 1's run blocks {1,3} but {1,2} works
        let out = find_structure(&w(&[1, 3, 1, 2]), 2, 2, SearchMode::Exhaustive).unwrap();
        assert_eq!(out.certificate, Some(cert(&[1, 2], &[])));
    }

    #[test]
    fn greedy_budget_is_inconclusive() {
        let witness = two_bounded_witness(4).unwrap();
        let out = find_structure(&witness, 4, 2, SearchMode::Greedy { budget: 3 }).unwrap();
        assert_eq!(out, SearchOutcome { certificate: None, exhaustive: false });
        let out = find_structure(&witness, 4, 2, SearchMode::greedy()).unwrap();
        assert_eq!(out, SearchOutcome { certificate: None, exhaustive: true });
    }

    #[test]
    fn witness_shapes() {
        assert_eq!(two_bounded_witness(2).unwrap(), w(&[1, 2, 1]));
        let w3 = two_bounded_witness(3).unwrap();
        assert_eq!(w3, w(&[1, 2, 3, 2, 1, 4, 5, 6, 5, 4]));
        let st = w3.stats();
        assert_eq!((w3.len(), st.alphabet.len(), st.max_count), (10, 6, 2));
        assert!(two_bounded_witness(1).is_err());
    }

    #[test]
    fn witness_has_no_certificate() {
        for m in 2..=5 {
            let wit = two_bounded_witness(m).unwrap();
            let out = find_structure(&wit, m, 2, SearchMode::Exhaustive).unwrap();
            assert_eq!(out, SearchOutcome { certificate: None, exhaustive: true }, "m={m}");
            // one letter fewer is always possible
            let out = find_structure(&wit, m - 1, 2, SearchMode::Exhaustive).unwrap();
            assert!(out.certificate.is_some(), "m={m}");
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&w(&[7, 3, 7])), w(&[1, 2, 1]));
        assert_eq!(canonical_form(&w(&[1, 2, 3])), w(&[1, 2, 3]));
        assert_eq!(canonical_form(&w(&[2, 2, 9])), w(&[1, 1, 2]));
    }

    #[test]
    fn known_values_of_n() {
        assert_eq!(compute_n(1, 3, 3).unwrap().n, Some(1));
        assert_eq!(compute_n(3, 1, 5).unwrap().n, Some(3));
        let r = compute_n(2, 2, 4).unwrap();
        assert_eq!((r.n, r.exhaustive), (Some(3), true));
        assert_eq!(r.sizes.iter().find(|s| s.size == 2).unwrap().violating_word, Some(w(&[1, 2, 1])));
        assert_eq!(known_threshold(5, 2), Some(21));
        assert_eq!(known_threshold(3, 3), None);
    }

    #[test]
    fn compute_n_reports_cap() {
        let r = compute_n(3, 2, 5).unwrap();
        assert_eq!(r.n, None);
        assert!(!r.exhaustive);
        assert_eq!(r.lower_bound, Some(6));
    }

    #[test]
    fn canonical_enumeration_counts() {
        // q = 1: exactly one canonical word (the identity) per size
        let mut n = 0;
        enumerate_canonical(4, 1, &mut Vec::new(), &mut [0; 5], 0, &mut |_| {
            n += 1;
            false
        });
        assert_eq!(n, 1);
        // s = 2, q = 2: 12, 121, 122, 112, 1212, 1221, 1122
        let mut seen = Vec::new();
        enumerate_canonical(2, 2, &mut Vec::new(), &mut [0; 3], 0, &mut |w| {
            seen.push(w.to_vec());
            false
        });
        assert_eq!(seen.len(), 7);
    }

    #[test]
    fn factorization_counts() {
        assert_eq!(factorization_count(5, 1), 1);
        assert_eq!(factorization_count(5, 2), 4);
        assert_eq!(factorization_count(5, 3), 6);
        assert_eq!(factorization_count(2, 3), 0);
    }
}
