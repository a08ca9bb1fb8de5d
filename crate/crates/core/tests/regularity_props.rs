use proptest::prelude::*;
use qbounded::regularity::{
    canonical_form, compute_n, find_structure, restrict_certificate, two_bounded_witness, verify_structure, SearchMode,
};
use qbounded::words::{condense, is_permutation, Alphabet, Word};

/// All canonical words over exactly `s` letters where each letter occurs
/// at most `q` times.
fn canonical_words(s: usize, q: usize) -> Vec<Word> {
    fn go(cur: &mut Vec<u32>, counts: &mut Vec<usize>, s: usize, q: usize, out: &mut Vec<Word>) {
        let used = counts.len();
        if used == s {
            out.push(Word::new(cur.clone()));
        }
        for a in 0..(used + 1).min(s) {
            if a == used {
                counts.push(0);
            }
            if counts[a] < q {
                counts[a] += 1;
                cur.push(a as u32 + 1);
                go(cur, counts, s, q, out);
                cur.pop();
                counts[a] -= 1;
            }
            if a == used {
                counts.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut Vec::new(), s, q, &mut out);
    out
}

/// Direct enumeration of every (A, p, splits) with |A| = m and p <= q.
fn brute_exists(w: &Word, m: usize, q: usize) -> bool {
    let letters = w.alph().to_vec();
    let len = w.len();
    for mask in 0u32..(1 << letters.len()) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let a: Alphabet = (0..letters.len()).filter(|i| mask >> i & 1 == 1).map(|i| letters[i]).collect();
        for p in 1..=q.min(len) {
            let mut found = false;
            for_each_cuts(len, p - 1, &mut |cuts| {
                let mut bounds = vec![0];
                bounds.extend_from_slice(cuts);
                bounds.push(len);
                if bounds.windows(2).all(|b| is_permutation(&condense(&w.factor(b[0], b[1]), &a), &a)) {
                    found = true;
                }
            });
            if found {
                return true;
            }
        }
    }
    false
}

fn for_each_cuts(len: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for c in start..len {
            cur.push(c);
            go(c + 1, len, k, cur, f);
            cur.pop();
        }
    }
    go(1, len, k, &mut Vec::new(), f);
}

#[test]
fn enumeration_counts() {
    // words over {1,2}, each letter once or twice, canonical: 1 2, 1 1 2, 1 2 1, 1 2 2, 1 1 2 2, 1 2 1 2, 1 2 2 1
    assert_eq!(canonical_words(2, 2).len(), 7);
    assert!(canonical_words(3, 2).iter().all(|w| canonical_form(w) == *w));
}

#[test]
fn exhaustive_search_agrees_with_brute_force() {
    for s in 1..=4 {
        for w in canonical_words(s, 2) {
            for m in 1..=s {
                let got = find_structure(&w, m, 2, SearchMode::Exhaustive).unwrap();
                assert!(got.exhaustive);
                assert_eq!(got.certificate.is_some(), brute_exists(&w, m, 2), "word {w}, m={m}");
                if let Some(c) = &got.certificate {
                    assert!(verify_structure(&w, c, m));
                }
            }
        }
    }
}

#[test]
fn three_letter_two_bounded_words_always_have_pairs() {
    let words = canonical_words(3, 2);
    assert!(words.iter().all(|w| w.len() <= 6));
    for w in &words {
        assert!(find_structure(w, 2, 2, SearchMode::Exhaustive).unwrap().certificate.is_some(), "{w}");
    }
}

#[test]
fn witnesses_are_extremal() {
    for m in 2..=5 {
        let w = two_bounded_witness(m).unwrap();
        assert_eq!(w.len(), (m - 1) * (2 * m - 1));
        assert_eq!(w.alph().len(), m * (m - 1));
        assert_eq!(w.stats().max_count, 2);
        let out = find_structure(&w, m, 2, SearchMode::Exhaustive).unwrap();
        assert!(out.certificate.is_none() && out.exhaustive, "m={m}");
        if m > 2 {
            assert!(find_structure(&w, m - 1, 2, SearchMode::Exhaustive).unwrap().certificate.is_some());
        }
    }
}

#[test]
fn small_n_values() {
    assert_eq!(compute_n(1, 3, 4).unwrap().n, Some(1));
    assert_eq!(compute_n(3, 1, 5).unwrap().n, Some(3));
    let r = compute_n(2, 2, 4).unwrap();
    assert_eq!((r.n, r.exhaustive), (Some(3), true));
}

fn bounded_word(q: usize, letters: u32) -> impl Strategy<Value = Word> {
    // each letter 1..=q times, shuffled by sorting on random keys
    prop::collection::vec((1..=q, prop::collection::vec(any::<u32>(), q)), letters as usize).prop_map(|layout| {
        let mut tagged: Vec<(u32, u32)> = Vec::new();
        for (a, (count, keys)) in layout.into_iter().enumerate() {
            for key in keys.into_iter().take(count) {
                tagged.push((key, a as u32 + 1));
            }
        }
        tagged.sort_unstable();
        Word::new(tagged.into_iter().map(|(_, s)| s).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn returned_certificates_verify(w in bounded_word(3, 7), m in 1usize..5) {
        for mode in [SearchMode::Exhaustive, SearchMode::greedy()] {
            let out = find_structure(&w, m, 3, mode).unwrap();
            if let Some(c) = out.certificate {
                prop_assert!(verify_structure(&w, &c, m));
                prop_assert!(c.p <= 3);
            }
        }
    }

    #[test]
    fn certificates_shrink(w in bounded_word(2, 8), m in 2usize..5) {
        if let Some(c) = find_structure(&w, m, 2, SearchMode::Exhaustive).unwrap().certificate {
            for k in 1..m {
                prop_assert!(verify_structure(&w, &restrict_certificate(&w, &c, k), k));
                prop_assert!(find_structure(&w, k, 2, SearchMode::Exhaustive).unwrap().certificate.is_some());
            }
        }
    }

    #[test]
    fn canonical_form_is_renaming_invariant(w in prop::collection::vec(1u32..6, 0..10), shift in 1u32..100) {
        let w = Word::new(w);
        let renamed = Word::new(w.symbols().iter().map(|s| s * 7 + shift).collect());
        prop_assert_eq!(canonical_form(&w), canonical_form(&renamed));
        prop_assert_eq!(canonical_form(&canonical_form(&w)), canonical_form(&w));
    }
}
