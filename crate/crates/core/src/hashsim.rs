//! Simulated compression function with exact query accounting, and the
//! iterated / generalized iterated hash evaluators built on it.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{word_stats, Symbol, Word};

/// An n-bit chaining value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HashValue(pub u32);

/// An m-bit message block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Block(pub u64);

impl fmt::Display for HashValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

pub const MAX_HASH_BITS: u32 = 32;
pub const MAX_BLOCK_BITS: u32 = 64;

/// splitmix64 finalizer.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed, e.g. per trial.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream.wrapping_add(0x9e37_79b9_7f4a_7c15)))
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A keyed pseudorandom function `f: {0,1}^n x {0,1}^m -> {0,1}^n` that
/// memoizes every evaluation. The query count is the number of distinct
/// `(h, b)` pairs ever evaluated.
#[derive(Debug, Clone)]
pub struct CompressionOracle {
    n: u32,
    m: u32,
    seed: u64,
    keys: [u64; 2],
    memo: HashMap<(u32, u64), u32>,
    raw_calls: u64,
}

impl CompressionOracle {
    pub fn new(n: u32, m: u32, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_HASH_BITS || m <= n || m > MAX_BLOCK_BITS {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= n <= {MAX_HASH_BITS} and n < m <= {MAX_BLOCK_BITS} (got n={n}, m={m})"
            )));
        }
        Ok(CompressionOracle {
            n,
            m,
            seed,
            keys: [mix64(seed ^ 0x5851_f42d_4c95_7f2d), mix64(seed ^ 0x1405_7b7e_f767_814f)],
            memo: HashMap::new(),
            raw_calls: 0,
        })
    }

    pub fn hash_bits(&self) -> u32 {
        self.n
    }

    pub fn block_bits(&self) -> u32 {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Distinct queries so far.
    pub fn query_count(&self) -> u64 {
        self.memo.len() as u64
    }

    /// All calls, including repeats answered from the memo.
    pub fn raw_calls(&self) -> u64 {
        self.raw_calls
    }

    /// A fresh oracle computing the same function, with its own counters.
    pub fn audit_clone(&self) -> Self {
        CompressionOracle { memo: HashMap::new(), raw_calls: 0, ..self.clone() }
    }

    fn evaluate(&self, h: u32, b: u64) -> u32 {
        let z = mix64(b.wrapping_add(self.keys[0]));
        let z = mix64(z ^ mix64(u64::from(h) ^ self.keys[1]));
        (z >> (64 - self.n)) as u32
    }

    pub fn compress(&mut self, h: HashValue, b: Block) -> Result<HashValue> {
        if u64::from(h.0) > mask(self.n) {
            return Err(Error::WidthMismatch(format!("hash value {h} exceeds {} bits", self.n)));
        }
        if b.0 > mask(self.m) {
            return Err(Error::WidthMismatch(format!("block {:#x} exceeds {} bits", b.0, self.m)));
        }
        self.raw_calls += 1;
        if let Some(&v) = self.memo.get(&(h.0, b.0)) {
            return Ok(HashValue(v));
        }
        let v = self.evaluate(h.0, b.0);
        self.memo.insert((h.0, b.0), v);
        Ok(HashValue(v))
    }
}

/// `f+(h, b_1 .. b_s)`: left fold of `compress` over the blocks.
pub fn f_plus(o: &mut CompressionOracle, h: HashValue, blocks: &[Block]) -> Result<HashValue> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("f+ needs at least one block".into()));
    }
    blocks.iter().try_fold(h, |acc, &b| o.compress(acc, b))
}

/// `f_alpha(h, b_1 .. b_l) = f+(h, b_{i_1} .. b_{i_s})` for `alpha = i_1 .. i_s`
/// over `{1..l}`.
pub fn f_alpha(o: &mut CompressionOracle, h: HashValue, blocks: &[Block], alpha: &Word) -> Result<HashValue> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("schedule word must be nonempty".into()));
    }
    alpha.symbols().iter().try_fold(h, |acc, &i| {
        let idx = i as usize;
        if idx == 0 || idx > blocks.len() {
            return Err(Error::InvalidArgument(format!("schedule symbol {i} outside 1..={}", blocks.len())));
        }
        o.compress(acc, blocks[idx - 1])
    })
}

/// A sequence of schedule words `alpha_1, alpha_2, ..` with
/// `alph(alpha_l) = {1..l}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// `q` passes over `1..l`, alternating forward and backward.
    /// One pass is the ordinary iterated hash; two is the mirror `1..l l..1`.
    Zigzag { passes: usize },
    /// Explicit words; `words[l-1]` is `alpha_l`.
    Custom { words: Vec<Word>, q_bound: usize },
}

impl Schedule {
    pub fn identity() -> Self {
        Schedule::Zigzag { passes: 1 }
    }

    pub fn mirror() -> Self {
        Schedule::Zigzag { passes: 2 }
    }

    pub fn zigzag(passes: usize) -> Result<Self> {
        if passes == 0 {
            return Err(Error::InvalidArgument("zigzag schedule needs at least one pass".into()));
        }
        Ok(Schedule::Zigzag { passes })
    }

    /// Validates that line `l` is a word over exactly `{1..l}`.
    pub fn custom(words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidArgument("schedule file has no words".into()));
        }
        let mut q_bound = 0;
        for (i, w) in words.iter().enumerate() {
            let l = i + 1;
            let stats = word_stats(w);
            let expected = (1..=l as Symbol).collect();
            if stats.alphabet != expected {
                return Err(Error::Parse {
                    line: l,
                    message: format!("alpha_{l} must use exactly the symbols 1..={l}"),
                });
            }
            q_bound = q_bound.max(stats.max_count);
        }
        Ok(Schedule::Custom { words, q_bound })
    }

    pub fn q_bound(&self) -> usize {
        match self {
            Schedule::Zigzag { passes } => *passes,
            Schedule::Custom { q_bound, .. } => *q_bound,
        }
    }

    /// Largest `l` the schedule defines, if finite.
    pub fn max_len(&self) -> Option<usize> {
        match self {
            Schedule::Zigzag { .. } => None,
            Schedule::Custom { words, .. } => Some(words.len()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Schedule::Zigzag { passes: 1 } => "identity".into(),
            Schedule::Zigzag { passes: 2 } => "mirror".into(),
            Schedule::Zigzag { passes } => format!("zigzag{passes}"),
            Schedule::Custom { .. } => "file".into(),
        }
    }

    /// `alpha_l`.
    pub fn word(&self, l: usize) -> Result<Word> {
        if l == 0 {
            return Err(Error::InvalidArgument("message length must be at least 1 block".into()));
        }
        match self {
            Schedule::Zigzag { passes } => {
                let mut out = Vec::with_capacity(passes * l);
                for pass in 0..*passes {
                    if pass % 2 == 0 {
                        out.extend(1..=l as Symbol);
                    } else {
                        out.extend((1..=l as Symbol).rev());
                    }
                }
                Ok(Word::new(out))
            }
            Schedule::Custom { words, .. } => words.get(l - 1).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!("schedule defines lengths up to {}, not {l}", words.len()))
            }),
        }
    }
}

/// `H(h0, x) = f_{alpha_j}(h0, x)` for a message of `j` blocks.
pub fn gihf_eval(o: &mut CompressionOracle, sched: &Schedule, h0: HashValue, message: &[Block]) -> Result<HashValue> {
    let alpha = sched.word(message.len())?;
    f_alpha(o, h0, message, &alpha)
}

/// Distinct m-bit blocks in a seeded pseudorandom order: the image of
/// `0, 1, 2, ..` under a keyed bijection of `{0..2^m - 1}`.
#[derive(Debug, Clone)]
pub struct BlockSampler {
    m: u32,
    keys: [u64; 3],
    next: u128,
}

impl BlockSampler {
    pub fn new(m: u32, seed: u64) -> Self {
        BlockSampler { m, keys: [mix64(seed ^ 1), mix64(seed ^ 2), mix64(seed ^ 3)], next: 0 }
    }

    pub fn drawn(&self) -> u64 {
        self.next as u64
    }

    fn permute(&self, i: u64) -> u64 {
        let mk = mask(self.m);
        let shift = self.m.div_ceil(2);
        let mut x = i;
        for &k in &self.keys {
            // add, multiply by an odd constant, xorshift: each a bijection mod 2^m
            x = x.wrapping_add(k) & mk;
            x = x.wrapping_mul(k | 1) & mk;
            x ^= x >> shift;
        }
        x
    }

    pub fn next_block(&mut self) -> Result<Block> {
        if self.next >= 1u128 << self.m {
            return Err(Error::SamplerExhausted(self.next as u64));
        }
        let b = self.permute(self.next as u64);
        self.next += 1;
        Ok(Block(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BirthdayResult {
    pub blocks: Vec<Block>,
    pub value: HashValue,
    /// Distinct oracle queries spent by this search.
    pub queries: u64,
}

/// Hashes fresh blocks under `h` until `k` of them share an output.
pub fn birthday_search(
    o: &mut CompressionOracle,
    h: HashValue,
    k: usize,
    sampler: &mut BlockSampler,
) -> Result<BirthdayResult> {
    if k < 2 {
        return Err(Error::InvalidArgument("a k-collision needs k >= 2".into()));
    }
    let start = o.query_count();
    let mut seen: HashMap<HashValue, Vec<Block>> = HashMap::new();
    loop {
        let b = sampler.next_block()?;
        let v = o.compress(h, b)?;
        let bucket = seen.entry(v).or_default();
        bucket.push(b);
        if bucket.len() == k {
            return Ok(BirthdayResult { blocks: bucket.clone(), value: v, queries: o.query_count() - start });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn oracle(n: u32, seed: u64) -> CompressionOracle {
        CompressionOracle::new(n, 48, seed).unwrap()
    }

    #[test]
    fn memoized_queries_count_once() {
        let mut o = oracle(16, 1);
        let a = o.compress(HashValue(3), Block(7)).unwrap();
        let b = o.compress(HashValue(3), Block(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(o.query_count(), 1);
        assert_eq!(o.raw_calls(), 2);
    }

    #[test]
    fn equal_seeds_agree() {
        let mut a = oracle(16, 42);
        let mut b = oracle(16, 42);
        let mut c = oracle(16, 43);
        let mut differs = false;
        for i in 0..200u64 {
            let h = HashValue((i * 37 % 65536) as u32);
            let x = a.compress(h, Block(i * 1_000_003)).unwrap();
            assert_eq!(x, b.compress(h, Block(i * 1_000_003)).unwrap());
            differs |= x != c.compress(h, Block(i * 1_000_003)).unwrap();
        }
        assert!(differs);
    }

    #[test]
    fn width_checks() {
        let mut o = oracle(8, 0);
        assert!(o.compress(HashValue(256), Block(0)).is_err());
        assert!(o.compress(HashValue(0), Block(1 << 48)).is_err());
        assert!(CompressionOracle::new(16, 16, 0).is_err());
        assert!(CompressionOracle::new(33, 64, 0).is_err());
        assert!(CompressionOracle::new(32, 64, 0).is_ok());
    }

    #[test]
    fn f_plus_unrolls() {
        let mut o = oracle(16, 5);
        let h = HashValue(9);
        let (b1, b2) = (Block(11), Block(12));
        assert_eq!(f_plus(&mut o, h, &[b1]).unwrap(), o.compress(h, b1).unwrap());
        let step = o.compress(h, b1).unwrap();
        assert_eq!(f_plus(&mut o, h, &[b1, b2]).unwrap(), o.compress(step, b2).unwrap());
        assert!(f_plus(&mut o, h, &[]).is_err());
    }

    #[test]
    fn f_alpha_reindexes() {
        let mut o = oracle(16, 6);
        let h = HashValue(1);
        let bs = [Block(100), Block(200), Block(300)];
        let id = Word::new(vec![1, 2, 3]);
        assert_eq!(f_alpha(&mut o, h, &bs, &id).unwrap(), f_plus(&mut o, h, &bs).unwrap());
        let swapped = Word::new(vec![2, 1]);
        let expect = {
            let t = o.compress(h, bs[1]).unwrap();
            o.compress(t, bs[0]).unwrap()
        };
        assert_eq!(f_alpha(&mut o, h, &bs[..2], &swapped).unwrap(), expect);
        let twice = Word::new(vec![1, 1]);
        let expect = {
            let t = o.compress(h, bs[0]).unwrap();
            o.compress(t, bs[0]).unwrap()
        };
        assert_eq!(f_alpha(&mut o, h, &bs[..1], &twice).unwrap(), expect);
        assert!(f_alpha(&mut o, h, &bs[..1], &Word::new(vec![2])).is_err());
        assert!(f_alpha(&mut o, h, &bs, &Word::empty()).is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(Schedule::identity().word(3).unwrap(), Word::new(vec![1, 2, 3]));
        assert_eq!(Schedule::mirror().word(3).unwrap(), Word::new(vec![1, 2, 3, 3, 2, 1]));
        assert_eq!(Schedule::zigzag(3).unwrap().word(2).unwrap(), Word::new(vec![1, 2, 2, 1, 1, 2]));
        assert!(Schedule::zigzag(0).is_err());
        assert!(Schedule::identity().word(0).is_err());
        let custom = Schedule::custom(vec![Word::new(vec![1]), Word::new(vec![2, 1, 2])]).unwrap();
        assert_eq!(custom.q_bound(), 2);
        assert!(custom.word(3).is_err());
        assert!(Schedule::custom(vec![Word::new(vec![1]), Word::new(vec![1, 3])]).is_err());
    }

    #[test]
    fn gihf_matches_definitions() {
        let mut o = oracle(16, 8);
        let h = HashValue(77);
        let msg = [Block(5), Block(6), Block(7)];
        let plain = f_plus(&mut o, h, &msg).unwrap();
        assert_eq!(gihf_eval(&mut o, &Schedule::identity(), h, &msg).unwrap(), plain);
        let doubled: Vec<Block> = msg.iter().chain(msg.iter().rev()).copied().collect();
        assert_eq!(gihf_eval(&mut o, &Schedule::mirror(), h, &msg).unwrap(), f_plus(&mut o, h, &doubled).unwrap());
        assert_eq!(gihf_eval(&mut o, &Schedule::mirror(), h, &msg[..1]).unwrap(), {
            let t = o.compress(h, msg[0]).unwrap();
            o.compress(t, msg[0]).unwrap()
        });
    }

    #[test]
    fn sampler_is_injective() {
        let mut s = BlockSampler::new(12, 99);
        let seen: HashSet<u64> = (0..4096).map(|_| s.next_block().unwrap().0).collect();
        assert_eq!(seen.len(), 4096);
        assert!(seen.iter().all(|&b| b < 4096));
        assert!(matches!(s.next_block(), Err(Error::SamplerExhausted(4096))));
    }

    #[test]
    fn birthday_returns_k_distinct_colliding_blocks() {
        let mut o = oracle(8, 3);
        let mut s = BlockSampler::new(48, 3);
        for k in 2..=4 {
            let h = HashValue(k as u32);
            let r = birthday_search(&mut o, h, k, &mut s).unwrap();
            assert_eq!(r.blocks.len(), k);
            let distinct: HashSet<_> = r.blocks.iter().collect();
            assert_eq!(distinct.len(), k);
            let mut audit = o.audit_clone();
            for &b in &r.blocks {
                assert_eq!(audit.compress(h, b).unwrap(), r.value);
            }
        }
        assert!(birthday_search(&mut o, HashValue(0), 1, &mut s).is_err());
    }
}
