//! Multicollision attacks on (generalized) iterated hash functions.
//!
//! [`joux_attack`] chains block-pair collisions on the plain iterated hash.
//! [`generalized_attack`] runs the same idea on a q-bounded schedule: an
//! attack certificate `(B, p, β_1..β_p)` lets the first part be attacked
//! letter by letter, and every later part collapse groups of `n`
//! previously built two-way choices into a single two-way choice by a
//! birthday search over their `2^n` combinations.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashsim::{birthday_search, gihf_eval, Block, BlockSampler, CompressionOracle, HashValue, Schedule};
use crate::nesting::{attack_threshold, find_attack_structure, AttackCertificate};
use crate::words::{word_stats, Symbol};

/// Default value of the birthday constant in query estimates.
pub const DEFAULT_A_TILDE: f64 = 2.5;
/// Largest multicollision expanded in full during verification.
pub const DEFAULT_VERIFY_CAP: u64 = 1 << 16;

/// Positions sharing a set of interchangeable block assignments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionGroup {
    /// 1-based block positions.
    pub positions: Vec<usize>,
    /// Each choice assigns one block per position, in `positions` order.
    pub choices: Vec<Vec<Block>>,
}

/// A multicollision in product form: every combination of one choice per
/// group, applied on top of `base_blocks`, is a colliding message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticollisionSet {
    pub base_blocks: Vec<Block>,
    pub groups: Vec<CollisionGroup>,
    /// The set claims `2^r` messages.
    pub r: usize,
}

impl MulticollisionSet {
    pub fn message_len(&self) -> usize {
        self.base_blocks.len()
    }

    /// Product of the per-group choice counts (saturating).
    pub fn size(&self) -> u128 {
        self.groups.iter().fold(1u128, |acc, g| acc.saturating_mul(g.choices.len() as u128))
    }

    /// The message selecting choice `pick[g]` in group `g`.
    pub fn message(&self, pick: &[usize]) -> Vec<Block> {
        let mut msg = self.base_blocks.clone();
        for (g, &c) in self.groups.iter().zip(pick) {
            for (&pos, &b) in g.positions.iter().zip(&g.choices[c]) {
                msg[pos - 1] = b;
            }
        }
        msg
    }

    /// Mixed-radix decoding of `index` into one pick per group.
    fn pick(&self, mut index: u128) -> Vec<usize> {
        self.groups
            .iter()
            .map(|g| {
                let radix = g.choices.len() as u128;
                let c = (index % radix) as usize;
                index /= radix;
                c
            })
            .collect()
    }

    fn well_formed(&self) -> bool {
        let len = self.base_blocks.len();
        let mut used = HashSet::new();
        let shapes_ok = self.groups.iter().all(|g| {
            !g.positions.is_empty()
                && g.positions.iter().all(|&p| p >= 1 && p <= len && used.insert(p))
                && g.choices.iter().all(|c| c.len() == g.positions.len())
        });
        let claimed = 1u128.checked_shl(self.r as u32);
        shapes_ok && len > 0 && claimed == Some(self.size())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCollision {
    pub b: Block,
    pub b_prime: Block,
    pub h_next: HashValue,
    pub queries: u64,
}

/// Two distinct blocks `b != b'` with `f(h, b) = f(h, b')`.
pub fn block_pair_collision(
    o: &mut CompressionOracle,
    h: HashValue,
    sampler: &mut BlockSampler,
) -> Result<PairCollision> {
    let found = birthday_search(o, h, 2, sampler)?;
    Ok(PairCollision { b: found.blocks[0], b_prime: found.blocks[1], h_next: found.value, queries: found.queries })
}

/// Query budget from the attack complexity formula.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityBound {
    pub value: f64,
    /// Subalphabet size the structure search is applied with.
    pub m: Option<f64>,
    /// Alphabet threshold used: exact for `q <= 2`, the doubly exponential
    /// upper estimate `m^(2^(q-1))` above that.
    pub threshold: Option<f64>,
    pub threshold_exact: bool,
    /// Whether this regime can be simulated at desk scale.
    pub runnable: bool,
    pub a_tilde: f64,
}

/// `ã · q · N(n^{(q-1)^2} r^{2q-3}, q) · 2^{n/2}`; for `q = 1` the Joux
/// cost `ã · r · 2^{n/2}`.
pub fn complexity_bound(n: u32, q: usize, r: usize, a_tilde: f64) -> Result<ComplexityBound> {
    if q == 0 || r == 0 || n == 0 {
        return Err(Error::InvalidArgument("n, q and r must be positive".into()));
    }
    let birthday = 2f64.powf(f64::from(n) / 2.0);
    if q == 1 {
        return Ok(ComplexityBound {
            value: a_tilde * r as f64 * birthday,
            m: None,
            threshold: None,
            threshold_exact: true,
            runnable: true,
            a_tilde,
        });
    }
    let qf = q as f64;
    let m = f64::from(n).powf((qf - 1.0).powi(2)) * (r as f64).powf(2.0 * qf - 3.0);
    let (threshold, exact) = if q == 2 { (m * m - m + 1.0, true) } else { (m.powf(2f64.powf(qf - 1.0)), false) };
    Ok(ComplexityBound {
        value: a_tilde * qf * threshold * birthday,
        m: Some(m),
        threshold: Some(threshold),
        threshold_exact: exact,
        runnable: q <= 2,
        a_tilde,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackParams {
    pub n: u32,
    pub m: u32,
    pub q: usize,
    pub r: usize,
    pub l: usize,
    pub schedule: String,
}

/// Level-1 cost under both readings: per schedule position, per letter of `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstLevelCost {
    pub positions: usize,
    pub letters: usize,
    pub estimate_by_positions: f64,
    pub estimate_by_letters: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub params: AttackParams,
    pub seed: u64,
    pub h0: HashValue,
    /// Distinct oracle queries spent by the attack (verification excluded).
    pub attack_queries: u64,
    /// All oracle calls including memo hits.
    pub raw_calls: u64,
    pub level_queries: Vec<u64>,
    pub part_lengths: Vec<usize>,
    pub bound: f64,
    pub a_tilde: f64,
    pub verify_ok: bool,
    pub verify_sampled: bool,
    pub collision_size: u128,
    pub digest: Option<HashValue>,
    pub certificate: Option<AttackCertificate>,
    pub first_level: Option<FirstLevelCost>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyOutcome {
    pub ok: bool,
    /// Messages were sampled because the set exceeds the cap.
    pub sampled: bool,
    pub messages_checked: u64,
    pub digest: Option<HashValue>,
    pub reason: Option<String>,
}

impl VerifyOutcome {
    fn fail(reason: impl Into<String>) -> Self {
        VerifyOutcome { ok: false, sampled: false, messages_checked: 0, digest: None, reason: Some(reason.into()) }
    }
}

/// Expands `mc` and hashes every message with the gihf on `oracle` (meant
/// to be an [`CompressionOracle::audit_clone`]). Sets larger than `cap` are
/// checked on `cap` seeded random members, and flagged as sampled.
pub fn verify_multicollision(
    oracle: &mut CompressionOracle,
    sched: &Schedule,
    h0: HashValue,
    mc: &MulticollisionSet,
    cap: u64,
) -> Result<VerifyOutcome> {
    if !mc.well_formed() {
        return Ok(VerifyOutcome::fail("malformed set: positions, choice shapes or 2^r size"));
    }
    // groups are disjoint, so messages are pairwise distinct iff choices are
    for (i, g) in mc.groups.iter().enumerate() {
        let distinct: HashSet<&Vec<Block>> = g.choices.iter().collect();
        if distinct.len() != g.choices.len() {
            return Ok(VerifyOutcome::fail(format!("group {i} repeats a choice")));
        }
    }
    let size = mc.size();
    let sampled = size > u128::from(cap);
    let picks: Vec<Vec<usize>> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut v = vec![vec![0; mc.groups.len()], mc.groups.iter().map(|g| g.choices.len() - 1).collect()];
        while (v.len() as u64) < cap {
            v.push(mc.groups.iter().map(|g| rng.random_range(0..g.choices.len())).collect());
        }
        v
    } else {
        (0..size).map(|i| mc.pick(i)).collect()
    };
    let mut digest = None;
    for pick in &picks {
        let h = gihf_eval(oracle, sched, h0, &mc.message(pick))?;
        match digest {
            None => digest = Some(h),
            Some(d) if d != h => {
                return Ok(VerifyOutcome {
                    ok: false,
                    sampled,
                    messages_checked: picks.len() as u64,
                    digest: None,
                    reason: Some("messages hash to different values".into()),
                });
            }
            Some(_) => {}
        }
    }
    Ok(VerifyOutcome { ok: true, sampled, messages_checked: picks.len() as u64, digest, reason: None })
}

/// Joux: `r` chained block-pair collisions give a `2^r`-collision on the
/// plain iterated hash.
pub fn joux_attack(
    o: &mut CompressionOracle,
    h0: HashValue,
    r: usize,
    sampler: &mut BlockSampler,
    a_tilde: f64,
) -> Result<(MulticollisionSet, AttackReport)> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let start = o.query_count();
    let raw_start = o.raw_calls();
    let mut h = h0;
    let mut groups = Vec::with_capacity(r);
    let mut level_queries = Vec::with_capacity(r);
    for i in 1..=r {
        let pc = block_pair_collision(o, h, sampler)?;
        level_queries.push(pc.queries);
        groups.push(CollisionGroup { positions: vec![i], choices: vec![vec![pc.b], vec![pc.b_prime]] });
        h = pc.h_next;
    }
    let mc = MulticollisionSet { base_blocks: groups.iter().map(|g| g.choices[0][0]).collect(), groups, r };
    let attack_queries = o.query_count() - start;
    let raw_calls = o.raw_calls() - raw_start;
    let sched = Schedule::identity();
    let verdict = verify_multicollision(&mut o.audit_clone(), &sched, h0, &mc, DEFAULT_VERIFY_CAP)?;
    let report = AttackReport {
        params: AttackParams { n: o.hash_bits(), m: o.block_bits(), q: 1, r, l: r, schedule: sched.name() },
        seed: o.seed(),
        h0,
        attack_queries,
        raw_calls,
        level_queries,
        part_lengths: vec![r],
        bound: complexity_bound(o.hash_bits(), 1, r, a_tilde)?.value,
        a_tilde,
        verify_ok: verdict.ok,
        verify_sampled: verdict.sampled,
        collision_size: mc.size(),
        digest: verdict.digest,
        certificate: None,
        first_level: None,
    };
    Ok((mc, report))
}

/// Smallest message length for which the attack structure is guaranteed.
pub fn minimal_length(n: u32, q: usize, r: usize) -> Option<usize> {
    attack_threshold(n as usize, r, q)
}

/// Builds a `2^r`-collision on the gihf defined by `sched`, using messages
/// of `l` blocks (default: [`minimal_length`]).
#[allow(clippy::too_many_arguments)]
pub fn generalized_attack(
    o: &mut CompressionOracle,
    sched: &Schedule,
    q: usize,
    n_param: u32,
    r: usize,
    h0: HashValue,
    sampler: &mut BlockSampler,
    l: Option<usize>,
    a_tilde: f64,
) -> Result<(MulticollisionSet, AttackReport)> {
    if n_param != o.hash_bits() {
        return Err(Error::InvalidArgument(format!(
            "attack parameter n={n_param} differs from the oracle's hash length {}",
            o.hash_bits()
        )));
    }
    if r == 0 || q == 0 {
        return Err(Error::InvalidArgument("r and q must be at least 1".into()));
    }
    let n = n_param as usize;
    let required = minimal_length(n_param, q, r);
    let l = match (l, required) {
        (Some(l), Some(req)) if l < req => return Err(Error::LengthBelowThreshold { l, required: req }),
        (Some(l), _) => l,
        (None, Some(req)) => req,
        (None, None) => {
            let est = complexity_bound(n_param, q, r, a_tilde)?.threshold.unwrap_or(f64::INFINITY);
            return Err(Error::InvalidArgument(format!(
                "no exact length threshold for q={q}; the guaranteed length is about {est:.3e} blocks; pass an explicit length"
            )));
        }
    };
    let alpha = sched.word(l)?;
    let stats = word_stats(&alpha);
    if !stats.is_q_bounded(q) {
        return Err(Error::NotQBounded { q, max_count: stats.max_count });
    }
    let cert = find_attack_structure(&alpha, n, r, q)?;
    let parts = alpha.split_at_cuts(&cert.splits).expect("verified certificate");

    let start = o.query_count();
    let raw_start = o.raw_calls();
    let mut msg = vec![Block(0); l];
    let mut level_queries = Vec::with_capacity(cert.p);

    // level 1: one two-way choice per letter of B
    let mut h = h0;
    let mut groups: Vec<CollisionGroup> = Vec::new();
    let letters = run_order(parts[0].symbols(), &cert.subset);
    let mut cursor = 0;
    for &c in &letters {
        let (first, last) = span(parts[0].symbols(), &[c]);
        h = run_fixed(o, h, &parts[0].symbols()[cursor..first], &msg)?;
        let segment = &parts[0].symbols()[first..=last];
        let mut seen: HashMap<HashValue, Block> = HashMap::new();
        loop {
            let b = sampler.next_block()?;
            msg[c as usize - 1] = b;
            let v = run_fixed(o, h, segment, &msg)?;
            if let Some(&other) = seen.get(&v) {
                msg[c as usize - 1] = other;
                groups.push(CollisionGroup { positions: vec![c as usize], choices: vec![vec![other], vec![b]] });
                h = v;
                break;
            }
            seen.insert(v, b);
        }
        cursor = last + 1;
    }
    h = run_fixed(o, h, &parts[0].symbols()[cursor..], &msg)?;
    level_queries.push(o.query_count() - start);

    // levels 2..p: merge n groups at a time
    for (i, part) in parts.iter().enumerate().skip(1) {
        let level_start = o.query_count();
        let word = part.symbols();
        let order = run_order(word, &cert.subset);
        let block_len = n.pow(i as u32);
        let mut group_of: HashMap<usize, usize> = HashMap::new();
        for (gi, g) in groups.iter().enumerate() {
            for &p in &g.positions {
                group_of.insert(p, gi);
            }
        }
        let mut merged = Vec::new();
        let mut cursor = 0;
        for u_block in order.chunks(block_len) {
            let mut members: Vec<usize> = Vec::new();
            for &s in u_block {
                let gi = group_of[&(s as usize)];
                if !members.contains(&gi) {
                    members.push(gi);
                }
            }
            let covered: usize = members.iter().map(|&gi| groups[gi].positions.len()).sum();
            if members.len() != n || covered != u_block.len() {
                return Err(Error::GuaranteeViolated(format!(
                    "level {} block does not consist of {n} whole groups",
                    i + 1
                )));
            }
            let (first, last) = span(word, u_block);
            h = run_fixed(o, h, &word[cursor..first], &msg)?;
            let segment = &word[first..=last];
            let apply = |msg: &mut [Block], combo: u64| {
                for (t, &gi) in members.iter().enumerate() {
                    let choice = &groups[gi].choices[((combo >> t) & 1) as usize];
                    for (&p, &b) in groups[gi].positions.iter().zip(choice) {
                        msg[p - 1] = b;
                    }
                }
            };
            let combos: u64 = if n >= 64 { u64::MAX } else { 1u64 << n };
            let mut seen: HashMap<HashValue, u64> = HashMap::new();
            let mut found = None;
            for combo in 0..combos {
                apply(&mut msg, combo);
                let v = run_fixed(o, h, segment, &msg)?;
                if let Some(&other) = seen.get(&v) {
                    found = Some((other, combo, v));
                    break;
                }
                seen.insert(v, combo);
            }
            let (a, b, v) = found.ok_or_else(|| {
                Error::GuaranteeViolated(format!("no collision among 2^{n} combinations at level {}", i + 1))
            })?;
            let positions: Vec<usize> = members.iter().flat_map(|&gi| groups[gi].positions.clone()).collect();
            let assignment = |combo: u64| -> Vec<Block> {
                members
                    .iter()
                    .enumerate()
                    .flat_map(|(t, &gi)| groups[gi].choices[((combo >> t) & 1) as usize].clone())
                    .collect()
            };
            merged.push(CollisionGroup { positions, choices: vec![assignment(a), assignment(b)] });
            apply(&mut msg, a);
            h = v;
            cursor = last + 1;
        }
        h = run_fixed(o, h, &word[cursor..], &msg)?;
        groups = merged;
        level_queries.push(o.query_count() - level_start);
    }
    let _ = h;

    let mc = MulticollisionSet { base_blocks: msg, r: groups.len(), groups };
    if mc.r != r {
        return Err(Error::GuaranteeViolated(format!("attack ended with {} groups instead of {r}", mc.r)));
    }
    let attack_queries = o.query_count() - start;
    let raw_calls = o.raw_calls() - raw_start;
    let verdict = verify_multicollision(&mut o.audit_clone(), sched, h0, &mc, DEFAULT_VERIFY_CAP)?;
    let birthday = 2f64.powf(f64::from(n_param) / 2.0);
    let report = AttackReport {
        params: AttackParams { n: n_param, m: o.block_bits(), q, r, l, schedule: sched.name() },
        seed: o.seed(),
        h0,
        attack_queries,
        raw_calls,
        level_queries,
        part_lengths: parts.iter().map(|p| p.len()).collect(),
        bound: complexity_bound(n_param, q, r, a_tilde)?.value,
        a_tilde,
        verify_ok: verdict.ok,
        verify_sampled: verdict.sampled,
        collision_size: mc.size(),
        digest: verdict.digest,
        first_level: Some(FirstLevelCost {
            positions: parts[0].len(),
            letters: cert.subset.len(),
            estimate_by_positions: a_tilde * parts[0].len() as f64 * birthday,
            estimate_by_letters: a_tilde * cert.subset.len() as f64 * birthday,
        }),
        certificate: Some(cert),
    };
    Ok((mc, report))
}

/// Letters of `subset` in order of first occurrence in `word`.
fn run_order(word: &[Symbol], subset: &crate::words::Alphabet) -> Vec<Symbol> {
    let mut seen = BTreeSet::new();
    word.iter().copied().filter(|&s| subset.contains(s) && seen.insert(s)).collect()
}

/// First and last index in `word` of any of `letters`.
fn span(word: &[Symbol], letters: &[Symbol]) -> (usize, usize) {
    let hit = |s: &Symbol| letters.contains(s);
    let first = word.iter().position(hit).expect("letter occurs in part");
    let last = word.iter().rposition(hit).expect("letter occurs in part");
    (first, last)
}

fn run_fixed(o: &mut CompressionOracle, h: HashValue, segment: &[Symbol], msg: &[Block]) -> Result<HashValue> {
    segment.iter().try_fold(h, |acc, &s| o.compress(acc, msg[s as usize - 1]))
}

/// Random initial value and sampler for a trial seed.
pub fn trial_setup(n: u32, m: u32, seed: u64) -> Result<(CompressionOracle, HashValue, BlockSampler)> {
    let oracle = CompressionOracle::new(n, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h0 = HashValue(rng.random_range(0..(1u64 << n)) as u32);
    let sampler = BlockSampler::new(m, rng.random());
    Ok((oracle, h0, sampler))
}
