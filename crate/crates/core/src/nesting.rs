//! Nested block alignment between permutations.
//!
//! [`partition_bijection`] pairs up the blocks of two equal-size partitions
//! so that paired blocks share at least `x` elements (a perfect matching in
//! the "large intersection" bipartite graph). [`factorization_subset`]
//! applies it level by level to pick a subset `B` whose projections onto a
//! chain of permutations factor into blocks with matching alphabets.
//! [`find_attack_structure`] combines that with the structure search of
//! [`crate::regularity`] to produce the certificate the generalized
//! multicollision attack consumes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regularity::{self, SearchMode, StructureCertificate};
use crate::words::{condense, is_permutation, project, word_stats, Alphabet, Word};

/// Two partitions of `ground` into `k` equal blocks, and the required
/// intersection size `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionPair {
    pub ground: Alphabet,
    pub blocks_b: Vec<Alphabet>,
    pub blocks_c: Vec<Alphabet>,
    pub x: usize,
}

impl PartitionPair {
    pub fn k(&self) -> usize {
        self.blocks_b.len()
    }

    pub fn is_well_formed(&self) -> bool {
        let k = self.blocks_b.len();
        if k == 0 || self.blocks_c.len() != k || !self.ground.len().is_multiple_of(k) {
            return false;
        }
        let size = self.ground.len() / k;
        let covers = |blocks: &[Alphabet]| {
            let mut seen = BTreeSet::new();
            blocks.iter().all(|b| b.len() == size && b.iter().all(|s| seen.insert(s))) && seen == *self.ground.as_set()
        };
        covers(&self.blocks_b) && covers(&self.blocks_c)
    }
}

/// Finds `sigma` (0-based, `sigma[i] = j`) with `|B_i ∩ C_sigma(i)| >= x`
/// for all `i`, or `None` when no perfect matching exists.
///
/// Kuhn's augmenting paths; each row first takes the lowest free column it
/// can, so when the identity works it is returned.
pub fn partition_bijection(pp: &PartitionPair) -> Result<Option<Vec<usize>>> {
    if !pp.is_well_formed() {
        return Err(Error::InvalidArgument("partition pair is not well formed".into()));
    }
    let k = pp.k();
    let adj: Vec<Vec<usize>> = pp
        .blocks_b
        .iter()
        .map(|b| (0..k).filter(|&j| b.intersection(&pp.blocks_c[j]).len() >= pp.x).collect())
        .collect();
    let mut col_owner: Vec<Option<usize>> = vec![None; k];
    for row in 0..k {
        if let Some(&j) = adj[row].iter().find(|&&j| col_owner[j].is_none()) {
            col_owner[j] = Some(row);
            continue;
        }
        let mut visited = vec![false; k];
        if !augment(row, &adj, &mut col_owner, &mut visited) {
            return Ok(None);
        }
    }
    let mut sigma = vec![0; k];
    for (j, owner) in col_owner.iter().enumerate() {
        sigma[owner.expect("perfect matching covers every column")] = j;
    }
    debug_assert!((0..k).all(|i| pp.blocks_b[i].intersection(&pp.blocks_c[sigma[i]]).len() >= pp.x));
    Ok(Some(sigma))
}

fn augment(row: usize, adj: &[Vec<usize>], col_owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for &j in &adj[row] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        let free = match col_owner[j] {
            None => true,
            Some(other) => augment(other, adj, col_owner, visited),
        };
        if free {
            col_owner[j] = Some(row);
            return true;
        }
    }
    false
}

/// Claimed factorization of one adjacent pair `(w_i, w_{i+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFactorization {
    /// 1-based level `i`.
    pub level: usize,
    /// Number of blocks `d_i`.
    pub blocks: usize,
    /// Blocks of the projection of `w_i`.
    pub x_blocks: Vec<Word>,
    /// Blocks of the projection of `w_{i+1}`.
    pub y_blocks: Vec<Word>,
    /// `alph(x_blocks[j]) = alph(y_blocks[matching[j]])`.
    pub matching: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestingCertificate {
    #[serde(rename = "B")]
    pub subset: Alphabet,
    pub level_factorizations: Vec<LevelFactorization>,
    /// Projections of the `d_r` equal blocks of the last permutation.
    pub final_blocks: Vec<Word>,
}

/// Checks the divisibility/cardinality preconditions and returns the
/// common alphabet of the permutations.
fn check_nesting_input(perms: &[Word], d: &[usize]) -> Result<Alphabet> {
    if perms.len() < 2 {
        return Err(Error::InvalidArgument("need at least two permutations (r >= 1)".into()));
    }
    if d.len() != perms.len() {
        return Err(Error::InvalidArgument(format!("expected {} block counts d_0..d_r, got {}", perms.len(), d.len())));
    }
    if d.contains(&0) {
        return Err(Error::InvalidArgument("block counts must be positive".into()));
    }
    if let Some(i) = (1..d.len()).find(|&i| !d[i - 1].is_multiple_of(d[i])) {
        return Err(Error::InvalidArgument(format!("d_{i} = {} does not divide d_{} = {}", d[i], i - 1, d[i - 1])));
    }
    let ground = perms[0].alph();
    if let Some(i) = perms.iter().position(|w| !is_permutation(w, &ground)) {
        return Err(Error::InvalidArgument(format!("word {} is not a permutation of the common alphabet", i + 1)));
    }
    let needed = required_ground_size(d).ok_or_else(|| Error::InvalidArgument("alphabet size overflows".into()))?;
    if ground.len() != needed {
        return Err(Error::InvalidArgument(format!(
            "alphabet has {} letters, block counts require d_0 * d_1^2 * .. * d_r^2 = {needed}",
            ground.len()
        )));
    }
    Ok(ground)
}

/// `d_0 * d_1^2 * ... * d_r^2`.
pub fn required_ground_size(d: &[usize]) -> Option<usize> {
    d.iter().skip(1).try_fold(*d.first()?, |acc, &x| acc.checked_mul(x)?.checked_mul(x))
}

/// Selects `B` with `|B| = d_0` aligning the block structure of the chain
/// `w_1, .., w_{r+1}` (see [`verify_nesting`] for the exact conditions).
///
/// Works from the last pair down: partition the current ground set along
/// `w_r` and `w_{r+1}` into `d_r` blocks each, match blocks with large
/// intersections, keep `|ground| / d_r^3`-sized pieces of the matched
/// intersections, and recurse on the shorter chain.
pub fn factorization_subset(perms: &[Word], d: &[usize]) -> Result<NestingCertificate> {
    let ground = check_nesting_input(perms, d)?;
    let subset = select_subset(perms, d, ground)?;
    let cert = nesting_claims(perms, d, subset);
    if !verify_nesting(perms, d, &cert) {
        return Err(Error::GuaranteeViolated("factorization subset failed verification".into()));
    }
    Ok(cert)
}

fn select_subset(perms: &[Word], d: &[usize], ground: Alphabet) -> Result<Alphabet> {
    let r = perms.len() - 1;
    if r == 0 {
        return Ok(ground);
    }
    let k = d[r];
    let lower = project(&perms[r - 1], &ground);
    let upper = project(&perms[r], &ground);
    let to_blocks = |w: &Word| -> Vec<Alphabet> {
        w.equal_blocks(k).expect("ground size is divisible by d_r").iter().map(Word::alph).collect()
    };
    let next_size = ground.len() / (k * k);
    let x = next_size / k;
    let pp = PartitionPair { ground: ground.clone(), blocks_b: to_blocks(&lower), blocks_c: to_blocks(&upper), x };
    let sigma = partition_bijection(&pp)?.ok_or_else(|| {
        Error::GuaranteeViolated(format!("no block matching at level {r} with k={k}, x={x}, |A|={}", ground.len()))
    })?;
    let mut next = Alphabet::new();
    let block_len = lower.len() / k;
    for (i, chunk) in lower.symbols().chunks(block_len).enumerate() {
        let target = &pp.blocks_c[sigma[i]];
        chunk.iter().copied().filter(|&s| target.contains(s)).take(x).for_each(|s| {
            next.insert(s);
        });
    }
    if next.len() != next_size {
        return Err(Error::GuaranteeViolated(format!("level {r} kept {} letters, expected {next_size}", next.len())));
    }
    select_subset(&perms[..r], &d[..r], next)
}

/// Builds the claimed factorizations for a given subset.
pub fn nesting_claims(perms: &[Word], d: &[usize], subset: Alphabet) -> NestingCertificate {
    let r = perms.len().saturating_sub(1);
    let mut levels = Vec::with_capacity(r);
    for i in 1..=r {
        let x_blocks = project(&perms[i - 1], &subset).equal_blocks(d[i]).unwrap_or_default();
        let y_blocks = project(&perms[i], &subset).equal_blocks(d[i]).unwrap_or_default();
        let matching = x_blocks
            .iter()
            .map(|x| {
                let a = x.alph();
                y_blocks.iter().position(|y| y.alph() == a).unwrap_or(usize::MAX)
            })
            .collect();
        levels.push(LevelFactorization { level: i, blocks: d[i], x_blocks, y_blocks, matching });
    }
    let final_blocks = perms
        .last()
        .and_then(|w| w.equal_blocks(d[r]))
        .map(|us| us.iter().map(|u| project(u, &subset)).collect())
        .unwrap_or_default();
    NestingCertificate { subset, level_factorizations: levels, final_blocks }
}

/// Recomputes every projection and factorization and checks:
///
/// 1. for each level `i`, the projections of `w_i` and `w_{i+1}` onto `B`
///    cut into `d_i` equal blocks have pairwise equal block alphabets;
/// 2. cutting `w_{r+1}` itself into `d_r` equal blocks puts exactly
///    `d_0 / d_r` letters of `B` in each block;
///
/// and that the certificate's claimed blocks are exactly these.
pub fn verify_nesting(perms: &[Word], d: &[usize], cert: &NestingCertificate) -> bool {
    let Ok(ground) = check_nesting_input(perms, d) else {
        return false;
    };
    let b = &cert.subset;
    if b.len() != d[0] || !b.is_subset(&ground) {
        return false;
    }
    let r = perms.len() - 1;
    if cert.level_factorizations.len() != r {
        return false;
    }
    for (idx, claim) in cert.level_factorizations.iter().enumerate() {
        let i = idx + 1;
        if claim.level != i || claim.blocks != d[i] {
            return false;
        }
        let (Some(xs), Some(ys)) =
            (project(&perms[i - 1], b).equal_blocks(d[i]), project(&perms[i], b).equal_blocks(d[i]))
        else {
            return false;
        };
        if xs != claim.x_blocks || ys != claim.y_blocks || claim.matching.len() != xs.len() {
            return false;
        }
        let aligned = xs.iter().zip(&claim.matching).all(|(x, &j)| j < ys.len() && x.alph() == ys[j].alph());
        if !aligned {
            return false;
        }
    }
    let Some(us) = perms[r].equal_blocks(d[r]) else {
        return false;
    };
    let per_block = d[0] / d[r];
    let projected: Vec<Word> = us.iter().map(|u| project(u, b)).collect();
    projected.iter().all(|p| p.len() == per_block) && projected == cert.final_blocks
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackCertificate {
    #[serde(rename = "B")]
    pub subset: Alphabet,
    pub p: usize,
    pub splits: Vec<usize>,
    pub n: usize,
    pub k: usize,
}

/// `n^e * k`, `None` on overflow.
fn scaled(n: usize, e: usize, k: usize) -> Option<usize> {
    n.checked_pow(e as u32)?.checked_mul(k)
}

/// Required `|B|` for a certificate with `p` parts: `n^{p-1} k`.
pub fn attack_subset_size(n: usize, k: usize, p: usize) -> Option<usize> {
    scaled(n, p.checked_sub(1)?, k)
}

/// Size of the structure alphabet the pipeline searches for with `p` parts.
/// For `p <= 2` it is `|B|` itself; above that the nesting step needs
/// `d_0 d_1^2 .. d_{p-1}^2` with `d_i = n^{p-1-i} k`.
pub fn pipeline_alphabet_size(n: usize, k: usize, p: usize) -> Option<usize> {
    if p <= 2 {
        return attack_subset_size(n, k, p);
    }
    required_ground_size(&attack_block_counts(n, k, p)?)
}

fn attack_block_counts(n: usize, k: usize, p: usize) -> Option<Vec<usize>> {
    (0..p).map(|i| scaled(n, p - 1 - i, k)).collect()
}

/// Alphabet size guaranteeing an attack certificate, where known exactly:
/// `k` for `q = 1` and `(nk)^2 - nk + 1` for `q = 2`.
pub fn attack_threshold(n: usize, k: usize, q: usize) -> Option<usize> {
    match q {
        1 => Some(k),
        2 => regularity::known_threshold(n.checked_mul(k)?, 2),
        _ => None,
    }
}

/// Finds `(B, p, α_1..α_p)` with `|B| = n^{p-1} k`, every `(α_i)_B` a
/// permutation of `B`, and the nested block containment between adjacent
/// parts (see [`verify_attack_structure`]).
pub fn find_attack_structure(alpha: &Word, n: usize, k: usize, q: usize) -> Result<AttackCertificate> {
    if n == 0 || k == 0 || q == 0 {
        return Err(Error::InvalidArgument("n, k and q must be positive".into()));
    }
    let stats = word_stats(alpha);
    if !stats.is_q_bounded(q) {
        return Err(Error::NotQBounded { q, max_count: stats.max_count });
    }
    let size = stats.alphabet.len();
    let threshold = attack_threshold(n, k, q);
    for p in 1..=q {
        let Some(m) = pipeline_alphabet_size(n, k, p) else {
            break;
        };
        if m > size || alpha.len() < p * m {
            continue;
        }
        let outcome = match regularity::find_structure_with_parts(alpha, m, p, SearchMode::Exhaustive) {
            Err(Error::CapExceeded(_)) => regularity::find_structure_with_parts(alpha, m, p, SearchMode::greedy())?,
            other => other?,
        };
        let Some(structure) = outcome.certificate else {
            continue;
        };
        let cert = attack_from_structure(alpha, n, k, &structure)?;
        if !verify_attack_structure(alpha, n, k, &cert) {
            return Err(Error::GuaranteeViolated(format!("attack certificate with p={p} failed verification")));
        }
        return Ok(cert);
    }
    match threshold {
        Some(t) if size < t => Err(Error::BelowThreshold { required: t, actual: size }),
        Some(t) => Err(Error::GuaranteeViolated(format!(
            "no attack structure although |alph| = {size} >= {t} (n={n}, k={k}, q={q})"
        ))),
        None => Err(Error::NotFound(format!("no attack structure for n={n}, k={k}, q={q} at |alph| = {size}"))),
    }
}

fn attack_from_structure(alpha: &Word, n: usize, k: usize, s: &StructureCertificate) -> Result<AttackCertificate> {
    let p = s.p;
    let subset = if p <= 2 {
        s.alphabet.clone()
    } else {
        let parts = alpha.split_at_cuts(&s.splits).expect("structure certificate has valid cuts");
        let perms: Vec<Word> = parts.iter().map(|part| condense(part, &s.alphabet)).collect();
        let d = attack_block_counts(n, k, p).expect("sizes already checked");
        factorization_subset(&perms, &d)?.subset
    };
    Ok(AttackCertificate { subset, p, splits: s.splits.clone(), n, k })
}

/// Checks `|B| = n^{p-1} k`, that each `(α_i)_B` is a permutation of `B`,
/// and that for each `i < p`, cutting `(α_i)_B` into `n^{p-i} k` blocks and
/// `(α_{i+1})_B` into `n^{p-i-1} k` blocks puts every block of the first
/// inside some block of the second.
pub fn verify_attack_structure(alpha: &Word, n: usize, k: usize, cert: &AttackCertificate) -> bool {
    if cert.n != n || cert.k != k || n == 0 || k == 0 || cert.p == 0 || cert.splits.len() + 1 != cert.p {
        return false;
    }
    let p = cert.p;
    let b = &cert.subset;
    if attack_subset_size(n, k, p) != Some(b.len()) {
        return false;
    }
    let Some(parts) = alpha.split_at_cuts(&cert.splits) else {
        return false;
    };
    let condensed: Vec<Word> = parts.iter().map(|part| condense(part, b)).collect();
    if !condensed.iter().all(|c| is_permutation(c, b)) {
        return false;
    }
    for i in 1..p {
        let (Some(zs), Some(us)) = (
            scaled(n, p - i, k).and_then(|c| condensed[i - 1].equal_blocks(c)),
            scaled(n, p - i - 1, k).and_then(|c| condensed[i].equal_blocks(c)),
        ) else {
            return false;
        };
        let u_alphs: Vec<Alphabet> = us.iter().map(Word::alph).collect();
        if !zs.iter().all(|z| {
            let za = z.alph();
            u_alphs.iter().any(|ua| za.is_subset(ua))
        }) {
            return false;
        }
    }
    true
}
