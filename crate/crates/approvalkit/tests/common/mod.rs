//! Shared helpers for the integration suites: seeded random generators,
//! independent scaled-integer oracles for every rule, and an exhaustive
//! small-graph enumerator (one representative per isomorphism class).
//!
//! The oracles deliberately avoid the library's search code: they score
//! committees straight from each rule's defining formula using integers
//! scaled by lcm(1..=10) = 2520, which is exact for every instance with
//! at most ten candidates.
#![allow(dead_code)]

use approvalkit::model::{
    compare_committees, ApprovalBallot, ApprovalProfile, CandidateId, Committee,
    ElectionInstance, PriorityOrder,
};
use approvalkit::reduction::Graph;
use itertools::Itertools;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Exact scale for unit fractions 1/1 ... 1/10.
pub const SCALE: u64 = 2520;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cand(token: &str) -> CandidateId {
    CandidateId::new(token).unwrap()
}

pub fn ballot(tokens: &[&str]) -> ApprovalBallot {
    ApprovalBallot::new(tokens.iter().map(|t| cand(t)))
}

pub fn committee(tokens: &[&str]) -> Committee {
    Committee::new(tokens.iter().map(|t| cand(t)))
}

/// The first `m` single-letter candidate names.
pub fn letters(m: usize) -> Vec<CandidateId> {
    (0..m)
        .map(|i| cand(&((b'a' + i as u8) as char).to_string()))
        .collect()
}

/// A random instance: 1..=max_m candidates, 1..=max_n ballots, any k in
/// range, a shuffled tie-break order, and ballots drawn with a random
/// per-instance density. With `allow_empty` false every ballot is topped
/// up to at least one approval (as SAV requires).
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_m: usize,
    max_n: usize,
    allow_empty: bool,
) -> ElectionInstance {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=m);
    let candidates = letters(m);
    let density = rng.gen_range(0.15..0.85);
    let ballots = (0..n)
        .map(|_| {
            let mut members: Vec<CandidateId> = candidates
                .iter()
                .filter(|_| rng.gen_bool(density))
                .cloned()
                .collect();
            if members.is_empty() && !allow_empty {
                members.push(candidates[rng.gen_range(0..m)].clone());
            }
            ApprovalBallot::new(members)
        })
        .collect();
    let mut order = candidates.clone();
    order.shuffle(rng);
    ElectionInstance::new(
        ApprovalProfile::new(candidates, ballots),
        k,
        PriorityOrder::new(order).unwrap(),
    )
}

/// Every size-k committee of the instance's candidates.
pub fn all_committees(e: &ElectionInstance) -> Vec<Committee> {
    e.profile
        .candidates
        .iter()
        .cloned()
        .combinations(e.k)
        .map(Committee::new)
        .collect()
}

/// Argmax over all committees of a scaled-integer score, ties broken by
/// the instance's committee preference order.
pub fn brute_argmax(
    e: &ElectionInstance,
    score: impl Fn(&Committee) -> u64,
) -> (Committee, u64) {
    let mut best: Option<(Committee, u64)> = None;
    for w in all_committees(e) {
        let s = score(&w);
        let better = match &best {
            None => true,
            Some((bw, bs)) => {
                s > *bs
                    || (s == *bs
                        && compare_committees(&w, bw, &e.tiebreak).unwrap() == Ordering::Less)
            }
        };
        if better {
            best = Some((w, s));
        }
    }
    best.expect("at least one committee")
}

fn overlap(w: &Committee, b: &ApprovalBallot) -> u64 {
    b.iter().filter(|c| w.contains(c)).count() as u64
}

/// AV score, scaled: sum over agents of |W ∩ A_i| (times SCALE).
pub fn oracle_av_scaled(e: &ElectionInstance, w: &Committee) -> u64 {
    e.profile
        .ballots
        .iter()
        .map(|b| overlap(w, b) * SCALE)
        .sum()
}

/// SAV score, scaled: sum over agents of |W ∩ A_i| / |A_i|. Requires
/// every ballot nonempty and at most ten candidates.
pub fn oracle_sav_scaled(e: &ElectionInstance, w: &Committee) -> u64 {
    e.profile
        .ballots
        .iter()
        .map(|b| {
            let size = b.len() as u64;
            assert!(size >= 1 && size <= 10, "oracle scale covers 1..=10");
            overlap(w, b) * (SCALE / size)
        })
        .sum()
}

/// PAV score, scaled: sum over agents of 1 + 1/2 + ... + 1/|W ∩ A_i|.
pub fn oracle_pav_scaled(e: &ElectionInstance, w: &Committee) -> u64 {
    e.profile
        .ballots
        .iter()
        .map(|b| {
            let p = overlap(w, b);
            assert!(p <= 10, "oracle scale covers 1..=10");
            (1..=p).map(|j| SCALE / j).sum::<u64>()
        })
        .sum()
}

/// Sequential reweighted voting straight from the definition: k rounds,
/// each electing the candidate maximizing the sum over their approvers
/// of 1 / (1 + seats the approver already holds), ties to the
/// highest-priority candidate.
pub fn reference_rav(e: &ElectionInstance) -> Committee {
    let mut elected: BTreeSet<CandidateId> = BTreeSet::new();
    for _ in 0..e.k {
        let mut best: Option<(u64, CandidateId)> = None;
        for c in e.tiebreak.candidates() {
            if elected.contains(c) {
                continue;
            }
            let total: u64 = e
                .profile
                .ballots
                .iter()
                .filter(|b| b.contains(c))
                .map(|b| {
                    let held = b.iter().filter(|x| elected.contains(*x)).count() as u64;
                    assert!(held + 1 <= 10, "oracle scale covers 1..=10");
                    SCALE / (held + 1)
                })
                .sum();
            // Strictly-greater keeps the earliest (highest-priority)
            // candidate on ties, since we scan in priority order.
            if best.as_ref().map_or(true, |(bs, _)| total > *bs) {
                best = Some((total, c.clone()));
            }
        }
        elected.insert(best.expect("k <= m").1);
    }
    Committee::new(elected)
}

// ---------------------------------------------------------------------
// Small-graph enumeration
// ---------------------------------------------------------------------

/// Lookup tables between vertex pairs (u < v) and bit positions of an
/// edge mask, for graphs on `n` vertices.
pub struct PairTable {
    pub n: usize,
    pub index: Vec<Vec<usize>>,
    pub pairs: Vec<(usize, usize)>,
}

pub fn pair_table(n: usize) -> PairTable {
    let mut index = vec![vec![usize::MAX; n]; n];
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            index[u][v] = pairs.len();
            pairs.push((u, v));
        }
    }
    PairTable { n, index, pairs }
}

pub fn mask_to_graph(t: &PairTable, mask: u64) -> Graph {
    let edges = t
        .pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &(u, v))| (u, v));
    Graph::new(t.n, edges).unwrap()
}

fn relabeled(t: &PairTable, mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0;
    let mut bits = mask;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (u, v) = t.pairs[b];
        let (x, y) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
        out |= 1 << t.index[x][y];
    }
    out
}

fn canonical(t: &PairTable, mask: u64, perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| relabeled(t, mask, p))
        .min()
        .expect("at least the identity permutation")
}

/// One canonical representative per isomorphism class of simple graphs
/// on exactly `n` vertices (n <= 7), as edge masks against
/// `pair_table(n)`. Built by extending every (n-1)-vertex class with a
/// new vertex attached to every possible neighbor subset, then
/// canonicalizing: every n-vertex graph arises this way from some class
/// of its one-vertex-deleted subgraphs.
pub fn iso_class_masks(n: usize) -> Vec<u64> {
    assert!((1..=7).contains(&n), "enumerator is sized for n <= 7");
    if n == 1 {
        return vec![0];
    }
    let prev = iso_class_masks(n - 1);
    let t = pair_table(n);
    let t_prev = pair_table(n - 1);
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut classes = BTreeSet::new();
    for &g in &prev {
        let mut base: u64 = 0;
        for (i, &(u, v)) in t_prev.pairs.iter().enumerate() {
            if g >> i & 1 == 1 {
                base |= 1 << t.index[u][v];
            }
        }
        for neighbors in 0u32..(1 << (n - 1)) {
            let mut mask = base;
            for u in 0..(n - 1) {
                if neighbors >> u & 1 == 1 {
                    mask |= 1 << t.index[u][n - 1];
                }
            }
            classes.insert(canonical(&t, mask, &perms));
        }
    }
    classes.into_iter().collect()
}

/// Every labeled simple graph on exactly `n` vertices (n <= 5).
pub fn labeled_masks(n: usize) -> Vec<u64> {
    assert!((1..=5).contains(&n), "labeled sweep is sized for n <= 5");
    let t = pair_table(n);
    (0u64..(1 << t.pairs.len())).collect()
}

/// A random graph on `n` vertices with max degree at least 2.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let t = pair_table(n);
    loop {
        let p = rng.gen_range(0.15..0.85);
        let mut mask: u64 = 0;
        for i in 0..t.pairs.len() {
            if rng.gen_bool(p) {
                mask |= 1 << i;
            }
        }
        let g = mask_to_graph(&t, mask);
        if g.max_degree() >= 2 {
            return g;
        }
    }
}
