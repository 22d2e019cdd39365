//! Exact and heuristic PAV winner determination.
//!
//! Deciding whether a committee reaches a given PAV score is NP-complete,
//! so this module offers three solvers with different trade-offs:
//!
//! - [`pav_exhaustive`] scores every k-subset (guarded by a committee
//!   count limit),
//! - [`pav_branch_and_bound`] prunes the same search space with an
//!   admissible bound and returns the identical winner,
//! - [`pav_greedy`] adds candidates by maximal marginal gain; it always
//!   equals [`crate::rules::rav_winners`] but may miss the optimum.
//!
//! [`pav_reaches`] answers the threshold *decision* question directly —
//! "does any committee score at least t?" — stopping at the first
//! witness, which is what the hardness reduction verifier needs.
//!
//! Internally the search runs on per-ballot overlap counters. When
//! `lcm(1..=k)` is small enough, every 1/p weight is scaled to an exact
//! integer and the whole search uses machine arithmetic; otherwise it
//! falls back to arbitrary-precision rationals. Both paths perform the
//! same comparisons, so they traverse identical trees. Reported scores
//! are always recomputed as exact [`Score`] values.

use crate::indexed::{iter_mask, mask_preferred, pav_score_mask, CompileError, Indexed, Mask};
use crate::model::{Committee, ElectionInstance};
use crate::score::Score;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use std::cmp::Ordering;
use std::fmt;

/// Default cap on the number of committees [`pav_exhaustive`] will score.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    Exhaustive,
    BranchAndBound,
    Greedy,
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMethod::Exhaustive => "exhaustive",
            SolveMethod::BranchAndBound => "branch-and-bound",
            SolveMethod::Greedy => "greedy",
        })
    }
}

/// Outcome of a PAV solve.
///
/// `nodes_explored` counts complete committees that were scored (for the
/// greedy solver: marginal-gain evaluations). `optimal` is true exactly
/// when the method guarantees a global optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub winner: Committee,
    pub score: Score,
    pub method: SolveMethod,
    pub nodes_explored: u64,
    pub optimal: bool,
}

/// Outcome of a threshold query: was any committee with score ≥ t found?
/// The witness is the first such committee the search reached, not
/// necessarily the tie-break-best one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub reached: bool,
    pub witness: Option<Committee>,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PavError {
    #[error(transparent)]
    Instance(#[from] CompileError),
    #[error("enumerating {committees} committees exceeds the guard of {guard}; raise the guard or use branch-and-bound")]
    EnumerationGuardExceeded { committees: u128, guard: u64 },
}

/// Scores committees against every k-subset of the candidates.
///
/// Fails when `C(m, k)` exceeds the guard ([`DEFAULT_ENUMERATION_GUARD`]);
/// use [`pav_exhaustive_with`] to change the limit. Ties are resolved by
/// the instance's priority order.
pub fn pav_exhaustive(e: &ElectionInstance) -> Result<SolveReport, PavError> {
    pav_exhaustive_with(e, DEFAULT_ENUMERATION_GUARD)
}

pub fn pav_exhaustive_with(e: &ElectionInstance, guard: u64) -> Result<SolveReport, PavError> {
    let ix = Indexed::compile(e)?;
    let committees = binomial(ix.m, ix.k);
    if committees > guard as u128 {
        return Err(PavError::EnumerationGuardExceeded {
            committees,
            guard,
        });
    }
    let (mask, leaves) = run_optimize(&ix, false);
    Ok(report(e, &ix, mask, leaves, SolveMethod::Exhaustive))
}

/// Depth-first search over include/exclude decisions in priority order,
/// pruning with an admissible bound. Returns the same winner and score as
/// [`pav_exhaustive`] on every instance, without the enumeration guard.
///
/// A node is pruned only when its bound falls *strictly* below the
/// incumbent, so committees tying the incumbent's score are still visited
/// and compared for tie-break; since include-first priority-order search
/// visits committees in tie-break preference order, the incumbent that
/// survives is the preferred optimum.
pub fn pav_branch_and_bound(e: &ElectionInstance) -> Result<SolveReport, PavError> {
    let ix = Indexed::compile(e)?;
    let (mask, leaves) = run_optimize(&ix, true);
    Ok(report(e, &ix, mask, leaves, SolveMethod::BranchAndBound))
}

/// Adds, k times, the candidate with the maximal marginal PAV gain (ties
/// by priority). The marginal gain of c equals c's reweighted approval
/// score, so the result always coincides with
/// [`crate::rules::rav_winners`]; the score can fall short of the
/// optimum, but never below (1 − 1/e) of it.
pub fn pav_greedy(e: &ElectionInstance) -> Result<SolveReport, PavError> {
    let ix = Indexed::compile(e)?;
    let approvers = approvers_by_rank(&ix);
    let mut sat = vec![0u8; ix.ballots.len()];
    let mut elected: Mask = 0;
    let mut evals = 0u64;
    for _ in 0..ix.k {
        let mut best: Option<(usize, Score)> = None;
        for r in 0..ix.m {
            if elected & ((1 as Mask) << r) != 0 {
                continue;
            }
            evals += 1;
            let mut gain = Score::zero();
            for &i in &approvers[r] {
                gain += Score::reciprocal_of(sat[i as usize] as u64 + 1);
            }
            // Strictly-greater keeps the highest-priority candidate on ties.
            if best.as_ref().map_or(true, |(_, g)| gain > *g) {
                best = Some((r, gain));
            }
        }
        let (winner, _) = best.expect("k <= m leaves a candidate to elect");
        elected |= (1 as Mask) << winner;
        for &i in &approvers[winner] {
            sat[i as usize] += 1;
        }
    }
    let mut rep = report(e, &ix, elected, evals, SolveMethod::Greedy);
    rep.optimal = false;
    Ok(rep)
}

/// Decides whether some committee scores at least `threshold`, stopping
/// at the first witness. Prunes against the threshold itself, so "no"
/// answers are still exact.
pub fn pav_reaches(e: &ElectionInstance, threshold: &Score) -> Result<ThresholdReport, PavError> {
    let ix = Indexed::compile(e)?;
    let (witness_mask, leaves) = match scaled_inverses(ix.ballots.len(), ix.k) {
        Some(inv) => {
            let scale = inv[1]; // 1/1 scaled = the common denominator
            match scale_threshold(threshold, scale, ix.ballots.len(), ix.k) {
                Some(t) => {
                    let mut search = Search::new(&ix, inv);
                    let found = search.dfs_threshold(0, 0, 0, &0u128, &t);
                    (found, search.leaves)
                }
                None => (None, 0), // threshold exceeds any achievable score
            }
        }
        None => {
            let mut search = Search::new(&ix, exact_inverses(ix.k));
            let found = search.dfs_threshold(0, 0, 0, &Score::zero(), threshold);
            (found, search.leaves)
        }
    };
    Ok(ThresholdReport {
        reached: witness_mask.is_some(),
        witness: witness_mask.map(|m| ix.committee_from_mask(e, m)),
        nodes_explored: leaves,
    })
}

fn report(
    e: &ElectionInstance,
    ix: &Indexed,
    mask: Mask,
    nodes_explored: u64,
    method: SolveMethod,
) -> SolveReport {
    SolveReport {
        winner: ix.committee_from_mask(e, mask),
        score: pav_score_mask(&ix.ballots, mask),
        method,
        nodes_explored,
        optimal: true,
    }
}

fn run_optimize(ix: &Indexed, prune: bool) -> (Mask, u64) {
    match scaled_inverses(ix.ballots.len(), ix.k) {
        Some(inv) => {
            let mut search = Search::new(ix, inv);
            search.prune = prune;
            search.dfs_optimize(0, 0, 0, &0u128);
            (search.best.expect("k <= m: at least one committee").0, search.leaves)
        }
        None => {
            let mut search = Search::new(ix, exact_inverses(ix.k));
            search.prune = prune;
            search.dfs_optimize(0, 0, 0, &Score::zero());
            (search.best.expect("k <= m: at least one committee").0, search.leaves)
        }
    }
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// The numeric domain the search runs in: exact rationals, or the same
/// values scaled to integers by a common denominator.
trait SearchNum: Clone + Ord {
    fn zero() -> Self;
    fn add_to(&mut self, other: &Self);
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_to(other);
        out
    }
}

impl SearchNum for u128 {
    fn zero() -> Self {
        0
    }
    fn add_to(&mut self, other: &Self) {
        *self += *other;
    }
}

impl SearchNum for Score {
    fn zero() -> Self {
        Score::zero()
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
}

/// `inv[p] = 1/p` as exact scores, `inv[0]` an unused zero sentinel.
fn exact_inverses(k: usize) -> Vec<Score> {
    (0..=k)
        .map(|p| if p == 0 { Score::zero() } else { Score::reciprocal_of(p as u64) })
        .collect()
}

/// `inv[p] = lcm(1..=k) / p`: the same weights as [`exact_inverses`]
/// multiplied by their common denominator, exact in u128. Returns None
/// when k is too large for the scale to fit, or when accumulated sums
/// could approach the u128 range; callers then use exact rationals.
fn scaled_inverses(ballots: usize, k: usize) -> Option<Vec<u128>> {
    let mut scale: u128 = 1;
    for p in 1..=k as u128 {
        scale = scale.checked_mul(p / scale.gcd(&p))?;
    }
    // Every value the search forms is at most (current + bound), which is
    // below 2 * ballots * k * scale; require headroom for that.
    (2 * ballots.max(1) as u128)
        .checked_mul(k as u128)?
        .checked_mul(scale)?;
    Some(
        (0..=k as u128)
            .map(|p| if p == 0 { 0 } else { scale / p })
            .collect(),
    )
}

/// Converts a rational threshold into the scaled-integer domain:
/// `ceil(threshold * scale)`, clamped to zero from below. Returns None
/// when the scaled threshold exceeds every achievable score.
fn scale_threshold(threshold: &Score, scale: u128, ballots: usize, k: usize) -> Option<u128> {
    let scaled = threshold.numer() * BigInt::from(scale);
    let ceil = scaled.div_ceil(threshold.denom());
    if ceil.is_negative() {
        return Some(0);
    }
    let max_achievable = BigInt::from(ballots) * BigInt::from(k) * BigInt::from(scale);
    if ceil > max_achievable {
        return None;
    }
    Some(ceil.to_u128().expect("bounded by max_achievable which fits u128"))
}

fn approvers_by_rank(ix: &Indexed) -> Vec<Vec<u32>> {
    let mut approvers = vec![Vec::new(); ix.m];
    for (i, &b) in ix.ballots.iter().enumerate() {
        for r in iter_mask(b) {
            approvers[r].push(i as u32);
        }
    }
    approvers
}

struct Search<N: SearchNum> {
    m: usize,
    k: usize,
    approvers: Vec<Vec<u32>>,
    inv: Vec<N>,
    /// Per-ballot overlap with the current partial committee.
    sat: Vec<u8>,
    /// Complete committees scored so far.
    leaves: u64,
    best: Option<(Mask, N)>,
    prune: bool,
}

impl<N: SearchNum> Search<N> {
    fn new(ix: &Indexed, inv: Vec<N>) -> Self {
        Search {
            m: ix.m,
            k: ix.k,
            approvers: approvers_by_rank(ix),
            inv,
            sat: vec![0; ix.ballots.len()],
            leaves: 0,
            best: None,
            prune: true,
        }
    }

    /// Marginal gain of electing `rank` on top of the current partial
    /// committee: each approver contributes the next unit of its
    /// harmonic satisfaction.
    fn gain(&self, rank: usize) -> N {
        let mut g = N::zero();
        for &i in &self.approvers[rank] {
            g.add_to(&self.inv[self.sat[i as usize] as usize + 1]);
        }
        g
    }

    /// Upper bound on the score any completion of the current partial
    /// committee can add: the sum of the `needed` largest standalone
    /// gains among ranks `from..m`. Admissible because gains only shrink
    /// as the committee grows (each approver's next unit is 1/(p+1) after
    /// 1/p).
    fn completion_bound(&self, from: usize, needed: usize) -> N {
        let mut gains: Vec<N> = (from..self.m).map(|r| self.gain(r)).collect();
        debug_assert!(needed >= 1 && gains.len() >= needed);
        if gains.len() > needed {
            gains.select_nth_unstable_by(needed - 1, |a, b| b.cmp(a));
            gains.truncate(needed);
        }
        let mut total = N::zero();
        for g in &gains {
            total.add_to(g);
        }
        total
    }

    fn apply_include(&mut self, rank: usize, score: &mut N) {
        let Search { approvers, sat, inv, .. } = self;
        for &i in &approvers[rank] {
            let s = &mut sat[i as usize];
            *s += 1;
            score.add_to(&inv[*s as usize]);
        }
    }

    fn undo_include(&mut self, rank: usize) {
        let Search { approvers, sat, .. } = self;
        for &i in &approvers[rank] {
            sat[i as usize] -= 1;
        }
    }

    /// Include-first DFS in priority-rank order: visits complete
    /// committees exactly in tie-break preference order.
    fn dfs_optimize(&mut self, rank: usize, mask: Mask, chosen: usize, current: &N) {
        if chosen == self.k {
            self.leaves += 1;
            let replace = match &self.best {
                None => true,
                Some((best_mask, best_score)) => match current.cmp(best_score) {
                    Ordering::Greater => true,
                    Ordering::Equal => mask_preferred(mask, *best_mask),
                    Ordering::Less => false,
                },
            };
            if replace {
                self.best = Some((mask, current.clone()));
            }
            return;
        }
        if self.m - rank < self.k - chosen {
            return;
        }
        if self.prune {
            if let Some((_, best_score)) = &self.best {
                let bound = self.completion_bound(rank, self.k - chosen);
                // Strict: subtrees that can still tie are explored so the
                // tie-break comparison happens.
                if current.plus(&bound) < *best_score {
                    return;
                }
            }
        }
        let mut with = current.clone();
        self.apply_include(rank, &mut with);
        self.dfs_optimize(rank + 1, mask | ((1 as Mask) << rank), chosen + 1, &with);
        self.undo_include(rank);
        self.dfs_optimize(rank + 1, mask, chosen, current);
    }

    /// Threshold decision search: returns the first committee whose score
    /// reaches `t`, padding with the highest-priority free candidates as
    /// soon as the partial score alone suffices (adding members never
    /// lowers a PAV score).
    fn dfs_threshold(
        &mut self,
        rank: usize,
        mask: Mask,
        chosen: usize,
        current: &N,
        t: &N,
    ) -> Option<Mask> {
        if self.m - rank < self.k - chosen {
            return None;
        }
        if *current >= *t {
            let mut mask = mask;
            let mut chosen = chosen;
            let mut r = rank;
            while chosen < self.k {
                debug_assert!(r < self.m);
                mask |= (1 as Mask) << r;
                chosen += 1;
                r += 1;
            }
            return Some(mask);
        }
        if chosen == self.k {
            self.leaves += 1;
            return None;
        }
        let bound = self.completion_bound(rank, self.k - chosen);
        if current.plus(&bound) < *t {
            return None;
        }
        let mut with = current.clone();
        self.apply_include(rank, &mut with);
        if let Some(found) =
            self.dfs_threshold(rank + 1, mask | ((1 as Mask) << rank), chosen + 1, &with, t)
        {
            return Some(found);
        }
        self.undo_include(rank);
        self.dfs_threshold(rank + 1, mask, chosen, current, t)
    }
}
