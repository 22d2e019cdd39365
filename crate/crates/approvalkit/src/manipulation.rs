//! Strategic-voting solvers.
//!
//! All four solvers ask the same shape of question: a fixed profile is
//! given, `j` additional manipulator ballots are free variables, and some
//! goal must be met by the resulting winning committee.
//!
//! - [`solve_wm`]: make a given candidate win ("winner manipulation"),
//! - [`solve_wsm`]: make the committee exactly a given set ("winning-set
//!   manipulation"),
//! - [`best_response`]: maximize the additive utility of the committee,
//! - [`audit_strategyproofness`]: check one agent with dichotomous
//!   utilities for any profitable unilateral deviation.
//!
//! These problems are NP-hard for most rule/goal combinations, so the
//! solvers search exhaustively over ballot tuples, guarded by a
//! configurable limit on `(2^m)^j`. By anonymity, reordering a tuple of
//! ballots never changes the outcome, so tuples are enumerated as
//! non-decreasing index sequences over a canonically ordered ballot
//! universe (size ascending, then priority-lexicographic); the first
//! witness found is therefore deterministic and minimal in that order.
//! The one polynomial special case, [`sav_wm_fast`], implements the
//! observation that under SAV a manipulator can do no better for a
//! candidate than to approve exactly that candidate.

use crate::indexed::{mask_preferred, Indexed, Mask};
use crate::model::{
    committee_utility, compare_committees, ApprovalBallot, ApprovalProfile, CandidateId,
    Committee, ElectionInstance, ModelError, PriorityOrder,
};
use crate::pav::{pav_branch_and_bound, PavError};
use crate::rules::{av_winners, rav_winners, sav_winners, Rule, RulesError};
use crate::score::Score;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Default cap on the naive ballot-tuple count `(2^m)^j` a search may face.
pub const DEFAULT_TUPLE_GUARD: u64 = 1 << 24;

/// Additive per-candidate utilities. `dichotomous` is computed, not
/// declared: true iff every utility is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilitySpec {
    utilities: BTreeMap<CandidateId, Score>,
    dichotomous: bool,
}

impl UtilitySpec {
    /// Rejects negative utilities; zero entries are allowed and equivalent
    /// to absent ones.
    pub fn new(utilities: BTreeMap<CandidateId, Score>) -> Result<Self, ManipulationError> {
        for (c, u) in &utilities {
            if u.is_negative() {
                return Err(ManipulationError::NegativeUtility {
                    candidate: c.clone(),
                });
            }
        }
        let dichotomous = utilities
            .values()
            .all(|u| u.is_zero() || *u == Score::one());
        Ok(UtilitySpec {
            utilities,
            dichotomous,
        })
    }

    /// Utility 1 for each listed candidate, 0 for everyone else.
    pub fn dichotomous_on(approved: impl IntoIterator<Item = CandidateId>) -> Self {
        let utilities: BTreeMap<CandidateId, Score> = approved
            .into_iter()
            .map(|c| (c, Score::one()))
            .collect();
        UtilitySpec {
            utilities,
            dichotomous: true,
        }
    }

    pub fn is_dichotomous(&self) -> bool {
        self.dichotomous
    }

    pub fn utilities(&self) -> &BTreeMap<CandidateId, Score> {
        &self.utilities
    }

    /// Candidates with strictly positive utility.
    pub fn support(&self) -> BTreeSet<CandidateId> {
        self.utilities
            .iter()
            .filter(|(_, u)| !u.is_zero())
            .map(|(c, _)| c.clone())
            .collect()
    }

    pub fn utility_of(&self, w: &Committee) -> Score {
        committee_utility(&self.utilities, w)
    }
}

/// What the manipulators are trying to achieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManipulationGoal {
    /// Put this candidate into the winning committee.
    Include(CandidateId),
    /// Make the winning committee exactly this set (size must equal k).
    ExactSet(Committee),
    /// Maximize the additive utility of the winning committee.
    Maximize(UtilitySpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationQuery {
    pub rule: Rule,
    /// The ballots the manipulators cannot change.
    pub fixed: ApprovalProfile,
    pub k: usize,
    /// Number of additional ballots under the manipulators' control.
    pub manipulators: usize,
    pub goal: ManipulationGoal,
    pub tiebreak: PriorityOrder,
}

/// Solver outcome. `witness` is present iff the goal was met (and always
/// for maximize goals); replaying it through the rule reproduces the
/// claimed committee. `search_space` counts the ballot tuples actually
/// evaluated (after anonymity deduplication).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationResult {
    pub success: bool,
    pub witness: Option<Vec<ApprovalBallot>>,
    pub achieved_utility: Option<Score>,
    pub search_space: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ManipulationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error(transparent)]
    Pav(#[from] PavError),
    #[error("the goal names candidate {0}, which is not in the election")]
    GoalCandidateUnknown(CandidateId),
    #[error("exact-set goal has {got} candidates but the committee size is {k}")]
    ExactSetSizeMismatch { got: usize, k: usize },
    #[error("utility of {candidate} must be non-negative")]
    NegativeUtility { candidate: CandidateId },
    #[error("searching up to {tuples} ballot tuples exceeds the guard of {guard}")]
    TupleGuardExceeded { tuples: u128, guard: u64 },
    #[error("{op} requires an {expected} goal")]
    WrongGoal {
        op: &'static str,
        expected: &'static str,
    },
    #[error("the audited truth must be dichotomous (all utilities 0 or 1)")]
    NotDichotomous,
}

/// The winning committee of `e` under `rule` (PAV solved exactly by
/// branch-and-bound). The single dispatch point every solver in this
/// module evaluates candidates' outcomes through.
pub fn winning_committee(rule: Rule, e: &ElectionInstance) -> Result<Committee, ManipulationError> {
    Ok(match rule {
        Rule::Av => av_winners(e)?,
        Rule::Sav => sav_winners(e)?,
        Rule::Pav => pav_branch_and_bound(e)?.winner,
        Rule::Rav => rav_winners(e)?.0,
    })
}

/// Winner manipulation with the default tuple guard. See [`solve_wm_with`].
pub fn solve_wm(q: &ManipulationQuery) -> Result<ManipulationResult, ManipulationError> {
    solve_wm_with(q, DEFAULT_TUPLE_GUARD)
}

/// Can the manipulators put the goal candidate into the winning committee?
///
/// Exhaustive over deduplicated ballot tuples; stops at the first witness.
/// If `(2^m)^j` exceeds the guard, SAV queries fall through to the
/// polynomial [`sav_wm_fast`]; other rules report a resource error.
pub fn solve_wm_with(
    q: &ManipulationQuery,
    guard: u64,
) -> Result<ManipulationResult, ManipulationError> {
    let p = match &q.goal {
        ManipulationGoal::Include(p) => p.clone(),
        _ => {
            return Err(ManipulationError::WrongGoal {
                op: "solve_wm",
                expected: "include",
            })
        }
    };
    let base = base_instance(q)?;
    require_known(&base, std::iter::once(&p))?;
    if over_guard(&base, q.manipulators, guard) {
        if q.rule == Rule::Sav {
            return sav_wm_fast(q);
        }
        return Err(guard_error(&base, q.manipulators, guard));
    }
    scan(q, &base, |w| w.contains(&p))
}

/// The polynomial SAV winner-manipulation shortcut: approving exactly the
/// goal candidate maximizes the weight the manipulators can give them
/// while giving rivals nothing, so `j` copies of `{p}` succeed whenever
/// anything does.
pub fn sav_wm_fast(q: &ManipulationQuery) -> Result<ManipulationResult, ManipulationError> {
    let p = match &q.goal {
        ManipulationGoal::Include(p) => p.clone(),
        _ => {
            return Err(ManipulationError::WrongGoal {
                op: "sav_wm_fast",
                expected: "include",
            })
        }
    };
    let base = base_instance(q)?;
    require_known(&base, std::iter::once(&p))?;
    let bullet = ApprovalBallot::new(std::iter::once(p.clone()));
    let ballots = vec![bullet; q.manipulators];
    let w = sav_winners(&base.with_extra_ballots(&ballots))?;
    let success = w.contains(&p);
    Ok(ManipulationResult {
        success,
        witness: success.then_some(ballots),
        achieved_utility: None,
        search_space: 1,
    })
}

/// Winning-set manipulation with the default guard. See [`solve_wsm_with`].
pub fn solve_wsm(q: &ManipulationQuery) -> Result<ManipulationResult, ManipulationError> {
    solve_wsm_with(q, DEFAULT_TUPLE_GUARD)
}

/// Can the manipulators make the winning committee *exactly* the goal set?
pub fn solve_wsm_with(
    q: &ManipulationQuery,
    guard: u64,
) -> Result<ManipulationResult, ManipulationError> {
    let target = match &q.goal {
        ManipulationGoal::ExactSet(p) => p.clone(),
        _ => {
            return Err(ManipulationError::WrongGoal {
                op: "solve_wsm",
                expected: "exact-set",
            })
        }
    };
    let base = base_instance(q)?;
    require_known(&base, target.iter())?;
    if target.size() != q.k {
        return Err(ManipulationError::ExactSetSizeMismatch {
            got: target.size(),
            k: q.k,
        });
    }
    if over_guard(&base, q.manipulators, guard) {
        return Err(guard_error(&base, q.manipulators, guard));
    }
    scan(q, &base, |w| *w == target)
}

/// Utility-maximizing collusion with the default guard. See
/// [`best_response_with`].
pub fn best_response(q: &ManipulationQuery) -> Result<ManipulationResult, ManipulationError> {
    best_response_with(q, DEFAULT_TUPLE_GUARD)
}

/// Scans every ballot tuple and keeps the one whose resulting committee
/// has maximal utility; among utility ties, the tie-break-preferred
/// committee wins, and among those the first (lexicographically least)
/// tuple is kept. Always returns a witness and its achieved utility.
pub fn best_response_with(
    q: &ManipulationQuery,
    guard: u64,
) -> Result<ManipulationResult, ManipulationError> {
    let spec = match &q.goal {
        ManipulationGoal::Maximize(spec) => spec.clone(),
        _ => {
            return Err(ManipulationError::WrongGoal {
                op: "best_response",
                expected: "maximize",
            })
        }
    };
    let base = base_instance(q)?;
    require_known(&base, spec.utilities().keys())?;
    if over_guard(&base, q.manipulators, guard) {
        return Err(guard_error(&base, q.manipulators, guard));
    }
    let universe = ballot_universe(&base, q.rule == Rule::Sav);
    let mut best: Option<(Vec<usize>, Committee, Score)> = None;
    let mut error = None;
    let examined = scan_tuples(universe.len(), q.manipulators, &mut |idx| {
        let tuple: Vec<&ApprovalBallot> = idx.iter().map(|&i| &universe[i]).collect();
        let w = match winning_committee(q.rule, &base.with_extra_ballots(tuple)) {
            Ok(w) => w,
            Err(e) => {
                error = Some(e);
                return true;
            }
        };
        let u = spec.utility_of(&w);
        let better = match &best {
            None => true,
            Some((_, bw, bu)) => match u.cmp(bu) {
                Ordering::Greater => true,
                Ordering::Equal => {
                    compare_committees(&w, bw, &q.tiebreak).expect("validated committees")
                        == Ordering::Less
                }
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((idx.to_vec(), w, u));
        }
        false
    });
    if let Some(e) = error {
        return Err(e);
    }
    let (idx, _, utility) = best.expect("at least one tuple is always examined");
    Ok(ManipulationResult {
        success: true,
        witness: Some(idx.iter().map(|&i| universe[i].clone()).collect()),
        achieved_utility: Some(utility),
        search_space: examined,
    })
}

/// One profitable deviation found by [`audit_strategyproofness`]: what the
/// audited agent should have voted instead, and what that changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationReport {
    pub truthful_ballot: ApprovalBallot,
    pub truthful_outcome: Committee,
    pub truthful_utility: Score,
    pub deviation: ApprovalBallot,
    pub outcome: Committee,
    pub utility: Score,
    /// The deviation approves a candidate the agent values at zero.
    pub approves_zero_utility: bool,
    /// The deviation drops a candidate the agent values at one.
    pub drops_approved: bool,
}

/// Audits one agent (with dichotomous truth, voting last) for
/// strategyproofness: the agent's truthful ballot is their utility-1 set;
/// every alternative ballot is tried in canonical order and the first one
/// yielding strictly higher utility is reported. `None` means no
/// unilateral deviation helps. Under SAV the empty alternative ballot is
/// skipped, since SAV rejects empty ballots outright.
pub fn audit_strategyproofness(
    rule: Rule,
    fixed: &ApprovalProfile,
    k: usize,
    tiebreak: &PriorityOrder,
    truth: &UtilitySpec,
) -> Result<Option<DeviationReport>, ManipulationError> {
    if !truth.is_dichotomous() {
        return Err(ManipulationError::NotDichotomous);
    }
    let base = ElectionInstance::checked(fixed.clone(), k, tiebreak.clone())?;
    require_known(&base, truth.utilities().keys())?;
    let truthful_ballot = ApprovalBallot::new(truth.support());
    let truthful_outcome =
        winning_committee(rule, &base.with_extra_ballots(std::iter::once(&truthful_ballot)))?;
    let truthful_utility = truth.utility_of(&truthful_outcome);
    for alt in ballot_universe(&base, rule == Rule::Sav) {
        if alt == truthful_ballot {
            continue;
        }
        let outcome = winning_committee(rule, &base.with_extra_ballots(std::iter::once(&alt)))?;
        let utility = truth.utility_of(&outcome);
        if utility > truthful_utility {
            let support = truth.support();
            let approves_zero_utility = alt.iter().any(|c| !support.contains(c));
            let drops_approved = support.iter().any(|c| !alt.contains(c));
            return Ok(Some(DeviationReport {
                truthful_ballot,
                truthful_outcome,
                truthful_utility,
                deviation: alt,
                outcome,
                utility,
                approves_zero_utility,
                drops_approved,
            }));
        }
    }
    Ok(None)
}

fn base_instance(q: &ManipulationQuery) -> Result<ElectionInstance, ManipulationError> {
    Ok(ElectionInstance::checked(
        q.fixed.clone(),
        q.k,
        q.tiebreak.clone(),
    )?)
}

fn require_known<'a>(
    e: &ElectionInstance,
    ids: impl IntoIterator<Item = &'a CandidateId>,
) -> Result<(), ManipulationError> {
    for c in ids {
        if !e.profile.contains_candidate(c) {
            return Err(ManipulationError::GoalCandidateUnknown(c.clone()));
        }
    }
    Ok(())
}

fn naive_tuple_count(m: usize, j: usize) -> u128 {
    if j == 0 {
        return 1;
    }
    let per_ballot: u128 = if m >= 127 { u128::MAX } else { 1u128 << m };
    let mut total: u128 = 1;
    for _ in 0..j {
        total = total.saturating_mul(per_ballot);
    }
    total
}

fn over_guard(e: &ElectionInstance, j: usize, guard: u64) -> bool {
    naive_tuple_count(e.profile.candidates.len(), j) > guard as u128
}

fn guard_error(e: &ElectionInstance, j: usize, guard: u64) -> ManipulationError {
    ManipulationError::TupleGuardExceeded {
        tuples: naive_tuple_count(e.profile.candidates.len(), j),
        guard,
    }
}

/// Every possible ballot, ordered by (size ascending, then
/// priority-lexicographic). This is the canonical scan order all
/// searches use; under SAV the empty ballot is excluded.
fn ballot_universe(e: &ElectionInstance, skip_empty: bool) -> Vec<ApprovalBallot> {
    let ix = Indexed::compile(e).expect("caller validated the instance");
    let mut masks: Vec<Mask> = (0..(1u128 << ix.m))
        .filter(|&mask| !(skip_empty && mask == 0))
        .collect();
    masks.sort_by(|&x, &y| {
        x.count_ones()
            .cmp(&y.count_ones())
            .then_with(|| {
                if mask_preferred(x, y) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
    });
    masks
        .into_iter()
        .map(|mask| {
            ApprovalBallot::new(
                crate::indexed::iter_mask(mask)
                    .map(|r| e.profile.candidates[ix.rank_to_profile[r]].clone()),
            )
        })
        .collect()
}

/// Visits all non-decreasing index tuples of length `j` over
/// `0..universe`, in lexicographic order; `visit` returns true to stop.
/// Returns the number of tuples visited.
fn scan_tuples(
    universe: usize,
    j: usize,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> u64 {
    let mut idx = Vec::with_capacity(j);
    let mut count = 0u64;
    scan_rec(universe, j, 0, &mut idx, &mut count, visit);
    count
}

fn scan_rec(
    universe: usize,
    remaining: usize,
    start: usize,
    idx: &mut Vec<usize>,
    count: &mut u64,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if remaining == 0 {
        *count += 1;
        return visit(idx);
    }
    for i in start..universe {
        idx.push(i);
        let stop = scan_rec(universe, remaining - 1, i, idx, count, visit);
        idx.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Shared WM/WSM scan: first tuple whose committee satisfies `goal_met`.
fn scan(
    q: &ManipulationQuery,
    base: &ElectionInstance,
    goal_met: impl Fn(&Committee) -> bool,
) -> Result<ManipulationResult, ManipulationError> {
    let universe = ballot_universe(base, q.rule == Rule::Sav);
    let mut witness: Option<Vec<ApprovalBallot>> = None;
    let mut error = None;
    let examined = scan_tuples(universe.len(), q.manipulators, &mut |idx| {
        let tuple: Vec<&ApprovalBallot> = idx.iter().map(|&i| &universe[i]).collect();
        match winning_committee(q.rule, &base.with_extra_ballots(tuple)) {
            Ok(w) => {
                if goal_met(&w) {
                    witness = Some(idx.iter().map(|&i| universe[i].clone()).collect());
                    true
                } else {
                    false
                }
            }
            Err(e) => {
                error = Some(e);
                true
            }
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(ManipulationResult {
        success: witness.is_some(),
        witness,
        achieved_utility: None,
        search_space: examined,
    })
}
