//! Scoring functions and winner determination for the four approval rules.
//!
//! AV and SAV winners come from per-candidate tallies (both objectives are
//! additive over committee members, so a top-k selection equals the
//! committee argmax; the equivalence is asserted by the test suites rather
//! than assumed). RAV runs its k reweighting rounds here and records a full
//! trace. PAV scoring lives here too, but PAV winner *search* is in
//! [`crate::pav`] since its decision problem is hard.

use crate::indexed::{iter_mask, CompileError, Indexed, Mask};
use crate::model::{ApprovalBallot, ApprovalProfile, CandidateId, Committee, ElectionInstance};
use crate::score::Score;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// The four approval-based multi-winner rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Av,
    Sav,
    Pav,
    Rav,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Av, Rule::Sav, Rule::Pav, Rule::Rav];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Av => "av",
            Rule::Sav => "sav",
            Rule::Pav => "pav",
            Rule::Rav => "rav",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = RulesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "av" => Ok(Rule::Av),
            "sav" => Ok(Rule::Sav),
            "pav" => Ok(Rule::Pav),
            "rav" => Ok(Rule::Rav),
            other => Err(RulesError::UnknownRule(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RulesError {
    #[error(transparent)]
    Instance(#[from] CompileError),
    #[error("committee member {0} is not a candidate of this profile")]
    UnknownCommitteeMember(CandidateId),
    #[error("SAV is undefined for the empty ballot (ballot {ballot})")]
    EmptySavBallot { ballot: usize },
    #[error("unknown rule {0:?} (expected av, sav, pav or rav)")]
    UnknownRule(String),
}

fn check_committee(profile: &ApprovalProfile, w: &Committee) -> Result<(), RulesError> {
    for c in w.iter() {
        if !profile.contains_candidate(c) {
            return Err(RulesError::UnknownCommitteeMember(c.clone()));
        }
    }
    Ok(())
}

/// Total approval score `App(W) = Σ_i |W ∩ A_i|`.
pub fn av_score(profile: &ApprovalProfile, w: &Committee) -> Result<Score, RulesError> {
    check_committee(profile, w)?;
    let total: usize = profile
        .ballots
        .iter()
        .map(|b| b.intersection_size(w.members()))
        .sum();
    Ok(Score::from_integer(total as u64))
}

/// Satisfaction score `Sat(W) = Σ_i |W ∩ A_i| / |A_i|`.
///
/// Fails on any empty ballot: an agent with no approvals has no defined
/// satisfaction fraction.
pub fn sav_score(profile: &ApprovalProfile, w: &Committee) -> Result<Score, RulesError> {
    check_committee(profile, w)?;
    let mut total = Score::zero();
    for (i, b) in profile.ballots.iter().enumerate() {
        if b.is_empty() {
            return Err(RulesError::EmptySavBallot { ballot: i });
        }
        let hit = b.intersection_size(w.members()) as u64;
        if hit > 0 {
            total += Score::new(hit, b.len() as u64).expect("non-zero ballot size");
        }
    }
    Ok(total)
}

/// The harmonic satisfaction score `r(p) = 1 + 1/2 + … + 1/p`, with
/// `r(0) = 0`.
pub fn harmonic(p: usize) -> Score {
    let mut total = Score::zero();
    for j in 1..=p {
        total += Score::reciprocal_of(j as u64);
    }
    total
}

/// Proportional approval score `Σ_i r(|W ∩ A_i|)`. Empty ballots
/// contribute zero.
pub fn pav_score(profile: &ApprovalProfile, w: &Committee) -> Result<Score, RulesError> {
    check_committee(profile, w)?;
    let mut total = Score::zero();
    for b in &profile.ballots {
        total += harmonic(b.intersection_size(w.members()));
    }
    Ok(total)
}

/// The RAV round weight of one agent given the partially elected set:
/// `1 / (1 + |w ∩ A_i|)`.
pub fn rav_weight(ballot: &ApprovalBallot, elected: &BTreeSet<CandidateId>) -> Score {
    let overlap = ballot.intersection_size(elected) as u64;
    Score::reciprocal_of(1 + overlap)
}

/// AV winners: the k candidates with the highest approval counts, candidate
/// ties broken by priority. Equals the tie-break-best `App`-maximising
/// committee.
pub fn av_winners(e: &ElectionInstance) -> Result<Committee, RulesError> {
    let ix = Indexed::compile(e)?;
    let mut counts = vec![0u64; ix.m];
    for &b in &ix.ballots {
        for r in iter_mask(b) {
            counts[r] += 1;
        }
    }
    Ok(top_k_by_weight_u64(&ix, e, &counts))
}

/// SAV winners: top-k candidates by `Σ_{i: c ∈ A_i} 1/|A_i|`, ties by
/// priority. Equals the tie-break-best `Sat`-maximising committee.
pub fn sav_winners(e: &ElectionInstance) -> Result<Committee, RulesError> {
    let ix = Indexed::compile(e)?;
    let mut weights = vec![Score::zero(); ix.m];
    for (i, &b) in ix.ballots.iter().enumerate() {
        if b == 0 {
            return Err(RulesError::EmptySavBallot { ballot: i });
        }
        let size = b.count_ones() as u64;
        for r in iter_mask(b) {
            weights[r] += Score::reciprocal_of(size);
        }
    }
    Ok(top_k_by_weight(&ix, e, &weights))
}

/// Sorts ranks by (weight descending, priority ascending) and takes the
/// first k. Rank order *is* priority order, so a stable sort by descending
/// weight does the whole job.
fn top_k_by_weight(ix: &Indexed, e: &ElectionInstance, weights: &[Score]) -> Committee {
    let mut ranks: Vec<usize> = (0..ix.m).collect();
    ranks.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let mask: Mask = ranks[..ix.k].iter().map(|&r| (1 as Mask) << r).sum();
    ix.committee_from_mask(e, mask)
}

fn top_k_by_weight_u64(ix: &Indexed, e: &ElectionInstance, weights: &[u64]) -> Committee {
    let mut ranks: Vec<usize> = (0..ix.m).collect();
    ranks.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let mask: Mask = ranks[..ix.k].iter().map(|&r| (1 as Mask) << r).sum();
    ix.committee_from_mask(e, mask)
}

/// One RAV round: the candidate elected and the weighted approval score of
/// every candidate that was still unelected when the round ran, listed in
/// decreasing priority.
#[derive(Clone, PartialEq, Eq)]
pub struct RavRound {
    pub selected: CandidateId,
    pub scores: Vec<(CandidateId, Score)>,
}

/// The full per-round record of a RAV run; `rounds.len() == k`.
#[derive(Clone, PartialEq, Eq)]
pub struct RavTrace {
    pub rounds: Vec<RavRound>,
}

impl RavTrace {
    /// Candidates in election order.
    pub fn elected_in_order(&self) -> Vec<CandidateId> {
        self.rounds.iter().map(|r| r.selected.clone()).collect()
    }
}

impl fmt::Debug for RavTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, round) in self.rounds.iter().enumerate() {
            writeln!(f, "round {}: elected {}", i + 1, round.selected)?;
        }
        Ok(())
    }
}

/// Runs the k reweighting rounds of RAV.
///
/// In each round every unelected candidate is scored by the summed weights
/// `1/(1+|W ∩ A_i|)` of its approvers, where W is the committee so far; the
/// maximum is elected, candidate ties broken by priority. Deterministic:
/// identical inputs give identical traces.
pub fn rav_winners(e: &ElectionInstance) -> Result<(Committee, RavTrace), RulesError> {
    let ix = Indexed::compile(e)?;
    let mut elected: Mask = 0;
    let mut rounds = Vec::with_capacity(ix.k);
    for _ in 0..ix.k {
        let mut best: Option<(usize, Score)> = None;
        let mut scores = Vec::with_capacity(ix.m - elected.count_ones() as usize);
        for r in 0..ix.m {
            if elected & (1 << r) != 0 {
                continue;
            }
            let mut score = Score::zero();
            for &b in &ix.ballots {
                if b & (1 << r) != 0 {
                    score += Score::reciprocal_of(1 + (b & elected).count_ones() as u64);
                }
            }
            // Strictly-greater keeps the lowest rank (highest priority) on ties.
            if best.as_ref().map_or(true, |(_, s)| score > *s) {
                best = Some((r, score.clone()));
            }
            scores.push((r, score));
        }
        let (winner_rank, _) = best.expect("k <= m guarantees an unelected candidate");
        elected |= 1 << winner_rank;
        rounds.push(RavRound {
            selected: e.profile.candidates[ix.rank_to_profile[winner_rank]].clone(),
            scores: scores
                .into_iter()
                .map(|(r, s)| {
                    (
                        e.profile.candidates[ix.rank_to_profile[r]].clone(),
                        s,
                    )
                })
                .collect(),
        });
    }
    Ok((ix.committee_from_mask(e, elected), RavTrace { rounds }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PriorityOrder;

    fn instance(
        candidates: &[&str],
        ballot_specs: &[&[&str]],
        k: usize,
        tiebreak: &[&str],
    ) -> ElectionInstance {
        let profile = ApprovalProfile::from_tokens(
            candidates.iter().copied(),
            ballot_specs.iter().map(|b| b.to_vec()),
        )
        .unwrap();
        ElectionInstance::new(
            profile,
            k,
            PriorityOrder::from_tokens(tiebreak.iter().copied()).unwrap(),
        )
    }

    fn committee(tokens: &[&str]) -> Committee {
        Committee::from_tokens(tokens.iter().copied()).unwrap()
    }

    #[test]
    fn av_score_counts_approvals() {
        let e = instance(
            &["a", "b", "c"],
            &[&["a"], &["a"], &["a"], &["c"], &["b", "c"]],
            2,
            &["a", "b", "c"],
        );
        assert_eq!(
            av_score(&e.profile, &committee(&["a", "c"])).unwrap(),
            Score::from_integer(5)
        );
    }

    #[test]
    fn av_score_trivial_cases() {
        let e = instance(&["a", "b"], &[&["a", "b"]], 2, &["a", "b"]);
        assert_eq!(
            av_score(&e.profile, &committee(&["a", "b"])).unwrap(),
            Score::from_integer(2)
        );
        let lonely = instance(&["a", "b", "c"], &[&["a"]], 1, &["a", "b", "c"]);
        assert_eq!(
            av_score(&lonely.profile, &committee(&["b", "c"])).unwrap(),
            Score::zero()
        );
    }

    #[test]
    fn av_score_rejects_unknown_member() {
        let e = instance(&["a"], &[&["a"]], 1, &["a"]);
        assert!(matches!(
            av_score(&e.profile, &committee(&["z"])),
            Err(RulesError::UnknownCommitteeMember(_))
        ));
    }

    #[test]
    fn sav_score_thm4_profile() {
        let e = instance(
            &["a", "b", "c"],
            &[&["a", "b"], &["a"], &["a"], &["a"], &["c"], &["b", "c"]],
            2,
            &["a", "b", "c"],
        );
        // 1/2 + 1 + 1 + 1 + 1 + 1/2 = 5
        assert_eq!(
            sav_score(&e.profile, &committee(&["a", "c"])).unwrap(),
            Score::from_integer(5)
        );
    }

    #[test]
    fn sav_score_fractions_and_zero() {
        let e = instance(&["a", "b", "c", "d"], &[&["a", "b", "c", "d"]], 2, &["a", "b", "c", "d"]);
        assert_eq!(
            sav_score(&e.profile, &committee(&["a", "b"])).unwrap(),
            Score::new(1, 2).unwrap()
        );
        let disjoint = instance(&["a", "b", "c"], &[&["a"], &["a"]], 1, &["a", "b", "c"]);
        assert_eq!(
            sav_score(&disjoint.profile, &committee(&["b"])).unwrap(),
            Score::zero()
        );
    }

    #[test]
    fn sav_score_rejects_empty_ballot() {
        let e = instance(&["a", "b"], &[&["a"], &[]], 1, &["a", "b"]);
        assert_eq!(
            sav_score(&e.profile, &committee(&["a"])),
            Err(RulesError::EmptySavBallot { ballot: 1 })
        );
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), Score::zero());
        assert_eq!(harmonic(1), Score::one());
        assert_eq!(harmonic(3), Score::new(11, 6).unwrap());
    }

    #[test]
    fn pav_score_thm4_profile() {
        let e = instance(
            &["a", "b", "c"],
            &[&["a", "b"], &["b"], &["a", "c"], &["a", "c"], &["c"]],
            2,
            &["a", "b", "c"],
        );
        // 1 + 0 + 3/2 + 3/2 + 1 = 5
        assert_eq!(
            pav_score(&e.profile, &committee(&["a", "c"])).unwrap(),
            Score::from_integer(5)
        );
        // 3/2 + 1 + 1 + 1 + 0 = 9/2
        assert_eq!(
            pav_score(&e.profile, &committee(&["a", "b"])).unwrap(),
            Score::new(9, 2).unwrap()
        );
    }

    #[test]
    fn pav_equals_av_on_single_intersections() {
        let e = instance(
            &["a", "b", "c", "d"],
            &[&["a"], &["b"], &["c"], &["a"]],
            2,
            &["a", "b", "c", "d"],
        );
        let w = committee(&["a", "d"]);
        assert_eq!(
            pav_score(&e.profile, &w).unwrap(),
            av_score(&e.profile, &w).unwrap()
        );
    }

    #[test]
    fn av_winners_counts_and_tiebreak() {
        let e = instance(
            &["a", "b", "c"],
            &[&["a"], &["a"], &["a"], &["c"], &["b", "c"]],
            2,
            &["a", "b", "c"],
        );
        assert_eq!(av_winners(&e).unwrap(), committee(&["a", "c"]));

        let unanimous = instance(&["a", "b", "c"], &[&["a", "b"], &["a", "b"]], 2, &["c", "b", "a"]);
        assert_eq!(av_winners(&unanimous).unwrap(), committee(&["a", "b"]));

        let silent = instance(&["a", "b", "c"], &[], 2, &["a", "b", "c"]);
        assert_eq!(av_winners(&silent).unwrap(), committee(&["a", "b"]));
    }

    #[test]
    fn sav_winners_thm4_cases() {
        // Agent 1 approves {a,b}: outcome {a,c}.
        let truthful = instance(
            &["a", "b", "c"],
            &[&["a", "b"], &["a"], &["a"], &["a"], &["c"], &["b", "c"]],
            2,
            &["a", "b", "c"],
        );
        assert_eq!(sav_winners(&truthful).unwrap(), committee(&["a", "c"]));

        // Agent 1 approves only b: b and c tie at 3/2, b wins by priority.
        let strategic = instance(
            &["a", "b", "c"],
            &[&["b"], &["a"], &["a"], &["a"], &["c"], &["b", "c"]],
            2,
            &["a", "b", "c"],
        );
        assert_eq!(sav_winners(&strategic).unwrap(), committee(&["a", "b"]));

        let single = instance(&["a", "b"], &[&["a"]], 1, &["b", "a"]);
        assert_eq!(sav_winners(&single).unwrap(), committee(&["a"]));
    }

    #[test]
    fn sav_winners_rejects_empty_ballot() {
        let e = instance(&["a", "b"], &[&[]], 1, &["a", "b"]);
        assert_eq!(
            sav_winners(&e),
            Err(RulesError::EmptySavBallot { ballot: 0 })
        );
    }

    #[test]
    fn rav_weight_formula() {
        let b = ApprovalBallot::from_tokens(["a"]).unwrap();
        assert_eq!(rav_weight(&b, &BTreeSet::new()), Score::one());

        let b = ApprovalBallot::from_tokens(["b", "c", "d"]).unwrap();
        let elected = Committee::from_tokens(["b", "c"]).unwrap();
        assert_eq!(rav_weight(&b, elected.members()), Score::new(1, 3).unwrap());

        let b = ApprovalBallot::from_tokens(["a", "b", "c", "d"]).unwrap();
        let all = Committee::from_tokens(["a", "b", "c", "d"]).unwrap();
        assert_eq!(rav_weight(&b, all.members()), Score::new(1, 5).unwrap());
    }

    /// The nine-agent k=2 election where one agent's ballot decides between
    /// {b,c} and {a,d}.
    fn rav_k2_instance(first: &[&str]) -> ElectionInstance {
        let mut all: Vec<&[&str]> = vec![first];
        all.extend_from_slice(&[
            &["b", "d"],
            &["c", "d"],
            &["a", "b", "c", "d"],
            &["b", "c", "d"],
            &["b", "c", "d"],
            &["a", "b"],
            &["c"],
            &["a"],
        ]);
        instance(&["a", "b", "c", "d"], &all, 2, &["a", "b", "c", "d"])
    }

    #[test]
    fn rav_rounds_with_truthful_ballot() {
        let (w, trace) = rav_winners(&rav_k2_instance(&["a"])).unwrap();
        assert_eq!(w, committee(&["b", "c"]));
        let elected = trace.elected_in_order();
        assert_eq!(elected[0].as_str(), "b");
        assert_eq!(elected[1].as_str(), "c");
        // Round 1: b, c and d all score 5; b wins by priority.
        let r1: std::collections::BTreeMap<_, _> = trace.rounds[0]
            .scores
            .iter()
            .map(|(c, s)| (c.as_str().to_string(), s.clone()))
            .collect();
        assert_eq!(r1["b"], Score::from_integer(5));
        assert_eq!(r1["c"], Score::from_integer(5));
        assert_eq!(r1["d"], Score::from_integer(5));
        assert_eq!(r1["a"], Score::from_integer(4));
        // Round 2: c at 7/2.
        let r2: std::collections::BTreeMap<_, _> = trace.rounds[1]
            .scores
            .iter()
            .map(|(c, s)| (c.as_str().to_string(), s.clone()))
            .collect();
        assert_eq!(r2["c"], Score::new(7, 2).unwrap());
    }

    #[test]
    fn rav_rounds_with_padded_ballot() {
        let (w, trace) = rav_winners(&rav_k2_instance(&["a", "d"])).unwrap();
        assert_eq!(w, committee(&["a", "d"]));
        let elected = trace.elected_in_order();
        assert_eq!(elected[0].as_str(), "d");
        assert_eq!(elected[1].as_str(), "a");
        let r1: std::collections::BTreeMap<_, _> = trace.rounds[0]
            .scores
            .iter()
            .map(|(c, s)| (c.as_str().to_string(), s.clone()))
            .collect();
        assert_eq!(r1["d"], Score::from_integer(6));
        // Round 2: a, b, c tie at 3; a wins by priority.
        let r2: std::collections::BTreeMap<_, _> = trace.rounds[1]
            .scores
            .iter()
            .map(|(c, s)| (c.as_str().to_string(), s.clone()))
            .collect();
        assert_eq!(r2["a"], Score::from_integer(3));
        assert_eq!(r2["b"], Score::from_integer(3));
        assert_eq!(r2["c"], Score::from_integer(3));
    }

    #[test]
    fn rav_k1_equals_av() {
        let e = instance(
            &["a", "b", "c"],
            &[&["a"], &["b"], &["b"], &["c"]],
            1,
            &["a", "b", "c"],
        );
        let (w, trace) = rav_winners(&e).unwrap();
        assert_eq!(w, av_winners(&e).unwrap());
        assert_eq!(trace.rounds.len(), 1);
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("pav".parse::<Rule>().unwrap(), Rule::Pav);
        assert!("borda".parse::<Rule>().is_err());
        assert_eq!(Rule::Sav.to_string(), "sav");
    }

    #[test]
    fn empty_ballot_contributes_nothing_to_av_pav_rav() {
        let e = instance(
            &["a", "b"],
            &[&[], &["a"], &["b"], &["b"]],
            1,
            &["a", "b"],
        );
        assert_eq!(
            av_score(&e.profile, &committee(&["a"])).unwrap(),
            Score::one()
        );
        assert_eq!(
            pav_score(&e.profile, &committee(&["a"])).unwrap(),
            Score::one()
        );
        let (w, _) = rav_winners(&e).unwrap();
        assert_eq!(w, committee(&["b"]));
    }
}
