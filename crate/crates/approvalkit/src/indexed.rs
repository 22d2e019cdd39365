//! Compiled election representation used by the solvers.
//!
//! Candidates are re-indexed by tie-break priority (bit 0 = highest
//! priority) and ballots become `u128` bitmasks, so committee comparison,
//! intersection counting and lexicographic enumeration are all a handful of
//! machine instructions. Public API types are converted at the boundary.

use crate::model::{validate_instance, Committee, ElectionInstance, ModelError};
use crate::score::Score;

/// Internal scale limit: bitmask committees cap the candidate count.
pub(crate) const MAX_CANDIDATES: usize = 128;

/// A set of candidates as a bitmask over priority ranks.
pub(crate) type Mask = u128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Invalid(#[from] ModelError),
    #[error("instance has {m} candidates; this build supports at most {MAX_CANDIDATES}")]
    TooManyCandidates { m: usize },
}

/// An election compiled to rank space.
pub(crate) struct Indexed {
    pub m: usize,
    pub k: usize,
    /// Ballots as rank masks, in profile order.
    pub ballots: Vec<Mask>,
    /// `rank_to_profile[r]` = index into `profile.candidates` of the
    /// candidate with priority rank `r`.
    pub rank_to_profile: Vec<usize>,
}

impl Indexed {
    /// Validates and compiles. Any invariant violation surfaces as
    /// `CompileError::Invalid` carrying the violation list.
    pub fn compile(e: &ElectionInstance) -> Result<Indexed, CompileError> {
        let violations = validate_instance(e);
        if !violations.is_empty() {
            return Err(ModelError::InvalidInstance(violations).into());
        }
        let m = e.profile.num_candidates();
        if m > MAX_CANDIDATES {
            return Err(CompileError::TooManyCandidates { m });
        }
        let mut rank_to_profile = vec![0usize; m];
        for (pi, c) in e.profile.candidates.iter().enumerate() {
            let r = e.tiebreak.rank_of(c).expect("validated permutation");
            rank_to_profile[r] = pi;
        }
        let ballots = e
            .profile
            .ballots
            .iter()
            .map(|b| {
                let mut mask: Mask = 0;
                for c in b.iter() {
                    let r = e.tiebreak.rank_of(c).expect("validated ballot");
                    mask |= 1 << r;
                }
                mask
            })
            .collect();
        Ok(Indexed {
            m,
            k: e.k,
            ballots,
            rank_to_profile,
        })
    }

    /// Converts a rank mask back into a public committee.
    pub fn committee_from_mask(&self, e: &ElectionInstance, mask: Mask) -> Committee {
        Committee::new(iter_mask(mask).map(|r| {
            e.profile.candidates[self.rank_to_profile[r]].clone()
        }))
    }

    /// Rank mask of a public committee; `None` if a member is unknown.
    #[cfg(test)]
    pub fn mask_from_committee(&self, e: &ElectionInstance, w: &Committee) -> Option<Mask> {
        let mut mask: Mask = 0;
        for c in w.iter() {
            mask |= 1 << e.tiebreak.rank_of(c)?;
        }
        Some(mask)
    }
}

/// Iterates the set bits (priority ranks) of a mask, lowest first.
pub(crate) fn iter_mask(mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::successors(
        if mask == 0 { None } else { Some(mask) },
        |&m| {
            let next = m & (m - 1);
            (next != 0).then_some(next)
        },
    )
    .map(|m| m.trailing_zeros() as usize)
}

/// True iff committee mask `x` is preferred to `y` under the rank order
/// (both size-k, rank 0 = highest priority): the lowest differing bit
/// belongs to the preferred committee.
pub(crate) fn mask_preferred(x: Mask, y: Mask) -> bool {
    let diff = x ^ y;
    if diff == 0 {
        return false;
    }
    let low = diff & diff.wrapping_neg();
    x & low != 0
}

/// Exact PAV score of a committee mask, as a rational.
pub(crate) fn pav_score_mask(ballots: &[Mask], w: Mask) -> Score {
    let mut total = Score::zero();
    for &b in ballots {
        let p = (b & w).count_ones();
        for j in 1..=p {
            total += Score::reciprocal_of(j as u64);
        }
    }
    total
}
