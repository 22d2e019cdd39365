//! Domain model shared by every solver: candidates, approval ballots,
//! profiles, committees and the tie-breaking priority order.
//!
//! All types are immutable values after construction and all operations here
//! are pure functions, so everything is safe to share across threads without
//! coordination.

use crate::score::Score;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Forwards `Debug` to the `Display` form; these identifiers read better
/// unquoted in test failure output.
macro_rules! fmt_debug_as_display {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt::Display::fmt(self, f)
        }
    };
}

/// A candidate identifier: a short printable token, unique within an
/// election. Tokens are case-sensitive so files round-trip bit-exactly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(String);

impl CandidateId {
    /// Validates the token: non-empty and free of whitespace.
    pub fn new(token: impl Into<String>) -> Result<Self, ModelError> {
        let token = token.into();
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(ModelError::BadToken(token));
        }
        Ok(CandidateId(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CandidateId {
    fmt_debug_as_display!();
}

impl FromStr for CandidateId {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CandidateId::new(s)
    }
}

/// The set of candidates one agent approves of.
///
/// Set semantics: duplicates are impossible. The empty ballot is
/// representable; each rule states its own policy for it (SAV rejects it,
/// the other rules treat it as contributing nothing).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApprovalBallot(BTreeSet<CandidateId>);

impl ApprovalBallot {
    pub fn new(approved: impl IntoIterator<Item = CandidateId>) -> Self {
        ApprovalBallot(approved.into_iter().collect())
    }

    /// Convenience constructor from raw tokens.
    pub fn from_tokens<S: AsRef<str>>(
        tokens: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        for t in tokens {
            set.insert(CandidateId::new(t.as_ref())?);
        }
        Ok(ApprovalBallot(set))
    }

    pub fn empty() -> Self {
        ApprovalBallot(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: &CandidateId) -> bool {
        self.0.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CandidateId> {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<CandidateId> {
        &self.0
    }

    /// Number of approved candidates that appear in `other`.
    pub fn intersection_size(&self, other: &BTreeSet<CandidateId>) -> usize {
        self.0.intersection(other).count()
    }
}

impl fmt::Display for ApprovalBallot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ApprovalBallot {
    fmt_debug_as_display!();
}

/// An election profile: the ordered candidate list (defining `m`) and the
/// ordered ballot list (defining `n`).
///
/// Ballot order is significant only for reporting; all rule scores are
/// anonymous, so permuting the ballot list never changes any score.
#[derive(Clone, PartialEq, Eq)]
pub struct ApprovalProfile {
    pub candidates: Vec<CandidateId>,
    pub ballots: Vec<ApprovalBallot>,
}

impl ApprovalProfile {
    pub fn new(candidates: Vec<CandidateId>, ballots: Vec<ApprovalBallot>) -> Self {
        ApprovalProfile {
            candidates,
            ballots,
        }
    }

    /// Convenience constructor from raw tokens.
    pub fn from_tokens<S: AsRef<str>>(
        candidates: impl IntoIterator<Item = S>,
        ballots: impl IntoIterator<Item = Vec<S>>,
    ) -> Result<Self, ModelError> {
        let candidates = candidates
            .into_iter()
            .map(|t| CandidateId::new(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let ballots = ballots
            .into_iter()
            .map(ApprovalBallot::from_tokens)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ApprovalProfile::new(candidates, ballots))
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_ballots(&self) -> usize {
        self.ballots.len()
    }

    pub fn candidate_set(&self) -> BTreeSet<CandidateId> {
        self.candidates.iter().cloned().collect()
    }

    pub fn contains_candidate(&self, c: &CandidateId) -> bool {
        self.candidates.iter().any(|x| x == c)
    }

    /// Appends extra ballots, e.g. the votes of manipulating agents.
    pub fn with_extra_ballots<'a>(
        &self,
        extra: impl IntoIterator<Item = &'a ApprovalBallot>,
    ) -> ApprovalProfile {
        let mut ballots = self.ballots.clone();
        ballots.extend(extra.into_iter().cloned());
        ApprovalProfile {
            candidates: self.candidates.clone(),
            ballots,
        }
    }
}

impl fmt::Debug for ApprovalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "candidates [")?;
        for (i, c) in self.candidates.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]; ballots [")?;
        for (i, b) in self.ballots.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// The tie-breaking linear order over candidates, highest priority first.
/// Lifted to equal-size committees lexicographically: list each committee's
/// members in decreasing priority and compare the sequences.
#[derive(Clone, PartialEq, Eq)]
pub struct PriorityOrder {
    order: Vec<CandidateId>,
    rank: BTreeMap<CandidateId, usize>,
}

impl PriorityOrder {
    /// Builds the order from candidates listed highest-priority first.
    /// Rejects duplicate entries.
    pub fn new(order: Vec<CandidateId>) -> Result<Self, ModelError> {
        let mut rank = BTreeMap::new();
        for (i, c) in order.iter().enumerate() {
            if rank.insert(c.clone(), i).is_some() {
                return Err(ModelError::DuplicateInPriority(c.clone()));
            }
        }
        Ok(PriorityOrder { order, rank })
    }

    pub fn from_tokens<S: AsRef<str>>(
        tokens: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModelError> {
        let order = tokens
            .into_iter()
            .map(|t| CandidateId::new(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        PriorityOrder::new(order)
    }

    pub fn candidates(&self) -> &[CandidateId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Rank of a candidate, 0 = highest priority.
    pub fn rank_of(&self, c: &CandidateId) -> Option<usize> {
        self.rank.get(c).copied()
    }

    /// True iff this order contains exactly the given candidates.
    pub fn is_permutation_of(&self, candidates: &[CandidateId]) -> bool {
        self.order.len() == candidates.len()
            && candidates.iter().all(|c| self.rank.contains_key(c))
    }

    /// Sorts ids into decreasing-priority order.
    pub fn sort_by_priority(&self, ids: &mut [CandidateId]) {
        ids.sort_by_key(|c| self.rank_of(c).unwrap_or(usize::MAX));
    }
}

impl fmt::Debug for PriorityOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PriorityOrder(")?;
        for (i, c) in self.order.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A committee: a k-subset of the candidates. `k` is the member count.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Committee(BTreeSet<CandidateId>);

impl Committee {
    pub fn new(members: impl IntoIterator<Item = CandidateId>) -> Self {
        Committee(members.into_iter().collect())
    }

    pub fn from_tokens<S: AsRef<str>>(
        tokens: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        for t in tokens {
            set.insert(CandidateId::new(t.as_ref())?);
        }
        Ok(Committee(set))
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, c: &CandidateId) -> bool {
        self.0.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CandidateId> {
        self.0.iter()
    }

    pub fn members(&self) -> &BTreeSet<CandidateId> {
        &self.0
    }

    /// Members listed in decreasing priority under `t`.
    pub fn members_by_priority(&self, t: &PriorityOrder) -> Vec<CandidateId> {
        let mut v: Vec<CandidateId> = self.0.iter().cloned().collect();
        t.sort_by_priority(&mut v);
        v
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Committee {
    fmt_debug_as_display!();
}

/// A complete winner-determination input: profile, committee size and the
/// tie-breaking order. Plain data; see [`validate_instance`] for the
/// invariant checks every solver applies before running.
#[derive(Clone, PartialEq, Eq)]
pub struct ElectionInstance {
    pub profile: ApprovalProfile,
    pub k: usize,
    pub tiebreak: PriorityOrder,
}

impl ElectionInstance {
    pub fn new(profile: ApprovalProfile, k: usize, tiebreak: PriorityOrder) -> Self {
        ElectionInstance {
            profile,
            k,
            tiebreak,
        }
    }

    /// Checked constructor: fails if the instance violates any invariant.
    pub fn checked(
        profile: ApprovalProfile,
        k: usize,
        tiebreak: PriorityOrder,
    ) -> Result<Self, ModelError> {
        let e = ElectionInstance::new(profile, k, tiebreak);
        let violations = validate_instance(&e);
        if violations.is_empty() {
            Ok(e)
        } else {
            Err(ModelError::InvalidInstance(violations))
        }
    }

    /// Same fixed data with a different first-agent ballot appended; used all
    /// over the strategic-voting code.
    pub fn with_extra_ballots<'a>(
        &self,
        extra: impl IntoIterator<Item = &'a ApprovalBallot>,
    ) -> ElectionInstance {
        ElectionInstance {
            profile: self.profile.with_extra_ballots(extra),
            k: self.k,
            tiebreak: self.tiebreak.clone(),
        }
    }
}

impl fmt::Debug for ElectionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}; k={}; tiebreak {:?}",
            self.profile, self.k, self.tiebreak
        )
    }
}

/// One invariant violation found by [`validate_instance`]. Violations are
/// data, not failures: a malformed instance is representable and reportable.
#[derive(Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyCandidateList,
    DuplicateCandidate(CandidateId),
    /// Ballot `ballot` (0-based) approves a candidate outside the profile.
    UnknownBallotCandidate {
        ballot: usize,
        candidate: CandidateId,
    },
    KOutOfRange {
        k: usize,
        m: usize,
    },
    TiebreakNotPermutation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyCandidateList => write!(f, "candidate list is empty"),
            Violation::DuplicateCandidate(c) => write!(f, "duplicate candidate {c}"),
            Violation::UnknownBallotCandidate { ballot, candidate } => {
                write!(f, "ballot {ballot} approves unknown candidate {candidate}")
            }
            Violation::KOutOfRange { k, m } => {
                if *k > *m {
                    write!(f, "k exceeds candidate count ({k} > {m})")
                } else {
                    write!(f, "k must be at least 1")
                }
            }
            Violation::TiebreakNotPermutation => {
                write!(f, "tiebreak order is not a permutation of the candidates")
            }
        }
    }
}

impl fmt::Debug for Violation {
    fmt_debug_as_display!();
}

/// Returns every invariant violation in the instance; an empty list means
/// the instance is well-formed.
pub fn validate_instance(e: &ElectionInstance) -> Vec<Violation> {
    let mut violations = Vec::new();
    let m = e.profile.num_candidates();
    if m == 0 {
        violations.push(Violation::EmptyCandidateList);
    }
    let mut seen = BTreeSet::new();
    for c in &e.profile.candidates {
        if !seen.insert(c.clone()) {
            violations.push(Violation::DuplicateCandidate(c.clone()));
        }
    }
    for (i, ballot) in e.profile.ballots.iter().enumerate() {
        for c in ballot.iter() {
            if !seen.contains(c) {
                violations.push(Violation::UnknownBallotCandidate {
                    ballot: i,
                    candidate: c.clone(),
                });
            }
        }
    }
    if e.k < 1 || e.k > m {
        violations.push(Violation::KOutOfRange { k: e.k, m });
    }
    if !e.tiebreak.is_permutation_of(&e.profile.candidates) {
        violations.push(Violation::TiebreakNotPermutation);
    }
    violations
}

/// Compares two equal-size committees under the tie-breaking order.
///
/// Each committee is read as its member sequence in decreasing priority; the
/// lexicographically earlier sequence is preferred. `Less` means `x` is
/// preferred, `Greater` means `y` is preferred, `Equal` means the same
/// member set. This defines a strict total order on distinct equal-size
/// committees.
pub fn compare_committees(
    x: &Committee,
    y: &Committee,
    t: &PriorityOrder,
) -> Result<Ordering, ModelError> {
    if x.size() != y.size() {
        return Err(ModelError::CommitteeSizeMismatch {
            x: x.size(),
            y: y.size(),
        });
    }
    for c in x.iter().chain(y.iter()) {
        if t.rank_of(c).is_none() {
            return Err(ModelError::NotInPriority(c.clone()));
        }
    }
    // The highest-priority candidate in the symmetric difference decides:
    // the committee containing it has the lexicographically earlier member
    // sequence.
    for c in t.candidates() {
        match (x.contains(c), y.contains(c)) {
            (true, false) => return Ok(Ordering::Less),
            (false, true) => return Ok(Ordering::Greater),
            _ => {}
        }
    }
    Ok(Ordering::Equal)
}

/// Utility of a committee under additive per-candidate utilities; used by
/// the strategic-voting solvers but defined here next to `Committee`.
pub fn committee_utility(utilities: &BTreeMap<CandidateId, Score>, w: &Committee) -> Score {
    w.iter()
        .filter_map(|c| utilities.get(c))
        .cloned()
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid candidate token {0:?} (must be non-empty, no whitespace)")]
    BadToken(String),
    #[error("candidate {0} appears twice in the priority order")]
    DuplicateInPriority(CandidateId),
    #[error("candidate {0} is not in the priority order")]
    NotInPriority(CandidateId),
    #[error("committees differ in size ({x} vs {y})")]
    CommitteeSizeMismatch { x: usize, y: usize },
    #[error("invalid election instance: {}", format_violations(.0))]
    InvalidInstance(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
