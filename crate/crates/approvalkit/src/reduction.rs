//! The Independent-Set-to-PAV construction, executable.
//!
//! [`is_to_pav`] turns a graph and a target size `t` into an election in
//! which some committee reaches a known score threshold **iff** the graph
//! has an independent set of size `t`. This is the standard argument that
//! PAV winner determination is NP-hard, realised here as a generator so
//! the equivalence can be checked instance by instance:
//! [`verify_reduction`] compares the exact PAV threshold decision against
//! the brute-force graph oracle [`independent_set_exists`].
//!
//! Construction, for a graph G with maximum degree deg(G) > 1:
//!
//! - one candidate `v{i}` per vertex i;
//! - for each vertex with degree below deg(G), enough dummy candidates
//!   `d{i}_{j}` and one two-candidate agent `{v{i}, d{i}_{j}}` per dummy
//!   to bring `v{i}`'s approval count up to exactly deg(G);
//! - one agent `{v{u}, v{v}}` per edge;
//! - committee size `t`, threshold `deg(G) · t`.
//!
//! Every vertex candidate is approved by exactly deg(G) agents, and no
//! two of an independent set's candidates share an agent, so its
//! committee scores exactly `deg(G) · t`; any overlap loses at least half
//! a point. All output is deterministically ordered (edge agents first,
//! then vertex agents grouped by vertex; tie-break = candidate generation
//! order), so generated instances are reproducible byte for byte.

use crate::model::{ApprovalBallot, ApprovalProfile, CandidateId, Committee, ElectionInstance, PriorityOrder};
use crate::pav::{pav_reaches, PavError};
use crate::score::Score;
use std::collections::{BTreeMap, BTreeSet};

/// Maximum vertex count the brute-force independent-set oracle accepts.
pub const MAX_ORACLE_VERTICES: usize = 20;

/// A simple undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    /// Normalized to (low, high) pairs.
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("vertex {v} out of range (graph has {n} vertices)")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("the construction requires a maximum degree above 1, got {0}")]
    DegreeTooLow(usize),
    #[error("target size {t} out of range 1..={n}")]
    TargetOutOfRange { t: usize, n: usize },
    #[error("the independent-set oracle supports at most {max} vertices, got {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error(transparent)]
    Pav(#[from] PavError),
}

impl Graph {
    /// Builds a graph, normalizing edge direction; self-loops, duplicate
    /// edges and out-of-range endpoints are rejected.
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph, ReductionError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(ReductionError::VertexOutOfRange {
                        v: w,
                        n: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(ReductionError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(ReductionError::DuplicateEdge { u: e.0, v: e.1 });
            }
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (low, high) pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// deg(G): the maximum vertex degree (0 on an empty graph).
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }
}

/// The generated election plus everything needed to interpret it: the
/// score threshold standing in for "has an independent set of size t",
/// and the candidate bookkeeping mapping committees back to vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub election: ElectionInstance,
    pub threshold: Score,
    pub vertex_candidate_map: BTreeMap<usize, CandidateId>,
    pub dummy_candidates: Vec<CandidateId>,
}

/// Builds the election encoding "does `g` have an independent set of
/// size `t`?" as a PAV score-threshold question. See the module
/// documentation for the construction; requires deg(G) > 1 and
/// `1 ≤ t ≤ vertex count`.
pub fn is_to_pav(g: &Graph, t: usize) -> Result<ReductionInstance, ReductionError> {
    let n = g.vertex_count();
    let deg_g = g.max_degree();
    if deg_g <= 1 {
        return Err(ReductionError::DegreeTooLow(deg_g));
    }
    if t < 1 || t > n {
        return Err(ReductionError::TargetOutOfRange { t, n });
    }

    let vertex_candidates: Vec<CandidateId> = (0..n)
        .map(|v| CandidateId::new(format!("v{v}")).expect("generated token"))
        .collect();
    let mut dummies_of: Vec<Vec<CandidateId>> = Vec::with_capacity(n);
    for v in 0..n {
        dummies_of.push(
            (1..=deg_g - g.degree(v))
                .map(|j| CandidateId::new(format!("d{v}_{j}")).expect("generated token"))
                .collect(),
        );
    }

    let mut candidates = vertex_candidates.clone();
    candidates.extend(dummies_of.iter().flatten().cloned());

    let mut ballots = Vec::new();
    for (u, v) in g.edges() {
        ballots.push(ApprovalBallot::new([
            vertex_candidates[u].clone(),
            vertex_candidates[v].clone(),
        ]));
    }
    for v in 0..n {
        for d in &dummies_of[v] {
            ballots.push(ApprovalBallot::new([
                vertex_candidates[v].clone(),
                d.clone(),
            ]));
        }
    }

    let tiebreak = PriorityOrder::new(candidates.clone()).expect("generated names are unique");
    let election = ElectionInstance::checked(
        ApprovalProfile::new(candidates, ballots),
        t,
        tiebreak,
    )
    .expect("construction always yields a valid instance");

    Ok(ReductionInstance {
        election,
        threshold: Score::from_integer((deg_g * t) as u64),
        vertex_candidate_map: (0..n).map(|v| (v, vertex_candidates[v].clone())).collect(),
        dummy_candidates: dummies_of.into_iter().flatten().collect(),
    })
}

/// Brute-force oracle: does `g` contain `t` pairwise non-adjacent
/// vertices? Exact but exponential; limited to [`MAX_ORACLE_VERTICES`].
pub fn independent_set_exists(g: &Graph, t: usize) -> Result<bool, ReductionError> {
    let n = g.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(ReductionError::TooManyVertices {
            n,
            max: MAX_ORACLE_VERTICES,
        });
    }
    if t > n {
        return Ok(false);
    }
    let edge_masks: Vec<u32> = g.edges().map(|(u, v)| (1 << u) | (1 << v)).collect();
    for subset in 0u32..(1u32 << n) {
        if subset.count_ones() as usize != t {
            continue;
        }
        if edge_masks.iter().all(|&e| (subset & e) != e) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Everything [`verify_reduction`] compared, for reporting: the two
/// independently computed answers and, when a committee reaches the
/// threshold, one that does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub threshold: Score,
    pub independent_set_exists: bool,
    pub pav_reaches_threshold: bool,
    pub witness: Option<Committee>,
    /// True iff the two answers coincide — the reduction's correctness
    /// statement for this instance.
    pub agrees: bool,
}

/// Checks the reduction's iff on one instance: builds the election,
/// decides the PAV threshold question exactly, and compares with the
/// graph oracle. Expected true for every valid input; a false return
/// would witness a construction bug.
pub fn verify_reduction(g: &Graph, t: usize) -> Result<bool, ReductionError> {
    Ok(verify_reduction_report(g, t)?.agrees)
}

/// As [`verify_reduction`], but returns both sides and the witness
/// committee.
pub fn verify_reduction_report(g: &Graph, t: usize) -> Result<VerificationReport, ReductionError> {
    let reduced = is_to_pav(g, t)?;
    let decision = pav_reaches(&reduced.election, &reduced.threshold)?;
    let is_answer = independent_set_exists(g, t)?;
    Ok(VerificationReport {
        threshold: reduced.threshold,
        independent_set_exists: is_answer,
        pav_reaches_threshold: decision.reached,
        witness: decision.witness,
        agrees: decision.reached == is_answer,
    })
}
