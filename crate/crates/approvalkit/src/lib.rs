//! Exact solvers for approval-based committee elections.
//!
//! `approvalkit` computes winning committees under four approval rules —
//! utilitarian approval voting (AV), satisfaction approval voting (SAV),
//! proportional approval voting (PAV) and its sequential variant (RAV) —
//! and answers strategic questions about them: can a voter, or a colluding
//! group, change the outcome in their favour? All arithmetic is exact
//! rational; ties are broken by an explicit priority order, so every
//! function is deterministic and every reported score is a certificate you
//! can recheck by hand.
//!
//! The crate also builds election instances from graphs such that a given
//! independent set exists if and only if the election's best committee
//! reaches a score threshold — the standard route to showing that PAV
//! winner determination is computationally hard, here made executable.
//!
//! Start with [`ElectionInstance`] to describe an election, then:
//!
//! - [`av_winners`], [`sav_winners`], [`rav_winners`] for the polynomial
//!   rules,
//! - [`pav::pav_branch_and_bound`] (or the other solvers in [`pav`]) for
//!   exact PAV committees,
//! - [`manipulation`] for winner manipulation, winning-set manipulation,
//!   best responses and strategyproofness audits,
//! - [`reduction`] for the graph-to-election construction,
//! - [`io`] for the plain-text election and graph file formats.
//!
//! The `examples/` directory walks through each capability end to end.

mod indexed;

pub mod io;
pub mod manipulation;
pub mod model;
pub mod pav;
pub mod reduction;
pub mod rules;
pub mod score;

pub mod cli;

pub use indexed::CompileError;
pub use model::{
    compare_committees, committee_utility, validate_instance, ApprovalBallot, ApprovalProfile,
    CandidateId, Committee, ElectionInstance, ModelError, PriorityOrder, Violation,
};
pub use rules::{
    av_score, av_winners, harmonic, pav_score, rav_weight, rav_winners, sav_score, sav_winners,
    RavRound, RavTrace, Rule, RulesError,
};
pub use score::{Score, ScoreError};
