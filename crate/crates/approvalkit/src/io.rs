//! Plain-text file formats and the CLI's result document.
//!
//! # Election files
//!
//! Line-oriented; `#` starts a comment that runs to the end of the line;
//! blank lines are ignored. The first content line must list the
//! candidates, then `k:` and `tiebreak:` in either order, then the
//! ballots:
//!
//! ```text
//! candidates: a b c
//! k: 2
//! tiebreak: a b c
//! 3 * ballot: a        # three agents approving exactly {a}
//! ballot: c
//! ballot: b c
//! ballot:              # an agent approving nobody
//! ```
//!
//! [`render_election`] writes this same shape back (collapsing runs of
//! consecutive identical ballots into the `N * ballot:` form), and
//! `parse(render(e)) == e` holds for every instance.
//!
//! # Graph files
//!
//! ```text
//! vertices: 3
//! edge: 0 1
//! edge: 1 2
//! ```
//!
//! # Result documents
//!
//! Every CLI command prints one [`ResultDocument`]: a fixed-field-order
//! record rendered either as JSON or as stable `key: value` text lines.
//! Identical inputs produce byte-identical output; scores always appear
//! as exact reduced fractions like `7/2` or `5/1`, never as decimals.

use crate::model::{
    ApprovalBallot, ApprovalProfile, CandidateId, Committee, ElectionInstance, PriorityOrder,
};
use crate::reduction::Graph;
use crate::rules::RavTrace;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// A parse failure, with the 1-based source line when one applies.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("expected `candidates:` as the first line")]
    ExpectedCandidatesFirst,
    #[error("expected `vertices:` as the first line")]
    ExpectedVerticesFirst,
    #[error("duplicate `{0}` line")]
    DuplicateHeader(&'static str),
    #[error("missing `{0}` line")]
    MissingHeader(&'static str),
    #[error("`{0}` must appear before the first ballot")]
    HeaderAfterBallots(&'static str),
    #[error("`{0}` lists no entries")]
    EmptyHeader(&'static str),
    #[error("invalid candidate token {0:?}")]
    BadToken(String),
    #[error("duplicate candidate {0}")]
    DuplicateCandidate(CandidateId),
    #[error("unknown candidate {0}")]
    UnknownCandidate(CandidateId),
    #[error("candidate {0} appears twice in one ballot")]
    DuplicateInBallot(CandidateId),
    #[error("tiebreak is not a permutation of the candidates")]
    TiebreakNotPermutation,
    #[error("bad multiplicity {0:?} (need an integer >= 1)")]
    BadMultiplicity(String),
    #[error("bad integer {0:?}")]
    BadInteger(String),
    #[error("{0}")]
    InvalidEdge(String),
    #[error("unrecognized line {0:?}")]
    UnrecognizedLine(String),
}

fn err_at(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line: Some(line),
        kind,
    }
}

fn err_eof(kind: ParseErrorKind) -> ParseError {
    ParseError { line: None, kind }
}

fn content_of(raw: &str) -> &str {
    match raw.find('#') {
        Some(i) => raw[..i].trim(),
        None => raw.trim(),
    }
}

fn parse_tokens(rest: &str, line: usize) -> Result<Vec<CandidateId>, ParseError> {
    rest.split_whitespace()
        .map(|t| {
            CandidateId::new(t).map_err(|_| err_at(line, ParseErrorKind::BadToken(t.to_string())))
        })
        .collect()
}

/// Parses an election file. Grammar errors carry the offending line;
/// semantic validity beyond the grammar (such as `k` being in range) is
/// the solvers' concern, via [`crate::model::validate_instance`].
pub fn parse_election(text: &str) -> Result<ElectionInstance, ParseError> {
    let mut candidates: Option<Vec<CandidateId>> = None;
    let mut candidate_set: BTreeSet<CandidateId> = BTreeSet::new();
    let mut k: Option<usize> = None;
    let mut tiebreak: Option<PriorityOrder> = None;
    let mut ballots: Vec<ApprovalBallot> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = content_of(raw);
        if content.is_empty() {
            continue;
        }

        if let Some(rest) = content.strip_prefix("candidates:") {
            if candidates.is_some() {
                return Err(err_at(line, ParseErrorKind::DuplicateHeader("candidates:")));
            }
            let ids = parse_tokens(rest, line)?;
            if ids.is_empty() {
                return Err(err_at(line, ParseErrorKind::EmptyHeader("candidates:")));
            }
            for c in &ids {
                if !candidate_set.insert(c.clone()) {
                    return Err(err_at(line, ParseErrorKind::DuplicateCandidate(c.clone())));
                }
            }
            candidates = Some(ids);
            continue;
        }

        if candidates.is_none() {
            return Err(err_at(line, ParseErrorKind::ExpectedCandidatesFirst));
        }

        if let Some(rest) = content.strip_prefix("k:") {
            if k.is_some() {
                return Err(err_at(line, ParseErrorKind::DuplicateHeader("k:")));
            }
            if !ballots.is_empty() {
                return Err(err_at(line, ParseErrorKind::HeaderAfterBallots("k:")));
            }
            let tok = rest.trim();
            k = Some(
                tok.parse::<usize>()
                    .map_err(|_| err_at(line, ParseErrorKind::BadInteger(tok.to_string())))?,
            );
            continue;
        }

        if let Some(rest) = content.strip_prefix("tiebreak:") {
            if tiebreak.is_some() {
                return Err(err_at(line, ParseErrorKind::DuplicateHeader("tiebreak:")));
            }
            if !ballots.is_empty() {
                return Err(err_at(line, ParseErrorKind::HeaderAfterBallots("tiebreak:")));
            }
            let ids = parse_tokens(rest, line)?;
            let as_set: BTreeSet<&CandidateId> = ids.iter().collect();
            if as_set.len() != ids.len()
                || as_set.len() != candidate_set.len()
                || !ids.iter().all(|c| candidate_set.contains(c))
            {
                return Err(err_at(line, ParseErrorKind::TiebreakNotPermutation));
            }
            tiebreak =
                Some(PriorityOrder::new(ids).expect("duplicates excluded by the check above"));
            continue;
        }

        // Remaining forms: `ballot: ...` or `<int> * ballot: ...`.
        let (multiplicity, ballot_part) = match content.split_once('*') {
            Some((count, rest)) => {
                let count = count.trim();
                let n = count
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| {
                        err_at(line, ParseErrorKind::BadMultiplicity(count.to_string()))
                    })?;
                (n, rest.trim())
            }
            None => (1, content),
        };
        let Some(rest) = ballot_part.strip_prefix("ballot:") else {
            return Err(err_at(
                line,
                ParseErrorKind::UnrecognizedLine(content.to_string()),
            ));
        };
        let ids = parse_tokens(rest, line)?;
        let mut seen = BTreeSet::new();
        for c in &ids {
            if !candidate_set.contains(c) {
                return Err(err_at(line, ParseErrorKind::UnknownCandidate(c.clone())));
            }
            if !seen.insert(c.clone()) {
                return Err(err_at(line, ParseErrorKind::DuplicateInBallot(c.clone())));
            }
        }
        let ballot = ApprovalBallot::new(ids);
        for _ in 0..multiplicity {
            ballots.push(ballot.clone());
        }
    }

    let candidates = candidates.ok_or_else(|| err_eof(ParseErrorKind::MissingHeader("candidates:")))?;
    let k = k.ok_or_else(|| err_eof(ParseErrorKind::MissingHeader("k:")))?;
    let tiebreak = tiebreak.ok_or_else(|| err_eof(ParseErrorKind::MissingHeader("tiebreak:")))?;
    Ok(ElectionInstance::new(
        ApprovalProfile::new(candidates, ballots),
        k,
        tiebreak,
    ))
}

/// Renders the canonical election file: candidates, k, tiebreak, then
/// ballots in order with runs of consecutive identical ballots collapsed
/// to `N * ballot:`. Ballot members are listed in candidate-list order.
/// Inverse of [`parse_election`].
pub fn render_election(e: &ElectionInstance) -> String {
    let mut out = String::new();
    out.push_str("candidates:");
    for c in &e.profile.candidates {
        out.push(' ');
        out.push_str(c.as_str());
    }
    out.push('\n');
    out.push_str(&format!("k: {}\n", e.k));
    out.push_str("tiebreak:");
    for c in e.tiebreak.candidates() {
        out.push(' ');
        out.push_str(c.as_str());
    }
    out.push('\n');

    let mut i = 0;
    while i < e.profile.ballots.len() {
        let ballot = &e.profile.ballots[i];
        let mut run = 1;
        while i + run < e.profile.ballots.len() && e.profile.ballots[i + run] == *ballot {
            run += 1;
        }
        if run > 1 {
            out.push_str(&format!("{run} * ballot:"));
        } else {
            out.push_str("ballot:");
        }
        for c in &e.profile.candidates {
            if ballot.contains(c) {
                out.push(' ');
                out.push_str(c.as_str());
            }
        }
        out.push('\n');
        i += run;
    }
    out
}

/// Parses a graph file: `vertices: N` once and first, then `edge: u v`
/// lines. Self-loops, duplicate edges and out-of-range endpoints are
/// rejected with their line number.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut vertices: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = content_of(raw);
        if content.is_empty() {
            continue;
        }

        if let Some(rest) = content.strip_prefix("vertices:") {
            if vertices.is_some() {
                return Err(err_at(line, ParseErrorKind::DuplicateHeader("vertices:")));
            }
            let tok = rest.trim();
            vertices = Some(
                tok.parse::<usize>()
                    .map_err(|_| err_at(line, ParseErrorKind::BadInteger(tok.to_string())))?,
            );
            continue;
        }

        let Some(n) = vertices else {
            return Err(err_at(line, ParseErrorKind::ExpectedVerticesFirst));
        };

        if let Some(rest) = content.strip_prefix("edge:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let [u, v] = toks.as_slice() else {
                return Err(err_at(
                    line,
                    ParseErrorKind::UnrecognizedLine(content.to_string()),
                ));
            };
            let parse_vertex = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| err_at(line, ParseErrorKind::BadInteger(t.to_string())))
            };
            let (u, v) = (parse_vertex(u)?, parse_vertex(v)?);
            // Validate one edge at a time so errors carry the right line.
            let probe = Graph::new(n, [(u, v)])
                .map_err(|e| err_at(line, ParseErrorKind::InvalidEdge(e.to_string())))?;
            let normalized = probe.edges().next().expect("one edge was inserted");
            if !seen.insert(normalized) {
                return Err(err_at(
                    line,
                    ParseErrorKind::InvalidEdge(format!(
                        "duplicate edge {}-{}",
                        normalized.0, normalized.1
                    )),
                ));
            }
            edges.push(normalized);
            continue;
        }

        return Err(err_at(
            line,
            ParseErrorKind::UnrecognizedLine(content.to_string()),
        ));
    }

    let n = vertices.ok_or_else(|| err_eof(ParseErrorKind::MissingHeader("vertices:")))?;
    Ok(Graph::new(n, edges).expect("edges validated line by line"))
}

/// Renders the canonical graph file; inverse of [`parse_graph`].
pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("vertices: {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("edge: {u} {v}\n"));
    }
    out
}

/// One RAV round in a result document: who was elected and every
/// then-unelected candidate's weighted score, in decreasing priority.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RavRoundDocument {
    pub selected: String,
    pub scores: Vec<(String, String)>,
}

/// The single output record every CLI command emits, serialized either as
/// JSON (field order fixed by this definition) or as `key: value` text
/// via [`ResultDocument::render_text`]. All scores and utilities are
/// exact fractions rendered as `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "command")]
pub enum ResultDocument {
    #[serde(rename = "winners")]
    Winners {
        rule: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        method: Option<String>,
        /// Committee members in decreasing priority.
        winners: Vec<String>,
        score: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        optimal: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none")]
        nodes_explored: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        rounds: Option<Vec<RavRoundDocument>>,
    },
    #[serde(rename = "score")]
    Score {
        rule: String,
        committee: Vec<String>,
        score: String,
    },
    #[serde(rename = "manipulate")]
    Manipulate {
        operation: String,
        rule: String,
        success: bool,
        /// Each entry is one manipulator ballot, tokens in decreasing
        /// priority, the empty ballot rendering as "".
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        achieved_utility: Option<String>,
        search_space: u64,
    },
    #[serde(rename = "reduce")]
    Reduce {
        construction: String,
        vertices: usize,
        edges: usize,
        target: usize,
        threshold: String,
        candidates: usize,
        agents: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        out: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        election: Option<String>,
    },
    #[serde(rename = "verify-reduction")]
    VerifyReduction {
        target: usize,
        threshold: String,
        independent_set_exists: bool,
        pav_reaches_threshold: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<String>>,
        agrees: bool,
    },
    #[serde(rename = "audit")]
    Audit {
        rule: String,
        truth: Vec<String>,
        strategyproof: bool,
        truthful_outcome: Vec<String>,
        truthful_utility: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        deviation: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        outcome: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        utility: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        approves_zero_utility: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none")]
        drops_approved: Option<bool>,
    },
}

/// Committee members as display tokens in decreasing priority.
pub fn committee_tokens(w: &Committee, t: &PriorityOrder) -> Vec<String> {
    w.members_by_priority(t)
        .iter()
        .map(|c| c.as_str().to_string())
        .collect()
}

/// A ballot as one space-joined token string in decreasing priority; the
/// empty ballot becomes the empty string.
pub fn ballot_token_string(b: &ApprovalBallot, t: &PriorityOrder) -> String {
    let mut ids: Vec<CandidateId> = b.iter().cloned().collect();
    t.sort_by_priority(&mut ids);
    ids.iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A RAV trace as document rounds.
pub fn trace_rounds(trace: &RavTrace) -> Vec<RavRoundDocument> {
    trace
        .rounds
        .iter()
        .map(|r| RavRoundDocument {
            selected: r.selected.as_str().to_string(),
            scores: r
                .scores
                .iter()
                .map(|(c, s)| (c.as_str().to_string(), s.fraction_string()))
                .collect(),
        })
        .collect()
}

impl ResultDocument {
    /// Deterministic JSON with a trailing newline.
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable by construction");
        s.push('\n');
        s
    }

    /// The same fields as stable `key: value` lines.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| out.push_str(&format!("{k}: {v}\n"));
        match self {
            ResultDocument::Winners {
                rule,
                method,
                winners,
                score,
                optimal,
                nodes_explored,
                rounds,
            } => {
                line("command", "winners");
                line("rule", rule);
                if let Some(m) = method {
                    line("method", m);
                }
                line("winners", &winners.join(" "));
                line("score", score);
                if let Some(o) = optimal {
                    line("optimal", if *o { "true" } else { "false" });
                }
                if let Some(n) = nodes_explored {
                    line("nodes_explored", &n.to_string());
                }
                if let Some(rounds) = rounds {
                    for (i, r) in rounds.iter().enumerate() {
                        let scores = r
                            .scores
                            .iter()
                            .map(|(c, s)| format!("{c}={s}"))
                            .collect::<Vec<_>>()
                            .join(" ");
                        line(
                            &format!("round {}", i + 1),
                            &format!("elected {}; scores {}", r.selected, scores),
                        );
                    }
                }
            }
            ResultDocument::Score {
                rule,
                committee,
                score,
            } => {
                line("command", "score");
                line("rule", rule);
                line("committee", &committee.join(" "));
                line("score", score);
            }
            ResultDocument::Manipulate {
                operation,
                rule,
                success,
                witness,
                achieved_utility,
                search_space,
            } => {
                line("command", "manipulate");
                line("operation", operation);
                line("rule", rule);
                line("success", if *success { "true" } else { "false" });
                if let Some(ballots) = witness {
                    for (i, b) in ballots.iter().enumerate() {
                        line(&format!("witness {}", i + 1), b);
                    }
                }
                if let Some(u) = achieved_utility {
                    line("achieved_utility", u);
                }
                line("search_space", &search_space.to_string());
            }
            ResultDocument::Reduce {
                construction,
                vertices,
                edges,
                target,
                threshold,
                candidates,
                agents,
                out: out_path,
                election,
            } => {
                // When the election file is inlined, the summary lines
                // become comments so the whole output parses as an
                // election file.
                let prefix = if election.is_some() { "# " } else { "" };
                let mut line = |k: &str, v: &str| out.push_str(&format!("{prefix}{k}: {v}\n"));
                line("command", "reduce");
                line("construction", construction);
                line("vertices", &vertices.to_string());
                line("edges", &edges.to_string());
                line("target", &target.to_string());
                line("threshold", threshold);
                line("candidates", &candidates.to_string());
                line("agents", &agents.to_string());
                if let Some(p) = out_path {
                    line("out", p);
                }
                if let Some(text) = election {
                    out.push_str(text);
                }
            }
            ResultDocument::VerifyReduction {
                target,
                threshold,
                independent_set_exists,
                pav_reaches_threshold,
                witness,
                agrees,
            } => {
                line("command", "verify-reduction");
                line("target", &target.to_string());
                line("threshold", threshold);
                line(
                    "independent_set_exists",
                    if *independent_set_exists { "true" } else { "false" },
                );
                line(
                    "pav_reaches_threshold",
                    if *pav_reaches_threshold { "true" } else { "false" },
                );
                if let Some(w) = witness {
                    line("witness", &w.join(" "));
                }
                line("agrees", if *agrees { "true" } else { "false" });
            }
            ResultDocument::Audit {
                rule,
                truth,
                strategyproof,
                truthful_outcome,
                truthful_utility,
                deviation,
                outcome,
                utility,
                approves_zero_utility,
                drops_approved,
            } => {
                line("command", "audit");
                line("rule", rule);
                line("truth", &truth.join(" "));
                line("strategyproof", if *strategyproof { "true" } else { "false" });
                line("truthful_outcome", &truthful_outcome.join(" "));
                line("truthful_utility", truthful_utility);
                if let Some(d) = deviation {
                    line("deviation", d);
                }
                if let Some(o) = outcome {
                    line("outcome", &o.join(" "));
                }
                if let Some(u) = utility {
                    line("utility", u);
                }
                if let Some(b) = approves_zero_utility {
                    line("approves_zero_utility", if *b { "true" } else { "false" });
                }
                if let Some(b) = drops_approved {
                    line("drops_approved", if *b { "true" } else { "false" });
                }
            }
        }
        out
    }
}
