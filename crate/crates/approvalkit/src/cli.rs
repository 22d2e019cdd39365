//! The `approvalkit` command line.
//!
//! Every subcommand reads plain-text input files ([`crate::io`]), runs
//! one library call, and prints one [`ResultDocument`] to stdout —
//! `key: value` text by default, JSON with `--json`. Identical inputs
//! produce byte-identical output.
//!
//! ```text
//! approvalkit winners  --rule av|sav|pav|rav [--method exact|bb|greedy] --input FILE
//! approvalkit score    --rule RULE --committee c1,c2,... --input FILE
//! approvalkit manipulate wm            --rule RULE --candidate P --manipulators J --input FILE
//! approvalkit manipulate wsm           --rule RULE --set c1,c2,... --manipulators J --input FILE
//! approvalkit manipulate best-response --rule RULE --utilities c=v,... --manipulators J --input FILE
//! approvalkit reduce is2pav --graph FILE --target T [--out FILE]
//! approvalkit verify reduction --graph FILE --target T
//! approvalkit audit    --rule RULE --truth c1,c2,... --input FILE
//! ```
//!
//! Exit codes: `0` result computed (including a "no profitable deviation"
//! audit); `1` input error (bad flags, unreadable files, grammar or
//! validation failures); `2` the manipulation goal is unreachable (`wm`
//! and `wsm` only — the document is still printed, with
//! `success: false`); `3` a resource guard refused the search.
//!
//! The `APPROVALKIT_GUARD` environment variable overrides both guards —
//! the committee-enumeration cap used by `winners --rule pav --method
//! exact` and the ballot-tuple cap used by the manipulation searches —
//! with one unsigned integer.

use crate::io::{
    ballot_token_string, committee_tokens, parse_election, parse_graph, render_election,
    trace_rounds, ResultDocument,
};
use crate::manipulation::{
    audit_strategyproofness, best_response_with, solve_wm_with, solve_wsm_with, winning_committee,
    ManipulationError, ManipulationGoal, ManipulationQuery, ManipulationResult, UtilitySpec,
    DEFAULT_TUPLE_GUARD,
};
use crate::model::{validate_instance, CandidateId, Committee, ElectionInstance};
use crate::pav::{
    pav_branch_and_bound, pav_exhaustive_with, pav_greedy, PavError, SolveReport,
    DEFAULT_ENUMERATION_GUARD,
};
use crate::reduction::{is_to_pav, verify_reduction_report, Graph, ReductionError};
use crate::rules::{av_score, av_winners, pav_score, rav_winners, sav_score, sav_winners, Rule};
use crate::score::Score;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Result computed and printed.
pub const EXIT_OK: i32 = 0;
/// Bad invocation or bad input data.
pub const EXIT_INPUT_ERROR: i32 = 1;
/// The manipulation goal is unreachable.
pub const EXIT_UNREACHABLE: i32 = 2;
/// A resource guard refused the search.
pub const EXIT_GUARD: i32 = 3;

/// Environment variable overriding both search guards.
pub const GUARD_ENV_VAR: &str = "APPROVALKIT_GUARD";

#[derive(Parser)]
#[command(
    name = "approvalkit",
    version,
    about = "Exact solvers for approval-based committee elections",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the winning committee under a voting rule
    Winners(WinnersArgs),
    /// Score a given committee under a voting rule
    Score(ScoreArgs),
    /// Search for strategic ballots reaching a goal
    #[command(subcommand)]
    Manipulate(ManipulateCommand),
    /// Construct election instances from graphs
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Check a construction against exact oracles
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Audit one agent for profitable unilateral deviations
    Audit(AuditArgs),
}

#[derive(Args)]
struct WinnersArgs {
    /// av | sav | pav | rav
    #[arg(long)]
    rule: String,
    /// Solver for pav: exact | bb | greedy (ignored by other rules)
    #[arg(long, default_value = "bb")]
    method: String,
    /// Election file
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScoreArgs {
    /// av | sav | pav | rav (rav scores like pav)
    #[arg(long)]
    rule: String,
    /// Comma-separated committee members
    #[arg(long)]
    committee: String,
    /// Election file
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ManipulateCommand {
    /// Get one candidate into the winning committee
    Wm(WmArgs),
    /// Make the winning committee exactly a given set
    Wsm(WsmArgs),
    /// Maximize one voter bloc's additive utility
    BestResponse(BestResponseArgs),
}

#[derive(Args)]
struct WmArgs {
    /// av | sav | pav | rav
    #[arg(long)]
    rule: String,
    /// The candidate to push into the committee
    #[arg(long)]
    candidate: String,
    /// Number of ballots the manipulators control
    #[arg(long)]
    manipulators: usize,
    /// Election file holding the fixed ballots, k and tiebreak
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WsmArgs {
    /// av | sav | pav | rav
    #[arg(long)]
    rule: String,
    /// Comma-separated target committee (size must equal k)
    #[arg(long)]
    set: String,
    /// Number of ballots the manipulators control
    #[arg(long)]
    manipulators: usize,
    /// Election file holding the fixed ballots, k and tiebreak
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BestResponseArgs {
    /// av | sav | pav | rav
    #[arg(long)]
    rule: String,
    /// Comma-separated candidate=value pairs, values as integers or fractions
    #[arg(long)]
    utilities: String,
    /// Number of ballots the manipulators control
    #[arg(long)]
    manipulators: usize,
    /// Election file holding the fixed ballots, k and tiebreak
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Encode "has G an independent set of size t?" as a PAV threshold question
    Is2pav(ReduceArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Independent-set size t
    #[arg(long)]
    target: usize,
    /// Write the election file here instead of inlining it
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Decide both sides of the construction's iff and compare them
    Reduction(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file
    #[arg(long)]
    graph: PathBuf,
    /// Independent-set size t
    #[arg(long)]
    target: usize,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AuditArgs {
    /// av | sav | pav | rav
    #[arg(long)]
    rule: String,
    /// Comma-separated candidates the audited agent truly approves
    #[arg(long)]
    truth: String,
    /// Election file holding the other agents' ballots, k and tiebreak
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of key: value text
    #[arg(long)]
    json: bool,
}

/// Runs the command line against explicit argv and output streams,
/// returning the process exit code. `main` is a thin wrapper over this;
/// tests call it in-process.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(Output { doc, json, code }) => {
            let rendered = if json {
                doc.render_json()
            } else {
                doc.render_text()
            };
            let _ = out.write_all(rendered.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Output {
    doc: ResultDocument,
    json: bool,
    code: i32,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT_ERROR,
            message: message.into(),
        }
    }
}

fn pav_failure(e: PavError) -> Failure {
    let code = match &e {
        PavError::EnumerationGuardExceeded { .. } => EXIT_GUARD,
        PavError::Instance(_) => EXIT_INPUT_ERROR,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn manipulation_failure(e: ManipulationError) -> Failure {
    let code = match &e {
        ManipulationError::TupleGuardExceeded { .. } => EXIT_GUARD,
        ManipulationError::Pav(PavError::EnumerationGuardExceeded { .. }) => EXIT_GUARD,
        _ => EXIT_INPUT_ERROR,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn reduction_failure(e: ReductionError) -> Failure {
    let code = match &e {
        ReductionError::TooManyVertices { .. } => EXIT_GUARD,
        ReductionError::Pav(PavError::EnumerationGuardExceeded { .. }) => EXIT_GUARD,
        _ => EXIT_INPUT_ERROR,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn dispatch(cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Winners(a) => winners(a),
        Command::Score(a) => score(a),
        Command::Manipulate(ManipulateCommand::Wm(a)) => manipulate_wm(a),
        Command::Manipulate(ManipulateCommand::Wsm(a)) => manipulate_wsm(a),
        Command::Manipulate(ManipulateCommand::BestResponse(a)) => manipulate_best_response(a),
        Command::Reduce(ReduceCommand::Is2pav(a)) => reduce_is2pav(a),
        Command::Verify(VerifyCommand::Reduction(a)) => verify_reduction_cmd(a),
        Command::Audit(a) => audit(a),
    }
}

fn parse_rule(token: &str) -> Result<Rule, Failure> {
    Rule::from_str(token).map_err(|e| Failure::input(e.to_string()))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

/// Parses and fully validates an election file.
fn load_election(path: &Path) -> Result<ElectionInstance, Failure> {
    let text = read_file(path)?;
    let e = parse_election(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let violations = validate_instance(&e);
    if !violations.is_empty() {
        let joined = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Failure::input(format!("{}: {joined}", path.display())));
    }
    Ok(e)
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read_file(path)?;
    parse_graph(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_candidate_list(arg: &str, flag: &str) -> Result<Vec<CandidateId>, Failure> {
    let ids: Vec<CandidateId> = arg
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| CandidateId::new(t).map_err(|e| Failure::input(format!("{flag}: {e}"))))
        .collect::<Result<_, _>>()?;
    if ids.is_empty() {
        return Err(Failure::input(format!("{flag} names no candidates")));
    }
    Ok(ids)
}

/// One guard value for both searches: `APPROVALKIT_GUARD` if set, else
/// the given default.
fn configured_guard(default: u64) -> Result<u64, Failure> {
    match std::env::var(GUARD_ENV_VAR) {
        Ok(v) => v.trim().parse::<u64>().map_err(|_| {
            Failure::input(format!(
                "{GUARD_ENV_VAR} must be an unsigned integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(default),
    }
}

fn winners(a: WinnersArgs) -> Result<Output, Failure> {
    let rule = parse_rule(&a.rule)?;
    if !matches!(a.method.as_str(), "exact" | "bb" | "greedy") {
        return Err(Failure::input(format!(
            "unknown method {:?} (expected exact, bb or greedy)",
            a.method
        )));
    }
    let e = load_election(&a.input)?;

    let doc = match rule {
        Rule::Av => {
            let w = av_winners(&e).map_err(|e| Failure::input(e.to_string()))?;
            let s = av_score(&e.profile, &w).map_err(|e| Failure::input(e.to_string()))?;
            winners_doc(rule, &e, &w, &s, None, None, None)
        }
        Rule::Sav => {
            let w = sav_winners(&e).map_err(|e| Failure::input(e.to_string()))?;
            let s = sav_score(&e.profile, &w).map_err(|e| Failure::input(e.to_string()))?;
            winners_doc(rule, &e, &w, &s, None, None, None)
        }
        Rule::Rav => {
            let (w, trace) = rav_winners(&e).map_err(|e| Failure::input(e.to_string()))?;
            // The sum of the elected candidates' round scores is exactly
            // the committee's proportional score; report that total.
            let s = pav_score(&e.profile, &w).map_err(|e| Failure::input(e.to_string()))?;
            winners_doc(rule, &e, &w, &s, None, Some(trace_rounds(&trace)), None)
        }
        Rule::Pav => {
            let report: SolveReport = match a.method.as_str() {
                "exact" => {
                    let guard = configured_guard(DEFAULT_ENUMERATION_GUARD)?;
                    pav_exhaustive_with(&e, guard).map_err(pav_failure)?
                }
                "greedy" => pav_greedy(&e).map_err(pav_failure)?,
                _ => pav_branch_and_bound(&e).map_err(pav_failure)?,
            };
            winners_doc(
                rule,
                &e,
                &report.winner,
                &report.score,
                Some(report.method.to_string()),
                None,
                Some((report.optimal, report.nodes_explored)),
            )
        }
    };
    Ok(Output {
        doc,
        json: a.json,
        code: EXIT_OK,
    })
}

fn winners_doc(
    rule: Rule,
    e: &ElectionInstance,
    w: &Committee,
    s: &Score,
    method: Option<String>,
    rounds: Option<Vec<crate::io::RavRoundDocument>>,
    solve: Option<(bool, u64)>,
) -> ResultDocument {
    ResultDocument::Winners {
        rule: rule.name().to_string(),
        method,
        winners: committee_tokens(w, &e.tiebreak),
        score: s.fraction_string(),
        optimal: solve.map(|(o, _)| o),
        nodes_explored: solve.map(|(_, n)| n),
        rounds,
    }
}

fn score(a: ScoreArgs) -> Result<Output, Failure> {
    let rule = parse_rule(&a.rule)?;
    // Scoring needs no committee-size bound, so k is not validated here.
    let text = read_file(&a.input)?;
    let e = parse_election(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", a.input.display())))?;
    let w = Committee::new(parse_candidate_list(&a.committee, "--committee")?);
    let s = match rule {
        Rule::Av => av_score(&e.profile, &w),
        Rule::Sav => sav_score(&e.profile, &w),
        Rule::Pav | Rule::Rav => pav_score(&e.profile, &w),
    }
    .map_err(|e| Failure::input(e.to_string()))?;
    Ok(Output {
        doc: ResultDocument::Score {
            rule: rule.name().to_string(),
            committee: committee_tokens(&w, &e.tiebreak),
            score: s.fraction_string(),
        },
        json: a.json,
        code: EXIT_OK,
    })
}

fn manipulation_query(
    rule: Rule,
    input: &Path,
    manipulators: usize,
    goal: ManipulationGoal,
) -> Result<ManipulationQuery, Failure> {
    let e = load_election(input)?;
    Ok(ManipulationQuery {
        rule,
        fixed: e.profile,
        k: e.k,
        manipulators,
        goal,
        tiebreak: e.tiebreak,
    })
}

fn manipulate_doc(
    operation: &str,
    q: &ManipulationQuery,
    res: &ManipulationResult,
) -> ResultDocument {
    ResultDocument::Manipulate {
        operation: operation.to_string(),
        rule: q.rule.name().to_string(),
        success: res.success,
        witness: res.witness.as_ref().map(|ballots| {
            ballots
                .iter()
                .map(|b| ballot_token_string(b, &q.tiebreak))
                .collect()
        }),
        achieved_utility: res.achieved_utility.as_ref().map(Score::fraction_string),
        search_space: res.search_space,
    }
}

fn manipulate_wm(a: WmArgs) -> Result<Output, Failure> {
    let rule = parse_rule(&a.rule)?;
    let p = CandidateId::new(&a.candidate)
        .map_err(|e| Failure::input(format!("--candidate: {e}")))?;
    let q = manipulation_query(rule, &a.input, a.manipulators, ManipulationGoal::Include(p))?;
    let guard = configured_guard(DEFAULT_TUPLE_GUARD)?;
    let res = solve_wm_with(&q, guard).map_err(manipulation_failure)?;
    Ok(Output {
        doc: manipulate_doc("wm", &q, &res),
        json: a.json,
        code: if res.success { EXIT_OK } else { EXIT_UNREACHABLE },
    })
}

fn manipulate_wsm(a: WsmArgs) -> Result<Output, Failure> {
    let rule = parse_rule(&a.rule)?;
    let target = Committee::new(parse_candidate_list(&a.set, "--set")?);
    let q = manipulation_query(
        rule,
        &a.input,
        a.manipulators,
        ManipulationGoal::ExactSet(target),
    )?;
    let guard = configured_guard(DEFAULT_TUPLE_GUARD)?;
    let res = solve_wsm_with(&q, guard).map_err(manipulation_failure)?;
    Ok(Output {
        doc: manipulate_doc("wsm", &q, &res),
        json: a.json,
        code: if res.success { EXIT_OK } else { EXIT_UNREACHABLE },
    })
}

fn parse_utilities(arg: &str) -> Result<UtilitySpec, Failure> {
    let mut utilities: BTreeMap<CandidateId, Score> = BTreeMap::new();
    for pair in arg.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let Some((name, value)) = pair.split_once('=') else {
            return Err(Failure::input(format!(
                "--utilities: expected candidate=value, got {pair:?}"
            )));
        };
        let c = CandidateId::new(name.trim())
            .map_err(|e| Failure::input(format!("--utilities: {e}")))?;
        let v = value
            .trim()
            .parse::<Score>()
            .map_err(|e| Failure::input(format!("--utilities: {e}")))?;
        if utilities.insert(c, v).is_some() {
            return Err(Failure::input(format!(
                "--utilities: candidate {name} listed twice"
            )));
        }
    }
    if utilities.is_empty() {
        return Err(Failure::input("--utilities lists no candidates"));
    }
    UtilitySpec::new(utilities).map_err(manipulation_failure)
}

fn manipulate_best_response(a: BestResponseArgs) -> Result<Output, Failure> {
    let rule = parse_rule(&a.rule)?;
    let spec = parse_utilities(&a.utilities)?;
    let q = manipulation_query(
        rule,
        &a.input,
        a.manipulators,
        ManipulationGoal::Maximize(spec),
    )?;
    let guard = configured_guard(DEFAULT_TUPLE_GUARD)?;
    let res = best_response_with(&q, guard).map_err(manipulation_failure)?;
    Ok(Output {
        doc: manipulate_doc("best-response", &q, &res),
        json: a.json,
        code: EXIT_OK,
    })
}

fn reduce_is2pav(a: ReduceArgs) -> Result<Output, Failure> {
    let g = load_graph(&a.graph)?;
    let ri = is_to_pav(&g, a.target).map_err(reduction_failure)?;
    let text = render_election(&ri.election);
    let (out_field, election_field) = match &a.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
            (Some(path.display().to_string()), None)
        }
        None => (None, Some(text)),
    };
    Ok(Output {
        doc: ResultDocument::Reduce {
            construction: "is2pav".to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            target: a.target,
            threshold: ri.threshold.fraction_string(),
            candidates: ri.election.profile.num_candidates(),
            agents: ri.election.profile.num_ballots(),
            out: out_field,
            election: election_field,
        },
        json: a.json,
        code: EXIT_OK,
    })
}

fn verify_reduction_cmd(a: VerifyArgs) -> Result<Output, Failure> {
    let g = load_graph(&a.graph)?;
    let report = verify_reduction_report(&g, a.target).map_err(reduction_failure)?;
    // Rebuild the instance only to order witness tokens by its tiebreak.
    let ri = is_to_pav(&g, a.target).map_err(reduction_failure)?;
    Ok(Output {
        doc: ResultDocument::VerifyReduction {
            target: a.target,
            threshold: report.threshold.fraction_string(),
            independent_set_exists: report.independent_set_exists,
            pav_reaches_threshold: report.pav_reaches_threshold,
            witness: report
                .witness
                .as_ref()
                .map(|w| committee_tokens(w, &ri.election.tiebreak)),
            agrees: report.agrees,
        },
        json: a.json,
        code: EXIT_OK,
    })
}

fn audit(a: AuditArgs) -> Result<Output, Failure> {
    let rule = parse_rule(&a.rule)?;
    let e = load_election(&a.input)?;
    let mut truth_ids = parse_candidate_list(&a.truth, "--truth")?;
    e.tiebreak.sort_by_priority(&mut truth_ids);
    let spec = UtilitySpec::dichotomous_on(truth_ids.iter().cloned());
    let truth_tokens: Vec<String> = truth_ids.iter().map(|c| c.as_str().to_string()).collect();

    let report = audit_strategyproofness(rule, &e.profile, e.k, &e.tiebreak, &spec)
        .map_err(manipulation_failure)?;
    let doc = match report {
        Some(dev) => ResultDocument::Audit {
            rule: rule.name().to_string(),
            truth: truth_tokens,
            strategyproof: false,
            truthful_outcome: committee_tokens(&dev.truthful_outcome, &e.tiebreak),
            truthful_utility: dev.truthful_utility.fraction_string(),
            deviation: Some(ballot_token_string(&dev.deviation, &e.tiebreak)),
            outcome: Some(committee_tokens(&dev.outcome, &e.tiebreak)),
            utility: Some(dev.utility.fraction_string()),
            approves_zero_utility: Some(dev.approves_zero_utility),
            drops_approved: Some(dev.drops_approved),
        },
        None => {
            let truthful_ballot = crate::model::ApprovalBallot::new(truth_ids.iter().cloned());
            let full = e.with_extra_ballots(std::iter::once(&truthful_ballot));
            let w = winning_committee(rule, &full).map_err(manipulation_failure)?;
            ResultDocument::Audit {
                rule: rule.name().to_string(),
                truth: truth_tokens,
                strategyproof: true,
                truthful_outcome: committee_tokens(&w, &e.tiebreak),
                truthful_utility: spec.utility_of(&w).fraction_string(),
                deviation: None,
                outcome: None,
                utility: None,
                approves_zero_utility: None,
                drops_approved: None,
            }
        }
    };
    Ok(Output {
        doc,
        json: a.json,
        code: EXIT_OK,
    })
}
