//! Winner manipulation: can one strategic agent force a chosen candidate
//! into the committee? Exhaustive search over that agent's possible
//! ballots, with the found ballot replayed and verified.
//!
//! ```text
//! cargo run --example winner_manipulation
//! ```

use approvalkit::manipulation::{
    solve_wm, winning_committee, ManipulationGoal, ManipulationQuery,
};
use approvalkit::model::{ApprovalBallot, CandidateId};
use approvalkit::rules::Rule;

fn main() {
    // Eight fixed ballots over {a,b,c,d}, two RAV seats. Our agent wants
    // candidate `a` seated.
    let e = approvalkit::io::parse_election(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/rav_k2.elec"
    )))
    .expect("fixture parses");
    let a = CandidateId::new("a").unwrap();

    // Sincere attempt: just approve {a}.
    let sincere = ApprovalBallot::new([a.clone()]);
    let honest = winning_committee(Rule::Rav, &e.with_extra_ballots([&sincere])).unwrap();
    println!("approving only {{a}} elects {honest} - no seat for a");
    assert_eq!(honest.to_string(), "{b,c}");

    // Ask the solver: is there any single ballot that works?
    let q = ManipulationQuery {
        rule: Rule::Rav,
        fixed: e.profile.clone(),
        k: e.k,
        manipulators: 1,
        goal: ManipulationGoal::Include(a.clone()),
        tiebreak: e.tiebreak.clone(),
    };
    let r = solve_wm(&q).unwrap();
    assert!(r.success);
    let witness = &r.witness.as_ref().unwrap()[0];
    println!(
        "solver: yes - cast {witness} (checked {} candidate ballots)",
        r.search_space
    );

    // The trick is approving d as well: d soaks up the first seat and
    // downweights every b/c supporter, clearing the second seat for a.
    let outcome = winning_committee(Rule::Rav, &e.with_extra_ballots([witness])).unwrap();
    println!("casting {witness} elects {outcome}");
    assert_eq!(witness.to_string(), "{a,d}");
    assert!(outcome.contains(&a));

    // No smaller or equally-small earlier ballot works: the solver scans
    // ballots by size, then by tie-break preference, so the witness it
    // returns is canonical. Verify by sweeping everything before it.
    let mut earlier_failures = 0;
    for toks in [&[][..], &["a"][..], &["b"][..], &["c"][..], &["d"][..], &["a", "b"][..], &["a", "c"][..]] {
        let b = ApprovalBallot::new(toks.iter().map(|t| CandidateId::new(*t).unwrap()));
        let w = winning_committee(Rule::Rav, &e.with_extra_ballots([&b])).unwrap();
        assert!(!w.contains(&a), "ballot {b} should not elect a");
        earlier_failures += 1;
    }
    println!("all {earlier_failures} earlier ballots in scan order fail; {{a,d}} is the first success");
}
