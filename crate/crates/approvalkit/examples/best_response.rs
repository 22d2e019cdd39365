//! Best response: given additive utilities over candidates, what is the
//! best ballot an agent can cast — and is honesty ever suboptimal?
//! Here sincere voting earns utility 2 while a pruned ballot earns 3.
//!
//! ```text
//! cargo run --example best_response
//! ```

use approvalkit::manipulation::{
    best_response, winning_committee, ManipulationGoal, ManipulationQuery, UtilitySpec,
};
use approvalkit::model::{ApprovalBallot, CandidateId};
use approvalkit::rules::Rule;

fn main() {
    // Nine fixed ballots over {a,b,c,d}, three RAV seats. Our agent
    // values a, b and d at 1 each and c at 0.
    let e = approvalkit::io::parse_election(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/rav_k3.elec"
    )))
    .expect("fixture parses");
    let cand = |t: &str| CandidateId::new(t).unwrap();
    let liked = [cand("a"), cand("b"), cand("d")];
    let spec = UtilitySpec::dichotomous_on(liked.iter().cloned());

    // Sincere ballot: approve exactly the liked set.
    let sincere = ApprovalBallot::new(liked.iter().cloned());
    let honest = winning_committee(Rule::Rav, &e.with_extra_ballots([&sincere])).unwrap();
    println!(
        "sincere {sincere} elects {honest}: utility {}",
        spec.utility_of(&honest).fraction_string()
    );
    assert_eq!(honest.to_string(), "{a,b,c}");
    assert_eq!(spec.utility_of(&honest).fraction_string(), "2/1");

    // The solver scans all 16 possible ballots and reports the best.
    let q = ManipulationQuery {
        rule: Rule::Rav,
        fixed: e.profile.clone(),
        k: e.k,
        manipulators: 1,
        goal: ManipulationGoal::Maximize(spec.clone()),
        tiebreak: e.tiebreak.clone(),
    };
    let r = best_response(&q).unwrap();
    let best = &r.witness.as_ref().unwrap()[0];
    let achieved = r.achieved_utility.as_ref().unwrap();
    println!(
        "best response {best}: utility {} ({} ballots scanned)",
        achieved.fraction_string(),
        r.search_space
    );
    assert_eq!(best.to_string(), "{a,d}");
    assert_eq!(achieved.fraction_string(), "3/1");

    // Withholding approval from b is free-riding: b wins anyway on the
    // fixed ballots' strength, and the saved ballot weight keeps our
    // agent influential long enough to pull d into the last seat.
    let outcome = winning_committee(Rule::Rav, &e.with_extra_ballots([best])).unwrap();
    println!("casting {best} elects {outcome}: all three liked candidates seated");
    assert_eq!(outcome.to_string(), "{a,b,d}");
}
