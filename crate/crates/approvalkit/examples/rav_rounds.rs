//! Inside RAV's rounds: how ballot reweighting decides each seat, and
//! how one agent's ballot swings the whole committee.
//!
//! ```text
//! cargo run --example rav_rounds
//! ```

use approvalkit::model::ApprovalBallot;
use approvalkit::model::CandidateId;
use approvalkit::rules::rav_winners;

fn ballot(tokens: &[&str]) -> ApprovalBallot {
    ApprovalBallot::new(tokens.iter().map(|t| CandidateId::new(*t).unwrap()))
}

fn main() {
    // Eight fixed ballots over {a,b,c,d}, two seats. A ninth agent will
    // be added twice with different ballots.
    let fixed = parse_fixture();

    for (label, extra) in [("{a}", ballot(&["a"])), ("{a,d}", ballot(&["a", "d"]))] {
        let e = fixed.with_extra_ballots([&extra]);
        let (w, trace) = rav_winners(&e).unwrap();
        println!("ninth ballot {label}:");
        for (i, round) in trace.rounds.iter().enumerate() {
            let scores = round
                .scores
                .iter()
                .map(|(c, s)| format!("{c}={}", s.fraction_string()))
                .collect::<Vec<_>>()
                .join("  ");
            println!("  round {}: {scores}", i + 1);
            println!("  round {} elects {}", i + 1, round.selected);
        }
        println!("  committee: {w}\n");
    }

    // With {a}, agent nine's lone point is too little: b takes the first
    // seat at weight 5, and everyone who approved b is then halved,
    // letting c through. With {a,d}, the same agent pushes d to the
    // first seat; d's election halves exactly the ballots that carried
    // b and c, and a wins the second seat.
    let with_a = fixed.with_extra_ballots([&ballot(&["a"])]);
    let with_ad = fixed.with_extra_ballots([&ballot(&["a", "d"])]);
    assert_eq!(rav_winners(&with_a).unwrap().0.to_string(), "{b,c}");
    assert_eq!(rav_winners(&with_ad).unwrap().0.to_string(), "{a,d}");
    println!("one extra approval (d) flips the outcome from {{b,c}} to {{a,d}}");
}

fn parse_fixture() -> approvalkit::model::ElectionInstance {
    approvalkit::io::parse_election(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/rav_k2.elec"
    )))
    .expect("fixture parses")
}
