//! Winning-set manipulation: two colluders steer SAV to an exact target
//! committee — and provably cannot do it with identical ballots, so the
//! search over unordered ballot tuples is doing real work.
//!
//! ```text
//! cargo run --example winning_set_manipulation
//! ```

use approvalkit::manipulation::{solve_wsm, ManipulationGoal, ManipulationQuery};
use approvalkit::model::Committee;
use approvalkit::rules::{sav_winners, Rule};

fn main() {
    // Seven candidates, three seats. One agent approves {a,b}; three
    // agents approve {d,e,f,g}. Target committee: {a,b,c}.
    let e = approvalkit::io::parse_election(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/thm5_wsm.elec"
    )))
    .expect("fixture parses");
    let target = Committee::new(
        ["a", "b", "c"]
            .iter()
            .map(|t| approvalkit::model::CandidateId::new(*t).unwrap()),
    );

    // Without help, the {d,e,f,g} bloc sweeps the committee.
    let w = sav_winners(&e).unwrap();
    println!("no manipulators: {w}");
    assert_eq!(w.to_string(), "{d,e,f}");

    let q = ManipulationQuery {
        rule: Rule::Sav,
        fixed: e.profile.clone(),
        k: e.k,
        manipulators: 2,
        goal: ManipulationGoal::ExactSet(target.clone()),
        tiebreak: e.tiebreak.clone(),
    };
    let r = solve_wsm(&q).unwrap();
    assert!(r.success);
    let witness = r.witness.as_ref().unwrap();
    println!(
        "two colluders succeed with ballots {} and {} ({} tuples searched)",
        witness[0], witness[1], r.search_space
    );
    assert_eq!(witness[0].to_string(), "{c}");
    assert_eq!(witness[1].to_string(), "{a,b}");

    // Replay the witness through the rule.
    let w = sav_winners(&e.with_extra_ballots(witness.iter())).unwrap();
    println!("replayed outcome: {w}");
    assert_eq!(w, target);

    // The split matters: SAV divides each ballot's point mass over its
    // approved set, so one colluder must bullet-vote `c` at full weight
    // while the other tops up a and b. Sweeping every ballot cast by
    // BOTH colluders shows no identical pair ever works.
    let mut tried = 0;
    for mask in 0u32..(1 << 7) {
        let b = approvalkit::model::ApprovalBallot::new(
            (0..7)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| e.tiebreak.candidates()[i].clone()),
        );
        if b.is_empty() {
            continue; // SAV rejects empty ballots
        }
        let w = sav_winners(&e.with_extra_ballots([&b, &b])).unwrap();
        assert_ne!(w, target, "identical pair {b} should not reach the target");
        tried += 1;
    }
    println!("all {tried} identical-ballot pairs fail; asymmetric collusion is required");
}
