//! Strategyproofness audit: for an agent with dichotomous preferences,
//! is any insincere ballot strictly better than the sincere one? AV
//! passes on this profile; SAV and RAV both fail, and the failing
//! deviation drops a sincerely approved candidate.
//!
//! ```text
//! cargo run --example strategyproofness_audit
//! ```

use approvalkit::manipulation::{audit_strategyproofness, UtilitySpec};
use approvalkit::model::CandidateId;
use approvalkit::rules::Rule;

fn main() {
    // Five fixed ballots over {a,b,c}, two seats: 3 * {a}, {c}, {b,c}.
    // The audited agent sincerely approves {a,b} and votes last.
    let e = approvalkit::io::parse_election(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/thm4_sav.elec"
    )))
    .expect("fixture parses");
    let truth = UtilitySpec::dichotomous_on(
        ["a", "b"].iter().map(|t| CandidateId::new(*t).unwrap()),
    );

    for rule in [Rule::Av, Rule::Sav, Rule::Rav] {
        let finding =
            audit_strategyproofness(rule, &e.profile, e.k, &e.tiebreak, &truth).unwrap();
        match finding {
            None => {
                println!("{rule}: no profitable deviation - sincere voting is optimal here");
                assert_eq!(rule, Rule::Av);
            }
            Some(dev) => {
                println!(
                    "{rule}: sincere {} elects {} (utility {}), but {} elects {} (utility {})",
                    dev.truthful_ballot,
                    dev.truthful_outcome,
                    dev.truthful_utility.fraction_string(),
                    dev.deviation,
                    dev.outcome,
                    dev.utility.fraction_string(),
                );
                // Both failures share the same shape: the agent must
                // DROP a, a candidate they sincerely approve, to get
                // both a and b seated. a wins regardless; approving it
                // only dilutes the agent's support for b.
                assert_eq!(dev.deviation.to_string(), "{b}");
                assert_eq!(dev.outcome.to_string(), "{a,b}");
                assert!(dev.drops_approved);
                assert!(!dev.approves_zero_utility);
                println!(
                    "  -> deviation drops a sincerely approved candidate (drops_approved: {})",
                    dev.drops_approved
                );
            }
        }
    }
}
