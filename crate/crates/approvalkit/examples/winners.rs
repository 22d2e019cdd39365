//! Four rules, one profile: how AV, SAV, PAV and RAV pick different
//! two-seat committees from the same five ballots.
//!
//! ```text
//! cargo run --example winners
//! ```

use approvalkit::io::parse_election;
use approvalkit::rules::{av_score, av_winners, pav_score, rav_winners, sav_score, sav_winners};

fn main() {
    // Three candidates, two seats, five agents: three approve only `a`,
    // one approves only `c`, one approves `b` and `c`.
    let e = parse_election(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/thm4_sav.elec"
    )))
    .expect("fixture parses");

    println!("profile: 3 * {{a}}, {{c}}, {{b,c}}   (k = 2, tiebreak a > b > c)\n");

    // Approval voting: each committee member earns one point per
    // approver. `a` has three approvers, `c` two (one shared with `b`).
    let w_av = av_winners(&e).unwrap();
    let s_av = av_score(&e.profile, &w_av).unwrap();
    println!("av  -> {w_av}  score {}", s_av.fraction_string());
    assert_eq!(w_av.to_string(), "{a,c}");

    // Satisfaction approval voting: each agent splits one point evenly
    // over their approved candidates, so the {b,c} agent gives each of
    // b and c only half a point.
    let w_sav = sav_winners(&e).unwrap();
    let s_sav = sav_score(&e.profile, &w_sav).unwrap();
    println!("sav -> {w_sav}  score {}", s_sav.fraction_string());
    assert_eq!(w_sav.to_string(), "{a,c}");

    // Proportional approval voting: an agent with p committee members
    // contributes 1 + 1/2 + ... + 1/p, rewarding coverage of distinct
    // groups over doubling up.
    let report = approvalkit::pav::pav_branch_and_bound(&e).unwrap();
    println!(
        "pav -> {}  score {}  ({}, optimal: {})",
        report.winner,
        report.score.fraction_string(),
        report.method,
        report.optimal
    );
    assert_eq!(report.winner.to_string(), "{a,c}");
    assert_eq!(report.score, pav_score(&e.profile, &report.winner).unwrap());

    // Reweighted approval voting: k sequential rounds; an agent's ballot
    // weight shrinks to 1/(1 + seats already held by their approved
    // candidates).
    let (w_rav, trace) = rav_winners(&e).unwrap();
    println!(
        "rav -> {w_rav}  elected in order {:?}",
        trace
            .elected_in_order()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    );
    assert_eq!(w_rav.to_string(), "{a,c}");

    // On this profile all four rules agree. The other examples show how
    // quickly that consensus falls apart once ballots shift.
    println!("\nall four rules agree here: {{a,c}}");
}
