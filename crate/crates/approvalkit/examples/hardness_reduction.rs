//! From graphs to elections: encoding "does G have an independent set of
//! size t?" as "can a size-t committee reach PAV score deg(G)*t?",
//! then checking both sides of the equivalence with exact solvers.
//!
//! ```text
//! cargo run --example hardness_reduction
//! ```

use approvalkit::io::{parse_graph, render_election};
use approvalkit::reduction::{
    independent_set_exists, is_to_pav, verify_reduction_report, Graph,
};

fn main() {
    // A path on three vertices: 0 - 1 - 2. Its endpoints {0,2} form an
    // independent set of size 2.
    let path = parse_graph(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/path3.graph"
    )))
    .expect("fixture parses");
    demonstrate(&path, "path3", 2);

    // The triangle has no independent set of size 2: every pair of
    // vertices is adjacent.
    let triangle = parse_graph(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/triangle.graph"
    )))
    .expect("fixture parses");
    demonstrate(&triangle, "triangle", 2);

    // The equivalence holds in both directions on these instances; the
    // acceptance suite checks it over every small graph.
    assert!(independent_set_exists(&path, 2).unwrap());
    assert!(!independent_set_exists(&triangle, 2).unwrap());
}

fn demonstrate(g: &Graph, name: &str, t: usize) {
    let ri = is_to_pav(g, t).expect("valid reduction input");
    println!(
        "{name}, t = {t}: election with {} candidates, {} agents, threshold {}",
        ri.election.profile.num_candidates(),
        ri.election.profile.num_ballots(),
        ri.threshold.fraction_string(),
    );
    print!("{}", indent(&render_election(&ri.election)));

    // One agent per edge approves its two endpoint candidates; dummy
    // candidates pad every vertex to the maximum degree. A committee of
    // t vertex candidates hits the threshold deg(G)*t exactly when no
    // edge agent is covered twice — an independent set.
    let report = verify_reduction_report(g, t).expect("verification runs");
    println!(
        "  independent set of size {t}: {}",
        report.independent_set_exists
    );
    println!(
        "  committee reaching {}: {}",
        report.threshold.fraction_string(),
        report.pav_reaches_threshold
    );
    if let Some(w) = &report.witness {
        println!("  witness committee: {w}");
    }
    assert!(report.agrees);
    println!("  sides agree: {}\n", report.agrees);
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}\n")).collect()
}
