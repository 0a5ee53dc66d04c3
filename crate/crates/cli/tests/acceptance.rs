//! One line per acceptance criterion; exits nonzero if any fails.

use lattice_cft::accept::{run, AcceptConfig, Kind};
use lattice_cft::commands::DEFAULT_SEED;

fn main() {
    let summary = run(&AcceptConfig { seed: DEFAULT_SEED, ..Default::default() });
    for c in &summary.criteria {
        let kind = match c.kind {
            Kind::Exact => "exact".to_string(),
            Kind::Numerical => format!("tol {:e}", c.tolerance.unwrap_or(0.0)),
        };
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {:<24} {:<12} {verdict}", c.id, c.name, kind);
        if !c.passed {
            println!("    {}", c.detail);
        }
    }
    println!("{} passed, {} failed", summary.passed, summary.failed);
    assert_eq!(summary.criteria.len(), 10);
    if !summary.passed() {
        std::process::exit(1);
    }
}
