//! One line per acceptance criterion. Every comparison is exact (tolerance
//! 0); each criterion also has a wall-clock budget.

use std::io::Write;
use std::time::{Duration, Instant};

use sbraid_core::suite::{self, CheckReport};

const SEED: u64 = 7;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Vec<CheckReport>,
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "exhaustive injectivity at n=2, g=1, length <= 4",
            budget: Duration::from_secs(10),
            run: || vec![suite::injectivity_exhaustive()],
        },
        Criterion {
            id: 2,
            title: "decode round trip, 1000 words at n=2 and 300 at n=3",
            budget: Duration::from_secs(60),
            run: || vec![suite::decode_round_trip(SEED, 2, 1000), suite::decode_round_trip(SEED, 3, 300)],
        },
        Criterion {
            id: 3,
            title: "graded expansion identity on 200 words",
            budget: Duration::from_secs(60),
            run: || vec![suite::graded_expansion(SEED, 200)],
        },
        Criterion {
            id: 4,
            title: "conjugation actions preserve strand class and kappa at n=4, g=1",
            budget: Duration::from_secs(60),
            run: || vec![suite::action_invariance()],
        },
        Criterion {
            id: 5,
            title: "kappa and deg homomorphisms on 10^4 products",
            budget: Duration::from_secs(60),
            run: || vec![suite::kappa_deg_homomorphism(SEED, 10_000)],
        },
        Criterion {
            id: 6,
            title: "leading-commuter certificates on 10^3 scrambled words",
            budget: Duration::from_secs(60),
            run: || vec![suite::leading_commuters_check(SEED, 1000)],
        },
        Criterion {
            id: 7,
            title: "fixed products of conjugates (500) and factorwise commutation (200)",
            budget: Duration::from_secs(60),
            run: || vec![suite::automorphism_fixes_factors(SEED, 500), suite::commutation_is_factorwise(SEED, 200)],
        },
        Criterion {
            id: 8,
            title: "surface group: genus 1 exhaustive, genus 2 against search oracle",
            budget: Duration::from_secs(120),
            run: || vec![suite::surface_genus_one(), suite::surface_genus_two(SEED, 500)],
        },
        Criterion {
            id: 9,
            title: "singular splitting certifies on 500 words",
            budget: Duration::from_secs(60),
            run: || vec![suite::split_soundness(SEED, 500)],
        },
        Criterion {
            id: 10,
            title: "eta generator images as exact JSON",
            budget: Duration::from_secs(10),
            run: || vec![suite::eta_generators()],
        },
    ]
}

#[test]
fn acceptance_criteria() {
    let mut out = std::io::stdout().lock();
    let mut failures = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let reports = (c.run)();
        let elapsed = start.elapsed();
        let checks_pass = reports.iter().all(CheckReport::passed);
        let in_budget = elapsed <= c.budget;
        let pass = checks_pass && in_budget;
        let summary: Vec<String> = reports
            .iter()
            .map(|r| {
                let mut s = format!("{} {}/{} ok", r.name, r.cases - r.failed, r.cases);
                if r.skipped > 0 {
                    s.push_str(&format!(", {} skipped", r.skipped));
                }
                if !r.detail.is_empty() {
                    s.push_str(&format!(", {}", r.detail));
                }
                s
            })
            .collect();
        writeln!(
            out,
            "criterion {:>2} {}: {} [tolerance 0, {:.2}s of {}s] {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            summary.join("; ")
        )
        .unwrap();
        if !pass {
            for r in &reports {
                for w in &r.witnesses {
                    writeln!(out, "    {}: {w}", r.name).unwrap();
                }
            }
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
