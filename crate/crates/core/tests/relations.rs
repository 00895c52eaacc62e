// SPDX-License-Identifier: MIT OR Apache-2.0

//! T- and Y-relations over the rank-two grid t ≤ 5, ℓ ∈ {2, 3}.
//!
//! Runs cover one period each way, except t = 5 at level 3, which stops at
//! |n| ≤ t to stay within memory.

use cluster_ty::builder::{rank2_cartan, rank2_coloring};
use cluster_ty::verify::{run_with, verify_t, verify_y, Report, RunConfig, RunMode, Window};

fn radius(t: i64, level: i64) -> i64 {
    if t == 5 && level == 3 {
        t
    } else {
        2 * t
    }
}

fn check(t: i64, level: i64, mode: RunMode) -> Report {
    let cd = rank2_cartan(t).unwrap();
    let config = RunConfig { window: Window::symmetric(radius(t, level)), mode, budget: None };
    let trace = run_with(&cd, &rank2_coloring(t), level, config).unwrap();
    let report = if mode == RunMode::Trivial { verify_t(&trace) } else { verify_y(&trace) };
    let first = report.failures().next().map(|e| e.relation.clone());
    assert!(report.passed(), "t={t} l={level} {mode:?}: {:?}, first failure {first:?}", report.summary);
    assert!(report.summary.checked > 0);
    assert_eq!(report.summary.budget_exceeded, 0);
    report
}

#[test]
fn t_relations_on_the_grid() {
    for t in 1..=5 {
        for level in 2..=3 {
            check(t, level, RunMode::Trivial);
        }
    }
}

#[test]
fn y_relations_on_the_grid() {
    for t in 1..=5 {
        for level in 2..=3 {
            check(t, level, RunMode::Semifield);
        }
    }
}
