// SPDX-License-Identifier: MIT OR Apache-2.0

//! Hand-transcribed figure quivers compared against the builder.

use cluster_ty::builder::{build, rank2_quiver, rank2_schedule, Schedule};
use cluster_ty::cartan::{validate_cartan, CartanInput};
use cluster_ty::quiver::{AnnotatedQuiver, VertexLabel};
use serde_json::Value;
use std::collections::BTreeSet;
use std::path::PathBuf;

pub fn load(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn label(v: &Value) -> VertexLabel {
    let a: Vec<usize> = serde_json::from_value(v.clone()).unwrap();
    VertexLabel::new(a[0], a[1], a[2])
}

fn arrow_set(arrows: &Value) -> BTreeSet<Arrow> {
    arrows
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (label(&a[0]), label(&a[1]), a[2].as_i64().unwrap() as i32))
        .collect()
}

type Arrow = (VertexLabel, VertexLabel, i32);

/// Arrows drawn reversed in the printed figures. Each entry is the arrow as
/// printed; the builder produces the opposite direction.
fn errata(name: &str) -> Vec<Arrow> {
    let v = VertexLabel::new;
    match name {
        // Copy 4 of the even-t, odd-level figure: vertical arrows point from
        // `-` to `+`, unlike every other left column.
        "rank2_t4_l5" => vec![
            (v(1, 4, 2), v(1, 4, 1), 1),
            (v(1, 4, 2), v(1, 4, 3), 1),
            (v(1, 4, 4), v(1, 4, 3), 1),
        ],
        // Second panel of the all-plus even chain: the 4-5 arrows break the
        // alternation seen in the first panel and in the all-minus variant.
        "tree_even_2" => vec![(v(4, 2, 1), v(5, 2, 1), 1), (v(5, 2, 2), v(4, 2, 2), 1)],
        _ => vec![],
    }
}

/// Applies the errata to a printed arrow set.
fn corrected(name: &str, printed: &BTreeSet<Arrow>) -> BTreeSet<Arrow> {
    let mut out = printed.clone();
    for (s, d, m) in errata(name) {
        assert!(out.remove(&(s, d, m)), "{name}: erratum arrow {s} -> {d} not in the figure");
        out.insert((d, s, m));
    }
    out
}

/// The printed quiver must fail to close under the schedule, which is what
/// marks the entries in [`errata`] as misprints.
fn assert_printed_version_breaks(name: &str, q: &AnnotatedQuiver, printed: &BTreeSet<Arrow>, s: &Schedule) {
    if errata(name).is_empty() {
        return;
    }
    let mut p = AnnotatedQuiver::new(q.labels().to_vec(), q.signs().to_vec(), q.ctypes().to_vec()).unwrap();
    for (a, b, m) in printed {
        let (i, j) = (p.index_of(a).unwrap(), p.index_of(b).unwrap());
        p.add_arrows(i, j, *m);
    }
    let closes = s.advance(&p, 0, 2 * s.t()).map(|r| r.same_matrix(&p)).unwrap_or(false);
    assert!(!closes, "{name}: printed quiver is periodic, so the errata are wrong");
}

fn quiver_arrows(q: &AnnotatedQuiver) -> BTreeSet<Arrow> {
    q.arrows().into_iter().map(|(i, j, m)| (q.label(i), q.label(j), m)).collect()
}

/// Rank-two figures at t = 4, 5 and both level parities.
pub fn check_rank_two_figures() {
    for (name, t) in [("rank2_t5_l4", 5), ("rank2_t5_l5", 5), ("rank2_t4_l4", 4), ("rank2_t4_l5", 4)] {
        let fx = load(&format!("{name}.json"));
        let level = fx["level"].as_i64().unwrap();
        let q = rank2_quiver(t, level).unwrap();
        let verts = fx["vertices"].as_array().unwrap();
        assert_eq!(verts.len(), q.len(), "{name}");
        for v in verts {
            let l = label(&v["label"]);
            let i = q.index_of(&l).unwrap_or_else(|| panic!("{name}: missing {l}"));
            assert_eq!(q.sign(i).symbol().to_string(), v["sign"].as_str().unwrap(), "{name} {l}");
            assert_eq!(q.ctype(i).symbol().to_string(), v["ctype"].as_str().unwrap(), "{name} {l}");
        }
        let printed = arrow_set(&fx["arrows"]);
        assert_eq!(quiver_arrows(&q), corrected(name, &printed), "{name}");
        assert_printed_version_breaks(name, &q, &printed, &rank2_schedule(t, level).unwrap());
    }
}

/// Tree examples with their sign and colour overrides.
pub fn check_tree_figures() {
    for name in ["tree_odd_1", "tree_odd_2", "tree_even_1", "tree_even_2", "tree_even_3", "tree_even_4"] {
        let fx = load(&format!("{name}.json"));
        let input: CartanInput = serde_json::from_value(fx.clone()).unwrap();
        let cd = validate_cartan(&input.cartan).unwrap();
        let sc = input.coloring_for(&cd).unwrap();
        let level = fx["level"].as_i64().unwrap();
        let built = build(&cd, &sc, level).unwrap();
        let q = &built.quiver;

        let expect: BTreeSet<_> = fx["vertices"].as_array().unwrap().iter().map(label).collect();
        let got: BTreeSet<_> = q.labels().iter().copied().collect();
        assert_eq!(got, expect, "{name}: vertex set");
        let printed = arrow_set(&fx["arrows"]);
        assert_eq!(quiver_arrows(q), corrected(name, &printed), "{name}: arrows");
        assert_printed_version_breaks(name, q, &printed, &built.schedule);
        for s in fx["signs_shown"].as_array().unwrap() {
            let l = label(&s[0]);
            let i = q.index_of(&l).unwrap();
            assert_eq!(q.sign(i).symbol().to_string(), s[1].as_str().unwrap(), "{name}: sign of {l}");
        }
        let points: BTreeSet<_> = fx["mutation_points_u0"].as_array().unwrap().iter().map(label).collect();
        let batch: BTreeSet<_> = built.schedule.batch(0).iter().copied().collect();
        assert_eq!(batch, points, "{name}: mutation points at u = 0");
    }
}

#[test]
fn rank_two_figures() {
    check_rank_two_figures();
}

#[test]
fn tree_figures() {
    check_tree_figures();
}
