// SPDX-License-Identifier: MIT OR Apache-2.0

//! Restricted T-system and Y-system relations at level `ℓ`.
//!
//! Time is kept as the integer `n = t·u`, so every shift by `k/t` is an
//! integer shift by `k`. Dynkin vertices are 0-based here and printed
//! 1-based. Relations are produced on demand for a single index.

use crate::cartan::{CartanData, SignColoring};
use crate::quiver::Sign;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TyError {
    #[error("index {0} is outside the index set")]
    IndexOutOfRange(TyIndex),
    #[error("level must be at least 2, got {0}")]
    InvalidLevel(i64),
    #[error("unknown parity kind {0:?}")]
    UnknownKind(String),
    #[error("parity kind {0:?} needs a different context")]
    WrongContext(String),
}

/// A point `(a, m, u)` of the index set with `n = t·u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TyIndex {
    /// Dynkin vertex, 0-based.
    pub a: usize,
    pub m: i64,
    pub n: i64,
}

impl TyIndex {
    pub fn new(a: usize, m: i64, n: i64) -> Self {
        TyIndex { a, m, n }
    }

    pub fn shifted(self, dn: i64) -> Self {
        TyIndex { n: self.n + dn, ..self }
    }
}

impl fmt::Display for TyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a + 1, self.m, self.n)
    }
}

/// A factor of an S-symbol: either a variable or the unit boundary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    Var(TyIndex),
    Unit,
}

/// `T(lhs[0]) T(lhs[1]) = ∏ T(unit_term) + ∏ T(k)^e over product_term`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TRelation {
    pub center: TyIndex,
    pub lhs: [TyIndex; 2],
    /// `T_{m-1}(u)` and `T_{m+1}(u)` with unit boundary entries dropped.
    pub unit_term: Vec<TyIndex>,
    /// G-weighted product, sorted, with positive exponents.
    pub product_term: Vec<(TyIndex, u32)>,
}

/// `Y(lhs[0]) Y(lhs[1]) = ∏ (1 + Y(k))^e / ∏ (1 + Y(k)^{-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YRelation {
    pub center: TyIndex,
    pub lhs: [TyIndex; 2],
    /// Factors `1 + Y`, sorted, with positive exponents.
    pub numerator: Vec<(TyIndex, u32)>,
    /// Factors `1 + Y^{-1}` that survive the boundary convention.
    pub denominator: Vec<TyIndex>,
}

fn collect(items: impl IntoIterator<Item = TyIndex>) -> Vec<(TyIndex, u32)> {
    let mut acc: BTreeMap<TyIndex, u32> = BTreeMap::new();
    for i in items {
        *acc.entry(i).or_insert(0) += 1;
    }
    acc.into_iter().collect()
}

/// The T/Y-system of a Cartan matrix at a fixed level.
#[derive(Debug, Clone)]
pub struct TySystem {
    cd: CartanData,
    level: i64,
}

impl TySystem {
    pub fn new(cd: CartanData, level: i64) -> Result<Self, TyError> {
        if level < 2 {
            return Err(TyError::InvalidLevel(level));
        }
        Ok(TySystem { cd, level })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cd
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// Largest admissible `m` at vertex `a`: `t_a·ℓ - 1`.
    pub fn max_row(&self, a: usize) -> i64 {
        self.cd.t_a(a) * self.level - 1
    }

    pub fn contains(&self, idx: &TyIndex) -> bool {
        idx.a < self.cd.rank() && idx.m >= 1 && idx.m <= self.max_row(idx.a)
    }

    fn require(&self, idx: &TyIndex) -> Result<(), TyError> {
        if self.contains(idx) {
            Ok(())
        } else {
            Err(TyError::IndexOutOfRange(*idx))
        }
    }

    fn t_factor(&self, b: usize, m: i64, n: i64) -> Factor {
        if m == 0 || m == self.cd.t_a(b) * self.level {
            Factor::Unit
        } else {
            Factor::Var(TyIndex::new(b, m, n))
        }
    }

    /// Factors of `S^{(b)}_m(u)`, with boundary factors reported as [`Factor::Unit`].
    pub fn s_factors(&self, b: usize, m: i64, n: i64) -> Vec<Factor> {
        let db = self.cd.d(b);
        let (mp, j) = (m.div_euclid(db), m.rem_euclid(db));
        let mut out = Vec::with_capacity(db as usize);
        for k in 1..=j {
            out.push(self.t_factor(b, mp + 1, n + j + 1 - 2 * k));
        }
        for k in 1..=db - j {
            out.push(self.t_factor(b, mp, n + db - j + 1 - 2 * k));
        }
        out
    }

    /// Indices of the factors `1 + Y` in `Z^{(b)}_{p,m}(u)`; indices whose
    /// row falls outside `1..t_b·ℓ-1` are dropped.
    pub fn z_factors(&self, b: usize, p: i64, m: i64, n: i64) -> Vec<TyIndex> {
        assert!(p >= 1, "Z-symbol needs p >= 1");
        let mut out = Vec::new();
        for j in -p + 1..=p - 1 {
            let row = p * m + j;
            if row < 1 || row > self.max_row(b) {
                continue;
            }
            for k in 1..=p - j.abs() {
                out.push(TyIndex::new(b, row, n + p - j.abs() + 1 - 2 * k));
            }
        }
        out
    }

    /// The T-system relation centred at `idx`.
    pub fn t_relation(&self, idx: TyIndex) -> Result<TRelation, TyError> {
        self.require(&idx)?;
        let TyIndex { a, m, n } = idx;
        let da = self.cd.d(a);
        let unit_term = [m - 1, m + 1]
            .into_iter()
            .filter(|&k| k >= 1 && k <= self.max_row(a))
            .map(|k| TyIndex::new(a, k, n))
            .collect();
        let mut prod = Vec::new();
        for b in self.cd.neighbors(a) {
            if da > 1 {
                prod.push(TyIndex::new(b, da / self.cd.d(b) * m, n));
            } else {
                prod.extend(self.s_factors(b, m, n).into_iter().filter_map(|f| match f {
                    Factor::Var(i) => Some(i),
                    Factor::Unit => None,
                }));
            }
        }
        Ok(TRelation {
            center: idx,
            lhs: [idx.shifted(-da), idx.shifted(da)],
            unit_term,
            product_term: collect(prod),
        })
    }

    /// The Y-system relation centred at `idx`.
    pub fn y_relation(&self, idx: TyIndex) -> Result<YRelation, TyError> {
        self.require(&idx)?;
        let TyIndex { a, m, n } = idx;
        let da = self.cd.d(a);
        let mut num = Vec::new();
        for b in self.cd.neighbors(a) {
            let db = self.cd.d(b);
            if da > 1 {
                num.extend(self.z_factors(b, da / db, m, n));
            } else if m % db == 0 {
                num.push(TyIndex::new(b, m / db, n));
            }
        }
        let denominator = [m - 1, m + 1]
            .into_iter()
            .filter(|&k| k >= 1 && k <= self.max_row(a))
            .map(|k| TyIndex::new(a, k, n))
            .collect();
        Ok(YRelation {
            center: idx,
            lhs: [idx.shifted(-da), idx.shifted(da)],
            numerator: collect(num),
            denominator,
        })
    }

    /// `G(b,k,v; a,m,u)`: the exponent of `T^{(b)}_k(v)` in the product term
    /// of the T-relation centred at `(a,m,u)`.
    pub fn g_exponent(&self, factor: TyIndex, center: TyIndex) -> u32 {
        if !self.contains(&center) || !self.contains(&factor) {
            return 0;
        }
        // Only neighbours within a bounded time distance can contribute.
        if self.cd.c(center.a, factor.a) == 0 || factor.a == center.a {
            return 0;
        }
        self.t_relation(center)
            .map(|r| {
                r.product_term.iter().find(|(i, _)| *i == factor).map_or(0, |&(_, e)| e)
            })
            .unwrap_or(0)
    }
}

/// Named parity predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityKind {
    PPlus,
    PMinus,
    PPrimePlus,
    PPrimeMinus,
    QPlus,
    QMinus,
    QPrimePlus,
    QPrimeMinus,
}

impl std::str::FromStr for ParityKind {
    type Err = TyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "P+" => ParityKind::PPlus,
            "P-" => ParityKind::PMinus,
            "P'+" => ParityKind::PPrimePlus,
            "P'-" => ParityKind::PPrimeMinus,
            "Q+" => ParityKind::QPlus,
            "Q-" => ParityKind::QMinus,
            "Q'+" => ParityKind::QPrimePlus,
            "Q'-" => ParityKind::QPrimeMinus,
            other => return Err(TyError::UnknownKind(other.to_string())),
        })
    }
}

/// Data the parity predicates depend on.
#[derive(Debug, Clone, Copy)]
pub enum ParityContext<'a> {
    /// Rank two with `C = [[2,-1],[-t,2]]`; vertex 0 has `d = t`.
    Rank2 { t: i64 },
    /// A diagram with its sign decomposition (`t` is the global lcm).
    Signed { cd: &'a CartanData, sc: &'a SignColoring },
}

fn even(x: i64) -> bool {
    x.rem_euclid(2) == 0
}

/// Rank-two `P+`.
fn rank2_p_plus(t: i64, idx: &TyIndex) -> bool {
    let (m, n) = (idx.m, idx.n);
    if t % 2 == 1 {
        if idx.a == 0 {
            !even(m + n)
        } else {
            even(m + n)
        }
    } else if idx.a == 0 {
        even(n)
    } else {
        even(m + n)
    }
}

/// Rank-two `P'+`.
fn rank2_p_prime_plus(t: i64, idx: &TyIndex) -> bool {
    let (m, n) = (idx.m, idx.n);
    if t % 2 == 1 {
        if idx.a == 0 {
            even(m + n)
        } else {
            !even(m + n)
        }
    } else if idx.a == 0 {
        even(n)
    } else {
        !even(m + n)
    }
}

/// `Q+` for a signed diagram. For even `d_a` the condition is on the parity
/// of `n = t·u` alone: `n` even on `I+`, odd on `I-`.
fn q_plus(cd: &CartanData, sc: &SignColoring, idx: &TyIndex) -> bool {
    let plus = sc.signs[idx.a] == Sign::Plus;
    if cd.d(idx.a) % 2 == 1 {
        even(idx.m + idx.n) == plus
    } else {
        even(idx.n) == plus
    }
}

fn q_prime_plus(cd: &CartanData, sc: &SignColoring, idx: &TyIndex) -> bool {
    let plus = sc.signs[idx.a] == Sign::Plus;
    if cd.d(idx.a) % 2 == 1 {
        even(idx.m + idx.n) != plus
    } else {
        even(idx.n) == plus
    }
}

/// Evaluates a named parity predicate at `idx`.
pub fn parity(idx: &TyIndex, kind: ParityKind, ctx: ParityContext<'_>) -> Result<bool, TyError> {
    use ParityKind::*;
    match (kind, ctx) {
        (PPlus, ParityContext::Rank2 { t }) => Ok(rank2_p_plus(t, idx)),
        (PMinus, ParityContext::Rank2 { t }) => Ok(!rank2_p_plus(t, idx)),
        (PPrimePlus, ParityContext::Rank2 { t }) => Ok(rank2_p_prime_plus(t, idx)),
        (PPrimeMinus, ParityContext::Rank2 { t }) => Ok(!rank2_p_prime_plus(t, idx)),
        (QPlus, ParityContext::Signed { cd, sc }) => Ok(q_plus(cd, sc, idx)),
        (QMinus, ParityContext::Signed { cd, sc }) => Ok(!q_plus(cd, sc, idx)),
        (QPrimePlus, ParityContext::Signed { cd, sc }) => Ok(q_prime_plus(cd, sc, idx)),
        (QPrimeMinus, ParityContext::Signed { cd, sc }) => Ok(!q_prime_plus(cd, sc, idx)),
        (k, _) => Err(TyError::WrongContext(format!("{k:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::validate_cartan;
    use proptest::prelude::*;

    fn rank2(t: i64, level: i64) -> TySystem {
        TySystem::new(validate_cartan(&[vec![2, -1], vec![-t, 2]]).unwrap(), level).unwrap()
    }

    fn idx(a: usize, m: i64, n: i64) -> TyIndex {
        TyIndex::new(a, m, n)
    }

    #[test]
    fn s_symbol_expansions() {
        // d_b = 1 (vertex 1 of M_3): a single factor.
        let s = rank2(3, 3);
        assert_eq!(s.s_factors(1, 4, 7), vec![Factor::Var(idx(1, 4, 7))]);
        // d_b = 2 (vertex 0 of M_2).
        let s = rank2(2, 4);
        // m = 2m' + 1 with m' = 1: T_{2}(u) T_{1}(u).
        assert_eq!(s.s_factors(0, 3, 0), vec![Factor::Var(idx(0, 2, 0)), Factor::Var(idx(0, 1, 0))]);
        // m = 2m' with m' = 1: T_1(u + 1/t) T_1(u - 1/t).
        assert_eq!(s.s_factors(0, 2, 0), vec![Factor::Var(idx(0, 1, 1)), Factor::Var(idx(0, 1, -1))]);
        // m = 1: T_1(u) T_0(u) with T_0 a unit.
        assert_eq!(s.s_factors(0, 1, 0), vec![Factor::Var(idx(0, 1, 0)), Factor::Unit]);
    }

    #[test]
    fn z_symbol_expansions() {
        let s = rank2(2, 4);
        assert_eq!(s.z_factors(1, 1, 3, 5), vec![idx(1, 3, 5)]);
        assert_eq!(
            s.z_factors(1, 2, 2, 0),
            vec![idx(1, 3, 0), idx(1, 4, 1), idx(1, 4, -1), idx(1, 5, 0)]
        );
        assert_eq!(s.z_factors(1, 2, 0, 0), vec![idx(1, 1, 0)]);
    }

    #[test]
    fn t_relations_for_m2() {
        let s = rank2(2, 2);
        // Vertex 2 (d = 1), m = 1, u = 0.
        let r = s.t_relation(idx(1, 1, 0)).unwrap();
        assert_eq!(r.lhs, [idx(1, 1, -1), idx(1, 1, 1)]);
        assert_eq!(r.unit_term, vec![idx(1, 2, 0)]);
        assert_eq!(r.product_term, vec![(idx(0, 1, 0), 1)]);
        // Vertex 1 (d = 2), m = 1, u = 0: both unit-term entries are boundary.
        let r = s.t_relation(idx(0, 1, 0)).unwrap();
        assert_eq!(r.lhs, [idx(0, 1, -2), idx(0, 1, 2)]);
        assert!(r.unit_term.is_empty());
        assert_eq!(r.product_term, vec![(idx(1, 2, 0), 1)]);
        assert_eq!(s.g_exponent(idx(0, 1, 0), idx(1, 1, 0)), 1);
        assert!(s.t_relation(idx(0, 2, 0)).is_err());
    }

    #[test]
    fn t_relation_for_m5_product() {
        let s = rank2(5, 3);
        let r = s.t_relation(idx(1, 9, 0)).unwrap();
        let expect = vec![
            (idx(0, 1, 0), 1),
            (idx(0, 2, -3), 1),
            (idx(0, 2, -1), 1),
            (idx(0, 2, 1), 1),
            (idx(0, 2, 3), 1),
        ];
        assert_eq!(r.product_term, expect);
    }

    #[test]
    fn y_relation_boundaries() {
        let s = rank2(2, 3);
        // d_a = 1, m odd: the d_b = 2 neighbour contributes nothing.
        let r = s.y_relation(idx(1, 3, 0)).unwrap();
        assert!(r.numerator.is_empty());
        let r = s.y_relation(idx(1, 1, 0)).unwrap();
        assert_eq!(r.denominator, vec![idx(1, 2, 0)]);
        let r = s.y_relation(idx(1, 4, 0)).unwrap();
        assert_eq!(r.numerator, vec![(idx(0, 2, 0), 1)]);
    }

    #[test]
    fn parity_examples() {
        let ctx = ParityContext::Rank2 { t: 5 };
        assert!(parity(&idx(0, 1, 0), ParityKind::PPlus, ctx).unwrap());
        let ctx = ParityContext::Rank2 { t: 4 };
        // t·u = 0 is even, which is P+ for the d = t vertex when t is even.
        assert!(parity(&idx(0, 3, 0), ParityKind::PPlus, ctx).unwrap());
        assert!(!parity(&idx(0, 3, 0), ParityKind::PMinus, ctx).unwrap());
        assert!(!parity(&idx(0, 3, 1), ParityKind::PPlus, ctx).unwrap());
        assert!(parity(&idx(0, 3, 0), ParityKind::QPlus, ctx).is_err());
        assert!("R+".parse::<ParityKind>().is_err());
    }

    fn arb_rank2_index() -> impl Strategy<Value = (i64, i64, TyIndex)> {
        (1i64..=6, 2i64..=4, 0usize..2, 1i64..40, -60i64..60).prop_map(|(t, l, a, m, n)| {
            let max = if a == 0 { l - 1 } else { t * l - 1 };
            (t, l, TyIndex::new(a, 1 + (m - 1) % max, n))
        })
    }

    proptest! {
        #[test]
        fn rank2_parities_partition_and_shift((t, _l, i) in arb_rank2_index()) {
            let ctx = ParityContext::Rank2 { t };
            let p = parity(&i, ParityKind::PPlus, ctx).unwrap();
            prop_assert_ne!(p, parity(&i, ParityKind::PMinus, ctx).unwrap());
            let pp = parity(&i, ParityKind::PPrimePlus, ctx).unwrap();
            prop_assert_ne!(pp, parity(&i, ParityKind::PPrimeMinus, ctx).unwrap());
            let d = if i.a == 0 { t } else { 1 };
            prop_assert_eq!(pp, parity(&i.shifted(d), ParityKind::PPlus, ctx).unwrap());
            prop_assert_eq!(pp, parity(&i.shifted(-d), ParityKind::PPlus, ctx).unwrap());
        }

        #[test]
        fn rank2_relations_respect_parity((t, l, i) in arb_rank2_index()) {
            // At a P'+ centre, every non-unit T on the right is P+.
            let s = rank2(t, l);
            let ctx = ParityContext::Rank2 { t };
            prop_assume!(parity(&i, ParityKind::PPrimePlus, ctx).unwrap());
            let r = s.t_relation(i).unwrap();
            for j in r.unit_term.iter().chain(r.product_term.iter().map(|(j, _)| j)) {
                prop_assert!(parity(j, ParityKind::PPlus, ctx).unwrap(), "{} in relation at {}", j, i);
            }
            for j in r.lhs {
                prop_assert!(parity(&j, ParityKind::PPlus, ctx).unwrap());
            }
        }

        #[test]
        fn g_transpose_identity((t, l, i) in arb_rank2_index()) {
            // Each (1+Y_k(v)) exponent in the Y-relation at i equals the
            // multiplicity of T_i in the T-relation centred at k(v).
            let s = rank2(t, l);
            let y = s.y_relation(i).unwrap();
            for (k, e) in &y.numerator {
                prop_assert_eq!(*e, s.g_exponent(i, *k));
            }
            // Conversely, every T-relation in a time window that contains T_i
            // shows up in the Y numerator.
            for b in 0..2 {
                for m in 1..=s.max_row(b) {
                    for dn in -2 * t..=2 * t {
                        let c = TyIndex::new(b, m, i.n + dn);
                        let g = s.g_exponent(i, c);
                        let inv = y.numerator.iter().find(|(k, _)| *k == c).map_or(0, |&(_, e)| e);
                        prop_assert_eq!(g, inv, "centre {}", c);
                    }
                }
            }
        }

        #[test]
        fn z_factor_count((t, l, i) in arb_rank2_index()) {
            let s = rank2(t, l);
            prop_assume!(i.a == 0);
            let z = s.z_factors(1, t, i.m, i.n);
            // No boundary drops for admissible m.
            prop_assert_eq!(z.len() as i64, t * t);
        }
    }
}
