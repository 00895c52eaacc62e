// SPDX-License-Identifier: MIT OR Apache-2.0

use super::schedule::Schedule;
use super::BuildError;
use crate::cartan::{CartanData, SignColoring};
use crate::quiver::VertexLabel;
use crate::tysystem::{parity, ParityContext, ParityKind, TyIndex};
use std::collections::BTreeSet;

/// Which index shift the embedding uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedKind {
    /// `(a, m, u - d_a/t) ↦ (i, u)`, defined on the `+` class of the T-system.
    G,
    /// `(a, m, u) ↦ (i, u)`, defined on the `+'` class of the Y-system.
    GPrime,
}

/// Identification of T/Y-system indices with mutation points `(i, n)`.
#[derive(Debug, Clone)]
pub struct Embedding {
    cd: CartanData,
    sc: SignColoring,
    level: i64,
    kind: EmbedKind,
    schedule: Schedule,
}

impl Embedding {
    pub fn new(cd: CartanData, sc: SignColoring, level: i64, kind: EmbedKind, schedule: Schedule) -> Self {
        Embedding { cd, sc, level, kind, schedule }
    }

    pub fn kind(&self) -> EmbedKind {
        self.kind
    }

    fn shift(&self, a: usize) -> i64 {
        match self.kind {
            EmbedKind::G => self.cd.d(a),
            EmbedKind::GPrime => 0,
        }
    }

    /// True when `idx` belongs to the domain parity class.
    pub fn in_domain(&self, idx: &TyIndex) -> bool {
        let in_range = idx.a < self.cd.rank() && idx.m >= 1 && idx.m < self.cd.t_a(idx.a) * self.level;
        let kind = match self.kind {
            EmbedKind::G => ParityKind::QPlus,
            EmbedKind::GPrime => ParityKind::QPrimePlus,
        };
        let ctx = ParityContext::Signed { cd: &self.cd, sc: &self.sc };
        in_range && parity(idx, kind, ctx).expect("signed context")
    }

    pub fn forward(&self, idx: &TyIndex) -> Result<(VertexLabel, i64), BuildError> {
        if !self.in_domain(idx) {
            return Err(BuildError::ParityMismatch(*idx));
        }
        let n = idx.n + self.shift(idx.a);
        let mut hits = self
            .schedule
            .batch(n)
            .iter()
            .filter(|l| l.a == idx.a + 1 && l.row as i64 == idx.m);
        match (hits.next(), hits.next()) {
            (Some(l), None) => Ok((*l, n)),
            _ => Err(BuildError::ParityMismatch(*idx)),
        }
    }

    pub fn inverse(&self, label: &VertexLabel, n: i64) -> Result<TyIndex, BuildError> {
        let a = label.a - 1;
        let idx = TyIndex::new(a, label.row as i64, n - self.shift(a));
        if !self.schedule.is_mutation_point(label, n) || !self.in_domain(&idx) {
            return Err(BuildError::ParityMismatch(idx));
        }
        Ok(idx)
    }

    /// Checks on `n ∈ [lo, hi]` that the domain maps injectively onto the
    /// set of mutation points and that `forward ∘ inverse` is the identity.
    pub fn check_bijective(&self, lo: i64, hi: i64) -> Result<(), String> {
        let mut image = BTreeSet::new();
        for a in 0..self.cd.rank() {
            for m in 1..self.cd.t_a(a) * self.level {
                for n in lo..=hi {
                    let idx = TyIndex::new(a, m, n - self.shift(a));
                    if !self.in_domain(&idx) {
                        continue;
                    }
                    let (l, k) = self.forward(&idx).map_err(|e| format!("{idx}: {e}"))?;
                    if !image.insert((l, k)) {
                        return Err(format!("{l} at step {k} is hit twice"));
                    }
                    if self.inverse(&l, k) != Ok(idx) {
                        return Err(format!("inverse fails at {l}, step {k}"));
                    }
                }
            }
        }
        let points: BTreeSet<_> =
            (lo..=hi).flat_map(|n| self.schedule.batch(n).iter().map(move |l| (*l, n))).collect();
        if points != image {
            let missing = points.difference(&image).next();
            return Err(format!("mutation point {missing:?} is not in the image"));
        }
        Ok(())
    }
}

/// Closed form of the rank-two `g'` for the long vertex (`a = 0`): the copy
/// selected by `t·m + n ≡ 2j (mod 2t)`.
pub fn rank2_g_prime_copy(t: i64, m: i64, n: i64) -> Option<usize> {
    let s = (t * m + n).rem_euclid(2 * t);
    if s % 2 == 1 {
        return None;
    }
    let j = s / 2;
    if t % 2 == 1 {
        Some(if j <= (t - 1) / 2 { 2 * j + 1 } else { 2 * t - 2 * j } as usize)
    } else {
        Some(if j < t / 2 { 2 * j + 1 } else { 2 * t - 2 * j } as usize)
    }
}
