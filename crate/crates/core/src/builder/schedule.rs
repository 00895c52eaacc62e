// SPDX-License-Identifier: MIT OR Apache-2.0

use super::BuildError;
use crate::cartan::{CartanData, Color, SignColoring};
use crate::quiver::{AnnotatedQuiver, Sign, VertexLabel};
use serde::Serialize;

/// Periodic mutation schedule: `batches[k]` holds the mutation points of the
/// step from `u = k/t` to `u = (k+1)/t`, for `k = 0..2t-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    t: i64,
    batches: Vec<Vec<VertexLabel>>,
}

impl Schedule {
    pub fn new(t: i64, batches: Vec<Vec<VertexLabel>>) -> Self {
        assert_eq!(batches.len() as i64, 2 * t, "a schedule has 2t batches");
        Schedule { t, batches }
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn period(&self) -> usize {
        self.batches.len()
    }

    /// Batch at step `n`, for any integer `n`.
    pub fn batch(&self, n: i64) -> &[VertexLabel] {
        &self.batches[n.rem_euclid(2 * self.t) as usize]
    }

    pub fn batches(&self) -> &[Vec<VertexLabel>] {
        &self.batches
    }

    /// True when `(label, n)` is a mutation point.
    pub fn is_mutation_point(&self, label: &VertexLabel, n: i64) -> bool {
        self.batch(n).binary_search(label).is_ok()
    }

    /// Applies the batches for steps `from..to` (forward) to `q`.
    pub fn advance(&self, q: &AnnotatedQuiver, from: i64, to: i64) -> Result<AnnotatedQuiver, BuildError> {
        let mut q = q.clone();
        for n in from..to {
            q = q.composite_mutate(self.batch(n))?;
        }
        Ok(q)
    }

    /// Applies the batches for steps `to..from` in reverse, moving from time
    /// `from/t` back to `to/t`.
    pub fn retreat(&self, q: &AnnotatedQuiver, from: i64, to: i64) -> Result<AnnotatedQuiver, BuildError> {
        let mut q = q.clone();
        for n in (to..from).rev() {
            q = q.composite_mutate(self.batch(n))?;
        }
        Ok(q)
    }
}

/// Sign of vertex `(a, copy, row)` in the assembled quiver.
pub(crate) fn vertex_sign(cd: &CartanData, sc: &SignColoring, a: usize, copy: usize, row: usize) -> Sign {
    let da = cd.d(a);
    let flip = if da % 2 == 1 {
        sc.signs[a] == Sign::Plus
    } else {
        sc.colors[a] == Some(Color::Beta)
    };
    Sign::plus_if(((copy + row) % 2 == 1) != flip)
}

/// Copies of `a` mutated at step `k` together with the sign they must carry.
pub(crate) fn column_points(d: i64, sign: Sign, k: i64) -> Option<(Sign, Vec<usize>)> {
    let to_copy = |x: i64| x as usize;
    if d % 2 == 1 {
        let p = k.rem_euclid(2 * d);
        Some(match (p < d, p % 2 == 0) {
            (true, true) => (Sign::Plus, vec![to_copy(p + 1)]),
            (true, false) => (Sign::Plus, vec![to_copy(d - p)]),
            (false, true) => (Sign::Minus, vec![to_copy(2 * d - p)]),
            (false, false) => (Sign::Minus, vec![to_copy(p + 1 - d)]),
        })
    } else {
        let shift = if sign == Sign::Plus { 0 } else { 1 };
        let p = (k - shift).rem_euclid(2 * d);
        if p % 2 == 1 {
            None
        } else if p < d {
            Some((Sign::Plus, vec![to_copy(p + 1), to_copy(d - p)]))
        } else {
            Some((Sign::Minus, vec![to_copy(p + 1 - d), to_copy(2 * d - p)]))
        }
    }
}

/// Assembles the `2t` batches for `q0`, a quiver built for `(cd, sc)`, and
/// checks that each batch commutes in the quiver current at its step.
/// Copies missing from `q0` (halved columns) are skipped.
pub fn build_schedule(cd: &CartanData, sc: &SignColoring, q0: &AnnotatedQuiver) -> Result<Schedule, BuildError> {
    let t = cd.t();
    let mut batches = Vec::with_capacity(2 * t as usize);
    for k in 0..2 * t {
        let mut batch: Vec<VertexLabel> = q0
            .labels()
            .iter()
            .enumerate()
            .filter(|(i, l)| {
                let a = l.a - 1;
                match column_points(cd.d(a), sc.signs[a], k) {
                    Some((s, copies)) => q0.sign(*i) == s && copies.contains(&l.copy),
                    None => false,
                }
            })
            .map(|(_, l)| *l)
            .collect();
        batch.sort();
        batches.push(batch);
    }
    let schedule = Schedule::new(t, batches);
    schedule.advance(q0, 0, 2 * t)?;
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_column_sequence() {
        let seq: Vec<_> = (0..10).map(|k| column_points(5, Sign::Minus, k).unwrap()).collect();
        let copies: Vec<usize> = seq.iter().map(|(_, c)| c[0]).collect();
        assert_eq!(copies, vec![1, 4, 3, 2, 5, 1, 4, 3, 2, 5]);
        assert!(seq[..5].iter().all(|(s, _)| *s == Sign::Plus));
        assert!(seq[5..].iter().all(|(s, _)| *s == Sign::Minus));
        assert_eq!(column_points(1, Sign::Plus, 0), Some((Sign::Plus, vec![1])));
        assert_eq!(column_points(1, Sign::Minus, 1), Some((Sign::Minus, vec![1])));
    }

    #[test]
    fn even_column_sequence() {
        assert_eq!(column_points(2, Sign::Plus, 0), Some((Sign::Plus, vec![1, 2])));
        assert_eq!(column_points(2, Sign::Plus, 1), None);
        assert_eq!(column_points(2, Sign::Minus, 0), None);
        assert_eq!(column_points(2, Sign::Minus, 1), Some((Sign::Plus, vec![1, 2])));
        assert_eq!(column_points(4, Sign::Plus, 2), Some((Sign::Plus, vec![3, 2])));
        assert_eq!(column_points(4, Sign::Plus, 6), Some((Sign::Minus, vec![3, 2])));
    }
}
