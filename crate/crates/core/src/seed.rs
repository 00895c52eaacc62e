// SPDX-License-Identifier: MIT OR Apache-2.0

//! Cluster seeds `(B, x, y)` and their mutation.
//!
//! Cluster variables are rational functions over the universe
//! `x1..xN, y1..yN` (or `x1..xN` alone in trivial mode). Coefficients are
//! universal-semifield elements in the `y` variables; in trivial mode every
//! coefficient is the constant 1 and the `y` factors drop out of the
//! exchange relation. A third mode tracks the coefficients alone, over the
//! universe `y1..yN`, for runs that only need the Y-system side.

use crate::poly::{Polynomial, RationalFunction, SemifieldElement, Universe};
use crate::quiver::{AnnotatedQuiver, QuiverError, VertexLabel};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeedError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexLabel),
    #[error("vertices {0} and {1} are adjacent, so their mutations do not commute")]
    NonCommutingSet(VertexLabel, VertexLabel),
    #[error("malformed seed: {0}")]
    Malformed(String),
}

impl From<QuiverError> for SeedError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::UnknownVertex(l) => SeedError::UnknownVertex(l),
            QuiverError::NonCommutingSet(a, b) => SeedError::NonCommutingSet(a, b),
            other => SeedError::Malformed(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    WithCoefficients,
    Trivial,
    /// Only `B` and `y` are mutated; the seed carries no cluster variables.
    CoefficientsOnly,
}

#[derive(Debug, Clone)]
pub struct Seed {
    quiver: AnnotatedQuiver,
    x: Vec<RationalFunction>,
    y: Vec<SemifieldElement>,
    /// Per vertex, the polynomial expected to divide the numerator of the
    /// next `1 ⊕ y`. Splitting by it keeps every coefficient a product over
    /// the same factors, which keeps expansions small.
    fpolys: Vec<Polynomial>,
    mode: Mode,
    universe: Arc<Universe>,
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.quiver.labels() == other.quiver.labels()
            && self.quiver.same_matrix(&other.quiver)
            && self.x == other.x
            && self.y == other.y
    }
}

/// Variable names for a seed on `n` vertices.
pub fn seed_universe(n: usize, mode: Mode) -> Arc<Universe> {
    let xs = (1..=n).map(|i| format!("x{i}"));
    match mode {
        Mode::Trivial => Universe::new(xs),
        Mode::WithCoefficients => Universe::new(xs.chain((1..=n).map(|i| format!("y{i}")))),
        Mode::CoefficientsOnly => Universe::new((1..=n).map(|i| format!("y{i}"))),
    }
}

impl Seed {
    /// The initial seed on `quiver`: `x_i` and `y_i` are the generators.
    pub fn initial(quiver: AnnotatedQuiver, mode: Mode) -> Self {
        let n = quiver.len();
        let universe = seed_universe(n, mode);
        let nv = universe.len();
        let x = match mode {
            Mode::CoefficientsOnly => Vec::new(),
            _ => (0..n).map(|i| RationalFunction::var(nv, i)).collect(),
        };
        let y = match mode {
            Mode::Trivial => vec![SemifieldElement::one(nv); n],
            Mode::WithCoefficients => (0..n).map(|i| SemifieldElement::var(nv, n + i)).collect(),
            Mode::CoefficientsOnly => (0..n).map(|i| SemifieldElement::var(nv, i)).collect(),
        };
        let fpolys = vec![Polynomial::one(nv); n];
        Seed { quiver, x, y, fpolys, mode, universe }
    }

    /// Assembles a seed from explicit entries over `universe`.
    pub fn from_parts(
        quiver: AnnotatedQuiver,
        x: Vec<RationalFunction>,
        y: Vec<SemifieldElement>,
        mode: Mode,
        universe: Arc<Universe>,
    ) -> Result<Self, SeedError> {
        let n = quiver.len();
        let nx = if mode == Mode::CoefficientsOnly { 0 } else { n };
        if x.len() != nx || y.len() != n {
            return Err(SeedError::Malformed(format!("expected {n} entries per tuple")));
        }
        let nv = universe.len();
        if x.iter().any(|f| f.nvars() != nv) || y.iter().any(|f| f.nvars() != nv) {
            return Err(SeedError::Malformed("entries do not share the universe".into()));
        }
        if mode == Mode::Trivial && y.iter().any(|c| !c.is_one()) {
            return Err(SeedError::Malformed("trivial mode requires unit coefficients".into()));
        }
        let fpolys = vec![Polynomial::one(nv); n];
        Ok(Seed { quiver, x, y, fpolys, mode, universe })
    }

    pub fn quiver(&self) -> &AnnotatedQuiver {
        &self.quiver
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn x(&self, i: usize) -> &RationalFunction {
        &self.x[i]
    }

    pub fn y(&self, i: usize) -> &SemifieldElement {
        &self.y[i]
    }

    pub fn xs(&self) -> &[RationalFunction] {
        &self.x
    }

    pub fn ys(&self) -> &[SemifieldElement] {
        &self.y
    }

    /// Mask of the cluster generators `x1..xN` inside the universe, for
    /// Laurent checks.
    pub fn x_mask(&self) -> Vec<bool> {
        let nx = self.x.len();
        (0..self.universe.len()).map(|v| v < nx).collect()
    }

    fn index(&self, k: &VertexLabel) -> Result<usize, SeedError> {
        self.quiver.index_of(k).ok_or(SeedError::UnknownVertex(*k))
    }

    /// Mutation at vertex index `k`, in place.
    pub fn mutate_at(&mut self, k: usize) {
        let n = self.len();
        if self.mode != Mode::CoefficientsOnly {
            self.exchange_x(k);
        }
        if self.mode != Mode::Trivial {
            let yk = self.y[k].clone();
            let (down, cofactor) = yk.one_plus_splitting(&self.fpolys[k]);
            self.fpolys[k] = cofactor;
            let up = yk.div(&down);
            for i in (0..n).filter(|&i| i != k) {
                let b = self.quiver.b(k, i);
                if b > 0 {
                    self.y[i] = self.y[i].mul(&up.pow(b));
                } else if b < 0 {
                    self.y[i] = self.y[i].mul(&down.pow(-b));
                }
            }
            self.y[k] = yk.inv();
        }
        self.quiver.mutate_in_place(k);
    }

    fn exchange_x(&mut self, k: usize) {
        let n = self.len();
        let col: Vec<i32> = (0..n).map(|j| self.quiver.b(j, k)).collect();
        let nv = self.universe.len();

        let mut pos = RationalFunction::one(nv);
        let mut neg = RationalFunction::one(nv);
        for (j, &b) in col.iter().enumerate() {
            if b > 0 {
                pos = pos.mul(&self.x[j].pow(b).expect("cluster variables are nonzero"));
            } else if b < 0 {
                neg = neg.mul(&self.x[j].pow(-b).expect("cluster variables are nonzero"));
            }
        }
        let new_x = match self.mode {
            Mode::Trivial => divide(&pos.add(&neg), &self.x[k]),
            _ => {
                // With y = N/D: x' = (N·pos + D·neg) / ((N + D)·x).
                let (yn, yd) = self.y[k].representation();
                let num = pos.mul_poly(yn).add(&neg.mul_poly(yd));
                let q = divide(&num, &self.x[k]);
                q.div(&RationalFunction::from_polynomial(yn.add(yd))).expect("1 + y is nonzero")
            }
        };
        self.x[k] = new_x;
    }

    /// Mutation at a pairwise non-adjacent set, in place.
    pub fn composite_mutate_in_place(&mut self, set: &[VertexLabel]) -> Result<(), SeedError> {
        for k in self.quiver.commuting_indices(set)? {
            self.mutate_at(k);
        }
        Ok(())
    }
}

/// `f / g`, trying exact polynomial division of the numerators first: along
/// mutation sequences the new numerator is usually divisible by the old
/// variable's numerator, which avoids a full gcd.
fn divide(f: &RationalFunction, g: &RationalFunction) -> RationalFunction {
    match f.num().div_exact(g.num()) {
        Some(q) => RationalFunction::new(q.mul(g.den()), f.den().clone()).expect("nonzero denominator"),
        None => f.div(g).expect("cluster variables are nonzero"),
    }
}

pub fn mutate_seed(s: &Seed, k: &VertexLabel) -> Result<Seed, SeedError> {
    let idx = s.index(k)?;
    let mut out = s.clone();
    out.mutate_at(idx);
    Ok(out)
}

/// Mutation at every vertex of `set`; the vertices must be pairwise
/// non-adjacent, so the order does not matter.
pub fn composite_mutate_seed(s: &Seed, set: &[VertexLabel]) -> Result<Seed, SeedError> {
    let mut out = s.clone();
    out.composite_mutate_in_place(set)?;
    Ok(out)
}
