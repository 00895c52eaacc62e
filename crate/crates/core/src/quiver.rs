// SPDX-License-Identifier: MIT OR Apache-2.0

//! Quivers without loops or 2-cycles, stored as dense skew-symmetric integer
//! matrices over labelled vertices that carry a sign and a circle type.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexLabel),
    #[error("vertices {0} and {1} are adjacent, so their mutations do not commute")]
    NonCommutingSet(VertexLabel, VertexLabel),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexLabel),
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    /// `+` when `cond` holds, `-` otherwise.
    pub fn plus_if(cond: bool) -> Self {
        if cond {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Circle type of a vertex: open (∘) or filled (•).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CircleType {
    #[serde(rename = "o")]
    Open,
    #[serde(rename = "*")]
    Filled,
}

impl CircleType {
    pub fn symbol(self) -> char {
        match self {
            CircleType::Open => 'o',
            CircleType::Filled => '*',
        }
    }
}

/// Vertex label `(a, copy, row)`: Dynkin vertex `a`, the copy (column) of
/// that vertex, and the row inside the column. All three are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexLabel {
    pub a: usize,
    pub copy: usize,
    pub row: usize,
}

impl VertexLabel {
    pub fn new(a: usize, copy: usize, row: usize) -> Self {
        VertexLabel { a, copy, row }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.copy, self.row)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnnotatedQuiver {
    labels: Vec<VertexLabel>,
    index: FxHashMap<VertexLabel, usize>,
    b: Vec<i32>,
    signs: Vec<Sign>,
    ctypes: Vec<CircleType>,
}

#[derive(Serialize)]
struct QuiverJson<'a> {
    vertices: Vec<[usize; 3]>,
    #[serde(rename = "B")]
    b: Vec<&'a [i32]>,
    sign: Vec<String>,
    ctype: Vec<String>,
}

impl AnnotatedQuiver {
    /// A quiver with no arrows on the given vertices.
    pub fn new(
        labels: Vec<VertexLabel>,
        signs: Vec<Sign>,
        ctypes: Vec<CircleType>,
    ) -> Result<Self, QuiverError> {
        assert_eq!(labels.len(), signs.len());
        assert_eq!(labels.len(), ctypes.len());
        let mut index = FxHashMap::default();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(*l, i).is_some() {
                return Err(QuiverError::DuplicateVertex(*l));
            }
        }
        let n = labels.len();
        Ok(AnnotatedQuiver { labels, index, b: vec![0; n * n], signs, ctypes })
    }

    /// Builds a quiver from a skew-symmetric matrix, labelling vertex `i` as
    /// `(1, 1, i + 1)` with sign `+` and type ∘.
    pub fn from_matrix(rows: &[Vec<i32>]) -> Result<Self, QuiverError> {
        let n = rows.len();
        let labels = (1..=n).map(|r| VertexLabel::new(1, 1, r)).collect();
        let mut q = Self::new(labels, vec![Sign::Plus; n], vec![CircleType::Open; n])?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(QuiverError::NotSkewSymmetric);
            }
            for (j, &v) in row.iter().enumerate() {
                if rows[j][i] != -v {
                    return Err(QuiverError::NotSkewSymmetric);
                }
                q.b[i * n + j] = v;
            }
        }
        Ok(q)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> VertexLabel {
        self.labels[i]
    }

    pub fn index_of(&self, label: &VertexLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn require(&self, label: &VertexLabel) -> Result<usize, QuiverError> {
        self.index_of(label).ok_or(QuiverError::UnknownVertex(*label))
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }

    pub fn ctype(&self, i: usize) -> CircleType {
        self.ctypes[i]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn ctypes(&self) -> &[CircleType] {
        &self.ctypes
    }

    pub fn set_sign(&mut self, i: usize, s: Sign) {
        self.signs[i] = s;
    }

    pub fn set_ctype(&mut self, i: usize, c: CircleType) {
        self.ctypes[i] = c;
    }

    /// Matrix entry `B_ij` (number of arrows i → j, negative for j → i).
    #[inline]
    pub fn b(&self, i: usize, j: usize) -> i32 {
        self.b[i * self.len() + j]
    }

    pub fn b_by_label(&self, i: &VertexLabel, j: &VertexLabel) -> Result<i32, QuiverError> {
        Ok(self.b(self.require(i)?, self.require(j)?))
    }

    pub fn matrix_row(&self, i: usize) -> &[i32] {
        let n = self.len();
        &self.b[i * n..(i + 1) * n]
    }

    /// Adds `mult` arrows `i → j` (negative `mult` adds arrows `j → i`).
    pub fn add_arrows(&mut self, i: usize, j: usize, mult: i32) {
        assert_ne!(i, j, "loops are not allowed");
        let n = self.len();
        self.b[i * n + j] += mult;
        self.b[j * n + i] -= mult;
    }

    /// Sets `B_ij = mult` and `B_ji = -mult`.
    pub fn set_arrows(&mut self, i: usize, j: usize, mult: i32) {
        assert_ne!(i, j, "loops are not allowed");
        let n = self.len();
        self.b[i * n + j] = mult;
        self.b[j * n + i] = -mult;
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.b(i, i) == 0 && (0..i).all(|j| self.b(i, j) == -self.b(j, i)))
    }

    /// Arrows as `(source, target, multiplicity)` with positive multiplicity.
    pub fn arrows(&self) -> Vec<(usize, usize, i32)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.b(i, j);
                if v > 0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Mutation at vertex index `k`, in place.
    pub fn mutate_in_place(&mut self, k: usize) {
        let n = self.len();
        let row_k: Vec<i32> = self.matrix_row(k).to_vec();
        for i in 0..n {
            let bik = self.b[i * n + k];
            if bik == 0 || i == k {
                continue;
            }
            for (j, &bkj) in row_k.iter().enumerate() {
                if j == k || bkj == 0 {
                    continue;
                }
                if bik > 0 && bkj > 0 {
                    self.b[i * n + j] += bik * bkj;
                } else if bik < 0 && bkj < 0 {
                    self.b[i * n + j] -= bik * bkj;
                }
            }
        }
        for j in 0..n {
            self.b[k * n + j] = -self.b[k * n + j];
            self.b[j * n + k] = -self.b[j * n + k];
        }
    }

    pub fn mutate(&self, k: &VertexLabel) -> Result<Self, QuiverError> {
        let idx = self.require(k)?;
        let mut q = self.clone();
        q.mutate_in_place(idx);
        Ok(q)
    }

    /// Checks that the vertices are pairwise non-adjacent and returns their
    /// indices in ascending order.
    pub fn commuting_indices(&self, set: &[VertexLabel]) -> Result<Vec<usize>, QuiverError> {
        let mut idx = set.iter().map(|l| self.require(l)).collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        for (p, &i) in idx.iter().enumerate() {
            for &j in &idx[p + 1..] {
                if self.b(i, j) != 0 {
                    return Err(QuiverError::NonCommutingSet(self.labels[i], self.labels[j]));
                }
            }
        }
        Ok(idx)
    }

    /// Mutation at a set of pairwise non-adjacent vertices.
    pub fn composite_mutate(&self, set: &[VertexLabel]) -> Result<Self, QuiverError> {
        let idx = self.commuting_indices(set)?;
        let mut q = self.clone();
        for k in idx {
            q.mutate_in_place(k);
        }
        Ok(q)
    }

    /// The quiver with every arrow reversed.
    pub fn opposite(&self) -> Self {
        let mut q = self.clone();
        for v in &mut q.b {
            *v = -*v;
        }
        q
    }

    /// Relabels vertices through a bijection `f` on the label set. The arrow
    /// `i → j` becomes `f(i) → f(j)` and annotations travel with their vertex.
    pub fn relabel<F>(&self, f: F) -> Result<Self, QuiverError>
    where
        F: Fn(&VertexLabel) -> VertexLabel,
    {
        let n = self.len();
        let target: Vec<usize> = self
            .labels
            .iter()
            .map(|l| {
                let img = f(l);
                self.index_of(&img).ok_or_else(|| {
                    QuiverError::InvalidPermutation(format!("{l} maps outside the vertex set"))
                })
            })
            .collect::<Result<_, _>>()?;
        let mut seen = vec![false; n];
        for &t in &target {
            if std::mem::replace(&mut seen[t], true) {
                return Err(QuiverError::InvalidPermutation("map is not injective".into()));
            }
        }
        let mut q = self.clone();
        for i in 0..n {
            q.signs[target[i]] = self.signs[i];
            q.ctypes[target[i]] = self.ctypes[i];
            for j in 0..n {
                q.b[target[i] * n + target[j]] = self.b(i, j);
            }
        }
        Ok(q)
    }

    /// Applies the column permutation `w` (`w[i-1]` is the image of copy `i`)
    /// to every vertex whose Dynkin vertex has exactly `w.len()` copies, then
    /// reverses all arrows if `opp`.
    pub fn transform(&self, w: &[usize], opp: bool) -> Result<Self, QuiverError> {
        let k = w.len();
        let mut seen = vec![false; k + 1];
        for &x in w {
            if x == 0 || x > k || std::mem::replace(&mut seen[x], true) {
                return Err(QuiverError::InvalidPermutation(format!("{w:?}")));
            }
        }
        let mut copies: FxHashMap<usize, usize> = FxHashMap::default();
        for l in &self.labels {
            let e = copies.entry(l.a).or_insert(0);
            *e = (*e).max(l.copy);
        }
        let q = self.relabel(|l| {
            if copies[&l.a] == k {
                VertexLabel { copy: w[l.copy - 1], ..*l }
            } else {
                *l
            }
        })?;
        Ok(if opp { q.opposite() } else { q })
    }

    /// True when both quivers have the same labels and the same matrix.
    pub fn same_matrix(&self, other: &Self) -> bool {
        self.labels == other.labels && self.b == other.b
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Q {\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!(
                "  v{i} [label=\"{l}[{},{}]\"];\n",
                self.signs[i].symbol(),
                self.ctypes[i].symbol()
            ));
        }
        for (i, j, m) in self.arrows() {
            for _ in 0..m {
                s.push_str(&format!("  v{i} -> v{j};\n"));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.len();
        let doc = QuiverJson {
            vertices: self.labels.iter().map(|l| [l.a, l.copy, l.row]).collect(),
            b: (0..n).map(|i| &self.b[i * n..(i + 1) * n]).collect(),
            sign: self.signs.iter().map(|s| s.symbol().to_string()).collect(),
            ctype: self.ctypes.iter().map(|c| c.symbol().to_string()).collect(),
        };
        serde_json::to_value(doc).expect("serialisable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(r: usize) -> VertexLabel {
        VertexLabel::new(1, 1, r)
    }

    #[test]
    fn sign_flip_on_single_arrow() {
        let q = AnnotatedQuiver::from_matrix(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let m = q.mutate(&v(1)).unwrap();
        assert_eq!(m, AnnotatedQuiver::from_matrix(&[vec![0, -1], vec![1, 0]]).unwrap());
    }

    #[test]
    fn path_mutation_creates_shortcut() {
        let q = AnnotatedQuiver::from_matrix(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]])
            .unwrap();
        let m = q.mutate(&v(2)).unwrap();
        // Arrows 2→1, 3→2 and 1→3.
        assert_eq!(m.b(1, 0), 1);
        assert_eq!(m.b(2, 1), 1);
        assert_eq!(m.b(0, 2), 1);
        assert!(m.is_skew_symmetric());
    }

    #[test]
    fn composite_rejects_adjacent_vertices() {
        let q = AnnotatedQuiver::from_matrix(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]])
            .unwrap();
        assert!(matches!(
            q.composite_mutate(&[v(1), v(2)]),
            Err(QuiverError::NonCommutingSet(_, _))
        ));
        assert_eq!(q.composite_mutate(&[]).unwrap(), q);
        assert_eq!(q.composite_mutate(&[v(3), v(1)]).unwrap(), q.mutate(&v(1)).unwrap().mutate(&v(3)).unwrap());
        assert!(matches!(q.mutate(&v(9)), Err(QuiverError::UnknownVertex(_))));
    }

    #[test]
    fn transform_identity_and_opposite() {
        let labels = vec![VertexLabel::new(1, 1, 1), VertexLabel::new(1, 2, 1), VertexLabel::new(2, 1, 1)];
        let mut q = AnnotatedQuiver::new(labels, vec![Sign::Plus; 3], vec![CircleType::Open; 3]).unwrap();
        q.add_arrows(0, 2, 1);
        q.add_arrows(2, 1, 2);
        assert_eq!(q.transform(&[1, 2], false).unwrap(), q);
        assert_eq!(q.transform(&[1, 2], true).unwrap().opposite(), q);
        let sw = q.transform(&[2, 1], false).unwrap();
        assert_eq!(sw.b(1, 2), 1);
        assert_eq!(sw.b(2, 0), 2);
        assert!(q.transform(&[1, 1], false).is_err());
    }

    #[test]
    fn exports() {
        let q = AnnotatedQuiver::from_matrix(&[vec![0, 2], vec![-2, 0]]).unwrap();
        let dot = q.to_dot();
        assert_eq!(dot.matches("v0 -> v1").count(), 2);
        assert!(dot.contains("(1,1,1)[+,o]"));
        let js = q.to_json();
        assert_eq!(js["B"][0][1], 2);
        assert_eq!(js["sign"][1], "+");
    }

    fn skew_matrix() -> impl Strategy<Value = Vec<Vec<i32>>> {
        (1usize..=12).prop_flat_map(|n| {
            prop::collection::vec(-3i32..=3, n * (n - 1) / 2).prop_map(move |upper| {
                let mut m = vec![vec![0; n]; n];
                let mut it = upper.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let x = it.next().unwrap();
                        m[i][j] = x;
                        m[j][i] = -x;
                    }
                }
                m
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn mutation_is_an_involution_and_keeps_skew_symmetry(m in skew_matrix(), k in 0usize..12) {
            let q = AnnotatedQuiver::from_matrix(&m).unwrap();
            let k = k % q.len();
            let once = q.mutate(&q.label(k)).unwrap();
            prop_assert!(once.is_skew_symmetric());
            prop_assert_eq!(once.mutate(&q.label(k)).unwrap(), q);
        }

        #[test]
        fn composite_mutation_is_order_independent(m in skew_matrix(), seed in any::<u64>()) {
            let q = AnnotatedQuiver::from_matrix(&m).unwrap();
            // Greedy independent set in a seed-dependent order.
            let n = q.len();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| (i as u64).wrapping_mul(seed | 1) % 97);
            let mut set: Vec<usize> = Vec::new();
            for i in order {
                if set.iter().all(|&j| q.b(i, j) == 0) {
                    set.push(i);
                }
            }
            let labels: Vec<VertexLabel> = set.iter().map(|&i| q.label(i)).collect();
            let composite = q.composite_mutate(&labels).unwrap();
            let mut folded = q.clone();
            for &i in set.iter().rev() {
                folded.mutate_in_place(i);
            }
            prop_assert_eq!(composite, folded);
        }
    }
}
