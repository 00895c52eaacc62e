// SPDX-License-Identifier: MIT OR Apache-2.0

//! Generalized Cartan matrices: validation, symmetrisers, the Dynkin graph,
//! even blocks, sign/colour decompositions and bipartite doubling.
//!
//! Vertex indices are 0-based throughout this module; quiver labels use
//! 1-based Dynkin vertices.

use crate::quiver::Sign;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("not a generalized Cartan matrix: {0}")]
    NotCartan(String),
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("matrix is not tamely laced")]
    NotTamelyLaced,
    #[error("Dynkin diagram is not connected")]
    Decomposable,
    #[error("no valid sign/colour assignment: {0}")]
    NoValidColoring(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A validated symmetrizable generalized Cartan matrix together with its
/// minimal symmetrizer `D = diag(d_1, ..., d_r)`, `t = lcm(d)` and `t_a = t / d_a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanData {
    c: Vec<Vec<i64>>,
    d: Vec<i64>,
    t: i64,
    t_a: Vec<i64>,
}

/// Checks the Cartan axioms and computes the minimal symmetrizer.
///
/// The symmetrizer is found per connected component by fixing one vertex and
/// propagating the ratios `d_j / d_i = C_ij / C_ji` along edges; each
/// component is then scaled to a primitive integer vector.
pub fn validate_cartan(matrix: &[Vec<i64>]) -> Result<CartanData, CartanError> {
    let r = matrix.len();
    if r == 0 {
        return Err(CartanError::NotCartan("empty matrix".into()));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != r {
            return Err(CartanError::NotCartan(format!("row {} has length {}", i + 1, row.len())));
        }
        if row[i] != 2 {
            return Err(CartanError::NotCartan(format!("diagonal entry {} is {}", i + 1, row[i])));
        }
        for (j, &v) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            if v > 0 {
                return Err(CartanError::NotCartan(format!(
                    "positive off-diagonal entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if (v == 0) != (matrix[j][i] == 0) {
                return Err(CartanError::NotCartan(format!(
                    "entries ({}, {}) and ({}, {}) are not both zero",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    // Rational d values as (numerator, denominator), reduced.
    let mut ratio: Vec<Option<(i64, i64)>> = vec![None; r];
    let mut d = vec![0i64; r];
    for root in 0..r {
        if ratio[root].is_some() {
            continue;
        }
        ratio[root] = Some((1, 1));
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let (pn, pd) = ratio[i].unwrap();
            for j in 0..r {
                if j == i || matrix[i][j] == 0 {
                    continue;
                }
                // d_j = d_i * C_ij / C_ji
                let (n, dd) = reduce(pn * matrix[i][j], pd * matrix[j][i]);
                match ratio[j] {
                    None => {
                        ratio[j] = Some((n, dd));
                        component.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != (n, dd) => {
                        return Err(CartanError::NotSymmetrizable)
                    }
                    Some(_) => {}
                }
            }
        }
        let l = component.iter().fold(1i64, |acc, &i| acc.lcm(&ratio[i].unwrap().1));
        let mut g = 0i64;
        for &i in &component {
            let (n, dd) = ratio[i].unwrap();
            d[i] = n * (l / dd);
            g = g.gcd(&d[i]);
        }
        for &i in &component {
            d[i] /= g;
        }
    }
    let t = d.iter().fold(1i64, |acc, x| acc.lcm(x));
    let t_a = d.iter().map(|x| t / x).collect();
    Ok(CartanData { c: matrix.to_vec(), d, t, t_a })
}

fn reduce(n: i64, d: i64) -> (i64, i64) {
    let g = n.gcd(&d);
    let (n, d) = (n / g, d / g);
    if d < 0 {
        (-n, -d)
    } else {
        (n, d)
    }
}

impl CartanData {
    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn d(&self, a: usize) -> i64 {
        self.d[a]
    }

    pub fn ds(&self) -> &[i64] {
        &self.d
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn t_a(&self, a: usize) -> i64 {
        self.t_a[a]
    }

    /// `C_ij < -1` forces `d_i = 1` and `C_ji = -1`.
    pub fn is_tamely_laced(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| self.c[i][j] >= -1 || (self.d[i] == 1 && self.c[j][i] == -1)))
    }

    /// Vertices adjacent to `a`, ascending.
    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&b| b != a && self.c[a][b] != 0).collect()
    }

    pub fn dynkin(&self) -> DynkinGraph {
        let r = self.rank();
        let mut edges = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                if self.c[a][b] != 0 {
                    let mult = self.c[a][b].abs().max(self.c[b][a].abs());
                    let arrow = if mult > 1 {
                        Some(if self.d[a] > self.d[b] { (a, b) } else { (b, a) })
                    } else {
                        None
                    };
                    edges.push(DynkinEdge { a, b, mult, arrow });
                }
            }
        }
        DynkinGraph { d: self.d.clone(), edges }
    }

    pub fn is_indecomposable(&self) -> bool {
        let adj: Vec<Vec<usize>> = (0..self.rank()).map(|a| self.neighbors(a)).collect();
        components(&adj, &vec![true; self.rank()]).len() == 1
    }

    /// Even blocks, the shrunken diagram `X'` and their bipartiteness.
    pub fn analyze_blocks(&self) -> Result<BlockDecomposition, CartanError> {
        if !self.is_indecomposable() {
            return Err(CartanError::Decomposable);
        }
        let r = self.rank();
        let adj: Vec<Vec<usize>> = (0..r).map(|a| self.neighbors(a)).collect();
        let even: Vec<bool> = self.d.iter().map(|x| x % 2 == 0).collect();
        let even_blocks = components(&adj, &even);
        let mut block_of = vec![None; r];
        for (k, blk) in even_blocks.iter().enumerate() {
            for &a in blk {
                block_of[a] = Some(k);
            }
        }
        let block_bipartite = even_blocks
            .iter()
            .map(|blk| {
                let mut mask = vec![false; r];
                for &a in blk {
                    mask[a] = true;
                }
                two_coloring(&adj, &mask).is_some()
            })
            .collect();
        // Nodes of X': the non-even vertices and one node per block, ordered by
        // smallest original vertex.
        let mut nodes = Vec::new();
        let mut node_of = vec![0usize; r];
        for a in 0..r {
            match block_of[a] {
                None => {
                    node_of[a] = nodes.len();
                    nodes.push(ShrunkenNode::Vertex(a));
                }
                Some(k) if even_blocks[k][0] == a => {
                    let id = nodes.len();
                    nodes.push(ShrunkenNode::Block(k));
                    for &y in &even_blocks[k] {
                        node_of[y] = id;
                    }
                }
                Some(_) => {}
            }
        }
        let mut edges = Vec::new();
        for e in self.dynkin().edges {
            let (u, v) = (node_of[e.a], node_of[e.b]);
            if u != v {
                edges.push(ShrunkenEdge { u, v, a: e.a, b: e.b });
            }
        }
        let mut sadj = vec![Vec::new(); nodes.len()];
        for e in &edges {
            sadj[e.u].push(e.v);
            sadj[e.v].push(e.u);
        }
        let shrunken_bipartite = two_coloring(&sadj, &vec![true; nodes.len()]).is_some();
        Ok(BlockDecomposition {
            even_blocks,
            block_bipartite,
            block_of,
            shrunken: ShrunkenGraph { nodes, edges },
            shrunken_bipartite,
        })
    }

    /// The deterministic decomposition `I = I+ ⊔ I-` and colouring: vertex 0
    /// gets `+`, signs propagate along edges, and the lowest vertex of each
    /// even block gets α.
    pub fn sign_color(&self) -> Result<SignColoring, CartanError> {
        let r = self.rank();
        let mut signs: Vec<Option<Sign>> = vec![None; r];
        for root in 0..r {
            if signs[root].is_some() {
                continue;
            }
            signs[root] = Some(Sign::Plus);
            let mut queue = VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                let sa = signs[a].unwrap();
                for b in self.neighbors(a) {
                    let want = if self.d[a] % 2 == 1 && self.d[b] % 2 == 1 { sa.flip() } else { sa };
                    match signs[b] {
                        None => {
                            signs[b] = Some(want);
                            queue.push_back(b);
                        }
                        Some(s) if s != want => {
                            return Err(CartanError::NoValidColoring(format!(
                                "sign conflict between vertices {} and {}",
                                a + 1,
                                b + 1
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let adj: Vec<Vec<usize>> = (0..r).map(|a| self.neighbors(a)).collect();
        let even: Vec<bool> = self.d.iter().map(|x| x % 2 == 0).collect();
        let parts = two_coloring(&adj, &even).ok_or_else(|| {
            CartanError::NoValidColoring("an even block contains an odd cycle".into())
        })?;
        let colors = (0..r)
            .map(|a| even[a].then(|| if parts[a] { Color::Alpha } else { Color::Beta }))
            .collect();
        Ok(SignColoring { signs: signs.into_iter().map(Option::unwrap).collect(), colors })
    }

    /// Builds `X̃(C)`: doubles `X'` when it has an odd cycle (restoring the even
    /// blocks in each sheet) and then replaces every nonbipartite even block by
    /// its bipartite double.
    pub fn extend_diagram(&self) -> Result<ExtendedDiagram, CartanError> {
        let blocks = self.analyze_blocks()?;
        let r = self.rank();
        // Current diagram: vertex provenance plus a list of edges (u, v) on
        // current vertices, each carrying the original pair it copies.
        let mut prov: Vec<Provenance> =
            (0..r).map(|a| Provenance { original: a, sheets: Vec::new(), halved: false }).collect();
        let mut edges: Vec<(usize, usize)> =
            self.dynkin().edges.iter().map(|e| (e.a, e.b)).collect();

        if !blocks.shrunken_bipartite {
            let mut next_prov = Vec::with_capacity(2 * r);
            for p in &prov {
                for s in [Sign::Plus, Sign::Minus] {
                    let mut q = p.clone();
                    q.sheets.push(s);
                    next_prov.push(q);
                }
            }
            let mut next_edges = Vec::new();
            for &(u, v) in &edges {
                let same_block =
                    blocks.block_of[u].is_some() && blocks.block_of[u] == blocks.block_of[v];
                if same_block {
                    next_edges.push((2 * u, 2 * v));
                    next_edges.push((2 * u + 1, 2 * v + 1));
                } else {
                    next_edges.push((2 * u, 2 * v + 1));
                    next_edges.push((2 * u + 1, 2 * v));
                }
            }
            prov = next_prov;
            edges = next_edges;
        }

        // Nonbipartite even blocks of the current diagram.
        let n = prov.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let even: Vec<bool> = prov.iter().map(|p| self.d[p.original] % 2 == 0).collect();
        let mut doubled = vec![false; n];
        for blk in components(&adj, &even) {
            let mut mask = vec![false; n];
            for &a in &blk {
                mask[a] = true;
            }
            if two_coloring(&adj, &mask).is_none() {
                for a in blk {
                    doubled[a] = true;
                }
            }
        }
        if doubled.iter().any(|&x| x) {
            let mut new_index: Vec<[usize; 2]> = Vec::with_capacity(n);
            let mut next_prov = Vec::new();
            for (a, p) in prov.iter().enumerate() {
                if doubled[a] {
                    let i = next_prov.len();
                    for s in [Sign::Plus, Sign::Minus] {
                        let mut q = p.clone();
                        q.sheets.push(s);
                        q.halved = true;
                        next_prov.push(q);
                    }
                    new_index.push([i, i + 1]);
                } else {
                    new_index.push([next_prov.len(); 2]);
                    next_prov.push(p.clone());
                }
            }
            let mut next_edges = Vec::new();
            for &(u, v) in &edges {
                match (doubled[u], doubled[v]) {
                    (true, true) => {
                        next_edges.push((new_index[u][0], new_index[v][1]));
                        next_edges.push((new_index[u][1], new_index[v][0]));
                    }
                    (true, false) | (false, true) => {
                        let (x, y) = if doubled[u] { (u, v) } else { (v, u) };
                        next_edges.push((new_index[x][0], new_index[y][0]));
                        next_edges.push((new_index[x][1], new_index[y][0]));
                    }
                    (false, false) => next_edges.push((new_index[u][0], new_index[v][0])),
                }
            }
            prov = next_prov;
            edges = next_edges;
        }

        let m = prov.len();
        let mut c = vec![vec![0i64; m]; m];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(u, v) in &edges {
            let (ou, ov) = (prov[u].original, prov[v].original);
            c[u][v] = self.c[ou][ov];
            c[v][u] = self.c[ov][ou];
        }
        let data = validate_cartan(&c)?;
        debug_assert!(prov.iter().enumerate().all(|(i, p)| data.d(i) == self.d[p.original]));
        Ok(ExtendedDiagram { data, provenance: prov })
    }
}

/// Connected components of the subgraph induced by `mask`, each sorted and
/// the list ordered by smallest member.
fn components(adj: &[Vec<usize>], mask: &[bool]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !mask[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if mask[b] && !seen[b] {
                    seen[b] = true;
                    comp.push(b);
                    queue.push_back(b);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// BFS 2-colouring of the subgraph induced by `mask`; the smallest vertex of
/// each component gets `true`. `None` if some component has an odd cycle.
fn two_coloring(adj: &[Vec<usize>], mask: &[bool]) -> Option<Vec<bool>> {
    let n = adj.len();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if !mask[s] || side[s].is_some() {
            continue;
        }
        side[s] = Some(true);
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            let sa = side[a].unwrap();
            for &b in &adj[a] {
                if !mask[b] {
                    continue;
                }
                match side[b] {
                    None => {
                        side[b] = Some(!sa);
                        queue.push_back(b);
                    }
                    Some(sb) if sb == sa => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinEdge {
    pub a: usize,
    pub b: usize,
    /// `max(|C_ab|, |C_ba|)`.
    pub mult: i64,
    /// For multiple edges: `(from, to)` pointing from the larger `d` to the smaller.
    pub arrow: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinGraph {
    pub d: Vec<i64>,
    pub edges: Vec<DynkinEdge>,
}

impl DynkinGraph {
    pub fn is_tree(&self) -> bool {
        let n = self.d.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        self.edges.len() + 1 == n && components(&adj, &vec![true; n]).len() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShrunkenNode {
    Vertex(usize),
    Block(usize),
}

/// An edge of `X'`, remembering the original edge `a - b` it comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShrunkenEdge {
    pub u: usize,
    pub v: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShrunkenGraph {
    pub nodes: Vec<ShrunkenNode>,
    pub edges: Vec<ShrunkenEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub even_blocks: Vec<Vec<usize>>,
    pub block_bipartite: Vec<bool>,
    pub block_of: Vec<Option<usize>>,
    pub shrunken: ShrunkenGraph,
    pub shrunken_bipartite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "a", alias = "alpha")]
    Alpha,
    #[serde(rename = "b", alias = "beta")]
    Beta,
}

impl Color {
    pub fn other(self) -> Self {
        match self {
            Color::Alpha => Color::Beta,
            Color::Beta => Color::Alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignColoring {
    pub signs: Vec<Sign>,
    /// Defined exactly on the vertices with even `d_a`.
    pub colors: Vec<Option<Color>>,
}

impl SignColoring {
    /// Checks the three adjacency rules and that colours sit on even vertices.
    pub fn check(&self, cd: &CartanData) -> Result<(), CartanError> {
        let r = cd.rank();
        if self.signs.len() != r || self.colors.len() != r {
            return Err(CartanError::NoValidColoring("wrong number of entries".into()));
        }
        for a in 0..r {
            if (cd.d(a) % 2 == 0) != self.colors[a].is_some() {
                return Err(CartanError::NoValidColoring(format!(
                    "vertex {} must {}have a colour",
                    a + 1,
                    if cd.d(a) % 2 == 0 { "" } else { "not " }
                )));
            }
        }
        for e in cd.dynkin().edges {
            let (a, b) = (e.a, e.b);
            let both_odd = cd.d(a) % 2 == 1 && cd.d(b) % 2 == 1;
            if both_odd && self.signs[a] == self.signs[b] {
                return Err(CartanError::NoValidColoring(format!(
                    "odd neighbours {} and {} share a sign",
                    a + 1,
                    b + 1
                )));
            }
            if !both_odd && self.signs[a] != self.signs[b] {
                return Err(CartanError::NoValidColoring(format!(
                    "neighbours {} and {} need equal signs",
                    a + 1,
                    b + 1
                )));
            }
            if let (Some(x), Some(y)) = (self.colors[a], self.colors[b]) {
                if x == y {
                    return Err(CartanError::NoValidColoring(format!(
                        "even neighbours {} and {} share a colour",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Where a vertex of `X̃(C)` comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    /// Original vertex (0-based).
    pub original: usize,
    /// Sheets chosen by successive doublings, outermost first.
    pub sheets: Vec<Sign>,
    /// True for vertices of a doubled nonbipartite even block; their quiver
    /// columns keep only the odd-numbered copies.
    pub halved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtendedDiagram {
    pub data: CartanData,
    pub provenance: Vec<Provenance>,
}

impl ExtendedDiagram {
    pub fn is_identity(&self) -> bool {
        self.provenance.iter().enumerate().all(|(i, p)| p.original == i && p.sheets.is_empty())
    }

    /// Vertex name such as `4`, `2+` or `3-+` (1-based original index plus sheets).
    pub fn vertex_name(&self, i: usize) -> String {
        let p = &self.provenance[i];
        let mut s = (p.original + 1).to_string();
        for sh in &p.sheets {
            s.push(sh.symbol());
        }
        s
    }
}

/// JSON input accepted by the command line and the builder helpers:
/// `{"cartan": [[...]], "signs": ..., "colors": ...}` where `signs` is a list
/// such as `["+", "-"]` or an object `{"1": "+"}` keyed by 1-based vertex,
/// and `colors` likewise uses `"a"`/`"b"` (or `null` for odd vertices).
#[derive(Debug, Clone, Deserialize)]
pub struct CartanInput {
    pub cartan: Vec<Vec<i64>>,
    #[serde(default)]
    pub signs: Option<Assignment<Sign>>,
    #[serde(default)]
    pub colors: Option<Assignment<Option<Color>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Assignment<T> {
    List(Vec<T>),
    Map(std::collections::BTreeMap<String, T>),
}

impl<T: Clone> Assignment<T> {
    /// Overwrites entries of `base` (0-based) with the assignment.
    pub fn apply(&self, base: &mut [T]) -> Result<(), CartanError> {
        match self {
            Assignment::List(v) => {
                if v.len() != base.len() {
                    return Err(CartanError::InvalidInput(format!(
                        "expected {} entries, got {}",
                        base.len(),
                        v.len()
                    )));
                }
                base.clone_from_slice(v);
            }
            Assignment::Map(m) => {
                for (k, v) in m {
                    let idx: usize = k
                        .parse()
                        .ok()
                        .filter(|&i: &usize| i >= 1 && i <= base.len())
                        .ok_or_else(|| CartanError::InvalidInput(format!("bad vertex key {k:?}")))?;
                    base[idx - 1] = v.clone();
                }
            }
        }
        Ok(())
    }
}

impl CartanInput {
    pub fn parse(text: &str) -> Result<Self, CartanError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') {
            let cartan: Vec<Vec<i64>> = serde_json::from_str(text)
                .map_err(|e| CartanError::InvalidInput(e.to_string()))?;
            return Ok(CartanInput { cartan, signs: None, colors: None });
        }
        serde_json::from_str(text).map_err(|e| CartanError::InvalidInput(e.to_string()))
    }

    /// The default decomposition of `cd`, with any overrides applied and checked.
    pub fn coloring_for(&self, cd: &CartanData) -> Result<SignColoring, CartanError> {
        let mut sc = match cd.sign_color() {
            Ok(sc) => sc,
            Err(e) if self.signs.is_none() => return Err(e),
            Err(_) => SignColoring {
                signs: vec![Sign::Plus; cd.rank()],
                colors: cd.ds().iter().map(|d| (d % 2 == 0).then_some(Color::Alpha)).collect(),
            },
        };
        if let Some(s) = &self.signs {
            s.apply(&mut sc.signs)?;
        }
        if let Some(c) = &self.colors {
            c.apply(&mut sc.colors)?;
        }
        sc.check(cd)?;
        Ok(sc)
    }
}

/// Cartan matrix of a diagram given by symmetriser entries and edges
/// (0-based). Equal `d` gives a simple edge; otherwise the vertex with
/// `d = 1` carries the entry `-d` of its partner.
pub fn cartan_from_edges(d: &[i64], edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let r = d.len();
    let mut c = vec![vec![0i64; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j) in edges {
        if d[i] == d[j] {
            c[i][j] = -1;
            c[j][i] = -1;
        } else if d[i] < d[j] {
            c[i][j] = -(d[j] / d[i]);
            c[j][i] = -1;
        } else {
            c[j][i] = -(d[i] / d[j]);
            c[i][j] = -1;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(t: i64) -> Vec<Vec<i64>> {
        vec![vec![2, -1], vec![-t, 2]]
    }

    #[test]
    fn rank_two_symmetrizer() {
        for t in 1..=6 {
            let cd = validate_cartan(&m(t)).unwrap();
            assert_eq!(cd.ds(), &[t, 1]);
            assert_eq!(cd.t(), t);
            assert_eq!((cd.t_a(0), cd.t_a(1)), (1, t));
        }
        let one = validate_cartan(&[vec![2]]).unwrap();
        assert_eq!((one.ds(), one.t()), (&[1][..], 1));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(validate_cartan(&[vec![3]]), Err(CartanError::NotCartan(_))));
        assert!(matches!(
            validate_cartan(&[vec![2, 1], vec![-1, 2]]),
            Err(CartanError::NotCartan(_))
        ));
        assert!(matches!(
            validate_cartan(&[vec![2, 0], vec![-1, 2]]),
            Err(CartanError::NotCartan(_))
        ));
        // A triangle whose ratios multiply to 2 around the cycle.
        let bad = vec![vec![2, -1, -1], vec![-1, 2, -2], vec![-1, -1, 2]];
        assert_eq!(validate_cartan(&bad), Err(CartanError::NotSymmetrizable));
    }

    #[test]
    fn tame_lacing() {
        assert!(validate_cartan(&m(5)).unwrap().is_tamely_laced());
        assert!(validate_cartan(&[vec![2, -1], vec![-1, 2]]).unwrap().is_tamely_laced());
        assert!(!validate_cartan(&[vec![2, -2], vec![-2, 2]]).unwrap().is_tamely_laced());
        // d = (1, 2) with C_12 = -2 is tame; the transposed labelling is too.
        assert!(validate_cartan(&[vec![2, -2], vec![-1, 2]]).unwrap().is_tamely_laced());
    }

    fn fig6() -> CartanData {
        let d = [3, 3, 1, 2, 2, 1, 1];
        let e = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)];
        validate_cartan(&cartan_from_edges(&d, &e)).unwrap()
    }

    #[test]
    fn decomposition_example() {
        let cd = fig6();
        assert_eq!(cd.ds(), &[3, 3, 1, 2, 2, 1, 1]);
        let sc = cd.sign_color().unwrap();
        let expect: Vec<Sign> = "+-++++-"
            .chars()
            .map(|c| if c == '+' { Sign::Plus } else { Sign::Minus })
            .collect();
        assert_eq!(sc.signs, expect);
        assert_eq!(sc.colors[3], Some(Color::Alpha));
        assert_eq!(sc.colors[4], Some(Color::Beta));
        assert_eq!(sc.colors.iter().flatten().count(), 2);
        sc.check(&cd).unwrap();
    }

    #[test]
    fn small_colorings() {
        let single = validate_cartan(&[vec![2]]).unwrap().sign_color().unwrap();
        assert_eq!(single.signs, vec![Sign::Plus]);
        assert_eq!(single.colors, vec![None]);
        let a2 = validate_cartan(&[vec![2, -1], vec![-1, 2]]).unwrap().sign_color().unwrap();
        assert_eq!(a2.signs, vec![Sign::Plus, Sign::Minus]);
    }

    /// The six-vertex chain with double bonds at both ends and four even vertices.
    fn chain_with_even_middle() -> CartanData {
        let d = [1, 2, 2, 2, 2, 1];
        let e = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)];
        validate_cartan(&cartan_from_edges(&d, &e)).unwrap()
    }

    #[test]
    fn blocks_of_even_chain() {
        let b = chain_with_even_middle().analyze_blocks().unwrap();
        assert_eq!(b.even_blocks, vec![vec![1, 2, 3, 4]]);
        assert_eq!(b.shrunken.nodes.len(), 3);
        assert_eq!(b.shrunken.edges.len(), 2);
        assert!(b.shrunken_bipartite && b.block_bipartite[0]);
    }

    #[test]
    fn all_odd_tree_has_no_blocks() {
        let cd = validate_cartan(&cartan_from_edges(&[1, 3, 1], &[(0, 1), (1, 2)])).unwrap();
        let b = cd.analyze_blocks().unwrap();
        assert!(b.even_blocks.is_empty());
        assert_eq!(b.shrunken.nodes.len(), 3);
        assert!(cd.extend_diagram().unwrap().is_identity());
    }

    #[test]
    fn even_triangle_is_nonbipartite() {
        let cd = validate_cartan(&cartan_from_edges(&[2, 2, 2, 1], &[(0, 1), (1, 2), (2, 0), (0, 3)]))
            .unwrap();
        let b = cd.analyze_blocks().unwrap();
        assert_eq!(b.even_blocks.len(), 1);
        assert!(!b.block_bipartite[0]);
        assert!(cd.sign_color().is_err());
    }

    #[test]
    fn decomposable_is_rejected() {
        let cd = validate_cartan(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(cd.analyze_blocks(), Err(CartanError::Decomposable));
    }

    #[test]
    fn input_overrides() {
        let inp = CartanInput::parse(r#"{"cartan": [[2,-1],[-1,2]], "signs": {"1": "-", "2": "+"}}"#)
            .unwrap();
        let cd = validate_cartan(&inp.cartan).unwrap();
        let sc = inp.coloring_for(&cd).unwrap();
        assert_eq!(sc.signs, vec![Sign::Minus, Sign::Plus]);
        let bad = CartanInput::parse(r#"{"cartan": [[2,-1],[-1,2]], "signs": ["+", "+"]}"#).unwrap();
        assert!(bad.coloring_for(&cd).is_err());
        let bare = CartanInput::parse("[[2,-1],[-3,2]]").unwrap();
        assert_eq!(bare.cartan, m(3));
    }

    /// Random connected tamely laced diagrams: a random tree on `n` vertices,
    /// random `d` values and optional extra edges between equal-`d` vertices.
    pub(crate) fn random_diagram() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (2usize..=6)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(0usize..1000, n - 1),
                    prop::collection::vec(prop::sample::select(vec![1i64, 1, 2, 3, 4]), n),
                    prop::collection::vec((0usize..n, 0usize..n), 0..3),
                )
            })
            .prop_map(|(parents, mut d, extra)| {
                let mut edges = Vec::new();
                for (k, p) in parents.into_iter().enumerate() {
                    let child = k + 1;
                    let parent = p % child;
                    // Tame lacing: adjacent vertices have equal d or one of them is 1.
                    if d[child] != d[parent] && d[child] != 1 && d[parent] != 1 {
                        d[child] = 1;
                    }
                    edges.push((parent, child));
                }
                for (u, v) in extra {
                    if u != v && d[u] == d[v] && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
                        edges.push((u, v));
                    }
                }
                cartan_from_edges(&d, &edges)
            })
    }

    proptest! {
        #[test]
        fn symmetrized_matrix_is_symmetric(c in random_diagram()) {
            let cd = validate_cartan(&c).unwrap();
            let r = cd.rank();
            for i in 0..r {
                for j in 0..r {
                    prop_assert_eq!(cd.d(i) * cd.c(i, j), cd.d(j) * cd.c(j, i));
                }
            }
            let g = cd.ds().iter().fold(0i64, |g, x| g.gcd(x));
            prop_assert_eq!(g, 1);
        }

        #[test]
        fn tame_lacing_is_permutation_invariant(c in random_diagram(), shift in 0usize..6) {
            let r = c.len();
            let perm: Vec<usize> = (0..r).map(|i| (i + shift) % r).collect();
            let pc: Vec<Vec<i64>> =
                (0..r).map(|i| (0..r).map(|j| c[perm[i]][perm[j]]).collect()).collect();
            let a = validate_cartan(&c).unwrap().is_tamely_laced();
            let b = validate_cartan(&pc).unwrap().is_tamely_laced();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn extension_is_colorable(c in random_diagram()) {
            let cd = validate_cartan(&c).unwrap();
            prop_assume!(cd.is_tamely_laced());
            let ext = cd.extend_diagram().unwrap();
            prop_assert!(ext.data.is_tamely_laced());
            prop_assert!(ext.data.is_indecomposable());
            let blocks = ext.data.analyze_blocks().unwrap();
            prop_assert!(blocks.shrunken_bipartite);
            prop_assert!(blocks.block_bipartite.iter().all(|&b| b));
            let sc = ext.data.sign_color().unwrap();
            prop_assert!(sc.check(&ext.data).is_ok());
        }
    }
}
