// SPDX-License-Identifier: MIT OR Apache-2.0

//! Mutation runs along the schedule and relation checks on the labelled
//! variables.
//!
//! A run starts from the initial seed at step 0 and applies batch `n` to go
//! from step `n` to `n + 1`; steps below 0 are reached by applying the same
//! batches backwards, since composite mutation is an involution. At each
//! step the variables sitting at mutation points are recorded under their
//! T-index (through `g`) and Y-index (through `g'`).

use crate::builder::{build, rank2_quiver, w_p, BuildError, Built, EmbedKind, Embedding, Schedule};
use crate::cartan::{CartanData, SignColoring};
use crate::poly::{RationalFunction, SemifieldElement, Universe};
use crate::quiver::{AnnotatedQuiver, VertexLabel};
use crate::seed::{Mode, Seed, SeedError};
use crate::tysystem::{TyError, TyIndex, TySystem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Ty(#[from] TyError),
    #[error("mutation point {0} has no index label")]
    Unlabelled(String),
}

/// What a run tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    /// Cluster variables with all coefficients set to 1.
    Trivial,
    /// Coefficients only.
    Semifield,
    /// Cluster variables and coefficients together.
    WithCoefficients,
}

impl RunMode {
    fn seed_mode(self) -> Mode {
        match self {
            RunMode::Trivial => Mode::Trivial,
            RunMode::Semifield => Mode::CoefficientsOnly,
            RunMode::WithCoefficients => Mode::WithCoefficients,
        }
    }

    fn tracks_x(self) -> bool {
        self != RunMode::Semifield
    }

    fn tracks_y(self) -> bool {
        self != RunMode::Trivial
    }
}

/// Inclusive range of time indices `n = t·u`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    pub fn symmetric(radius: i64) -> Self {
        Window { lo: -radius, hi: radius }
    }

    /// One full period in each direction.
    pub fn default_for(t: i64) -> Self {
        Self::symmetric(2 * t)
    }

    pub fn empty() -> Self {
        Window { lo: 1, hi: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub window: Window,
    pub mode: RunMode,
    /// Largest allowed size of a single variable, in polynomial terms.
    pub budget: Option<usize>,
}

/// Everything recorded along a run.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub cd: CartanData,
    pub sc: SignColoring,
    pub level: i64,
    pub mode: RunMode,
    pub window: Window,
    pub universe: Arc<Universe>,
    pub schedule: Schedule,
    pub initial: Seed,
    pub labeled_x: BTreeMap<TyIndex, RationalFunction>,
    pub labeled_y: BTreeMap<TyIndex, SemifieldElement>,
    /// `Q(n)` for every step that was reached.
    pub quivers: BTreeMap<i64, AnnotatedQuiver>,
    /// The budget stopped the run before every requested label was seen.
    pub budget_hit: bool,
}

impl RunTrace {
    fn embedding(&self, kind: EmbedKind) -> Embedding {
        Embedding::new(self.cd.clone(), self.sc.clone(), self.level, kind, self.schedule.clone())
    }
}

fn entry_size(seed: &Seed, k: usize) -> usize {
    let xs = seed.xs().get(k).map_or(0, |x| x.num().term_count() + x.den().term_count());
    xs.max(seed.y(k).term_count())
}

struct Recorder<'a> {
    window: Window,
    needed_x: BTreeSet<TyIndex>,
    needed_y: BTreeSet<TyIndex>,
    cd: &'a CartanData,
    g: Embedding,
    g_prime: Embedding,
    schedule: &'a Schedule,
    labeled_x: BTreeMap<TyIndex, RationalFunction>,
    labeled_y: BTreeMap<TyIndex, SemifieldElement>,
    quivers: BTreeMap<i64, AnnotatedQuiver>,
}

impl Recorder<'_> {
    fn t_label(&self, label: &VertexLabel, s: i64) -> Result<TyIndex, VerifyError> {
        self.g.inverse(label, s).map_err(|_| VerifyError::Unlabelled(format!("{label} at step {s}")))
    }

    /// Labels of the seed just before batch `s` is applied.
    fn before(&mut self, seed: &Seed, s: i64) -> Result<(), VerifyError> {
        self.quivers.insert(s, seed.quiver().clone());
        for label in self.schedule.batch(s) {
            let k = seed.quiver().index_of(label).expect("schedule vertices belong to the quiver");
            if !self.needed_x.is_empty() {
                let idx = self.t_label(label, s)?;
                if self.needed_x.contains(&idx) {
                    self.labeled_x.insert(idx, seed.x(k).clone());
                }
            }
            if !self.needed_y.is_empty() {
                let idx =
                    self.g_prime.inverse(label, s).map_err(|_| VerifyError::Unlabelled(format!("{label} at step {s}")))?;
                if self.window.contains(idx.n) || self.needed_y.contains(&idx) {
                    self.labeled_y.insert(idx, seed.y(k).clone());
                }
            }
        }
        Ok(())
    }

    /// Labels of the seed just after batch `s`: a variable exchanged at step
    /// `s` stays put until its next mutation point, `2·d_a` steps later.
    fn after(&mut self, seed: &Seed, s: i64) -> Result<(), VerifyError> {
        if self.needed_x.is_empty() {
            return Ok(());
        }
        for label in self.schedule.batch(s) {
            let k = seed.quiver().index_of(label).expect("schedule vertices belong to the quiver");
            let idx = self.t_label(label, s)?;
            let idx = idx.shifted(2 * self.cd.d(idx.a));
            if self.needed_x.contains(&idx) {
                self.labeled_x.insert(idx, seed.x(k).clone());
            }
        }
        Ok(())
    }
}

/// Centres `(a, m, n)` whose left-hand indices `n ∓ d_a` both lie in the
/// window and in the domain of `emb`.
fn relation_centres(cd: &CartanData, level: i64, window: Window, emb: &Embedding) -> Vec<TyIndex> {
    let mut out = Vec::new();
    if window.is_empty() {
        return out;
    }
    for a in 0..cd.rank() {
        let d = cd.d(a);
        for m in 1..cd.t_a(a) * level {
            for n in window.lo + d..=window.hi - d {
                let c = TyIndex::new(a, m, n);
                if emb.in_domain(&c.shifted(-d)) && emb.in_domain(&c.shifted(d)) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Every label that a relation centred in the window refers to. Right-hand
/// factors of short-vertex relations can sit outside the window.
fn needed_labels(cd: &CartanData, level: i64, window: Window, emb: &Embedding) -> BTreeSet<TyIndex> {
    let ty = TySystem::new(cd.clone(), level).expect("level checked by the build");
    let mut out = BTreeSet::new();
    for c in relation_centres(cd, level, window, emb) {
        match emb.kind() {
            EmbedKind::G => {
                let rel = ty.t_relation(c).expect("centre in range");
                out.extend(rel.lhs);
                out.extend(rel.unit_term);
                out.extend(rel.product_term.into_iter().map(|(i, _)| i));
            }
            EmbedKind::GPrime => {
                let rel = ty.y_relation(c).expect("centre in range");
                out.extend(rel.lhs);
                out.extend(rel.numerator.into_iter().map(|(i, _)| i));
                out.extend(rel.denominator);
            }
        }
    }
    out
}

/// The range of steps a run must visit so that every requested label is
/// seen either just before or just after a mutation.
fn steps_needed(cd: &CartanData, window: Window, needed_x: &BTreeSet<TyIndex>, needed_y: &BTreeSet<TyIndex>) -> (i64, i64) {
    let (mut lo, mut hi) = (0, 0);
    if window.is_empty() {
        return (lo, hi);
    }
    if !needed_y.is_empty() {
        lo = lo.min(window.lo);
        hi = hi.max(window.hi);
    }
    for idx in needed_y {
        lo = lo.min(idx.n);
        hi = hi.max(idx.n);
    }
    for idx in needed_x {
        let d = cd.d(idx.a);
        let (s0, s1) = (idx.n - d, idx.n + d);
        let s = if s0 >= 0 || (s1 > 0 && -s0 <= s1) { s0 } else { s1 };
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

/// Runs the schedule of `cd` with the given sign/colour assignment.
pub fn run_with(cd: &CartanData, sc: &SignColoring, level: i64, config: RunConfig) -> Result<RunTrace, VerifyError> {
    let built = build(cd, sc, level)?;
    let window = config.window;
    let initial = Seed::initial(built.quiver.clone(), config.mode.seed_mode());
    let universe = initial.universe().clone();
    let g = Embedding::new(cd.clone(), sc.clone(), level, EmbedKind::G, built.schedule.clone());
    let g_prime = Embedding::new(cd.clone(), sc.clone(), level, EmbedKind::GPrime, built.schedule.clone());
    let needed_x = if config.mode.tracks_x() { needed_labels(cd, level, window, &g) } else { BTreeSet::new() };
    let needed_y = if config.mode.tracks_y() { needed_labels(cd, level, window, &g_prime) } else { BTreeSet::new() };
    let (lo, hi) = steps_needed(cd, window, &needed_x, &needed_y);
    let mut rec = Recorder {
        window,
        needed_x,
        needed_y,
        cd,
        g,
        g_prime,
        schedule: &built.schedule,
        labeled_x: BTreeMap::new(),
        labeled_y: BTreeMap::new(),
        quivers: BTreeMap::new(),
    };
    let over = |seed: &Seed, batch: &[VertexLabel]| {
        config.budget.is_some_and(|b| {
            batch.iter().any(|l| entry_size(seed, seed.quiver().index_of(l).expect("known vertex")) > b)
        })
    };

    let mut budget_hit = false;
    let mut seed = initial.clone();
    for s in 0..=hi {
        rec.before(&seed, s)?;
        seed.composite_mutate_in_place(built.schedule.batch(s))?;
        if over(&seed, built.schedule.batch(s)) {
            budget_hit = true;
            break;
        }
        rec.after(&seed, s)?;
    }
    let mut seed = initial.clone();
    for s in (lo..0).rev() {
        rec.after(&seed, s)?;
        seed.composite_mutate_in_place(built.schedule.batch(s))?;
        if over(&seed, built.schedule.batch(s)) {
            budget_hit = true;
            break;
        }
        rec.before(&seed, s)?;
    }

    let (labeled_x, labeled_y, quivers) = (rec.labeled_x, rec.labeled_y, rec.quivers);
    Ok(RunTrace {
        cd: cd.clone(),
        sc: sc.clone(),
        level,
        mode: config.mode,
        window,
        universe,
        schedule: built.schedule,
        initial,
        labeled_x,
        labeled_y,
        quivers,
        budget_hit,
    })
}

/// Runs the schedule with the default sign/colour assignment and no budget.
pub fn run(cd: &CartanData, level: i64, window: Window, mode: RunMode) -> Result<RunTrace, VerifyError> {
    let sc = crate::builder::standard_coloring(cd)?;
    run_with(cd, &sc, level, RunConfig { window, mode, budget: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "budget exceeded")]
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub relation: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub budget_exceeded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub summary: Summary,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn new(check: &str, entries: Vec<ReportEntry>) -> Self {
        let mut summary = Summary { checked: entries.len(), ..Summary::default() };
        for e in &entries {
            match e.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::BudgetExceeded => summary.budget_exceeded += 1,
            }
        }
        Report { check: check.to_string(), summary, entries }
    }

    /// No entry failed. Budget-exceeded entries do not count as failures.
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{}: {} checked, {} passed, {} failed, {} budget exceeded\n",
            self.check, s.checked, s.passed, s.failed, s.budget_exceeded
        );
        for e in self.entries.iter().filter(|e| e.status != Status::Pass) {
            let tag = if e.status == Status::Fail { "FAIL" } else { "SKIP" };
            out.push_str(&format!("  {tag} {}\n", e.relation));
        }
        out
    }
}

/// Runs `f` on a rayon pool capped by `CLUSTER_TY_THREADS` when it is set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("CLUSTER_TY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    match cap {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        None => f(),
    }
}

enum Outcome {
    Checked { ok: bool, lhs: String, rhs: String },
    Missing(TyIndex),
}

fn product<'a>(
    items: impl IntoIterator<Item = (TyIndex, u32)>,
    table: &'a BTreeMap<TyIndex, RationalFunction>,
    nvars: usize,
) -> Result<RationalFunction, TyIndex> {
    let mut acc = RationalFunction::one(nvars);
    for (idx, e) in items {
        let v = table.get(&idx).ok_or(idx)?;
        acc = acc.mul(&v.pow(e as i32).expect("cluster variables are nonzero"));
    }
    Ok(acc)
}

fn centres(trace: &RunTrace, kind: EmbedKind) -> Vec<TyIndex> {
    relation_centres(&trace.cd, trace.level, trace.window, &trace.embedding(kind))
}

fn build_report(check: &str, trace: &RunTrace, items: Vec<(TyIndex, Outcome)>) -> Report {
    let entries = items
        .into_iter()
        .map(|(c, outcome)| match outcome {
            Outcome::Checked { ok, lhs, rhs } => ReportEntry {
                relation: format!("{check} at {c}"),
                status: if ok { Status::Pass } else { Status::Fail },
                lhs,
                rhs,
            },
            Outcome::Missing(idx) => ReportEntry {
                relation: format!("{check} at {c}"),
                status: if trace.budget_hit { Status::BudgetExceeded } else { Status::Fail },
                lhs: String::new(),
                rhs: format!("missing label {idx}"),
            },
        })
        .collect();
    Report::new(check, entries)
}

/// Checks every T-relation whose left-hand labels lie in the window. In
/// trivial mode this is the T-system itself; with coefficients it is the
/// dressed form `x(u-d)x(u+d) = y/(1+y)·∏x^G + 1/(1+y)·x_{m-1}x_{m+1}`.
pub fn verify_t(trace: &RunTrace) -> Report {
    let name = match trace.mode {
        RunMode::WithCoefficients => "dressed T-relation",
        _ => "T-relation",
    };
    if !trace.mode.tracks_x() {
        return Report::new(name, Vec::new());
    }
    let ty = TySystem::new(trace.cd.clone(), trace.level).expect("level checked by the run");
    let nv = trace.universe.len();
    let u = &trace.universe;
    let items: Vec<(TyIndex, Outcome)> = with_thread_cap(|| {
        centres(trace, EmbedKind::G)
            .into_par_iter()
            .map(|c| {
                let rel = ty.t_relation(c).expect("centre in range");
                let outcome = (|| -> Result<Outcome, TyIndex> {
                    let lhs = product(rel.lhs.iter().map(|&i| (i, 1)), &trace.labeled_x, nv)?;
                    let unit = product(rel.unit_term.iter().map(|&i| (i, 1)), &trace.labeled_x, nv)?;
                    let prod = product(rel.product_term.iter().copied(), &trace.labeled_x, nv)?;
                    let rhs = match trace.mode {
                        RunMode::WithCoefficients => {
                            let (yn, yd) = trace.labeled_y.get(&c).ok_or(c)?.representation();
                            let plus = RationalFunction::from_polynomial(yn.add(yd));
                            prod.mul_poly(yn).add(&unit.mul_poly(yd)).div(&plus).expect("1 + y is nonzero")
                        }
                        _ => prod.add(&unit),
                    };
                    Ok(Outcome::Checked { ok: lhs == rhs, lhs: lhs.to_text(u), rhs: rhs.to_text(u) })
                })();
                (c, outcome.unwrap_or_else(Outcome::Missing))
            })
            .collect()
    });
    build_report(name, trace, items)
}

/// Checks every Y-relation
/// `y(u-d)y(u+d) = ∏(1+y)^e / ∏(1+y^{-1})` whose left-hand labels lie in
/// the window, and then that the recorded coefficients reproduce the initial
/// `y_i` through the inverse-map product formula.
pub fn verify_y(trace: &RunTrace) -> Report {
    if !trace.mode.tracks_y() {
        return Report::new("Y-relation", Vec::new());
    }
    let ty = TySystem::new(trace.cd.clone(), trace.level).expect("level checked by the run");
    let u = &trace.universe;
    let items: Vec<(TyIndex, Outcome)> = with_thread_cap(|| {
        centres(trace, EmbedKind::GPrime)
            .into_par_iter()
            .map(|c| {
                let rel = ty.y_relation(c).expect("centre in range");
                let get = |i: &TyIndex| trace.labeled_y.get(i).ok_or(*i);
                let outcome = (|| -> Result<Outcome, TyIndex> {
                    let lhs = get(&rel.lhs[0])?.mul(get(&rel.lhs[1])?);
                    let mut rhs = SemifieldElement::one(u.len());
                    for (i, e) in &rel.numerator {
                        rhs = rhs.mul(&get(i)?.one_plus().pow(*e as i32));
                    }
                    for i in &rel.denominator {
                        rhs = rhs.div(&get(i)?.inv().one_plus());
                    }
                    Ok(Outcome::Checked {
                        ok: lhs == rhs,
                        lhs: lhs.factored_text(u),
                        rhs: rhs.factored_text(u),
                    })
                })();
                (c, outcome.unwrap_or_else(Outcome::Missing))
            })
            .collect()
    });
    let mut report = build_report("Y-relation", trace, items);
    report.entries.extend(inverse_map_entries(trace));
    Report::new("Y-relation", report.entries)
}

/// For each initial vertex `i`, let `u_i ≤ 0` be its last mutation point
/// at or before step 0. Then `y_i = y(u_i)^{-1} ∏(1+y_j(v))/∏(1+y_j(v)^{-1})`,
/// over the mutation points `(j, v)` with `u_i < v < 0` and `B_ji(v) < 0`
/// (numerator) or `B_ji(v) > 0` (denominator), counted with multiplicity.
fn inverse_map_entries(trace: &RunTrace) -> Vec<ReportEntry> {
    let q0 = trace.initial.quiver();
    let g_prime = trace.embedding(EmbedKind::GPrime);
    let u = &trace.universe;
    let period = 2 * trace.cd.t();
    let mut out = Vec::new();
    'vertices: for (i, label) in q0.labels().iter().enumerate() {
        let Some(ui) = (-period..=0).rev().find(|&s| trace.schedule.is_mutation_point(label, s)) else {
            continue;
        };
        if !trace.window.contains(ui) || !trace.quivers.contains_key(&ui) {
            continue;
        }
        let lookup = |l: &VertexLabel, s: i64| {
            g_prime.inverse(l, s).ok().and_then(|idx| trace.labeled_y.get(&idx))
        };
        let Some(start) = lookup(label, ui) else { continue };
        let mut value = start.inv();
        if ui == 0 {
            value = start.clone();
        }
        for v in ui + 1..0 {
            let Some(q) = trace.quivers.get(&v) else { continue 'vertices };
            for l in trace.schedule.batch(v) {
                let j = q.index_of(l).expect("known vertex");
                let b = q.b(j, i);
                let Some(y) = lookup(l, v) else { continue 'vertices };
                if b < 0 {
                    value = value.mul(&y.one_plus().pow(-b));
                } else if b > 0 {
                    value = value.div(&y.inv().one_plus().pow(b));
                }
            }
        }
        let initial = trace.initial.y(i);
        out.push(ReportEntry {
            relation: format!("inverse map at {label}"),
            status: if &value == initial { Status::Pass } else { Status::Fail },
            lhs: initial.factored_text(u),
            rhs: value.factored_text(u),
        });
    }
    out
}

/// Checks that the `2t` batches bring `Q(0)` back to itself. For the
/// rank-two quiver it also compares every intermediate `Q(p/t)` with the
/// permuted copy `w_p(Q(0))`, taken opposite for odd `p`.
pub fn verify_periodicity(cd: &CartanData, sc: &SignColoring, level: i64) -> Result<Report, VerifyError> {
    let built = build(cd, sc, level)?;
    periodicity_of(&built, cd.t(), level)
}

/// [`verify_periodicity`] for an already built quiver and schedule, such as
/// one obtained from an extended diagram.
pub fn periodicity_of(built: &Built, t: i64, level: i64) -> Result<Report, VerifyError> {
    let mut entries = Vec::new();
    let mut q = built.quiver.clone();
    let rank2 = rank2_quiver(t, level).ok().filter(|r| r.labels() == q.labels() && r.same_matrix(&q));
    for p in 1..=2 * t {
        match q.composite_mutate(built.schedule.batch(p - 1)) {
            Ok(next) => q = next,
            Err(e) => {
                entries.push(ReportEntry {
                    relation: format!("batch {}", p - 1),
                    status: Status::Fail,
                    lhs: String::new(),
                    rhs: e.to_string(),
                });
                return Ok(Report::new("periodicity", entries));
            }
        }
        if let Some(r) = &rank2 {
            let expect = r.transform(&w_p(t as usize, p as usize), p % 2 == 1).map_err(BuildError::from)?;
            entries.push(ReportEntry {
                relation: format!("Q({p}/{t}) = w_{p}(Q(0)){}", if p % 2 == 1 { " opposite" } else { "" }),
                status: if q.same_matrix(&expect) { Status::Pass } else { Status::Fail },
                lhs: String::new(),
                rhs: String::new(),
            });
        }
    }
    entries.push(ReportEntry {
        relation: "Q(2) = Q(0)".into(),
        status: if q.same_matrix(&built.quiver) { Status::Pass } else { Status::Fail },
        lhs: format!("{} arrows", q.arrows().len()),
        rhs: format!("{} arrows", built.quiver.arrows().len()),
    });
    Ok(Report::new("periodicity", entries))
}
