// SPDX-License-Identifier: MIT OR Apache-2.0

//! Quivers, mutation schedules and index embeddings.
//!
//! Vertices are labelled `(a, copy, row)` with `a` the 1-based Dynkin vertex.
//! A vertex with `d_a > 1` owns `d_a` columns (copies), each of length
//! `t_a·ℓ - 1`; a vertex with `d_a = 1` owns a single column of length
//! `t·ℓ - 1`.

mod embed;
mod rank2;
mod schedule;
mod tree;

pub use embed::{rank2_g_prime_copy, EmbedKind, Embedding};
pub use rank2::{compose, r_minus, r_plus, rank2_cartan, rank2_coloring, rank2_quiver, rank2_schedule, w_p};
pub use schedule::{build_schedule, Schedule};
pub use tree::{build_extended, build_quiver};

use crate::cartan::CartanError;
use crate::quiver::QuiverError;
use crate::tysystem::TyIndex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid sign/colour assignment: {0}")]
    InvalidColoring(String),
    #[error("batch is not pairwise non-adjacent: {0}")]
    NonCommutingSet(String),
    #[error("index {0} is not in the domain parity class")]
    ParityMismatch(TyIndex),
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Quiver(QuiverError),
}

impl From<QuiverError> for BuildError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::NonCommutingSet(a, b) => BuildError::NonCommutingSet(format!("{a} and {b}")),
            other => BuildError::Quiver(other),
        }
    }
}

/// Quiver, schedule and embedding data for a validated diagram.
#[derive(Debug, Clone)]
pub struct Built {
    pub quiver: crate::quiver::AnnotatedQuiver,
    pub schedule: Schedule,
}

/// Builds quiver and schedule for a diagram that already satisfies the
/// parity rules.
pub fn build(
    cd: &crate::cartan::CartanData,
    sc: &crate::cartan::SignColoring,
    level: i64,
) -> Result<Built, BuildError> {
    let quiver = build_quiver(cd, sc, level)?;
    let schedule = build_schedule(cd, sc, &quiver)?;
    Ok(Built { quiver, schedule })
}

/// Default sign/colour assignment: the rank-two convention when vertex 1 is
/// long and vertex 2 short, otherwise the one computed from the diagram.
pub fn standard_coloring(cd: &crate::cartan::CartanData) -> Result<crate::cartan::SignColoring, BuildError> {
    if cd.rank() == 2 && cd.c(0, 1) != 0 && cd.d(1) == 1 {
        return Ok(rank2_coloring(cd.d(0)));
    }
    Ok(cd.sign_color()?)
}

/// A buildable form of a tamely laced diagram.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// The diagram the quiver is built from: the input itself, or its
    /// extension when the input has no valid sign/colour assignment.
    pub data: crate::cartan::CartanData,
    pub coloring: crate::cartan::SignColoring,
    pub extension: Option<crate::cartan::ExtendedDiagram>,
    pub built: Built,
}

impl Prepared {
    /// True when some columns were halved by the extension; such quivers
    /// have no T/Y labelling in this crate.
    pub fn is_halved(&self) -> bool {
        self.extension.as_ref().is_some_and(|e| e.provenance.iter().any(|p| p.halved))
    }
}

/// Builds quiver and schedule for any tamely laced diagram, passing through
/// the extended diagram when the parity rules fail on the input.
pub fn prepare(cd: &crate::cartan::CartanData, level: i64) -> Result<Prepared, BuildError> {
    if let Ok(coloring) = standard_coloring(cd) {
        let built = build(cd, &coloring, level)?;
        return Ok(Prepared { data: cd.clone(), coloring, extension: None, built });
    }
    let ext = cd.extend_diagram()?;
    let coloring = ext.data.sign_color()?;
    let quiver = build_extended(&ext, &coloring, level)?;
    let schedule = build_schedule(&ext.data, &coloring, &quiver)?;
    Ok(Prepared { data: ext.data.clone(), coloring, extension: Some(ext), built: Built { quiver, schedule } })
}
