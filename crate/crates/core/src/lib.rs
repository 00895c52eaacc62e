// SPDX-License-Identifier: MIT OR Apache-2.0

//! Cluster-algebra realisations of restricted T-systems and Y-systems for
//! tamely laced Cartan matrices.
//!
//! The crate builds the annotated quiver `Q_ℓ(C)` attached to a Cartan matrix
//! and level `ℓ`, its periodic composite-mutation schedule, and the maps that
//! label mutation points by T/Y-system indices `(a, m, u)`. Running the
//! schedule on a seed with exact rational-function entries lets the
//! [`verify`] module check every T- and Y-relation in a finite time window.
//!
//! Module overview:
//! - [`cartan`]: validation, symmetrisers, Dynkin graph, even blocks, doubling.
//! - [`poly`]: exact polynomial, rational-function and semifield arithmetic.
//! - [`quiver`]: skew-symmetric matrices with vertex annotations and mutation.
//! - [`seed`]: cluster seeds with universal-semifield coefficients.
//! - [`tysystem`]: index sets, relations, parity predicates.
//! - [`builder`]: quiver construction, mutation schedules and embeddings.
//! - [`verify`]: mutation runs and relation checks with JSON reports.

pub mod builder;
pub mod cartan;
pub mod poly;
pub mod quiver;
pub mod seed;
pub mod tysystem;
pub mod verify;
