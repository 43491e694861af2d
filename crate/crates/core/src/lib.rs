//! Orbit-method toolkit for the 7-dimensional nilpotent Lie group N7.
//!
//! The crate is layered bottom-up:
//!
//! - [`lie`]: exact structure constants, BCH group law, coadjoint action.
//! - [`orbits`]: skew forms, stabilizers, polarizations, layers, invariants.
//! - [`topology`]: limit sets of orbit sequences and witness checks.
//! - [`reps`]: test functions, induced-representation kernels, operator norms.
//! - [`ncdl`]: box partitions and the layer-passing approximants with their
//!   convergence reports.

pub mod error;
pub mod lie;
pub mod ncdl;
pub mod orbits;
pub mod reps;
pub mod rule;
pub mod scalar;
pub mod topology;

pub use error::{Error, Result};
pub use lie::{Algebra, StructureConstants};
pub use scalar::Rational;
