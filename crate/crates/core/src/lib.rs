//! Følner sets and almost-invariant subspaces, made executable.
//!
//! The crate computes with finite-dimensional subspaces of `K^X` for a right
//! G-set `X`: their coordinate matroids, Monte Carlo Steiner points of the
//! matroid base polytopes, boundary ratios of sets and subspaces, and exact or
//! family-based isoperimetric profiles.

pub mod error;
pub mod exec;
pub mod folner;
pub mod groups;
pub mod linalg;
pub mod matroid;
pub mod profile;
pub mod rational;
pub mod steiner;
pub mod verify;

pub use error::{Error, Result};
