//! Slow, obviously-correct reference computations used to check `strata-core`.
//!
//! Nothing here shares code with the main crate: graphs are multiplicity matrices
//! deduplicated by trying every vertex permutation, level graphs come from scanning all
//! level functions and a box of twists, and ψ integrals use the string and dilaton
//! equations directly.

pub mod graphs;
pub mod intersect;
pub mod levels;

pub use graphs::{stable_graphs, PlainGraph};
pub use intersect::{genus0, genus1, Frac};
pub use levels::{level_graphs, LevelGraph, Rule};
