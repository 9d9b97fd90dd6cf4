//! Combinatorics and exact symbolic machinery for strata of abelian differentials
//! restricted to the rational-tails locus.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: validation of stable graphs, canonical forms, automorphism counts and
//!   bounded enumeration.
//! * [`twist`]: twists and level functions on stable graphs, bi-colored and tri-colored
//!   level graphs, and the edge multiplicity `m(Γ̄)`.
//! * [`rt`]: decorated rational-tails tree classes (ψ, κ, boundary divisors δ_{0,I}),
//!   the forgetful pushforward, and the inductive stratum class `α(g, Z)`.
//! * [`coeff`]: the coefficient recursions for `a(g, z, n)`, the `u`/`w` sequences and
//!   the constants `a_g`.
//!
//! Heavy batch work goes through [`exec`], which runs on rayon when the `parallel`
//! feature is enabled and falls back to plain iteration otherwise.

pub mod coeff;
pub mod exec;
pub mod graph;
pub mod rational;
pub mod rt;
pub mod twist;

pub use coeff::{a_g, elliptic_count, odd_spin_count, u_closed, u_seq, w_seq, CoeffError, CoeffTable, Provenance};
pub use graph::{enumerate_stable_graphs, CanonicalForm, GraphError, StableGraph, Violation};
pub use rational::Rational;
pub use rt::{a_symbolic, alpha_rt, RtClass, RtError, Site, XiPoly};
pub use twist::{
    enumerate_bicolored, enumerate_tricolored, Anchor, DegreeRule, SplitReading, TwistError, TwistViolation,
    TwistedLevelGraph,
};
