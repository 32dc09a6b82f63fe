//! Growing controllable networks.
//!
//! A library for growing undirected graphs by controllability-preserving
//! whiskering operators, verifying that controllability is in fact preserved
//! (PBH tests against a Kalman-rank oracle), choosing attachment nodes that
//! maximize algebraic connectivity (exhaustive search, a convex relaxation
//! solved by projected supergradient ascent, and a Fiedler-vector
//! perturbation heuristic), and checking the supermodularity-derived lower
//! bounds on the controllability Gramian trace.
//!
//! Module map:
//! * [`graph`] — Laplacian construction, validation and the growth operators.
//! * [`spectral`] — symmetric eigendecomposition and everything spectral.
//! * [`control`] — PBH controllability tests and the eigenvalue maps of the
//!   whiskering operators.
//! * [`bounds`] — trace-power supermodularity checks and Gramian trace bounds.
//! * [`optimize`] — attachment-node optimizers and the growth loop.

pub mod bounds;
pub mod control;
pub mod graph;
pub mod optimize;
pub mod spectral;

pub use graph::{Laplacian, NodeSet};
