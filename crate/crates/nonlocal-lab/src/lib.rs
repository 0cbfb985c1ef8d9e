//! # nonlocal-lab
//!
//! A desk-scale numerical laboratory for nonlocal games: games, quantum
//! strategies, and correlations are explicit finite-dimensional values, and
//! every identity that is checkable in finite dimensions is checked.
//!
//! The pieces:
//!
//! - [`game`] — finite games, imitation classification, zero supports
//! - [`linalg`] — dense complex matrices, deterministic Hermitian
//!   eigendecomposition, projections/PVMs, projection meets, cyclic subspaces
//! - [`strategy`] — tensor, commuting, and deterministic strategies and the
//!   correlations they induce
//! - [`correlation`] — the probability tensor with non-signalling, perfect,
//!   and leak predicates
//! - [`witness`] — induced projections, residuals of the perfect-strategy
//!   identities, trace checks over operator words, word-reversal checks, and
//!   scaling scans over strategy families
//! - [`construct`] — densities and generator images to correlations, GNS by
//!   purification, and explicit tensor realizations
//! - [`membership`] — non-signalling feasibility by a deterministic phase-1
//!   simplex, exhaustive classical search, and seesaw value bounds
//! - [`corpus`] — canonical games and strategies plus seeded random instances
//!
//! ## Runnable examples
//!
//! One example per capability, under `examples/`:
//!
//! ```bash
//! cargo run --example games_and_corpus
//! cargo run --example strategies_to_correlations
//! cargo run --example witness_residuals
//! cargo run --example epsilon_scaling
//! cargo run --example cyclic_identities
//! cargo run --example trace_to_strategy
//! cargo run --example ns_polytope
//! cargo run --example chsh_seesaw
//! ```
//!
//! ## Command line
//!
//! The `nonlocal-lab` binary exposes the same operations over JSON files;
//! see the crate README for the subcommand list and exit-code contract.

// indexed loops are the house style for the dense matrix kernels
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod construct;
pub mod corpus;
pub mod correlation;
pub mod error;
pub mod game;
pub mod linalg;
pub mod membership;
pub mod strategy;
pub mod witness;

pub use error::{Error, Result};

/// Default validation tolerance, relative to Frobenius norm per dimension.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Default eigenvalue threshold factor for projection meets: the meet keeps
/// eigenvectors of the sum with eigenvalue at least `n - MEET_EIG_TOL * n`.
pub const MEET_EIG_TOL: f64 = 1e-7;

/// Default cap on enumerated word lengths.
pub const DEFAULT_WORD_CAP: usize = 4;
