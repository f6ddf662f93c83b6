//! Strictly increasing paths through Bernoulli-marked lattices, the particle
//! processes coupled to them, and Monte Carlo verification of their scaling
//! laws.
//!
//! The crate is organized around one reproducibility contract: every random
//! environment is a pure function of `(master_seed, stream_id, site)`, so
//! any number of consumers can read the same environment and every reported
//! number is replayable from its seed material.
//!
//! - [`fields`] generates the environments (Bernoulli marks, geometric
//!   weights in two shift conventions).
//! - [`passage`] evaluates longest increasing paths `L`, last-passage times
//!   `G`, the greedy patient strategy, and the closed-form shape functions.
//! - [`particles`] evolves the R-process, discrete TASEP with backward
//!   update, the fragmentation process, and the coupled left/right marked
//!   processes, and extracts jump times `tau`.
//! - [`identities`] verifies the exact pathwise identities tying all of the
//!   above together; it is the oracle layer for everything statistical.
//! - [`montecarlo`] runs the desk-scale experiments: limit shape, soft edge
//!   in both regimes (with a thin-strip fast sampler), hard edge, and
//!   cross-estimator checks.
//!
//! The companion book under `book/` walks through the model and each module
//! with runnable snippets; those snippets compile as doc-tests of the
//! `blip-book` crate.

pub mod error;
pub mod fields;
pub mod identities;
pub mod montecarlo;
pub mod particles;
pub mod passage;

pub use error::{Error, Result};
