//! Monte Carlo verification of the scaling laws.
//!
//! Experiments are ladders over a size list; replicas are embarrassingly
//! parallel and seeded by `(experiment tag, n, replica)`, and aggregation
//! folds in replica order, so results are bit-identical for any worker
//! count.

mod config;
mod crosscheck;
mod hard_edge;
mod ladder;
mod shape;
mod soft_edge;
pub mod stats;
mod summary;

pub use config::{DnRule, ExperimentConfig};
pub use crosscheck::{exceedance_crosscheck, pilot_threshold, CrosscheckResult};
pub use hard_edge::hard_edge_check;
pub use ladder::{replica_field_rng, LadderPoint, LadderResult, ReplicaRecord};
pub use shape::estimate_shape;
pub use soft_edge::{
    fast_soft_edge_sample, soft_edge_m, soft_edge_subcritical, soft_edge_supercritical,
    StripPolicy,
};
pub use summary::{summarize, SampleSummary};
