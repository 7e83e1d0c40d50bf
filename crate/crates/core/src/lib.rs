//! Stochastic threshold group testing.
//!
//! A population of `n` items hides `d` defectives. A pooled test is negative
//! when the pool holds at most `l` defectives, positive when it holds at least
//! `u`, and random in between. This crate builds the randomized cross-product
//! pooling designs that identify the defective set from such tests, simulates
//! the gap channel, and decodes by matching empirical positive fractions
//! against exactly computed expectations.
//!
//! The main pieces:
//!
//! - [`model`]: problem instances, gap channels, seeded random streams.
//! - [`probmath`]: hypergeometric sums, threshold tables, parameter recommendation.
//! - [`design`]: divisions, reference groups, indicator families, test schedules.
//! - [`simulate`]: runs a schedule through the channel and stores outcomes.
//! - [`decoder`]: classification rules and the three end-to-end pipelines.
//! - [`oracle`]: brute-force enumeration used to certify the probability math.
//! - [`harness`]: seeded Monte Carlo experiments and their on-disk records.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod decoder;
pub mod design;
pub mod error;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod probmath;
pub mod simulate;

pub use decoder::{
    decode_adaptive, decode_linear, decode_nonadaptive, DecodeResult, DivisionStatus, ItemLabel,
    RefLabel,
};
pub use design::{DesignPlan, Schedule, TestKey};
pub use error::{Error, Result};
pub use model::{Algorithm, ChannelKind, Instance, GapChannel, Population, SeedStreams, Stream, TestPool};
pub use probmath::{recommend_params, DesignParams, Epsilons, Recommendation, ThresholdTable};
pub use simulate::OutcomeTable;
