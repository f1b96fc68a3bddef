//! Variance-aware test sets for machine translation evaluation.
//!
//! Score every segment with every system, drop the segments on which
//! systems agree most, and check how system rankings on what remains
//! correlate with human judgements.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod filter;
pub mod metaeval;
pub mod metrics;
pub mod synthetic;

pub use corpus::{HumanScores, HypothesisSet, ScoreMatrix, SubsetIndex, TaggedCorpus, TestSet};
pub use error::{Error, Result};
pub use exec::Execution;
pub use filter::{filter_by_variance, instance_stats, FilterConfig, InstanceStats};
