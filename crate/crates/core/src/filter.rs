//! Variance-aware instance selection.
//!
//! Each test instance gets the mean `mu` and the population standard
//! deviation `sigma` (divisor `k`) of its `k` system scores. The `lambda`
//! percent of instances with the lowest `sigma` are dropped; the rest form
//! the variance-aware subset.
//!
//! Selection rules, fixed so that every run agrees:
//! * `keep_count = N - floor(lambda * N / 100)`;
//! * ties on `sigma` are resolved in favour of the smaller segment id;
//! * kept ids are returned in ascending order.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{format_score, ScoreMatrix, SubsetIndex};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};

/// Default share of instances removed.
pub const DEFAULT_LAMBDA: f64 = 60.0;

pub const KEEP_RULE: &str = "keep = N - floor(lambda * N / 100)";
pub const TIE_RULE: &str = "equal sigma: smaller segment id kept first";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InstanceStats {
    pub id: usize,
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterConfig {
    pub lambda_percent: f64,
    pub min_systems: usize,
}

impl FilterConfig {
    pub fn new(lambda_percent: f64) -> Result<Self> {
        let cfg = FilterConfig {
            lambda_percent,
            ..FilterConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_percent.is_finite() && (0.0..100.0).contains(&self.lambda_percent)) {
            return Err(Error::InvalidLambda(self.lambda_percent));
        }
        if self.min_systems < 2 {
            return Err(Error::InvalidConfig("min_systems must be at least 2".into()));
        }
        Ok(())
    }
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            lambda_percent: DEFAULT_LAMBDA,
            min_systems: 2,
        }
    }
}

/// Number of instances kept out of `n` when `lambda` percent are dropped.
pub fn keep_count(n: usize, lambda_percent: f64) -> usize {
    let dropped = (lambda_percent * n as f64 / 100.0).floor() as usize;
    n - dropped.min(n)
}

/// One-pass (Welford) mean and population standard deviation.
fn mean_and_sigma(row: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in row.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    (mean, (m2.max(0.0) / row.len() as f64).sqrt())
}

/// Per-instance mean and standard deviation across systems.
pub fn instance_stats(matrix: &ScoreMatrix) -> Result<Vec<InstanceStats>> {
    instance_stats_with(matrix, 2, Execution::default())
}

pub fn instance_stats_with(matrix: &ScoreMatrix, min_systems: usize, exec: Execution) -> Result<Vec<InstanceStats>> {
    let k = matrix.n_systems();
    if k < min_systems.max(2) {
        return Err(Error::InsufficientSystems {
            required: min_systems.max(2),
            actual: k,
        });
    }
    Ok(map_indexed(matrix.n_segments(), exec, |i| {
        let (mu, sigma) = mean_and_sigma(matrix.row(i));
        InstanceStats {
            id: matrix.segment_ids()[i],
            mu,
            sigma,
        }
    }))
}

/// Instance ids ordered from most to least discriminative.
pub fn rank_by_sigma(stats: &[InstanceStats]) -> Vec<usize> {
    let mut order: Vec<&InstanceStats> = stats.iter().collect();
    order.sort_by(|a, b| b.sigma.total_cmp(&a.sigma).then(a.id.cmp(&b.id)));
    order.into_iter().map(|s| s.id).collect()
}

fn subset_from_ranking(ranking: &[usize], parent_size: usize, lambda: f64) -> Result<SubsetIndex> {
    let keep = keep_count(ranking.len(), lambda);
    if keep == 0 {
        return Err(Error::EmptyResult {
            lambda,
            n: ranking.len(),
        });
    }
    let mut kept = ranking[..keep].to_vec();
    kept.sort_unstable();
    SubsetIndex::new(parent_size, kept)
}

fn parent_size_of(stats: &[InstanceStats]) -> usize {
    stats.iter().map(|s| s.id + 1).max().unwrap_or(0)
}

/// Keeps the `keep_count` instances with the highest `sigma`.
pub fn filter_by_variance(stats: &[InstanceStats], cfg: &FilterConfig) -> Result<SubsetIndex> {
    cfg.validate()?;
    if stats.is_empty() {
        return Err(Error::EmptyResult {
            lambda: cfg.lambda_percent,
            n: 0,
        });
    }
    subset_from_ranking(&rank_by_sigma(stats), parent_size_of(stats), cfg.lambda_percent)
}

/// Filters at several percentages from one shared ranking, so the subsets
/// are nested. Results follow the order of `lambdas`.
pub fn sweep_lambda(matrix: &ScoreMatrix, lambdas: &[f64]) -> Result<Vec<(f64, SubsetIndex)>> {
    let stats = instance_stats(matrix)?;
    let ranking = rank_by_sigma(&stats);
    let parent = parent_size_of(&stats);
    lambdas
        .iter()
        .map(|&lambda| {
            FilterConfig::new(lambda)?;
            Ok((lambda, subset_from_ranking(&ranking, parent, lambda)?))
        })
        .collect()
}

/// Result of filtering with one random half of the systems.
#[derive(Clone, Debug, PartialEq)]
pub struct HoldoutSplit {
    pub subset: SubsetIndex,
    /// Systems whose scores decided the subset.
    pub half_a: Vec<String>,
    /// Held-out systems for evaluation.
    pub half_b: Vec<String>,
}

/// Splits the systems with a seeded shuffle, filters at the default
/// percentage using only the first half, and returns both halves.
pub fn holdout_split_filter(matrix: &ScoreMatrix, seed: u64) -> Result<HoldoutSplit> {
    holdout_split_filter_with(matrix, seed, DEFAULT_LAMBDA)
}

pub fn holdout_split_filter_with(matrix: &ScoreMatrix, seed: u64, lambda: f64) -> Result<HoldoutSplit> {
    let k = matrix.n_systems();
    if k < 4 {
        return Err(Error::InsufficientSystems { required: 4, actual: k });
    }
    let mut names = matrix.system_names().to_vec();
    names.sort();
    names.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut half_b = names.split_off(k.div_ceil(2));
    let mut half_a = names;
    half_a.sort();
    half_b.sort();
    let stats = instance_stats(&matrix.select_systems(&half_a)?)?;
    let subset = filter_by_variance(&stats, &FilterConfig::new(lambda)?)?;
    Ok(HoldoutSplit { subset, half_a, half_b })
}

/// `segment_id<TAB>mu<TAB>sigma` with six decimals.
pub fn stats_to_tsv(stats: &[InstanceStats]) -> String {
    let mut out = String::from("segment_id\tmu\tsigma\n");
    for s in stats {
        let _ = writeln!(out, "{}\t{}\t{}", s.id, format_score(s.mu), format_score(s.sigma));
    }
    out
}
