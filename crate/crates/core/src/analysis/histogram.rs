//! Distribution of per-instance mean scores for preserved versus
//! filtered-out instances.

use serde::Serialize;

use crate::corpus::SubsetIndex;
use crate::error::{Error, Result};
use crate::filter::InstanceStats;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreHistogram {
    /// `bins + 1` equal-width edges over the observed `[min, max]` of `mu`.
    pub edges: Vec<f64>,
    pub preserved: Vec<usize>,
    pub filtered_out: Vec<usize>,
}

fn bin_of(value: f64, lo: f64, width: f64, bins: usize) -> usize {
    if width == 0.0 {
        return 0;
    }
    (((value - lo) / width).floor() as usize).min(bins - 1)
}

/// Histograms of `mu` for both groups; the maximum falls in the last bin.
pub fn score_histogram(stats: &[InstanceStats], subset: &SubsetIndex, bins: usize) -> Result<ScoreHistogram> {
    if bins < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 bins, got {bins}")));
    }
    if stats.iter().any(|s| s.id >= subset.parent_size()) {
        return Err(Error::InvalidSubset("statistics do not match the subset".into()));
    }
    let lo = stats.iter().map(|s| s.mu).fold(f64::INFINITY, f64::min);
    let hi = stats.iter().map(|s| s.mu).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut preserved = vec![0; bins];
    let mut filtered_out = vec![0; bins];
    for s in stats {
        let b = bin_of(s.mu, lo, width, bins);
        if subset.contains(s.id) {
            preserved[b] += 1;
        } else {
            filtered_out[b] += 1;
        }
    }
    if preserved.iter().sum::<usize>() == 0 {
        return Err(Error::EmptyGroup("preserved"));
    }
    if filtered_out.iter().sum::<usize>() == 0 {
        return Err(Error::EmptyGroup("filtered out"));
    }
    let edges = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect();
    Ok(ScoreHistogram {
        edges,
        preserved,
        filtered_out,
    })
}
