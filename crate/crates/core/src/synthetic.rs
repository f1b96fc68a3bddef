//! Seeded signal/noise score matrices with a known human ranking.
//!
//! Signal segments follow the human ratings; noise segments carry a
//! per-system offset unrelated to them, plus small i.i.d. jitter.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{HumanScores, ScoreMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixtureConfig {
    pub n_systems: usize,
    pub n_signal: usize,
    pub n_noise: usize,
    /// Slope of signal scores against the human rating.
    pub signal_gain: f64,
    /// Half-width of the uniform per-system offset on noise segments.
    pub noise_offset: f64,
    pub jitter_sd: f64,
}

impl Default for FixtureConfig {
    fn default() -> Self {
        FixtureConfig {
            n_systems: 8,
            n_signal: 80,
            n_noise: 120,
            signal_gain: 0.7,
            noise_offset: 0.25,
            jitter_sd: 0.02,
        }
    }
}

impl FixtureConfig {
    pub fn with_systems(n_systems: usize) -> Self {
        FixtureConfig {
            n_systems,
            ..Self::default()
        }
    }
}

pub fn system_name(j: usize) -> String {
    format!("sys{j:02}")
}

/// Builds the matrix and the human ratings. Signal rows come first and
/// noise rows after; scores are clamped to `[0, 1]`.
pub fn signal_noise_fixture(cfg: &FixtureConfig, seed: u64) -> Result<(ScoreMatrix, HumanScores)> {
    let k = cfg.n_systems;
    if k < 2 {
        return Err(Error::InsufficientSystems { required: 2, actual: k });
    }
    let n = cfg.n_signal + cfg.n_noise;
    if n == 0 {
        return Err(Error::InvalidConfig("fixture needs at least one segment".into()));
    }
    let jitter = Normal::new(0.0, cfg.jitter_sd).map_err(|e| Error::InvalidConfig(format!("jitter: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut human: Vec<f64> = (0..k).map(|j| j as f64 / (k - 1) as f64).collect();
    human.shuffle(&mut rng);
    let base: Vec<f64> = (0..n).map(|_| rng.random_range(0.35..0.5)).collect();
    let offset: Vec<f64> = (0..k)
        .map(|_| rng.random_range(-cfg.noise_offset..=cfg.noise_offset))
        .collect();

    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mean = if i < cfg.n_signal {
                        cfg.signal_gain * (human[j] - 0.5)
                    } else {
                        offset[j]
                    };
                    (base[i] + mean + jitter.sample(&mut rng)).clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();

    let names: Vec<String> = (0..k).map(system_name).collect();
    let matrix = ScoreMatrix::from_rows("synthetic", names.clone(), &rows)?;
    let human = HumanScores::new(names.into_iter().zip(human).collect())?;
    Ok((matrix, human))
}
