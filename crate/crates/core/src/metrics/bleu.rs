//! Sentence- and corpus-level BLEU with exponential smoothing.
//!
//! Scores are in `[0, 1]`. Sentence scoring uses the effective-order rule:
//! the geometric mean runs only over orders with a non-zero n-gram total.
//! Corpus scoring pools [`BleuStats`] over segments and always uses every
//! order up to `max_order`.

use std::collections::HashMap;
use std::ops::AddAssign;

use crate::corpus::{HypothesisSet, ScoreMatrix, TestSet};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::metrics::tokenize::{tokenize_intl, TokenizedSegment};

pub const MAX_SUPPORTED_ORDER: usize = 9;

// Matches the reference scorer's log(0) stand-in.
const LOG_ZERO: f64 = -9_999_999_999.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BleuConfig {
    pub max_order: usize,
    pub effective_order: bool,
}

impl BleuConfig {
    pub const fn sentence() -> Self {
        BleuConfig {
            max_order: 4,
            effective_order: true,
        }
    }

    pub const fn corpus() -> Self {
        BleuConfig {
            max_order: 4,
            effective_order: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if (1..=MAX_SUPPORTED_ORDER).contains(&self.max_order) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "max_order {} outside 1..={MAX_SUPPORTED_ORDER}",
                self.max_order
            )))
        }
    }
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig::sentence()
    }
}

/// Sufficient statistics for BLEU: clipped matches and totals per order,
/// plus hypothesis and reference lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl BleuStats {
    pub fn zero(max_order: usize) -> Self {
        BleuStats {
            matches: vec![0; max_order],
            totals: vec![0; max_order],
            hyp_len: 0,
            ref_len: 0,
        }
    }

    pub fn max_order(&self) -> usize {
        self.totals.len()
    }

    /// Applies the smoothed BLEU formula to these statistics.
    pub fn score(&self, effective_order: bool) -> f64 {
        if self.hyp_len == 0 {
            return 0.0;
        }
        let max_order = self.max_order();
        let mut log_precisions = Vec::with_capacity(max_order);
        let mut smooth = 1.0;
        for (&matches, &total) in self.matches.iter().zip(&self.totals) {
            if total == 0 {
                break;
            }
            let p = if matches == 0 {
                smooth *= 2.0;
                1.0 / (smooth * total as f64)
            } else {
                matches as f64 / total as f64
            };
            log_precisions.push(p.ln());
        }
        let order = if effective_order {
            log_precisions.len().max(1)
        } else {
            max_order
        };
        log_precisions.resize(max_order, LOG_ZERO);
        let bp = if self.hyp_len < self.ref_len {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        } else {
            1.0
        };
        let mean_log = log_precisions[..order].iter().sum::<f64>() / order as f64;
        bp * mean_log.exp()
    }
}

impl AddAssign<&BleuStats> for BleuStats {
    fn add_assign(&mut self, rhs: &BleuStats) {
        for (a, b) in self.matches.iter_mut().zip(&rhs.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&rhs.totals) {
            *a += b;
        }
        self.hyp_len += rhs.hyp_len;
        self.ref_len += rhs.ref_len;
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Clipped n-gram match counts and totals for one hypothesis/reference pair.
pub fn bleu_stats(hyp: &TokenizedSegment, reference: &TokenizedSegment, cfg: &BleuConfig) -> BleuStats {
    let mut stats = BleuStats::zero(cfg.max_order);
    let h = hyp.tokens();
    let r = reference.tokens();
    stats.hyp_len = h.len() as u64;
    stats.ref_len = r.len() as u64;
    for n in 1..=cfg.max_order {
        if h.len() < n {
            break;
        }
        stats.totals[n - 1] = (h.len() + 1 - n) as u64;
        let ref_counts = ngram_counts(r, n);
        stats.matches[n - 1] = ngram_counts(h, n)
            .into_iter()
            .map(|(gram, count)| count.min(ref_counts.get(gram).copied().unwrap_or(0)))
            .sum();
    }
    stats
}

/// Smoothed sentence BLEU of a raw hypothesis against a raw reference.
pub fn sentence_bleu(hyp: &str, reference: &str, cfg: &BleuConfig) -> f64 {
    sentence_bleu_tokens(&tokenize_intl(hyp), &tokenize_intl(reference), cfg)
}

/// Sentence BLEU on already tokenized input.
pub fn sentence_bleu_tokens(hyp: &TokenizedSegment, reference: &TokenizedSegment, cfg: &BleuConfig) -> f64 {
    if reference.is_empty() {
        return 0.0;
    }
    bleu_stats(hyp, reference, cfg).score(cfg.effective_order)
}

/// Pooled statistics over aligned hypothesis and reference lists.
pub fn corpus_stats<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R], cfg: &BleuConfig) -> Result<BleuStats> {
    if hyps.len() != refs.len() {
        return Err(Error::LengthMismatch {
            left: hyps.len(),
            right: refs.len(),
        });
    }
    cfg.validate()?;
    let mut pooled = BleuStats::zero(cfg.max_order);
    for (h, r) in hyps.iter().zip(refs) {
        pooled += &bleu_stats(&tokenize_intl(h.as_ref()), &tokenize_intl(r.as_ref()), cfg);
    }
    Ok(pooled)
}

/// Corpus BLEU: statistics summed over segments, then scored once.
pub fn corpus_bleu<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R], cfg: &BleuConfig) -> Result<f64> {
    Ok(corpus_stats(hyps, refs, cfg)?.score(cfg.effective_order))
}

/// Per-segment sentence BLEU for every system, as an N×k matrix named `bleu`.
pub fn score_matrix_bleu(testset: &TestSet, hyps: &HypothesisSet, cfg: &BleuConfig) -> Result<ScoreMatrix> {
    score_matrix_bleu_with(testset, hyps, cfg, Execution::default())
}

pub fn score_matrix_bleu_with(
    testset: &TestSet,
    hyps: &HypothesisSet,
    cfg: &BleuConfig,
    exec: Execution,
) -> Result<ScoreMatrix> {
    cfg.validate()?;
    let n = testset.len();
    if hyps.n_segments() != n {
        return Err(Error::RowCountMismatch {
            expected: n,
            actual: hyps.n_segments(),
        });
    }
    let k = hyps.n_systems();
    let refs = map_indexed(n, exec, |i| tokenize_intl(&testset.references()[i]));
    let scores = map_indexed(n * k, exec, |cell| {
        let (i, j) = (cell / k, cell % k);
        sentence_bleu_tokens(&tokenize_intl(hyps.get(i, j)), &refs[i], cfg)
    });
    ScoreMatrix::new("bleu", hyps.system_names().to_vec(), testset.ids().to_vec(), scores)
}
