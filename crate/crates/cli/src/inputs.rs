//! Loading and cross-checking the inputs named on the command line.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use vat_core::corpus::{load_hypotheses_dir, load_score_matrix, load_testset};
use vat_core::metaeval::Aggregation;
use vat_core::metrics::{score_matrix_bleu, BleuConfig};
use vat_core::{HypothesisSet, ScoreMatrix, TestSet};

use crate::output::Provenance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricSource {
    /// Sentence BLEU computed from `--refs` and `--sys-dir`.
    Bleu,
    /// Segment scores read from `--scores`.
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AggArg {
    Mean,
    CorpusBleu,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Reference file, one segment per line.
    #[arg(long)]
    pub refs: Option<PathBuf>,
    /// Source file aligned with the references.
    #[arg(long)]
    pub src: Option<PathBuf>,
    /// Directory of system outputs, one file per system.
    #[arg(long = "sys-dir")]
    pub sys_dir: Option<PathBuf>,
    /// Segment-by-system score matrix (TSV).
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Where segment scores come from [default: file if --scores is given, else bleu].
    #[arg(long, value_enum)]
    pub metric: Option<MetricSource>,
}

/// Everything loaded from [`DataArgs`].
pub struct Data {
    pub testset: Option<TestSet>,
    pub hyps: Option<HypothesisSet>,
    pub metric: MetricSource,
    pub matrix: ScoreMatrix,
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str, why: &str) -> Result<&'a Path> {
    match path {
        Some(p) => Ok(p),
        None => bail!("{flag} is required {why}"),
    }
}

impl DataArgs {
    pub fn metric(&self) -> MetricSource {
        self.metric.unwrap_or(if self.scores.is_some() {
            MetricSource::File
        } else {
            MetricSource::Bleu
        })
    }

    pub fn echo(&self, prov: &mut Provenance) {
        prov.set_path("refs", self.refs.as_deref());
        prov.set_path("src", self.src.as_deref());
        prov.set_path("sys_dir", self.sys_dir.as_deref());
        prov.set_path("scores", self.scores.as_deref());
        prov.set(
            "metric_source",
            match self.metric() {
                MetricSource::Bleu => "bleu",
                MetricSource::File => "file",
            },
        );
    }

    pub fn load_testset(&self) -> Result<Option<TestSet>> {
        match &self.refs {
            Some(r) => Ok(Some(load_testset(r, self.src.as_deref())?)),
            None if self.src.is_some() => bail!("--src needs --refs"),
            None => Ok(None),
        }
    }

    pub fn load(&self) -> Result<Data> {
        let metric = self.metric();
        let testset = self.load_testset()?;
        let hyps = match (&self.sys_dir, &testset) {
            (Some(dir), Some(ts)) => Some(load_hypotheses_dir(dir, ts)?),
            (Some(_), None) => bail!("--sys-dir needs --refs"),
            (None, _) => None,
        };
        let matrix = match metric {
            MetricSource::Bleu => {
                let ts = testset.as_ref().context("--refs is required with --metric bleu")?;
                let hyps = hyps.as_ref().context("--sys-dir is required with --metric bleu")?;
                score_matrix_bleu(ts, hyps, &BleuConfig::sentence())?
            }
            MetricSource::File => {
                let path = required(&self.scores, "--scores", "with --metric file")?;
                let m = load_score_matrix(path)?;
                if let Some(ts) = &testset {
                    check_matrix_matches(&m, ts.len())?;
                }
                m
            }
        };
        Ok(Data {
            testset,
            hyps,
            metric,
            matrix,
        })
    }
}

/// An ingested matrix must cover segments `0..n` exactly.
pub fn check_matrix_matches(matrix: &ScoreMatrix, n: usize) -> Result<()> {
    if matrix.n_segments() != n {
        return Err(vat_core::Error::RowCountMismatch {
            expected: n,
            actual: matrix.n_segments(),
        }
        .into());
    }
    if matrix.parent_size() != n {
        bail!("score matrix segment ids must be 0..{n}");
    }
    Ok(())
}

impl Data {
    pub fn aggregation(&self, agg: Option<AggArg>) -> Result<Aggregation<'_>> {
        let agg = agg.unwrap_or(match self.metric {
            MetricSource::Bleu => AggArg::CorpusBleu,
            MetricSource::File => AggArg::Mean,
        });
        Ok(match agg {
            AggArg::Mean => Aggregation::Mean(&self.matrix),
            AggArg::CorpusBleu => Aggregation::CorpusBleu {
                testset: self.testset.as_ref().context("--agg corpus-bleu needs --refs")?,
                hyps: self.hyps.as_ref().context("--agg corpus-bleu needs --sys-dir")?,
                cfg: BleuConfig::corpus(),
            },
        })
    }
}
