//! System-level meta-evaluation: aggregate metric scores per system and
//! correlate them with human ratings, on the full test set or a subset.

pub mod correlation;

use serde::Serialize;

use crate::corpus::{HumanScores, HypothesisSet, ScoreMatrix, SubsetIndex, TestSet};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::filter::{holdout_split_filter_with, HoldoutSplit, DEFAULT_LAMBDA};
use crate::metrics::{corpus_bleu, BleuConfig};

pub use correlation::{fractional_ranks, kendall_tau_b, pearson, spearman};

pub const KENDALL_VARIANT: &str = "tau-b";
pub const TAG_ORIGINAL: &str = "original";
pub const TAG_VAT: &str = "vat";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregationMode {
    Mean,
    CorpusBleu,
}

impl AggregationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AggregationMode::Mean => "mean",
            AggregationMode::CorpusBleu => "corpus-bleu",
        }
    }
}

/// Where system-level scores come from.
#[derive(Clone, Copy, Debug)]
pub enum Aggregation<'a> {
    /// Mean of per-segment scores over the kept segments.
    Mean(&'a ScoreMatrix),
    /// Corpus BLEU over the kept segments.
    CorpusBleu {
        testset: &'a TestSet,
        hyps: &'a HypothesisSet,
        cfg: BleuConfig,
    },
}

impl Aggregation<'_> {
    pub fn mode(&self) -> AggregationMode {
        match self {
            Aggregation::Mean(_) => AggregationMode::Mean,
            Aggregation::CorpusBleu { .. } => AggregationMode::CorpusBleu,
        }
    }

    pub fn metric_name(&self) -> &str {
        match self {
            Aggregation::Mean(m) => m.metric_name(),
            Aggregation::CorpusBleu { .. } => "bleu",
        }
    }
}

/// One aggregate score per system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemScores {
    pub metric_name: String,
    pub subset_tag: String,
    pub mode: AggregationMode,
    pub scores: Vec<(String, f64)>,
}

impl SystemScores {
    pub fn get(&self, system: &str) -> Option<f64> {
        self.scores.iter().find(|(n, _)| n == system).map(|&(_, s)| s)
    }
}

pub fn aggregate_system_scores(
    source: &Aggregation<'_>,
    subset: &SubsetIndex,
    subset_tag: &str,
) -> Result<SystemScores> {
    aggregate_system_scores_with(source, subset, subset_tag, Execution::default())
}

pub fn aggregate_system_scores_with(
    source: &Aggregation<'_>,
    subset: &SubsetIndex,
    subset_tag: &str,
    exec: Execution,
) -> Result<SystemScores> {
    if subset.is_empty() {
        return Err(Error::EmptyGroup("subset"));
    }
    let scores = match *source {
        Aggregation::Mean(matrix) => {
            let rows = subset
                .kept()
                .iter()
                .map(|&id| {
                    matrix.position_of(id).ok_or(Error::IdOutOfRange {
                        id,
                        parent_size: matrix.parent_size(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let count = rows.len() as f64;
            matrix
                .system_names()
                .iter()
                .enumerate()
                .map(|(j, name)| {
                    let sum: f64 = rows.iter().map(|&i| matrix.get(i, j)).sum();
                    (name.clone(), sum / count)
                })
                .collect()
        }
        Aggregation::CorpusBleu { testset, hyps, cfg } => {
            if subset.parent_size() != testset.len() {
                return Err(Error::InvalidSubset(format!(
                    "subset parent size {} does not match test set size {}",
                    subset.parent_size(),
                    testset.len()
                )));
            }
            let refs: Vec<&str> = subset
                .kept()
                .iter()
                .map(|&i| testset.references()[i].as_str())
                .collect();
            let per_system = map_indexed(hyps.n_systems(), exec, |j| {
                let column = hyps.column(j);
                let sys: Vec<&str> = subset.kept().iter().map(|&i| column[i].as_str()).collect();
                corpus_bleu(&sys, &refs, &cfg)
            });
            hyps.system_names()
                .iter()
                .cloned()
                .zip(per_system)
                .map(|(name, score)| score.map(|s| (name, s)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(SystemScores {
        metric_name: source.metric_name().to_owned(),
        subset_tag: subset_tag.to_owned(),
        mode: source.mode(),
        scores,
    })
}

/// Correlations of one metric on one subset against human ratings.
/// Signed values and their absolute values are both kept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetaEvalReport {
    pub metric: String,
    pub subset_tag: String,
    pub mode: AggregationMode,
    pub n_systems: usize,
    pub pearson: f64,
    pub kendall_tau_b: f64,
    pub spearman: f64,
    pub abs_pearson: f64,
    pub abs_kendall_tau_b: f64,
    pub abs_spearman: f64,
    pub kendall_variant: &'static str,
    pub systems: Vec<String>,
    /// Systems present on only one side of the join.
    pub dropped_systems: Vec<String>,
}

/// Inner-joins system scores with human ratings (restricted to `only` when
/// given) and computes the three correlations. Joined systems are sorted by
/// name so that the result does not depend on input order.
pub fn evaluate(scores: &SystemScores, human: &HumanScores, only: Option<&[String]>) -> Result<MetaEvalReport> {
    let wanted = |name: &str| only.is_none_or(|names| names.iter().any(|n| n == name));
    let mut joined: Vec<(&str, f64, f64)> = Vec::new();
    let mut dropped: Vec<String> = Vec::new();
    for (name, metric) in &scores.scores {
        if !wanted(name) {
            continue;
        }
        match human.get(name) {
            Some(h) => joined.push((name, *metric, h)),
            None => dropped.push(name.clone()),
        }
    }
    for (name, _) in human.entries() {
        if wanted(name) && scores.get(name).is_none() {
            dropped.push(name.clone());
        }
    }
    if joined.len() < 2 {
        return Err(Error::InsufficientSystems {
            required: 2,
            actual: joined.len(),
        });
    }
    joined.sort_by(|a, b| a.0.cmp(b.0));
    dropped.sort();
    let metric: Vec<f64> = joined.iter().map(|j| j.1).collect();
    let human_scores: Vec<f64> = joined.iter().map(|j| j.2).collect();
    let r = pearson(&metric, &human_scores)?;
    let tau = kendall_tau_b(&metric, &human_scores)?;
    let rho = spearman(&metric, &human_scores)?;
    Ok(MetaEvalReport {
        metric: scores.metric_name.clone(),
        subset_tag: scores.subset_tag.clone(),
        mode: scores.mode,
        n_systems: joined.len(),
        pearson: r,
        kendall_tau_b: tau,
        spearman: rho,
        abs_pearson: r.abs(),
        abs_kendall_tau_b: tau.abs(),
        abs_spearman: rho.abs(),
        kendall_variant: KENDALL_VARIANT,
        systems: joined.iter().map(|j| j.0.to_owned()).collect(),
        dropped_systems: dropped,
    })
}

/// Reports on the full test set and on the variance-aware subset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub original: MetaEvalReport,
    pub vat: MetaEvalReport,
}

impl Comparison {
    pub fn pearson_gain(&self) -> f64 {
        self.vat.pearson - self.original.pearson
    }
}

fn parent_size(source: &Aggregation<'_>) -> usize {
    match source {
        Aggregation::Mean(m) => m.parent_size(),
        Aggregation::CorpusBleu { testset, .. } => testset.len(),
    }
}

pub fn compare_original_vs_vat(source: &Aggregation<'_>, vat: &SubsetIndex, human: &HumanScores) -> Result<Comparison> {
    compare_restricted(source, vat, human, None)
}

fn compare_restricted(
    source: &Aggregation<'_>,
    vat: &SubsetIndex,
    human: &HumanScores,
    only: Option<&[String]>,
) -> Result<Comparison> {
    let all = SubsetIndex::all(parent_size(source))?;
    let original = aggregate_system_scores(source, &all, TAG_ORIGINAL)?;
    let filtered = aggregate_system_scores(source, vat, TAG_VAT)?;
    Ok(Comparison {
        original: evaluate(&original, human, only)?,
        vat: evaluate(&filtered, human, only)?,
    })
}

/// Outcome of the held-out-systems protocol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub seed: u64,
    pub lambda: f64,
    pub half_a: Vec<String>,
    pub half_b: Vec<String>,
    pub comparison: Comparison,
}

/// Filters with a random half of the systems and evaluates the other half,
/// using `matrix` for both filtering and (mean) aggregation.
pub fn robustness_report(matrix: &ScoreMatrix, human: &HumanScores, seed: u64) -> Result<RobustnessReport> {
    robustness_report_with(matrix, &Aggregation::Mean(matrix), human, seed, DEFAULT_LAMBDA)
}

pub fn robustness_report_with(
    filter_matrix: &ScoreMatrix,
    source: &Aggregation<'_>,
    human: &HumanScores,
    seed: u64,
    lambda: f64,
) -> Result<RobustnessReport> {
    let HoldoutSplit { subset, half_a, half_b } = holdout_split_filter_with(filter_matrix, seed, lambda)?;
    let comparison = compare_restricted(source, &subset, human, Some(&half_b))?;
    Ok(RobustnessReport {
        seed,
        lambda,
        half_a,
        half_b,
        comparison,
    })
}

/// Absolute correlations averaged over several reports (e.g. one per
/// translation direction).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AveragedCorrelations {
    pub n_reports: usize,
    pub abs_pearson: f64,
    pub abs_kendall_tau_b: f64,
    pub abs_spearman: f64,
    pub averaging: &'static str,
}

pub fn average_abs(reports: &[MetaEvalReport]) -> Result<AveragedCorrelations> {
    if reports.is_empty() {
        return Err(Error::EmptyGroup("reports"));
    }
    let n = reports.len() as f64;
    let avg = |f: fn(&MetaEvalReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    Ok(AveragedCorrelations {
        n_reports: reports.len(),
        abs_pearson: avg(|r| r.abs_pearson),
        abs_kendall_tau_b: avg(|r| r.abs_kendall_tau_b),
        abs_spearman: avg(|r| r.abs_spearman),
        averaging: "mean of absolute values",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix() -> ScoreMatrix {
        ScoreMatrix::from_rows("m", vec!["s1".into(), "s2".into()], &[vec![0.2, 0.6], vec![0.4, 0.8]]).unwrap()
    }

    #[test]
    fn mean_aggregation() {
        let m = matrix();
        let all = aggregate_system_scores(&Aggregation::Mean(&m), &SubsetIndex::all(2).unwrap(), "original").unwrap();
        assert!((all.get("s1").unwrap() - 0.3).abs() < 1e-15);
        assert!((all.get("s2").unwrap() - 0.7).abs() < 1e-15);
        let first =
            aggregate_system_scores(&Aggregation::Mean(&m), &SubsetIndex::new(2, vec![0]).unwrap(), "vat").unwrap();
        assert_eq!(first.get("s1"), Some(0.2));
        assert_eq!(first.get("s2"), Some(0.6));
    }

    #[test]
    fn corpus_bleu_identity() {
        let ts = TestSet::new(vec!["a b c d".into(), "e f g h".into()], None).unwrap();
        let hyps = HypothesisSet::from_systems(
            vec![
                ("x".into(), ts.references().to_vec()),
                ("y".into(), ts.references().to_vec()),
            ],
            2,
        )
        .unwrap();
        let src = Aggregation::CorpusBleu {
            testset: &ts,
            hyps: &hyps,
            cfg: BleuConfig::corpus(),
        };
        let s = aggregate_system_scores(&src, &SubsetIndex::all(2).unwrap(), "original").unwrap();
        assert!(s.scores.iter().all(|(_, v)| *v == 1.0));
        assert_eq!(s.mode, AggregationMode::CorpusBleu);
    }

    #[test]
    fn human_equal_to_means_gives_unit_correlation() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                (0..4)
                    .map(|j| ((i * 3 + j * 7) % 10) as f64 / 10.0 + j as f64 * 0.05)
                    .collect()
            })
            .collect();
        let names: Vec<String> = (0..4).map(|j| format!("sys{j}")).collect();
        let m = ScoreMatrix::from_rows("m", names.clone(), &rows).unwrap();
        let all = aggregate_system_scores(&Aggregation::Mean(&m), &SubsetIndex::all(10).unwrap(), "o").unwrap();
        let human = HumanScores::new(all.scores.clone()).unwrap();
        let vat = SubsetIndex::new(10, vec![1, 3, 5]).unwrap();
        let cmp = compare_original_vs_vat(&Aggregation::Mean(&m), &vat, &human).unwrap();
        assert!((cmp.original.pearson - 1.0).abs() < 1e-12);
        assert_eq!(cmp.original.subset_tag, "original");
        assert_eq!(cmp.vat.subset_tag, "vat");
    }

    #[test]
    fn join_drops_and_sign() {
        let scores = SystemScores {
            metric_name: "m".into(),
            subset_tag: "original".into(),
            mode: AggregationMode::Mean,
            scores: vec![
                ("a".into(), 0.1),
                ("b".into(), 0.2),
                ("c".into(), 0.3),
                ("z".into(), 0.0),
            ],
        };
        let human = HumanScores::parse("c\t-3\nb\t-2\na\t-1\nq\t5\n").unwrap();
        let r = evaluate(&scores, &human, None).unwrap();
        assert_eq!(r.n_systems, 3);
        assert_eq!(r.dropped_systems, vec!["q".to_string(), "z".to_string()]);
        assert!((r.pearson + 1.0).abs() < 1e-12);
        assert!((r.abs_pearson - 1.0).abs() < 1e-12);
        assert_eq!(r.kendall_variant, "tau-b");
    }

    #[test]
    fn too_few_joined_systems() {
        let scores = SystemScores {
            metric_name: "m".into(),
            subset_tag: "original".into(),
            mode: AggregationMode::Mean,
            scores: vec![("a".into(), 0.1)],
        };
        let human = HumanScores::parse("a\t1\n").unwrap();
        assert!(matches!(
            evaluate(&scores, &human, None),
            Err(Error::InsufficientSystems { .. })
        ));
    }

    #[test]
    fn averaging_uses_absolute_values() {
        let scores = SystemScores {
            metric_name: "m".into(),
            subset_tag: "original".into(),
            mode: AggregationMode::Mean,
            scores: vec![("a".into(), 0.1), ("b".into(), 0.2), ("c".into(), 0.3)],
        };
        let up = evaluate(&scores, &HumanScores::parse("a\t1\nb\t2\nc\t3\n").unwrap(), None).unwrap();
        let down = evaluate(&scores, &HumanScores::parse("a\t3\nb\t2\nc\t1\n").unwrap(), None).unwrap();
        let avg = average_abs(&[up, down]).unwrap();
        assert!((avg.abs_pearson - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn report_ignores_input_order(
            values in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..10),
            rotate in 0usize..10,
        ) {
            let named: Vec<(String, f64, f64)> =
                values.iter().enumerate().map(|(i, &(m, h))| (format!("s{i}"), m, h)).collect();
            let build = |order: &[(String, f64, f64)]| {
                let scores = SystemScores {
                    metric_name: "m".into(),
                    subset_tag: TAG_ORIGINAL.into(),
                    mode: AggregationMode::Mean,
                    scores: order.iter().map(|(n, m, _)| (n.clone(), *m)).collect(),
                };
                let human = HumanScores::new(order.iter().rev().map(|(n, _, h)| (n.clone(), *h)).collect()).unwrap();
                evaluate(&scores, &human, None)
            };
            let mut rotated = named.clone();
            rotated.rotate_left(rotate % named.len());
            match (build(&named), build(&rotated)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
