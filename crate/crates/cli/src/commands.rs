//! One function per subcommand.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use vat_core::analysis::{
    edit_distance_report, frequency_constitution, length_constitution, pos_constitution, score_histogram,
    ConstitutionReport, EditDistanceReport, EditUnit, FrequencyTable, ScoreHistogram,
};
use vat_core::corpus::{
    format_score, load_human_scores, load_subset, load_tagged_corpus, materialize_subset, read_segments,
};
use vat_core::filter::{
    filter_by_variance, instance_stats, stats_to_tsv, sweep_lambda, FilterConfig, KEEP_RULE, TIE_RULE,
};
use vat_core::metaeval::{compare_original_vs_vat, robustness_report_with, Comparison};
use vat_core::SubsetIndex;

use crate::inputs::check_matrix_matches;
use crate::output::{Outputs, Provenance};
use crate::{AnalyzeArgs, EvalArgs, FilterArgs, RobustnessArgs, ScoreArgs, SweepArgs};

pub const SCORES_FILE: &str = "scores.tsv";
pub const STATS_FILE: &str = "stats.tsv";
pub const METAEVAL_FILE: &str = "metaeval.json";
pub const ROBUSTNESS_FILE: &str = "robustness.json";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const SUMMARY_FILE: &str = "summary.tsv";

pub fn sweep_report_name(lambda: f64) -> String {
    format!("lambda_{lambda}.json")
}

pub fn score(args: &ScoreArgs) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("score");
    args.data.echo(&mut prov);
    let data = args.data.load()?;
    let mut out = Outputs::new(&args.out_dir)?;
    out.write(SCORES_FILE, &(prov.header() + &data.matrix.to_tsv()))?;
    Ok(out.commit())
}

pub fn filter(args: &FilterArgs) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("filter");
    args.data.echo(&mut prov);
    let cfg = FilterConfig::new(args.lambda)?;
    let data = args.data.load()?;
    let testset = data.testset.as_ref().context("--refs is required for filter")?;
    let stats = instance_stats(&data.matrix)?;
    let subset = filter_by_variance(&stats, &cfg)?;

    let mut comments = prov.comments();
    comments.push(("lambda", args.lambda.to_string()));
    comments.push(("keep_rule", KEEP_RULE.into()));
    comments.push(("tie_rule", TIE_RULE.into()));
    comments.push(("filtering_metric", data.matrix.metric_name().into()));
    let mut out = Outputs::new(&args.out_dir)?;
    let written = materialize_subset(testset, data.hyps.as_ref(), &subset, out.dir(), &comments)?;
    out.record(written);
    let mut header = prov.header();
    let _ = writeln!(header, "#filtering_metric={}", data.matrix.metric_name());
    out.write(STATS_FILE, &(header + &stats_to_tsv(&stats)))?;
    Ok(out.commit())
}

#[derive(Serialize)]
struct MetaEvalBody {
    lambda: Option<f64>,
    subset_size: usize,
    parent_size: usize,
    filtering_metric: String,
    pearson_gain: f64,
    comparison: Comparison,
}

pub fn metaeval(args: &EvalArgs) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("metaeval");
    args.data.echo(&mut prov);
    prov.set_path("human", Some(&args.human));
    let data = args.data.load()?;
    let human = load_human_scores(&args.human)?;
    let source = data.aggregation(args.agg)?;
    prov.set("agg", source.mode().as_str());

    let (subset, lambda) = match &args.subset {
        Some(path) => {
            prov.set_path("subset", Some(path));
            (load_subset(path)?, None)
        }
        None => {
            prov.set("lambda", args.lambda);
            let cfg = FilterConfig::new(args.lambda)?;
            (
                filter_by_variance(&instance_stats(&data.matrix)?, &cfg)?,
                Some(args.lambda),
            )
        }
    };
    let comparison = compare_original_vs_vat(&source, &subset, &human)?;
    let body = MetaEvalBody {
        lambda,
        subset_size: subset.len(),
        parent_size: subset.parent_size(),
        filtering_metric: data.matrix.metric_name().to_owned(),
        pearson_gain: comparison.pearson_gain(),
        comparison,
    };
    let mut out = Outputs::new(&args.out_dir)?;
    out.write_json(METAEVAL_FILE, &prov, &body)?;
    Ok(out.commit())
}

pub fn sweep(args: &SweepArgs) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("sweep");
    args.data.echo(&mut prov);
    prov.set_path("human", Some(&args.human));
    if args.lambda.is_empty() {
        bail!("--lambda needs at least one value");
    }
    let data = args.data.load()?;
    let human = load_human_scores(&args.human)?;
    let source = data.aggregation(args.agg)?;
    prov.set("agg", source.mode().as_str());
    let lambdas = args.lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
    prov.set("lambda", lambdas);

    let mut summary = prov.header();
    summary.push_str(
        "lambda\tkept\toriginal_pearson\tvat_pearson\toriginal_kendall_tau_b\tvat_kendall_tau_b\toriginal_spearman\tvat_spearman\n",
    );
    let mut out = Outputs::new(&args.out_dir)?;
    for (lambda, subset) in sweep_lambda(&data.matrix, &args.lambda)? {
        let comparison = compare_original_vs_vat(&source, &subset, &human)?;
        let (o, v) = (&comparison.original, &comparison.vat);
        let _ = writeln!(
            summary,
            "{lambda}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            subset.len(),
            format_score(o.pearson),
            format_score(v.pearson),
            format_score(o.kendall_tau_b),
            format_score(v.kendall_tau_b),
            format_score(o.spearman),
            format_score(v.spearman),
        );
        let body = MetaEvalBody {
            lambda: Some(lambda),
            subset_size: subset.len(),
            parent_size: subset.parent_size(),
            filtering_metric: data.matrix.metric_name().to_owned(),
            pearson_gain: comparison.pearson_gain(),
            comparison,
        };
        out.write_json(&sweep_report_name(lambda), &prov, &body)?;
    }
    out.write(SUMMARY_FILE, &summary)?;
    Ok(out.commit())
}

pub fn robustness(args: &RobustnessArgs) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("robustness");
    args.data.echo(&mut prov);
    prov.set_path("human", Some(&args.human));
    prov.set("seed", args.seed);
    prov.set("lambda", args.lambda);
    FilterConfig::new(args.lambda)?;
    let data = args.data.load()?;
    let human = load_human_scores(&args.human)?;
    let source = data.aggregation(args.agg)?;
    prov.set("agg", source.mode().as_str());
    let report = robustness_report_with(&data.matrix, &source, &human, args.seed, args.lambda)?;
    let mut out = Outputs::new(&args.out_dir)?;
    out.write_json(ROBUSTNESS_FILE, &prov, &report)?;
    Ok(out.commit())
}

#[derive(Serialize)]
struct AnalysisBody {
    subset_size: usize,
    parent_size: usize,
    constitution: Vec<ConstitutionReport>,
    edit_distance: Option<EditDistanceReport>,
    histogram: Option<ScoreHistogram>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Vec<PathBuf>> {
    let mut prov = Provenance::new("analyze");
    args.data.echo(&mut prov);
    prov.set_path("subset", Some(&args.subset));
    prov.set_path("freq_table", args.freq_table.as_deref());
    prov.set_path("pos_file", args.pos_file.as_deref());
    prov.set_path("paraphrased", args.paraphrased.as_deref());
    let subset: SubsetIndex = load_subset(&args.subset)?;
    let testset = args.data.load_testset()?.context("--refs is required for analyze")?;

    let mut constitution = vec![length_constitution(&testset, &subset)?];
    if let Some(path) = &args.freq_table {
        constitution.push(frequency_constitution(&testset, &subset, &FrequencyTable::load(path)?)?);
    }
    if let Some(path) = &args.pos_file {
        let tagged = load_tagged_corpus(path)?;
        if tagged.len() != testset.len() {
            return Err(vat_core::Error::LengthMismatch {
                left: testset.len(),
                right: tagged.len(),
            })
            .context("POS file is not aligned with the references");
        }
        constitution.push(pos_constitution(&tagged, &subset)?);
    }
    let edit_distance = match &args.paraphrased {
        Some(path) => {
            let unit = EditUnit::from(args.edit_unit);
            prov.set("edit_unit", unit_name(unit));
            let para = read_segments(path)?;
            Some(edit_distance_report(testset.references(), &para, &subset, unit)?)
        }
        None => None,
    };
    let histogram = if args.data.scores.is_some() || args.data.sys_dir.is_some() {
        prov.set("bins", args.bins);
        let data = args.data.load()?;
        check_matrix_matches(&data.matrix, testset.len())?;
        Some(score_histogram(&instance_stats(&data.matrix)?, &subset, args.bins)?)
    } else {
        None
    };
    let body = AnalysisBody {
        subset_size: subset.len(),
        parent_size: subset.parent_size(),
        constitution,
        edit_distance,
        histogram,
    };
    let mut out = Outputs::new(&args.out_dir)?;
    out.write_json(ANALYSIS_FILE, &prov, &body)?;
    Ok(out.commit())
}

fn unit_name(unit: EditUnit) -> &'static str {
    match unit {
        EditUnit::Token => "token",
        EditUnit::Char => "char",
    }
}
