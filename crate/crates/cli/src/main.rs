use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vat_core::analysis::EditUnit;

mod commands;
mod inputs;
mod output;

use inputs::{AggArg, DataArgs};

/// Variance-aware test sets for machine translation evaluation.
#[derive(Parser, Debug)]
#[command(name = "vat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the segment-by-system score matrix.
    Score(ScoreArgs),
    /// Drop the least discriminative segments and write the subset.
    Filter(FilterArgs),
    /// Correlate system scores with human ratings, before and after filtering.
    Metaeval(EvalArgs),
    /// Run metaeval for several filtering percentages.
    Sweep(SweepArgs),
    /// Describe how a subset differs from the full test set.
    Analyze(AnalyzeArgs),
    /// Filter with one random half of the systems, evaluate on the other.
    Robustness(RobustnessArgs),
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Percentage of segments to drop.
    #[arg(long, default_value_t = 60.0)]
    lambda: f64,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Human ratings, `system<TAB>score` per line.
    #[arg(long)]
    human: PathBuf,
    /// System-level aggregation [default: corpus-bleu for bleu, mean for file].
    #[arg(long, value_enum)]
    agg: Option<AggArg>,
    /// Existing subset index; when absent the subset is filtered at `--lambda`.
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long, default_value_t = 60.0)]
    lambda: f64,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    human: PathBuf,
    #[arg(long, value_enum)]
    agg: Option<AggArg>,
    /// Comma-separated percentages.
    #[arg(long, value_delimiter = ',', default_value = "0,10,20,30,40,50,60,70,80,90")]
    lambda: Vec<f64>,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct RobustnessArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    human: PathBuf,
    #[arg(long, value_enum)]
    agg: Option<AggArg>,
    /// Seed for the system split.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 60.0)]
    lambda: f64,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum UnitArg {
    Token,
    Char,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// `--scores` or `--sys-dir` add a score histogram.
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    subset: PathBuf,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// Paraphrased references aligned with `--refs`.
    #[arg(long)]
    paraphrased: Option<PathBuf>,
    #[arg(long = "edit-unit", value_enum, default_value = "token")]
    edit_unit: UnitArg,
    /// Word counts, `word<TAB>count` per line.
    #[arg(long = "freq-table")]
    freq_table: Option<PathBuf>,
    /// Tagged references, `token/TAG` separated by spaces.
    #[arg(long = "pos-file")]
    pos_file: Option<PathBuf>,
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

impl From<UnitArg> for EditUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Token => EditUnit::Token,
            UnitArg::Char => EditUnit::Char,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Score(a) => commands::score(a),
        Command::Filter(a) => commands::filter(a),
        Command::Metaeval(a) => commands::metaeval(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Robustness(a) => commands::robustness(a),
    };
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
