//! Flag definitions. Field names double as config-file keys.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "spud",
    version,
    about = "Nonce treebanks, LM score aggregation and structural probes"
)]
#[command(
    propagate_version = true,
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    /// TOML file with per-subcommand defaults; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads (outputs do not depend on this).
    #[arg(short = 'j', long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Where to write run-manifest.json instead of next to the outputs.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    /// More log output on standard error (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate nonce versions of a treebank.
    Generate(GenerateArgs),
    /// Replacement statistics from a records.tsv file.
    Stats(StatsArgs),
    /// Aggregate token log-probabilities into a scoring report.
    Score(ScoreArgs),
    /// Type-token ratio of treebanks or scored tokens.
    Ttr(TtrArgs),
    /// Train or evaluate a structural probe.
    #[command(subcommand)]
    Probe(ProbeCommand),
}

#[derive(Debug, Subcommand)]
pub enum ProbeCommand {
    Train(TrainArgs),
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenerateArgs {
    /// Input treebank (CoNLL-U).
    #[arg(long, value_name = "FILE")]
    pub treebank: Option<PathBuf>,
    /// Build the candidate pool from this treebank instead of the input.
    #[arg(long, value_name = "FILE", conflicts_with = "pool_cache")]
    pub pool_from: Option<PathBuf>,
    /// Load a previously saved candidate pool.
    #[arg(long, value_name = "FILE")]
    pub pool_cache: Option<PathBuf>,
    /// Save the candidate pool used for this run.
    #[arg(long, value_name = "FILE")]
    pub save_pool: Option<PathBuf>,
    /// Tab-separated lexicon: form, lemma, UPOS, features (repeatable).
    #[arg(long, value_name = "FILE")]
    pub lexicon: Vec<PathBuf>,
    /// wiktextract JSON lines for extra forms and pronunciation hints (repeatable).
    #[arg(long, value_name = "FILE")]
    pub wiktextract: Vec<PathBuf>,
    /// Language code: ar, de, en, fr or ru.
    #[arg(long)]
    pub lang: Option<String>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Number of nonce versions to write.
    #[arg(long, value_name = "K")]
    pub variants: Option<usize>,
    /// Match candidates on UPOS only.
    #[arg(long)]
    pub ignore_deprels: bool,
    /// Leave punct dependents out of context keys.
    #[arg(long)]
    pub drop_punct_deps: bool,
    /// Comma-separated UPOS tags treated as content words.
    #[arg(long, value_name = "TAGS", value_delimiter = ',')]
    pub content_upos: Vec<String>,
    /// Drop input sentences with fewer syntactic words.
    #[arg(long, value_name = "N")]
    pub min_words: Option<usize>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StatsArgs {
    /// records.tsv written by `generate`.
    #[arg(long, value_name = "FILE")]
    pub records: Option<PathBuf>,
    /// Report file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScoreArgs {
    /// Token scores, one JSON object per line.
    #[arg(long, value_name = "FILE")]
    pub records: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Ratios above this value are excluded from the filtered comparisons.
    #[arg(long, value_name = "R")]
    pub threshold: Option<f64>,
    /// Also report mean negative log-likelihoods.
    #[arg(long)]
    pub raw_nll: bool,
    /// Pairs listed at each end of the extremes report.
    #[arg(long, value_name = "K")]
    pub extremes: Option<usize>,
    /// Original treebank, for sentence texts in the extremes report.
    #[arg(long, value_name = "FILE")]
    pub orig_treebank: Option<PathBuf>,
    /// Nonce treebank, for sentence texts in the extremes report.
    #[arg(long, value_name = "FILE")]
    pub nonce_treebank: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TtrArgs {
    /// Treebank whose word forms are counted (repeatable).
    #[arg(long, value_name = "FILE", conflicts_with = "records")]
    pub treebank: Vec<PathBuf>,
    /// Token-score file whose `token` fields are counted.
    #[arg(long, value_name = "FILE")]
    pub records: Option<PathBuf>,
    /// Count treebank forms without lowercasing.
    #[arg(long)]
    pub keep_case: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainArgs {
    /// Representations for the distance component (SPUDREPR).
    #[arg(long, value_name = "FILE")]
    pub reprs_dist: Option<PathBuf>,
    /// Representations for the relation component (SPUDREPR).
    #[arg(long, value_name = "FILE")]
    pub reprs_rel: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub treebank: Option<PathBuf>,
    /// Model selection data; the training set is used when absent.
    #[arg(long, value_name = "FILE")]
    pub dev_treebank: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub dev_reprs_dist: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub dev_reprs_rel: Option<PathBuf>,
    /// Rank of the distance subspace.
    #[arg(long, value_name = "B")]
    pub b_dim: Option<usize>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Learning-rate factor after an epoch without dev improvement.
    #[arg(long)]
    pub lr_decay: Option<f64>,
    /// Sentences per update.
    #[arg(long, value_name = "N")]
    pub batch_size: Option<usize>,
    #[arg(long, value_name = "N")]
    pub epochs: Option<usize>,
    /// Epochs without dev LAS improvement before stopping.
    #[arg(long, value_name = "N")]
    pub patience: Option<usize>,
    /// Train the relation map without its bias term.
    #[arg(long)]
    pub no_relation_bias: bool,
    /// Output model (SPUDPROB).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Per-epoch training log (JSON).
    #[arg(long, value_name = "FILE")]
    pub log: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub reprs_dist: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub reprs_rel: Option<PathBuf>,
    /// Gold treebank.
    #[arg(long, value_name = "FILE")]
    pub treebank: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Split scores by the direction of the gold edge.
    #[arg(long)]
    pub by_direction: bool,
    /// Write the decoded trees as CoNLL-U.
    #[arg(long, value_name = "FILE")]
    pub predictions: Option<PathBuf>,
}
