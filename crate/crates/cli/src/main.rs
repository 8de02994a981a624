//! Command-line pipeline: build a language graph from data files, then run
//! the statistical analyses against it.
//!
//! Exit codes: 0 success, 2 config/validation error, 3 data error,
//! 4 internal error. Every subcommand prints a one-line JSON summary on
//! success; all randomized steps take an explicit `--seed` and outputs are
//! byte-identical across runs and `--threads` settings.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod build;
mod config;
mod dist;
mod errors;
mod export_cmd;
mod stats_cmd;

use config::BuildConfig;
pub(crate) use errors::CliError;

#[derive(Parser)]
#[command(
    name = "glottograph",
    about = "Build rich language graphs and analyze persistence and diffusibility",
    version
)]
struct Cli {
    /// Worker threads for pair-parallel computations (0 = all cores).
    /// Outputs are identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest data files, compute all distances and write the graph.
    Build(BuildArgs),
    /// Statistical reports over a built graph.
    #[command(subcommand)]
    Stats(StatsCommand),
    /// Per-relatedness-level histogram of one attribute (64 bins).
    Dist(DistArgs),
    /// Convert a built graph to edges-tsv or json.
    Export(ExportArgs),
}

#[derive(Args)]
struct BuildArgs {
    /// JSON config file; every key can be overridden by the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    languages: Option<PathBuf>,
    #[arg(long)]
    colex: Option<PathBuf>,
    #[arg(long)]
    ratings: Option<PathBuf>,
    #[arg(long)]
    wordlists: Option<PathBuf>,
    #[arg(long)]
    phon_matrix: Option<PathBuf>,
    #[arg(long)]
    syntactic_matrix: Option<PathBuf>,
    #[arg(long)]
    genetic_matrix: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated concept sets (default: every feasible set).
    #[arg(long)]
    concept_sets: Option<String>,
    #[arg(long)]
    min_languages_any: Option<usize>,
    #[arg(long)]
    min_languages_both: Option<usize>,
    #[arg(long)]
    min_shared_concepts: Option<usize>,
    #[arg(long)]
    neighbour_threshold: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Pearson correlations of two attributes, grouped.
    Pearson(PearsonArgs),
    /// Standardized-beta regression by relatedness level.
    Beta(BetaArgs),
    /// Ordinary least squares, optionally on a stratified sample.
    Ols(OlsArgs),
    /// Pairwise ARIs of concept-set community structures per family.
    Ari(AriArgs),
}

#[derive(Args)]
struct PearsonArgs {
    #[arg(long)]
    graph: PathBuf,
    /// X attribute (geo_dist, contact_dist, neighbour, genetic, phon,
    /// syntactic, or a concept-set name).
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// Grouping: macroarea, cross or relatedness.
    #[arg(long, default_value = "macroarea")]
    group: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BetaArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long)]
    predictor: String,
    /// Comma-separated control attributes.
    #[arg(long, default_value = "")]
    controls: String,
    /// Fit one model over all edges instead of per relatedness level.
    #[arg(long)]
    pooled: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OlsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    target: String,
    /// Comma-separated predictor attributes.
    #[arg(long)]
    predictors: String,
    /// Fit per relatedness level instead of one pooled model.
    #[arg(long)]
    by_relatedness: bool,
    /// Stratified sample size (by relatedness); default uses all edges.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AriArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated concept-set names (at least two).
    #[arg(long, default_value = "nuclear,non-nuclear,emotion,random")]
    sets: String,
    #[arg(long, default_value_t = 5)]
    top_families: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    attr: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Output format: edges-tsv or json.
    #[arg(long)]
    format: String,
    #[arg(long)]
    out: PathBuf,
}

fn print_summary<T: serde::Serialize>(summary: &T) -> Result<(), CliError> {
    let line = serde_json::to_string(summary)
        .map_err(|e| CliError::Internal(format!("summary serialization: {e}")))?;
    println!("{line}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Build(args) => {
            let base = match &args.config {
                Some(path) => BuildConfig::from_file(path)?,
                None => BuildConfig::default(),
            };
            let overrides = BuildConfig {
                languages: args.languages,
                colex: args.colex,
                ratings: args.ratings,
                wordlists: args.wordlists,
                phon_matrix: args.phon_matrix,
                syntactic_matrix: args.syntactic_matrix,
                genetic_matrix: args.genetic_matrix,
                out_dir: args.out_dir,
                concept_sets: args.concept_sets,
                min_languages_any: args.min_languages_any,
                min_languages_both: args.min_languages_both,
                min_shared_concepts: args.min_shared_concepts,
                neighbour_threshold: args.neighbour_threshold,
                seed: args.seed,
            };
            let plan = base.merged_with(overrides).into_plan()?;
            let summary = build::run(&plan)?;
            print_summary(&summary)
        }
        Command::Stats(stats) => match stats {
            StatsCommand::Pearson(args) => {
                let summary =
                    stats_cmd::pearson_report(&args.graph, &args.x, &args.y, &args.group, &args.out)?;
                print_summary(&summary)
            }
            StatsCommand::Beta(args) => {
                let summary = stats_cmd::beta_report(
                    &args.graph,
                    &args.target,
                    &args.predictor,
                    &args.controls,
                    !args.pooled,
                    &args.out,
                )?;
                print_summary(&summary)
            }
            StatsCommand::Ols(args) => {
                let summary = stats_cmd::ols_report(
                    &args.graph,
                    &args.target,
                    &args.predictors,
                    args.by_relatedness,
                    args.sample,
                    args.seed,
                    &args.out,
                )?;
                print_summary(&summary)
            }
            StatsCommand::Ari(args) => {
                let summary = stats_cmd::ari_report(
                    &args.graph,
                    &args.sets,
                    args.top_families,
                    args.seed,
                    &args.out,
                )?;
                print_summary(&summary)
            }
        },
        Command::Dist(args) => {
            let summary = dist::run(&args.graph, &args.attr, &args.out)?;
            print_summary(&summary)
        }
        Command::Export(args) => {
            let summary = export_cmd::run(&args.graph, &args.format, &args.out)?;
            print_summary(&summary)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
