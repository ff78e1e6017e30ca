//! Command-line front end.
//!
//! Subcommands mirror the pipeline stages: `ingest` a raw corpus into the
//! canonical JSON form, `corrupt` it with one noise channel, `train` a
//! single model, `agree` two model files, `sweep` a full experiment from a
//! config file, and `report` to re-aggregate an existing records.csv.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use topicstab::agreement::agreement_between_lists;
use topicstab::corpus::{
    default_stopwords, load_corpus, load_stopwords, save_corpus, CorpusFormat,
};
use topicstab::experiment::{
    aggregate, emit_outputs, parse_records, run_experiment, ExperimentConfig, ExperimentError,
};
use topicstab::lda::{read_model_file, train_lda, write_model_file, LdaConfig};
use topicstab::noise::{apply_noise, NoiseKind, NoiseReport, NoiseSpec};
use topicstab::phonetics::{load_frequency_list, FrequencyList};

#[derive(Parser)]
#[command(
    name = "topicstab",
    version,
    about = "Measure how LDA topic models degrade under simulated transcription noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a raw corpus into the canonical JSON form
    Ingest(IngestArgs),
    /// Apply one noise channel to a corpus
    Corrupt(CorruptArgs),
    /// Train a single LDA model and export its top-term lists
    Train(TrainArgs),
    /// Score the agreement between two exported models
    Agree(AgreeArgs),
    /// Run a full noise x K x seed sweep from a config file
    Sweep(SweepArgs),
    /// Re-aggregate a records.csv into summary and plot data
    Report(ReportArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Source corpus path (directory or file)
    #[arg(long)]
    input: PathBuf,
    /// Source format: dir-of-txt, one-doc-per-line, or json
    #[arg(long)]
    format: String,
    /// Canonical JSON output path
    #[arg(long)]
    output: PathBuf,
    /// Override the corpus name
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct CorruptArgs {
    /// Canonical JSON corpus
    #[arg(long)]
    input: PathBuf,
    /// Noise channel: deletion, insertion, or metaphone
    #[arg(long)]
    kind: String,
    /// Target word-error rate in [0, 0.5]
    #[arg(long)]
    rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Frequency list: "builtin" or a file path
    #[arg(long, default_value = "builtin")]
    frequency_list: String,
    /// Noisy corpus output path (canonical JSON)
    #[arg(long)]
    output: PathBuf,
    /// Also write the noise report CSV here (always printed to stdout)
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Canonical JSON corpus
    #[arg(long)]
    input: PathBuf,
    /// Number of topics
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = topicstab::lda::DEFAULT_ALPHA_SUM)]
    alpha_sum: f64,
    #[arg(long, default_value_t = topicstab::lda::DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = topicstab::lda::DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Minimum document frequency for vocabulary terms
    #[arg(long, default_value_t = 3)]
    min_df: usize,
    /// Stopword list: "builtin", "none", or a file path
    #[arg(long, default_value = "builtin")]
    stopwords: String,
    /// Top terms exported per topic
    #[arg(long, default_value_t = 25)]
    depth: usize,
    /// Model file output path
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct AgreeArgs {
    /// First exported model file
    #[arg(long)]
    model_a: PathBuf,
    /// Second exported model file
    #[arg(long)]
    model_b: PathBuf,
    /// Comparison depth (lists are truncated pairwise to the shorter)
    #[arg(long, default_value_t = 25)]
    depth: usize,
    /// Optional per-matched-pair detail CSV
    #[arg(long)]
    pairs: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config file (flat key = value format)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus path (overrides the config file)
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Corpus format: dir-of-txt, one-doc-per-line, or json
    #[arg(long)]
    corpus_format: Option<String>,
    /// Comma-separated noise kinds
    #[arg(long)]
    noise_kinds: Option<String>,
    /// Comma-separated noise levels in (0, 0.5]
    #[arg(long)]
    noise_levels: Option<String>,
    /// Comma-separated topic counts
    #[arg(long)]
    k_values: Option<String>,
    /// Reference topic count; resets the K grid to its default multiples
    /// unless --k-values is also given
    #[arg(long)]
    reference_k: Option<usize>,
    /// Comma-separated corpus (noise) seeds
    #[arg(long)]
    corpus_seeds: Option<String>,
    /// Comma-separated sampler seeds
    #[arg(long)]
    lda_seeds: Option<String>,
    #[arg(long)]
    alpha_sum: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    min_df: Option<usize>,
    /// Frequency list: "builtin" or a file path
    #[arg(long)]
    frequency_list: Option<String>,
    /// Stopword list: "builtin", "none", or a file path
    #[arg(long)]
    stopwords: Option<String>,
    /// Override the config's output directory
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Per-run records.csv produced by sweep
    #[arg(long)]
    records: PathBuf,
    /// Directory for summary.csv and plot data
    #[arg(long)]
    output_dir: PathBuf,
}

enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

fn data(err: impl Display) -> CliError {
    CliError::Data(err.to_string())
}

fn internal(err: impl Display) -> CliError {
    CliError::Internal(err.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Ingest(args) => ingest(args),
        Command::Corrupt(args) => corrupt(args),
        Command::Train(args) => train(args),
        Command::Agree(args) => agree(args),
        Command::Sweep(args) => sweep(args),
        Command::Report(args) => report(args),
    }
}

fn parse_format(tag: &str) -> Result<CorpusFormat, CliError> {
    CorpusFormat::from_str(tag).map_err(|e| CliError::Usage(e.to_string()))
}

fn ingest(args: IngestArgs) -> Result<(), CliError> {
    let format = parse_format(&args.format)?;
    let mut corpus = load_corpus(&args.input, format).map_err(data)?;
    if let Some(name) = args.name {
        corpus.name = name;
    }
    save_corpus(&corpus, &args.output, CorpusFormat::Json).map_err(internal)?;
    println!(
        "ingested {} documents ({} tokens) into {}",
        corpus.len(),
        corpus.total_tokens(),
        args.output.display()
    );
    Ok(())
}

fn load_list(tag: &str) -> Result<FrequencyList, CliError> {
    if tag == "builtin" {
        Ok(FrequencyList::bundled().clone())
    } else {
        load_frequency_list(&PathBuf::from(tag)).map_err(data)
    }
}

fn corrupt(args: CorruptArgs) -> Result<(), CliError> {
    let kind = NoiseKind::from_str(&args.kind).map_err(|e| CliError::Usage(e.to_string()))?;
    let spec =
        NoiseSpec::new(kind, args.rate, args.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let corpus = load_corpus(&args.input, CorpusFormat::Json).map_err(data)?;
    let list = match kind {
        NoiseKind::Deletion => None,
        _ => Some(load_list(&args.frequency_list)?),
    };
    let (noisy, noise_report) = apply_noise(&corpus, &spec, list.as_ref()).map_err(data)?;
    save_corpus(&noisy, &args.output, CorpusFormat::Json).map_err(internal)?;

    let csv = format!(
        "{}\n{}\n",
        NoiseReport::CSV_HEADER,
        noise_report.csv_row(kind, args.rate, args.seed)
    );
    print!("{csv}");
    if let Some(path) = args.report {
        std::fs::write(&path, csv).map_err(internal)?;
    }
    Ok(())
}

fn train(args: TrainArgs) -> Result<(), CliError> {
    let corpus = load_corpus(&args.input, CorpusFormat::Json).map_err(data)?;
    let stopwords = match args.stopwords.as_str() {
        "builtin" => default_stopwords().clone(),
        "none" => Default::default(),
        path => load_stopwords(&PathBuf::from(path)).map_err(data)?,
    };
    let vocab = topicstab::corpus::build_vocabulary(&corpus, args.min_df, &stopwords);
    let config = LdaConfig {
        k: args.k,
        alpha_sum: args.alpha_sum,
        beta: args.beta,
        iterations: args.iterations,
        seed: args.seed,
    };
    let model = train_lda(&corpus, &vocab, &config).map_err(data)?;
    write_model_file(&model, args.depth, &args.output).map_err(internal)?;
    println!(
        "trained k={} on {} ({} terms) -> {}",
        args.k,
        corpus.name,
        vocab.len(),
        args.output.display()
    );
    Ok(())
}

fn agree(args: AgreeArgs) -> Result<(), CliError> {
    let a = read_model_file(&args.model_a).map_err(data)?;
    let b = read_model_file(&args.model_b).map_err(data)?;
    if a.k != b.k {
        return Err(CliError::Data(format!(
            "topic counts differ: {} has k={}, {} has k={}",
            args.model_a.display(),
            a.k,
            args.model_b.display(),
            b.k
        )));
    }
    let depth = args.depth;
    let truncate = |lists: &[topicstab::lda::RankedTermList]| -> Vec<topicstab::lda::RankedTermList> {
        lists
            .iter()
            .map(|l| {
                let take = depth.min(l.len());
                topicstab::lda::RankedTermList::new(l.terms()[..take].to_vec())
                    .expect("prefix of a valid list is valid")
            })
            .collect()
    };
    let result =
        agreement_between_lists(&truncate(&a.topics), &truncate(&b.topics)).map_err(data)?;

    println!("model1,model2,k,depth,score");
    println!(
        "{},{},{},{},{:.6}",
        args.model_a.display(),
        args.model_b.display(),
        a.k,
        depth,
        result.score
    );
    if let Some(path) = args.pairs {
        let mut out = String::from("row_topic,col_topic,average_jaccard\n");
        for (row, (&col, aj)) in result.matching.iter().zip(&result.per_pair).enumerate() {
            out.push_str(&format!("{row},{col},{aj:.6}\n"));
        }
        std::fs::write(&path, out).map_err(internal)?;
    }
    Ok(())
}

fn parse_flag_list<T: FromStr>(value: &str, flag: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            item.parse::<T>()
                .map_err(|_| CliError::Usage(format!("bad {flag} item {item:?}")))
        })
        .collect()
}

fn parse_resource(tag: &str) -> topicstab::experiment::Resource {
    use topicstab::experiment::Resource;
    match tag {
        "builtin" => Resource::Builtin,
        "none" => Resource::None,
        path => Resource::Path(PathBuf::from(path)),
    }
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(path).map_err(data)?,
        None => {
            let corpus = args.corpus.clone().ok_or_else(|| {
                CliError::Usage("sweep needs --config or --corpus".to_string())
            })?;
            ExperimentConfig::new(corpus)
        }
    };
    if let Some(corpus) = args.corpus {
        config.corpus_path = corpus;
    }
    if let Some(tag) = args.corpus_format {
        config.corpus_format =
            topicstab::experiment::SourceFormat::parse(&tag).map_err(|e| {
                CliError::Usage(e.to_string())
            })?;
    }
    if let Some(kinds) = args.noise_kinds {
        config.noise_kinds = parse_flag_list(&kinds, "--noise-kinds")?;
    }
    if let Some(levels) = args.noise_levels {
        config.noise_levels = parse_flag_list(&levels, "--noise-levels")?;
    }
    if let Some(reference_k) = args.reference_k {
        config.reference_k = reference_k;
        config.k_values = topicstab::experiment::default_k_values(reference_k);
    }
    if let Some(k_values) = args.k_values {
        config.k_values = parse_flag_list(&k_values, "--k-values")?;
    }
    if let Some(seeds) = args.corpus_seeds {
        config.corpus_seeds = parse_flag_list(&seeds, "--corpus-seeds")?;
    }
    if let Some(seeds) = args.lda_seeds {
        config.lda_seeds = parse_flag_list(&seeds, "--lda-seeds")?;
    }
    if let Some(alpha_sum) = args.alpha_sum {
        config.alpha_sum = alpha_sum;
    }
    if let Some(beta) = args.beta {
        config.beta = beta;
    }
    if let Some(iterations) = args.iterations {
        config.iterations = iterations;
    }
    if let Some(depth) = args.depth {
        config.depth = depth;
    }
    if let Some(min_df) = args.min_df {
        config.min_df = min_df;
    }
    if let Some(list) = args.frequency_list {
        config.frequency_list_path = parse_resource(&list);
    }
    if let Some(stopwords) = args.stopwords {
        config.stopwords_path = parse_resource(&stopwords);
    }
    if let Some(dir) = args.output_dir {
        config.output_dir = dir;
    }
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = run_experiment(&config).map_err(|e| match e {
        ExperimentError::Io { .. } => internal(e),
        other => data(other),
    })?;
    println!(
        "sweep complete: {} records, {} aggregated rows ({} clean + {} noisy models)",
        outcome.records.len(),
        outcome.table.rows.len(),
        outcome.stats.clean_models_trained,
        outcome.stats.noisy_models_trained
    );
    for file in outcome.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), CliError> {
    let records = parse_records(&args.records).map_err(data)?;
    let table = aggregate(&records).map_err(data)?;
    let files = emit_outputs(&table, &records, &args.output_dir).map_err(internal)?;
    for file in files {
        println!("wrote {}", file.display());
    }
    Ok(())
}
