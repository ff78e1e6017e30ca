//! The full stability sweep: noise grid x K grid x seeds.
//!
//! For every `(k, lda_seed)` a reference model is trained once on the
//! clean corpus. Each `(noise_kind, level, corpus_seed)` cell builds one
//! noisy corpus, rebuilds its vocabulary, trains a model per
//! `(k, lda_seed)`, and scores it against the clean reference with the
//! same `(k, lda_seed)` so noise effects are isolated from sampler
//! initialization variance. Cells are independent jobs keyed by their seed
//! tuple; execution order never affects results, and the record stream is
//! sorted canonically before writing, so identical configurations produce
//! byte-identical records.csv files.

mod config;
mod outputs;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::agreement::{agreement, AgreementError};
use crate::corpus::{
    build_vocabulary, default_stopwords, load_corpus, load_stopwords, Corpus, CorpusError,
};
use crate::lda::{train_lda, LdaConfig, LdaError, TopicModel};
use crate::noise::{
    inject_deletion, inject_insertion, inject_metaphone, NoiseError, NoiseKind, NoiseReport,
};
use crate::phonetics::{
    build_metaphone_index, load_frequency_list, FrequencyList, MetaphoneIndex, PhoneticsError,
};

pub use config::{
    default_k_values, default_noise_levels, ExperimentConfig, Resource, SourceFormat,
    DEFAULT_DEPTH, DEFAULT_MIN_DF, DEFAULT_REFERENCE_K,
};
pub use outputs::{
    emit_outputs, parse_records, parse_summary, plot_data_to_csv, records_to_csv, summary_to_csv,
    RECORDS_HEADER, SUMMARY_HEADER,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {detail}")]
    Parse { path: PathBuf, detail: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Phonetics(#[from] PhoneticsError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Lda(#[from] LdaError),
    #[error(transparent)]
    Agreement(#[from] AgreementError),
    #[error("no records to aggregate")]
    EmptyRecords,
    #[error(
        "sweep aborted after {completed} records (partial results in {partial_path}): {source}"
    )]
    Aborted {
        completed: usize,
        partial_path: PathBuf,
        #[source]
        source: Box<ExperimentError>,
    },
}

/// One run: a noisy model scored against its pinned clean reference.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRecord {
    pub noise_kind: NoiseKind,
    pub noise_level: f64,
    pub k: usize,
    pub corpus_seed: u64,
    pub lda_seed: u64,
    pub achieved_wer: f64,
    pub agreement_score: f64,
}

/// Mean and spread of the runs in one `(kind, level, k)` group.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub noise_kind: NoiseKind,
    pub noise_level: f64,
    pub k: usize,
    pub mean_score: f64,
    pub std_dev: f64,
    pub n_runs: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<AggregateRow>,
}

impl ResultTable {
    /// Mean score for one cell, if present.
    pub fn mean_score(&self, kind: NoiseKind, level: f64, k: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                r.noise_kind == kind && level_key(r.noise_level) == level_key(level) && r.k == k
            })
            .map(|r| r.mean_score)
    }
}

/// Work counters, for verifying reference-model reuse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub clean_models_trained: usize,
    pub noisy_models_trained: usize,
    pub noisy_corpora_built: usize,
}

/// Everything a finished sweep produced.
#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<StabilityRecord>,
    pub table: ResultTable,
    pub stats: SweepStats,
    /// Files written into the output directory.
    pub files: Vec<PathBuf>,
}

/// Total order key for a finite non-negative level.
pub(crate) fn level_key(level: f64) -> u64 {
    level.to_bits()
}

fn record_sort_key(r: &StabilityRecord) -> (NoiseKind, u64, usize, u64, u64) {
    (
        r.noise_kind,
        level_key(r.noise_level),
        r.k,
        r.corpus_seed,
        r.lda_seed,
    )
}

struct Resources {
    stopwords: std::collections::HashSet<String>,
    frequency_list: Option<FrequencyList>,
    metaphone_index: Option<MetaphoneIndex>,
}

fn load_resources(config: &ExperimentConfig) -> Result<Resources, ExperimentError> {
    let stopwords = match &config.stopwords_path {
        Resource::Builtin => default_stopwords().clone(),
        Resource::None => Default::default(),
        Resource::Path(path) => load_stopwords(path)?,
    };
    let needs_list = config
        .noise_kinds
        .iter()
        .any(|k| matches!(k, NoiseKind::Insertion | NoiseKind::Metaphone));
    let frequency_list = if needs_list {
        Some(match &config.frequency_list_path {
            Resource::Builtin => FrequencyList::bundled().clone(),
            Resource::None => {
                return Err(ExperimentError::Config(
                    "insertion/metaphone noise requires a frequency list".to_string(),
                ))
            }
            Resource::Path(path) => load_frequency_list(path)?,
        })
    } else {
        None
    };
    let metaphone_index = if config.noise_kinds.contains(&NoiseKind::Metaphone) {
        frequency_list.as_ref().map(build_metaphone_index)
    } else {
        None
    };
    Ok(Resources {
        stopwords,
        frequency_list,
        metaphone_index,
    })
}

fn inject(
    corpus: &Corpus,
    kind: NoiseKind,
    level: f64,
    seed: u64,
    resources: &Resources,
) -> Result<(Corpus, NoiseReport), ExperimentError> {
    let result = match kind {
        NoiseKind::Deletion => inject_deletion(corpus, level, seed)?,
        NoiseKind::Insertion => inject_insertion(
            corpus,
            level,
            resources
                .frequency_list
                .as_ref()
                .expect("frequency list loaded for insertion"),
            seed,
        )?,
        NoiseKind::Metaphone => inject_metaphone(
            corpus,
            level,
            resources
                .metaphone_index
                .as_ref()
                .expect("index built for metaphone"),
            seed,
        )?,
    };
    Ok(result)
}

/// Run the full sweep and write its outputs. On a mid-sweep failure the
/// records completed so far are written to `records_partial.csv` in the
/// output directory and the error is returned.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepOutcome, ExperimentError> {
    config.validate()?;
    let corpus = load_corpus(&config.corpus_path, config.corpus_format.as_corpus_format())?;
    let resources = load_resources(config)?;

    let clean_trained = AtomicUsize::new(0);
    let noisy_trained = AtomicUsize::new(0);
    let corpora_built = AtomicUsize::new(0);

    // clean reference models, one per (k, lda_seed), trained exactly once
    let clean_vocab = build_vocabulary(&corpus, config.min_df, &resources.stopwords);
    let reference_keys: Vec<(usize, u64)> = config
        .k_values
        .iter()
        .flat_map(|&k| config.lda_seeds.iter().map(move |&s| (k, s)))
        .collect();
    let references: HashMap<(usize, u64), TopicModel> = reference_keys
        .par_iter()
        .map(|&(k, seed)| {
            let lda_config = LdaConfig {
                k,
                alpha_sum: config.alpha_sum,
                beta: config.beta,
                iterations: config.iterations,
                seed,
            };
            let model = train_lda(&corpus, &clean_vocab, &lda_config)?;
            clean_trained.fetch_add(1, Ordering::Relaxed);
            Ok(((k, seed), model))
        })
        .collect::<Result<_, ExperimentError>>()?;

    // one noisy corpus per (kind, level, corpus_seed); models per (k, lda_seed)
    let mut cells: Vec<(NoiseKind, f64, u64)> = Vec::new();
    for &kind in &config.noise_kinds {
        for &level in &config.noise_levels {
            for &corpus_seed in &config.corpus_seeds {
                cells.push((kind, level, corpus_seed));
            }
        }
    }

    let cell_results: Vec<Result<Vec<StabilityRecord>, ExperimentError>> = cells
        .par_iter()
        .map(|&(kind, level, corpus_seed)| {
            let (noisy, report) = inject(&corpus, kind, level, corpus_seed, &resources)?;
            corpora_built.fetch_add(1, Ordering::Relaxed);
            let noisy_vocab = build_vocabulary(&noisy, config.min_df, &resources.stopwords);
            reference_keys
                .par_iter()
                .map(|&(k, lda_seed)| {
                    let lda_config = LdaConfig {
                        k,
                        alpha_sum: config.alpha_sum,
                        beta: config.beta,
                        iterations: config.iterations,
                        seed: lda_seed,
                    };
                    let model = train_lda(&noisy, &noisy_vocab, &lda_config)?;
                    noisy_trained.fetch_add(1, Ordering::Relaxed);
                    let reference = &references[&(k, lda_seed)];
                    let result = agreement(reference, &model, config.depth)?;
                    Ok(StabilityRecord {
                        noise_kind: kind,
                        noise_level: level,
                        k,
                        corpus_seed,
                        lda_seed,
                        achieved_wer: report.achieved_wer,
                        agreement_score: result.score,
                    })
                })
                .collect()
        })
        .collect();

    let mut records = Vec::new();
    let mut first_error: Option<ExperimentError> = None;
    for result in cell_results {
        match result {
            Ok(cell_records) => records.extend(cell_records),
            Err(e) if first_error.is_none() => first_error = Some(e),
            Err(_) => {}
        }
    }
    records.sort_by(|a, b| record_sort_key(a).cmp(&record_sort_key(b)));

    if let Some(error) = first_error {
        std::fs::create_dir_all(&config.output_dir).map_err(|source| ExperimentError::Io {
            path: config.output_dir.clone(),
            source,
        })?;
        let partial_path = config.output_dir.join("records_partial.csv");
        std::fs::write(&partial_path, records_to_csv(&records)).map_err(|source| {
            ExperimentError::Io {
                path: partial_path.clone(),
                source,
            }
        })?;
        return Err(ExperimentError::Aborted {
            completed: records.len(),
            partial_path,
            source: Box::new(error),
        });
    }

    let table = aggregate(&records)?;
    let files = emit_outputs(&table, &records, &config.output_dir)?;
    Ok(SweepOutcome {
        records,
        table,
        stats: SweepStats {
            clean_models_trained: clean_trained.into_inner(),
            noisy_models_trained: noisy_trained.into_inner(),
            noisy_corpora_built: corpora_built.into_inner(),
        },
        files,
    })
}

/// Group records by `(kind, level, k)` and reduce to mean and sample
/// standard deviation.
pub fn aggregate(records: &[StabilityRecord]) -> Result<ResultTable, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyRecords);
    }
    let mut groups: std::collections::BTreeMap<(NoiseKind, u64, usize), Vec<f64>> =
        std::collections::BTreeMap::new();
    for r in records {
        groups
            .entry((r.noise_kind, level_key(r.noise_level), r.k))
            .or_default()
            .push(r.agreement_score);
    }
    let rows = groups
        .into_iter()
        .map(|((kind, level_bits, k), scores)| {
            let (mean, std_dev) = mean_and_std(&scores);
            AggregateRow {
                noise_kind: kind,
                noise_level: f64::from_bits(level_bits),
                k,
                mean_score: mean,
                std_dev,
                n_runs: scores.len(),
            }
        })
        .collect();
    Ok(ResultTable { rows })
}

/// Mean and sample standard deviation (zero for a single value).
fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, variance.sqrt())
}
