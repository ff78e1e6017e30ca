//! Sweep configuration and its flat key-value file format.
//!
//! The file holds one `key = value` pair per line; list values are
//! comma-separated. Blank lines and lines starting with `#` are ignored.
//! Unknown and duplicate keys are rejected.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::lda::{DEFAULT_ALPHA_SUM, DEFAULT_BETA, DEFAULT_ITERATIONS};
use crate::noise::NoiseKind;

use super::ExperimentError;

pub const DEFAULT_DEPTH: usize = 25;
pub const DEFAULT_MIN_DF: usize = 3;
pub const DEFAULT_REFERENCE_K: usize = 5;

/// Corpus format tag as used in config files and CLI flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    DirOfTxt,
    OneDocPerLine,
    Json,
}

impl SourceFormat {
    pub fn parse(tag: &str) -> Result<SourceFormat, ExperimentError> {
        match tag {
            "dir-of-txt" => Ok(SourceFormat::DirOfTxt),
            "one-doc-per-line" => Ok(SourceFormat::OneDocPerLine),
            "json" => Ok(SourceFormat::Json),
            other => Err(ExperimentError::Config(format!(
                "unknown corpus_format {other:?}"
            ))),
        }
    }

    pub fn as_corpus_format(self) -> crate::corpus::CorpusFormat {
        match self {
            SourceFormat::DirOfTxt => crate::corpus::CorpusFormat::DirOfTxt,
            SourceFormat::OneDocPerLine => crate::corpus::CorpusFormat::OneDocPerLine,
            SourceFormat::Json => crate::corpus::CorpusFormat::Json,
        }
    }
}

/// Where to find an auxiliary resource: the bundled default, none, or a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resource {
    Builtin,
    None,
    Path(PathBuf),
}

impl Resource {
    fn parse(value: &str) -> Resource {
        match value {
            "builtin" => Resource::Builtin,
            "none" => Resource::None,
            path => Resource::Path(PathBuf::from(path)),
        }
    }
}

/// Everything a sweep needs. Parsed from a config file; every field has a
/// default except `corpus_path`.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub corpus_path: PathBuf,
    pub corpus_format: SourceFormat,
    pub noise_kinds: Vec<NoiseKind>,
    pub noise_levels: Vec<f64>,
    pub k_values: Vec<usize>,
    pub reference_k: usize,
    pub corpus_seeds: Vec<u64>,
    pub lda_seeds: Vec<u64>,
    pub alpha_sum: f64,
    pub beta: f64,
    pub iterations: usize,
    pub depth: usize,
    pub min_df: usize,
    pub frequency_list_path: Resource,
    pub stopwords_path: Resource,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Paper-style defaults around a reference topic count: ten noise
    /// levels from 5% to 50%, K grid `{1,2,3,4,6} * reference_k`, five
    /// corpus seeds, five sampler seeds.
    pub fn new(corpus_path: impl Into<PathBuf>) -> ExperimentConfig {
        let reference_k = DEFAULT_REFERENCE_K;
        ExperimentConfig {
            corpus_path: corpus_path.into(),
            corpus_format: SourceFormat::Json,
            noise_kinds: NoiseKind::ALL.to_vec(),
            noise_levels: default_noise_levels(),
            k_values: default_k_values(reference_k),
            reference_k,
            corpus_seeds: vec![1, 2, 3, 4, 5],
            lda_seeds: vec![1, 2, 3, 4, 5],
            alpha_sum: DEFAULT_ALPHA_SUM,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            depth: DEFAULT_DEPTH,
            min_df: DEFAULT_MIN_DF,
            frequency_list_path: Resource::Builtin,
            stopwords_path: Resource::Builtin,
            output_dir: PathBuf::from("results"),
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.noise_kinds.is_empty() {
            return bad("noise_kinds must not be empty".into());
        }
        for level in &self.noise_levels {
            if !(*level > 0.0 && *level <= crate::noise::MAX_RATE) {
                return bad(format!("noise level {level} outside (0, 0.5]"));
            }
        }
        if self.noise_levels.is_empty() {
            return bad("noise_levels must not be empty".into());
        }
        for k in &self.k_values {
            if *k < 2 {
                return bad(format!("k value {k} must be at least 2"));
            }
        }
        if self.k_values.is_empty() {
            return bad("k_values must not be empty".into());
        }
        if self.reference_k < 2 {
            return bad(format!("reference_k {} must be at least 2", self.reference_k));
        }
        for (name, seeds) in [("corpus_seeds", &self.corpus_seeds), ("lda_seeds", &self.lda_seeds)]
        {
            if seeds.is_empty() {
                return bad(format!("{name} must not be empty"));
            }
            let distinct: HashSet<&u64> = seeds.iter().collect();
            if distinct.len() != seeds.len() {
                return bad(format!("{name} contains duplicates"));
            }
        }
        if !(self.alpha_sum > 0.0) || !(self.beta > 0.0) {
            return bad("alpha_sum and beta must be positive".into());
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        if self.depth == 0 {
            return bad("depth must be at least 1".into());
        }
        Ok(())
    }

    /// Parse the flat key-value config format.
    pub fn from_file(path: &Path) -> Result<ExperimentConfig, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_str_contents(&text)
    }

    pub fn from_str_contents(text: &str) -> Result<ExperimentConfig, ExperimentError> {
        let bad = |msg: String| ExperimentError::Config(msg);
        let mut corpus_path: Option<PathBuf> = None;
        let mut config = ExperimentConfig::new("");
        let mut explicit_k_values = false;
        let mut seen: HashSet<String> = HashSet::new();

        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(bad(format!("duplicate key {key:?}")));
            }
            match key {
                "corpus_path" => corpus_path = Some(PathBuf::from(value)),
                "corpus_format" => config.corpus_format = SourceFormat::parse(value)?,
                "noise_kinds" => {
                    config.noise_kinds = split_list(value)
                        .map(|s| s.parse::<NoiseKind>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| bad(e.to_string()))?;
                }
                "noise_levels" => {
                    config.noise_levels = parse_list(value, "noise_levels")?;
                }
                "k_values" => {
                    config.k_values = parse_list(value, "k_values")?;
                    explicit_k_values = true;
                }
                "reference_k" => config.reference_k = parse_scalar(value, "reference_k")?,
                "corpus_seeds" => config.corpus_seeds = parse_list(value, "corpus_seeds")?,
                "lda_seeds" => config.lda_seeds = parse_list(value, "lda_seeds")?,
                "alpha_sum" => config.alpha_sum = parse_scalar(value, "alpha_sum")?,
                "beta" => config.beta = parse_scalar(value, "beta")?,
                "iterations" => config.iterations = parse_scalar(value, "iterations")?,
                "depth" => config.depth = parse_scalar(value, "depth")?,
                "min_df" => config.min_df = parse_scalar(value, "min_df")?,
                "frequency_list_path" => {
                    config.frequency_list_path = Resource::parse(value);
                }
                "stopwords_path" => config.stopwords_path = Resource::parse(value),
                "output_dir" => config.output_dir = PathBuf::from(value),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }

        config.corpus_path =
            corpus_path.ok_or_else(|| bad("missing required key corpus_path".into()))?;
        if !explicit_k_values {
            config.k_values = default_k_values(config.reference_k);
        }
        config.validate()?;
        Ok(config)
    }
}

/// 5% to 50% in 5% steps.
pub fn default_noise_levels() -> Vec<f64> {
    (1..=10).map(|i| i as f64 * 0.05).collect()
}

/// `{1, 2, 3, 4, 6} * reference_k`.
pub fn default_k_values(reference_k: usize) -> Vec<usize> {
    [1, 2, 3, 4, 6].iter().map(|m| m * reference_k).collect()
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_list<T: std::str::FromStr>(value: &str, key: &str) -> Result<Vec<T>, ExperimentError> {
    split_list(value)
        .map(|item| {
            item.parse::<T>()
                .map_err(|_| ExperimentError::Config(format!("bad {key} item {item:?}")))
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(value: &str, key: &str) -> Result<T, ExperimentError> {
    value
        .parse::<T>()
        .map_err(|_| ExperimentError::Config(format!("bad value for {key}: {value:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_documented_grid() {
        let config = ExperimentConfig::new("corpus.json");
        assert_eq!(config.noise_levels.len(), 10);
        assert!((config.noise_levels[0] - 0.05).abs() < 1e-12);
        assert!((config.noise_levels[9] - 0.50).abs() < 1e-12);
        assert_eq!(config.k_values, vec![5, 10, 15, 20, 30]);
        assert_eq!(config.corpus_seeds.len(), 5);
        assert_eq!(config.lda_seeds.len(), 5);
        assert_eq!(config.depth, 25);
        assert!(config.validate().is_ok());
    }

    #[test]
    fn k_grid_follows_reference_k() {
        assert_eq!(default_k_values(10), vec![10, 20, 30, 40, 60]);
    }

    #[test]
    fn parses_a_full_config() {
        let text = "\
# sweep over a tiny grid
corpus_path = corpora/mini.json
corpus_format = json
noise_kinds = deletion, metaphone
noise_levels = 0.05, 0.5
k_values = 5, 10
reference_k = 5
corpus_seeds = 1, 2
lda_seeds = 7, 8
alpha_sum = 2.5
beta = 0.02
iterations = 150
depth = 10
min_df = 2
frequency_list_path = builtin
stopwords_path = none
output_dir = out
";
        let config = ExperimentConfig::from_str_contents(text).unwrap();
        assert_eq!(config.corpus_path, PathBuf::from("corpora/mini.json"));
        assert_eq!(
            config.noise_kinds,
            vec![NoiseKind::Deletion, NoiseKind::Metaphone]
        );
        assert_eq!(config.noise_levels, vec![0.05, 0.5]);
        assert_eq!(config.k_values, vec![5, 10]);
        assert_eq!(config.lda_seeds, vec![7, 8]);
        assert_eq!(config.stopwords_path, Resource::None);
        assert_eq!(config.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_str_contents("corpus_path = x\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let err = ExperimentConfig::from_str_contents("corpus_path = x\ncorpus_path = y\n")
            .unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn missing_corpus_path_is_rejected() {
        assert!(ExperimentConfig::from_str_contents("depth = 5\n").is_err());
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut config = ExperimentConfig::new("x");
        config.noise_levels = vec![0.0];
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::new("x");
        config.noise_levels = vec![0.6];
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::new("x");
        config.corpus_seeds = vec![1, 1];
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::new("x");
        config.k_values = vec![1];
        assert!(config.validate().is_err());
    }
}
