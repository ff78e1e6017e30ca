//! LDA training by collapsed Gibbs sampling.
//!
//! Token-topic assignments are resampled for `iterations` full sweeps from
//! a seeded initialization; the conditional for token `w` in document `d`
//! is proportional to `(n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)`
//! with `alpha = alpha_sum / K`. The final sample's counts define the
//! model; topics are read out as ranked top-term lists.
//!
//! All randomness comes from ChaCha8 streams: initialization is keyed per
//! document id (so corpus-level initial counts do not depend on document
//! order), the sweep chain by the configured seed. Identical inputs give
//! byte-identical models on every platform.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{Corpus, Vocabulary};
use crate::seeding;

pub const DEFAULT_ALPHA_SUM: f64 = 5.0;
pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: usize = 1000;

#[derive(Debug, Error)]
pub enum LdaError {
    #[error("invalid LDA configuration: {0}")]
    InvalidConfig(String),
    #[error("corpus is empty after vocabulary filtering")]
    EmptyFilteredCorpus,
    #[error("topic index {topic} out of range for K = {k}")]
    TopicOutOfRange { topic: usize, k: usize },
    #[error("requested depth must be at least 1")]
    InvalidDepth,
    #[error("ranked term list contains duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error("cannot read model file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file {path}: {detail}")]
    MalformedModel { path: PathBuf, detail: String },
}

/// Sampler configuration. `alpha_sum` is spread evenly over topics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaConfig {
    pub k: usize,
    pub alpha_sum: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    pub fn new(k: usize) -> LdaConfig {
        LdaConfig {
            k,
            alpha_sum: DEFAULT_ALPHA_SUM,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> LdaConfig {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> LdaConfig {
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<(), LdaError> {
        if self.k < 2 {
            return Err(LdaError::InvalidConfig(format!("K = {} < 2", self.k)));
        }
        if !(self.alpha_sum > 0.0) {
            return Err(LdaError::InvalidConfig(format!(
                "alpha_sum = {} must be positive",
                self.alpha_sum
            )));
        }
        if !(self.beta > 0.0) {
            return Err(LdaError::InvalidConfig(format!(
                "beta = {} must be positive",
                self.beta
            )));
        }
        if self.iterations < 1 {
            return Err(LdaError::InvalidConfig("iterations = 0".to_string()));
        }
        Ok(())
    }
}

/// A topic rendered as an ordered list of distinct terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedTermList {
    terms: Vec<String>,
}

impl RankedTermList {
    pub fn new(terms: Vec<String>) -> Result<RankedTermList, LdaError> {
        let mut seen = std::collections::HashSet::with_capacity(terms.len());
        for term in &terms {
            if !seen.insert(term.as_str()) {
                return Err(LdaError::DuplicateTerm(term.clone()));
            }
        }
        Ok(RankedTermList { terms })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A trained model: per-topic term counts, per-document topic counts, and
/// the vocabulary snapshot needed to render term lists.
#[derive(Debug, Clone)]
pub struct TopicModel {
    config: LdaConfig,
    corpus_name: String,
    terms: Vec<String>,
    topic_word_counts: Vec<u32>, // k * v, row-major by topic
    topic_totals: Vec<u64>,
    doc_topic_counts: Vec<u32>, // d * k, row-major by document
    num_docs: usize,
}

impl TopicModel {
    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn config(&self) -> &LdaConfig {
        &self.config
    }

    pub fn corpus_name(&self) -> &str {
        &self.corpus_name
    }

    pub fn topic_word_count(&self, topic: usize, word: usize) -> u32 {
        self.topic_word_counts[topic * self.terms.len() + word]
    }

    pub fn doc_topic_count(&self, doc: usize, topic: usize) -> u32 {
        self.doc_topic_counts[doc * self.config.k + topic]
    }

    pub fn topic_total(&self, topic: usize) -> u64 {
        self.topic_totals[topic]
    }

    /// Total tokens assigned across all topics.
    pub fn total_assigned(&self) -> u64 {
        self.topic_totals.iter().sum()
    }

    /// Terms of one topic sorted by descending count, ties broken
    /// lexicographically, truncated to `m` (shorter when fewer terms have
    /// nonzero counts; never padded).
    pub fn top_terms(&self, topic: usize, m: usize) -> Result<RankedTermList, LdaError> {
        if topic >= self.config.k {
            return Err(LdaError::TopicOutOfRange {
                topic,
                k: self.config.k,
            });
        }
        if m == 0 {
            return Err(LdaError::InvalidDepth);
        }
        let v = self.terms.len();
        let mut ranked: Vec<(u32, &str)> = (0..v)
            .filter_map(|w| {
                let count = self.topic_word_counts[topic * v + w];
                (count > 0).then(|| (count, self.terms[w].as_str()))
            })
            .collect();
        ranked.sort_unstable_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        ranked.truncate(m);
        RankedTermList::new(ranked.into_iter().map(|(_, t)| t.to_string()).collect())
    }

    /// All K topics as top-`m` ranked term lists.
    pub fn topics(&self, m: usize) -> Result<Vec<RankedTermList>, LdaError> {
        (0..self.config.k).map(|t| self.top_terms(t, m)).collect()
    }
}

struct SamplerState {
    docs: Vec<Vec<u32>>,
    assignments: Vec<Vec<u16>>,
    doc_topic: Vec<u32>,
    topic_word: Vec<u32>,
    topic_total: Vec<u64>,
}

/// Seeded random initialization. Each document's assignment stream is keyed
/// by its id, so initial corpus-level topic-word totals are invariant under
/// document reordering.
fn initialize(corpus: &Corpus, vocab: &Vocabulary, config: &LdaConfig) -> SamplerState {
    let k = config.k;
    let v = vocab.len();
    let mut docs = Vec::with_capacity(corpus.len());
    let mut assignments = Vec::with_capacity(corpus.len());
    let mut doc_topic = vec![0u32; corpus.len() * k];
    let mut topic_word = vec![0u32; k * v];
    let mut topic_total = vec![0u64; k];

    for (d, doc) in corpus.documents.iter().enumerate() {
        let tokens: Vec<u32> = doc
            .tokens
            .iter()
            .filter_map(|t| vocab.id(t).map(|id| id as u32))
            .collect();
        let mut rng =
            ChaCha8Rng::seed_from_u64(seeding::derive(config.seed, seeding::fnv1a64(doc.id.as_bytes())));
        let mut z = Vec::with_capacity(tokens.len());
        for &w in &tokens {
            let topic = rng.gen_range(0..k);
            z.push(topic as u16);
            doc_topic[d * k + topic] += 1;
            topic_word[topic * v + w as usize] += 1;
            topic_total[topic] += 1;
        }
        docs.push(tokens);
        assignments.push(z);
    }

    SamplerState {
        docs,
        assignments,
        doc_topic,
        topic_word,
        topic_total,
    }
}

/// Train a model on `corpus` restricted to `vocab`.
///
/// A `K` larger than the document count is unusual but legal; it logs a
/// warning. A corpus with no in-vocabulary tokens is an error.
pub fn train_lda(
    corpus: &Corpus,
    vocab: &Vocabulary,
    config: &LdaConfig,
) -> Result<TopicModel, LdaError> {
    config.validate()?;
    let k = config.k;
    let v = vocab.len();
    if k > corpus.len() {
        log::warn!(
            "K = {} exceeds the number of documents ({}) in corpus {:?}",
            k,
            corpus.len(),
            corpus.name
        );
    }

    let mut state = initialize(corpus, vocab, config);
    let total_tokens: usize = state.docs.iter().map(Vec::len).sum();
    if total_tokens == 0 {
        return Err(LdaError::EmptyFilteredCorpus);
    }

    let alpha = config.alpha_sum / k as f64;
    let beta = config.beta;
    let v_beta = beta * v as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seeding::derive(config.seed, 0x5EED_0F_C4A1));
    let mut weights = vec![0.0f64; k];

    for _ in 0..config.iterations {
        for d in 0..state.docs.len() {
            for i in 0..state.docs[d].len() {
                let w = state.docs[d][i] as usize;
                let old = state.assignments[d][i] as usize;
                state.doc_topic[d * k + old] -= 1;
                state.topic_word[old * v + w] -= 1;
                state.topic_total[old] -= 1;

                let mut total = 0.0;
                for (topic, weight) in weights.iter_mut().enumerate() {
                    let doc_part = state.doc_topic[d * k + topic] as f64 + alpha;
                    let word_part = (state.topic_word[topic * v + w] as f64 + beta)
                        / (state.topic_total[topic] as f64 + v_beta);
                    *weight = doc_part * word_part;
                    total += *weight;
                }
                // normalize before drawing
                let mut norm_total = 0.0;
                for weight in weights.iter_mut() {
                    *weight /= total;
                    norm_total += *weight;
                }
                debug_assert!((norm_total - 1.0).abs() < 1e-9);

                let u: f64 = rng.gen();
                let mut cumulative = 0.0;
                let mut new = k - 1;
                for (topic, weight) in weights.iter().enumerate() {
                    cumulative += *weight;
                    if u < cumulative {
                        new = topic;
                        break;
                    }
                }

                state.assignments[d][i] = new as u16;
                state.doc_topic[d * k + new] += 1;
                state.topic_word[new * v + w] += 1;
                state.topic_total[new] += 1;
            }
        }
    }

    Ok(TopicModel {
        config: *config,
        corpus_name: corpus.name.clone(),
        terms: vocab.terms().to_vec(),
        topic_word_counts: state.topic_word,
        topic_totals: state.topic_total,
        doc_topic_counts: state.doc_topic,
        num_docs: corpus.len(),
    })
}

/// Parsed form of a model interchange file: the header metadata plus the
/// top-term list of every topic.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub corpus_name: String,
    pub k: usize,
    pub alpha_sum: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub depth: usize,
    pub topics: Vec<RankedTermList>,
}

/// Write the interchange format: one header line with the configuration,
/// then one `topic_id: term1 term2 ...` line per topic at depth `m`.
pub fn write_model_file(model: &TopicModel, m: usize, path: &Path) -> Result<(), LdaError> {
    let io_err = |source| LdaError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = String::new();
    writeln!(
        out,
        "# model k={} alpha_sum={} beta={} iterations={} seed={} depth={} corpus={}",
        model.config.k,
        model.config.alpha_sum,
        model.config.beta,
        model.config.iterations,
        model.config.seed,
        m,
        model.corpus_name
    )
    .expect("write to string");
    for (topic, list) in model.topics(m)?.iter().enumerate() {
        writeln!(out, "{}: {}", topic, list.terms().join(" ")).expect("write to string");
    }
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    file.write_all(out.as_bytes()).map_err(io_err)?;
    Ok(())
}

/// Read a file produced by [`write_model_file`].
pub fn read_model_file(path: &Path) -> Result<ModelFile, LdaError> {
    let malformed = |detail: &str| LdaError::MalformedModel {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };
    let file = std::fs::File::open(path).map_err(|source| LdaError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed("missing header"))?
        .map_err(|source| LdaError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let rest = header
        .strip_prefix("# model ")
        .ok_or_else(|| malformed("header must start with '# model '"))?;

    let mut fields: HashMap<&str, &str> = HashMap::new();
    let mut corpus_name = String::new();
    for part in rest.split_whitespace() {
        if let Some((key, value)) = part.split_once('=') {
            if key == "corpus" {
                // corpus name runs to the end of the line
                let start = rest.find("corpus=").expect("corpus key present");
                corpus_name = rest[start + "corpus=".len()..].to_string();
                break;
            }
            fields.insert(key, value);
        }
    }
    let parse_usize = |key: &str| -> Result<usize, LdaError> {
        fields
            .get(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| malformed(&format!("bad or missing {key}")))
    };
    let parse_f64 = |key: &str| -> Result<f64, LdaError> {
        fields
            .get(key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| malformed(&format!("bad or missing {key}")))
    };
    let k = parse_usize("k")?;
    let depth = parse_usize("depth")?;
    let alpha_sum = parse_f64("alpha_sum")?;
    let beta = parse_f64("beta")?;
    let iterations = parse_usize("iterations")?;
    let seed = fields
        .get("seed")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| malformed("bad or missing seed"))?;

    let mut topics = Vec::with_capacity(k);
    for (idx, line) in lines.enumerate() {
        let line = line.map_err(|source| LdaError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (topic_id, terms) = line
            .split_once(':')
            .ok_or_else(|| malformed("topic line missing ':'"))?;
        let topic_id: usize = topic_id
            .trim()
            .parse()
            .map_err(|_| malformed("non-numeric topic id"))?;
        if topic_id != idx {
            return Err(malformed(&format!(
                "topic ids out of order: expected {idx}, found {topic_id}"
            )));
        }
        let terms: Vec<String> = terms.split_whitespace().map(str::to_string).collect();
        topics.push(RankedTermList::new(terms)?);
    }
    if topics.len() != k {
        return Err(malformed(&format!(
            "expected {k} topic lines, found {}",
            topics.len()
        )));
    }
    Ok(ModelFile {
        corpus_name,
        k,
        alpha_sum,
        beta,
        iterations,
        seed,
        depth,
        topics,
    })
}
