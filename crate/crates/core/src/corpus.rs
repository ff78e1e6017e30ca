//! Corpus loading, tokenization, and vocabulary statistics.
//!
//! Three input formats are supported:
//! - `dir-of-txt`: each UTF-8 `.txt` file is one document; one optional
//!   level of label sub-directories.
//! - `one-doc-per-line`: one document per non-blank line.
//! - `json`: the canonical serialized form produced by [`save_corpus`];
//!   the only format that round-trips ids and labels exactly.
//!
//! Tokenization is deterministic: lowercase, split on any non-alphabetic
//! character, tokens shorter than two characters dropped.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bundled English stopword list, one term per line.
const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("path {path} does not exist")]
    MissingPath { path: PathBuf },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus at {path} contains no documents")]
    EmptyCorpus { path: PathBuf },
    #[error("duplicate document id {id:?}")]
    DuplicateDocumentId { id: String },
    #[error("document {id:?} contains non-normalized token {token:?}")]
    InvalidToken { id: String, token: String },
    #[error("malformed corpus file {path}: {detail}")]
    Malformed { path: PathBuf, detail: String },
    #[error("saving in format {format} is not supported")]
    UnsupportedSave { format: CorpusFormat },
    #[error("unknown corpus format {0:?} (expected dir-of-txt, one-doc-per-line, or json)")]
    UnknownFormat(String),
}

/// One document: a stable id, its token sequence, and an optional label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub tokens: Vec<String>,
}

/// An ordered collection of documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, documents: Vec<Document>) -> Corpus {
        Corpus {
            name: name.into(),
            documents,
        }
    }

    /// Total token count over all documents.
    pub fn total_tokens(&self) -> usize {
        self.documents.iter().map(|d| d.tokens.len()).sum()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// Input/output formats understood by [`load_corpus`] and [`save_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    DirOfTxt,
    OneDocPerLine,
    Json,
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            CorpusFormat::DirOfTxt => "dir-of-txt",
            CorpusFormat::OneDocPerLine => "one-doc-per-line",
            CorpusFormat::Json => "json",
        };
        f.write_str(tag)
    }
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<CorpusFormat, CorpusError> {
        match s {
            "dir-of-txt" => Ok(CorpusFormat::DirOfTxt),
            "one-doc-per-line" => Ok(CorpusFormat::OneDocPerLine),
            "json" => Ok(CorpusFormat::Json),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

/// Lowercase, split on any non-alphabetic character, drop tokens shorter
/// than two characters. Idempotent on its own space-joined output.
pub fn tokenize(raw: &str) -> Vec<String> {
    raw.split(|c: char| !c.is_ascii_alphabetic())
        .filter(|t| t.len() >= 2)
        .map(|t| t.to_ascii_lowercase())
        .collect()
}

/// Load a corpus from `path`. Documents are ordered lexicographically by id
/// for `dir-of-txt`; the other formats preserve their on-disk order.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    if !path.exists() {
        return Err(CorpusError::MissingPath {
            path: path.to_path_buf(),
        });
    }
    let corpus = match format {
        CorpusFormat::DirOfTxt => load_dir_of_txt(path)?,
        CorpusFormat::OneDocPerLine => load_one_doc_per_line(path)?,
        CorpusFormat::Json => load_json(path)?,
    };
    if corpus.documents.is_empty() {
        return Err(CorpusError::EmptyCorpus {
            path: path.to_path_buf(),
        });
    }
    validate(&corpus)?;
    Ok(corpus)
}

/// Serialize a corpus. `json` round-trips exactly; `one-doc-per-line`
/// writes space-joined tokens and discards ids and labels.
pub fn save_corpus(corpus: &Corpus, path: &Path, format: CorpusFormat) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    match format {
        CorpusFormat::Json => {
            let file = std::fs::File::create(path).map_err(io_err)?;
            let mut writer = std::io::BufWriter::new(file);
            serde_json::to_writer(&mut writer, corpus).map_err(|e| CorpusError::Malformed {
                path: path.to_path_buf(),
                detail: e.to_string(),
            })?;
            writer.write_all(b"\n").map_err(io_err)?;
            writer.flush().map_err(io_err)?;
            Ok(())
        }
        CorpusFormat::OneDocPerLine => {
            let file = std::fs::File::create(path).map_err(io_err)?;
            let mut writer = std::io::BufWriter::new(file);
            for doc in &corpus.documents {
                writeln!(writer, "{}", doc.tokens.join(" ")).map_err(io_err)?;
            }
            writer.flush().map_err(io_err)?;
            Ok(())
        }
        CorpusFormat::DirOfTxt => Err(CorpusError::UnsupportedSave {
            format: CorpusFormat::DirOfTxt,
        }),
    }
}

fn load_dir_of_txt(path: &Path) -> Result<Corpus, CorpusError> {
    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |source| CorpusError::Io { path: p, source }
    };
    let mut documents = Vec::new();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(io_err(path))?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err(path))?
        .into_iter()
        .map(|e| e.path())
        .collect();
    entries.sort();
    for entry in entries {
        if entry.is_dir() {
            let label = entry
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let mut files: Vec<PathBuf> = std::fs::read_dir(&entry)
                .map_err(io_err(&entry))?
                .collect::<Result<Vec<_>, _>>()
                .map_err(io_err(&entry))?
                .into_iter()
                .map(|e| e.path())
                .collect();
            files.sort();
            for file in files {
                if let Some(doc) = read_txt_document(&file, Some(&label))? {
                    documents.push(doc);
                }
            }
        } else if let Some(doc) = read_txt_document(&entry, None)? {
            documents.push(doc);
        }
    }
    documents.sort_by(|a, b| a.id.cmp(&b.id));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());
    Ok(Corpus::new(name, documents))
}

fn read_txt_document(path: &Path, label: Option<&str>) -> Result<Option<Document>, CorpusError> {
    if path.extension().and_then(|e| e.to_str()) != Some("txt") {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let id = match label {
        Some(label) => format!("{label}/{stem}"),
        None => stem,
    };
    Ok(Some(Document {
        id,
        label: label.map(str::to_string),
        tokens: tokenize(&text),
    }))
}

fn load_one_doc_per_line(path: &Path) -> Result<Corpus, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let documents: Vec<Document> = text
        .lines()
        .filter(|line| !line.trim().is_empty())
        .enumerate()
        .map(|(i, line)| Document {
            id: format!("line-{:06}", i + 1),
            label: None,
            tokens: tokenize(line),
        })
        .collect();
    let name = path
        .file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());
    Ok(Corpus::new(name, documents))
}

fn load_json(path: &Path) -> Result<Corpus, CorpusError> {
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| CorpusError::Malformed {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })
}

/// Check the document invariants: unique ids and normalized tokens.
fn validate(corpus: &Corpus) -> Result<(), CorpusError> {
    let mut ids = HashSet::with_capacity(corpus.documents.len());
    for doc in &corpus.documents {
        if !ids.insert(&doc.id) {
            return Err(CorpusError::DuplicateDocumentId { id: doc.id.clone() });
        }
        for token in &doc.tokens {
            let normalized = token.len() >= 2
                && token.bytes().all(|b| b.is_ascii_lowercase());
            if !normalized {
                return Err(CorpusError::InvalidToken {
                    id: doc.id.clone(),
                    token: token.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Filtered term inventory with document and corpus frequencies. Term ids
/// are assigned in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    terms: Vec<String>,
    ids: HashMap<String, usize>,
    document_frequency: Vec<usize>,
    corpus_frequency: Vec<usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.ids.get(term).copied()
    }

    /// Number of documents containing `term`.
    pub fn document_frequency(&self, term: &str) -> Option<usize> {
        self.id(term).map(|i| self.document_frequency[i])
    }

    /// Total occurrences of `term` across the corpus.
    pub fn corpus_frequency(&self, term: &str) -> Option<usize> {
        self.id(term).map(|i| self.corpus_frequency[i])
    }
}

/// Build the vocabulary of `corpus`, dropping stopwords and terms present
/// in fewer than `min_df` documents. A `min_df` of zero behaves like one.
pub fn build_vocabulary(
    corpus: &Corpus,
    min_df: usize,
    stopwords: &HashSet<String>,
) -> Vocabulary {
    let min_df = min_df.max(1);
    let mut df: HashMap<&str, usize> = HashMap::new();
    let mut cf: HashMap<&str, usize> = HashMap::new();
    for doc in &corpus.documents {
        let mut seen: HashSet<&str> = HashSet::new();
        for token in &doc.tokens {
            *cf.entry(token).or_insert(0) += 1;
            if seen.insert(token) {
                *df.entry(token).or_insert(0) += 1;
            }
        }
    }
    let mut terms: Vec<&str> = df
        .iter()
        .filter(|(term, &count)| count >= min_df && !stopwords.contains(**term))
        .map(|(term, _)| *term)
        .collect();
    terms.sort_unstable();
    let mut ids = HashMap::with_capacity(terms.len());
    let mut document_frequency = Vec::with_capacity(terms.len());
    let mut corpus_frequency = Vec::with_capacity(terms.len());
    let terms: Vec<String> = terms
        .into_iter()
        .enumerate()
        .map(|(i, term)| {
            ids.insert(term.to_string(), i);
            document_frequency.push(df[term]);
            corpus_frequency.push(cf[term]);
            term.to_string()
        })
        .collect();
    Vocabulary {
        terms,
        ids,
        document_frequency,
        corpus_frequency,
    }
}

/// Count every token occurrence in the corpus.
pub fn term_frequencies(corpus: &Corpus) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for doc in &corpus.documents {
        for token in &doc.tokens {
            *counts.entry(token.clone()).or_insert(0) += 1;
        }
    }
    counts
}

/// The stopword list shipped with the crate.
pub fn default_stopwords() -> &'static HashSet<String> {
    static STOPWORDS: OnceLock<HashSet<String>> = OnceLock::new();
    STOPWORDS.get_or_init(|| {
        BUNDLED_STOPWORDS
            .lines()
            .map(|l| l.trim().to_ascii_lowercase())
            .filter(|l| !l.is_empty())
            .collect()
    })
}

/// Read a stopword file: one term per line, blank lines skipped.
pub fn load_stopwords(path: &Path) -> Result<HashSet<String>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_ascii_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}
