//! Phonetic encoding and the sound-alike replacement dictionary.
//!
//! Words are encoded with the Double Metaphone algorithm; a word-frequency
//! list is then inverted into a [`MetaphoneIndex`] mapping each primary code
//! to its frequency-ranked candidate terms. The index drives sound-alike
//! substitution in the noise channel.

mod double_metaphone;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use thiserror::Error;

use crate::corpus::tokenize;

pub use double_metaphone::MAX_CODE_LEN;

/// Bundled general-English word frequency list (word, count per line).
const BUNDLED_FREQUENCY_LIST: &str = include_str!("../../data/frequency_list.tsv");

#[derive(Debug, Error)]
pub enum PhoneticsError {
    #[error("word {0:?} has no phonetic encoding (empty or non-alphabetic)")]
    Unencodable(String),
    #[error("cannot read frequency list {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("frequency list {path} contains no valid entries ({skipped} lines skipped)")]
    EmptyFrequencyList { path: PathBuf, skipped: usize },
    #[error("frequency column {column} out of range for line {line}")]
    BadColumn { column: usize, line: usize },
}

/// A Double Metaphone code: at most four symbols over `A B F H J K L M N P R S T X 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaphoneCode(String);

impl MetaphoneCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MetaphoneCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Primary and (when the algorithm branches) alternate code for one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaphoneCodes {
    pub primary: MetaphoneCode,
    /// `None` when the alternate pronunciation collapses to the primary.
    pub alternate: Option<MetaphoneCode>,
}

/// Encode a word with Double Metaphone. Case-insensitive and deterministic;
/// codes are truncated at [`MAX_CODE_LEN`] symbols.
///
/// Errors when the input contains no encodable letters.
pub fn double_metaphone(word: &str) -> Result<MetaphoneCodes, PhoneticsError> {
    let (primary, alternate) = double_metaphone::encode(word);
    if primary.is_empty() && alternate.is_empty() {
        return Err(PhoneticsError::Unencodable(word.to_string()));
    }
    let alternate = if alternate == primary {
        None
    } else {
        Some(MetaphoneCode(alternate))
    };
    Ok(MetaphoneCodes {
        primary: MetaphoneCode(primary),
        alternate,
    })
}

/// An ordered word-frequency table. Entries keep first-appearance order;
/// duplicate words are merged by summing. Never empty once constructed.
#[derive(Debug, Clone)]
pub struct FrequencyList {
    entries: Vec<(String, u64)>,
    source: String,
    skipped_lines: usize,
}

impl FrequencyList {
    /// Build from raw `(word, frequency)` pairs, applying the same
    /// normalization and merge rules as [`load_frequency_list`].
    pub fn from_entries<I, S>(pairs: I, source: &str) -> Result<FrequencyList, PhoneticsError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut entries: Vec<(String, u64)> = Vec::new();
        let mut by_word: HashMap<String, usize> = HashMap::new();
        let mut skipped = 0usize;
        for (word, freq) in pairs {
            let tokens = tokenize(word.as_ref());
            if tokens.len() != 1 || freq == 0 {
                skipped += 1;
                continue;
            }
            let word = tokens.into_iter().next().unwrap();
            match by_word.get(&word) {
                Some(&slot) => entries[slot].1 += freq,
                None => {
                    by_word.insert(word.clone(), entries.len());
                    entries.push((word, freq));
                }
            }
        }
        if entries.is_empty() {
            return Err(PhoneticsError::EmptyFrequencyList {
                path: PathBuf::from(source),
                skipped,
            });
        }
        Ok(FrequencyList {
            entries,
            source: source.to_string(),
            skipped_lines: skipped,
        })
    }

    /// The frequency list shipped with the crate.
    pub fn bundled() -> &'static FrequencyList {
        static BUNDLED: OnceLock<FrequencyList> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            parse_frequency_list(BUNDLED_FREQUENCY_LIST, "builtin", None)
                .expect("bundled frequency list is valid")
        })
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Lines dropped during parsing (malformed, non-word, zero frequency).
    pub fn skipped_lines(&self) -> usize {
        self.skipped_lines
    }
}

/// Parse a frequency list file: one record per line, word in the first
/// field, integer frequency in the last numeric field (or in `freq_column`
/// when given). Lines starting with `#` and blank lines are ignored;
/// malformed lines are skipped and counted.
pub fn load_frequency_list(path: &Path) -> Result<FrequencyList, PhoneticsError> {
    load_frequency_list_with(path, None)
}

/// As [`load_frequency_list`], with an explicit zero-based frequency column.
pub fn load_frequency_list_with(
    path: &Path,
    freq_column: Option<usize>,
) -> Result<FrequencyList, PhoneticsError> {
    let text = std::fs::read_to_string(path).map_err(|source| PhoneticsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_frequency_list(&text, &path.display().to_string(), freq_column)
}

fn parse_frequency_list(
    text: &str,
    source: &str,
    freq_column: Option<usize>,
) -> Result<FrequencyList, PhoneticsError> {
    let mut pairs: Vec<(String, u64)> = Vec::new();
    let mut skipped = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let freq = match freq_column {
            Some(col) => fields.get(col).and_then(|f| f.parse::<u64>().ok()),
            None => fields
                .iter()
                .skip(1)
                .rev()
                .find_map(|f| f.parse::<u64>().ok()),
        };
        match (fields.first(), freq) {
            (Some(word), Some(freq)) if freq > 0 => pairs.push((word.to_string(), freq)),
            _ => skipped += 1,
        }
    }
    if pairs.is_empty() {
        return Err(PhoneticsError::EmptyFrequencyList {
            path: PathBuf::from(source),
            skipped,
        });
    }
    let mut list = FrequencyList::from_entries(pairs, source)?;
    list.skipped_lines += skipped;
    Ok(list)
}

/// Primary code → candidate terms, each bucket sorted by descending
/// frequency (ties lexicographic). Every indexed term appears in exactly
/// one bucket: the one keyed by its primary code.
#[derive(Debug, Clone)]
pub struct MetaphoneIndex {
    buckets: HashMap<String, Vec<(String, u64)>>,
    indexed_terms: usize,
}

/// Invert a frequency list into a [`MetaphoneIndex`]. Terms that cannot be
/// encoded are skipped.
pub fn build_metaphone_index(list: &FrequencyList) -> MetaphoneIndex {
    let mut buckets: HashMap<String, Vec<(String, u64)>> = HashMap::new();
    let mut indexed = 0usize;
    for (term, freq) in list.entries() {
        if let Ok(codes) = double_metaphone(term) {
            buckets
                .entry(codes.primary.0)
                .or_default()
                .push((term.clone(), *freq));
            indexed += 1;
        }
    }
    for bucket in buckets.values_mut() {
        bucket.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    }
    MetaphoneIndex {
        buckets,
        indexed_terms: indexed,
    }
}

impl MetaphoneIndex {
    /// Candidates for a code, most frequent first. `None` for unknown codes.
    pub fn bucket(&self, code: &MetaphoneCode) -> Option<&[(String, u64)]> {
        self.buckets.get(code.as_str()).map(Vec::as_slice)
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }

    /// Total number of indexed terms across all buckets.
    pub fn len(&self) -> usize {
        self.indexed_terms
    }

    pub fn is_empty(&self) -> bool {
        self.indexed_terms == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[(String, u64)])> {
        self.buckets.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_flags_empty_input() {
        assert!(matches!(
            double_metaphone(""),
            Err(PhoneticsError::Unencodable(_))
        ));
        assert!(double_metaphone("creative").is_ok());
    }

    #[test]
    fn alternate_collapses_when_equal() {
        let codes = double_metaphone("industry").unwrap();
        assert_eq!(codes.primary.as_str(), "ANTS");
        assert_eq!(codes.alternate, None);

        let codes = double_metaphone("smith").unwrap();
        assert_eq!(codes.primary.as_str(), "SM0");
        assert_eq!(codes.alternate.unwrap().as_str(), "XMT");
    }

    #[test]
    fn frequency_list_keeps_order_and_merges_duplicates() {
        let list =
            FrequencyList::from_entries([("the", 61847u64), ("of", 29391)], "test").unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list.entries()[0], ("the".to_string(), 61847));

        let merged =
            FrequencyList::from_entries([("bank", 10u64), ("bank", 5)], "test").unwrap();
        assert_eq!(merged.entries(), &[("bank".to_string(), 15)]);
    }

    #[test]
    fn frequency_list_parses_tabs_comments_and_skips_malformed() {
        let text = "# header\nthe\t61847\nof 29391\n\nbad-line\nzero 0\nxy 12 34\n";
        let list = parse_frequency_list(text, "test", None).unwrap();
        // "bad-line" tokenizes to two tokens and has no numeric field; "zero 0" is dropped.
        assert_eq!(list.len(), 3);
        assert_eq!(list.entries()[2], ("xy".to_string(), 34));
        assert_eq!(list.skipped_lines(), 2);
    }

    #[test]
    fn frequency_list_explicit_column() {
        let text = "word 10 20\nother 1 2\n";
        let list = parse_frequency_list(text, "test", Some(1)).unwrap();
        assert_eq!(list.entries()[0], ("word".to_string(), 10));
    }

    #[test]
    fn empty_frequency_list_is_an_error() {
        assert!(matches!(
            parse_frequency_list("# nothing\n", "test", None),
            Err(PhoneticsError::EmptyFrequencyList { .. })
        ));
    }

    #[test]
    fn index_groups_by_primary_code_and_sorts_by_frequency() {
        let list = FrequencyList::from_entries(
            [("industry", 50u64), ("induced", 20), ("units", 70)],
            "test",
        )
        .unwrap();
        let index = build_metaphone_index(&list);
        let code = double_metaphone("industry").unwrap().primary;
        let bucket = index.bucket(&code).unwrap();
        assert_eq!(
            bucket,
            &[
                ("units".to_string(), 70),
                ("industry".to_string(), 50),
                ("induced".to_string(), 20)
            ]
        );
    }

    #[test]
    fn index_is_a_partition() {
        let list = FrequencyList::bundled();
        let index = build_metaphone_index(list);
        let total: usize = index.iter().map(|(_, b)| b.len()).sum();
        assert_eq!(total, index.len());
        assert_eq!(total, list.len());
        // every term's primary code equals its bucket key, frequencies non-increasing
        for (code, bucket) in index.iter() {
            for pair in bucket.windows(2) {
                assert!(pair[0].1 >= pair[1].1);
            }
            for (term, _) in bucket {
                assert_eq!(double_metaphone(term).unwrap().primary.as_str(), code);
            }
        }
    }

    #[test]
    fn bundled_list_loads() {
        let list = FrequencyList::bundled();
        assert!(list.len() > 1000);
        assert_eq!(list.entries()[0].0, "the");
    }
}
