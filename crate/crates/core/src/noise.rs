//! Noise injection at a controlled word-error rate.
//!
//! Three single-channel corruptions, each deterministic given its seed:
//! deletion of uniformly chosen token positions, insertion of
//! frequency-weighted words at uniform gap positions, and replacement of
//! tokens by sound-alike words sharing their primary Metaphone code.
//! Counts are floored globally (`floor(rate * N)`), so the achieved
//! word-error rate is exact to within `1/N`; Metaphone replacement may
//! fall short when tokens run out of candidates, which the report
//! surfaces as `achieved_wer < rate`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::Corpus;
use crate::phonetics::{double_metaphone, FrequencyList, MetaphoneCode, MetaphoneIndex};

/// Noise rates above this are outside the supported range.
pub const MAX_RATE: f64 = 0.5;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("noise rate {0} outside [0, {MAX_RATE}]")]
    InvalidRate(f64),
    #[error("word error rate is undefined for an empty reference (N = 0)")]
    UndefinedRate,
    #[error("cannot corrupt an empty corpus")]
    EmptyCorpus,
    #[error("unknown noise kind {0:?} (expected deletion, insertion, or metaphone)")]
    UnknownKind(String),
    #[error("{kind} noise requires a frequency list")]
    MissingResource { kind: NoiseKind },
}

/// The three corruption channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NoiseKind {
    Deletion,
    Insertion,
    Metaphone,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 3] = [
        NoiseKind::Deletion,
        NoiseKind::Insertion,
        NoiseKind::Metaphone,
    ];
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            NoiseKind::Deletion => "deletion",
            NoiseKind::Insertion => "insertion",
            NoiseKind::Metaphone => "metaphone",
        };
        f.write_str(tag)
    }
}

impl FromStr for NoiseKind {
    type Err = NoiseError;

    fn from_str(s: &str) -> Result<NoiseKind, NoiseError> {
        match s {
            "deletion" => Ok(NoiseKind::Deletion),
            "insertion" => Ok(NoiseKind::Insertion),
            "metaphone" => Ok(NoiseKind::Metaphone),
            other => Err(NoiseError::UnknownKind(other.to_string())),
        }
    }
}

/// One corruption request: channel, target rate, and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub rate: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, rate: f64, seed: u64) -> Result<NoiseSpec, NoiseError> {
        check_rate(rate)?;
        Ok(NoiseSpec { kind, rate, seed })
    }
}

/// Exact bookkeeping for one injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseReport {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub reference_tokens: usize,
    pub achieved_wer: f64,
}

impl NoiseReport {
    pub const CSV_HEADER: &'static str = "kind,rate,seed,S,D,I,N,achieved_wer";

    /// One CSV row matching [`Self::CSV_HEADER`].
    pub fn csv_row(&self, kind: NoiseKind, rate: f64, seed: u64) -> String {
        format!(
            "{},{:.6},{},{},{},{},{},{:.6}",
            kind,
            rate,
            seed,
            self.substitutions,
            self.deletions,
            self.insertions,
            self.reference_tokens,
            self.achieved_wer
        )
    }
}

/// Word error rate `(S + D + I) / N`. May exceed 1.
pub fn wer(
    substitutions: usize,
    deletions: usize,
    insertions: usize,
    reference_tokens: usize,
) -> Result<f64, NoiseError> {
    if reference_tokens == 0 {
        return Err(NoiseError::UndefinedRate);
    }
    Ok((substitutions + deletions + insertions) as f64 / reference_tokens as f64)
}

fn check_rate(rate: f64) -> Result<(), NoiseError> {
    if !(0.0..=MAX_RATE).contains(&rate) {
        return Err(NoiseError::InvalidRate(rate));
    }
    Ok(())
}

fn noisy_name(base: &str, kind: NoiseKind, rate: f64, seed: u64) -> String {
    format!("{base}-{kind}-{:.0}pct-s{seed}", rate * 100.0)
}

/// Remove `floor(rate * N)` token positions, chosen uniformly without
/// replacement across the whole corpus. Document order and the order of
/// surviving tokens are preserved.
pub fn inject_deletion(
    corpus: &Corpus,
    rate: f64,
    seed: u64,
) -> Result<(Corpus, NoiseReport), NoiseError> {
    check_rate(rate)?;
    let total = corpus.total_tokens();
    if total == 0 {
        return Err(NoiseError::EmptyCorpus);
    }
    let deletions = (rate * total as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut doomed = vec![false; total];
    for pos in rand::seq::index::sample(&mut rng, total, deletions) {
        doomed[pos] = true;
    }

    let mut noisy = corpus.clone();
    noisy.name = noisy_name(&corpus.name, NoiseKind::Deletion, rate, seed);
    let mut offset = 0usize;
    for doc in &mut noisy.documents {
        let len = doc.tokens.len();
        let mut kept = Vec::with_capacity(len);
        for (i, token) in doc.tokens.drain(..).enumerate() {
            if !doomed[offset + i] {
                kept.push(token);
            }
        }
        doc.tokens = kept;
        offset += len;
    }

    let report = NoiseReport {
        substitutions: 0,
        deletions,
        insertions: 0,
        reference_tokens: total,
        achieved_wer: wer(0, deletions, 0, total)?,
    };
    Ok((noisy, report))
}

/// Insert `floor(rate * N)` tokens. Each inserted term is drawn with
/// probability proportional to its list frequency (with replacement); each
/// position is drawn uniformly over all gap positions in the corpus
/// (before or after any token, in any document).
pub fn inject_insertion(
    corpus: &Corpus,
    rate: f64,
    list: &FrequencyList,
    seed: u64,
) -> Result<(Corpus, NoiseReport), NoiseError> {
    check_rate(rate)?;
    let total = corpus.total_tokens();
    if total == 0 {
        return Err(NoiseError::EmptyCorpus);
    }
    let insertions = (rate * total as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = WeightedIndex::new(list.entries().iter().map(|(_, f)| *f))
        .expect("frequency list weights are positive");

    // one gap before every token plus one at each document end
    let total_gaps = total + corpus.len();
    let mut events: Vec<(usize, usize)> = (0..insertions)
        .map(|_| {
            let gap = rng.gen_range(0..total_gaps);
            let term = weights.sample(&mut rng);
            (gap, term)
        })
        .collect();
    events.sort_by_key(|&(gap, _)| gap); // stable sort: ties keep draw order

    let mut noisy = corpus.clone();
    noisy.name = noisy_name(&corpus.name, NoiseKind::Insertion, rate, seed);
    let mut next_event = 0usize;
    let mut gap_base = 0usize;
    for doc in &mut noisy.documents {
        let len = doc.tokens.len();
        let gap_end = gap_base + len; // this doc owns gaps [gap_base, gap_end]
        let mut rebuilt = Vec::with_capacity(len);
        for (i, token) in doc.tokens.drain(..).enumerate() {
            while next_event < events.len() && events[next_event].0 == gap_base + i {
                rebuilt.push(list.entries()[events[next_event].1].0.clone());
                next_event += 1;
            }
            rebuilt.push(token);
        }
        while next_event < events.len() && events[next_event].0 == gap_end {
            rebuilt.push(list.entries()[events[next_event].1].0.clone());
            next_event += 1;
        }
        doc.tokens = rebuilt;
        gap_base = gap_end + 1;
    }
    debug_assert_eq!(next_event, events.len());

    let report = NoiseReport {
        substitutions: 0,
        deletions: 0,
        insertions,
        reference_tokens: total,
        achieved_wer: wer(0, 0, insertions, total)?,
    };
    Ok((noisy, report))
}

/// Replace up to `floor(rate * N)` tokens by sound-alike terms. Positions
/// are visited in a random order without replacement; a position whose
/// token has no candidate (unknown code, or the token is the bucket's only
/// member) is skipped and another position is tried, so the substitution
/// count may fall short of the target. Candidates are drawn with
/// probability proportional to their list frequency and are never equal to
/// the original token. The token count N is unchanged.
pub fn inject_metaphone(
    corpus: &Corpus,
    rate: f64,
    index: &MetaphoneIndex,
    seed: u64,
) -> Result<(Corpus, NoiseReport), NoiseError> {
    check_rate(rate)?;
    let total = corpus.total_tokens();
    if total == 0 {
        return Err(NoiseError::EmptyCorpus);
    }
    let target = (rate * total as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut noisy = corpus.clone();
    noisy.name = noisy_name(&corpus.name, NoiseKind::Metaphone, rate, seed);

    // visiting a shuffled permutation = uniform draws without replacement,
    // retrying failed positions over the remaining ones
    let mut positions: Vec<(u32, u32)> = Vec::with_capacity(total);
    for (d, doc) in noisy.documents.iter().enumerate() {
        for t in 0..doc.tokens.len() {
            positions.push((d as u32, t as u32));
        }
    }
    rand::seq::SliceRandom::shuffle(&mut positions[..], &mut rng);

    let mut code_cache: HashMap<String, Option<MetaphoneCode>> = HashMap::new();
    let mut substitutions = 0usize;
    for &(d, t) in &positions {
        if substitutions >= target {
            break;
        }
        let token = &noisy.documents[d as usize].tokens[t as usize];
        let code = code_cache
            .entry(token.clone())
            .or_insert_with(|| double_metaphone(token).ok().map(|c| c.primary))
            .clone();
        let Some(code) = code else { continue };
        let Some(bucket) = index.bucket(&code) else { continue };
        let candidates: Vec<&(String, u64)> =
            bucket.iter().filter(|(term, _)| term != token).collect();
        if candidates.is_empty() {
            continue;
        }
        let weights = WeightedIndex::new(candidates.iter().map(|(_, f)| *f))
            .expect("bucket frequencies are positive");
        let choice = weights.sample(&mut rng);
        noisy.documents[d as usize].tokens[t as usize] = candidates[choice].0.clone();
        substitutions += 1;
    }

    let report = NoiseReport {
        substitutions,
        deletions: 0,
        insertions: 0,
        reference_tokens: total,
        achieved_wer: wer(substitutions, 0, 0, total)?,
    };
    Ok((noisy, report))
}

/// Dispatch one [`NoiseSpec`] to its injector. Insertion and Metaphone
/// need the frequency list; omitting it for those kinds is an error.
pub fn apply_noise(
    corpus: &Corpus,
    spec: &NoiseSpec,
    list: Option<&FrequencyList>,
) -> Result<(Corpus, NoiseReport), NoiseError> {
    match spec.kind {
        NoiseKind::Deletion => inject_deletion(corpus, spec.rate, spec.seed),
        NoiseKind::Insertion => {
            let list = list.ok_or(NoiseError::MissingResource {
                kind: NoiseKind::Insertion,
            })?;
            inject_insertion(corpus, spec.rate, list, spec.seed)
        }
        NoiseKind::Metaphone => {
            let list = list.ok_or(NoiseError::MissingResource {
                kind: NoiseKind::Metaphone,
            })?;
            let index = crate::phonetics::build_metaphone_index(list);
            inject_metaphone(corpus, spec.rate, &index, spec.seed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;
    use crate::phonetics::build_metaphone_index;
    use std::collections::HashMap;

    fn corpus_of(token_lists: &[&[&str]]) -> Corpus {
        let documents = token_lists
            .iter()
            .enumerate()
            .map(|(i, tokens)| Document {
                id: format!("d{i:03}"),
                label: None,
                tokens: tokens.iter().map(|t| t.to_string()).collect(),
            })
            .collect();
        Corpus::new("test", documents)
    }

    fn token_counts(corpus: &Corpus) -> HashMap<String, usize> {
        crate::corpus::term_frequencies(corpus)
    }

    #[test]
    fn wer_examples() {
        assert_eq!(wer(3, 2, 1, 20).unwrap(), 0.30);
        assert_eq!(wer(0, 0, 0, 100).unwrap(), 0.0);
        assert_eq!(wer(0, 50, 0, 100).unwrap(), 0.5);
        assert!(matches!(wer(1, 0, 0, 0), Err(NoiseError::UndefinedRate)));
    }

    #[test]
    fn rate_out_of_range_is_rejected() {
        let corpus = corpus_of(&[&["aa", "bb"]]);
        assert!(matches!(
            inject_deletion(&corpus, 0.6, 1),
            Err(NoiseError::InvalidRate(_))
        ));
        assert!(matches!(
            inject_deletion(&corpus, -0.1, 1),
            Err(NoiseError::InvalidRate(_))
        ));
        assert!(NoiseSpec::new(NoiseKind::Deletion, 0.7, 1).is_err());
    }

    #[test]
    fn deletion_rate_zero_is_identity() {
        let corpus = corpus_of(&[&["aa", "bb"], &["cc"]]);
        let (noisy, report) = inject_deletion(&corpus, 0.0, 7).unwrap();
        assert_eq!(noisy.documents, corpus.documents);
        assert_eq!(report.achieved_wer, 0.0);
    }

    #[test]
    fn deletion_counts_and_multiset_oracle() {
        let tokens: Vec<String> = (0..1000).map(|i| format!("tok{:03}", i % 50)).collect();
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let corpus = corpus_of(&[&refs[..400], &refs[400..]]);
        let (noisy, report) = inject_deletion(&corpus, 0.5, 3).unwrap();
        assert_eq!(noisy.total_tokens(), 500);
        assert_eq!(report.deletions, 500);
        assert_eq!(report.achieved_wer, 0.5);

        // multiset difference: every surviving count bounded by the original
        let before = token_counts(&corpus);
        let after = token_counts(&noisy);
        for (tok, count) in &after {
            assert!(count <= &before[tok]);
        }
        let removed: usize = before.values().sum::<usize>() - after.values().sum::<usize>();
        assert_eq!(removed, 500);

        // deterministic under the same seed
        let (again, _) = inject_deletion(&corpus, 0.5, 3).unwrap();
        assert_eq!(again.documents, noisy.documents);
        let (other, _) = inject_deletion(&corpus, 0.5, 4).unwrap();
        assert_ne!(other.documents, noisy.documents);
    }

    #[test]
    fn deletion_preserves_remaining_order() {
        let corpus = corpus_of(&[&["aa", "bb", "cc", "dd", "ee", "ff", "gg", "hh"]]);
        let (noisy, _) = inject_deletion(&corpus, 0.5, 11).unwrap();
        // the survivors appear in original relative order
        let original = &corpus.documents[0].tokens;
        let survivors = &noisy.documents[0].tokens;
        let mut cursor = 0;
        for want in survivors {
            cursor += original[cursor..]
                .iter()
                .position(|t| t == want)
                .expect("survivor token comes from the original in order")
                + 1;
        }
    }

    #[test]
    fn insertion_counts_membership_and_subsequence() {
        let list =
            FrequencyList::from_entries([("the", 100u64), ("of", 50), ("and", 25)], "test")
                .unwrap();
        let tokens: Vec<String> = (0..500).map(|i| format!("word{:02}", i % 20)).collect();
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let corpus = corpus_of(&[&refs[..100], &refs[100..350], &refs[350..]]);

        let (noisy, report) = inject_insertion(&corpus, 0.2, &list, 9).unwrap();
        assert_eq!(noisy.total_tokens(), 600);
        assert_eq!(report.insertions, 100);
        assert_eq!(report.achieved_wer, 0.2);

        // every added token is a list member
        let list_words: Vec<&str> = list.entries().iter().map(|(w, _)| w.as_str()).collect();
        for doc in &noisy.documents {
            for tok in &doc.tokens {
                assert!(tok.starts_with("word") || list_words.contains(&tok.as_str()));
            }
        }

        // original corpus is a subsequence of the noisy corpus, per document
        for (orig, noisy_doc) in corpus.documents.iter().zip(&noisy.documents) {
            let mut it = noisy_doc.tokens.iter();
            for want in &orig.tokens {
                assert!(it.any(|t| t == want), "token {want} lost");
            }
        }

        let (again, _) = inject_insertion(&corpus, 0.2, &list, 9).unwrap();
        assert_eq!(again.documents, noisy.documents);
    }

    #[test]
    fn insertion_degenerate_list_forces_the_term() {
        let list = FrequencyList::from_entries([("the", 1u64)], "test").unwrap();
        let corpus = corpus_of(&[&["aa"; 50]]);
        let (noisy, report) = inject_insertion(&corpus, 0.1, &list, 1).unwrap();
        assert_eq!(report.insertions, 5);
        let added: Vec<&String> = noisy.documents[0]
            .tokens
            .iter()
            .filter(|t| *t != "aa")
            .collect();
        assert_eq!(added.len(), 5);
        assert!(added.iter().all(|t| *t == "the"));
    }

    #[test]
    fn insertion_rate_zero_is_identity() {
        let list = FrequencyList::from_entries([("the", 1u64)], "test").unwrap();
        let corpus = corpus_of(&[&["aa", "bb"]]);
        let (noisy, _) = inject_insertion(&corpus, 0.0, &list, 1).unwrap();
        assert_eq!(noisy.documents, corpus.documents);
    }

    #[test]
    fn metaphone_replacements_share_primary_code() {
        // bucket-rich list: sound-alike clusters
        let list = FrequencyList::from_entries(
            [
                ("right", 50u64),
                ("rate", 40),
                ("root", 30),
                ("form", 20),
                ("farm", 10),
                ("firm", 5),
                ("lonely", 1),
            ],
            "test",
        )
        .unwrap();
        let index = build_metaphone_index(&list);
        let corpus = corpus_of(&[
            &["right", "form", "right", "farm", "rate", "firm", "root", "form"],
            &["farm", "rate", "right", "form", "root", "firm", "rate", "farm"],
        ]);
        let (noisy, report) = inject_metaphone(&corpus, 0.3, &index, 5).unwrap();
        assert_eq!(noisy.total_tokens(), corpus.total_tokens());
        assert_eq!(report.substitutions, 4); // floor(0.3 * 16)
        assert_eq!(report.achieved_wer, 0.25);

        // per-position oracle: re-encode both sides of every change
        let mut changed = 0;
        for (orig, new) in corpus.documents.iter().zip(&noisy.documents) {
            for (a, b) in orig.tokens.iter().zip(&new.tokens) {
                if a != b {
                    changed += 1;
                    let ca = double_metaphone(a).unwrap().primary;
                    let cb = double_metaphone(b).unwrap().primary;
                    assert_eq!(ca, cb, "{a} -> {b} changed the primary code");
                }
            }
        }
        assert_eq!(changed, report.substitutions);

        let (again, _) = inject_metaphone(&corpus, 0.3, &index, 5).unwrap();
        assert_eq!(again.documents, noisy.documents);
    }

    #[test]
    fn metaphone_exhaustion_reports_shortfall() {
        // every token's bucket contains only itself
        let list = FrequencyList::from_entries([("lonely", 10u64)], "test").unwrap();
        let index = build_metaphone_index(&list);
        let corpus = corpus_of(&[&["lonely"; 10]]);
        let (noisy, report) = inject_metaphone(&corpus, 0.5, &index, 2).unwrap();
        assert_eq!(noisy.documents, corpus.documents);
        assert_eq!(report.substitutions, 0);
        assert_eq!(report.achieved_wer, 0.0);
    }

    #[test]
    fn metaphone_rate_zero_is_identity() {
        let list = FrequencyList::from_entries([("right", 1u64), ("rate", 1)], "test").unwrap();
        let index = build_metaphone_index(&list);
        let corpus = corpus_of(&[&["right", "rate"]]);
        let (noisy, report) = inject_metaphone(&corpus, 0.0, &index, 2).unwrap();
        assert_eq!(noisy.documents, corpus.documents);
        assert_eq!(report.achieved_wer, 0.0);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        let corpus = Corpus::new("empty", vec![]);
        assert!(matches!(
            inject_deletion(&corpus, 0.1, 1),
            Err(NoiseError::EmptyCorpus)
        ));
    }

    #[test]
    fn achieved_wer_matches_alignment_free_recount() {
        let list = FrequencyList::bundled();
        let index = build_metaphone_index(list);
        let tokens: Vec<String> = list
            .entries()
            .iter()
            .cycle()
            .take(2000)
            .map(|(w, _)| w.clone())
            .collect();
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        let corpus = corpus_of(&[&refs[..900], &refs[900..]]);
        let n = corpus.total_tokens() as f64;

        let (noisy, report) = inject_deletion(&corpus, 0.25, 1).unwrap();
        assert_eq!(
            report.achieved_wer,
            (corpus.total_tokens() - noisy.total_tokens()) as f64 / n
        );

        let (noisy, report) = inject_insertion(&corpus, 0.25, list, 1).unwrap();
        assert_eq!(
            report.achieved_wer,
            (noisy.total_tokens() - corpus.total_tokens()) as f64 / n
        );

        let (noisy, report) = inject_metaphone(&corpus, 0.25, &index, 1).unwrap();
        let differing: usize = corpus
            .documents
            .iter()
            .zip(&noisy.documents)
            .map(|(a, b)| {
                a.tokens
                    .iter()
                    .zip(&b.tokens)
                    .filter(|(x, y)| x != y)
                    .count()
            })
            .sum();
        assert_eq!(report.achieved_wer, differing as f64 / n);
        assert!(report.achieved_wer <= 0.25);
    }

    #[test]
    fn report_csv_row_shape() {
        let report = NoiseReport {
            substitutions: 0,
            deletions: 50,
            insertions: 0,
            reference_tokens: 1000,
            achieved_wer: 0.05,
        };
        assert_eq!(
            report.csv_row(NoiseKind::Deletion, 0.05, 42),
            "deletion,0.050000,42,0,50,0,1000,0.050000"
        );
    }
}
