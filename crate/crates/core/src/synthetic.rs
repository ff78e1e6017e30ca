//! Deterministic synthetic corpora with planted topics.
//!
//! Documents are generated from disjoint per-topic vocabularies drawn from
//! the bundled frequency list's content band (stopwords and the most
//! frequent words excluded, so the planted structure survives vocabulary
//! filtering and insertion noise pollutes rather than overlaps it). Within
//! a topic, terms are sampled with Zipf-shaped weights; the weight order
//! defines the topic's generating ranked term list.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{default_stopwords, Corpus, Document};
use crate::lda::RankedTermList;
use crate::phonetics::FrequencyList;

#[derive(Debug, Error)]
pub enum SyntheticError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("lexicon too small: need {needed} eligible terms, have {available}")]
    LexiconTooSmall { needed: usize, available: usize },
}

/// Shape of a generated corpus.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub docs: usize,
    pub topics: usize,
    pub doc_len: usize,
    pub terms_per_topic: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<(), SyntheticError> {
        if self.docs == 0 || self.topics == 0 || self.doc_len == 0 || self.terms_per_topic == 0 {
            return Err(SyntheticError::InvalidSpec(
                "docs, topics, doc_len, and terms_per_topic must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// A generated corpus plus the ground-truth ranked term list per topic.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub generating_lists: Vec<RankedTermList>,
}

/// Most frequent eligible words reserved for noise rather than topics.
const RESERVED_HEAD: usize = 150;

/// Generate from the bundled frequency list.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCorpus, SyntheticError> {
    let stopwords = default_stopwords();
    let lexicon: Vec<String> = FrequencyList::bundled()
        .entries()
        .iter()
        .map(|(w, _)| w.clone())
        .filter(|w| !stopwords.contains(w))
        .collect();
    generate_from_lexicon(spec, &lexicon)
}

/// Generate from an explicit lexicon (eligible words, most frequent first).
/// Topic vocabularies are consecutive disjoint slices taken after a
/// reserved head of `RESERVED_HEAD` words.
pub fn generate_from_lexicon(
    spec: &SyntheticSpec,
    lexicon: &[String],
) -> Result<SyntheticCorpus, SyntheticError> {
    spec.validate()?;
    let skip = if lexicon.len() > RESERVED_HEAD + spec.topics * spec.terms_per_topic {
        RESERVED_HEAD
    } else {
        0
    };
    let needed = spec.topics * spec.terms_per_topic;
    let available = lexicon.len().saturating_sub(skip);
    if available < needed {
        return Err(SyntheticError::LexiconTooSmall { needed, available });
    }

    let topic_terms: Vec<Vec<String>> = (0..spec.topics)
        .map(|t| {
            let start = skip + t * spec.terms_per_topic;
            lexicon[start..start + spec.terms_per_topic].to_vec()
        })
        .collect();

    // Zipf-shaped weights; the descending weight order is the generating list
    let weights: Vec<f64> = (1..=spec.terms_per_topic)
        .map(|rank| 1.0 / rank as f64)
        .collect();
    let sampler = WeightedIndex::new(&weights).expect("positive weights");

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut documents = Vec::with_capacity(spec.docs);
    for d in 0..spec.docs {
        let topic = d % spec.topics;
        let words = &topic_terms[topic];
        let tokens: Vec<String> = (0..spec.doc_len)
            .map(|_| words[sampler.sample(&mut rng)].clone())
            .collect();
        documents.push(Document {
            id: format!("doc-{d:05}"),
            label: Some(format!("topic{topic:02}")),
            tokens,
        });
    }

    let generating_lists = topic_terms
        .into_iter()
        .map(|terms| RankedTermList::new(terms).expect("slice terms are distinct"))
        .collect();

    Ok(SyntheticCorpus {
        corpus: Corpus::new(format!("synthetic-{}", spec.seed), documents),
        generating_lists,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn shape_and_determinism() {
        let spec = SyntheticSpec {
            docs: 30,
            topics: 3,
            doc_len: 40,
            terms_per_topic: 20,
            seed: 5,
        };
        let a = generate(&spec).unwrap();
        assert_eq!(a.corpus.len(), 30);
        assert_eq!(a.corpus.total_tokens(), 30 * 40);
        assert_eq!(a.generating_lists.len(), 3);
        assert_eq!(a.generating_lists[0].len(), 20);

        let b = generate(&spec).unwrap();
        assert_eq!(a.corpus, b.corpus);

        let c = generate(&SyntheticSpec { seed: 6, ..spec }).unwrap();
        assert_ne!(a.corpus, c.corpus);
    }

    #[test]
    fn topics_are_disjoint_and_docs_stay_on_topic() {
        let spec = SyntheticSpec {
            docs: 12,
            topics: 4,
            doc_len: 25,
            terms_per_topic: 15,
            seed: 9,
        };
        let generated = generate(&spec).unwrap();
        let vocabularies: Vec<HashSet<&str>> = generated
            .generating_lists
            .iter()
            .map(|l| l.terms().iter().map(String::as_str).collect())
            .collect();
        for (i, a) in vocabularies.iter().enumerate() {
            for b in vocabularies.iter().skip(i + 1) {
                assert!(a.is_disjoint(b));
            }
        }
        for (d, doc) in generated.corpus.documents.iter().enumerate() {
            let topic = d % 4;
            for token in &doc.tokens {
                assert!(vocabularies[topic].contains(token.as_str()));
            }
        }
    }

    #[test]
    fn topic_words_survive_vocabulary_filtering() {
        let spec = SyntheticSpec {
            docs: 20,
            topics: 2,
            doc_len: 50,
            terms_per_topic: 10,
            seed: 1,
        };
        let generated = generate(&spec).unwrap();
        let vocab = crate::corpus::build_vocabulary(&generated.corpus, 1, default_stopwords());
        for list in &generated.generating_lists {
            for term in list.terms() {
                assert!(vocab.id(term).is_some(), "{term} filtered out");
            }
        }
    }

    #[test]
    fn oversized_request_is_rejected() {
        let spec = SyntheticSpec {
            docs: 1,
            topics: 100,
            doc_len: 1,
            terms_per_topic: 100,
            seed: 0,
        };
        assert!(matches!(
            generate(&spec),
            Err(SyntheticError::LexiconTooSmall { .. })
        ));
    }
}
