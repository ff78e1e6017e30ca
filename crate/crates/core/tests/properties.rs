//! Property tests for the invariants that hold over arbitrary inputs.

use std::collections::HashSet;

use proptest::collection::vec;
use proptest::prelude::*;

use topicstab::agreement::{agreement_between_lists, average_jaccard};
use topicstab::corpus::{build_vocabulary, term_frequencies, tokenize, Corpus, Document};
use topicstab::lda::RankedTermList;
use topicstab::phonetics::double_metaphone;

fn ranked_list(max_len: usize) -> impl Strategy<Value = RankedTermList> {
    // draw distinct indices into a fixed term pool
    proptest::collection::hash_set(0usize..30, 1..=max_len).prop_map(|indices| {
        let terms = indices.into_iter().map(|i| format!("w{i:02}")).collect();
        RankedTermList::new(terms).expect("distinct by construction")
    })
}

proptest! {
    #[test]
    fn tokenize_is_idempotent_on_its_own_output(raw in ".{0,120}") {
        let once = tokenize(&raw);
        let twice = tokenize(&once.join(" "));
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn tokens_are_normalized(raw in ".{0,120}") {
        for token in tokenize(&raw) {
            prop_assert!(token.len() >= 2);
            prop_assert!(token.bytes().all(|b| b.is_ascii_lowercase()));
        }
    }

    #[test]
    fn corpus_frequencies_sum_to_token_count(
        docs in vec(vec("[a-z]{2,6}", 0..20), 1..8)
    ) {
        let documents: Vec<Document> = docs
            .into_iter()
            .enumerate()
            .map(|(i, tokens)| Document { id: format!("d{i}"), label: None, tokens })
            .collect();
        let corpus = Corpus::new("prop", documents);
        let n: usize = term_frequencies(&corpus).values().sum();
        prop_assert_eq!(n, corpus.total_tokens());

        // unfiltered vocabulary agrees with the frequency map
        let vocab = build_vocabulary(&corpus, 1, &HashSet::new());
        let total: usize = vocab
            .terms()
            .iter()
            .map(|t| vocab.corpus_frequency(t).unwrap())
            .sum();
        prop_assert_eq!(total, corpus.total_tokens());
    }

    #[test]
    fn encoding_is_total_and_deterministic(word in "[a-zA-Z]{1,16}") {
        let first = double_metaphone(&word);
        let second = double_metaphone(&word);
        match (first, second) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a, &b);
                prop_assert!(a.primary.as_str().len() <= 4);
            }
            (Err(_), Err(_)) => {} // silent words flag consistently
            _ => prop_assert!(false, "encoding not deterministic"),
        }
    }

    #[test]
    fn average_jaccard_is_symmetric_and_unit_bounded(
        a in ranked_list(12),
        b in ranked_list(12),
    ) {
        let ab = average_jaccard(&a, &b).unwrap();
        let ba = average_jaccard(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        // 1 exactly when the compared prefixes are identical element-wise
        let d = a.len().min(b.len());
        let identical = a.terms()[..d] == b.terms()[..d];
        prop_assert_eq!(ab == 1.0, identical);
    }

    #[test]
    fn agreement_scores_and_matchings_are_well_formed(
        lists_a in vec(ranked_list(8), 1..5),
        lists_b in vec(ranked_list(8), 1..5),
    ) {
        prop_assume!(lists_a.len() == lists_b.len());
        let result = agreement_between_lists(&lists_a, &lists_b).unwrap();
        prop_assert!((0.0..=1.0).contains(&result.score));
        let seen: HashSet<usize> = result.matching.iter().copied().collect();
        prop_assert_eq!(seen.len(), lists_a.len()); // bijection
        let mean = result.per_pair.iter().sum::<f64>() / lists_a.len() as f64;
        prop_assert!((result.score - mean).abs() < 1e-12);
    }
}
