//! Regression vector for the Double Metaphone encoder.
//!
//! `data/metaphone_reference.tsv` holds `word<TAB>primary<TAB>alternate`
//! codes obtained from an independent port of the algorithm (run
//! separately and frozen here). The encoder must reproduce every row.

use topicstab::phonetics::double_metaphone;

#[test]
fn encoder_matches_frozen_reference_codes() {
    let reference = include_str!("data/metaphone_reference.tsv");
    let mut checked = 0;
    for line in reference.lines() {
        let mut fields = line.split('\t');
        let word = fields.next().expect("word column");
        let want_primary = fields.next().expect("primary column");
        let want_alternate = fields.next().expect("alternate column");

        let codes = double_metaphone(word).unwrap_or_else(|e| panic!("{word}: {e}"));
        let got_primary = codes.primary.as_str().to_string();
        let got_alternate = codes
            .alternate
            .map(|a| a.as_str().to_string())
            .unwrap_or_else(|| got_primary.clone());

        assert_eq!(got_primary, want_primary, "primary code for {word:?}");
        assert_eq!(got_alternate, want_alternate, "alternate code for {word:?}");
        checked += 1;
    }
    assert!(checked >= 100, "regression vector too small: {checked}");
}
