//! Similarity between topic models.
//!
//! Ranked term lists are compared with Average Jaccard: the mean of plain
//! Jaccard scores over all top-t prefixes, which weights early ranks more
//! heavily because they appear in every prefix. Two models are compared by
//! building the all-pairs Average Jaccard matrix and finding the topic
//! bijection that maximizes the total similarity (exact assignment, not a
//! greedy matching); the agreement score is the mean matched similarity,
//! 1 for identical models and 0 for models with disjoint vocabularies.

use std::collections::HashSet;
use std::hash::Hash;

use thiserror::Error;

use crate::hungarian;
use crate::lda::{RankedTermList, TopicModel};

#[derive(Debug, Error)]
pub enum AgreementError {
    #[error("ranked term lists must be non-empty")]
    EmptyList,
    #[error("topic counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Plain Jaccard similarity `|A∩B| / |A∪B|`; 1 when both sets are empty.
pub fn jaccard<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let intersection = a.intersection(b).count();
    let union = a.len() + b.len() - intersection;
    intersection as f64 / union as f64
}

/// Top-weighted Average Jaccard over two ranked lists:
/// `(1/d) * sum_{t=1..d} jaccard(prefix(A,t), prefix(B,t))`.
///
/// Lists of unequal length are truncated to the shorter one. Empty lists
/// are an error.
pub fn average_jaccard(a: &RankedTermList, b: &RankedTermList) -> Result<f64, AgreementError> {
    if a.is_empty() || b.is_empty() {
        return Err(AgreementError::EmptyList);
    }
    let depth = a.len().min(b.len());
    let mut seen_a: HashSet<&str> = HashSet::with_capacity(depth);
    let mut seen_b: HashSet<&str> = HashSet::with_capacity(depth);
    let mut intersection = 0usize;
    let mut sum = 0.0;
    for t in 0..depth {
        let term_a = a.terms()[t].as_str();
        let term_b = b.terms()[t].as_str();
        // a term joins the intersection exactly once: at the later of its
        // two insertions (terms are distinct within each list)
        if seen_b.contains(term_a) {
            intersection += 1;
        }
        seen_a.insert(term_a);
        if seen_a.contains(term_b) {
            intersection += 1;
        }
        seen_b.insert(term_b);
        let union = 2 * (t + 1) - intersection;
        sum += intersection as f64 / union as f64;
    }
    Ok(sum / depth as f64)
}

/// All-pairs Average Jaccard between two sequences of ranked lists.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    k: usize,
    values: Vec<f64>,
    pub row_model: String,
    pub col_model: String,
}

impl SimilarityMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.k + col]
    }

    /// Build directly from values, for callers that already have a matrix.
    pub fn from_values(
        values: Vec<Vec<f64>>,
        row_model: &str,
        col_model: &str,
    ) -> Result<SimilarityMatrix, AgreementError> {
        let k = values.len();
        let mut flat = Vec::with_capacity(k * k);
        for row in &values {
            if row.len() != k {
                return Err(AgreementError::DimensionMismatch {
                    left: k,
                    right: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Ok(SimilarityMatrix {
            k,
            values: flat,
            row_model: row_model.to_string(),
            col_model: col_model.to_string(),
        })
    }
}

/// Entry `(i, j)` is `average_jaccard(s1[i], s2[j])`.
pub fn similarity_matrix(
    s1: &[RankedTermList],
    s2: &[RankedTermList],
) -> Result<SimilarityMatrix, AgreementError> {
    if s1.len() != s2.len() {
        return Err(AgreementError::DimensionMismatch {
            left: s1.len(),
            right: s2.len(),
        });
    }
    let k = s1.len();
    let mut values = Vec::with_capacity(k * k);
    for row in s1 {
        for col in s2 {
            values.push(average_jaccard(row, col)?);
        }
    }
    Ok(SimilarityMatrix {
        k,
        values,
        row_model: String::new(),
        col_model: String::new(),
    })
}

/// Optimal topic matching and its score.
#[derive(Debug, Clone)]
pub struct AgreementResult {
    /// Mean matched similarity, in [0, 1].
    pub score: f64,
    /// `matching[i]` is the column topic assigned to row topic `i`.
    pub matching: Vec<usize>,
    /// Similarity of each matched pair, in row order.
    pub per_pair: Vec<f64>,
}

/// Find the bijection between row and column topics maximizing the summed
/// similarity; the score is that sum divided by `k`.
pub fn hungarian_match(matrix: &SimilarityMatrix) -> AgreementResult {
    let k = matrix.k;
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| matrix.get(i, j)).collect())
        .collect();
    let matching = hungarian::solve_max_value(&rows);
    let per_pair: Vec<f64> = matching
        .iter()
        .enumerate()
        .map(|(i, &j)| matrix.get(i, j))
        .collect();
    let score = if k == 0 {
        0.0
    } else {
        per_pair.iter().sum::<f64>() / k as f64
    };
    AgreementResult {
        score,
        matching,
        per_pair,
    }
}

/// Agreement between two sequences of ranked term lists.
pub fn agreement_between_lists(
    s1: &[RankedTermList],
    s2: &[RankedTermList],
) -> Result<AgreementResult, AgreementError> {
    let matrix = similarity_matrix(s1, s2)?;
    Ok(hungarian_match(&matrix))
}

/// Agreement between two trained models at top-term depth `m`.
pub fn agreement(
    m1: &TopicModel,
    m2: &TopicModel,
    m: usize,
) -> Result<AgreementResult, AgreementError> {
    if m1.k() != m2.k() {
        return Err(AgreementError::DimensionMismatch {
            left: m1.k(),
            right: m2.k(),
        });
    }
    let lists1 = m1.topics(m).map_err(|_| AgreementError::EmptyList)?;
    let lists2 = m2.topics(m).map_err(|_| AgreementError::EmptyList)?;
    agreement_between_lists(&lists1, &lists2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(terms: &[&str]) -> RankedTermList {
        RankedTermList::new(terms.iter().map(|t| t.to_string()).collect()).unwrap()
    }

    fn set<'a>(terms: &[&'a str]) -> HashSet<&'a str> {
        terms.iter().copied().collect()
    }

    /// Direct prefix-enumeration oracle for Average Jaccard.
    fn aj_oracle(a: &RankedTermList, b: &RankedTermList) -> f64 {
        let d = a.len().min(b.len());
        let mut sum = 0.0;
        for t in 1..=d {
            let pa: HashSet<&str> = a.terms()[..t].iter().map(String::as_str).collect();
            let pb: HashSet<&str> = b.terms()[..t].iter().map(String::as_str).collect();
            sum += jaccard(&pa, &pb);
        }
        sum / d as f64
    }

    #[test]
    fn jaccard_examples() {
        assert_eq!(jaccard(&set(&["a", "b"]), &set(&["a", "b"])), 1.0);
        assert_eq!(jaccard(&set(&["a", "b"]), &set(&["c", "d"])), 0.0);
        assert_eq!(jaccard(&set(&["a", "b", "c"]), &set(&["b", "c", "d"])), 0.5);
        assert_eq!(jaccard::<&str>(&HashSet::new(), &HashSet::new()), 1.0);
    }

    #[test]
    fn average_jaccard_examples() {
        assert_eq!(
            average_jaccard(&list(&["a", "b", "c"]), &list(&["a", "b", "c"])).unwrap(),
            1.0
        );
        // t=1: 0, t=2: 1
        assert_eq!(
            average_jaccard(&list(&["a", "b"]), &list(&["b", "a"])).unwrap(),
            0.5
        );
        // (1 + 1/3 + 1) / 3 = 7/9
        let aj = average_jaccard(&list(&["a", "b", "c"]), &list(&["a", "c", "b"])).unwrap();
        assert!((aj - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn average_jaccard_matches_prefix_oracle() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let alphabet: Vec<String> = (0..40).map(|i| format!("w{i:02}")).collect();
        for _ in 0..200 {
            let len_a = rng.gen_range(1..=12);
            let len_b = rng.gen_range(1..=12);
            let mut pool = alphabet.clone();
            pool.shuffle(&mut rng);
            let a = RankedTermList::new(pool[..len_a].to_vec()).unwrap();
            pool.shuffle(&mut rng);
            let b = RankedTermList::new(pool[..len_b].to_vec()).unwrap();
            let fast = average_jaccard(&a, &b).unwrap();
            let slow = aj_oracle(&a, &b);
            assert!((fast - slow).abs() < 1e-12);
        }
    }

    #[test]
    fn average_jaccard_is_symmetric_and_bounded() {
        let a = list(&["x", "y", "z", "w"]);
        let b = list(&["y", "x", "q"]);
        let ab = average_jaccard(&a, &b).unwrap();
        let ba = average_jaccard(&b, &a).unwrap();
        assert_eq!(ab, ba);
        assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn average_jaccard_is_one_iff_identical() {
        let a = list(&["x", "y", "z"]);
        assert_eq!(average_jaccard(&a, &a).unwrap(), 1.0);
        // same set, different order: strictly below 1
        let b = list(&["x", "z", "y"]);
        assert!(average_jaccard(&a, &b).unwrap() < 1.0);
    }

    #[test]
    fn empty_lists_are_an_error() {
        let empty = RankedTermList::new(vec![]).unwrap();
        assert!(matches!(
            average_jaccard(&empty, &empty),
            Err(AgreementError::EmptyList)
        ));
    }

    #[test]
    fn unequal_lengths_truncate_to_shorter() {
        let a = list(&["a", "b", "c", "d", "e"]);
        let b = list(&["a", "b"]);
        assert_eq!(average_jaccard(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn similarity_matrix_diagonal_and_oracle() {
        let lists = vec![list(&["a", "b"]), list(&["c", "d"]), list(&["e", "f"])];
        let matrix = similarity_matrix(&lists, &lists).unwrap();
        for i in 0..3 {
            assert_eq!(matrix.get(i, i), 1.0);
        }
        // disjoint off-diagonal
        for i in 0..3 {
            for j in 0..3 {
                let want = average_jaccard(&lists[i], &lists[j]).unwrap();
                assert_eq!(matrix.get(i, j), want);
                if i != j {
                    assert_eq!(matrix.get(i, j), 0.0);
                }
            }
        }
        let other = vec![list(&["a"])];
        assert!(matches!(
            similarity_matrix(&lists, &other),
            Err(AgreementError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hungarian_match_examples() {
        let identity =
            SimilarityMatrix::from_values(
                vec![
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                ],
                "a",
                "b",
            )
            .unwrap();
        let result = hungarian_match(&identity);
        assert_eq!(result.matching, vec![0, 1, 2]);
        assert_eq!(result.score, 1.0);

        // 0.9 + 0.2 = 1.1 beats 0.1 + 0.8 = 0.9
        let matrix =
            SimilarityMatrix::from_values(vec![vec![0.9, 0.1], vec![0.8, 0.2]], "a", "b").unwrap();
        let result = hungarian_match(&matrix);
        assert_eq!(result.matching, vec![0, 1]);
        assert!((result.score - 0.55).abs() < 1e-15);
        assert_eq!(result.per_pair, vec![0.9, 0.2]);
    }

    #[test]
    fn hungarian_beats_random_permutations() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let k = rng.gen_range(2..=8);
            let values: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..k).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let matrix = SimilarityMatrix::from_values(values.clone(), "a", "b").unwrap();
            let best = hungarian_match(&matrix);
            let mut perm: Vec<usize> = (0..k).collect();
            for _ in 0..20 {
                perm.shuffle(&mut rng);
                let score: f64 =
                    perm.iter().enumerate().map(|(i, &j)| values[i][j]).sum::<f64>() / k as f64;
                assert!(best.score >= score - 1e-12);
            }
        }
    }

    #[test]
    fn agreement_of_identical_lists_is_one_and_disjoint_is_zero() {
        let s1 = vec![list(&["a", "b", "c"]), list(&["d", "e", "f"])];
        let shuffled = vec![s1[1].clone(), s1[0].clone()];
        let result = agreement_between_lists(&s1, &shuffled).unwrap();
        assert_eq!(result.score, 1.0);
        assert_eq!(result.matching, vec![1, 0]);

        let disjoint = vec![list(&["x", "y", "z"]), list(&["p", "q", "r"])];
        let result = agreement_between_lists(&s1, &disjoint).unwrap();
        assert_eq!(result.score, 0.0);
    }

    #[test]
    fn agreement_is_symmetric() {
        let s1 = vec![list(&["a", "b", "c"]), list(&["d", "e", "f"])];
        let s2 = vec![list(&["a", "c", "d"]), list(&["d", "f", "a"])];
        let ab = agreement_between_lists(&s1, &s2).unwrap();
        let ba = agreement_between_lists(&s2, &s1).unwrap();
        assert!((ab.score - ba.score).abs() < 1e-12);
    }

    #[test]
    fn scores_stay_in_unit_interval_under_fuzzing() {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let alphabet: Vec<String> = (0..30).map(|i| format!("t{i:02}")).collect();
        for _ in 0..100 {
            let k = rng.gen_range(1..=5);
            let depth = rng.gen_range(1..=8);
            let make = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<RankedTermList> {
                (0..k)
                    .map(|_| {
                        let mut pool = alphabet.clone();
                        pool.shuffle(rng);
                        RankedTermList::new(pool[..depth].to_vec()).unwrap()
                    })
                    .collect()
            };
            let s1 = make(&mut rng);
            let s2 = make(&mut rng);
            let result = agreement_between_lists(&s1, &s2).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&result.score));
            for pair in &result.per_pair {
                assert!((0.0..=1.0).contains(pair));
            }
            // matching is a bijection
            let mut seen: Vec<bool> = vec![false; k];
            for &j in &result.matching {
                assert!(!seen[j]);
                seen[j] = true;
            }
            // score is the mean of per-pair values
            let mean = result.per_pair.iter().sum::<f64>() / k as f64;
            assert!((result.score - mean).abs() < 1e-12);
        }
    }
}
