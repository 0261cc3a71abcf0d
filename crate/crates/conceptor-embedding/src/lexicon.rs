//! Word embeddings, unigram frequencies, stop words, and tokenization.
//!
//! This module holds the in-memory tables; reading them from files lives in
//! the companion CLI crate. Tables are immutable once built and safe to
//! share across threads.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::error::Error;
use crate::linalg::{sym_eig_psd, uncentered_covariance, Matrix, Vector};

/// Word → embedding vector map with a fixed dimension.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Vector>,
}

impl EmbeddingTable {
    /// An empty table for the given dimension; inserts must match it.
    pub fn new(dim: usize) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::EmptyData);
        }
        Ok(Self {
            dim,
            entries: HashMap::new(),
        })
    }

    /// Builds a table from `(word, coordinates)` pairs. The dimension is
    /// taken from the first entry; duplicates keep the first occurrence.
    pub fn from_entries<W, I>(entries: I) -> Result<Self, Error>
    where
        W: AsRef<str>,
        I: IntoIterator<Item = (W, Vec<f64>)>,
    {
        let mut iter = entries.into_iter();
        let (first_word, first_vec) = iter.next().ok_or(Error::EmptyData)?;
        let mut table = Self::new(first_vec.len())?;
        table.insert(first_word.as_ref(), first_vec)?;
        for (word, coords) in iter {
            table.insert(word.as_ref(), coords)?;
        }
        Ok(table)
    }

    /// Inserts a word vector. Returns `false` when the word was already
    /// present (the existing vector is kept).
    pub fn insert(&mut self, word: &str, coords: Vec<f64>) -> Result<bool, Error> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        let vector = Vector::new(coords)?;
        if self.entries.contains_key(word) {
            return Ok(false);
        }
        self.entries.insert(word.to_string(), vector);
        Ok(true)
    }

    /// Looks a word up; an absent word is a miss, not an error.
    #[inline]
    pub fn get(&self, word: &str) -> Option<&Vector> {
        self.entries.get(word)
    }

    #[inline]
    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Word → unigram probability map derived from raw counts.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    probs: HashMap<String, f64>,
    total_count: u64,
}

impl FrequencyTable {
    /// Normalizes raw counts into probabilities. Counts for repeated words
    /// accumulate; zero counts and an all-zero total are rejected.
    pub fn from_counts<W, I>(counts: I) -> Result<Self, Error>
    where
        W: AsRef<str>,
        I: IntoIterator<Item = (W, u64)>,
    {
        let mut raw: HashMap<String, u64> = HashMap::new();
        let mut total: u64 = 0;
        for (word, count) in counts {
            if count == 0 {
                return Err(Error::InvalidParameter {
                    name: "count",
                    value: 0.0,
                });
            }
            *raw.entry(word.as_ref().to_string()).or_insert(0) += count;
            total += count;
        }
        if total == 0 {
            return Err(Error::EmptyData);
        }
        let probs = raw
            .into_iter()
            .map(|(w, c)| (w, c as f64 / total as f64))
            .collect();
        Ok(Self {
            probs,
            total_count: total,
        })
    }

    /// `p(w)`; a word missing from the table has probability 0, which gives
    /// it the maximal SIF weight of 1.
    #[inline]
    pub fn probability(&self, word: &str) -> f64 {
        self.probs.get(word).copied().unwrap_or(0.0)
    }

    #[inline]
    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(w, &p)| (w.as_str(), p))
    }
}

/// Ordered, deduplicated set of stop words. Order matters: it fixes the
/// column order of the stop-word prior in the fitted word matrix.
#[derive(Debug, Clone, Default)]
pub struct StopWordSet {
    ordered: Vec<String>,
    index: HashSet<String>,
}

impl StopWordSet {
    /// Lowercases, deduplicates, and keeps first-appearance order.
    pub fn from_words<W, I>(words: I) -> Self
    where
        W: AsRef<str>,
        I: IntoIterator<Item = W>,
    {
        let mut set = Self::default();
        for word in words {
            set.add(word.as_ref());
        }
        set
    }

    pub fn add(&mut self, word: &str) -> bool {
        let lowered = word.to_lowercase();
        if lowered.is_empty() || self.index.contains(&lowered) {
            return false;
        }
        self.index.insert(lowered.clone());
        self.ordered.push(lowered);
        true
    }

    #[inline]
    pub fn contains(&self, word: &str) -> bool {
        self.index.contains(word)
    }

    /// Iterates in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ordered.iter().map(String::as_str)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }
}

/// A sentence split into lowercase alphanumeric tokens, keeping the raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedSentence {
    tokens: Vec<String>,
    raw: String,
}

impl TokenizedSentence {
    #[inline]
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    #[inline]
    pub fn raw(&self) -> &str {
        &self.raw
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Lowercases the input and splits it on maximal runs of non-alphanumeric
/// characters, discarding punctuation entirely. Deterministic and
/// dependency-free; empty input yields an empty token list.
pub fn tokenize(raw: &str) -> TokenizedSentence {
    let lowered = raw.to_lowercase();
    let tokens = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(ToString::to_string)
        .collect();
    TokenizedSentence {
        tokens,
        raw: raw.to_string(),
    }
}

/// Number of principal directions of the stop-word vectors whose variance
/// exceeds `tol` times the largest one. With real word vectors this comes
/// out as the full embedding dimension: stop words alone span the space,
/// which is why a proper-subspace projection cannot remove them.
pub fn effective_rank(
    table: &EmbeddingTable,
    words: &StopWordSet,
    tol: f64,
) -> Result<usize, Error> {
    let found: Vec<Vector> = words.iter().filter_map(|w| table.get(w).cloned()).collect();
    if found.is_empty() {
        return Err(Error::NoUsableWords);
    }
    let x = Matrix::from_columns(&found)?;
    let cov = uncentered_covariance(&x)?;
    let eig = sym_eig_psd(&cov)?;
    let largest = eig.eigenvalues()[0];
    Ok(eig
        .eigenvalues()
        .iter()
        .filter(|&&ev| ev > tol * largest)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn tokenize_discards_punctuation() {
        assert_eq!(tokenize("The cat, sat.").tokens(), ["the", "cat", "sat"]);
    }

    #[test]
    fn tokenize_punctuation_only() {
        assert!(tokenize("!!!").is_empty());
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_splits_mixed_runs() {
        // Hand-traced against the split rule: hyphens and spaces both break.
        assert_eq!(tokenize("X-ray at 9am").tokens(), ["x", "ray", "at", "9am"]);
    }

    #[test]
    fn tokenize_keeps_raw() {
        let s = tokenize("The cat");
        assert_eq!(s.raw(), "The cat");
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn tokenize_idempotent_on_joined_output() {
        for input in ["The cat, sat.", "a-b-c", "Hello??  World 42x"] {
            let first = tokenize(input);
            let joined = first.tokens().join(" ");
            assert_eq!(tokenize(&joined).tokens(), first.tokens());
        }
    }

    #[test]
    fn embedding_table_basics() {
        let table =
            EmbeddingTable::from_entries([("a", vec![1.0, 0.0]), ("b", vec![0.0, 1.0])]).unwrap();
        assert_eq!(table.dim(), 2);
        assert_eq!(table.len(), 2);
        assert_eq!(table.get("a").unwrap().as_slice(), &[1.0, 0.0]);
        assert!(table.get("missing").is_none());
    }

    #[test]
    fn embedding_table_rejects_wrong_dim() {
        let mut table = EmbeddingTable::new(2).unwrap();
        assert!(matches!(
            table.insert("a", vec![1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn embedding_table_keeps_first_duplicate() {
        let mut table = EmbeddingTable::new(1).unwrap();
        assert!(table.insert("a", vec![1.0]).unwrap());
        assert!(!table.insert("a", vec![2.0]).unwrap());
        assert_eq!(table.get("a").unwrap().as_slice(), &[1.0]);
    }

    #[test]
    fn frequency_normalization() {
        let freq = FrequencyTable::from_counts([("the", 2u64), ("cat", 1), ("sat", 1)]).unwrap();
        assert_eq!(freq.probability("the"), 0.5);
        assert_eq!(freq.probability("cat"), 0.25);
        assert_eq!(freq.probability("sat"), 0.25);
        assert_eq!(freq.total_count(), 4);
        assert_eq!(freq.probability("dog"), 0.0);
    }

    #[test]
    fn frequency_single_word() {
        let freq = FrequencyTable::from_counts([("a", 7u64)]).unwrap();
        assert_eq!(freq.probability("a"), 1.0);
    }

    #[test]
    fn frequency_probabilities_sum_to_one() {
        let freq =
            FrequencyTable::from_counts([("a", 3u64), ("b", 11), ("c", 1), ("d", 17), ("e", 5)])
                .unwrap();
        let sum: f64 = freq.iter().map(|(_, p)| p).sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn frequency_rejects_degenerate_input() {
        assert!(matches!(
            FrequencyTable::from_counts(core::iter::empty::<(&str, u64)>()),
            Err(Error::EmptyData)
        ));
        assert!(matches!(
            FrequencyTable::from_counts([("a", 0u64)]),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn stopwords_casefold_dedup() {
        let stops = StopWordSet::from_words(["The", "the", "of", "and"]);
        assert_eq!(stops.len(), 3);
        assert!(stops.contains("the"));
        let ordered: Vec<&str> = stops.iter().collect();
        assert_eq!(ordered, ["the", "of", "and"]);
    }

    #[test]
    fn effective_rank_full_by_construction() {
        let table = EmbeddingTable::from_entries([("the", vec![1.0, 0.0]), ("of", vec![0.0, 1.0])])
            .unwrap();
        let stops = StopWordSet::from_words(["the", "of"]);
        assert_eq!(effective_rank(&table, &stops, 1e-6).unwrap(), 2);
    }

    #[test]
    fn effective_rank_duplicated_vector() {
        let table = EmbeddingTable::from_entries([
            ("the", vec![1.0, 2.0, -1.0]),
            ("of", vec![1.0, 2.0, -1.0]),
        ])
        .unwrap();
        let stops = StopWordSet::from_words(["the", "of"]);
        assert_eq!(effective_rank(&table, &stops, 1e-6).unwrap(), 1);
    }

    #[test]
    fn effective_rank_monotone_in_tol() {
        let table = EmbeddingTable::from_entries([
            ("a", vec![1.0, 0.0, 0.0]),
            ("b", vec![1.0, 0.1, 0.0]),
            ("c", vec![1.0, 0.1, 0.01]),
        ])
        .unwrap();
        let stops = StopWordSet::from_words(["a", "b", "c"]);
        let mut previous = usize::MAX;
        for tol in [1e-12, 1e-8, 1e-4, 1e-2, 1.0] {
            let rank = effective_rank(&table, &stops, tol).unwrap();
            assert!(rank <= previous);
            previous = rank;
        }
    }

    #[test]
    fn effective_rank_requires_overlap() {
        let table = EmbeddingTable::from_entries([("cat", vec![1.0])]).unwrap();
        let stops = StopWordSet::from_words(["the"]);
        assert!(matches!(
            effective_rank(&table, &stops, 1e-6),
            Err(Error::NoUsableWords)
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn tokenize_idempotence(input in ".{0,80}") {
                let first = tokenize(&input);
                let joined = first.tokens().join(" ");
                let second = tokenize(&joined);
                prop_assert_eq!(second.tokens(), first.tokens());
            }

            #[test]
            fn tokens_are_lowercase_alphanumeric(input in ".{0,80}") {
                for token in tokenize(&input).tokens() {
                    prop_assert!(token.chars().all(char::is_alphanumeric));
                    prop_assert_eq!(token.to_lowercase(), token.clone());
                }
            }

            #[test]
            fn frequencies_sum_to_one(counts in proptest::collection::vec(1u64..10_000, 1..40)) {
                let entries: Vec<(String, u64)> = counts
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (alloc::format!("w{i}"), c))
                    .collect();
                let freq = FrequencyTable::from_counts(entries).unwrap();
                let sum: f64 = freq.iter().map(|(_, p)| p).sum();
                prop_assert!((sum - 1.0).abs() <= 1e-12);
            }
        }
    }
}
