//! Semantic-textual-similarity evaluation: cosine scoring of sentence pairs
//! and Spearman rank correlation against gold labels.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::compose::{fit, CompositionConfig, FittedComposer};
use crate::error::Error;
use crate::lexicon::{tokenize, EmbeddingTable, FrequencyTable, StopWordSet, TokenizedSentence};
use crate::linalg::Vector;

/// Embeddings with a norm below this are treated as degenerate: their
/// cosine scores 0 instead of failing the run.
pub const DEGENERATE_NORM_TOL: f64 = 1e-12;

/// A gold-labeled sentence pair. The gold scale is dataset-defined (0-5 for
/// the common STS sets); Spearman is scale-free, so it never matters.
#[derive(Debug, Clone, PartialEq)]
pub struct StsPair {
    pub sentence_a: String,
    pub sentence_b: String,
    pub gold: f64,
}

/// Per-method evaluation outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub spearman: f64,
    pub n_pairs: usize,
    /// Pairs in which at least one side embedded to (near-)zero.
    pub n_degenerate: usize,
}

/// Method label → result, in evaluation order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    entries: Vec<(String, MethodResult)>,
}

impl EvalReport {
    pub fn push(&mut self, label: String, result: MethodResult) {
        self.entries.push((label, result));
    }

    pub fn entries(&self) -> &[(String, MethodResult)] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Option<&MethodResult> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, r)| r)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Cosine similarity `u.v / (|u| |v|)` in `[-1, 1]`. Either norm below
/// [`DEGENERATE_NORM_TOL`] scores 0.
pub fn cosine(u: &Vector, v: &Vector) -> Result<f64, Error> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    let nu = u.norm();
    let nv = v.norm();
    if nu < DEGENERATE_NORM_TOL || nv < DEGENERATE_NORM_TOL {
        return Ok(0.0);
    }
    // Bitwise-equal vectors score exactly 1; the general formula would land
    // within an ulp of it and break ties that ought to be exact.
    if u == v {
        return Ok(1.0);
    }
    Ok((u.dot(v)? / (nu * nv)).clamp(-1.0, 1.0))
}

/// Spearman rank correlation: Pearson correlation of the rank vectors, with
/// ties given average (fractional) ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, Error> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples { got: x.len() });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    pearson(&rx, &ry)
}

/// Average (fractional) ranks, 1-based: tied values share the mean of the
/// positions they occupy.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .partial_cmp(&values[j])
            .expect("values checked finite")
            .then(i.cmp(&j))
    });
    let mut ranks = alloc::vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end are 1-based ranks start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64, Error> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ConstantInput { side: "left" });
    }
    if syy == 0.0 {
        return Err(Error::ConstantInput { side: "right" });
    }
    Ok((sxy / crate::math::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Tokenizes both sides of every pair into one corpus: pair `i` occupies
/// slots `2i` (side a) and `2i + 1` (side b).
pub fn pooled_corpus(pairs: &[StsPair]) -> Vec<TokenizedSentence> {
    pairs
        .iter()
        .flat_map(|p| [tokenize(&p.sentence_a), tokenize(&p.sentence_b)])
        .collect()
}

/// Scores the pair list with an already-fitted composer: cosine per pair,
/// then Spearman against the gold labels.
pub fn score_pairs(
    pairs: &[StsPair],
    composer: &FittedComposer,
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
) -> Result<MethodResult, Error> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let corpus = pooled_corpus(pairs);
    let embedded = composer.embed_all(&corpus, embeddings, frequencies)?;
    let mut scores = Vec::with_capacity(pairs.len());
    let mut n_degenerate = 0usize;
    for i in 0..pairs.len() {
        let a = &embedded[2 * i].vector;
        let b = &embedded[2 * i + 1].vector;
        if a.norm() < DEGENERATE_NORM_TOL || b.norm() < DEGENERATE_NORM_TOL {
            n_degenerate += 1;
        }
        scores.push(cosine(a, b)?);
    }
    let golds: Vec<f64> = pairs.iter().map(|p| p.gold).collect();
    let rho = spearman(&scores, &golds)?;
    Ok(MethodResult {
        spearman: rho,
        n_pairs: pairs.len(),
        n_degenerate,
    })
}

/// Evaluates every configured method on the pair list.
///
/// Both sentences of every pair are pooled into one corpus for projector
/// fitting, then each pair is scored by cosine and the score list is rank-
/// correlated with the gold labels. Failures are tagged with the offending
/// method's label.
pub fn evaluate(
    pairs: &[StsPair],
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
    stops: &StopWordSet,
    configs: &[CompositionConfig],
) -> Result<EvalReport, Error> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if configs.is_empty() {
        return Err(Error::NoMethods);
    }
    let corpus = pooled_corpus(pairs);
    let mut report = EvalReport::default();
    for config in configs {
        let label = config.label();
        let tag_err = |e: Error| Error::InMethod {
            method: label.clone(),
            source: Box::new(e),
        };
        let composer = fit(&corpus, embeddings, frequencies, stops, config).map_err(tag_err)?;
        let result = score_pairs(pairs, &composer, embeddings, frequencies).map_err(tag_err)?;
        report.push(label, result);
    }
    Ok(report)
}
