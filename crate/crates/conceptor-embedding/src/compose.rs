//! Sentence-embedding pipelines: frequency-weighted averaging followed by
//! one of four post-processing methods.
//!
//! Every method starts from the same smooth-inverse-frequency average
//! ([`weighted_average`]) and differs only in the projector applied
//! afterwards:
//!
//! - `average-only`: no correction;
//! - `sif-pc1`: subtract the projection onto the first uncentered principal
//!   component of the sentence vectors;
//! - `sif-top-d`: subtract the projection onto the top `D` components;
//! - `conceptor`: multiply by the soft complement `G = I - C`, where the
//!   conceptor is fitted on the distinct word vectors of the corpus plus a
//!   stop-word prior (the default), or on the sentence vectors themselves.
//!
//! Fitting is a single pass over the corpus; applying the fitted projector
//! to a sentence is a pure matrix-vector product, so [`FittedComposer`] can
//! be fitted on one split and applied to another.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::conceptor::compute_conceptor;
use crate::error::Error;
use crate::lexicon::{EmbeddingTable, FrequencyTable, StopWordSet, TokenizedSentence};
use crate::linalg::{sym_eig_psd, uncentered_covariance, EigenDecomp, Matrix, Vector};
use crate::{DEFAULT_APERTURE_INV_SQ, DEFAULT_SIF_A};

/// Post-processing applied to the weighted averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Raw weighted averages, no correction.
    AverageOnly,
    /// Remove the projection onto the first principal component.
    SifPc1,
    /// Remove the projection onto the top `D` principal components.
    SifTopD(usize),
    /// Soft projection through the conceptor complement.
    Conceptor,
}

/// What the conceptor is fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConceptorSource {
    /// Distinct word vectors of the corpus, plus the stop-word prior.
    /// Usually the stronger choice, and the default.
    #[default]
    WordVectors,
    /// The weighted-average sentence vectors themselves.
    SentenceVectors,
}

/// Hyperparameters of the composition pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionConfig {
    /// SIF smoothing parameter `a` in the weight `a / (p(w) + a)`.
    pub a: f64,
    /// Conceptor aperture `alpha^-2`.
    pub aperture_inv_sq: f64,
    pub method: Method,
    pub conceptor_source: ConceptorSource,
    /// Union the stop-word vectors into the conceptor's word matrix.
    pub use_stopword_prior: bool,
}

impl Default for CompositionConfig {
    fn default() -> Self {
        Self {
            a: DEFAULT_SIF_A,
            aperture_inv_sq: DEFAULT_APERTURE_INV_SQ,
            method: Method::Conceptor,
            conceptor_source: ConceptorSource::WordVectors,
            use_stopword_prior: true,
        }
    }
}

impl CompositionConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.a <= 0.0 || !self.a.is_finite() {
            return Err(Error::InvalidParameter {
                name: "a",
                value: self.a,
            });
        }
        if self.aperture_inv_sq <= 0.0 || !self.aperture_inv_sq.is_finite() {
            return Err(Error::InvalidParameter {
                name: "aperture_inv_sq",
                value: self.aperture_inv_sq,
            });
        }
        if let Method::SifTopD(d) = self.method {
            if d == 0 {
                return Err(Error::InvalidParameter {
                    name: "top_d",
                    value: 0.0,
                });
            }
        }
        Ok(())
    }

    /// Stable label used in reports and CLI output.
    pub fn label(&self) -> String {
        match (self.method, self.conceptor_source) {
            (Method::AverageOnly, _) => String::from("average-only"),
            (Method::SifPc1, _) => String::from("sif-pc1"),
            (Method::SifTopD(d), _) => format!("sif-top-{d}"),
            (Method::Conceptor, ConceptorSource::WordVectors) => String::from("conceptor"),
            (Method::Conceptor, ConceptorSource::SentenceVectors) => {
                String::from("conceptor-sentence")
            }
        }
    }
}

/// A composed sentence vector plus token accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceEmbedding {
    pub vector: Vector,
    /// Total tokens in the sentence.
    pub token_count: usize,
    /// Tokens without an embedding; they contribute nothing and are not
    /// counted in the averaging denominator.
    pub oov_count: usize,
}

impl SentenceEmbedding {
    /// A sentence with no usable tokens embeds to the zero vector.
    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.token_count == self.oov_count
    }
}

/// The smooth-inverse-frequency weight `a / (p + a)`: 1 for unseen words,
/// strictly decreasing in `p`.
pub fn sif_weight(p: f64, a: f64) -> Result<f64, Error> {
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
        });
    }
    if p < 0.0 || !p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
        });
    }
    Ok(a / (p + a))
}

/// Weighted average `(1/|s|) sum_w a/(p(w)+a) v_w` over the in-vocabulary
/// tokens of a sentence; `|s|` counts only those tokens. A sentence with no
/// in-vocabulary tokens yields the zero vector.
pub fn weighted_average(
    sentence: &TokenizedSentence,
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
    a: f64,
) -> Result<SentenceEmbedding, Error> {
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
        });
    }
    let mut acc = Vector::zeros(embeddings.dim());
    let mut oov_count = 0usize;
    let mut in_vocab = 0usize;
    for token in sentence.tokens() {
        match embeddings.get(token) {
            Some(vector) => {
                let weight = sif_weight(frequencies.probability(token), a)?;
                acc.add_scaled(weight, vector)?;
                in_vocab += 1;
            }
            None => oov_count += 1,
        }
    }
    if in_vocab > 0 {
        acc.scale_in_place(1.0 / in_vocab as f64);
    }
    Ok(SentenceEmbedding {
        vector: acc,
        token_count: sentence.len(),
        oov_count,
    })
}

/// Collects the distinct in-vocabulary word types of the corpus as matrix
/// columns, unioned with the in-vocabulary stop words when `use_prior` is
/// set. Column order is first-appearance order: corpus order first, then
/// stop-word order.
pub fn collect_word_matrix(
    corpus: &[TokenizedSentence],
    embeddings: &EmbeddingTable,
    stops: &StopWordSet,
    use_prior: bool,
) -> Result<Matrix, Error> {
    let mut seen: HashSet<&str> = HashSet::new();
    let mut columns: Vec<Vector> = Vec::new();
    for sentence in corpus {
        for token in sentence.tokens() {
            if seen.insert(token.as_str()) {
                if let Some(vector) = embeddings.get(token) {
                    columns.push(vector.clone());
                }
            }
        }
    }
    if use_prior {
        for word in stops.iter() {
            if seen.insert(word) {
                if let Some(vector) = embeddings.get(word) {
                    columns.push(vector.clone());
                }
            }
        }
    }
    if columns.is_empty() {
        return Err(Error::NoUsableWords);
    }
    Matrix::from_columns(&columns)
}

/// A post-processing projector fitted to a corpus; apply it to any corpus
/// embedded with the same tables. Application is pure and per-sentence, so
/// sentences may be processed concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedComposer {
    config: CompositionConfig,
    projector: Option<Matrix>,
}

impl FittedComposer {
    /// Wraps an externally supplied projector matrix (for example one
    /// reloaded from disk) so it can be applied to new sentences.
    pub fn with_projector(
        config: CompositionConfig,
        projector: Option<Matrix>,
    ) -> Result<Self, Error> {
        config.validate()?;
        if let Some(m) = &projector {
            if !m.is_square() {
                return Err(Error::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        Ok(Self { config, projector })
    }

    #[inline]
    pub fn config(&self) -> &CompositionConfig {
        &self.config
    }

    /// The fitted projector matrix; `None` means identity (average-only).
    #[inline]
    pub fn projector(&self) -> Option<&Matrix> {
        self.projector.as_ref()
    }

    pub fn embed_sentence(
        &self,
        sentence: &TokenizedSentence,
        embeddings: &EmbeddingTable,
        frequencies: &FrequencyTable,
    ) -> Result<SentenceEmbedding, Error> {
        let mut embedding = weighted_average(sentence, embeddings, frequencies, self.config.a)?;
        if let Some(projector) = &self.projector {
            embedding.vector = projector.matvec(&embedding.vector)?;
        }
        Ok(embedding)
    }

    /// Embeds a corpus in input order.
    pub fn embed_all(
        &self,
        corpus: &[TokenizedSentence],
        embeddings: &EmbeddingTable,
        frequencies: &FrequencyTable,
    ) -> Result<Vec<SentenceEmbedding>, Error> {
        corpus
            .iter()
            .map(|s| self.embed_sentence(s, embeddings, frequencies))
            .collect()
    }
}

/// Phase 1 of the pipeline: fits the configured projector on a corpus.
pub fn fit(
    corpus: &[TokenizedSentence],
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
    stops: &StopWordSet,
    config: &CompositionConfig,
) -> Result<FittedComposer, Error> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let projector = match config.method {
        Method::AverageOnly => None,
        Method::SifPc1 => Some(pc_removal_matrix(
            corpus,
            embeddings,
            frequencies,
            config.a,
            1,
        )?),
        Method::SifTopD(d) => Some(pc_removal_matrix(
            corpus,
            embeddings,
            frequencies,
            config.a,
            d,
        )?),
        Method::Conceptor => {
            let data = match config.conceptor_source {
                ConceptorSource::WordVectors => {
                    collect_word_matrix(corpus, embeddings, stops, config.use_stopword_prior)?
                }
                ConceptorSource::SentenceVectors => {
                    sentence_matrix(corpus, embeddings, frequencies, config.a)?
                }
            };
            let conceptor = compute_conceptor(&data, config.aperture_inv_sq)?;
            Some(conceptor.complement().matrix().clone())
        }
    };
    Ok(FittedComposer {
        config: config.clone(),
        projector,
    })
}

/// The whole pipeline: fit on the corpus, then embed it. Output order
/// matches input order and the result is fully deterministic.
pub fn embed_corpus(
    corpus: &[TokenizedSentence],
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
    stops: &StopWordSet,
    config: &CompositionConfig,
) -> Result<Vec<SentenceEmbedding>, Error> {
    fit(corpus, embeddings, frequencies, stops, config)?.embed_all(corpus, embeddings, frequencies)
}

/// Weighted-average sentence vectors as matrix columns, corpus order.
fn sentence_matrix(
    corpus: &[TokenizedSentence],
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
    a: f64,
) -> Result<Matrix, Error> {
    let columns: Vec<Vector> = corpus
        .iter()
        .map(|s| weighted_average(s, embeddings, frequencies, a).map(|e| e.vector))
        .collect::<Result<_, _>>()?;
    Matrix::from_columns(&columns)
}

/// `I - U_{1:D} U_{1:D}^T` from the uncentered PCA of the sentence vectors.
fn pc_removal_matrix(
    corpus: &[TokenizedSentence],
    embeddings: &EmbeddingTable,
    frequencies: &FrequencyTable,
    a: f64,
    top_d: usize,
) -> Result<Matrix, Error> {
    let data = sentence_matrix(corpus, embeddings, frequencies, a)?;
    let cov = uncentered_covariance(&data)?;
    let eig = sym_eig_psd(&cov)?;
    projection_complement(&eig, top_d)
}

fn projection_complement(eig: &EigenDecomp, top_d: usize) -> Result<Matrix, Error> {
    let n = eig.dim();
    if top_d > n {
        return Err(Error::ComponentCountOutOfRange {
            requested: top_d,
            dim: n,
        });
    }
    let u = eig.eigenvectors();
    let mut out = Matrix::identity(n);
    for k in 0..top_d {
        for i in 0..n {
            let uik = u.get(i, k);
            for j in 0..n {
                out.set(i, j, out.get(i, j) - uik * u.get(j, k));
            }
        }
    }
    Ok(out)
}
