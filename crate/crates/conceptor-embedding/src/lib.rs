//! Sentence embeddings as frequency-weighted word vector averages with
//! conceptor-based soft spectral correction.
//!
//! Averaged word vectors are dominated by a handful of high-variance
//! directions shared across sentences. The usual fix is to subtract the
//! projection onto the top one or top few principal components, which
//! either removes too little or throws information away. This crate
//! instead attenuates each direction in proportion to its variance: a
//! conceptor `C = R(R + alpha^-2 I)^-1` is fitted to the word (or
//! sentence) vectors, and sentence embeddings are multiplied by the
//! complement `G = I - C`, which scales the direction with variance
//! `sigma` by `alpha^-2 / (sigma + alpha^-2)`.
//!
//! The pipeline in full:
//!
//! 1. tokenize sentences and average their word vectors with smooth
//!    inverse frequency weights `a / (p(w) + a)` ([`compose::weighted_average`]),
//! 2. fit a conceptor on the distinct word vectors of the corpus plus a
//!    stop-word prior ([`conceptor::compute_conceptor`]),
//! 3. apply the complement projector to every sentence vector
//!    ([`compose::embed_corpus`]).
//!
//! Hard removal of the top `D` principal components is available as a
//! baseline and falls out of the same machinery: overriding the conceptor
//! spectrum with `D` zeros and ones elsewhere ([`conceptor::hard_override`])
//! reproduces exact PC subtraction. [`eval`] provides cosine scoring and
//! Spearman rank correlation for comparing methods on semantic textual
//! similarity data.
//!
//! ```
//! use conceptor_embedding::compose::{embed_corpus, CompositionConfig};
//! use conceptor_embedding::lexicon::{
//!     tokenize, EmbeddingTable, FrequencyTable, StopWordSet,
//! };
//!
//! let emb = EmbeddingTable::from_entries([
//!     ("the", vec![0.9, 0.1]),
//!     ("cat", vec![0.3, 0.8]),
//!     ("sat", vec![0.2, 0.7]),
//! ])
//! .unwrap();
//! let freq = FrequencyTable::from_counts([("the", 90u64), ("cat", 5), ("sat", 5)]).unwrap();
//! let stops = StopWordSet::from_words(["the"]);
//!
//! let corpus = vec![tokenize("The cat sat."), tokenize("The cat!")];
//! let embeddings = embed_corpus(&corpus, &emb, &freq, &stops, &CompositionConfig::default())?;
//! assert_eq!(embeddings.len(), 2);
//! # Ok::<(), conceptor_embedding::Error>(())
//! ```
//!
//! The crate is `no_std`-compatible (requires `alloc`): disable the
//! default `std` feature and enable `libm` instead.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("either the `std` or the `libm` feature must be enabled");

pub mod compose;
pub mod conceptor;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod linalg;

mod math;

pub use compose::{CompositionConfig, ConceptorSource, Method, SentenceEmbedding};
pub use conceptor::{Conceptor, SoftProjector};
pub use error::Error;
pub use eval::{EvalReport, MethodResult, StsPair};
pub use lexicon::{EmbeddingTable, FrequencyTable, StopWordSet, TokenizedSentence};
pub use linalg::{EigenDecomp, Matrix, Vector};

/// Default SIF smoothing parameter `a`.
pub const DEFAULT_SIF_A: f64 = 0.001;

/// Default aperture parameter `alpha^-2` of the conceptor.
pub const DEFAULT_APERTURE_INV_SQ: f64 = 1.0;
