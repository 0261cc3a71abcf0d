//! Command-line front end: `embed`, `eval`, and `diag` subcommands.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use conceptor_embedding::compose::{
    fit, CompositionConfig, ConceptorSource, FittedComposer, Method,
};
use conceptor_embedding::conceptor::compute_conceptor;
use conceptor_embedding::eval::{evaluate, pooled_corpus, score_pairs, EvalReport};
use conceptor_embedding::lexicon::{
    effective_rank, tokenize, EmbeddingTable, FrequencyTable, StopWordSet, TokenizedSentence,
};
use conceptor_embedding::Error as CoreError;

use crate::io::{self, Loaded};
use crate::projector;
use crate::report;

#[derive(Debug, Parser)]
#[command(
    name = "conceptor-embedding",
    version,
    about = "Sentence embeddings with conceptor-based soft spectral correction"
)]
pub struct Cli {
    /// Reserved for future stochastic extensions. Every current operation
    /// is deterministic, so this flag is a no-op.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed sentences (one per line) into vectors (one line of floats each)
    Embed(EmbedArgs),
    /// Compare composition methods on an STS dataset and write a report
    Eval(EvalArgs),
    /// Print spectral diagnostics: stop-word rank and conceptor spectrum
    Diag(DiagArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    AverageOnly,
    SifPc1,
    SifTopD,
    Conceptor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    WordVectors,
    SentenceVectors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Word-embedding file: `word v1 v2 ... vN` per line
    #[arg(long)]
    pub embeddings: PathBuf,

    /// Word-frequency file: `word count` per line
    #[arg(long)]
    pub frequencies: PathBuf,

    /// Stop-word file: one word per line (needed for the conceptor prior)
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HyperArgs {
    /// SIF smoothing parameter
    #[arg(long, default_value_t = conceptor_embedding::DEFAULT_SIF_A)]
    pub a: f64,

    /// Conceptor aperture alpha^-2
    #[arg(long, default_value_t = conceptor_embedding::DEFAULT_APERTURE_INV_SQ)]
    pub aperture_inv_sq: f64,

    /// Principal components removed by the sif-top-d method
    #[arg(long, default_value_t = 2)]
    pub top_d: usize,

    /// What the conceptor is fitted on
    #[arg(long, value_enum, default_value_t = SourceArg::WordVectors)]
    pub conceptor_source: SourceArg,

    /// Drop the stop-word prior from the conceptor's word matrix
    #[arg(long)]
    pub no_stopword_prior: bool,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[command(flatten)]
    pub hyper: HyperArgs,

    /// Input sentences, one per line
    #[arg(long)]
    pub sentences: PathBuf,

    /// Output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Composition method
    #[arg(long, value_enum, default_value_t = MethodArg::Conceptor)]
    pub method: MethodArg,

    /// Fit the projector on this sentence file instead of the input
    #[arg(long)]
    pub fit_split: Option<PathBuf>,

    /// Write the fitted projector as JSON
    #[arg(long)]
    pub save_projector: Option<PathBuf>,

    /// Reuse a projector written by --save-projector instead of fitting
    #[arg(long, conflicts_with = "fit_split")]
    pub load_projector: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[command(flatten)]
    pub hyper: HyperArgs,

    /// STS dataset: `sentenceA<TAB>sentenceB<TAB>score` per line
    #[arg(long)]
    pub dataset: PathBuf,

    /// Methods to evaluate (repeatable)
    #[arg(
        long = "method",
        value_enum,
        default_values_t = [MethodArg::AverageOnly, MethodArg::SifPc1, MethodArg::Conceptor]
    )]
    pub methods: Vec<MethodArg>,

    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,

    /// Report path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Fit projectors on the sentences of this STS file instead of the
    /// evaluated dataset
    #[arg(long)]
    pub fit_split: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    /// Word-embedding file
    #[arg(long)]
    pub embeddings: PathBuf,

    /// Stop-word file
    #[arg(long)]
    pub stopwords: PathBuf,

    /// Optional sentence file whose words join the fitted matrix
    #[arg(long)]
    pub sentences: Option<PathBuf>,

    /// Conceptor aperture alpha^-2
    #[arg(long, default_value_t = conceptor_embedding::DEFAULT_APERTURE_INV_SQ)]
    pub aperture_inv_sq: f64,

    /// Relative eigenvalue threshold for the rank count
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    /// How many leading eigenvalues to print
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Embed(args) => run_embed(args),
        Command::Eval(args) => run_eval(args),
        Command::Diag(args) => run_diag(args),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot open {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("cannot create {}", path.display()))
}

fn load_model(model: &ModelArgs) -> Result<(EmbeddingTable, FrequencyTable, StopWordSet)> {
    let embeddings = load_embedding_table(&model.embeddings)?;
    let frequencies = io::load_frequencies(open(&model.frequencies)?)
        .with_context(|| format!("loading frequencies from {}", model.frequencies.display()))?;
    warn_skipped(&frequencies, &model.frequencies);
    let stops = match &model.stopwords {
        Some(path) => {
            let loaded = io::load_stopwords(open(path)?)
                .with_context(|| format!("loading stop words from {}", path.display()))?;
            warn_skipped(&loaded, path);
            loaded.value
        }
        None => StopWordSet::default(),
    };
    Ok((embeddings, frequencies.value, stops))
}

fn load_embedding_table(path: &Path) -> Result<EmbeddingTable> {
    let loaded = io::load_embeddings(open(path)?)
        .with_context(|| format!("loading embeddings from {}", path.display()))?;
    warn_skipped(&loaded, path);
    Ok(loaded.value)
}

fn warn_skipped<T>(loaded: &Loaded<T>, path: &Path) {
    if loaded.skipped_lines > 0 {
        eprintln!(
            "warning: skipped {} malformed line(s) in {}",
            loaded.skipped_lines,
            path.display()
        );
    }
}

fn build_config(method: MethodArg, hyper: &HyperArgs) -> Result<CompositionConfig> {
    let config = CompositionConfig {
        a: hyper.a,
        aperture_inv_sq: hyper.aperture_inv_sq,
        method: match method {
            MethodArg::AverageOnly => Method::AverageOnly,
            MethodArg::SifPc1 => Method::SifPc1,
            MethodArg::SifTopD => Method::SifTopD(hyper.top_d),
            MethodArg::Conceptor => Method::Conceptor,
        },
        conceptor_source: match hyper.conceptor_source {
            SourceArg::WordVectors => ConceptorSource::WordVectors,
            SourceArg::SentenceVectors => ConceptorSource::SentenceVectors,
        },
        use_stopword_prior: !hyper.no_stopword_prior,
    };
    config.validate()?;
    Ok(config)
}

fn require_prior_stopwords(
    config: &CompositionConfig,
    model: &ModelArgs,
    stops: &StopWordSet,
) -> Result<()> {
    let needs_prior = config.method == Method::Conceptor
        && config.conceptor_source == ConceptorSource::WordVectors
        && config.use_stopword_prior;
    if needs_prior && stops.is_empty() {
        if model.stopwords.is_none() {
            bail!("the conceptor stop-word prior needs --stopwords (or pass --no-stopword-prior)");
        }
        bail!(
            "stop-word file {} is empty; the conceptor prior needs at least one word \
             (or pass --no-stopword-prior)",
            model.stopwords.as_ref().unwrap().display()
        );
    }
    Ok(())
}

fn tokenize_file(path: &Path) -> Result<Vec<TokenizedSentence>> {
    let sentences = io::read_sentences(open(path)?)
        .with_context(|| format!("reading sentences from {}", path.display()))?;
    Ok(sentences.iter().map(|s| tokenize(s)).collect())
}

fn write_embeddings<W: Write>(
    mut out: W,
    embedded: &[conceptor_embedding::SentenceEmbedding],
) -> Result<()> {
    for e in embedded {
        let mut first = true;
        for value in e.vector.as_slice() {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{value}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn run_embed(args: EmbedArgs) -> Result<()> {
    let (embeddings, frequencies, stops) = load_model(&args.model)?;
    let config = build_config(args.method, &args.hyper)?;
    let corpus = tokenize_file(&args.sentences)?;

    let composer = if let Some(path) = &args.load_projector {
        let dump = projector::read_projector(open(path)?)
            .with_context(|| format!("loading projector from {}", path.display()))?;
        if dump.dim != embeddings.dim() {
            bail!(
                "projector dimension {} does not match embedding dimension {}",
                dump.dim,
                embeddings.dim()
            );
        }
        FittedComposer::with_projector(config.clone(), Some(dump.into_matrix()?))?
    } else {
        require_prior_stopwords(&config, &args.model, &stops)?;
        let fit_corpus = match &args.fit_split {
            Some(path) => tokenize_file(path)?,
            None => corpus.clone(),
        };
        fit(&fit_corpus, &embeddings, &frequencies, &stops, &config)?
    };

    if let Some(path) = &args.save_projector {
        match composer.projector() {
            Some(matrix) => {
                projector::write_projector(create(path)?, matrix, config.aperture_inv_sq)
                    .with_context(|| format!("writing projector to {}", path.display()))?;
            }
            None => bail!("method average-only fits no projector; nothing to save"),
        }
    }

    let embedded = composer.embed_all(&corpus, &embeddings, &frequencies)?;
    match &args.output {
        Some(path) => write_embeddings(create(path)?, &embedded)?,
        None => write_embeddings(std::io::stdout().lock(), &embedded)?,
    }
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<()> {
    let (embeddings, frequencies, stops) = load_model(&args.model)?;
    let pairs = io::parse_sts(open(&args.dataset)?)
        .with_context(|| format!("parsing STS data from {}", args.dataset.display()))?;

    // Deduplicate methods, preserving first-appearance order.
    let mut configs: Vec<CompositionConfig> = Vec::new();
    for &method in &args.methods {
        let config = build_config(method, &args.hyper)?;
        if configs.iter().all(|c| c.label() != config.label()) {
            configs.push(config);
        }
    }
    for config in &configs {
        require_prior_stopwords(config, &args.model, &stops)?;
    }

    let report = match &args.fit_split {
        None => evaluate(&pairs, &embeddings, &frequencies, &stops, &configs)?,
        Some(path) => {
            let fit_pairs = io::parse_sts(open(path)?)
                .with_context(|| format!("parsing fit split from {}", path.display()))?;
            let fit_corpus = pooled_corpus(&fit_pairs);
            let mut report = EvalReport::default();
            for config in &configs {
                let label = config.label();
                let tag =
                    |e: CoreError| anyhow::Error::from(e).context(format!("method `{label}`"));
                let composer =
                    fit(&fit_corpus, &embeddings, &frequencies, &stops, config).map_err(tag)?;
                let result =
                    score_pairs(&pairs, &composer, &embeddings, &frequencies).map_err(tag)?;
                report.push(label, result);
            }
            report
        }
    };

    let text = match args.format {
        FormatArg::Json => report::to_json(&report),
        FormatArg::Csv => report::to_csv(&report),
    };
    match &args.output {
        Some(path) => {
            let mut out = create(path)?;
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    eprint!("{}", report::to_table(&report));
    Ok(())
}

fn run_diag(args: DiagArgs) -> Result<()> {
    let embeddings = load_embedding_table(&args.embeddings)?;
    let stops = {
        let loaded = io::load_stopwords(open(&args.stopwords)?)
            .with_context(|| format!("loading stop words from {}", args.stopwords.display()))?;
        warn_skipped(&loaded, &args.stopwords);
        loaded.value
    };

    let found = stops.iter().filter(|w| embeddings.contains(w)).count();
    println!(
        "stop words: {} listed, {} with embeddings",
        stops.len(),
        found
    );
    let rank = effective_rank(&embeddings, &stops, args.tol)?;
    println!(
        "effective rank of stop-word vectors: {} of {} (tol {:e})",
        rank,
        embeddings.dim(),
        args.tol
    );

    let corpus = match &args.sentences {
        Some(path) => tokenize_file(path)?,
        None => Vec::new(),
    };
    let word_matrix =
        conceptor_embedding::compose::collect_word_matrix(&corpus, &embeddings, &stops, true)?;
    println!("fitted word matrix: {} columns", word_matrix.cols());
    let conceptor = compute_conceptor(&word_matrix, args.aperture_inv_sq)?;
    println!(
        "top {} covariance eigenvalues (aperture_inv_sq = {}):",
        args.top_k.min(conceptor.dim()),
        args.aperture_inv_sq
    );
    println!(
        "{:>4}  {:>14}  {:>11}  {:>11}",
        "i", "sigma", "conceptor", "complement"
    );
    for i in 0..args.top_k.min(conceptor.dim()) {
        let sigma = conceptor.source_eigenvalues()[i];
        let c_ev = conceptor.eigenvalues()[i];
        println!(
            "{:>4}  {:>14.6}  {:>11.6}  {:>11.6}",
            i + 1,
            sigma,
            c_ev,
            1.0 - c_ev
        );
    }
    Ok(())
}
