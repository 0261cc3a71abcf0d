//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS] criterion N` line on success (visible with `--nocapture`).
//!
//! Run with:
//!
//! ```text
//! cargo test -p conceptor-embedding-cli --test acceptance -- --nocapture
//! ```

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use conceptor_embedding::compose::{embed_corpus, weighted_average, CompositionConfig, Method};
use conceptor_embedding::conceptor::{compute_conceptor, conceptor_objective, Conceptor};
use conceptor_embedding::eval::{evaluate, spearman};
use conceptor_embedding::lexicon::{
    tokenize, EmbeddingTable, FrequencyTable, StopWordSet, TokenizedSentence,
};
use conceptor_embedding::linalg::{sym_eig, uncentered_covariance, Matrix, Vector};
use conceptor_embedding_cli::io;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| r.gen_range(-1.0..1.0)).collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Projected-gradient-descent minimizer of the conceptor objective,
/// independent of the spectral closed form: the step size comes from the
/// Frobenius-norm bound on the covariance spectrum (no eigensolver), and
/// iterates are projected onto the symmetric matrices.
fn gradient_descent_conceptor(data: &Matrix, aperture_inv_sq: f64) -> Matrix {
    let r = uncentered_covariance(data).unwrap();
    let n = r.rows();
    let step = 1.0 / (2.0 * (r.frobenius_norm() + aperture_inv_sq));
    let mut c = Matrix::zeros(n, n);
    for _ in 0..300_000 {
        let cr = c.matmul(&r).unwrap();
        let mut grad = cr.add_scaled(aperture_inv_sq, &c).unwrap();
        grad = grad.add_scaled(-1.0, &r).unwrap().scaled(2.0);
        if grad.max_abs_diff(&Matrix::zeros(n, n)) <= 1e-9 {
            break;
        }
        let next = c.add_scaled(-step, &grad).unwrap();
        let mut sym = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                sym.set(i, j, 0.5 * (next.get(i, j) + next.get(j, i)));
            }
        }
        c = sym;
    }
    c
}

#[test]
fn acceptance_01_closed_form_matches_descent_oracle() {
    let started = Instant::now();
    let mut r = rng(101);
    for dataset in 0..20 {
        let x = random_matrix(&mut r, 5, 40);
        for &aperture in &[0.5, 1.0, 2.0] {
            let closed = compute_conceptor(&x, aperture).unwrap();
            let oracle = gradient_descent_conceptor(&x, aperture);
            let gap = closed
                .matrix()
                .add_scaled(-1.0, &oracle)
                .unwrap()
                .frobenius_norm();
            assert!(
                gap <= 1e-4,
                "dataset {dataset}, aperture {aperture}: Frobenius gap {gap:e}"
            );
            let at_closed = conceptor_objective(closed.matrix(), &x, aperture).unwrap();
            let at_oracle = conceptor_objective(&oracle, &x, aperture).unwrap();
            assert!(
                at_closed <= at_oracle + 1e-8,
                "dataset {dataset}, aperture {aperture}: {at_closed} > {at_oracle} + 1e-8"
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "[PASS] criterion 1: closed form within 1e-4 of descent oracle, objective within 1e-8 \
         (20 datasets x 3 apertures, {elapsed:?})"
    );
}

#[test]
fn acceptance_02_spectral_law() {
    let started = Instant::now();
    let mut r = rng(202);
    let apertures = [0.5, 1.0, 2.0];
    for i in 0..50 {
        let n = 2 + (i * 48) / 49; // 2..=50
        let aperture = apertures[i % apertures.len()];
        let x = random_matrix(&mut r, n, n + 10);
        let cov = uncentered_covariance(&x).unwrap();
        let conceptor = Conceptor::from_covariance(&cov, aperture).unwrap();
        let sigmas = conceptor.source_eigenvalues();

        // Fresh decompositions of the constructed matrices, compared against
        // the law applied to the covariance spectrum.
        let c_eig = sym_eig(conceptor.matrix()).unwrap();
        for (got, &sigma) in c_eig.eigenvalues().iter().zip(sigmas) {
            assert!(
                (got - sigma / (sigma + aperture)).abs() <= 1e-8,
                "n={n}: conceptor eigenvalue {got} vs sigma {sigma}"
            );
        }
        let g_eig = sym_eig(conceptor.complement().matrix()).unwrap();
        for (k, got) in g_eig.eigenvalues().iter().enumerate() {
            let sigma = sigmas[n - 1 - k];
            assert!(
                (got - aperture / (sigma + aperture)).abs() <= 1e-8,
                "n={n}: complement eigenvalue {got} vs sigma {sigma}"
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "[PASS] criterion 2: conceptor/complement eigenvalues match sigma/(sigma+a) and \
         a/(sigma+a) within 1e-8 (50 covariances up to N=50, {elapsed:?})"
    );
}

struct SyntheticCorpus {
    embeddings: EmbeddingTable,
    frequencies: FrequencyTable,
    stops: StopWordSet,
    sentences: Vec<TokenizedSentence>,
}

fn synthetic_corpus(seed: u64, dim: usize, vocab: usize, n_sentences: usize) -> SyntheticCorpus {
    let mut r = rng(seed);
    let entries: Vec<(String, Vec<f64>)> = (0..vocab)
        .map(|i| {
            let v: Vec<f64> = (0..dim).map(|_| r.gen_range(-1.0..1.0)).collect();
            (format!("w{i}"), v)
        })
        .collect();
    let embeddings = EmbeddingTable::from_entries(entries).unwrap();
    let counts: Vec<(String, u64)> = (0..vocab)
        .map(|i| (format!("w{i}"), r.gen_range(1..5000u64)))
        .collect();
    let frequencies = FrequencyTable::from_counts(counts).unwrap();
    let stops = StopWordSet::from_words((0..4).map(|i| format!("w{i}")));
    let sentences: Vec<TokenizedSentence> = (0..n_sentences)
        .map(|_| {
            let len = r.gen_range(3..9);
            let words: Vec<String> = (0..len)
                .map(|_| format!("w{}", r.gen_range(0..vocab)))
                .collect();
            tokenize(&words.join(" "))
        })
        .collect();
    SyntheticCorpus {
        embeddings,
        frequencies,
        stops,
        sentences,
    }
}

#[test]
fn acceptance_03_hard_override_equals_pc1_pipeline() {
    let started = Instant::now();
    for seed in 0..20 {
        let corpus = synthetic_corpus(300 + seed, 10, 40, 30);
        let cfg = CompositionConfig::with_method(Method::SifPc1);
        let pc1 = embed_corpus(
            &corpus.sentences,
            &corpus.embeddings,
            &corpus.frequencies,
            &corpus.stops,
            &cfg,
        )
        .unwrap();

        let raws: Vec<Vector> = corpus
            .sentences
            .iter()
            .map(|s| {
                weighted_average(s, &corpus.embeddings, &corpus.frequencies, cfg.a)
                    .unwrap()
                    .vector
            })
            .collect();
        let sentence_matrix = Matrix::from_columns(&raws).unwrap();
        let conceptor = compute_conceptor(&sentence_matrix, cfg.aperture_inv_sq).unwrap();
        let overridden = conceptor.hard_override(1).unwrap();

        for (k, raw) in raws.iter().enumerate() {
            let bridged = overridden.apply(raw).unwrap();
            let reference = &pc1[k].vector;
            for i in 0..raw.dim() {
                let diff = (bridged.get(i) - reference.get(i)).abs();
                assert!(
                    diff <= 1e-8,
                    "seed {seed}, sentence {k}, coordinate {i}: diff {diff:e}"
                );
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "[PASS] criterion 3: spectrum override with one zero matches the sif-pc1 pipeline \
         within 1e-8 per coordinate (20 corpora, {elapsed:?})"
    );
}

#[test]
fn acceptance_04_aperture_limits() {
    let started = Instant::now();

    // Wide-open regularization: the soft projector degenerates to identity.
    let corpus = synthetic_corpus(400, 8, 30, 25);
    let average = embed_corpus(
        &corpus.sentences,
        &corpus.embeddings,
        &corpus.frequencies,
        &corpus.stops,
        &CompositionConfig::with_method(Method::AverageOnly),
    )
    .unwrap();
    let cfg = CompositionConfig {
        aperture_inv_sq: 1e8,
        ..CompositionConfig::default()
    };
    let soft = embed_corpus(
        &corpus.sentences,
        &corpus.embeddings,
        &corpus.frequencies,
        &corpus.stops,
        &cfg,
    )
    .unwrap();
    for (k, (s, a)) in soft.iter().zip(&average).enumerate() {
        let rel = s.vector.sub(&a.vector).unwrap().norm() / a.vector.norm();
        assert!(rel <= 1e-5, "sentence {k}: relative gap {rel:e}");
    }

    // Tight regularization on full-rank data: the complement annihilates.
    let mut r = rng(401);
    for trial in 0..5 {
        let base = random_matrix(&mut r, 6, 20);
        let cov = uncentered_covariance(&base)
            .unwrap()
            .add_scaled(0.1, &Matrix::identity(6))
            .unwrap();
        let conceptor = Conceptor::from_covariance(&cov, 1e-8).unwrap();
        assert!(conceptor.source_eigenvalues().iter().all(|&s| s >= 0.1));
        let g = conceptor.complement();
        for _ in 0..20 {
            let v = Vector::new((0..6).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap();
            let ratio = g.apply(&v).unwrap().norm() / v.norm();
            assert!(ratio <= 1e-5, "trial {trial}: |Gv|/|v| = {ratio:e}");
        }
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "[PASS] criterion 4: aperture limits hold (1e8 -> identity within 1e-5 relative; \
         1e-8 on sigma_min >= 0.1 -> |Gv| <= 1e-5 |v|, {elapsed:?})"
    );
}

/// Counting-based average ranks plus a direct Pearson formula; no sorting,
/// fully independent of the implementation under test.
fn reference_spearman(x: &[f64], y: &[f64]) -> f64 {
    fn counting_ranks(values: &[f64]) -> Vec<f64> {
        values
            .iter()
            .map(|&v| {
                let below = values.iter().filter(|&&w| w < v).count() as f64;
                let equal = values.iter().filter(|&&w| w == v).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect()
    }
    let rx = counting_ranks(x);
    let ry = counting_ranks(y);
    let n = rx.len() as f64;
    let sx: f64 = rx.iter().sum();
    let sy: f64 = ry.iter().sum();
    let sxy: f64 = rx.iter().zip(&ry).map(|(a, b)| a * b).sum();
    let sxx: f64 = rx.iter().map(|a| a * a).sum();
    let syy: f64 = ry.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

#[test]
fn acceptance_05_spearman_against_reference() {
    let started = Instant::now();
    let mut r = rng(505);
    let mut done = 0usize;
    while done < 100 {
        let len = r.gen_range(3..=200);
        // Small integer range forces plenty of ties.
        let x: Vec<f64> = (0..len).map(|_| r.gen_range(0..25) as f64).collect();
        let y: Vec<f64> = (0..len).map(|_| r.gen_range(0..25) as f64).collect();
        let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
        if constant(&x) || constant(&y) {
            continue;
        }
        let got = spearman(&x, &y).unwrap();
        let expected = reference_spearman(&x, &y);
        assert!(
            (got - expected).abs() <= 1e-12,
            "len {len}: {got} vs {expected}"
        );
        done += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "[PASS] criterion 5: Spearman matches rank-then-Pearson reference within 1e-12 \
         (100 tied integer lists, lengths 3-200, {elapsed:?})"
    );
}

// Golden Spearman values recorded from the bundled synthetic corpus by the
// reference run of this pipeline (see examples/generate_fixtures.rs).
const GOLDEN_AVERAGE_ONLY: f64 = 0.5907626105437274;
const GOLDEN_SIF_PC1: f64 = 0.7020457150097154;
const GOLDEN_CONCEPTOR: f64 = 0.8769362657502683;
const GOLDEN_TOL: f64 = 0.02;

#[test]
fn acceptance_06_synthetic_corpus_directional_claim() {
    let started = Instant::now();
    let synth = fixtures().join("synthetic");
    let open = |name: &str| std::io::BufReader::new(fs::File::open(synth.join(name)).unwrap());
    let embeddings = io::load_embeddings(open("embeddings.txt")).unwrap().value;
    let frequencies = io::load_frequencies(open("frequencies.txt")).unwrap().value;
    let stops = io::load_stopwords(open("stopwords.txt")).unwrap().value;
    let pairs = io::parse_sts(open("sts.tsv")).unwrap();
    assert_eq!(pairs.len(), 200);

    let configs = vec![
        CompositionConfig::with_method(Method::AverageOnly),
        CompositionConfig::with_method(Method::SifPc1),
        CompositionConfig::default(),
    ];
    let report = evaluate(&pairs, &embeddings, &frequencies, &stops, &configs).unwrap();
    let average = report.get("average-only").unwrap().spearman;
    let pc1 = report.get("sif-pc1").unwrap().spearman;
    let conceptor = report.get("conceptor").unwrap().spearman;

    assert!(
        conceptor > pc1 && conceptor > average,
        "ordering violated: conceptor {conceptor}, sif-pc1 {pc1}, average-only {average}"
    );
    assert!(
        (average - GOLDEN_AVERAGE_ONLY).abs() <= GOLDEN_TOL,
        "average-only {average} vs golden {GOLDEN_AVERAGE_ONLY}"
    );
    assert!(
        (pc1 - GOLDEN_SIF_PC1).abs() <= GOLDEN_TOL,
        "sif-pc1 {pc1} vs golden {GOLDEN_SIF_PC1}"
    );
    assert!(
        (conceptor - GOLDEN_CONCEPTOR).abs() <= GOLDEN_TOL,
        "conceptor {conceptor} vs golden {GOLDEN_CONCEPTOR}"
    );

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "[PASS] criterion 6: conceptor {conceptor:.4} > sif-pc1 {pc1:.4} > average-only \
         {average:.4} on the bundled synthetic corpus; all within 0.02 of goldens ({elapsed:?})"
    );
}

#[test]
fn acceptance_07_cmd_eval_is_byte_deterministic() {
    let started = Instant::now();
    let synth = fixtures().join("synthetic");
    let dir = tempfile::tempdir().unwrap();

    let mut reports: Vec<Vec<u8>> = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("report{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_conceptor-embedding"))
            .arg("eval")
            .arg("--embeddings")
            .arg(synth.join("embeddings.txt"))
            .arg("--frequencies")
            .arg(synth.join("frequencies.txt"))
            .arg("--stopwords")
            .arg(synth.join("stopwords.txt"))
            .arg("--dataset")
            .arg(synth.join("sts.tsv"))
            .arg("--method")
            .arg("average-only")
            .arg("--method")
            .arg("sif-pc1")
            .arg("--method")
            .arg("sif-top-d")
            .arg("--method")
            .arg("conceptor")
            .arg("--output")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        reports.push(fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1], "reports differ between runs");
    assert!(!reports[0].is_empty());

    let elapsed = started.elapsed();
    println!(
        "[PASS] criterion 7: two cmd_eval runs produced byte-identical reports \
         ({} bytes, {elapsed:?})",
        reports[0].len()
    );
}

#[test]
fn acceptance_08_parser_golden_files() {
    let golden = fixtures().join("golden");
    let open = |name: &str| std::io::BufReader::new(fs::File::open(golden.join(name)).unwrap());

    // Embeddings: 6 lines; `broken` (bad float) and `gamma` (width 3) are
    // skipped and tallied; the duplicate `alpha` keeps its first vector.
    let loaded = io::load_embeddings(open("embeddings_mixed.txt")).unwrap();
    assert_eq!(loaded.value.dim(), 2);
    assert_eq!(loaded.value.len(), 3);
    assert_eq!(loaded.skipped_lines, 2);
    assert_eq!(loaded.value.get("alpha").unwrap().as_slice(), &[1.0, 2.0]);
    assert_eq!(loaded.value.get("beta").unwrap().as_slice(), &[0.5, -0.5]);
    assert_eq!(loaded.value.get("delta").unwrap().as_slice(), &[-1.0, 0.25]);
    assert!(loaded.value.get("broken").is_none());
    assert!(loaded.value.get("gamma").is_none());

    // Frequencies: counts 60/25/10/5 normalize over a total of 100.
    let loaded = io::load_frequencies(open("frequencies.txt")).unwrap();
    assert_eq!(loaded.skipped_lines, 0);
    assert_eq!(loaded.value.total_count(), 100);
    assert_eq!(loaded.value.probability("the"), 0.6);
    assert_eq!(loaded.value.probability("of"), 0.25);
    assert_eq!(loaded.value.probability("and"), 0.1);
    assert_eq!(loaded.value.probability("cat"), 0.05);
    assert_eq!(loaded.value.probability("dog"), 0.0);

    // Stop words: case-folded, deduplicated, blank line ignored, order kept.
    let loaded = io::load_stopwords(open("stopwords.txt")).unwrap();
    let words: Vec<&str> = loaded.value.iter().collect();
    assert_eq!(words, ["the", "of", "and", "a"]);

    // STS pairs: three exact records.
    let pairs = io::parse_sts(open("sts.tsv")).unwrap();
    assert_eq!(pairs.len(), 3);
    assert_eq!(pairs[0].sentence_a, "A black dog runs.");
    assert_eq!(pairs[0].sentence_b, "A dog runs fast.");
    assert_eq!(pairs[0].gold, 3.8);
    assert_eq!(pairs[1].gold, 0.4);
    assert_eq!(pairs[2].sentence_a, "Kids play outside");
    assert_eq!(pairs[2].gold, 4.6);

    println!(
        "[PASS] criterion 8: embedding/frequency/stop-word/STS parsers reproduce the golden \
         structures, including skip tallies"
    );
}
