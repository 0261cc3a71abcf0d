//! Regenerates the bundled synthetic STS fixtures under `fixtures/synthetic/`.
//!
//! The corpus is built so that the methods separate cleanly:
//!
//! - every word vector carries a shared "background" component spread over
//!   three leading axes with decaying strength (10, 6, 4) and per-word
//!   jitter, so the common component is a genuine 3-dimensional subspace
//!   rather than a single direction;
//! - topical signal lives in trailing axes with strength 3; topics sit on a
//!   ring, adjacent topics overlapping, so gold similarities are graded;
//! - gold = 2.5 * topic-similarity + 2.5 * content-word Jaccard overlap.
//!
//! Plain averaging drowns in the background; removing one principal
//! component cleans only the strongest background axis; the soft projector
//! attenuates all three in proportion to their variance. Output files are
//! deterministic for a fixed seed.
//!
//! Run with: cargo run -p conceptor-embedding-cli --example generate_fixtures

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DIM: usize = 18;
const N_TOPICS: usize = 5;
const WORDS_PER_TOPIC: usize = 12;
const N_FUNCTION: usize = 10;

const BG_SCALES: [f64; 5] = [10.0, 7.0, 5.0, 3.5, 2.5];
const BG_JITTER: f64 = 1.0;
const TOPIC_SCALE: f64 = 1.6;
const SIGNATURE_SCALE: f64 = 0.8;
const GLOBAL_NOISE: f64 = 0.1;

const PAIRS_SAME: usize = 70;
const PAIRS_ADJACENT: usize = 65;
const PAIRS_FAR: usize = 65;

fn jitter(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    1.0 + scale * rng.gen_range(-1.0..1.0)
}

fn background(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v = vec![0.0; DIM];
    for (axis, &scale) in BG_SCALES.iter().enumerate() {
        v[axis] = scale * jitter(rng, BG_JITTER);
    }
    v
}

/// Topics live on a ring over axes 5..15, two axes each, with a bleed into
/// the next topic's leading axis so adjacent topics overlap.
fn add_topic(v: &mut [f64], topic: usize) {
    v[5 + 2 * topic] += TOPIC_SCALE * 0.8;
    v[6 + 2 * topic] += TOPIC_SCALE * 0.6;
    v[5 + 2 * ((topic + 1) % N_TOPICS)] += TOPIC_SCALE * 0.48;
}

fn content_vector(rng: &mut ChaCha8Rng, topic: usize) -> Vec<f64> {
    let mut v = background(rng);
    add_topic(&mut v, topic);
    // Per-word signature on the trailing axes carries the overlap signal.
    for x in v[15..].iter_mut() {
        *x += SIGNATURE_SCALE * rng.gen_range(-1.0..1.0);
    }
    for x in v.iter_mut() {
        *x += GLOBAL_NOISE * rng.gen_range(-1.0..1.0);
    }
    v
}

fn function_vector(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v = background(rng);
    for x in v.iter_mut() {
        *x += GLOBAL_NOISE * rng.gen_range(-1.0..1.0);
    }
    v
}

fn topic_similarity(a: usize, b: usize) -> f64 {
    if a == b {
        return 1.0;
    }
    let d = (a as i64 - b as i64).rem_euclid(N_TOPICS as i64);
    if d == 1 || d == N_TOPICS as i64 - 1 {
        0.4
    } else {
        0.0
    }
}

struct Generator {
    rng: ChaCha8Rng,
    oov_counter: usize,
}

impl Generator {
    /// Renders a sentence from topic-`topic` content word ids plus random
    /// function words, with light punctuation and capitalization so the
    /// tokenizer has something to do.
    fn sentence(&mut self, topic: usize, content_ids: &[usize]) -> String {
        let mut tokens: Vec<String> = content_ids
            .iter()
            .map(|&id| format!("t{topic}w{id}", id = id % WORDS_PER_TOPIC))
            .collect();
        let n_function = self.rng.gen_range(2..=4);
        for _ in 0..n_function {
            tokens.push(format!("f{}", self.rng.gen_range(0..N_FUNCTION)));
        }
        // An occasional out-of-vocabulary token.
        if self.rng.gen_range(0..100) < 4 {
            tokens.push(format!("qqqx{}", self.oov_counter));
            self.oov_counter += 1;
        }
        tokens.shuffle(&mut self.rng);
        let mut text = String::new();
        for (i, token) in tokens.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            if i == 0 {
                let mut chars = token.chars();
                if let Some(first) = chars.next() {
                    write!(text, "{}{}", first.to_uppercase(), chars.as_str()).unwrap();
                }
            } else {
                text.push_str(token);
            }
            if i == 1 && tokens.len() > 3 {
                text.push(',');
            }
        }
        text.push('.');
        text
    }

    fn content_ids(&mut self, topic: usize, count: usize, exclude: &[usize]) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..WORDS_PER_TOPIC)
            .map(|i| topic * WORDS_PER_TOPIC + i)
            .filter(|id| !exclude.contains(id))
            .collect();
        pool.shuffle(&mut self.rng);
        pool.truncate(count);
        pool
    }
}

fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let overlap = a.iter().filter(|id| b.contains(id)).count() as f64;
    let union = (a.len() + b.len()) as f64 - overlap;
    overlap / union
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20180818);
    let out_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic");
    fs::create_dir_all(&out_dir).expect("create fixtures/synthetic");

    // Vocabulary ----------------------------------------------------------
    let mut embedding_lines: Vec<String> = Vec::new();
    let mut frequency_lines: Vec<String> = Vec::new();
    let word_line = |word: &str, v: &[f64]| {
        let coords: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        format!("{word} {}", coords.join(" "))
    };

    for f in 0..N_FUNCTION {
        let v = function_vector(&mut rng);
        embedding_lines.push(word_line(&format!("f{f}"), &v));
        frequency_lines.push(format!("f{f} {}", 1_500_000 + 37 * f));
    }
    for topic in 0..N_TOPICS {
        for i in 0..WORDS_PER_TOPIC {
            let v = content_vector(&mut rng, topic);
            embedding_lines.push(word_line(&format!("t{topic}w{i}"), &v));
            // A few content words stay out of the frequency table, so their
            // probability falls back to 0 and their weight to 1.
            if !(topic == 2 && i < 3) {
                frequency_lines.push(format!("t{topic}w{i} {}", rng.gen_range(40..4000)));
            }
        }
    }
    // Unused decoy words; loaders must carry them without harm.
    for d in 0..5 {
        let v = function_vector(&mut rng);
        embedding_lines.push(word_line(&format!("decoy{d}"), &v));
        frequency_lines.push(format!("decoy{d} {}", rng.gen_range(100..900)));
    }

    // Pairs ----------------------------------------------------------------
    let mut generator = Generator {
        rng: ChaCha8Rng::seed_from_u64(811229),
        oov_counter: 0,
    };
    let mut pair_specs: Vec<(usize, usize)> = Vec::new();
    let mut spec_rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..PAIRS_SAME {
        let t = spec_rng.gen_range(0..N_TOPICS);
        pair_specs.push((t, t));
    }
    for _ in 0..PAIRS_ADJACENT {
        let t = spec_rng.gen_range(0..N_TOPICS);
        pair_specs.push((t, (t + 1) % N_TOPICS));
    }
    for _ in 0..PAIRS_FAR {
        let t = spec_rng.gen_range(0..N_TOPICS);
        pair_specs.push((t, (t + 2) % N_TOPICS));
    }
    pair_specs.shuffle(&mut spec_rng);

    let mut sts_lines: Vec<String> = Vec::new();
    for (topic_a, topic_b) in pair_specs {
        let k1 = generator.rng.gen_range(2..=5);
        let ids_a = generator.content_ids(topic_a, k1, &[]);
        let ids_b = if topic_a == topic_b {
            let k2 = generator.rng.gen_range(2..=5);
            let shared = generator.rng.gen_range(0..=k1.min(k2));
            let mut ids: Vec<usize> = ids_a[..shared].to_vec();
            ids.extend(generator.content_ids(topic_b, k2 - shared, &ids));
            ids
        } else {
            let k2 = generator.rng.gen_range(2..=5);
            generator.content_ids(topic_b, k2, &[])
        };
        let gold = 2.5 * topic_similarity(topic_a, topic_b) + 2.5 * jaccard(&ids_a, &ids_b);
        let a = generator.sentence(topic_a, &ids_a);
        let b = generator.sentence(topic_b, &ids_b);
        sts_lines.push(format!("{a}\t{b}\t{gold}"));
    }

    // Files ----------------------------------------------------------------
    let stopword_lines: Vec<String> = (0..N_FUNCTION).map(|f| format!("f{f}")).collect();
    fs::write(
        out_dir.join("embeddings.txt"),
        embedding_lines.join("\n") + "\n",
    )
    .unwrap();
    fs::write(
        out_dir.join("frequencies.txt"),
        frequency_lines.join("\n") + "\n",
    )
    .unwrap();
    fs::write(
        out_dir.join("stopwords.txt"),
        stopword_lines.join("\n") + "\n",
    )
    .unwrap();
    fs::write(out_dir.join("sts.tsv"), sts_lines.join("\n") + "\n").unwrap();

    println!(
        "wrote {} words, {} pairs to {}",
        embedding_lines.len(),
        sts_lines.len(),
        out_dir.display()
    );
}
