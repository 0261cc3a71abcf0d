//! Streaming readers for the text formats the pipeline consumes.
//!
//! All readers work line by line with a reused byte buffer, so
//! multi-gigabyte embedding files load in bounded memory. Lines that are
//! not valid UTF-8 are treated like any other malformed line of the format:
//! skipped and tallied for the lenient loaders, rejected with a line number
//! by the strict ones.

use std::io::BufRead;

use conceptor_embedding::{EmbeddingTable, FrequencyTable, StopWordSet, StsPair};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("no valid records found")]
    Empty,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] conceptor_embedding::Error),
}

/// A loaded value plus the number of malformed lines that were skipped.
#[derive(Debug)]
pub struct Loaded<T> {
    pub value: T,
    pub skipped_lines: u64,
}

/// Calls `f(line_number, text)` for every line; `None` marks invalid UTF-8.
/// Trailing `\n` / `\r\n` are stripped.
fn for_each_line<R, F>(mut reader: R, mut f: F) -> Result<(), LoadError>
where
    R: BufRead,
    F: FnMut(usize, Option<&str>) -> Result<(), LoadError>,
{
    let mut buf = Vec::new();
    let mut line = 0usize;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            return Ok(());
        }
        line += 1;
        if buf.last() == Some(&b'\n') {
            buf.pop();
        }
        if buf.last() == Some(&b'\r') {
            buf.pop();
        }
        f(line, std::str::from_utf8(&buf).ok())?;
    }
}

/// Parses `word v1 v2 ... vN` lines into an embedding table.
///
/// The dimension is inferred from the first valid line. Lines whose float
/// count or parse fails are skipped and tallied; duplicate words keep their
/// first vector; empty lines are ignored. A stream with no valid line at
/// all is an error.
pub fn load_embeddings<R: BufRead>(reader: R) -> Result<Loaded<EmbeddingTable>, LoadError> {
    let mut table: Option<EmbeddingTable> = None;
    let mut skipped = 0u64;
    for_each_line(reader, |_, text| {
        let Some(text) = text else {
            skipped += 1;
            return Ok(());
        };
        if text.is_empty() {
            return Ok(());
        }
        let mut fields = text.split(' ');
        let word = fields.next().unwrap_or_default();
        if word.is_empty() {
            skipped += 1;
            return Ok(());
        }
        let mut coords = Vec::new();
        for field in fields {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => coords.push(v),
                _ => {
                    skipped += 1;
                    return Ok(());
                }
            }
        }
        if coords.is_empty() {
            skipped += 1;
            return Ok(());
        }
        match &mut table {
            None => {
                let mut t = EmbeddingTable::new(coords.len())?;
                t.insert(word, coords)?;
                table = Some(t);
            }
            Some(t) => {
                if coords.len() != t.dim() {
                    skipped += 1;
                } else {
                    t.insert(word, coords)?;
                }
            }
        }
        Ok(())
    })?;
    match table {
        Some(value) => Ok(Loaded {
            value,
            skipped_lines: skipped,
        }),
        None => Err(LoadError::Empty),
    }
}

/// Parses `word count` lines into a normalized frequency table. Counts must
/// be positive integers; a malformed line is an error naming it. Repeated
/// words accumulate their counts.
pub fn load_frequencies<R: BufRead>(reader: R) -> Result<Loaded<FrequencyTable>, LoadError> {
    let mut counts: Vec<(String, u64)> = Vec::new();
    let mut skipped = 0u64;
    for_each_line(reader, |line, text| {
        let Some(text) = text else {
            skipped += 1;
            return Ok(());
        };
        if text.trim().is_empty() {
            return Ok(());
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(LoadError::Line {
                line,
                message: format!("expected `word count`, got {} fields", fields.len()),
            });
        }
        let count: i64 = fields[1].parse().map_err(|_| LoadError::Line {
            line,
            message: format!("count `{}` is not an integer", fields[1]),
        })?;
        if count <= 0 {
            return Err(LoadError::Line {
                line,
                message: format!("count must be positive, got {count}"),
            });
        }
        counts.push((fields[0].to_string(), count as u64));
        Ok(())
    })?;
    if counts.is_empty() {
        return Err(LoadError::Empty);
    }
    Ok(Loaded {
        value: FrequencyTable::from_counts(counts)?,
        skipped_lines: skipped,
    })
}

/// One stop word per line; blank lines are ignored, case is folded, and
/// duplicates collapse. Never fails on content.
pub fn load_stopwords<R: BufRead>(reader: R) -> Result<Loaded<StopWordSet>, LoadError> {
    let mut stops = StopWordSet::default();
    let mut skipped = 0u64;
    for_each_line(reader, |_, text| {
        match text {
            None => skipped += 1,
            Some(text) => {
                let word = text.trim();
                if !word.is_empty() {
                    stops.add(word);
                }
            }
        }
        Ok(())
    })?;
    Ok(Loaded {
        value: stops,
        skipped_lines: skipped,
    })
}

/// Parses `sentenceA <TAB> sentenceB <TAB> score` lines. Any malformed line
/// (missing fields, bad score, invalid UTF-8) rejects the stream with its
/// line number; blank lines are ignored.
pub fn parse_sts<R: BufRead>(reader: R) -> Result<Vec<StsPair>, LoadError> {
    let mut pairs = Vec::new();
    for_each_line(reader, |line, text| {
        let Some(text) = text else {
            return Err(LoadError::Line {
                line,
                message: "invalid UTF-8".to_string(),
            });
        };
        if text.is_empty() {
            return Ok(());
        }
        let mut fields = text.splitn(3, '\t');
        let (Some(a), Some(b), Some(score)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(LoadError::Line {
                line,
                message: "expected `sentenceA<TAB>sentenceB<TAB>score`".to_string(),
            });
        };
        let gold: f64 = score.parse().map_err(|_| LoadError::Line {
            line,
            message: format!("score `{score}` is not a number"),
        })?;
        if !gold.is_finite() {
            return Err(LoadError::Line {
                line,
                message: format!("score `{score}` is not finite"),
            });
        }
        pairs.push(StsPair {
            sentence_a: a.to_string(),
            sentence_b: b.to_string(),
            gold,
        });
        Ok(())
    })?;
    if pairs.is_empty() {
        return Err(LoadError::Empty);
    }
    Ok(pairs)
}

/// Reads a plain sentence file, one sentence per line, skipping blank lines.
pub fn read_sentences<R: BufRead>(reader: R) -> Result<Vec<String>, LoadError> {
    let mut sentences = Vec::new();
    for_each_line(reader, |line, text| {
        let Some(text) = text else {
            return Err(LoadError::Line {
                line,
                message: "invalid UTF-8".to_string(),
            });
        };
        if !text.trim().is_empty() {
            sentences.push(text.to_string());
        }
        Ok(())
    })?;
    if sentences.is_empty() {
        return Err(LoadError::Empty);
    }
    Ok(sentences)
}
