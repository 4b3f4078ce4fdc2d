//! Corpus ingestion: tokenization, contiguous span counting, and the
//! persistent model file that stores the resulting occurrence measure.
//!
//! Every downstream quantity is a ratio of the raw counts collected here,
//! so the model file stays integer-exact and no normalization is applied.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Current model file schema version.
pub const MODEL_VERSION: u32 = 1;

/// A non-empty sequence of tokens. Equality and ordering are exact
/// token-sequence comparisons in byte order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Text(Vec<String>);

impl Text {
    /// Builds a text from tokens. Tokens must be non-empty and contain no
    /// whitespace; the sequence itself must be non-empty.
    pub fn new<I, S>(tokens: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(CorpusError::EmptyText);
        }
        for t in &tokens {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(CorpusError::BadToken { token: t.clone() });
            }
        }
        Ok(Text(tokens))
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All contiguous subsequences of length `1..=max_len`, in document order.
    pub fn windows_up_to(&self, max_len: usize) -> impl Iterator<Item = &[String]> {
        let toks = &self.0;
        (1..=max_len.min(toks.len()))
            .flat_map(move |k| (0..=toks.len() - k).map(move |i| &toks[i..i + k]))
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(" "))
    }
}

/// Splits a raw character stream into tokens: Unicode-whitespace separated,
/// ASCII punctuation trimmed from both ends, empty tokens dropped,
/// lowercased when requested. All-whitespace input yields no tokens.
pub fn tokenize(raw: &str, lowercase: bool) -> Vec<String> {
    raw.split_whitespace()
        .map(|w| w.trim_matches(|c: char| c.is_ascii_punctuation()))
        .filter(|w| !w.is_empty())
        .map(|w| {
            if lowercase {
                w.to_lowercase()
            } else {
                w.to_string()
            }
        })
        .collect()
}

/// Occurrence counts of contiguous token spans, up to a maximum span length.
///
/// Counts are monotone: a span never occurs less often than any span that
/// contains it. Stats from separate documents combine by pointwise addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusStats {
    max_span: usize,
    counts: BTreeMap<Text, u64>,
    total_tokens: u64,
    vocab: BTreeSet<String>,
}

impl CorpusStats {
    /// Empty stats for the given maximum span length.
    pub fn empty(max_span: usize) -> Result<Self, CorpusError> {
        if max_span == 0 {
            return Err(CorpusError::BadMaxSpan);
        }
        Ok(CorpusStats {
            max_span,
            counts: BTreeMap::new(),
            total_tokens: 0,
            vocab: BTreeSet::new(),
        })
    }

    pub fn max_span(&self) -> usize {
        self.max_span
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn vocab(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    pub fn span_count(&self) -> usize {
        self.counts.len()
    }

    /// Iterates spans in lexicographic token order.
    pub fn spans(&self) -> impl Iterator<Item = (&Text, u64)> {
        self.counts.iter().map(|(t, &c)| (t, c))
    }

    /// Occurrences of `x` as a contiguous token subsequence; 0 if never seen.
    pub fn measure(&self, x: &Text) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    /// Merges another stats table into this one by pointwise addition.
    /// Both sides must have been counted with the same maximum span.
    pub fn merge(&mut self, other: &CorpusStats) -> Result<(), CorpusError> {
        if self.max_span != other.max_span {
            return Err(CorpusError::MaxSpanMismatch {
                left: self.max_span,
                right: other.max_span,
            });
        }
        for (t, c) in &other.counts {
            *self.counts.entry(t.clone()).or_insert(0) += c;
        }
        self.total_tokens += other.total_tokens;
        self.vocab.extend(other.vocab.iter().cloned());
        Ok(())
    }

    /// Drops every span with fewer than `min_count` occurrences. Monotonicity
    /// guarantees the surviving set is still closed under taking sub-spans.
    pub fn pruned(&self, min_count: u64) -> CorpusStats {
        let counts: BTreeMap<Text, u64> = self
            .counts
            .iter()
            .filter(|(_, &c)| c >= min_count)
            .map(|(t, &c)| (t.clone(), c))
            .collect();
        let vocab = counts
            .keys()
            .flat_map(|t| t.tokens().iter().cloned())
            .collect();
        CorpusStats {
            max_span: self.max_span,
            counts,
            total_tokens: self.total_tokens,
            vocab,
        }
    }
}

/// Counts every contiguous span of length `1..=max_span` in a document.
/// An empty document yields empty stats.
pub fn count_spans(doc: &[String], max_span: usize) -> Result<CorpusStats, CorpusError> {
    let mut stats = CorpusStats::empty(max_span)?;
    stats.total_tokens = doc.len() as u64;
    stats.vocab = doc.iter().cloned().collect();
    for k in 1..=max_span.min(doc.len()) {
        for window in doc.windows(k) {
            let text = Text::new(window.iter().cloned())?;
            *stats.counts.entry(text).or_insert(0) += 1;
        }
    }
    Ok(stats)
}

#[derive(Serialize, Deserialize)]
struct SpanEntry {
    t: Vec<String>,
    c: u64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    max_span: usize,
    total_tokens: u64,
    spans: Vec<SpanEntry>,
}

/// Serializes stats to the model file format: UTF-8 JSON with spans sorted
/// lexicographically by token sequence for deterministic output.
pub fn to_model_string(stats: &CorpusStats) -> String {
    let model = ModelFile {
        version: MODEL_VERSION,
        max_span: stats.max_span,
        total_tokens: stats.total_tokens,
        spans: stats
            .counts
            .iter()
            .map(|(t, &c)| SpanEntry {
                t: t.tokens().to_vec(),
                c,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&model).expect("model serialization cannot fail")
}

/// Writes the model file to disk.
pub fn persist_model(stats: &CorpusStats, path: &Path) -> Result<(), CorpusError> {
    std::fs::write(path, to_model_string(stats)).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a model from its serialized form, validating every invariant.
pub fn from_model_string(data: &str) -> Result<CorpusStats, CorpusError> {
    let model: ModelFile = match serde_json::from_str(data) {
        Ok(m) => m,
        Err(err) => {
            // Distinguish a newer-schema file from plain corruption.
            if let Ok(value) = serde_json::from_str::<serde_json::Value>(data) {
                if let Some(v) = value.get("version").and_then(|v| v.as_u64()) {
                    if v != u64::from(MODEL_VERSION) {
                        return Err(CorpusError::VersionMismatch { found: v });
                    }
                }
            }
            return Err(CorpusError::Parse {
                line: err.line(),
                column: err.column(),
                message: err.to_string(),
            });
        }
    };
    if model.version != MODEL_VERSION {
        return Err(CorpusError::VersionMismatch {
            found: u64::from(model.version),
        });
    }
    if model.max_span == 0 {
        return Err(CorpusError::BadMaxSpan);
    }

    let mut counts = BTreeMap::new();
    for entry in &model.spans {
        let text = Text::new(entry.t.iter().cloned())?;
        if text.len() > model.max_span {
            return Err(CorpusError::Invariant {
                detail: format!("span \"{text}\" longer than max_span {}", model.max_span),
            });
        }
        if entry.c == 0 {
            return Err(CorpusError::Invariant {
                detail: format!("span \"{text}\" has zero count"),
            });
        }
        if counts.insert(text.clone(), entry.c).is_some() {
            return Err(CorpusError::Invariant {
                detail: format!("duplicate span \"{text}\""),
            });
        }
    }

    // Monotonicity across all stored sub-span pairs, and unit-span presence.
    for (text, &count) in &counts {
        for window in text.windows_up_to(text.len()) {
            if window.len() == text.len() {
                continue;
            }
            let sub = Text::new(window.iter().cloned())?;
            match counts.get(&sub) {
                Some(&sub_count) if sub_count < count => {
                    return Err(CorpusError::Invariant {
                        detail: format!(
                            "monotonicity violation: \"{sub}\" has count {sub_count} < count {count} of \"{text}\""
                        ),
                    });
                }
                None if window.len() == 1 => {
                    return Err(CorpusError::Invariant {
                        detail: format!("token \"{sub}\" of span \"{text}\" is not a span"),
                    });
                }
                _ => {}
            }
        }
    }

    let vocab = counts
        .keys()
        .flat_map(|t| t.tokens().iter().cloned())
        .collect();
    Ok(CorpusStats {
        max_span: model.max_span,
        counts,
        total_tokens: model.total_tokens,
        vocab,
    })
}

/// Reads a model file from disk.
pub fn load_model(path: &Path) -> Result<CorpusStats, CorpusError> {
    let data = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_model_string(&data)
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("text must contain at least one token")]
    EmptyText,
    #[error("invalid token {token:?}: tokens must be non-empty and whitespace-free")]
    BadToken { token: String },
    #[error("max_span must be at least 1")]
    BadMaxSpan,
    #[error("cannot merge stats with max_span {left} and {right}")]
    MaxSpanMismatch { left: usize, right: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("model parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("model version mismatch: found {found}, expected {MODEL_VERSION}")]
    VersionMismatch { found: u64 },
    #[error("model invariant violation: {detail}")]
    Invariant { detail: String },
}
