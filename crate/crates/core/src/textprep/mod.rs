//! Turning raw document text into stemmed, stopword-free term counts.

mod porter;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{RawDocument, StopwordList};

pub use porter::porter_stem;
pub(crate) use porter::stem_unchecked;

/// Tokens shorter than this many characters are dropped by [`tokenize`].
pub const MIN_TOKEN_CHARS: usize = 2;

/// A lowercase, purely alphabetic word produced by [`tokenize`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Splits `text` on every non-alphabetic character, lowercases, and drops
/// tokens shorter than [`MIN_TOKEN_CHARS`]. Order is preserved.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if current.chars().count() >= MIN_TOKEN_CHARS {
            tokens.push(Token(std::mem::take(current)));
        } else {
            current.clear();
        }
    };
    for c in text.chars() {
        if !c.is_alphabetic() {
            flush(&mut current);
            continue;
        }
        // a few letters lowercase to sequences containing combining marks
        for lower in c.to_lowercase() {
            if lower.is_alphabetic() {
                current.push(lower);
            } else {
                flush(&mut current);
            }
        }
    }
    flush(&mut current);
    tokens
}

/// Drops every token found in `stopwords`, keeping the relative order of the rest.
pub fn remove_stopwords(tokens: Vec<Token>, stopwords: &StopwordList) -> Vec<Token> {
    tokens.into_iter().filter(|t| !stopwords.contains(t.as_str())).collect()
}

/// Stems an already-validated token.
pub fn stem_token(token: &Token) -> String {
    stem_unchecked(token.as_str())
}

/// Term occurrence counts for one document.
///
/// Every stored count is at least 1 and `total` is their exact sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermVector {
    doc_id: String,
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl TermVector {
    pub fn new(doc_id: impl Into<String>) -> Self {
        TermVector {
            doc_id: doc_id.into(),
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    /// Builds a vector by counting each term once per occurrence.
    pub fn from_terms<I, S>(doc_id: impl Into<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v = TermVector::new(doc_id);
        for t in terms {
            v.add(t, 1);
        }
        v
    }

    /// Builds a vector from explicit `(term, count)` pairs; zero counts are skipped.
    pub fn from_counts<I, S>(doc_id: impl Into<String>, counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut v = TermVector::new(doc_id);
        for (t, n) in counts {
            v.add(t, n);
        }
        v
    }

    pub fn add(&mut self, term: impl Into<String>, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(term.into()).or_insert(0) += n;
        self.total += n;
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn count(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    /// Keeps only the terms accepted by `keep`, recomputing the total.
    pub fn retain(&mut self, mut keep: impl FnMut(&str) -> bool) {
        self.counts.retain(|t, _| keep(t));
        self.total = self.counts.values().sum();
    }
}

/// Surface tokens that produced each stem, used for dictionary lookups.
pub type SurfaceForms = BTreeMap<String, BTreeSet<String>>;

/// Tokenize, drop stopwords, stem and count.
pub fn preprocess_document(doc: &RawDocument, stopwords: &StopwordList) -> TermVector {
    preprocess_with_surfaces(doc, stopwords).0
}

/// Like [`preprocess_document`], additionally recording which surface tokens
/// mapped to each stem.
pub fn preprocess_with_surfaces(doc: &RawDocument, stopwords: &StopwordList) -> (TermVector, SurfaceForms) {
    let tokens = remove_stopwords(tokenize(&doc.text), stopwords);
    count_stems(&doc.doc_id, tokens)
}

/// Stems each token and counts the stems.
pub fn count_stems(doc_id: &str, tokens: Vec<Token>) -> (TermVector, SurfaceForms) {
    let mut vector = TermVector::new(doc_id);
    let mut surfaces = SurfaceForms::new();
    for token in tokens {
        let stem = stem_token(&token);
        vector.add(stem.clone(), 1);
        surfaces.entry(stem).or_default().insert(token.into_string());
    }
    (vector, surfaces)
}

/// Merges per-document surface maps into one corpus-wide map.
pub fn merge_surfaces<'a, I>(maps: I) -> SurfaceForms
where
    I: IntoIterator<Item = &'a SurfaceForms>,
{
    let mut merged = SurfaceForms::new();
    for map in maps {
        for (stem, forms) in map {
            merged.entry(stem.clone()).or_default().extend(forms.iter().cloned());
        }
    }
    merged
}
