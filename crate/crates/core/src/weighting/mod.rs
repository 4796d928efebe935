//! Document frequencies, the three weighting schemes, and key-term selection.

mod export;
mod select;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::TermVector;

pub use export::{export_matrix, format_weight, ExportFormat};
pub use select::{select_joint, select_key_terms, Aggregation, KeyTermSet, RemovedPct, Selection};

/// Vocabulary, document frequencies and per-document counts for a corpus.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    vocabulary: Arc<[String]>,
    doc_ids: Arc<[String]>,
    df: Vec<u64>,
    /// Per document: `(term index, count)` sorted by term index.
    rows: Vec<Vec<(usize, u64)>>,
    totals: Vec<u64>,
    vectors: Vec<TermVector>,
}

/// Builds the index. Empty vectors count towards the number of documents.
pub fn build_index(vectors: Vec<TermVector>) -> Result<CorpusIndex> {
    if vectors.is_empty() {
        return Err(Error::NoDocuments);
    }
    let vocab: BTreeSet<&str> = vectors.iter().flat_map(|v| v.terms()).collect();
    let vocabulary: Arc<[String]> = vocab.into_iter().map(str::to_owned).collect();
    let ids: HashMap<&str, usize> = vocabulary.iter().enumerate().map(|(j, t)| (t.as_str(), j)).collect();
    let mut df = vec![0u64; vocabulary.len()];
    let rows: Vec<Vec<(usize, u64)>> = vectors
        .iter()
        .map(|v| {
            // BTreeMap iteration is sorted, and so are the indices
            v.counts()
                .iter()
                .map(|(t, &n)| {
                    let j = ids[t.as_str()];
                    df[j] += 1;
                    (j, n)
                })
                .collect()
        })
        .collect();
    let totals = vectors.iter().map(TermVector::total).collect();
    let doc_ids = vectors.iter().map(|v| v.doc_id().to_owned()).collect();
    Ok(CorpusIndex {
        vocabulary,
        doc_ids,
        df,
        rows,
        totals,
        vectors,
    })
}

impl CorpusIndex {
    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_count(&self) -> usize {
        self.rows.len()
    }

    pub fn vectors(&self) -> &[TermVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<TermVector> {
        self.vectors
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.vocabulary.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    /// Number of documents containing term `j`.
    pub fn df(&self, j: usize) -> u64 {
        self.df[j]
    }

    pub fn df_of(&self, term: &str) -> Option<u64> {
        self.term_index(term).map(|j| self.df[j])
    }

    /// Count of term `j` in document `i`, zero when absent.
    pub fn count(&self, i: usize, j: usize) -> u64 {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |&(k, _)| k).map(|p| row[p].1).unwrap_or(0)
    }

    pub fn doc_total(&self, i: usize) -> u64 {
        self.totals[i]
    }

    /// Populated `(term index, count)` pairs of document `i`.
    pub fn row(&self, i: usize) -> &[(usize, u64)] {
        &self.rows[i]
    }

    /// Σ_i f_ij for every term.
    pub fn corpus_frequencies(&self) -> Vec<u64> {
        let mut freq = vec![0u64; self.vocabulary.len()];
        for row in &self.rows {
            for &(j, n) in row {
                freq[j] += n;
            }
        }
        freq
    }

    /// A new index over the same documents keeping only `keep`. Totals are
    /// recomputed from the surviving terms.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> CorpusIndex {
        let vectors = self
            .vectors
            .iter()
            .cloned()
            .map(|mut v| {
                v.retain(|t| keep.contains(t));
                v
            })
            .collect();
        build_index(vectors).expect("document count is unchanged and non-zero")
    }
}

/// Terms whose total corpus frequency is at least `min_count`.
pub fn frequent_terms(index: &CorpusIndex, min_count: u64) -> Result<BTreeSet<String>> {
    if min_count == 0 {
        return Err(Error::Config("min_count must be at least 1".into()));
    }
    Ok(index
        .corpus_frequencies()
        .into_iter()
        .zip(index.vocabulary.iter())
        .filter(|(f, _)| *f >= min_count)
        .map(|(_, t)| t.clone())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    TfIdf,
    TfDf,
    Tf2,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::TfIdf, Scheme::TfDf, Scheme::Tf2];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::TfIdf => "tfidf",
            Scheme::TfDf => "tfdf",
            Scheme::Tf2 => "tf2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfidf" | "tf-idf" => Ok(Scheme::TfIdf),
            "tfdf" | "tf-df" => Ok(Scheme::TfDf),
            "tf2" => Ok(Scheme::Tf2),
            other => Err(Error::Config(format!("unknown weighting scheme `{other}`"))),
        }
    }
}

/// Base of the logarithm in the idf factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    E,
    #[serde(rename = "10")]
    Ten,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Ten => x.log10(),
            LogBase::Two => x.log2(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Ten => "10",
            LogBase::Two => "2",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "ln" => Ok(LogBase::E),
            "10" => Ok(LogBase::Ten),
            "2" => Ok(LogBase::Two),
            other => Err(Error::Config(format!("unknown log base `{other}` (use e, 10 or 2)"))),
        }
    }
}

/// Minimum weights for tf-idf (`alpha`), tf-df (`beta`) and tf2 (`gamma`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            alpha: 0.028,
            beta: 0.01,
            gamma: 0.005,
        }
    }
}

impl Thresholds {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let t = Thresholds { alpha, beta, gamma };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            check_threshold(name, v)?;
        }
        Ok(())
    }

    pub fn for_scheme(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::TfIdf => self.alpha,
            Scheme::TfDf => self.beta,
            Scheme::Tf2 => self.gamma,
        }
    }
}

pub(crate) fn check_threshold(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}

fn populated(index: &CorpusIndex, i: usize, j: usize) -> Result<(f64, f64)> {
    let f = index.count(i, j);
    if f == 0 {
        return Err(Error::UndefinedEntry { doc: i, term: j });
    }
    let tf = f as f64 / index.doc_total(i) as f64;
    let df = index.df(j) as f64 / index.doc_count() as f64;
    Ok((tf, df))
}

/// (f_ij / Σ_j f_ij) · ln(|D| / df_j).
pub fn tfidf(index: &CorpusIndex, i: usize, j: usize) -> Result<f64> {
    tfidf_base(index, i, j, LogBase::E)
}

pub fn tfidf_base(index: &CorpusIndex, i: usize, j: usize, base: LogBase) -> Result<f64> {
    let (tf, _) = populated(index, i, j)?;
    let ratio = index.doc_count() as f64 / index.df(j) as f64;
    Ok(tf * base.log(ratio))
}

/// TF divided by the fraction of documents containing the term.
pub fn tfdf(index: &CorpusIndex, i: usize, j: usize) -> Result<f64> {
    let (tf, df) = populated(index, i, j)?;
    Ok(tf / df)
}

/// tf-idf times tf-df.
pub fn tf2(index: &CorpusIndex, i: usize, j: usize) -> Result<f64> {
    tf2_base(index, i, j, LogBase::E)
}

pub fn tf2_base(index: &CorpusIndex, i: usize, j: usize, base: LogBase) -> Result<f64> {
    Ok(tfidf_base(index, i, j, base)? * tfdf(index, i, j)?)
}

pub fn weight(index: &CorpusIndex, scheme: Scheme, base: LogBase, i: usize, j: usize) -> Result<f64> {
    match scheme {
        Scheme::TfIdf => tfidf_base(index, i, j, base),
        Scheme::TfDf => tfdf(index, i, j),
        Scheme::Tf2 => tf2_base(index, i, j, base),
    }
}

/// Sparse document-term weights for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    scheme: Scheme,
    log_base: LogBase,
    vocabulary: Arc<[String]>,
    doc_ids: Arc<[String]>,
    rows: Vec<Vec<(usize, f64)>>,
}

/// One weight per populated cell. Rows are computed in parallel; the result
/// does not depend on the number of threads.
pub fn compute_matrix(index: &CorpusIndex, scheme: Scheme, base: LogBase) -> WeightMatrix {
    let rows = (0..index.doc_count())
        .into_par_iter()
        .map(|i| {
            index
                .row(i)
                .iter()
                .map(|&(j, _)| {
                    let w = weight(index, scheme, base, i, j).expect("row cells are populated");
                    (j, w)
                })
                .collect()
        })
        .collect();
    WeightMatrix {
        scheme,
        log_base: base,
        vocabulary: Arc::clone(&index.vocabulary),
        doc_ids: Arc::clone(&index.doc_ids),
        rows,
    }
}

impl WeightMatrix {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// `(documents, terms)`.
    pub fn dimensions(&self) -> (usize, usize) {
        (self.rows.len(), self.vocabulary.len())
    }

    pub fn entry_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let row = self.rows.get(i)?;
        row.binary_search_by_key(&j, |&(k, _)| k).ok().map(|p| row[p].1)
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Every populated cell as `(doc index, term index, weight)`, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, w)| (i, j, w)))
    }

    /// Populated weights grouped by term index.
    pub(crate) fn by_term(&self) -> BTreeMap<usize, Vec<f64>> {
        let mut out: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (_, j, w) in self.cells() {
            out.entry(j).or_default().push(w);
        }
        out
    }
}
