//! Dataset statistics, reduction tables and run metadata.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weighting::{CorpusIndex, KeyTermSet, RemovedPct, Scheme, Selection, Thresholds};

/// One row of the dataset statistics table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub name: String,
    pub documents: u64,
    pub classes: u64,
    pub largest_class: u64,
    pub avg_doc_length: u64,
}

/// Terms before and after selection for one dataset and scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionRow {
    pub dataset: String,
    pub scheme: Scheme,
    pub threshold: f64,
    pub term_count: u64,
    pub key_term_count: u64,
    pub removed_pct: String,
}

impl ReductionRow {
    pub fn from_counts(
        dataset: impl Into<String>,
        scheme: Scheme,
        threshold: f64,
        term_count: u64,
        key_term_count: u64,
    ) -> Result<Self> {
        if key_term_count > term_count {
            return Err(Error::contract(format!(
                "{key_term_count} key terms out of only {term_count} terms"
            )));
        }
        Ok(ReductionRow {
            dataset: dataset.into(),
            scheme,
            threshold,
            term_count,
            key_term_count,
            removed_pct: RemovedPct::new(term_count - key_term_count, term_count).to_string(),
        })
    }

    /// Whether `removed_pct` agrees with the row's own counts.
    pub fn is_consistent(&self) -> bool {
        self.key_term_count <= self.term_count
            && RemovedPct::new(self.term_count - self.key_term_count, self.term_count).to_string() == self.removed_pct
    }
}

/// Builds the row for a per-scheme key-term set selected from `index`.
pub fn make_reduction_row(name: &str, index: &CorpusIndex, kd: &KeyTermSet) -> Result<ReductionRow> {
    let Selection::Single { scheme, threshold } = kd.selection else {
        return Err(Error::contract(
            "reduction rows are per scheme; joint selections have no single threshold",
        ));
    };
    if kd.vocabulary_size != index.vocabulary().len() {
        return Err(Error::contract(format!(
            "key terms were selected from {} terms but the index has {}",
            kd.vocabulary_size,
            index.vocabulary().len()
        )));
    }
    if let Some(t) = kd.terms.iter().find(|t| index.term_index(t).is_none()) {
        return Err(Error::contract(format!(
            "key term `{t}` is not in the index vocabulary"
        )));
    }
    ReductionRow::from_counts(
        name,
        scheme,
        threshold,
        index.vocabulary().len() as u64,
        kd.terms.len() as u64,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    PlainText,
    Csv,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::PlainText => "txt",
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tables {
    datasets: Vec<DatasetStats>,
    reductions: Vec<ReductionRow>,
}

const STATS_HEADER: [&str; 5] = ["dataset", "documents", "classes", "largest_class", "avg_doc_length"];
const ROW_HEADER: [&str; 6] = [
    "dataset",
    "scheme",
    "threshold",
    "term_count",
    "key_term_count",
    "removed_pct",
];

/// Renders both tables. Identical inputs give identical bytes.
pub fn render_tables(rows: &[ReductionRow], stats: &[DatasetStats], format: TableFormat) -> Result<String> {
    match format {
        TableFormat::PlainText => Ok(render_plain(rows, stats)),
        TableFormat::Csv => render_csv(rows, stats),
        TableFormat::Json => {
            let tables = Tables {
                datasets: stats.to_vec(),
                reductions: rows.to_vec(),
            };
            let mut s = serde_json::to_string_pretty(&tables)?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// CSV holds two sections, statistics first, separated by one blank line.
fn render_csv(rows: &[ReductionRow], stats: &[DatasetStats]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(STATS_HEADER)?;
    for s in stats {
        w.write_record([
            s.name.clone(),
            s.documents.to_string(),
            s.classes.to_string(),
            s.largest_class.to_string(),
            s.avg_doc_length.to_string(),
        ])?;
    }
    let mut out = into_string(w)?;
    out.push('\n');
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ROW_HEADER)?;
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.scheme.to_string(),
            r.threshold.to_string(),
            r.term_count.to_string(),
            r.key_term_count.to_string(),
            r.removed_pct.clone(),
        ])?;
    }
    out.push_str(&into_string(w)?);
    Ok(out)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::contract(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::contract(e.to_string()))
}

fn csv_error(msg: impl Into<String>) -> Error {
    Error::parse("<csv report>", 0, msg)
}

fn parse_field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = rec.get(i).ok_or_else(|| csv_error(format!("missing column {i}")))?;
    raw.parse()
        .map_err(|_| csv_error(format!("bad value `{raw}` in column {i}")))
}

/// Inverse of the CSV rendering.
pub fn parse_csv_tables(text: &str) -> Result<(Vec<ReductionRow>, Vec<DatasetStats>)> {
    let (stats_part, rows_part) = text
        .split_once("\n\n")
        .ok_or_else(|| csv_error("expected two sections separated by a blank line"))?;
    let mut stats = Vec::new();
    for rec in csv::Reader::from_reader(stats_part.as_bytes()).records() {
        let rec = rec?;
        stats.push(DatasetStats {
            name: rec.get(0).unwrap_or_default().to_owned(),
            documents: parse_field(&rec, 1)?,
            classes: parse_field(&rec, 2)?,
            largest_class: parse_field(&rec, 3)?,
            avg_doc_length: parse_field(&rec, 4)?,
        });
    }
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(rows_part.as_bytes()).records() {
        let rec = rec?;
        rows.push(ReductionRow {
            dataset: rec.get(0).unwrap_or_default().to_owned(),
            scheme: parse_field(&rec, 1)?,
            threshold: parse_field(&rec, 2)?,
            term_count: parse_field(&rec, 3)?,
            key_term_count: parse_field(&rec, 4)?,
            removed_pct: rec.get(5).unwrap_or_default().to_owned(),
        });
    }
    Ok((rows, stats))
}

/// Inverse of the JSON rendering.
pub fn parse_json_tables(text: &str) -> Result<(Vec<ReductionRow>, Vec<DatasetStats>)> {
    let t: Tables = serde_json::from_str(text)?;
    Ok((t.reductions, t.datasets))
}

fn threshold_symbol(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::TfIdf => "alpha",
        Scheme::TfDf => "beta",
        Scheme::Tf2 => "gamma",
    }
}

fn key_term_heading(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::TfIdf => "Number of Key terms Tf-idf",
        Scheme::TfDf => "Number of Key terms Tf-Df",
        Scheme::Tf2 => "Number of Key terms Tf2",
    }
}

fn aligned(out: &mut String, header: &[&str], body: &[Vec<String>]) {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            body.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |out: &mut String, cells: &[&str]| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c == 0 {
                write!(s, "{cell:<w$}", w = widths[c]).unwrap();
            } else {
                write!(s, "  {cell:>w$}", w = widths[c]).unwrap();
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(out, header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(out, &rule.iter().map(String::as_str).collect::<Vec<_>>());
    for r in body {
        line(out, &r.iter().map(String::as_str).collect::<Vec<_>>());
    }
}

fn render_plain(rows: &[ReductionRow], stats: &[DatasetStats]) -> String {
    let mut out = String::from("Statistics of the datasets\n\n");
    let body: Vec<Vec<String>> = stats
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                s.documents.to_string(),
                format!("{:02}", s.classes),
                s.largest_class.to_string(),
                s.avg_doc_length.to_string(),
            ]
        })
        .collect();
    aligned(
        &mut out,
        &[
            "Data Sets",
            "Number of Documents",
            "Number of Natural classes",
            "Largest class size",
            "Average length of Documents",
        ],
        &body,
    );

    // one table per (scheme, threshold), like the original layout
    let mut groups: Vec<(Scheme, f64)> = Vec::new();
    for r in rows {
        if !groups
            .iter()
            .any(|&(s, t)| s == r.scheme && t.to_bits() == r.threshold.to_bits())
        {
            groups.push((r.scheme, r.threshold));
        }
    }
    for (scheme, threshold) in groups {
        write!(
            out,
            "\nDatasets for minimum threshold {} = {}\n\n",
            threshold_symbol(scheme),
            threshold
        )
        .unwrap();
        let body: Vec<Vec<String>> = rows
            .iter()
            .filter(|r| r.scheme == scheme && r.threshold.to_bits() == threshold.to_bits())
            .map(|r| {
                vec![
                    r.dataset.clone(),
                    r.term_count.to_string(),
                    r.key_term_count.to_string(),
                    r.removed_pct.clone(),
                ]
            })
            .collect();
        aligned(
            &mut out,
            &[
                "Data Sets",
                "Number of Terms",
                key_term_heading(scheme),
                "Percentage of term removed",
            ],
            &body,
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopwordInfo {
    /// File path, or `"builtin"` for the bundled list.
    pub source: String,
    pub size: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordNetInfo {
    /// Version from the database header; `"none"` when not loaded.
    pub version: String,
    pub policy: String,
    pub directory: Option<String>,
}

/// Vocabulary size at each point where it can shrink.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCounts {
    pub after_stemming: u64,
    pub after_wordnet: u64,
    pub after_frequent_terms: u64,
}

/// Everything needed to attribute and repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub timestamp: String,
    pub corpus: String,
    pub layout: String,
    pub stopwords: StopwordInfo,
    pub wordnet: WordNetInfo,
    pub log_base: String,
    pub aggregation: String,
    pub thresholds: Thresholds,
    pub min_count: u64,
    pub term_counts: TermCounts,
}

/// Pretty JSON with a trailing newline.
pub fn emit_metadata(meta: &RunMetadata) -> Result<String> {
    let mut s = serde_json::to_string_pretty(meta)?;
    s.push('\n');
    Ok(s)
}
