#![allow(clippy::unnecessary_map_or)]

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{KeyTermSet, WeightMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    /// Header of terms, one row per document, zeros for absent cells.
    #[default]
    Csv,
    /// `doc_id,term,weight` per populated cell, no header.
    Triplet,
}

impl ExportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Triplet => "triplet",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Triplet => "triplets",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "triplet" | "coordinate-triplet" => Ok(ExportFormat::Triplet),
            other => Err(Error::Config(format!("unknown matrix format `{other}`"))),
        }
    }
}

/// Rounds to 10 significant digits and prints the shortest decimal form of
/// the rounded value. Output never depends on the locale.
pub fn format_weight(w: f64) -> String {
    if w == 0.0 {
        return "0".to_owned();
    }
    let rounded: f64 = format!("{w:.9e}").parse().expect("valid float");
    rounded.to_string()
}

/// Writes `matrix` to `path`, optionally limited to the columns in `key_terms`.
pub fn export_matrix(
    matrix: &WeightMatrix,
    key_terms: Option<&KeyTermSet>,
    path: &Path,
    format: ExportFormat,
) -> Result<()> {
    let vocab = matrix.vocabulary();
    let columns: Vec<usize> = (0..vocab.len())
        // map_or rather than is_none_or keeps the 1.75 toolchain floor
        .filter(|&j| key_terms.map_or(true, |kd| kd.terms.contains(&vocab[j])))
        .collect();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(file));
    match format {
        ExportFormat::Csv => {
            let header = std::iter::once("doc_id").chain(columns.iter().map(|&j| vocab[j].as_str()));
            out.write_record(header)?;
            for (i, doc) in matrix.doc_ids().iter().enumerate() {
                let mut record = vec![doc.clone()];
                record.extend(
                    columns
                        .iter()
                        .map(|&j| matrix.get(i, j).map_or_else(|| "0".to_owned(), format_weight)),
                );
                out.write_record(&record)?;
            }
        }
        ExportFormat::Triplet => {
            let keep: Vec<bool> = {
                let mut k = vec![false; vocab.len()];
                for &j in &columns {
                    k[j] = true;
                }
                k
            };
            for (i, j, w) in matrix.cells() {
                if keep[j] {
                    out.write_record([&matrix.doc_ids()[i], &vocab[j], &format_weight(w)])?;
                }
            }
        }
    }
    let mut inner = out
        .into_inner()
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    inner.flush().map_err(|e| Error::io(path, e))
}
