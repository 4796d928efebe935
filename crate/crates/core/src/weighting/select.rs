use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{check_threshold, Scheme, Thresholds, WeightMatrix};
use crate::error::{Error, Result};

/// How per-document weights of one term combine into a single score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    #[default]
    Max,
    Mean,
    /// Retained if any document clears the threshold; same outcome as `Max`.
    AnyDoc,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::Max => "max",
            Aggregation::Mean => "mean",
            Aggregation::AnyDoc => "any-doc",
        }
    }

    fn score(self, weights: &[f64]) -> f64 {
        match self {
            Aggregation::Max | Aggregation::AnyDoc => weights.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Aggregation::Mean => weights.iter().sum::<f64>() / weights.len() as f64,
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Aggregation::Max),
            "mean" => Ok(Aggregation::Mean),
            "any-doc" | "any" => Ok(Aggregation::AnyDoc),
            other => Err(Error::Config(format!("unknown aggregation `{other}`"))),
        }
    }
}

/// Share of the vocabulary removed, truncated to hundredths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedPct {
    pub removed: u64,
    pub total: u64,
}

impl RemovedPct {
    pub fn new(removed: u64, total: u64) -> Self {
        RemovedPct { removed, total }
    }

    /// floor(removed / total × 10000), computed exactly in integers.
    pub fn hundredths(self) -> u64 {
        if self.total == 0 {
            return 0;
        }
        (u128::from(self.removed) * 10_000 / u128::from(self.total)) as u64
    }
}

impl fmt::Display for RemovedPct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.hundredths();
        write!(f, "{}.{:02}", h / 100, h % 100)
    }
}

/// Which threshold(s) produced a key-term set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Selection {
    Single { scheme: Scheme, threshold: f64 },
    Joint { thresholds: Thresholds },
}

impl Selection {
    pub fn label(&self) -> String {
        match self {
            Selection::Single { scheme, .. } => scheme.to_string(),
            Selection::Joint { .. } => "joint".to_owned(),
        }
    }
}

/// Selected key terms and how much of the vocabulary they leave out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyTermSet {
    pub selection: Selection,
    pub aggregation: Aggregation,
    pub vocabulary_size: usize,
    pub terms: BTreeSet<String>,
}

impl KeyTermSet {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn removed_count(&self) -> usize {
        self.vocabulary_size - self.terms.len()
    }

    pub fn removed_pct(&self) -> RemovedPct {
        RemovedPct::new(self.removed_count() as u64, self.vocabulary_size as u64)
    }
}

fn retained(matrix: &WeightMatrix, threshold: f64, aggregation: Aggregation) -> BTreeSet<String> {
    let vocab = matrix.vocabulary();
    matrix
        .by_term()
        .into_iter()
        .filter(|(_, ws)| aggregation.score(ws) >= threshold)
        .map(|(j, _)| vocab[j].clone())
        .collect()
}

/// Keeps each term whose aggregated weight is at least `threshold`.
pub fn select_key_terms(matrix: &WeightMatrix, threshold: f64, aggregation: Aggregation) -> Result<KeyTermSet> {
    check_threshold("threshold", threshold)?;
    Ok(KeyTermSet {
        selection: Selection::Single {
            scheme: matrix.scheme(),
            threshold,
        },
        aggregation,
        vocabulary_size: matrix.vocabulary().len(),
        terms: retained(matrix, threshold, aggregation),
    })
}

/// Terms that clear all three thresholds. `matrices` must hold the tf-idf,
/// tf-df and tf2 matrices of one index, in that order.
pub fn select_joint(
    matrices: [&WeightMatrix; 3],
    thresholds: Thresholds,
    aggregation: Aggregation,
) -> Result<KeyTermSet> {
    thresholds.validate()?;
    let first = matrices[0];
    for (m, expected) in matrices.iter().zip(Scheme::ALL) {
        if m.scheme() != expected {
            return Err(Error::contract(format!(
                "joint selection expects a {expected} matrix, got {}",
                m.scheme()
            )));
        }
        if m.dimensions() != first.dimensions() || m.vocabulary() != first.vocabulary() {
            return Err(Error::contract(format!(
                "matrix dimensions differ: {:?} vs {:?}",
                m.dimensions(),
                first.dimensions()
            )));
        }
    }
    let mut terms: Option<BTreeSet<String>> = None;
    for m in matrices {
        let kd = retained(m, thresholds.for_scheme(m.scheme()), aggregation);
        terms = Some(match terms {
            None => kd,
            Some(acc) => acc.intersection(&kd).cloned().collect(),
        });
    }
    Ok(KeyTermSet {
        selection: Selection::Joint { thresholds },
        aggregation,
        vocabulary_size: first.vocabulary().len(),
        terms: terms.unwrap_or_default(),
    })
}
