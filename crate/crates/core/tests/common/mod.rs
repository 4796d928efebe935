#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use keyterm_core::TermVector;
use proptest::prelude::*;

pub type Counts = Vec<BTreeMap<String, u64>>;

/// Up to 5 documents over up to 8 terms, counts 1..=9. Documents may be empty.
pub fn small_corpus() -> impl Strategy<Value = Counts> {
    let doc = proptest::collection::btree_map((0u8..8).prop_map(|t| format!("t{t}")), 1u64..=9, 0..=8);
    proptest::collection::vec(doc, 1..=5)
}

pub fn vectors(counts: &Counts) -> Vec<TermVector> {
    counts
        .iter()
        .enumerate()
        .map(|(i, m)| TermVector::from_counts(format!("d{i}"), m.clone()))
        .collect()
}

/// Weights straight from the definitions, keyed by (doc, term).
pub struct Brute {
    pub tfidf: BTreeMap<(usize, String), f64>,
    pub tfdf: BTreeMap<(usize, String), f64>,
    pub tf2: BTreeMap<(usize, String), f64>,
}

pub fn brute_force(counts: &Counts) -> Brute {
    let n = counts.len() as f64;
    let mut df: BTreeMap<&str, f64> = BTreeMap::new();
    for d in counts {
        for t in d.keys() {
            *df.entry(t).or_default() += 1.0;
        }
    }
    let mut b = Brute {
        tfidf: BTreeMap::new(),
        tfdf: BTreeMap::new(),
        tf2: BTreeMap::new(),
    };
    for (i, d) in counts.iter().enumerate() {
        let total: u64 = d.values().sum();
        for (t, &f) in d {
            let tf = f as f64 / total as f64;
            let idf = (n / df[t.as_str()]).ln();
            let tfidf = tf * idf;
            let tfdf = tf / (df[t.as_str()] / n);
            b.tfidf.insert((i, t.clone()), tfidf);
            b.tfdf.insert((i, t.clone()), tfdf);
            b.tf2.insert((i, t.clone()), tfidf * tfdf);
        }
    }
    b
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn mini_corpus() -> PathBuf {
    data_dir().join("mini-corpus")
}

/// Frozen from `tests/oracle/mini_corpus.py` over the bundled corpus and list.
pub mod golden {
    pub const DOCUMENTS: u64 = 20;
    pub const AVG_LENGTH: u64 = 223;
    pub const VOCABULARY: usize = 436;
    pub const TFIDF: usize = 120;
    pub const TFDF: usize = 354;
    pub const TF2: usize = 98;
    pub const JOINT: usize = 98;
}

/// `(terms, key terms, printed percentage)` from the three published
/// reduction tables, in table order.
pub const PUBLISHED_ROWS: [(u64, u64, &str); 33] = [
    (462, 447, "3.24"),
    (309807, 257758, "16.80"),
    (185684, 42076, "77.34"),
    (164667, 50596, "69.27"),
    (138843, 51851, "62.65"),
    (1940, 965, "50.25"),
    (3394, 759, "77.63"),
    (1397, 939, "32.78"),
    (2755, 706, "74.37"),
    (2102, 1009, "51.99"),
    (2331, 1084, "53.34"),
    (462, 70, "84.84"),
    (309807, 8974, "97.10"),
    (185684, 3433, "98.15"),
    (164667, 5662, "96.56"),
    (138843, 5008, "96.39"),
    (1940, 421, "78.29"),
    (3394, 417, "87.71"),
    (1397, 167, "88.04"),
    (2755, 272, "90.12"),
    (2102, 392, "81.35"),
    (2331, 555, "76.19"),
    (462, 55, "88.10"),
    (309807, 8974, "97.10"),
    (185684, 1004, "99.46"),
    (164667, 1005, "99.38"),
    (138843, 1000, "99.27"),
    (1940, 310, "84.02"),
    (3394, 215, "93.66"),
    (1397, 167, "88.04"),
    (2755, 166, "93.97"),
    (2102, 290, "86.20"),
    (2331, 437, "81.25"),
];
