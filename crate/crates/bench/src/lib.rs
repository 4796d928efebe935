//! Seeded synthetic corpora for benchmarking.
//!
//! Word frequencies follow a rough Zipf curve over a fixed pseudo-vocabulary,
//! so the weighting stages see realistic sparsity.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use keyterm_core::{RawDocument, TermVector};

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mer", "sta", "vin", "dru", "pel", "ost", "ran", "ti", "bel", "gor", "ux", "nae", "shi", "com",
];

/// The `n`-th pseudo-word. Distinct `n` give distinct words.
pub fn word(mut n: usize) -> String {
    let mut w = String::new();
    loop {
        w.push_str(SYLLABLES[n % SYLLABLES.len()]);
        n /= SYLLABLES.len();
        if n == 0 {
            break;
        }
        n -= 1;
    }
    w
}

fn zipf_index(rng: &mut StdRng, vocab: usize) -> usize {
    // inverse-CDF of a continuous 1/x density on [1, vocab]
    let u: f64 = rng.random();
    ((vocab as f64).powf(u) as usize).saturating_sub(1).min(vocab - 1)
}

/// `docs` documents of `len` words each, drawn from `vocab` pseudo-words.
pub fn documents(docs: usize, len: usize, vocab: usize, seed: u64) -> Vec<RawDocument> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..docs)
        .map(|i| {
            let words: Vec<String> = (0..len).map(|_| word(zipf_index(&mut rng, vocab))).collect();
            RawDocument {
                doc_id: format!("doc{i:05}"),
                class_label: None,
                text: words.join(" "),
            }
        })
        .collect()
}

/// Term vectors directly, skipping text processing.
pub fn vectors(docs: usize, len: usize, vocab: usize, seed: u64) -> Vec<TermVector> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..docs)
        .map(|i| {
            TermVector::from_terms(
                format!("doc{i:05}"),
                (0..len).map(|_| word(zipf_index(&mut rng, vocab))),
            )
        })
        .collect()
}
