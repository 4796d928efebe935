//! Corpus preprocessing and threshold-based key-term selection.
//!
//! Documents are tokenized, stripped of stopwords and Porter-stemmed, optionally
//! annotated with WordNet noun and verb categories, and then weighted with
//! tf-idf, tf-df and their product. Terms whose weight clears a threshold form
//! the key-term set.

pub mod corpus;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod textprep;
pub mod weighting;
pub mod wordnet;

pub use corpus::{load_corpus, load_stopwords, DocumentSet, Layout, RawDocument, StopwordList};
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineError, PipelineResult, Stage};
pub use report::{DatasetStats, ReductionRow, RunMetadata};
pub use textprep::{porter_stem, preprocess_document, tokenize, TermVector, Token};
pub use weighting::{
    build_index, compute_matrix, select_joint, select_key_terms, Aggregation, CorpusIndex, KeyTermSet, LogBase, Scheme,
    Thresholds, WeightMatrix,
};
pub use wordnet::{lexical_categories, load_wordnet, LexEntry, WordNetDb, WordNetPolicy};
