//! End-to-end runs: corpus in, key terms, matrices and reports out.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{corpus_summary, load_corpus, load_stopwords, DocumentSet, Layout, StopwordList};
use crate::error::{Error, Result};
use crate::report::{
    emit_metadata, make_reduction_row, render_tables, DatasetStats, ReductionRow, RunMetadata, StopwordInfo,
    TableFormat, TermCounts, WordNetInfo,
};
use crate::textprep::{count_stems, merge_surfaces, remove_stopwords, tokenize, SurfaceForms, TermVector, Token};
use crate::weighting::{
    build_index, compute_matrix, export_matrix, frequent_terms, select_joint, select_key_terms, Aggregation,
    CorpusIndex, ExportFormat, KeyTermSet, LogBase, Scheme, Thresholds, WeightMatrix,
};
use crate::wordnet::{annotate_terms, load_wordnet, LexEntry, WordNetPolicy, WORDNET_DIR_ENV};

/// Settings for one run. Defaults follow the published experiments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub corpus: PathBuf,
    pub layout: Layout,
    pub stopwords: Option<PathBuf>,
    pub wordnet_dir: Option<PathBuf>,
    pub wordnet_policy: WordNetPolicy,
    pub thresholds: Thresholds,
    pub aggregation: Aggregation,
    pub log_base: LogBase,
    pub min_count: u64,
    pub out: PathBuf,
    pub matrix_format: ExportFormat,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: PathBuf::new(),
            layout: Layout::ClassSubdirectories,
            stopwords: None,
            wordnet_dir: None,
            wordnet_policy: WordNetPolicy::AnnotateOnly,
            thresholds: Thresholds::default(),
            aggregation: Aggregation::Max,
            log_base: LogBase::E,
            min_count: 1,
            out: PathBuf::from("out"),
            matrix_format: ExportFormat::Csv,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

impl PipelineConfig {
    /// Sets one key. Keys use `_` or `-` interchangeably.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "corpus" => self.corpus = PathBuf::from(value),
            "layout" => self.layout = value.parse()?,
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "wordnet_dir" => self.wordnet_dir = Some(PathBuf::from(value)),
            "wordnet_policy" => self.wordnet_policy = value.parse()?,
            "alpha" => self.thresholds.alpha = parse_value(key, value)?,
            "beta" => self.thresholds.beta = parse_value(key, value)?,
            "gamma" => self.thresholds.gamma = parse_value(key, value)?,
            "aggregation" => self.aggregation = value.parse()?,
            "log_base" => self.log_base = value.parse()?,
            "min_count" => self.min_count = parse_value(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "format" | "matrix_format" => self.matrix_format = value.parse()?,
            other => return Err(Error::Config(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment line.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::MissingPath(path.to_path_buf())
            } else {
                Error::io(path, e)
            }
        })?;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(path, n + 1, "expected `key = value`"))?;
            self.set(k, v).map_err(|e| Error::parse(path, n + 1, e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut c = PipelineConfig::default();
        c.apply_file(path)?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.thresholds.validate()?;
        if self.min_count == 0 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        if self.corpus.as_os_str().is_empty() {
            return Err(Error::Config("no corpus path given".into()));
        }
        if let Some(p) = &self.stopwords {
            if !p.is_file() {
                return Err(Error::MissingPath(p.clone()));
            }
        }
        Ok(())
    }

    /// The configured directory, else the environment variable.
    pub fn resolved_wordnet_dir(&self) -> Option<PathBuf> {
        self.wordnet_dir.clone().or_else(|| {
            std::env::var_os(WORDNET_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        })
    }
}

/// Observable stages, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    LoadCorpus,
    ExtractTerms,
    RemoveStopwords,
    Stem,
    WordNet,
    GlobalTerms,
    Weigh,
    Select,
    Report,
}

impl Stage {
    /// Step number within the preprocessing algorithm, if the stage is one.
    pub fn step(self) -> Option<u8> {
        match self {
            Stage::ExtractTerms => Some(1),
            Stage::RemoveStopwords => Some(2),
            Stage::Stem => Some(3),
            Stage::WordNet => Some(4),
            Stage::GlobalTerms => Some(5),
            Stage::Weigh => Some(6),
            Stage::Select => Some(7),
            Stage::LoadCorpus | Stage::Report => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::LoadCorpus => "load_corpus",
            Stage::ExtractTerms => "extract_terms",
            Stage::RemoveStopwords => "remove_stopwords",
            Stage::Stem => "stem",
            Stage::WordNet => "wordnet",
            Stage::GlobalTerms => "global_terms",
            Stage::Weigh => "weigh",
            Stage::Select => "select",
            Stage::Report => "report",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step() {
            Some(n) => write!(f, "step {n} ({})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// A failure tagged with the stage it happened in.
#[derive(Debug, thiserror::Error)]
#[error("stage {stage} failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl PipelineError {
    /// 1 usage, 2 input data, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        exit_code(&self.source)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 1,
        Error::Contract(_) | Error::UndefinedEntry { .. } => 3,
        _ => 2,
    }
}

/// Records stages as they start and logs each one.
#[derive(Debug, Default, Clone)]
pub struct StageLog {
    stages: Vec<Stage>,
}

impl StageLog {
    pub fn enter(&mut self, stage: Stage) {
        info!("stage {stage}");
        self.stages.push(stage);
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, PipelineError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

/// Steps 1 to 3 over a whole corpus. Each step finishes for every document
/// before the next begins, so the log order is the algorithm's order.
pub fn preprocess_corpus(
    corpus: &DocumentSet,
    stopwords: &StopwordList,
    log: &mut StageLog,
) -> (Vec<TermVector>, SurfaceForms) {
    log.enter(Stage::ExtractTerms);
    let tokens: Vec<Vec<Token>> = corpus.documents.par_iter().map(|d| tokenize(&d.text)).collect();
    log.enter(Stage::RemoveStopwords);
    let tokens: Vec<Vec<Token>> = tokens.into_par_iter().map(|t| remove_stopwords(t, stopwords)).collect();
    log.enter(Stage::Stem);
    let (vectors, surfaces): (Vec<_>, Vec<_>) = corpus
        .documents
        .par_iter()
        .zip(tokens)
        .map(|(d, t)| count_stems(&d.doc_id, t))
        .unzip();
    (vectors, merge_surfaces(&surfaces))
}

/// Corpus, stopwords and statistics shared by every subcommand.
pub struct Loaded {
    pub corpus: DocumentSet,
    pub stopwords: StopwordList,
    pub stopword_source: String,
    pub stats: DatasetStats,
}

pub fn load_inputs(config: &PipelineConfig, log: &mut StageLog) -> Result<Loaded, PipelineError> {
    log.enter(Stage::LoadCorpus);
    config.validate().at(Stage::LoadCorpus)?;
    let (stopwords, stopword_source) = match &config.stopwords {
        Some(p) => (load_stopwords(p).at(Stage::LoadCorpus)?, p.display().to_string()),
        None => (StopwordList::default_english(), "builtin".to_owned()),
    };
    let corpus = load_corpus(&config.corpus, config.layout).at(Stage::LoadCorpus)?;
    let stats = corpus_summary(&corpus);
    Ok(Loaded {
        corpus,
        stopwords,
        stopword_source,
        stats,
    })
}

/// Index and annotation state after steps 1 to 5.
pub struct Indexed {
    pub loaded: Loaded,
    pub index: CorpusIndex,
    pub annotations: BTreeMap<String, LexEntry>,
    pub wordnet: WordNetInfo,
    pub term_counts: TermCounts,
}

fn vocabulary_size(vectors: &[TermVector]) -> u64 {
    vectors
        .iter()
        .flat_map(|v| v.terms())
        .collect::<std::collections::BTreeSet<_>>()
        .len() as u64
}

pub fn index_corpus(config: &PipelineConfig, log: &mut StageLog) -> Result<Indexed, PipelineError> {
    let loaded = load_inputs(config, log)?;
    let (vectors, surfaces) = preprocess_corpus(&loaded.corpus, &loaded.stopwords, log);
    let after_stemming = vocabulary_size(&vectors);

    let mut policy = config.wordnet_policy;
    let dir = config.resolved_wordnet_dir();
    if policy != WordNetPolicy::Off && dir.is_none() {
        warn!("no WordNet directory configured (flag, config or {WORDNET_DIR_ENV}); skipping step 4");
        policy = WordNetPolicy::Off;
    } else if policy == WordNetPolicy::Off {
        warn!("WordNet lookup is off; step 4 is skipped");
    }
    let mut wordnet = WordNetInfo {
        version: "none".to_owned(),
        policy: policy.to_string(),
        directory: None,
    };
    let (vectors, annotations) = if policy == WordNetPolicy::Off {
        (vectors, BTreeMap::new())
    } else {
        log.enter(Stage::WordNet);
        let dir = dir.expect("checked above");
        let db = load_wordnet(&dir).at(Stage::WordNet)?;
        wordnet.version = db.version().to_owned();
        wordnet.directory = Some(dir.display().to_string());
        let (v, a) = annotate_terms(&db, vectors, &surfaces, policy);
        let known = a.values().filter(|e| e.in_wordnet).count();
        info!("{known} of {} terms found in WordNet", a.len());
        (v, a)
    };
    let after_wordnet = vocabulary_size(&vectors);

    log.enter(Stage::GlobalTerms);
    let index = build_index(vectors).at(Stage::GlobalTerms)?;
    let index = if config.min_count > 1 {
        let keep = frequent_terms(&index, config.min_count).at(Stage::GlobalTerms)?;
        index.restrict(&keep)
    } else {
        index
    };
    info!(
        "{} documents, {} global terms",
        index.doc_count(),
        index.vocabulary().len()
    );
    let term_counts = TermCounts {
        after_stemming,
        after_wordnet,
        after_frequent_terms: index.vocabulary().len() as u64,
    };
    Ok(Indexed {
        loaded,
        index,
        annotations,
        wordnet,
        term_counts,
    })
}

/// The three matrices, in [`Scheme::ALL`] order.
pub fn weigh(index: &CorpusIndex, base: LogBase, log: &mut StageLog) -> Vec<WeightMatrix> {
    log.enter(Stage::Weigh);
    Scheme::ALL.iter().map(|&s| compute_matrix(index, s, base)).collect()
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub stats: DatasetStats,
    pub key_terms: Vec<KeyTermSet>,
    pub joint: KeyTermSet,
    pub rows: Vec<ReductionRow>,
    pub metadata: RunMetadata,
    pub artifacts: Vec<PathBuf>,
    pub stages: Vec<Stage>,
    pub vocabulary_size: usize,
}

fn write_artifact(path: PathBuf, contents: &str, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    artifacts.push(path);
    Ok(())
}

fn terms_listing(kd: &KeyTermSet) -> String {
    let mut s = String::new();
    for t in &kd.terms {
        s.push_str(t);
        s.push('\n');
    }
    s
}

fn categories_listing(annotations: &BTreeMap<String, LexEntry>) -> String {
    let mut s = String::from("term\tin_wordnet\tlemma\tcategories\n");
    for (term, e) in annotations {
        let cats: Vec<&str> = e.categories.iter().map(String::as_str).collect();
        s.push_str(&format!("{term}\t{}\t{}\t{}\n", e.in_wordnet, e.lemma, cats.join(",")));
    }
    s
}

/// Runs every stage and writes all artifacts into `config.out`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineResult, PipelineError> {
    let mut log = StageLog::default();
    let indexed = index_corpus(config, &mut log)?;
    let index = &indexed.index;
    let matrices = weigh(index, config.log_base, &mut log);

    log.enter(Stage::Select);
    let key_terms = matrices
        .iter()
        .map(|m| select_key_terms(m, config.thresholds.for_scheme(m.scheme()), config.aggregation))
        .collect::<Result<Vec<_>>>()
        .at(Stage::Select)?;
    let joint = select_joint(
        [&matrices[0], &matrices[1], &matrices[2]],
        config.thresholds,
        config.aggregation,
    )
    .at(Stage::Select)?;
    for kd in &key_terms {
        info!(
            "{}: {} of {} terms kept ({}% removed)",
            kd.selection.label(),
            kd.len(),
            kd.vocabulary_size,
            kd.removed_pct()
        );
    }

    log.enter(Stage::Report);
    let name = indexed.loaded.stats.name.clone();
    let rows = key_terms
        .iter()
        .map(|kd| make_reduction_row(&name, index, kd))
        .collect::<Result<Vec<_>>>()
        .at(Stage::Report)?;
    let stopwords = &indexed.loaded.stopwords;
    let metadata = RunMetadata {
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        corpus: config.corpus.display().to_string(),
        layout: config.layout.as_str().to_owned(),
        stopwords: StopwordInfo {
            source: indexed.loaded.stopword_source.clone(),
            size: stopwords.len(),
            sha256: stopwords.content_hash(),
        },
        wordnet: indexed.wordnet.clone(),
        log_base: config.log_base.to_string(),
        aggregation: config.aggregation.to_string(),
        thresholds: config.thresholds,
        min_count: config.min_count,
        term_counts: indexed.term_counts.clone(),
    };

    let out = &config.out;
    let mut artifacts = Vec::new();
    let written: Result<()> = (|| {
        fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        // metadata goes first so no report exists without it
        write_artifact(out.join("metadata.json"), &emit_metadata(&metadata)?, &mut artifacts)?;
        let stats = std::slice::from_ref(&indexed.loaded.stats);
        for format in [TableFormat::PlainText, TableFormat::Csv, TableFormat::Json] {
            let path = out.join(format!("report.{}", format.extension()));
            write_artifact(path, &render_tables(&rows, stats, format)?, &mut artifacts)?;
        }
        for (m, kd) in matrices.iter().zip(&key_terms) {
            let path = out.join(format!("matrix_{}.{}", m.scheme(), config.matrix_format.extension()));
            export_matrix(m, None, &path, config.matrix_format)?;
            artifacts.push(path);
            write_artifact(
                out.join(format!("key_terms_{}.txt", m.scheme())),
                &terms_listing(kd),
                &mut artifacts,
            )?;
        }
        write_artifact(out.join("key_terms_joint.txt"), &terms_listing(&joint), &mut artifacts)?;
        if !indexed.annotations.is_empty() {
            write_artifact(
                out.join("lexical_categories.tsv"),
                &categories_listing(&indexed.annotations),
                &mut artifacts,
            )?;
        }
        Ok(())
    })();
    written.at(Stage::Report)?;

    Ok(PipelineResult {
        stats: indexed.loaded.stats.clone(),
        key_terms,
        joint,
        rows,
        metadata,
        artifacts,
        stages: log.stages().to_vec(),
        vocabulary_size: index.vocabulary().len(),
    })
}
