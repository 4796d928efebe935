//! Loading corpora and stopword lists from disk.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::report::DatasetStats;
use crate::textprep::tokenize;

/// Name of the manifest file looked up at the corpus root for [`Layout::ManifestFile`].
pub const MANIFEST_FILE: &str = "manifest.tsv";

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

/// One document as read from disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    pub class_label: Option<String>,
    pub text: String,
}

/// A loaded corpus, ordered by `doc_id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentSet {
    pub name: String,
    pub documents: Vec<RawDocument>,
}

impl DocumentSet {
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// How documents are arranged under the corpus root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// Every file below the root is a document without a class.
    Flat,
    /// Each immediate subdirectory is a class.
    ClassSubdirectories,
    /// A `manifest.tsv` at the root lists `doc_id<TAB>class<TAB>relative-path`.
    ManifestFile,
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flat" => Ok(Layout::Flat),
            "class-subdirectories" | "classes" => Ok(Layout::ClassSubdirectories),
            "manifest-file" | "manifest" => Ok(Layout::ManifestFile),
            other => Err(Error::Config(format!("unknown corpus layout `{other}`"))),
        }
    }
}

impl Layout {
    pub fn as_str(self) -> &'static str {
        match self {
            Layout::Flat => "flat",
            Layout::ClassSubdirectories => "class-subdirectories",
            Layout::ManifestFile => "manifest-file",
        }
    }
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub doc_id: String,
    pub class_label: Option<String>,
    pub path: PathBuf,
}

/// The resolved list of documents to read, sorted by `doc_id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub name: String,
    pub entries: Vec<ManifestEntry>,
    pub expected_classes: Option<usize>,
}

/// Lowercase words to drop before stemming.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    /// Builds a list from arbitrary strings, normalizing each to lowercase and
    /// splitting on whitespace.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .flat_map(|w| w.as_ref().split_whitespace().map(str::to_lowercase).collect::<Vec<_>>())
            .collect();
        StopwordList { words }
    }

    /// The bundled English list.
    pub fn default_english() -> Self {
        parse_stopwords(DEFAULT_STOPWORDS)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// SHA-256 over the sorted words joined by newlines, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for w in &self.words {
            hasher.update(w.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }
}

fn parse_stopwords(text: &str) -> StopwordList {
    StopwordList::from_words(
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#')),
    )
}

/// Reads a stopword file: one word per line, `#` comments and blank lines skipped.
pub fn load_stopwords(path: &Path) -> Result<StopwordList> {
    if !path.exists() {
        return Err(Error::MissingPath(path.to_path_buf()));
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let list = parse_stopwords(&String::from_utf8_lossy(&bytes));
    if list.is_empty() {
        warn!("stopword list {} is empty; no words will be removed", path.display());
    } else {
        info!("loaded {} stopwords from {}", list.len(), path.display());
    }
    Ok(list)
}

/// Resolves which files make up the corpus without reading them.
pub fn scan_corpus(root: &Path, layout: Layout) -> Result<CorpusManifest> {
    if !root.exists() {
        return Err(Error::MissingPath(root.to_path_buf()));
    }
    let name = root
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| root.display().to_string());
    let mut entries = match layout {
        Layout::Flat => walk_files(root, root, None)?,
        Layout::ClassSubdirectories => {
            let mut entries = Vec::new();
            for class_dir in sorted_subdirs(root)? {
                let label = class_dir.file_name().map(|n| n.to_string_lossy().into_owned());
                entries.extend(walk_files(root, &class_dir, label)?);
            }
            entries
        }
        Layout::ManifestFile => read_manifest(root)?,
    };
    entries.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    if let Some(pair) = entries.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
        return Err(Error::DuplicateDocId(pair[0].doc_id.clone()));
    }
    let expected_classes = match layout {
        Layout::Flat => None,
        _ => Some(
            entries
                .iter()
                .filter_map(|e| e.class_label.as_deref())
                .collect::<BTreeSet<_>>()
                .len(),
        ),
    };
    Ok(CorpusManifest {
        name,
        entries,
        expected_classes,
    })
}

/// Loads every document of a corpus. Files are read in parallel; invalid
/// UTF-8 is replaced rather than rejected.
pub fn load_corpus(root: &Path, layout: Layout) -> Result<DocumentSet> {
    let manifest = scan_corpus(root, layout)?;
    if manifest.entries.is_empty() {
        return Err(Error::EmptyCorpus(root.to_path_buf()));
    }
    let documents = manifest
        .entries
        .par_iter()
        .map(|e| {
            let bytes = fs::read(&e.path).map_err(|err| Error::io(&e.path, err))?;
            Ok(RawDocument {
                doc_id: e.doc_id.clone(),
                class_label: e.class_label.clone(),
                text: String::from_utf8_lossy(&bytes).into_owned(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    info!("loaded {} documents from {}", documents.len(), root.display());
    Ok(DocumentSet {
        name: manifest.name,
        documents,
    })
}

fn is_hidden(name: &std::ffi::OsStr) -> bool {
    name.to_string_lossy().starts_with('.')
}

fn sorted_subdirs(root: &Path) -> Result<Vec<PathBuf>> {
    let mut dirs = Vec::new();
    for entry in fs::read_dir(root).map_err(|e| Error::io(root, e))? {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if path.is_dir() && !is_hidden(&entry.file_name()) {
            dirs.push(path);
        }
    }
    dirs.sort();
    Ok(dirs)
}

fn walk_files(root: &Path, dir: &Path, label: Option<String>) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    let walker = WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !is_hidden(e.file_name()));
    for entry in walker {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        // the manifest itself is never a document
        if entry.depth() == 1 && dir == root && entry.file_name() == MANIFEST_FILE {
            continue;
        }
        out.push(ManifestEntry {
            doc_id: relative_id(root, entry.path()),
            class_label: label.clone(),
            path: entry.into_path(),
        });
    }
    Ok(out)
}

fn relative_id(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn read_manifest(root: &Path) -> Result<Vec<ManifestEntry>> {
    let path = root.join(MANIFEST_FILE);
    if !path.is_file() {
        return Err(Error::MissingPath(path));
    }
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [doc_id, class, rel] = fields[..] else {
            return Err(Error::parse(
                &path,
                n + 1,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        if doc_id.is_empty() || rel.is_empty() {
            return Err(Error::parse(&path, n + 1, "empty doc_id or path"));
        }
        let file = root.join(rel);
        if !file.is_file() {
            return Err(Error::MissingPath(file));
        }
        entries.push(ManifestEntry {
            doc_id: doc_id.to_owned(),
            class_label: (!class.is_empty()).then(|| class.to_owned()),
            path: file,
        });
    }
    Ok(entries)
}

/// Table-style statistics. Average length counts tokens before stopword
/// removal and rounds half up.
pub fn corpus_summary(corpus: &DocumentSet) -> DatasetStats {
    let mut class_sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for d in &corpus.documents {
        if let Some(c) = d.class_label.as_deref() {
            *class_sizes.entry(c).or_default() += 1;
        }
    }
    let n = corpus.documents.len() as u64;
    let tokens: u64 = corpus
        .documents
        .par_iter()
        .map(|d| tokenize(&d.text).len() as u64)
        .sum();
    let avg = if n == 0 { 0 } else { (2 * tokens + n) / (2 * n) };
    DatasetStats {
        name: corpus.name.clone(),
        documents: n,
        classes: class_sizes.len() as u64,
        largest_class: class_sizes.values().copied().max().unwrap_or(0) as u64,
        avg_doc_length: avg,
    }
}
