//! WordNet noun and verb lexicographer categories.
//!
//! Only the five files needed for category lookup are read. Adjectives,
//! adverbs, pointers and glosses are ignored.

#[doc(hidden)]
pub mod fixture;
mod morph;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use log::info;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::{SurfaceForms, TermVector};

/// Environment variable consulted when no WordNet directory is configured.
pub const WORDNET_DIR_ENV: &str = "WNSEARCHDIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartOfSpeech {
    Noun,
    Verb,
}

impl PartOfSpeech {
    fn marker(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "n",
            PartOfSpeech::Verb => "v",
        }
    }

    fn category_prefix(self) -> &'static str {
        match self {
            PartOfSpeech::Noun => "noun.",
            PartOfSpeech::Verb => "verb.",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub pos: PartOfSpeech,
    pub lex_filenum: u8,
    pub words: Vec<String>,
}

/// Parsed noun and verb database. Immutable after [`load_wordnet`].
#[derive(Debug, Clone)]
pub struct WordNetDb {
    version: Option<String>,
    noun_index: HashMap<String, Vec<u64>>,
    verb_index: HashMap<String, Vec<u64>>,
    lexnames: BTreeMap<u8, String>,
    synsets: HashMap<(PartOfSpeech, u64), Synset>,
}

/// Result of a category lookup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEntry {
    /// The WordNet lemma that matched, or the looked-up word when nothing did.
    pub lemma: String,
    pub categories: BTreeSet<String>,
    pub in_wordnet: bool,
}

impl LexEntry {
    fn absent(word: &str) -> Self {
        LexEntry {
            lemma: word.to_owned(),
            categories: BTreeSet::new(),
            in_wordnet: false,
        }
    }
}

/// What the pipeline does with WordNet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordNetPolicy {
    /// Skip the lookup stage entirely.
    Off,
    /// Record categories, leave term vectors untouched.
    #[default]
    AnnotateOnly,
    /// Drop terms that WordNet does not know.
    FilterNonwordnet,
}

impl WordNetPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            WordNetPolicy::Off => "off",
            WordNetPolicy::AnnotateOnly => "annotate-only",
            WordNetPolicy::FilterNonwordnet => "filter-nonwordnet",
        }
    }
}

impl fmt::Display for WordNetPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WordNetPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(WordNetPolicy::Off),
            "annotate-only" => Ok(WordNetPolicy::AnnotateOnly),
            "filter-nonwordnet" => Ok(WordNetPolicy::FilterNonwordnet),
            other => Err(Error::Config(format!("unknown wordnet policy `{other}`"))),
        }
    }
}

/// Loads `index.noun`, `data.noun`, `index.verb`, `data.verb` and `lexnames`
/// from `dir`. Any missing file or malformed line fails the whole load.
pub fn load_wordnet(dir: &Path) -> Result<WordNetDb> {
    if !dir.is_dir() {
        return Err(Error::MissingPath(dir.to_path_buf()));
    }
    // check presence up front so the error names the first missing file
    for name in parse::REQUIRED_FILES {
        let p = dir.join(name);
        if !p.is_file() {
            return Err(Error::MissingPath(p));
        }
    }
    let (lex_path, lex_text) = parse::read_file(dir, "lexnames")?;
    let lexnames = parse::parse_lexnames(&lex_path, &lex_text)?;

    let load_pos = |pos: PartOfSpeech| -> Result<_> {
        let suffix = match pos {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
        };
        let (data_path, data_text) = parse::read_file(dir, &format!("data.{suffix}"))?;
        let (index_path, index_text) = parse::read_file(dir, &format!("index.{suffix}"))?;
        let (store, index) = rayon::join(
            || parse::parse_data(&data_path, &data_text, pos),
            || parse::parse_index(&index_path, &index_text, pos),
        );
        let (store, index) = (store?, index?);
        check_references(&index_path, &index, &store)?;
        let version = parse::header_version(&data_text);
        Ok((index, store, version))
    };
    let (nouns, verbs) = rayon::join(|| load_pos(PartOfSpeech::Noun), || load_pos(PartOfSpeech::Verb));
    let (noun_index, noun_store, version) = nouns?;
    let (verb_index, verb_store, _) = verbs?;

    let mut synsets = HashMap::with_capacity(noun_store.len() + verb_store.len());
    for (pos, store) in [(PartOfSpeech::Noun, noun_store), (PartOfSpeech::Verb, verb_store)] {
        for (offset, s) in store {
            if !lexnames.contains_key(&s.lex_filenum) {
                return Err(Error::parse(
                    &lex_path,
                    0,
                    format!("lexicographer file {:02} is used but not listed", s.lex_filenum),
                ));
            }
            synsets.insert((pos, offset), s);
        }
    }
    let db = WordNetDb {
        version,
        noun_index,
        verb_index,
        lexnames,
        synsets,
    };
    info!(
        "loaded WordNet {} from {}: {} noun lemmas, {} verb lemmas, {} synsets",
        db.version(),
        dir.display(),
        db.noun_index.len(),
        db.verb_index.len(),
        db.synsets.len()
    );
    Ok(db)
}

fn check_references(index_path: &Path, index: &HashMap<String, Vec<u64>>, store: &HashMap<u64, Synset>) -> Result<()> {
    // sorted so the reported lemma does not depend on hash order
    let mut dangling: Vec<_> = index
        .iter()
        .filter_map(|(lemma, offs)| offs.iter().find(|o| !store.contains_key(o)).map(|o| (lemma, *o)))
        .collect();
    dangling.sort();
    match dangling.first() {
        Some((lemma, off)) => Err(Error::parse(
            index_path,
            0,
            format!("lemma `{lemma}` refers to missing synset {off:08}"),
        )),
        None => Ok(()),
    }
}

impl WordNetDb {
    /// Version from the license header, or `"unknown"`.
    pub fn version(&self) -> &str {
        self.version.as_deref().unwrap_or("unknown")
    }

    pub fn lemma_count(&self, pos: PartOfSpeech) -> usize {
        self.index(pos).len()
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn lexname(&self, filenum: u8) -> Option<&str> {
        self.lexnames.get(&filenum).map(String::as_str)
    }

    /// The noun and verb category names, 41 for a standard database.
    pub fn noun_verb_categories(&self) -> BTreeSet<&str> {
        self.lexnames
            .values()
            .map(String::as_str)
            .filter(|n| n.starts_with("noun.") || n.starts_with("verb."))
            .collect()
    }

    fn index(&self, pos: PartOfSpeech) -> &HashMap<String, Vec<u64>> {
        match pos {
            PartOfSpeech::Noun => &self.noun_index,
            PartOfSpeech::Verb => &self.verb_index,
        }
    }

    pub fn contains(&self, word: &str, pos: PartOfSpeech) -> bool {
        self.index(pos).contains_key(word)
    }

    pub fn synsets(&self, word: &str, pos: PartOfSpeech) -> impl Iterator<Item = &Synset> {
        self.index(pos)
            .get(word)
            .into_iter()
            .flatten()
            .filter_map(move |off| self.synsets.get(&(pos, *off)))
    }

    fn categories_of(&self, word: &str) -> BTreeSet<String> {
        let mut cats = BTreeSet::new();
        for pos in [PartOfSpeech::Noun, PartOfSpeech::Verb] {
            for s in self.synsets(word, pos) {
                if let Some(name) = self.lexname(s.lex_filenum) {
                    if name.starts_with(pos.category_prefix()) {
                        cats.insert(name.to_owned());
                    }
                }
            }
        }
        cats
    }
}

/// Union of noun and verb categories over every sense of `word`.
pub fn lexical_categories(db: &WordNetDb, word: &str) -> LexEntry {
    let word = word.to_lowercase();
    let categories = db.categories_of(&word);
    if categories.is_empty() {
        return LexEntry::absent(&word);
    }
    LexEntry {
        lemma: word,
        categories,
        in_wordnet: true,
    }
}

/// Index lemmas reachable from `word` by one detachment rule, the word
/// itself first when indexed. Exception lists are not consulted.
pub fn base_forms(db: &WordNetDb, word: &str, pos: PartOfSpeech) -> Vec<String> {
    let word = word.to_lowercase();
    let mut out = Vec::new();
    if db.contains(&word, pos) {
        out.push(word.clone());
    }
    for cand in morph::detach(&word, pos) {
        if db.contains(&cand, pos) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Looks up one stem: the stem itself, then each surface form, then the base
/// forms of each surface form. The first hit wins.
pub fn lookup_term(db: &WordNetDb, stem: &str, surfaces: Option<&BTreeSet<String>>) -> LexEntry {
    let hit = |w: &str| Some(lexical_categories(db, w)).filter(|e| e.in_wordnet);
    if let Some(e) = hit(stem) {
        return e;
    }
    let surfaces = surfaces.into_iter().flatten();
    for s in surfaces.clone() {
        if let Some(e) = hit(s) {
            return e;
        }
    }
    for s in surfaces {
        for pos in [PartOfSpeech::Noun, PartOfSpeech::Verb] {
            for base in base_forms(db, s, pos) {
                if let Some(e) = hit(&base) {
                    return e;
                }
            }
        }
    }
    LexEntry::absent(stem)
}

/// Annotates every term of `vectors`. Under [`WordNetPolicy::FilterNonwordnet`]
/// unknown terms are removed and totals recomputed; otherwise the vectors are
/// returned unchanged.
pub fn annotate_terms(
    db: &WordNetDb,
    vectors: Vec<TermVector>,
    originals: &SurfaceForms,
    policy: WordNetPolicy,
) -> (Vec<TermVector>, BTreeMap<String, LexEntry>) {
    if policy == WordNetPolicy::Off {
        return (vectors, BTreeMap::new());
    }
    let terms: BTreeSet<&str> = vectors.iter().flat_map(|v| v.terms()).collect();
    let annotations: BTreeMap<String, LexEntry> = terms
        .into_iter()
        .map(|t| (t.to_owned(), lookup_term(db, t, originals.get(t))))
        .collect();
    let mut vectors = vectors;
    if policy == WordNetPolicy::FilterNonwordnet {
        for v in &mut vectors {
            v.retain(|t| annotations.get(t).is_some_and(|e| e.in_wordnet));
        }
    }
    (vectors, annotations)
}
