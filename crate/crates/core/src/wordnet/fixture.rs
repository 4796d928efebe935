//! A tiny WordNet database for tests, written in the real file format with
//! correct byte offsets.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// The standard 45 lexicographer files.
pub const LEXNAMES: [&str; 45] = [
    "adj.all",
    "adj.pert",
    "adv.all",
    "noun.Tops",
    "noun.act",
    "noun.animal",
    "noun.artifact",
    "noun.attribute",
    "noun.body",
    "noun.cognition",
    "noun.communication",
    "noun.event",
    "noun.feeling",
    "noun.food",
    "noun.group",
    "noun.location",
    "noun.motive",
    "noun.object",
    "noun.person",
    "noun.phenomenon",
    "noun.plant",
    "noun.possession",
    "noun.process",
    "noun.quantity",
    "noun.relation",
    "noun.shape",
    "noun.state",
    "noun.substance",
    "noun.time",
    "verb.body",
    "verb.change",
    "verb.cognition",
    "verb.communication",
    "verb.competition",
    "verb.consumption",
    "verb.contact",
    "verb.creation",
    "verb.emotion",
    "verb.motion",
    "verb.perception",
    "verb.possession",
    "verb.social",
    "verb.stative",
    "verb.weather",
    "adj.ppl",
];

/// Synsets given as `(lexname, member words, gloss)`.
#[derive(Debug, Clone, Default)]
pub struct MiniWordNet {
    pub nouns: Vec<(&'static str, Vec<&'static str>, &'static str)>,
    pub verbs: Vec<(&'static str, Vec<&'static str>, &'static str)>,
}

const HEADER: &str = "  1 This is a test database, not the real WordNet.\n  2 WordNet 3.0 Copyright notice stand-in.\n";

impl MiniWordNet {
    pub fn standard() -> Self {
        MiniWordNet {
            nouns: vec![
                ("noun.animal", vec!["dog", "domestic_dog"], "a domesticated canid"),
                ("noun.person", vec!["dog"], "an unattractive person"),
                ("noun.animal", vec!["cat"], "a feline mammal"),
                ("noun.location", vec!["washington", "capital"], "the capital city"),
                ("noun.person", vec!["washington"], "the first president"),
                ("noun.location", vec!["washington", "evergreen_state"], "a state"),
                ("noun.artifact", vec!["church"], "a place of worship"),
                ("noun.food", vec!["grain", "food_grain"], "foodstuff from cereal"),
                ("noun.communication", vec!["agreement"], "the statement"),
                ("noun.possession", vec!["price"], "the amount of money"),
            ],
            verbs: vec![
                ("verb.communication", vec!["agree", "concur"], "be in accord"),
                ("verb.stative", vec!["agree"], "be compatible"),
                ("verb.motion", vec!["run"], "move fast"),
                ("verb.possession", vec!["trade", "swap"], "exchange goods"),
            ],
        }
    }

    /// Writes the five database files into `dir`.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut lex = String::new();
        for (i, name) in LEXNAMES.iter().enumerate() {
            let pos = match name.split('.').next() {
                Some("noun") => 1,
                Some("verb") => 2,
                Some("adv") => 4,
                _ => 3,
            };
            writeln!(lex, "{i:02}\t{name}\t{pos}").unwrap();
        }
        fs::write(dir.join("lexnames"), lex)?;
        write_pos(dir, "noun", 'n', &self.nouns)?;
        write_pos(dir, "verb", 'v', &self.verbs)?;
        Ok(())
    }
}

fn write_pos(
    dir: &Path,
    suffix: &str,
    marker: char,
    synsets: &[(&'static str, Vec<&'static str>, &'static str)],
) -> io::Result<()> {
    let mut data = String::from(HEADER);
    let mut index: std::collections::BTreeMap<&str, Vec<usize>> = Default::default();
    for (lexname, words, gloss) in synsets {
        let filenum = LEXNAMES
            .iter()
            .position(|n| n == lexname)
            .unwrap_or_else(|| panic!("unknown lexname {lexname}"));
        let offset = data.len();
        write!(data, "{offset:08} {filenum:02} {marker} {:02x}", words.len()).unwrap();
        for w in words {
            write!(data, " {w} 0").unwrap();
            index.entry(w).or_default().push(offset);
        }
        writeln!(data, " 000 | {gloss}  ").unwrap();
    }
    let mut idx = String::from(HEADER);
    for (lemma, offsets) in index {
        write!(idx, "{lemma} {marker} {} 0 {} 0", offsets.len(), offsets.len()).unwrap();
        for o in offsets {
            write!(idx, " {o:08}").unwrap();
        }
        idx.push_str("  \n");
    }
    fs::write(dir.join(format!("data.{suffix}")), data)?;
    fs::write(dir.join(format!("index.{suffix}")), idx)
}
