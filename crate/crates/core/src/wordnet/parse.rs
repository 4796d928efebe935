//! Readers for the WordNet database text files.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::{PartOfSpeech, Synset};

pub(super) const REQUIRED_FILES: [&str; 5] = ["index.noun", "data.noun", "index.verb", "data.verb", "lexnames"];

pub(super) fn read_file(dir: &Path, name: &str) -> Result<(PathBuf, String)> {
    let path = dir.join(name);
    if !path.is_file() {
        return Err(Error::MissingPath(path));
    }
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    Ok((path, String::from_utf8_lossy(&bytes).into_owned()))
}

/// License header lines start with two spaces.
fn is_header(line: &str) -> bool {
    line.starts_with("  ")
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !is_header(l) && !l.trim().is_empty())
}

/// `NN<TAB>name<TAB>pos` per line.
pub(super) fn parse_lexnames(path: &Path, text: &str) -> Result<BTreeMap<u8, String>> {
    let mut table = BTreeMap::new();
    for (n, line) in content_lines(text) {
        let mut fields = line.split_whitespace();
        let (Some(num), Some(name)) = (fields.next(), fields.next()) else {
            return Err(Error::parse(path, n, "expected `number name pos`"));
        };
        let num: u8 = num
            .parse()
            .map_err(|_| Error::parse(path, n, format!("bad lexicographer file number `{num}`")))?;
        table.insert(num, name.to_owned());
    }
    if table.is_empty() {
        return Err(Error::parse(path, 0, "no lexicographer file names"));
    }
    Ok(table)
}

/// `lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt synset_offset...`
pub(super) fn parse_index(path: &Path, text: &str, pos: PartOfSpeech) -> Result<HashMap<String, Vec<u64>>> {
    let mut index = HashMap::new();
    for (n, line) in content_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::parse(path, n, msg.to_owned());
        if f.len() < 6 {
            return Err(bad("too few fields in index line"));
        }
        if f[1] != pos.marker() {
            return Err(bad(&format!(
                "expected part of speech `{}`, found `{}`",
                pos.marker(),
                f[1]
            )));
        }
        let synset_cnt: usize = f[2].parse().map_err(|_| bad("bad synset_cnt"))?;
        let p_cnt: usize = f[3].parse().map_err(|_| bad("bad p_cnt"))?;
        let offsets_at = 4 + p_cnt + 2;
        if f.len() != offsets_at + synset_cnt {
            return Err(bad(&format!(
                "expected {synset_cnt} synset offsets after {p_cnt} pointers, line has {} fields",
                f.len()
            )));
        }
        let offsets = f[offsets_at..]
            .iter()
            .map(|o| o.parse::<u64>().map_err(|_| bad(&format!("bad synset offset `{o}`"))))
            .collect::<Result<Vec<_>>>()?;
        index.insert(f[0].to_lowercase(), offsets);
    }
    Ok(index)
}

/// `offset lex_filenum ss_type w_cnt word lex_id [word lex_id...] ...`
///
/// Only the leading fields are read; pointers and glosses are ignored.
pub(super) fn parse_data(path: &Path, text: &str, pos: PartOfSpeech) -> Result<HashMap<u64, Synset>> {
    let mut store = HashMap::new();
    for (n, line) in content_lines(text) {
        let f: Vec<&str> = line.split_whitespace().take(4).collect();
        let bad = |msg: String| Error::parse(path, n, msg);
        if f.len() < 4 {
            return Err(bad("too few fields in data line".into()));
        }
        let offset: u64 = f[0].parse().map_err(|_| bad(format!("bad synset offset `{}`", f[0])))?;
        let lex_filenum: u8 = f[1]
            .parse()
            .map_err(|_| bad(format!("bad lexicographer file number `{}`", f[1])))?;
        if f[2] != pos.marker() {
            return Err(bad(format!(
                "expected synset type `{}`, found `{}`",
                pos.marker(),
                f[2]
            )));
        }
        let w_cnt = usize::from_str_radix(f[3], 16).map_err(|_| bad(format!("bad w_cnt `{}`", f[3])))?;
        let words: Vec<String> = line
            .split_whitespace()
            .skip(4)
            .step_by(2)
            .take(w_cnt)
            .map(str::to_lowercase)
            .collect();
        if words.len() != w_cnt {
            return Err(bad(format!("expected {w_cnt} words")));
        }
        store.insert(
            offset,
            Synset {
                pos,
                lex_filenum,
                words,
            },
        );
    }
    Ok(store)
}

/// Pulls `X.Y` out of a header such as `WordNet 3.0 Copyright 2006 ...`.
pub(super) fn header_version(text: &str) -> Option<String> {
    text.lines().take_while(|l| is_header(l)).find_map(|l| {
        let mut words = l.split_whitespace();
        words.find(|w| *w == "WordNet")?;
        let v = words.next()?;
        v.chars()
            .next()
            .filter(char::is_ascii_digit)
            .map(|_| v.trim_end_matches(|c: char| !c.is_ascii_digit()).to_owned())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: &str = "test-file";

    #[test]
    fn index_line() {
        let text = "  1 header line\ndog n 2 1 @ 2 1 00000100 00000200  \n";
        let idx = parse_index(Path::new(P), text, PartOfSpeech::Noun).unwrap();
        assert_eq!(idx["dog"], [100, 200]);
    }

    #[test]
    fn index_count_mismatch() {
        let text = "dog n 3 0 1 0 00000100\n";
        match parse_index(Path::new(P), text, PartOfSpeech::Noun) {
            Err(Error::Parse { line, file, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(file, Path::new(P));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn data_line() {
        let text = "00000100 05 n 02 dog 0 domestic_dog 0 001 @ 00000300 n 0000 | a dog\n";
        let store = parse_data(Path::new(P), text, PartOfSpeech::Noun).unwrap();
        let s = &store[&100];
        assert_eq!(s.lex_filenum, 5);
        assert_eq!(s.words, ["dog", "domestic_dog"]);
    }

    #[test]
    fn data_wrong_pos() {
        let text = "00000100 05 v 01 run 0 000 | go\n";
        assert!(parse_data(Path::new(P), text, PartOfSpeech::Noun).is_err());
    }

    #[test]
    fn lexnames_table() {
        let t = parse_lexnames(Path::new(P), "03\tnoun.Tops\t1\n05\tnoun.animal\t1\n").unwrap();
        assert_eq!(t[&5], "noun.animal");
        assert!(parse_lexnames(Path::new(P), "x\tnoun.Tops\t1\n").is_err());
    }

    #[test]
    fn version_from_header() {
        let text = "  1 This software\n  14 WordNet 3.0 Copyright 2006 by Princeton.\n00001 03 n";
        assert_eq!(header_version(text).as_deref(), Some("3.0"));
        assert_eq!(header_version("00001 03 n"), None);
    }
}
