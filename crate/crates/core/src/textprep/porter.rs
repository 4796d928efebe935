//! Porter suffix-stripping stemmer.
//!
//! This follows Martin Porter's own reference implementation, which is the
//! program that produced the published vocabulary/output test pairs. It differs
//! from the 1980 description in two step-2 rules (`bli -> ble` replaces
//! `abli -> able`, and `logi -> log` is added).
//!
//! The stemmer works on `char`s. Any character other than `a e i o u` (and `y`
//! in vowel position) is treated as a consonant.

use crate::error::{Error, Result};

/// Stems one lowercase alphabetic word.
///
/// Words of one or two characters are returned unchanged.
pub fn porter_stem(word: &str) -> Result<String> {
    if word.is_empty() {
        return Err(Error::contract("porter_stem called with an empty word"));
    }
    if let Some(c) = word.chars().find(|c| !c.is_alphabetic() || c.is_uppercase()) {
        return Err(Error::contract(format!(
            "porter_stem expects a lowercase alphabetic word, got {word:?} (offending {c:?})"
        )));
    }
    Ok(stem_unchecked(word))
}

/// Stems without validating the input. Callers guarantee a non-empty
/// lowercase alphabetic word.
pub(crate) fn stem_unchecked(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    if chars.len() <= 2 {
        return word.to_owned();
    }
    let mut s = Stemmer::new(chars);
    s.step1ab();
    if s.len() > 1 {
        s.step1c();
        s.step2();
        s.step3();
        s.step4();
        s.step5();
    }
    s.buf.iter().collect()
}

/// Working state: `buf` is the current word and `stem_len` is the length of
/// the stem left in front of the most recent successful suffix match.
struct Stemmer {
    buf: Vec<char>,
    stem_len: usize,
}

impl Stemmer {
    fn new(buf: Vec<char>) -> Self {
        Stemmer { buf, stem_len: 0 }
    }

    fn len(&self) -> usize {
        self.buf.len()
    }

    fn last(&self) -> char {
        self.buf[self.len() - 1]
    }

    fn is_consonant(&self, i: usize) -> bool {
        match self.buf[i] {
            'a' | 'e' | 'i' | 'o' | 'u' => false,
            'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in the stem.
    fn measure(&self) -> usize {
        let mut n = 0;
        let mut in_vowels = false;
        for i in 0..self.stem_len {
            let consonant = self.is_consonant(i);
            if in_vowels && consonant {
                n += 1;
            }
            in_vowels = !consonant;
        }
        n
    }

    fn vowel_in_stem(&self) -> bool {
        (0..self.stem_len).any(|i| !self.is_consonant(i))
    }

    fn double_consonant(&self, i: usize) -> bool {
        i >= 1 && self.buf[i] == self.buf[i - 1] && self.is_consonant(i)
    }

    /// consonant-vowel-consonant ending at `i`, last consonant not w, x or y.
    fn cvc(&self, i: usize) -> bool {
        if i < 2 || !self.is_consonant(i) || self.is_consonant(i - 1) || !self.is_consonant(i - 2) {
            return false;
        }
        !matches!(self.buf[i], 'w' | 'x' | 'y')
    }

    /// Whether the word ends with `suffix`; on success `stem_len` excludes it.
    fn ends(&mut self, suffix: &str) -> bool {
        let n = suffix.chars().count();
        if n > self.len() {
            return false;
        }
        let start = self.len() - n;
        if !self.buf[start..].iter().copied().eq(suffix.chars()) {
            return false;
        }
        self.stem_len = start;
        true
    }

    /// Replaces everything after the stem with `replacement`.
    fn set_to(&mut self, replacement: &str) {
        self.buf.truncate(self.stem_len);
        self.buf.extend(replacement.chars());
    }

    fn replace_if_measured(&mut self, replacement: &str) {
        if self.measure() > 0 {
            self.set_to(replacement);
        }
    }

    fn pop(&mut self, n: usize) {
        let len = self.len() - n;
        self.buf.truncate(len);
    }

    fn step1ab(&mut self) {
        if self.last() == 's' {
            if self.ends("sses") {
                self.pop(2);
            } else if self.ends("ies") {
                self.set_to("i");
            } else if self.buf[self.len() - 2] != 's' {
                self.pop(1);
            }
        }
        if self.ends("eed") {
            if self.measure() > 0 {
                self.pop(1);
            }
        } else if (self.ends("ed") || self.ends("ing")) && self.vowel_in_stem() {
            self.buf.truncate(self.stem_len);
            if self.ends("at") {
                self.set_to("ate");
            } else if self.ends("bl") {
                self.set_to("ble");
            } else if self.ends("iz") {
                self.set_to("ize");
            } else if self.double_consonant(self.len() - 1) {
                if !matches!(self.last(), 'l' | 's' | 'z') {
                    self.pop(1);
                }
            } else if self.measure() == 1 && self.cvc(self.len() - 1) {
                self.buf.push('e');
            }
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && self.vowel_in_stem() {
            let last = self.len() - 1;
            self.buf[last] = 'i';
        }
    }

    fn step2(&mut self) {
        const RULES: &[(char, &[(&str, &str)])] = &[
            ('a', &[("ational", "ate"), ("tional", "tion")]),
            ('c', &[("enci", "ence"), ("anci", "ance")]),
            ('e', &[("izer", "ize")]),
            (
                'l',
                &[
                    ("bli", "ble"),
                    ("alli", "al"),
                    ("entli", "ent"),
                    ("eli", "e"),
                    ("ousli", "ous"),
                ],
            ),
            ('o', &[("ization", "ize"), ("ation", "ate"), ("ator", "ate")]),
            (
                's',
                &[
                    ("alism", "al"),
                    ("iveness", "ive"),
                    ("fulness", "ful"),
                    ("ousness", "ous"),
                ],
            ),
            ('t', &[("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")]),
            ('g', &[("logi", "log")]),
        ];
        let key = self.buf[self.len() - 2];
        self.apply_first(RULES, key);
    }

    fn step3(&mut self) {
        const RULES: &[(char, &[(&str, &str)])] = &[
            ('e', &[("icate", "ic"), ("ative", ""), ("alize", "al")]),
            ('i', &[("iciti", "ic")]),
            ('l', &[("ical", "ic"), ("ful", "")]),
            ('s', &[("ness", "")]),
        ];
        let key = self.last();
        self.apply_first(RULES, key);
    }

    /// Applies the first rule in `key`'s group whose suffix matches. A match
    /// ends the group even when the measure condition rejects the rewrite.
    fn apply_first(&mut self, table: &[(char, &[(&str, &str)])], key: char) {
        let Some((_, rules)) = table.iter().find(|(k, _)| *k == key) else {
            return;
        };
        for (suffix, replacement) in rules.iter() {
            if self.ends(suffix) {
                self.replace_if_measured(replacement);
                return;
            }
        }
    }

    fn step4(&mut self) {
        let matched = match self.buf[self.len() - 2] {
            'a' => self.ends("al"),
            'c' => self.ends("ance") || self.ends("ence"),
            'e' => self.ends("er"),
            'i' => self.ends("ic"),
            'l' => self.ends("able") || self.ends("ible"),
            'n' => self.ends("ant") || self.ends("ement") || self.ends("ment") || self.ends("ent"),
            'o' => {
                (self.ends("ion") && self.stem_len > 0 && matches!(self.buf[self.stem_len - 1], 's' | 't'))
                    || self.ends("ou")
            }
            's' => self.ends("ism"),
            't' => self.ends("ate") || self.ends("iti"),
            'u' => self.ends("ous"),
            'v' => self.ends("ive"),
            'z' => self.ends("ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            self.buf.truncate(self.stem_len);
        }
    }

    fn step5(&mut self) {
        // both checks measure the word as it stood on entry
        self.stem_len = self.len();
        let m = self.measure();
        if self.last() == 'e' && (m > 1 || (m == 1 && !self.cvc(self.len() - 2))) {
            self.pop(1);
        }
        if self.last() == 'l' && self.double_consonant(self.len() - 1) && m > 1 {
            self.pop(1);
        }
    }
}
