//! Inflectional detachment rules, as used by WordNet's morphy.

use super::PartOfSpeech;

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

/// Every candidate produced by one rule application, in rule order.
/// Candidates are not checked against any index.
pub(super) fn detach(word: &str, pos: PartOfSpeech) -> Vec<String> {
    let rules = match pos {
        PartOfSpeech::Noun => NOUN_RULES,
        PartOfSpeech::Verb => VERB_RULES,
    };
    rules
        .iter()
        .filter_map(|(suffix, repl)| {
            let stem = word.strip_suffix(suffix)?;
            (!stem.is_empty()).then(|| format!("{stem}{repl}"))
        })
        .collect()
}
