//! Lightweight part-of-speech categorization covering the six reported
//! categories: closed-class lists decide pronouns and prepositions, a
//! numeric pattern decides cardinals, and a bundled noun/verb lexicon
//! plus suffix heuristics decide the open classes. Pre-tagged input can
//! bypass this entirely: metrics accepts externally supplied tags.

use std::collections::HashSet;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosCategory {
    Cardinal,
    Noun,
    Preposition,
    Pronoun,
    /// "I", "me", "mine", "my", "myself"; disjoint from `Pronoun`.
    FirstPersonPronoun,
    Verb,
    Other,
}

const FIRST_PERSON: [&str; 5] = ["i", "me", "mine", "my", "myself"];

const PRONOUNS: [&str; 41] = [
    "you", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "her",
    "hers", "herself", "it", "its", "itself", "we", "us", "our", "ours", "ourselves", "they",
    "them", "their", "theirs", "themselves", "who", "whom", "whose", "which", "this", "that",
    "these", "those", "anyone", "anybody", "anything", "someone", "somebody", "something",
    "nobody",
];

const PREPOSITIONS: [&str; 48] = [
    "about", "above", "across", "after", "against", "along", "amid", "amidst", "among", "around",
    "at", "before", "behind", "below", "beneath", "beside", "besides", "between", "beyond", "by",
    "despite", "down", "during", "except", "for", "from", "in", "inside", "into", "near", "of",
    "off", "on", "onto", "out", "outside", "over", "past", "per", "since", "through",
    "throughout", "toward", "towards", "under", "until", "upon", "with",
];

/// Auxiliaries and modals count as verbs without a lexicon lookup.
const AUX_VERBS: [&str; 26] = [
    "am", "is", "are", "was", "were", "be", "been", "being", "do", "does", "did", "doing", "have",
    "has", "had", "having", "will", "would", "can", "could", "shall", "should", "may", "might",
    "must", "ought",
];

const NUMBER_WORDS: [&str; 29] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
    "nineteen", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
    "hundred",
];

const NUMBER_SCALE: [&str; 4] = ["thousand", "million", "billion", "trillion"];

/// Bundled open-class word lists.
pub struct PosLexicon {
    nouns: HashSet<&'static str>,
    verbs: HashSet<&'static str>,
}

impl PosLexicon {
    pub fn bundled() -> &'static PosLexicon {
        static LEX: OnceLock<PosLexicon> = OnceLock::new();
        LEX.get_or_init(|| PosLexicon {
            nouns: word_list(include_str!("../../data/nouns.txt")),
            verbs: word_list(include_str!("../../data/verbs.txt")),
        })
    }
}

fn word_list(text: &'static str) -> HashSet<&'static str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// True for auxiliary/modal verb forms (lowercase input).
pub(crate) fn is_aux_verb(lower: &str) -> bool {
    AUX_VERBS.contains(&lower)
}

/// Digits with optional commas and decimal point, optional leading "$",
/// optional trailing "%"; or a spelled-out number word.
fn is_numeric(lower: &str) -> bool {
    if NUMBER_WORDS.contains(&lower) || NUMBER_SCALE.contains(&lower) {
        return true;
    }
    let body = lower.strip_prefix('$').unwrap_or(lower);
    let body = body.strip_suffix('%').unwrap_or(body);
    !body.is_empty()
        && body.starts_with(|c: char| c.is_ascii_digit())
        && body.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '.')
}

/// Assign one of the six reported categories, or `Other`. Capitalized
/// tokens off sentence starts are treated as proper nouns and excluded
/// (the noun category covers common nouns only).
pub fn pos_categorize(token: &str, sentence_initial: bool, lex: &PosLexicon) -> PosCategory {
    let lower = token.to_lowercase();
    if FIRST_PERSON.contains(&lower.as_str()) {
        return PosCategory::FirstPersonPronoun;
    }
    if PRONOUNS.contains(&lower.as_str()) {
        return PosCategory::Pronoun;
    }
    if PREPOSITIONS.contains(&lower.as_str()) {
        return PosCategory::Preposition;
    }
    if is_numeric(&lower) {
        return PosCategory::Cardinal;
    }
    if !sentence_initial && token.starts_with(|c: char| c.is_uppercase()) {
        return PosCategory::Other;
    }
    if AUX_VERBS.contains(&lower.as_str()) {
        return PosCategory::Verb;
    }
    if lex.nouns.contains(lower.as_str()) {
        return PosCategory::Noun;
    }
    if lex.verbs.contains(lower.as_str()) {
        return PosCategory::Verb;
    }
    // Plurals and third-person forms resolve through their stem.
    if let Some(stem) = lower.strip_suffix('s') {
        if lex.nouns.contains(stem) {
            return PosCategory::Noun;
        }
        if lex.verbs.contains(stem) {
            return PosCategory::Verb;
        }
    }
    let letters = lower.chars().all(|c| c.is_ascii_alphabetic());
    if letters && lower.len() > 5 {
        if lower.ends_with("tion") || lower.ends_with("ment") || lower.ends_with("ness") {
            return PosCategory::Noun;
        }
        if lower.ends_with("ize") || lower.ends_with("ized") || lower.ends_with("izes") {
            return PosCategory::Verb;
        }
        if lower.ends_with("ed") || lower.ends_with("ing") {
            return PosCategory::Verb;
        }
    }
    PosCategory::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(tok: &str) -> PosCategory {
        pos_categorize(tok, false, PosLexicon::bundled())
    }

    #[test]
    fn first_person_closed_list() {
        for w in ["my", "I", "me", "mine", "myself"] {
            assert_eq!(cat(w), PosCategory::FirstPersonPronoun);
        }
        assert_ne!(cat("we"), PosCategory::FirstPersonPronoun);
        assert_eq!(cat("we"), PosCategory::Pronoun);
    }

    #[test]
    fn cardinal_forms() {
        for w in ["2019", "1,000", "3.5", "$2.01", "5%", "seven"] {
            assert_eq!(cat(w), PosCategory::Cardinal, "{w}");
        }
        assert_ne!(cat("x5"), PosCategory::Cardinal);
    }

    #[test]
    fn suffix_rules() {
        assert_eq!(cat("partition"), PosCategory::Noun);
        assert_eq!(cat("weakness"), PosCategory::Noun);
        assert_eq!(cat("stabilized"), PosCategory::Verb);
        assert_eq!(cat("preordered"), PosCategory::Verb);
    }

    #[test]
    fn closed_classes_and_fallback() {
        assert_eq!(cat("between"), PosCategory::Preposition);
        assert_eq!(cat("will"), PosCategory::Verb);
        assert_eq!(cat("market"), PosCategory::Noun);
        assert_eq!(cat("grew"), PosCategory::Verb);
        assert_eq!(cat("."), PosCategory::Other);
        assert_eq!(cat("blorp"), PosCategory::Other);
    }

    #[test]
    fn capitalized_mid_sentence_is_proper() {
        assert_eq!(pos_categorize("Seoul", false, PosLexicon::bundled()), PosCategory::Other);
        // Sentence-initial capitals keep their open-class category.
        assert_eq!(pos_categorize("Markets", true, PosLexicon::bundled()), PosCategory::Noun);
        // Closed classes match case-insensitively regardless of position.
        assert_eq!(pos_categorize("My", false, PosLexicon::bundled()), PosCategory::FirstPersonPronoun);
    }
}
