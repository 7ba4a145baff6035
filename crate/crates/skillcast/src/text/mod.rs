//! Deterministic text primitives shared by every metric and model:
//! tokenization, sentence splitting, syllable counting, quote-span
//! detection, part-of-speech categorization, and category-lexicon
//! matching.

mod lexicon;
pub(crate) mod pos;

pub use lexicon::{Lexicon, LexiconEntry, LexiconMatches};
pub use pos::{pos_categorize, PosCategory, PosLexicon};

use crate::error::{Error, Result};
use std::ops::Range;

/// Token stream plus sentence and quote structure for one text.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenizedText {
    pub tokens: Vec<String>,
    /// Byte range of each token in the source text.
    pub token_spans: Vec<Range<usize>>,
    /// Exclusive token index ending each sentence, strictly increasing;
    /// the last entry equals `tokens.len()`.
    pub sentence_boundaries: Vec<usize>,
    /// Byte ranges enclosed by paired quote marks, marks included.
    pub quote_spans: Vec<Range<usize>>,
}

impl TokenizedText {
    pub fn n_tokens(&self) -> usize {
        self.tokens.len()
    }

    pub fn n_sentences(&self) -> usize {
        self.sentence_boundaries.len()
    }

    /// Token index ranges of the sentences.
    pub fn sentence_ranges(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.sentence_boundaries.len());
        let mut start = 0;
        for &end in &self.sentence_boundaries {
            out.push(start..end);
            start = end;
        }
        out
    }

    /// Letter-bearing tokens; the word count behind readability formulas.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens
            .iter()
            .filter(|t| t.chars().any(|c| c.is_alphabetic()))
            .map(|s| s.as_str())
    }
}

const CLITICS: [&str; 6] = ["'s", "'m", "'re", "'ve", "'ll", "'d"];

/// Common abbreviations whose trailing period is not a sentence end.
const ABBREVIATIONS: [&str; 31] = [
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "inc", "corp", "co", "ltd",
    "no", "fig", "approx", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
    "nov", "dec", "est", "dept",
];

fn is_abbreviation(core: &str) -> bool {
    // "U.S.", "e.g.", "a.m.": an interior period marks an abbreviation,
    // as does a single initial; digits like "2.01" are not exempt.
    let stem = &core[..core.len() - 1];
    if stem.contains('.') && stem.chars().any(|c| c.is_alphabetic()) {
        return true;
    }
    if stem.chars().count() == 1 && stem.chars().all(|c| c.is_alphabetic()) {
        return true;
    }
    ABBREVIATIONS.contains(&stem.to_lowercase().as_str())
}

fn is_open_punct(c: char) -> bool {
    matches!(c, '(' | '[' | '{' | '"' | '\u{201C}' | '\u{2018}' | '`')
}

fn is_close_punct(c: char) -> bool {
    matches!(
        c,
        ',' | ';' | ':' | '!' | '?' | ')' | ']' | '}' | '"' | '\u{201D}' | '\u{2019}' | '\''
    )
}

/// Split one whitespace-delimited chunk into tokens, pushing byte spans
/// relative to the full source text.
fn split_chunk(text: &str, start: usize, end: usize, out: &mut Vec<(usize, usize)>) {
    let chunk = &text[start..end];

    // Standalone clitics pass through unchanged.
    let norm = chunk.to_lowercase().replace('\u{2019}', "'");
    if CLITICS.contains(&norm.as_str()) || norm == "n't" {
        out.push((start, end));
        return;
    }

    let mut s = start;
    let mut e = end;

    // Leading punctuation peels one character at a time. An apostrophe
    // followed by a digit starts a year form ('16) and stays attached;
    // "$" followed by a digit starts a money amount and stays attached.
    while s < e {
        let c = text[s..e].chars().next().unwrap();
        let rest = &text[s + c.len_utf8()..e];
        let keep = match c {
            '\'' | '\u{2019}' => rest.starts_with(|r: char| r.is_ascii_digit()),
            '$' => rest.starts_with(|r: char| r.is_ascii_digit()),
            c if is_open_punct(c) => false,
            _ => true,
        };
        if keep {
            break;
        }
        out.push((s, s + c.len_utf8()));
        s += c.len_utf8();
    }

    // Trailing punctuation peels into a stack so emission order stays
    // left to right. "%" after a digit and abbreviation periods stay.
    let mut tail: Vec<(usize, usize)> = Vec::new();
    while s < e {
        let c = text[s..e].chars().next_back().unwrap();
        let c_start = e - c.len_utf8();
        let before = &text[s..c_start];
        match c {
            '.' => {
                if before.ends_with('.') {
                    // Ellipsis: the whole terminal period run is one token.
                    let mut run_start = c_start;
                    while run_start > s && text[s..run_start].ends_with('.') {
                        run_start -= 1;
                    }
                    if run_start == s {
                        break; // chunk is all periods
                    }
                    tail.push((run_start, e));
                    e = run_start;
                } else if before.is_empty() || is_abbreviation(&text[s..e]) {
                    break;
                } else {
                    tail.push((c_start, e));
                    e = c_start;
                }
            }
            '%' => {
                if before.ends_with(|b: char| b.is_ascii_digit()) {
                    break;
                }
                tail.push((c_start, e));
                e = c_start;
            }
            c if is_close_punct(c) => {
                tail.push((c_start, e));
                e = c_start;
            }
            _ => break,
        }
    }

    // Clitic split on the remaining core: "don't" -> "do" + "n't",
    // "it's" -> "it" + "'s". Case is preserved via byte slicing.
    if s < e {
        let mut split_at = None;
        'suffixes: for apostrophe in ["'", "\u{2019}"] {
            for base in ["n't", "'s", "'m", "'re", "'ve", "'ll", "'d"] {
                let suf = base.replacen('\'', apostrophe, 1);
                if clitic_suffix(&text[s..e], &suf) {
                    split_at = Some(e - suf.len());
                    break 'suffixes;
                }
            }
        }
        match split_at {
            Some(m) => {
                out.push((s, m));
                out.push((m, e));
            }
            None => out.push((s, e)),
        }
    }

    out.extend(tail.into_iter().rev());
}

/// True when `core` ends with the clitic suffix (ASCII-case-insensitive)
/// and a non-empty stem remains.
fn clitic_suffix(core: &str, suf: &str) -> bool {
    core.len() > suf.len()
        && core.is_char_boundary(core.len() - suf.len())
        && core[core.len() - suf.len()..].eq_ignore_ascii_case(suf)
}

/// Sentence-terminal tokens consist only of '.', '!', '?'.
fn is_terminal_punct(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| matches!(c, '.' | '!' | '?'))
}

fn find_sentence_boundaries(text: &str, spans: &[(usize, usize)], tokens: &[String]) -> Vec<usize> {
    let mut bounds = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if !is_terminal_punct(tok) {
            continue;
        }
        let after = &text[spans[i].1..];
        let trimmed = after.trim_start();
        // Sentence end: terminal punctuation followed by whitespace and a
        // capital (or digit), or nothing but whitespace.
        let ends = if trimmed.is_empty() {
            true
        } else if trimmed.len() < after.len() {
            trimmed.starts_with(|c: char| c.is_uppercase() || c.is_ascii_digit())
        } else {
            false
        };
        if ends {
            bounds.push(i + 1);
        }
    }
    if !tokens.is_empty() && bounds.last() != Some(&tokens.len()) {
        bounds.push(tokens.len());
    }
    bounds
}

fn find_quote_spans(text: &str) -> Vec<Range<usize>> {
    #[derive(PartialEq)]
    enum State {
        Outside,
        Straight(usize),
        Curly(usize),
    }
    let mut spans = Vec::new();
    let mut state = State::Outside;
    for (i, c) in text.char_indices() {
        match (&state, c) {
            (State::Outside, '"') => state = State::Straight(i),
            (State::Outside, '\u{201C}') => state = State::Curly(i),
            (State::Straight(s), '"') | (State::Curly(s), '\u{201D}') => {
                spans.push(*s..i + c.len_utf8());
                state = State::Outside;
            }
            _ => {}
        }
    }
    // An unpaired opening quote runs to the end of the text.
    if let State::Straight(s) | State::Curly(s) = state {
        spans.push(s..text.len());
    }
    spans
}

/// Whitespace split plus punctuation separation with guards for numbers,
/// money, year forms, abbreviations and clitics; sentence ends detected
/// at `.`/`!`/`?` before whitespace+capital or end of text.
pub fn tokenize(text: &str) -> TokenizedText {
    let mut span_pairs: Vec<(usize, usize)> = Vec::new();
    let mut chunk_start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = chunk_start.take() {
                split_chunk(text, s, i, &mut span_pairs);
            }
        } else if chunk_start.is_none() {
            chunk_start = Some(i);
        }
    }
    if let Some(s) = chunk_start {
        split_chunk(text, s, text.len(), &mut span_pairs);
    }

    let tokens: Vec<String> = span_pairs.iter().map(|&(s, e)| text[s..e].to_string()).collect();
    let sentence_boundaries = find_sentence_boundaries(text, &span_pairs, &tokens);
    TokenizedText {
        token_spans: span_pairs.iter().map(|&(s, e)| s..e).collect(),
        tokens,
        sentence_boundaries,
        quote_spans: find_quote_spans(text),
    }
}

/// Heuristic syllable count: maximal `aeiouy` groups, minus a terminal
/// silent "e" when dropping it leaves at least one group; minimum 1.
pub fn count_syllables(word: &str) -> Result<u32> {
    if !word.chars().any(|c| c.is_alphabetic()) {
        return Err(Error::Data(format!("count_syllables: no letters in {word:?}")));
    }
    let lower = word.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');

    let mut groups: u32 = 0;
    let mut last_group_len = 0usize;
    let mut in_group = false;
    for &c in &chars {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
                last_group_len = 0;
                in_group = true;
            }
            last_group_len += 1;
        } else {
            in_group = false;
        }
    }
    if groups > 1 && in_group && last_group_len == 1 && chars.last() == Some(&'e') {
        groups -= 1;
    }
    Ok(groups.max(1))
}
