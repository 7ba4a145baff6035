//! Category lexicons: word lists mapping lowercase patterns to category
//! labels with optional scores. File format, one entry per line:
//! `pattern<TAB>category[<TAB>score]`; a trailing `*` marks a prefix
//! wildcard; `#` starts a comment line.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

#[derive(Debug, Clone)]
pub struct LexiconEntry {
    pub category: String,
    pub score: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    pub name: String,
    entries: Vec<LexiconEntry>,
    exact: HashMap<String, usize>,
    /// Wildcard stems ordered longest first (ties lexicographic) so that
    /// lookup takes the longest matching prefix.
    prefixes: Vec<(String, usize)>,
}

/// Per-category match counts and score sums for one token stream.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LexiconMatches {
    pub counts: BTreeMap<String, u64>,
    pub score_sums: BTreeMap<String, f64>,
}

impl LexiconMatches {
    pub fn count(&self, category: &str) -> u64 {
        self.counts.get(category).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

impl Lexicon {
    pub fn parse(name: &str, text: &str) -> Result<Lexicon> {
        let mut lex = Lexicon {
            name: name.to_string(),
            entries: Vec::new(),
            exact: HashMap::new(),
            prefixes: Vec::new(),
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let pattern = fields.next().unwrap_or("");
            let category = fields
                .next()
                .ok_or_else(|| Error::parse(name, lineno + 1, "missing category field"))?;
            let score = match fields.next() {
                None => None,
                Some(s) => Some(s.parse::<f64>().map_err(|_| {
                    Error::parse(name, lineno + 1, format!("bad score {s:?}"))
                })?),
            };
            if pattern.is_empty() {
                return Err(Error::parse(name, lineno + 1, "empty pattern"));
            }
            if category.is_empty() {
                return Err(Error::parse(name, lineno + 1, "empty category"));
            }
            if let Some(s) = score {
                if !s.is_finite() {
                    return Err(Error::parse(name, lineno + 1, "score not finite"));
                }
            }
            let pattern = pattern.to_lowercase();
            let idx = lex.entries.len();
            lex.entries.push(LexiconEntry { category: category.to_string(), score });
            if let Some(stem) = pattern.strip_suffix('*') {
                if stem.is_empty() {
                    return Err(Error::parse(name, lineno + 1, "wildcard needs a stem"));
                }
                lex.prefixes.push((stem.to_string(), idx));
            } else {
                lex.exact.insert(pattern, idx);
            }
        }
        lex.prefixes.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        Ok(lex)
    }

    pub fn from_file(path: &Path) -> Result<Lexicon> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("lexicon");
        Lexicon::parse(name, &text)
    }

    /// Exact match first, then the longest wildcard stem. Tokens match at
    /// most one entry.
    pub fn lookup(&self, token_lower: &str) -> Option<&LexiconEntry> {
        if let Some(&i) = self.exact.get(token_lower) {
            return Some(&self.entries[i]);
        }
        self.prefixes
            .iter()
            .find(|(stem, _)| token_lower.starts_with(stem.as_str()))
            .map(|&(_, i)| &self.entries[i])
    }

    pub fn categories(&self) -> Vec<&str> {
        let mut cats: Vec<&str> = self.entries.iter().map(|e| e.category.as_str()).collect();
        cats.sort_unstable();
        cats.dedup();
        cats
    }

    /// Count category matches over a token stream (tokens lowercased here).
    pub fn match_tokens<T: AsRef<str>>(&self, tokens: &[T]) -> LexiconMatches {
        let mut m = LexiconMatches::default();
        for tok in tokens {
            let lower = tok.as_ref().to_lowercase();
            if let Some(entry) = self.lookup(&lower) {
                *m.counts.entry(entry.category.clone()).or_insert(0) += 1;
                if let Some(s) = entry.score {
                    *m.score_sums.entry(entry.category.clone()).or_insert(0.0) += s;
                }
            }
        }
        m
    }
}
