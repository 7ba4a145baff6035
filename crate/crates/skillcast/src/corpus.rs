//! Forecast corpus ingestion and the preprocessing filters: minimum
//! justification length, quote ratio, English detection, and the
//! minimum-forecasts-per-author rule.

use crate::error::{Error, Result};
use crate::text::tokenize;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainTag {
    /// Probability forecast on a binary question.
    Binary,
    /// Numerical EPS forecast for a company.
    Eps,
}

/// One prediction: who forecast what, the claimed number, the free-text
/// justification, and the resolved outcome when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRecord {
    pub record_id: String,
    pub author_id: String,
    /// Question id for binary forecasts, company ticker for EPS.
    pub target_id: String,
    pub timestamp: DateTime<Utc>,
    /// Probability in [0,1] (binary) or currency amount (eps).
    pub estimate: f64,
    #[serde(default)]
    pub justification: String,
    /// 0/1 for binary questions, actual EPS for financial records.
    #[serde(default)]
    pub outcome: Option<f64>,
    pub domain_tag: DomainTag,
}

impl ForecastRecord {
    fn validate(&self) -> std::result::Result<(), String> {
        if !self.estimate.is_finite() {
            return Err("estimate not finite".into());
        }
        if self.domain_tag == DomainTag::Binary {
            if !(0.0..=1.0).contains(&self.estimate) {
                return Err(format!("binary estimate {} outside [0,1]", self.estimate));
            }
            if let Some(o) = self.outcome {
                if o != 0.0 && o != 1.0 {
                    return Err(format!("binary outcome {o} not 0/1"));
                }
            }
        }
        if let Some(o) = self.outcome {
            if !o.is_finite() {
                return Err("outcome not finite".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

/// A malformed input line: 1-based line/record number plus the reason.
#[derive(Debug, Clone, Serialize)]
pub struct RejectedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug)]
pub struct LoadedCorpus {
    pub records: Vec<ForecastRecord>,
    pub rejected: Vec<RejectedLine>,
}

/// Read records in file order; malformed lines are collected, not
/// silently dropped. Duplicate record ids reject the later line.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<LoadedCorpus> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, format)
}

/// Same contract as load_corpus for already-read text (e.g. stdin).
pub fn parse_corpus(text: &str, format: CorpusFormat) -> Result<LoadedCorpus> {
    match format {
        CorpusFormat::Jsonl => load_jsonl(text),
        CorpusFormat::Csv => load_csv(text),
    }
}

fn push_checked(
    rec: ForecastRecord,
    line: usize,
    seen: &mut HashSet<String>,
    records: &mut Vec<ForecastRecord>,
    rejected: &mut Vec<RejectedLine>,
) {
    if let Err(reason) = rec.validate() {
        rejected.push(RejectedLine { line, reason });
    } else if !seen.insert(rec.record_id.clone()) {
        rejected.push(RejectedLine { line, reason: format!("duplicate record_id {}", rec.record_id) });
    } else {
        records.push(rec);
    }
}

fn load_jsonl(text: &str) -> Result<LoadedCorpus> {
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ForecastRecord>(line) {
            Ok(rec) => push_checked(rec, i + 1, &mut seen, &mut records, &mut rejected),
            Err(e) => rejected.push(RejectedLine { line: i + 1, reason: e.to_string() }),
        }
    }
    Ok(LoadedCorpus { records, rejected })
}

fn load_csv(text: &str) -> Result<LoadedCorpus> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(text.as_bytes());
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in rdr.deserialize::<ForecastRecord>().enumerate() {
        // Line 1 is the header; data rows start at 2.
        let line = i + 2;
        match row {
            Ok(rec) => push_checked(rec, line, &mut seen, &mut records, &mut rejected),
            Err(e) => rejected.push(RejectedLine { line, reason: e.to_string() }),
        }
    }
    Ok(LoadedCorpus { records, rejected })
}

/// Thresholds for `apply_filters`; defaults follow the preprocessing
/// rules the skill analyses assume.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusFilterConfig {
    /// Keep a record only if its justification has more than this many tokens.
    pub min_tokens_per_justification: usize,
    /// Drop a record if quoted characters exceed this fraction of its
    /// non-whitespace characters.
    pub max_quote_ratio: f64,
    /// After per-record filters, keep only authors with at least this
    /// many surviving records.
    pub min_forecasts_per_author: usize,
    pub require_english: bool,
}

impl Default for CorpusFilterConfig {
    fn default() -> Self {
        CorpusFilterConfig {
            min_tokens_per_justification: 10,
            max_quote_ratio: 0.5,
            min_forecasts_per_author: 5,
            require_english: true,
        }
    }
}

impl CorpusFilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.max_quote_ratio) {
            return Err(Error::Config(format!(
                "max_quote_ratio {} outside [0,1]",
                self.max_quote_ratio
            )));
        }
        Ok(())
    }
}

/// Per-rule drop accounting; `dropped() + retained == input`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FilterReport {
    pub input: usize,
    pub dropped_short: usize,
    pub dropped_quote_heavy: usize,
    pub dropped_non_english: usize,
    pub dropped_author_minimum: usize,
    pub retained: usize,
    pub authors_retained: usize,
}

impl FilterReport {
    pub fn dropped(&self) -> usize {
        self.dropped_short
            + self.dropped_quote_heavy
            + self.dropped_non_english
            + self.dropped_author_minimum
    }
}

fn function_words() -> &'static HashSet<&'static str> {
    static WORDS: OnceLock<HashSet<&'static str>> = OnceLock::new();
    WORDS.get_or_init(|| {
        include_str!("../data/function_words.txt")
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Stop-word-coverage heuristic: English iff at least 2 of the 20 most
/// frequent tokens are common English function words and at least 40% of
/// characters are ASCII letters.
pub fn is_english(text: &str) -> bool {
    let total_chars = text.chars().count();
    if total_chars == 0 {
        return false;
    }
    let letters = text.chars().filter(|c| c.is_ascii_alphabetic()).count();
    if (letters as f64) / (total_chars as f64) < 0.4 {
        return false;
    }
    let tok = tokenize(text);
    let mut freq: HashMap<String, usize> = HashMap::new();
    for t in &tok.tokens {
        *freq.entry(t.to_lowercase()).or_insert(0) += 1;
    }
    let mut by_freq: Vec<(&String, &usize)> = freq.iter().collect();
    by_freq.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let hits = by_freq
        .iter()
        .take(20)
        .filter(|(w, _)| function_words().contains(w.as_str()))
        .count();
    hits >= 2
}

/// Fraction of non-whitespace characters inside paired quote marks,
/// marks included.
pub fn quote_ratio(text: &str) -> f64 {
    let tok = tokenize(text);
    let non_ws = text.chars().filter(|c| !c.is_whitespace()).count();
    if non_ws == 0 {
        return 0.0;
    }
    let quoted: usize = tok
        .quote_spans
        .iter()
        .map(|r| text[r.clone()].chars().filter(|c| !c.is_whitespace()).count())
        .sum();
    quoted as f64 / non_ws as f64
}

/// Apply per-record filters (length, quotes, English) in order, then the
/// author-minimum rule over the survivors. The English check is
/// pluggable; `None` uses [`is_english`].
pub fn apply_filters(
    records: &[ForecastRecord],
    config: &CorpusFilterConfig,
    english: Option<&(dyn Fn(&str) -> bool + Sync)>,
) -> (Vec<ForecastRecord>, FilterReport) {
    let mut report = FilterReport { input: records.len(), ..FilterReport::default() };
    let english = english.unwrap_or(&is_english);

    let mut survivors: Vec<&ForecastRecord> = Vec::new();
    for rec in records {
        let tok = tokenize(&rec.justification);
        if tok.n_tokens() <= config.min_tokens_per_justification {
            report.dropped_short += 1;
            continue;
        }
        if quote_ratio(&rec.justification) > config.max_quote_ratio {
            report.dropped_quote_heavy += 1;
            continue;
        }
        if config.require_english && !english(&rec.justification) {
            report.dropped_non_english += 1;
            continue;
        }
        survivors.push(rec);
    }

    let mut per_author: HashMap<&str, usize> = HashMap::new();
    for rec in &survivors {
        *per_author.entry(rec.author_id.as_str()).or_insert(0) += 1;
    }
    let mut kept = Vec::new();
    let mut authors: HashSet<&str> = HashSet::new();
    for rec in survivors {
        if per_author[rec.author_id.as_str()] >= config.min_forecasts_per_author {
            authors.insert(rec.author_id.as_str());
            kept.push(rec.clone());
        } else {
            report.dropped_author_minimum += 1;
        }
    }
    report.retained = kept.len();
    report.authors_retained = authors.len();
    (kept, report)
}
