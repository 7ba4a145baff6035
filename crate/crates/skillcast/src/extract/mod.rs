//! Structured EPS forecast extraction: mask entities per sentence,
//! match lexico-syntactic patterns, emit (TIME, VALUE) pairs, pick the
//! earliest in-range forecast, and score against a gold set.

pub mod mask;
pub mod pattern;

pub use mask::{mask_entities, money_value, MaskKind, MaskSpan, MaskedSentence};
pub use pattern::{match_patterns, parse_patterns, Pattern, PatternToken};

use crate::error::{Error, Result};
use crate::text::tokenize;
use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;
use std::sync::OnceLock;

/// One extracted EPS forecast.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EpsEstimate {
    /// Filled by callers that know the source record; empty otherwise.
    pub record_id: String,
    pub time_label: String,
    pub value: f64,
    /// 1-based pattern position in the pattern file.
    pub pattern_id: usize,
    /// Byte range of the matched region in the note text.
    pub span: Range<usize>,
}

static BUNDLED: OnceLock<Vec<Pattern>> = OnceLock::new();

/// The built-in pattern set.
pub fn bundled_patterns() -> &'static [Pattern] {
    BUNDLED.get_or_init(|| {
        parse_patterns(include_str!("../../data/eps_patterns.txt"), "eps_patterns.txt")
            .expect("bundled pattern file must parse")
    })
}

pub fn load_patterns(path: &Path) -> Result<Vec<Pattern>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text, &path.display().to_string())
}

/// Extracts every pattern match from a note, sentence by sentence.
pub fn extract_eps(text: &str, patterns: &[Pattern]) -> Vec<EpsEstimate> {
    let tok = tokenize(text);
    let mut out = Vec::new();
    for range in tok.sentence_ranges() {
        if range.is_empty() {
            continue;
        }
        let start = tok.token_spans[range.start].start;
        let end = tok.token_spans[range.end - 1].end;
        let sent = mask_entities(&text[start..end]);
        for (pi, binding) in match_patterns(&sent, patterns) {
            let first = sent.tokens[binding.stream_range.start].orig_tokens.start;
            let last = sent.tokens[binding.stream_range.end - 1].orig_tokens.end - 1;
            let span = start + sent.token_spans[first].start..start + sent.token_spans[last].end;
            for &(ti, mi) in &patterns[pi].emissions {
                let time = &sent.spans[binding.times[ti - 1]];
                let money = &sent.spans[binding.moneys[mi - 1]];
                let Some(value) = money_value(&money.label) else { continue };
                out.push(EpsEstimate {
                    record_id: String::new(),
                    time_label: time.label.clone(),
                    value,
                    pattern_id: patterns[pi].id,
                    span: span.clone(),
                });
            }
        }
    }
    out
}

fn two_digit_year(n: i32) -> i32 {
    if n <= 68 {
        2000 + n
    } else {
        1900 + n
    }
}

fn parse_digits(s: &str) -> Option<i32> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

/// Normalizes a time label to a fiscal year. Labels without a year
/// ("Q1", "12-month") have no normalization.
pub fn normalize_time_label(label: &str) -> Option<i32> {
    let t = label.trim();
    let lower = t.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix('\'').or_else(|| lower.strip_prefix('\u{2019}')) {
        if rest.len() == 2 {
            return parse_digits(rest).map(two_digit_year);
        }
        return None;
    }
    if let Some(rest) = lower.strip_prefix("fy") {
        let rest = rest.trim_start();
        return match rest.len() {
            2 => parse_digits(rest).map(two_digit_year),
            4 => parse_digits(rest),
            _ => None,
        };
    }
    if let Some(rest) = lower.strip_prefix("full-year") {
        let rest = rest.trim_start();
        if rest.len() == 4 {
            return parse_digits(rest);
        }
        return None;
    }
    // 4Q17 / 4Q2017
    let b = lower.as_bytes();
    if b.len() >= 4 && (b'1'..=b'4').contains(&b[0]) && b[1] == b'q' {
        let rest = &lower[2..];
        return match rest.len() {
            2 => parse_digits(rest).map(two_digit_year),
            4 => parse_digits(rest),
            _ => None,
        };
    }
    // Q1 2017: quarter word plus explicit year.
    if b.len() >= 2 && b[0] == b'q' && (b'1'..=b'4').contains(&b[1]) {
        let rest = lower[2..].trim_start();
        if rest.len() == 4 {
            return parse_digits(rest);
        }
        return None;
    }
    if lower.len() == 4 {
        if let Some(y) = parse_digits(&lower) {
            if (1900..=2099).contains(&y) {
                return Some(y);
            }
        }
    }
    None
}

/// The earliest estimate whose normalized year falls inside `range`;
/// ties go to the earliest character span. Labels that do not
/// normalize are skipped and reported in the warnings list.
pub fn earliest_forecast(
    estimates: &[EpsEstimate],
    range: std::ops::RangeInclusive<i32>,
) -> (Option<EpsEstimate>, Vec<String>) {
    let mut warnings = Vec::new();
    let mut best: Option<(i32, &EpsEstimate)> = None;
    for est in estimates {
        let Some(year) = normalize_time_label(&est.time_label) else {
            warnings.push(format!(
                "time label `{}` at {}..{} has no year; estimate skipped",
                est.time_label, est.span.start, est.span.end
            ));
            continue;
        };
        if !range.contains(&year) {
            continue;
        }
        let better = match best {
            None => true,
            Some((by, b)) => year < by || (year == by && est.span.start < b.span.start),
        };
        if better {
            best = Some((year, est));
        }
    }
    (best.map(|(_, e)| e.clone()), warnings)
}

/// One (record, time, value) triple on either side of the evaluation.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExtractionTuple {
    pub record_id: String,
    pub time_label: String,
    pub value: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ExtractionEval {
    /// None when there are no predictions.
    pub precision: Option<f64>,
    pub recall: f64,
    pub correct: usize,
    pub n_predicted: usize,
    pub n_gold: usize,
}

fn tuple_key(t: &ExtractionTuple) -> (String, String, u64) {
    let label_key = match normalize_time_label(&t.time_label) {
        Some(y) => format!("y{y}"),
        None => format!("r{}", t.time_label.trim().to_ascii_lowercase()),
    };
    (t.record_id.clone(), label_key, t.value.to_bits())
}

/// Exact-match evaluation: a prediction counts iff record id,
/// normalized time label, and value all match a gold triple; each gold
/// triple is consumed at most once.
pub fn evaluate_extraction(
    predicted: &[ExtractionTuple],
    gold: &[ExtractionTuple],
) -> Result<ExtractionEval> {
    if gold.is_empty() {
        return Err(Error::Undefined("recall on an empty gold set"));
    }
    let mut gold_counts: BTreeMap<_, usize> = BTreeMap::new();
    for g in gold {
        *gold_counts.entry(tuple_key(g)).or_insert(0) += 1;
    }
    let mut correct = 0;
    for p in predicted {
        if let Some(n) = gold_counts.get_mut(&tuple_key(p)) {
            if *n > 0 {
                *n -= 1;
                correct += 1;
            }
        }
    }
    let precision =
        if predicted.is_empty() { None } else { Some(correct as f64 / predicted.len() as f64) };
    Ok(ExtractionEval {
        precision,
        recall: correct as f64 / gold.len() as f64,
        correct,
        n_predicted: predicted.len(),
        n_gold: gold.len(),
    })
}

/// Gold file: tab-separated record_id, time_label, value per line;
/// `#` comments and blank lines ignored.
pub fn load_gold(path: &Path) -> Result<Vec<ExtractionTuple>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file = path.display().to_string();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let (id, label, value) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), Some(c)) if cols.next().is_none() => (a, b, c),
            _ => {
                return Err(Error::parse(
                    &file,
                    lineno,
                    "expected record_id<TAB>time_label<TAB>value",
                ))
            }
        };
        let v: f64 = value
            .trim()
            .trim_start_matches('$')
            .parse()
            .map_err(|_| Error::parse(&file, lineno, format!("bad value `{value}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(&file, lineno, format!("non-finite value `{value}`")));
        }
        if id.is_empty() || label.is_empty() {
            return Err(Error::parse(&file, lineno, "empty record_id or time_label"));
        }
        out.push(ExtractionTuple {
            record_id: id.to_string(),
            time_label: label.to_string(),
            value: v,
        });
    }
    Ok(out)
}
