//! Entity masking for analyst-note sentences: money amounts and time
//! expressions become <MONEY> and <TIME> stream tokens, with a span
//! table mapping every mask back to its exact surface text.

use crate::text::tokenize;
use std::ops::Range;

pub const MONEY_MARK: &str = "<MONEY>";
pub const TIME_MARK: &str = "<TIME>";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    Money,
    Time,
}

#[derive(Debug, Clone)]
pub struct MaskSpan {
    pub kind: MaskKind,
    /// Surface form used as the emitted label; excludes a trailing
    /// possessive even when the mask absorbs one.
    pub label: String,
    /// Byte range in the original text, possessive included.
    pub byte_range: Range<usize>,
    /// Token range in the original token sequence.
    pub token_range: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct MaskedToken {
    /// Mask marker, or the literal token with bracket words normalized.
    pub text: String,
    pub orig_tokens: Range<usize>,
    /// Index into the span table when this token is a mask.
    pub span: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct MaskedSentence {
    pub original: String,
    pub tokens: Vec<MaskedToken>,
    pub spans: Vec<MaskSpan>,
    /// Byte span of every original token.
    pub token_spans: Vec<Range<usize>>,
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// $ amount fused into one token: $2.01, $1,200, $20.
fn is_money_token(t: &str) -> bool {
    let Some(rest) = t.strip_prefix('$') else { return false };
    let mut seen_digit = false;
    let mut seen_dot = false;
    for c in rest.chars() {
        match c {
            '0'..='9' => seen_digit = true,
            ',' if !seen_dot => {}
            '.' if !seen_dot => seen_dot = true,
            _ => return false,
        }
    }
    seen_digit
}

/// Bare amount: 2.01, 1,200 (used after a standalone "$").
fn is_amount_token(t: &str) -> bool {
    let mut seen_digit = false;
    let mut seen_dot = false;
    for c in t.chars() {
        match c {
            '0'..='9' => seen_digit = true,
            ',' if !seen_dot => {}
            '.' if !seen_dot => seen_dot = true,
            _ => return false,
        }
    }
    seen_digit
}

fn is_year4(t: &str) -> bool {
    t.len() == 4 && is_digits(t) && (t.starts_with("19") || t.starts_with("20"))
}

/// '16 or the curly-apostrophe variant.
fn is_apos_year(t: &str) -> bool {
    let rest = t.strip_prefix('\'').or_else(|| t.strip_prefix('\u{2019}'));
    matches!(rest, Some(r) if r.len() == 2 && is_digits(r))
}

/// FY17 / FY2017 fused into one token.
fn is_fy_fused(t: &str) -> bool {
    let lower = t.to_ascii_lowercase();
    let Some(rest) = lower.strip_prefix("fy") else { return false };
    (rest.len() == 2 || rest.len() == 4) && is_digits(rest)
}

fn is_quarter(t: &str) -> bool {
    let b = t.as_bytes();
    b.len() == 2 && (b[0] == b'q' || b[0] == b'Q') && (b'1'..=b'4').contains(&b[1])
}

/// 4Q17 / 4Q2017.
fn is_fused_quarter(t: &str) -> bool {
    let b = t.as_bytes();
    if b.len() < 4 || !(b'1'..=b'4').contains(&b[0]) || !(b[1] == b'q' || b[1] == b'Q') {
        return false;
    }
    let rest = &t[2..];
    (rest.len() == 2 || rest.len() == 4) && is_digits(rest)
}

/// Relative forms like 12-month.
fn is_relative_time(t: &str) -> bool {
    let Some((n, unit)) = t.split_once('-') else { return false };
    is_digits(n)
        && matches!(
            unit.to_ascii_lowercase().as_str(),
            "day" | "days" | "week" | "weeks" | "month" | "months" | "year" | "years"
        )
}

fn normalize_bracket(tok: &str) -> &str {
    match tok {
        "-LRB-" => "(",
        "-RRB-" => ")",
        other => other,
    }
}

/// Longest entity starting at token `i`, as (kind, token count).
fn entity_at(tokens: &[&str], i: usize) -> Option<(MaskKind, usize)> {
    let t = tokens[i];
    let next = tokens.get(i + 1).copied();
    // Money, longest first: ( $x ) | $ x | $x
    if t == "(" {
        if let (Some(m), Some(")")) = (next, tokens.get(i + 2).copied()) {
            if is_money_token(m) {
                return Some((MaskKind::Money, 3));
            }
        }
    }
    if t == "$" && next.is_some_and(is_amount_token) {
        return Some((MaskKind::Money, 2));
    }
    if is_money_token(t) {
        return Some((MaskKind::Money, 1));
    }
    // Time, longest first: full-year Y | FY nn | Qn YYYY | single forms
    if t.eq_ignore_ascii_case("full-year") && next.is_some_and(is_year4) {
        return Some((MaskKind::Time, 2));
    }
    if t.eq_ignore_ascii_case("fy")
        && next.is_some_and(|n| (n.len() == 2 || n.len() == 4) && is_digits(n))
    {
        return Some((MaskKind::Time, 2));
    }
    if is_quarter(t) && next.is_some_and(is_year4) {
        return Some((MaskKind::Time, 2));
    }
    if is_apos_year(t)
        || is_fy_fused(t)
        || is_year4(t)
        || is_fused_quarter(t)
        || is_quarter(t)
        || is_relative_time(t)
    {
        return Some((MaskKind::Time, 1));
    }
    None
}

/// Masks money and time entities, longest match left to right. Bracket
/// words (-LRB-/-RRB-) are normalized in the stream first. A possessive
/// right after a time entity is absorbed into the mask but kept out of
/// the label.
pub fn mask_entities(sentence: &str) -> MaskedSentence {
    let tok = tokenize(sentence);
    let normalized: Vec<&str> =
        tok.tokens.iter().map(|t| normalize_bracket(t.as_str())).collect();
    let token_spans: Vec<Range<usize>> =
        tok.token_spans.iter().map(|s| s.start..s.end).collect();

    let mut tokens = Vec::new();
    let mut spans: Vec<MaskSpan> = Vec::new();
    let mut i = 0;
    while i < normalized.len() {
        match entity_at(&normalized, i) {
            Some((kind, len)) => {
                let label_end_tok = i + len;
                let mut end_tok = label_end_tok;
                if kind == MaskKind::Time {
                    let possessive = normalized
                        .get(end_tok)
                        .is_some_and(|t| *t == "'s" || *t == "\u{2019}s");
                    if possessive {
                        end_tok += 1;
                    }
                }
                let label =
                    sentence[token_spans[i].start..token_spans[label_end_tok - 1].end].to_string();
                let byte_range = token_spans[i].start..token_spans[end_tok - 1].end;
                tokens.push(MaskedToken {
                    text: if kind == MaskKind::Money { MONEY_MARK } else { TIME_MARK }
                        .to_string(),
                    orig_tokens: i..end_tok,
                    span: Some(spans.len()),
                });
                spans.push(MaskSpan { kind, label, byte_range, token_range: i..end_tok });
                i = end_tok;
            }
            None => {
                tokens.push(MaskedToken {
                    text: normalized[i].to_string(),
                    orig_tokens: i..i + 1,
                    span: None,
                });
                i += 1;
            }
        }
    }
    MaskedSentence { original: sentence.to_string(), tokens, spans, token_spans }
}

impl MaskedSentence {
    /// Stream rendering used in tests and reports.
    pub fn stream(&self) -> String {
        let parts: Vec<&str> = self.tokens.iter().map(|t| t.text.as_str()).collect();
        parts.join(" ")
    }

    /// Splices every mask surface back over its byte range. Equality
    /// with the original is the round-trip invariant.
    pub fn unmask(&self) -> String {
        let mut out = String::new();
        let mut cursor = 0;
        for span in &self.spans {
            out.push_str(&self.original[cursor..span.byte_range.start]);
            out.push_str(&self.original[span.byte_range.clone()]);
            cursor = span.byte_range.end;
        }
        out.push_str(&self.original[cursor..]);
        out
    }
}

/// Parses a money surface form; surrounding parentheses mean negative.
pub fn money_value(label: &str) -> Option<f64> {
    let mut s = label.trim();
    let mut negative = false;
    for (open, close) in [("(", ")"), ("-LRB-", "-RRB-")] {
        if let Some(inner) = s.strip_prefix(open).and_then(|r| r.strip_suffix(close)) {
            s = inner.trim();
            negative = true;
            break;
        }
    }
    let s = s.strip_prefix('$').unwrap_or(s).trim().replace(',', "");
    let v: f64 = s.parse().ok()?;
    if !v.is_finite() {
        return None;
    }
    Some(if negative { -v } else { v })
}
