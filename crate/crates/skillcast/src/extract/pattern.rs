//! Lexico-syntactic extraction patterns over masked token streams.
//! A pattern line is `tokens => (TIME1,MONEY1)(TIME2,MONEY2)...` where
//! tokens are literals, <TIME>, <MONEY>, or named skip slots such as
//! <BY-MASK> that bridge 1..=8 arbitrary stream tokens.

use super::mask::{MaskKind, MaskedSentence, MONEY_MARK, TIME_MARK};
use crate::error::{Error, Result};

pub const SKIP_MIN: usize = 1;
pub const SKIP_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternToken {
    Literal(String),
    Time,
    Money,
    Skip(String),
}

#[derive(Debug, Clone)]
pub struct Pattern {
    /// 1-based position in the pattern file.
    pub id: usize,
    pub tokens: Vec<PatternToken>,
    /// (TIME ordinal, MONEY ordinal), both 1-based over explicit slots.
    pub emissions: Vec<(usize, usize)>,
}

fn parse_emissions(rule: &str, file: &str, lineno: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let compact: String = rule.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| Error::parse(file, lineno, format!("bad emission rule `{rule}`")))?;
        let (body, tail) = inner;
        let (t, m) = body
            .split_once(',')
            .ok_or_else(|| Error::parse(file, lineno, format!("bad emission group `{body}`")))?;
        let ti: usize = t
            .strip_prefix("TIME")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::parse(file, lineno, format!("bad TIME reference `{t}`")))?;
        let mi: usize = m
            .strip_prefix("MONEY")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::parse(file, lineno, format!("bad MONEY reference `{m}`")))?;
        out.push((ti, mi));
        rest = tail;
    }
    if out.is_empty() {
        return Err(Error::parse(file, lineno, "emission rule is empty"));
    }
    Ok(out)
}

/// Parses pattern text; `file` names the source in error messages.
pub fn parse_patterns(input: &str, file: &str) -> Result<Vec<Pattern>> {
    let mut out = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lhs, rule) = line
            .split_once("=>")
            .ok_or_else(|| Error::parse(file, lineno, "missing `=>` emission rule"))?;
        let mut tokens = Vec::new();
        let mut n_time = 0;
        let mut n_money = 0;
        for tok in lhs.split_whitespace() {
            let parsed = if tok == TIME_MARK {
                n_time += 1;
                PatternToken::Time
            } else if tok == MONEY_MARK {
                n_money += 1;
                PatternToken::Money
            } else if let Some(name) =
                tok.strip_prefix('<').and_then(|t| t.strip_suffix("-MASK>"))
            {
                if name.is_empty() {
                    return Err(Error::parse(file, lineno, "skip slot has no name"));
                }
                PatternToken::Skip(name.to_string())
            } else if tok.starts_with('<') && tok.ends_with('>') {
                return Err(Error::parse(file, lineno, format!("unknown slot `{tok}`")));
            } else {
                PatternToken::Literal(tok.to_string())
            };
            tokens.push(parsed);
        }
        if tokens.is_empty() {
            return Err(Error::parse(file, lineno, "pattern has no tokens"));
        }
        let emissions = parse_emissions(rule, file, lineno)?;
        for &(t, m) in &emissions {
            if t == 0 || t > n_time || m == 0 || m > n_money {
                return Err(Error::parse(
                    file,
                    lineno,
                    format!("emission (TIME{t},MONEY{m}) references a missing slot"),
                ));
            }
        }
        out.push(Pattern { id: out.len() + 1, tokens, emissions });
    }
    if out.is_empty() {
        return Err(Error::parse(file, 0, "no patterns defined"));
    }
    Ok(out)
}

/// Slot bindings of one successful match: span-table indices of the
/// explicit TIME and MONEY slots in pattern order.
#[derive(Debug, Clone)]
pub struct MatchBinding {
    pub times: Vec<usize>,
    pub moneys: Vec<usize>,
    /// Matched region in masked-stream token indices.
    pub stream_range: std::ops::Range<usize>,
}

fn match_from(
    sent: &MaskedSentence,
    pos: usize,
    pat: &[PatternToken],
    times: &mut Vec<usize>,
    moneys: &mut Vec<usize>,
) -> Option<usize> {
    let Some(head) = pat.first() else { return Some(pos) };
    let tok = sent.tokens.get(pos)?;
    match head {
        PatternToken::Literal(lit) => {
            if tok.span.is_none() && tok.text.eq_ignore_ascii_case(lit) {
                match_from(sent, pos + 1, &pat[1..], times, moneys)
            } else {
                None
            }
        }
        PatternToken::Time | PatternToken::Money => {
            let want = if *head == PatternToken::Time { MaskKind::Time } else { MaskKind::Money };
            let span_idx = tok.span?;
            if sent.spans[span_idx].kind != want {
                return None;
            }
            let stack = if want == MaskKind::Time { &mut *times } else { &mut *moneys };
            stack.push(span_idx);
            if let Some(end) = match_from(sent, pos + 1, &pat[1..], times, moneys) {
                return Some(end);
            }
            let stack = if want == MaskKind::Time { times } else { moneys };
            stack.pop();
            None
        }
        PatternToken::Skip(_) => {
            // Shortest bridge first keeps matches tight and deterministic.
            for len in SKIP_MIN..=SKIP_MAX {
                if pos + len > sent.tokens.len() {
                    break;
                }
                if let Some(end) = match_from(sent, pos + len, &pat[1..], times, moneys) {
                    return Some(end);
                }
            }
            None
        }
    }
}

/// All matches of `patterns` over one masked sentence: file order has
/// priority, then left to right, and a stream token is consumed by at
/// most one match.
pub fn match_patterns(sent: &MaskedSentence, patterns: &[Pattern]) -> Vec<(usize, MatchBinding)> {
    let mut claimed = vec![false; sent.tokens.len()];
    let mut found: Vec<(usize, MatchBinding)> = Vec::new();
    for (pi, pat) in patterns.iter().enumerate() {
        let mut pos = 0;
        while pos < sent.tokens.len() {
            let mut times = Vec::new();
            let mut moneys = Vec::new();
            match match_from(sent, pos, &pat.tokens, &mut times, &mut moneys) {
                Some(end) if claimed[pos..end].iter().all(|c| !c) => {
                    claimed[pos..end].iter_mut().for_each(|c| *c = true);
                    found.push((pi, MatchBinding { times, moneys, stream_range: pos..end }));
                    pos = end;
                }
                _ => pos += 1,
            }
        }
    }
    found.sort_by_key(|(_, b)| b.stream_range.start);
    found
}
