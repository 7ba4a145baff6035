//! The linguistic-metric suite computed over forecast justifications:
//! length and readability, sentiment, hedging/uncertainty, temporal
//! orientation, part-of-speech and connective rates, and an analytical
//! proxy score. Values are per record; [`author_aggregate`] averages
//! them per author.

use crate::error::{Error, Result};
use crate::text::{
    count_syllables, tokenize, Lexicon, PosCategory, PosLexicon, TokenizedText,
};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

/// Every metric the suite reports. Declaration order is presentation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    TokenCount,
    PctOver100Tokens,
    TokensPerSentence,
    Flesch,
    DaleChall,
    SentimentAbs,
    FinPositiveRatio,
    FinNegativeRatio,
    PctUncertainSentences,
    TentativeRate,
    QuotePresence,
    FocuspastRate,
    FocuspresentfutureRate,
    CardinalRate,
    NounRate,
    PrepositionRate,
    PronounRate,
    FirstPersonPronounRate,
    VerbRate,
    ConnectiveComparisonRate,
    ConnectiveContingencyRate,
    ConnectiveExpansionRate,
    ConnectiveTemporalRate,
    AnalyticalScore,
}

impl Metric {
    pub const ALL: [Metric; 24] = [
        Metric::TokenCount,
        Metric::PctOver100Tokens,
        Metric::TokensPerSentence,
        Metric::Flesch,
        Metric::DaleChall,
        Metric::SentimentAbs,
        Metric::FinPositiveRatio,
        Metric::FinNegativeRatio,
        Metric::PctUncertainSentences,
        Metric::TentativeRate,
        Metric::QuotePresence,
        Metric::FocuspastRate,
        Metric::FocuspresentfutureRate,
        Metric::CardinalRate,
        Metric::NounRate,
        Metric::PrepositionRate,
        Metric::PronounRate,
        Metric::FirstPersonPronounRate,
        Metric::VerbRate,
        Metric::ConnectiveComparisonRate,
        Metric::ConnectiveContingencyRate,
        Metric::ConnectiveExpansionRate,
        Metric::ConnectiveTemporalRate,
        Metric::AnalyticalScore,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::TokenCount => "token_count",
            Metric::PctOver100Tokens => "pct_over_100_tokens",
            Metric::TokensPerSentence => "tokens_per_sentence",
            Metric::Flesch => "flesch",
            Metric::DaleChall => "dale_chall",
            Metric::SentimentAbs => "sentiment_abs",
            Metric::FinPositiveRatio => "fin_positive_ratio",
            Metric::FinNegativeRatio => "fin_negative_ratio",
            Metric::PctUncertainSentences => "pct_uncertain_sentences",
            Metric::TentativeRate => "tentative_rate",
            Metric::QuotePresence => "quote_presence",
            Metric::FocuspastRate => "focuspast_rate",
            Metric::FocuspresentfutureRate => "focuspresentfuture_rate",
            Metric::CardinalRate => "cardinal_rate",
            Metric::NounRate => "noun_rate",
            Metric::PrepositionRate => "preposition_rate",
            Metric::PronounRate => "pronoun_rate",
            Metric::FirstPersonPronounRate => "first_person_pronoun_rate",
            Metric::VerbRate => "verb_rate",
            Metric::ConnectiveComparisonRate => "connective_comparison_rate",
            Metric::ConnectiveContingencyRate => "connective_contingency_rate",
            Metric::ConnectiveExpansionRate => "connective_expansion_rate",
            Metric::ConnectiveTemporalRate => "connective_temporal_rate",
            Metric::AnalyticalScore => "analytical_score",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Metric> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown metric {s:?}")))
    }
}

/// Named metric values; metrics undefined on the input are absent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricVector {
    values: BTreeMap<Metric, f64>,
}

impl MetricVector {
    pub fn get(&self, m: Metric) -> Option<f64> {
        self.values.get(&m).copied()
    }

    pub fn insert(&mut self, m: Metric, v: f64) {
        self.values.insert(m, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, f64)> + '_ {
        self.values.iter().map(|(&m, &v)| (m, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Negations that flip a following sentiment word's sign.
pub const NEGATORS: [&str; 6] = ["not", "n't", "no", "never", "neither", "nor"];

/// All lexicons the suite needs, bundled or loaded from a directory.
pub struct MetricLexicons {
    pub hedges: Lexicon,
    pub tentative: Lexicon,
    pub temporal: Lexicon,
    pub connectives: Lexicon,
    pub sentiment: Lexicon,
    pub fin_sentiment: Lexicon,
    pub intensifiers: Lexicon,
    pub easy_words: HashSet<String>,
    pub pos: &'static PosLexicon,
}

const LEXICON_FILES: [(&str, &str); 7] = [
    ("hedge_cues.txt", include_str!("../data/hedge_cues.txt")),
    ("tentative.txt", include_str!("../data/tentative.txt")),
    ("temporal.txt", include_str!("../data/temporal.txt")),
    ("connectives.txt", include_str!("../data/connectives.txt")),
    ("sentiment.txt", include_str!("../data/sentiment.txt")),
    ("financial_sentiment.txt", include_str!("../data/financial_sentiment.txt")),
    ("intensifiers.txt", include_str!("../data/intensifiers.txt")),
];

const EASY_WORDS_FILE: &str = "easy_words.txt";

fn parse_easy_words(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

impl MetricLexicons {
    /// The self-contained bundled lexicons.
    pub fn bundled() -> &'static MetricLexicons {
        static BUNDLED: OnceLock<MetricLexicons> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            let lex = |i: usize| {
                let (name, text) = LEXICON_FILES[i];
                Lexicon::parse(name, text).expect("bundled lexicon parses")
            };
            MetricLexicons {
                hedges: lex(0),
                tentative: lex(1),
                temporal: lex(2),
                connectives: lex(3),
                sentiment: lex(4),
                fin_sentiment: lex(5),
                intensifiers: lex(6),
                easy_words: parse_easy_words(include_str!("../data/easy_words.txt")),
                pos: PosLexicon::bundled(),
            }
        })
    }

    /// Load lexicons from a directory by canonical filename; files not
    /// present fall back to the bundled version.
    pub fn from_dir(dir: &Path) -> Result<MetricLexicons> {
        let load = |i: usize| -> Result<Lexicon> {
            let (name, bundled) = LEXICON_FILES[i];
            let path = dir.join(name);
            if path.exists() {
                Lexicon::from_file(&path)
            } else {
                Lexicon::parse(name, bundled)
            }
        };
        let easy_path = dir.join(EASY_WORDS_FILE);
        let easy_words = if easy_path.exists() {
            parse_easy_words(
                &std::fs::read_to_string(&easy_path).map_err(|e| Error::io(&easy_path, e))?,
            )
        } else {
            parse_easy_words(include_str!("../data/easy_words.txt"))
        };
        Ok(MetricLexicons {
            hedges: load(0)?,
            tentative: load(1)?,
            temporal: load(2)?,
            connectives: load(3)?,
            sentiment: load(4)?,
            fin_sentiment: load(5)?,
            intensifiers: load(6)?,
            easy_words,
            pos: PosLexicon::bundled(),
        })
    }
}

fn word_stats(tok: &TokenizedText) -> (usize, usize) {
    let words = tok.words().count();
    (words, tok.n_sentences())
}

/// 206.835 − 1.015·(words/sentences) − 84.6·(syllables/words).
pub fn flesch_reading_ease(tok: &TokenizedText) -> Result<f64> {
    let (words, sentences) = word_stats(tok);
    if words == 0 || sentences == 0 {
        return Err(Error::Undefined("flesch needs at least one word and sentence"));
    }
    let syllables: u32 = tok.words().map(|w| count_syllables(w).unwrap_or(1)).sum();
    Ok(206.835
        - 1.015 * (words as f64 / sentences as f64)
        - 84.6 * (f64::from(syllables) / words as f64))
}

/// 0.1579·(% difficult words) + 0.0496·(words/sentences), plus 3.6365
/// when more than 5% of words are difficult (absent from the easy list).
pub fn dale_chall(tok: &TokenizedText, easy_words: &HashSet<String>) -> Result<f64> {
    let (words, sentences) = word_stats(tok);
    if words == 0 || sentences == 0 {
        return Err(Error::Undefined("dale_chall needs at least one word and sentence"));
    }
    let difficult = tok.words().filter(|w| !easy_words.contains(&w.to_lowercase())).count();
    let pct_difficult = 100.0 * difficult as f64 / words as f64;
    let mut score = 0.1579 * pct_difficult + 0.0496 * (words as f64 / sentences as f64);
    if pct_difficult > 5.0 {
        score += 3.6365;
    }
    Ok(score)
}

/// |sum of word scores|, a negator within the 2 tokens before a scored
/// word flipping its sign and an intensifier immediately before scaling
/// it (scale first, then flip).
pub fn sentiment_strength(
    tok: &TokenizedText,
    sentiment: &Lexicon,
    intensifiers: &Lexicon,
) -> f64 {
    let lower: Vec<String> = tok.tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut sum = 0.0;
    for (i, tok_lower) in lower.iter().enumerate() {
        let Some(entry) = sentiment.lookup(tok_lower) else { continue };
        let mut eff = entry.score.unwrap_or(0.0);
        if i >= 1 {
            if let Some(intens) = intensifiers.lookup(&lower[i - 1]) {
                eff *= intens.score.unwrap_or(1.0);
            }
        }
        let window = &lower[i.saturating_sub(2)..i];
        if window.iter().any(|w| NEGATORS.contains(&w.as_str())) {
            eff = -eff;
        }
        sum += eff;
    }
    sum.abs()
}

/// Positive and negative financial-term counts over total tokens.
pub fn financial_sentiment(tok: &TokenizedText, fin: &Lexicon) -> Result<(f64, f64)> {
    let n = tok.n_tokens();
    if n == 0 {
        return Err(Error::Undefined("financial_sentiment needs tokens"));
    }
    let m = fin.match_tokens(&tok.tokens);
    Ok((m.count("positive") as f64 / n as f64, m.count("negative") as f64 / n as f64))
}

/// Fraction of sentences containing at least one hedge cue.
pub fn uncertainty_rate(tok: &TokenizedText, hedges: &Lexicon) -> Result<f64> {
    if tok.n_sentences() == 0 {
        return Err(Error::Undefined("uncertainty_rate needs sentences"));
    }
    let uncertain = tok
        .sentence_ranges()
        .into_iter()
        .filter(|r| {
            tok.tokens[r.clone()].iter().any(|t| hedges.lookup(&t.to_lowercase()).is_some())
        })
        .count();
    Ok(uncertain as f64 / tok.n_sentences() as f64)
}

/// 1.0 when the text contains any quoted span.
pub fn quote_presence(tok: &TokenizedText) -> f64 {
    if tok.quote_spans.is_empty() {
        0.0
    } else {
        1.0
    }
}

/// Per-token rates for the four connective categories
/// (comparison, contingency, expansion, temporal).
pub fn connective_rates(tok: &TokenizedText, connectives: &Lexicon) -> Result<[f64; 4]> {
    let n = tok.n_tokens();
    if n == 0 {
        return Err(Error::Undefined("connective_rates needs tokens"));
    }
    let m = connectives.match_tokens(&tok.tokens);
    let rate = |c: &str| m.count(c) as f64 / n as f64;
    Ok([rate("comparison"), rate("contingency"), rate("expansion"), rate("temporal")])
}

/// Per-token rates of past-focus and combined present/future-focus terms.
pub fn temporal_orientation(tok: &TokenizedText, temporal: &Lexicon) -> Result<(f64, f64)> {
    let n = tok.n_tokens();
    if n == 0 {
        return Err(Error::Undefined("temporal_orientation needs tokens"));
    }
    let m = temporal.match_tokens(&tok.tokens);
    let past = m.count("focuspast") as f64 / n as f64;
    let pf = (m.count("focuspresent") + m.count("focusfuture")) as f64 / n as f64;
    Ok((past, pf))
}

fn tag_tokens(tok: &TokenizedText, pos: &PosLexicon) -> Vec<PosCategory> {
    let mut initial = vec![false; tok.n_tokens()];
    for r in tok.sentence_ranges() {
        if r.start < initial.len() {
            initial[r.start] = true;
        }
    }
    tok.tokens
        .iter()
        .enumerate()
        .map(|(i, t)| crate::text::pos_categorize(t, initial[i], pos))
        .collect()
}

/// Per-token rates in the fixed order cardinal, noun, preposition,
/// pronoun, first-person pronoun, verb.
pub fn pos_rates_from_tags(tags: &[PosCategory]) -> Result<[f64; 6]> {
    if tags.is_empty() {
        return Err(Error::Undefined("pos_rates needs tokens"));
    }
    let n = tags.len() as f64;
    let count = |c: PosCategory| tags.iter().filter(|&&t| t == c).count() as f64 / n;
    Ok([
        count(PosCategory::Cardinal),
        count(PosCategory::Noun),
        count(PosCategory::Preposition),
        count(PosCategory::Pronoun),
        count(PosCategory::FirstPersonPronoun),
        count(PosCategory::Verb),
    ])
}

pub fn pos_rates(tok: &TokenizedText, pos: &PosLexicon) -> Result<[f64; 6]> {
    pos_rates_from_tags(&tag_tokens(tok, pos))
}

/// Documented proxy for analytical style: (article + preposition rates)
/// minus (pronoun + auxiliary-verb + negation rates), rescaled from
/// [−1,1] to [0,100]. Not the proprietary composite it stands in for.
pub fn analytical_score(tok: &TokenizedText, pos: &PosLexicon) -> Result<f64> {
    let n = tok.n_tokens();
    if n == 0 {
        return Err(Error::Undefined("analytical_score needs tokens"));
    }
    let tags = tag_tokens(tok, pos);
    let mut articles = 0usize;
    let mut aux = 0usize;
    let mut negations = 0usize;
    for t in &tok.tokens {
        let lower = t.to_lowercase();
        if matches!(lower.as_str(), "a" | "an" | "the") {
            articles += 1;
        }
        if crate::text::pos::is_aux_verb(&lower) {
            aux += 1;
        }
        if NEGATORS.contains(&lower.as_str()) {
            negations += 1;
        }
    }
    let pronouns = tags
        .iter()
        .filter(|t| matches!(t, PosCategory::Pronoun | PosCategory::FirstPersonPronoun))
        .count();
    let prepositions = tags.iter().filter(|&&t| t == PosCategory::Preposition).count();
    let nf = n as f64;
    let raw = (articles + prepositions) as f64 / nf - (pronouns + aux + negations) as f64 / nf;
    Ok((50.0 * (raw + 1.0)).clamp(0.0, 100.0))
}

/// Compute every per-record metric that is defined on this text.
pub fn compute_record_metrics(text: &str, lex: &MetricLexicons) -> MetricVector {
    let tok = tokenize(text);
    let mut v = MetricVector::default();
    v.insert(Metric::TokenCount, tok.n_tokens() as f64);
    v.insert(Metric::QuotePresence, quote_presence(&tok));
    if tok.n_sentences() > 0 && tok.n_tokens() > 0 {
        v.insert(Metric::TokensPerSentence, tok.n_tokens() as f64 / tok.n_sentences() as f64);
    }
    if let Ok(x) = flesch_reading_ease(&tok) {
        v.insert(Metric::Flesch, x);
    }
    if let Ok(x) = dale_chall(&tok, &lex.easy_words) {
        v.insert(Metric::DaleChall, x);
    }
    v.insert(Metric::SentimentAbs, sentiment_strength(&tok, &lex.sentiment, &lex.intensifiers));
    if let Ok((pos_ratio, neg_ratio)) = financial_sentiment(&tok, &lex.fin_sentiment) {
        v.insert(Metric::FinPositiveRatio, pos_ratio);
        v.insert(Metric::FinNegativeRatio, neg_ratio);
    }
    if let Ok(x) = uncertainty_rate(&tok, &lex.hedges) {
        v.insert(Metric::PctUncertainSentences, x);
    }
    if tok.n_tokens() > 0 {
        let m = lex.tentative.match_tokens(&tok.tokens);
        v.insert(Metric::TentativeRate, m.total() as f64 / tok.n_tokens() as f64);
    }
    if let Ok((past, pf)) = temporal_orientation(&tok, &lex.temporal) {
        v.insert(Metric::FocuspastRate, past);
        v.insert(Metric::FocuspresentfutureRate, pf);
    }
    if let Ok(rates) = pos_rates(&tok, lex.pos) {
        let metrics = [
            Metric::CardinalRate,
            Metric::NounRate,
            Metric::PrepositionRate,
            Metric::PronounRate,
            Metric::FirstPersonPronounRate,
            Metric::VerbRate,
        ];
        for (m, r) in metrics.into_iter().zip(rates) {
            v.insert(m, r);
        }
    }
    if let Ok(rates) = connective_rates(&tok, &lex.connectives) {
        let metrics = [
            Metric::ConnectiveComparisonRate,
            Metric::ConnectiveContingencyRate,
            Metric::ConnectiveExpansionRate,
            Metric::ConnectiveTemporalRate,
        ];
        for (m, r) in metrics.into_iter().zip(rates) {
            v.insert(m, r);
        }
    }
    if let Ok(x) = analytical_score(&tok, lex.pos) {
        v.insert(Metric::AnalyticalScore, x);
    }
    v
}

/// Unweighted per-metric mean over a single author's records, skipping
/// records where a metric is undefined; `pct_over_100_tokens` is the
/// fraction of records with at least 100 tokens.
pub fn author_aggregate(records: &[MetricVector]) -> Result<MetricVector> {
    if records.is_empty() {
        return Err(Error::Data("author_aggregate: no records".into()));
    }
    let mut out = MetricVector::default();
    for metric in Metric::ALL {
        if metric == Metric::PctOver100Tokens {
            let over = records
                .iter()
                .filter(|v| v.get(Metric::TokenCount).is_some_and(|t| t >= 100.0))
                .count();
            out.insert(metric, over as f64 / records.len() as f64);
            continue;
        }
        let present: Vec<f64> = records.iter().filter_map(|v| v.get(metric)).collect();
        if !present.is_empty() {
            out.insert(metric, present.iter().sum::<f64>() / present.len() as f64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> &'static MetricLexicons {
        MetricLexicons::bundled()
    }

    #[test]
    fn flesch_fixture() {
        let tok = tokenize("Go .");
        let x = flesch_reading_ease(&tok).unwrap();
        assert!((x - 121.22).abs() < 1e-9, "{x}");
        assert!(flesch_reading_ease(&tokenize("")).is_err());
    }

    #[test]
    fn flesch_ratio_invariance_and_monotonicity() {
        let one = flesch_reading_ease(&tokenize("The cat sat on the mat .")).unwrap();
        let two =
            flesch_reading_ease(&tokenize("The cat sat on the mat . The cat sat on the mat ."))
                .unwrap();
        assert!((one - two).abs() < 1e-9);

        let short = flesch_reading_ease(&tokenize("The plan was good and fair .")).unwrap();
        let long = flesch_reading_ease(&tokenize("The proposal was adequate and equitable ."))
            .unwrap();
        assert!(long < short);
    }

    #[test]
    fn dale_chall_fixtures() {
        let ten_words = "the dog and the cat ran to the big tree .";
        let tok = tokenize(ten_words);
        assert_eq!(tok.words().count(), 10);

        let all_easy: HashSet<String> =
            tok.words().map(|w| w.to_lowercase()).collect();
        let x = dale_chall(&tok, &all_easy).unwrap();
        assert!((x - 0.496).abs() < 1e-9, "{x}");

        // Same shape with every word off-list: 100% difficult.
        let empty = HashSet::new();
        let x = dale_chall(&tok, &empty).unwrap();
        let expected = 0.1579 * 100.0 + 0.0496 * 10.0 + 3.6365;
        assert!((x - expected).abs() < 1e-9, "{x}");
        assert!((x - 19.9225).abs() < 1e-9, "{x}");
    }

    #[test]
    fn sentiment_modifiers() {
        let l = lex();
        let strength = |t: &str| sentiment_strength(&tokenize(t), &l.sentiment, &l.intensifiers);
        assert_eq!(strength("nothing scored here"), 0.0);
        assert_eq!(strength("good"), 3.0);
        assert_eq!(strength("not good"), 3.0); // |-3|
        assert!((strength("very good") - 3.75).abs() < 1e-12);
        assert!((strength("not very good") - 3.75).abs() < 1e-12);
        // Mixed signs cancel inside the sum before the absolute value.
        assert_eq!(strength("good and bad"), 0.0);
    }

    #[test]
    fn financial_ratios() {
        let l = lex();
        let tok = tokenize("gains offset the weak quarter badly here today");
        let n = tok.n_tokens() as f64;
        let (p, ng) = financial_sentiment(&tok, &l.fin_sentiment).unwrap();
        assert!((p - 1.0 / n).abs() < 1e-12);
        assert!((ng - 1.0 / n).abs() < 1e-12);
        assert!(financial_sentiment(&tokenize(""), &l.fin_sentiment).is_err());
    }

    #[test]
    fn uncertainty_table_sentences() {
        let l = lex();
        let uncertain = "It seems unlikely that the court would transfer the terms of that \
             contract to Uber .";
        assert_eq!(uncertainty_rate(&tokenize(uncertain), &l.hedges).unwrap(), 1.0);

        let certain = "To date , Toyota has distributed only 100 of the 300 Mirais preordered \
             in California ...";
        assert_eq!(uncertainty_rate(&tokenize(certain), &l.hedges).unwrap(), 0.0);

        let half = format!("{uncertain} {certain}");
        assert_eq!(uncertainty_rate(&tokenize(&half), &l.hedges).unwrap(), 0.5);
    }

    #[test]
    fn temporal_focus_tokens() {
        let l = lex();
        let tok = tokenize("ago");
        let (past, _) = temporal_orientation(&tok, &l.temporal).unwrap();
        assert_eq!(past, 1.0);
        let tok = tokenize("will soon");
        let (_, pf) = temporal_orientation(&tok, &l.temporal).unwrap();
        assert_eq!(pf, 1.0);
    }

    #[test]
    fn connective_single_token() {
        let l = lex();
        let rates = connective_rates(&tokenize("however"), &l.connectives).unwrap();
        assert_eq!(rates[0], 1.0);
        assert_eq!(rates[1] + rates[2] + rates[3], 0.0);
    }

    #[test]
    fn first_person_rate() {
        let rates = pos_rates(&tokenize("I think"), PosLexicon::bundled()).unwrap();
        assert_eq!(rates[4], 0.5);
    }

    #[test]
    fn analytical_bounds_and_direction() {
        let p = PosLexicon::bundled();
        let formal = analytical_score(&tokenize("the review of the plan in the report"), p).unwrap();
        let personal = analytical_score(&tokenize("I think they will not do it"), p).unwrap();
        assert!(formal > personal);
        for text in ["the of in at", "I me my not never"] {
            let s = analytical_score(&tokenize(text), p).unwrap();
            assert!((0.0..=100.0).contains(&s));
        }
    }

    #[test]
    fn record_metrics_rate_bounds() {
        let v = compute_record_metrics(
            "It seems likely the market will improve . However , we expected losses last year .",
            lex(),
        );
        for (m, x) in v.iter() {
            match m {
                Metric::TokenCount | Metric::Flesch | Metric::DaleChall | Metric::SentimentAbs
                | Metric::TokensPerSentence => {}
                Metric::AnalyticalScore => assert!((0.0..=100.0).contains(&x)),
                _ => assert!((0.0..=1.0).contains(&x), "{m} = {x}"),
            }
        }
        assert!(v.get(Metric::PctUncertainSentences).unwrap() > 0.0);
    }

    #[test]
    fn empty_text_only_counts() {
        let v = compute_record_metrics("", lex());
        assert_eq!(v.get(Metric::TokenCount), Some(0.0));
        assert_eq!(v.get(Metric::QuotePresence), Some(0.0));
        assert_eq!(v.get(Metric::Flesch), None);
        assert_eq!(v.get(Metric::TokensPerSentence), None);
    }

    #[test]
    fn aggregate_means_and_token_fraction() {
        let mut a = MetricVector::default();
        a.insert(Metric::TokenCount, 40.0);
        a.insert(Metric::Flesch, 80.0);
        let mut b = MetricVector::default();
        b.insert(Metric::TokenCount, 120.0);
        // Flesch undefined on b: excluded from that metric's mean only.
        let agg = author_aggregate(&[a.clone(), b]).unwrap();
        assert_eq!(agg.get(Metric::TokenCount), Some(80.0));
        assert_eq!(agg.get(Metric::PctOver100Tokens), Some(0.5));
        assert_eq!(agg.get(Metric::Flesch), Some(80.0));

        let single = author_aggregate(&[a.clone()]).unwrap();
        assert_eq!(single.get(Metric::TokenCount), a.get(Metric::TokenCount));
        assert!(author_aggregate(&[]).is_err());
    }

    #[test]
    fn aggregate_permutation_and_duplication() {
        let texts = [
            "It seems likely the index will rise before June .",
            "The report was weak and the outlook is unclear .",
            "Results improved since last year , however margins fell .",
        ];
        let vs: Vec<MetricVector> =
            texts.iter().map(|t| compute_record_metrics(t, lex())).collect();
        let fwd = author_aggregate(&vs).unwrap();
        let mut rev = vs.clone();
        rev.reverse();
        let bwd = author_aggregate(&rev).unwrap();
        for (m, x) in fwd.iter() {
            let y = bwd.get(m).unwrap();
            assert!((x - y).abs() < 1e-12, "{m}");
        }

        // Duplicating every record leaves per-record means unchanged.
        let mut doubled = vs.clone();
        doubled.extend(vs.iter().cloned());
        let dup = author_aggregate(&doubled).unwrap();
        for (m, x) in fwd.iter() {
            assert!((dup.get(m).unwrap() - x).abs() < 1e-12, "{m}");
        }
    }

    #[test]
    fn no_hedges_means_zero_uncertainty() {
        let v = compute_record_metrics(
            "The committee published its findings on schedule last week .",
            lex(),
        );
        assert_eq!(v.get(Metric::PctUncertainSentences), Some(0.0));
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("bogus".parse::<Metric>().is_err());
    }
}
