//! Seeded synthetic corpus generator. Plants a known skill level per
//! author, drives estimate noise and linguistic cue densities from it
//! with configured linear slopes, and emits the ground truth alongside.
//! Everything is a deterministic function of the seed: questions come
//! from stream 0 of the generator, author a from stream a+1.

use crate::corpus::{DomainTag, ForecastRecord};
use crate::error::{Error, Result};
use chrono::{Duration, TimeZone, Utc};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_authors: usize,
    /// Inclusive range of forecasts per author.
    pub forecasts_per_author: (usize, usize),
    /// Shared question pool; outcomes are drawn once per question.
    pub n_questions: usize,
    /// Estimate noise scale; an author's noise is (1−skill)·N(0,σ).
    pub noise_sigma: f64,
    /// Per-sentence hedge-cue probability: base + slope·skill.
    pub hedge_base: f64,
    pub hedge_slope: f64,
    /// Per-sentence sentiment-word probability: base + slope·skill.
    pub sent_base: f64,
    pub sent_slope: f64,
    /// Target justification length in tokens: base + slope·skill.
    pub length_base: f64,
    pub length_slope: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_authors: 200,
            forecasts_per_author: (50, 50),
            n_questions: 100,
            noise_sigma: 0.2,
            hedge_base: 0.2,
            hedge_slope: 0.5,
            sent_base: 0.5,
            sent_slope: -0.3,
            length_base: 30.0,
            length_slope: 40.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_authors == 0 || self.n_questions == 0 {
            return Err(Error::Config("n_authors and n_questions must be positive".into()));
        }
        let (lo, hi) = self.forecasts_per_author;
        if lo == 0 || lo > hi {
            return Err(Error::Config(format!("bad forecasts_per_author range {lo}..={hi}")));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(Error::Config(format!("noise_sigma {} invalid", self.noise_sigma)));
        }
        // Linear cue probabilities must stay valid across skill in [0,1].
        for (name, base, slope) in [
            ("hedge", self.hedge_base, self.hedge_slope),
            ("sent", self.sent_base, self.sent_slope),
        ] {
            for p in [base, base + slope] {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::Config(format!(
                        "{name} probability {p} leaves [0,1] over the skill range"
                    )));
                }
            }
        }
        for len in [self.length_base, self.length_base + self.length_slope] {
            if !len.is_finite() || len < 5.0 {
                return Err(Error::Config(format!("target length {len} below 5 tokens")));
            }
        }
        Ok(())
    }
}

/// Sentence skeletons plus slot fillers, by cue content.
#[derive(Debug, Clone)]
pub struct TemplateBank {
    pub plain: Vec<String>,
    pub hedge: Vec<String>,
    pub sent: Vec<String>,
    pub hedge_sent: Vec<String>,
    pub nouns: Vec<String>,
    pub hedgewords: Vec<String>,
    pub sentwords: Vec<String>,
}

impl TemplateBank {
    pub fn parse(input: &str, file: &str) -> Result<TemplateBank> {
        let mut bank = TemplateBank {
            plain: Vec::new(),
            hedge: Vec::new(),
            sent: Vec::new(),
            hedge_sent: Vec::new(),
            nouns: Vec::new(),
            hedgewords: Vec::new(),
            sentwords: Vec::new(),
        };
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (kind, text) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(file, lineno, "expected kind<TAB>text"))?;
            let text = text.trim().to_string();
            if text.is_empty() {
                return Err(Error::parse(file, lineno, "empty template text"));
            }
            let (wants_hedge, wants_sent, list) = match kind {
                "plain" => (false, false, &mut bank.plain),
                "hedge" => (true, false, &mut bank.hedge),
                "sent" => (false, true, &mut bank.sent),
                "hedge_sent" => (true, true, &mut bank.hedge_sent),
                "noun" => (false, false, &mut bank.nouns),
                "hedgeword" => (false, false, &mut bank.hedgewords),
                "sentword" => (false, false, &mut bank.sentwords),
                other => {
                    return Err(Error::parse(file, lineno, format!("unknown kind `{other}`")))
                }
            };
            if matches!(kind, "plain" | "hedge" | "sent" | "hedge_sent") {
                if text.contains("{HEDGE}") != wants_hedge {
                    return Err(Error::parse(file, lineno, "skeleton kind and {HEDGE} slot disagree"));
                }
                if text.contains("{SENT}") != wants_sent {
                    return Err(Error::parse(file, lineno, "skeleton kind and {SENT} slot disagree"));
                }
            }
            list.push(text);
        }
        for (name, list) in [
            ("plain", &bank.plain),
            ("hedge", &bank.hedge),
            ("sent", &bank.sent),
            ("hedge_sent", &bank.hedge_sent),
            ("noun", &bank.nouns),
            ("hedgeword", &bank.hedgewords),
            ("sentword", &bank.sentwords),
        ] {
            if list.is_empty() {
                return Err(Error::parse(file, 0, format!("no `{name}` entries")));
            }
        }
        Ok(bank)
    }

    pub fn load(path: &Path) -> Result<TemplateBank> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TemplateBank::parse(&text, &path.display().to_string())
    }

    pub fn bundled() -> &'static TemplateBank {
        static BANK: OnceLock<TemplateBank> = OnceLock::new();
        BANK.get_or_init(|| {
            TemplateBank::parse(include_str!("../data/templates.txt"), "templates.txt")
                .expect("bundled template bank must parse")
        })
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, list: &'a [String]) -> &'a str {
    &list[rng.random_range(0..list.len())]
}

fn render_sentence(rng: &mut ChaCha8Rng, bank: &TemplateBank, hedged: bool, sentimental: bool) -> String {
    let skeleton = match (hedged, sentimental) {
        (true, true) => pick(rng, &bank.hedge_sent),
        (true, false) => pick(rng, &bank.hedge),
        (false, true) => pick(rng, &bank.sent),
        (false, false) => pick(rng, &bank.plain),
    };
    let mut s = skeleton.to_string();
    while s.contains("{NOUN}") {
        s = s.replacen("{NOUN}", pick(rng, &bank.nouns), 1);
    }
    while s.contains("{HEDGE}") {
        s = s.replacen("{HEDGE}", pick(rng, &bank.hedgewords), 1);
    }
    while s.contains("{SENT}") {
        s = s.replacen("{SENT}", pick(rng, &bank.sentwords), 1);
    }
    s
}

fn justification(rng: &mut ChaCha8Rng, bank: &TemplateBank, skill: f64, cfg: &SynthConfig) -> String {
    let hedge_p = cfg.hedge_base + cfg.hedge_slope * skill;
    let sent_p = cfg.sent_base + cfg.sent_slope * skill;
    let target = cfg.length_base + cfg.length_slope * skill;
    let mut sentences = Vec::new();
    let mut tokens = 0usize;
    while (tokens as f64) < target {
        let hedged = rng.random::<f64>() < hedge_p;
        let sentimental = rng.random::<f64>() < sent_p;
        let s = render_sentence(rng, bank, hedged, sentimental);
        tokens += s.split_whitespace().count();
        sentences.push(s);
    }
    sentences.join(" ")
}

struct Question {
    p: f64,
    outcome: u8,
}

fn question_pool(cfg: &SynthConfig) -> Vec<Question> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0);
    (0..cfg.n_questions)
        .map(|_| {
            let p = rng.random::<f64>();
            let outcome = u8::from(rng.random::<f64>() < p);
            Question { p, outcome }
        })
        .collect()
}

/// Generates the corpus and the author→skill ground truth.
pub fn generate_corpus(
    cfg: &SynthConfig,
    bank: &TemplateBank,
) -> Result<(Vec<ForecastRecord>, BTreeMap<String, f64>)> {
    cfg.validate()?;
    let questions = question_pool(cfg);
    let base_time = Utc.with_ymd_and_hms(2016, 1, 1, 0, 0, 0).unwrap();

    let per_author: Vec<(Vec<ForecastRecord>, f64)> = (0..cfg.n_authors)
        .into_par_iter()
        .map(|a| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(a as u64 + 1);
            let author_id = format!("a{a:04}");
            let skill = rng.random::<f64>();
            let (lo, hi) = cfg.forecasts_per_author;
            let n_forecasts = rng.random_range(lo..=hi);
            let normal = if cfg.noise_sigma > 0.0 {
                Some(Normal::new(0.0, cfg.noise_sigma).expect("validated sigma"))
            } else {
                None
            };
            let mut records = Vec::with_capacity(n_forecasts);
            for f in 0..n_forecasts {
                let qi = rng.random_range(0..questions.len());
                let eps = normal.as_ref().map_or(0.0, |n| n.sample(&mut rng));
                let estimate = (questions[qi].p + (1.0 - skill) * eps).clamp(0.0, 1.0);
                let text = justification(&mut rng, bank, skill, cfg);
                records.push(ForecastRecord {
                    record_id: format!("{author_id}-f{f:04}"),
                    author_id: author_id.clone(),
                    target_id: format!("q{qi:04}"),
                    timestamp: base_time + Duration::days(f as i64) + Duration::minutes(a as i64),
                    estimate,
                    justification: text,
                    outcome: Some(f64::from(questions[qi].outcome)),
                    domain_tag: DomainTag::Binary,
                });
            }
            (records, skill)
        })
        .collect();

    let mut records = Vec::new();
    let mut truth = BTreeMap::new();
    for (a, (recs, skill)) in per_author.into_iter().enumerate() {
        truth.insert(format!("a{a:04}"), skill);
        records.extend(recs);
    }
    Ok((records, truth))
}

/// Corpus as JSON lines, one record per line, in record order.
pub fn records_to_jsonl(records: &[ForecastRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        let line = serde_json::to_string(r)
            .map_err(|e| Error::Data(format!("serialize {}: {e}", r.record_id)))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Truth sidecar: author_id<TAB>skill per line.
pub fn truth_to_tsv(truth: &BTreeMap<String, f64>) -> String {
    let mut out = String::new();
    for (author, skill) in truth {
        out.push_str(&format!("{author}\t{skill}\n"));
    }
    out
}

pub fn load_truth(path: &Path) -> Result<BTreeMap<String, f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file = path.display().to_string();
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (author, skill) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(&file, lineno, "expected author_id<TAB>skill"))?;
        let v: f64 = skill
            .trim()
            .parse()
            .map_err(|_| Error::parse(&file, lineno, format!("bad skill `{skill}`")))?;
        if out.insert(author.to_string(), v).is_some() {
            return Err(Error::parse(&file, lineno, format!("duplicate author `{author}`")));
        }
    }
    Ok(out)
}
