//! Bag-of-ngram featurization with optional dense metric features.
//! The vocabulary is built on training text only; n-grams seen fewer
//! than min_count times, and anything unseen at test time, map to UNK.

use crate::error::{Error, Result};
use crate::metrics::{author_aggregate, compute_record_metrics, Metric, MetricLexicons, MetricVector};
use crate::text::tokenize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const UNK: &str = "<UNK>";
const PAD_START: &str = "<s>";
const PAD_END: &str = "</s>";

/// Sparse feature vector, sorted by index, no duplicate indices.
pub type SparseVec = Vec<(usize, f64)>;

/// Surface, readability, sentiment, and uncertainty metrics.
pub const TEXTUAL_METRICS: [Metric; 10] = [
    Metric::TokenCount,
    Metric::PctOver100Tokens,
    Metric::TokensPerSentence,
    Metric::Flesch,
    Metric::DaleChall,
    Metric::SentimentAbs,
    Metric::FinPositiveRatio,
    Metric::FinNegativeRatio,
    Metric::PctUncertainSentences,
    Metric::QuotePresence,
];

/// Word-class, temporal-focus, connective, and analytical-style metrics.
pub const COGNITIVE_METRICS: [Metric; 14] = [
    Metric::TentativeRate,
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

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    pub ngram_sizes: BTreeSet<usize>,
    pub min_count: usize,
    pub use_ngrams: bool,
    pub textual_metrics: bool,
    pub cognitive_metrics: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            ngram_sizes: BTreeSet::from([1, 2]),
            min_count: 2,
            use_ngrams: true,
            textual_metrics: false,
            cognitive_metrics: false,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.use_ngrams && !self.textual_metrics && !self.cognitive_metrics {
            return Err(Error::Config("no feature group enabled".into()));
        }
        if self.use_ngrams && self.ngram_sizes.is_empty() {
            return Err(Error::Config("ngram_sizes is empty".into()));
        }
        if let Some(&n) = self.ngram_sizes.iter().find(|&&n| n == 0 || n > 5) {
            return Err(Error::Config(format!("ngram size {n} outside 1..=5")));
        }
        if self.min_count == 0 {
            return Err(Error::Config("min_count must be at least 1".into()));
        }
        Ok(())
    }

    fn dense_metrics(&self) -> Vec<Metric> {
        let mut out = Vec::new();
        if self.textual_metrics {
            out.extend(TEXTUAL_METRICS);
        }
        if self.cognitive_metrics {
            out.extend(COGNITIVE_METRICS);
        }
        out
    }
}

/// One dense feature with the z-normalization moments fitted on train.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseFeature {
    pub metric: Metric,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    pub config: FeatureConfig,
    /// ngram (tokens space-joined) → dense index 0..V−1, UNK included.
    pub vocabulary: BTreeMap<String, usize>,
    pub dense: Vec<DenseFeature>,
}

/// One classification example: an author or a single note, its texts,
/// and a binary label.
#[derive(Debug, Clone)]
pub struct Example {
    pub id: String,
    pub texts: Vec<String>,
    pub label: u8,
}

fn normalize_token(tok: &str) -> String {
    tok.chars()
        .map(|c| if c.is_ascii_digit() { '0' } else { c })
        .flat_map(|c| c.to_lowercase())
        .collect()
}

/// Sentence-padded n-gram stream; n-grams never cross sentence ends.
fn for_each_ngram(text: &str, sizes: &BTreeSet<usize>, mut f: impl FnMut(String)) {
    let tok = tokenize(text);
    for range in tok.sentence_ranges() {
        let mut stream: Vec<String> = Vec::with_capacity(range.len() + 2);
        stream.push(PAD_START.to_string());
        stream.extend(tok.tokens[range].iter().map(|t| normalize_token(t)));
        stream.push(PAD_END.to_string());
        for &n in sizes {
            if stream.len() < n {
                continue;
            }
            for window in stream.windows(n) {
                f(window.join(" "));
            }
        }
    }
}

fn dense_value(metric: Metric, texts: &[String], lex: &MetricLexicons) -> Option<f64> {
    let vectors: Vec<MetricVector> =
        texts.iter().map(|t| compute_record_metrics(t, lex)).collect();
    author_aggregate(&vectors).ok().and_then(|agg| agg.get(metric))
}

impl FeatureSpace {
    /// Builds vocabulary and dense moments from training examples only.
    pub fn build(train: &[Example], config: FeatureConfig) -> Result<FeatureSpace> {
        config.validate()?;
        let mut vocabulary = BTreeMap::new();
        if config.use_ngrams {
            let mut counts: HashMap<String, u64> = HashMap::new();
            for ex in train {
                for text in &ex.texts {
                    for_each_ngram(text, &config.ngram_sizes, |g| {
                        *counts.entry(g).or_insert(0) += 1;
                    });
                }
            }
            let mut kept: BTreeSet<String> = counts
                .into_iter()
                .filter(|(_, c)| *c >= config.min_count as u64)
                .map(|(g, _)| g)
                .collect();
            kept.insert(UNK.to_string());
            if kept.len() == 1 {
                return Err(Error::Data("empty vocabulary: no n-gram reached min_count".into()));
            }
            vocabulary = kept.into_iter().zip(0..).map(|(g, i)| (g, i)).collect();
        }

        let lex = MetricLexicons::bundled();
        let dense = config
            .dense_metrics()
            .into_iter()
            .map(|metric| {
                let vals: Vec<f64> =
                    train.iter().filter_map(|ex| dense_value(metric, &ex.texts, lex)).collect();
                if vals.is_empty() {
                    return DenseFeature { metric, mean: 0.0, std: 0.0 };
                }
                let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                let var =
                    vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
                DenseFeature { metric, mean, std: var.sqrt() }
            })
            .collect();

        Ok(FeatureSpace { config, vocabulary, dense })
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len() + self.dense.len()
    }

    /// SHA-256 over vocabulary entries in index order.
    pub fn vocab_hash(&self) -> String {
        let mut by_index: Vec<(&usize, &String)> =
            self.vocabulary.iter().map(|(g, i)| (i, g)).collect();
        by_index.sort();
        let mut h = Sha256::new();
        for (_, g) in by_index {
            h.update(g.as_bytes());
            h.update(b"\n");
        }
        crate::util::to_hex(&h.finalize())
    }

    /// Featurizes one example's texts. N-gram counts are summed per text
    /// then added, so the vector does not depend on text order.
    pub fn featurize(&self, texts: &[String]) -> Result<SparseVec> {
        if self.dim() == 0 {
            return Err(Error::Data("feature space is empty".into()));
        }
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        if self.config.use_ngrams {
            let unk = self.vocabulary[UNK];
            for text in texts {
                for_each_ngram(text, &self.config.ngram_sizes, |g| {
                    let idx = self.vocabulary.get(&g).copied().unwrap_or(unk);
                    *acc.entry(idx).or_insert(0.0) += 1.0;
                });
            }
        }
        let v = self.vocabulary.len();
        if !self.dense.is_empty() {
            let lex: &MetricLexicons = MetricLexicons::bundled();
            for (j, feat) in self.dense.iter().enumerate() {
                // A missing metric falls back to the train mean, i.e. z = 0.
                let raw = dense_value(feat.metric, texts, lex).unwrap_or(feat.mean);
                let z = if feat.std > 0.0 { (raw - feat.mean) / feat.std } else { 0.0 };
                if z != 0.0 {
                    acc.insert(v + j, z);
                }
            }
        }
        Ok(acc.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(id: &str, texts: &[&str], label: u8) -> Example {
        Example {
            id: id.to_string(),
            texts: texts.iter().map(|t| t.to_string()).collect(),
            label,
        }
    }

    #[test]
    fn digits_become_zero() {
        assert_eq!(normalize_token("2019"), "0000");
        assert_eq!(normalize_token("FY18"), "fy00");
        assert_eq!(normalize_token("Rose"), "rose");
    }

    #[test]
    fn ngram_stream_is_padded() {
        let mut grams = Vec::new();
        for_each_ngram("will fire", &BTreeSet::from([1, 2]), |g| grams.push(g));
        for want in ["will", "fire", "will fire", "<s> will", "fire </s>", "<s>", "</s>"] {
            assert!(grams.contains(&want.to_string()), "missing {want}");
        }
    }

    #[test]
    fn ngrams_do_not_cross_sentences() {
        let mut grams = Vec::new();
        for_each_ngram("It rose. It fell.", &BTreeSet::from([2]), |g| grams.push(g));
        assert!(!grams.iter().any(|g| g == ". it"));
        assert!(grams.contains(&". </s>".to_string()));
    }

    #[test]
    fn hapax_maps_to_unk() {
        let train = vec![
            ex("a", &["growth growth continues"], 1),
            ex("b", &["growth continues here here"], 0),
        ];
        let cfg = FeatureConfig { ngram_sizes: BTreeSet::from([1]), ..Default::default() };
        let space = FeatureSpace::build(&train, cfg).unwrap();
        // "growth" x3, "continues" x2, "here" x2 survive; "<s>"/"</s>" x2 each.
        assert!(space.vocabulary.contains_key("growth"));
        assert!(!space.vocabulary.contains_key("unseen"));
        let unk = space.vocabulary[UNK];

        let vec = space.featurize(&["growth unseen alsounseen".to_string()]).unwrap();
        let unk_count = vec.iter().find(|(i, _)| *i == unk).map(|(_, c)| *c);
        assert_eq!(unk_count, Some(2.0));
    }

    #[test]
    fn indices_dense_and_sorted() {
        let train = vec![ex("a", &["up up down down"], 1), ex("b", &["up down up down"], 0)];
        let space = FeatureSpace::build(&train, FeatureConfig::default()).unwrap();
        let indices: BTreeSet<usize> = space.vocabulary.values().copied().collect();
        assert_eq!(indices, (0..space.vocabulary.len()).collect());
    }

    #[test]
    fn text_order_invariance() {
        let train = vec![
            ex("a", &["alpha beta gamma", "beta beta"], 1),
            ex("b", &["alpha gamma", "gamma beta"], 0),
        ];
        let space = FeatureSpace::build(&train, FeatureConfig::default()).unwrap();
        let fwd = space
            .featurize(&["alpha beta gamma".to_string(), "beta beta".to_string()])
            .unwrap();
        let rev = space
            .featurize(&["beta beta".to_string(), "alpha beta gamma".to_string()])
            .unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn dense_features_z_normalized() {
        let train = vec![
            ex("a", &["one two three four"], 1),
            ex("b", &["one two three four five six seven eight"], 0),
        ];
        let cfg = FeatureConfig {
            use_ngrams: false,
            textual_metrics: true,
            cognitive_metrics: false,
            ..Default::default()
        };
        let space = FeatureSpace::build(&train, cfg).unwrap();
        assert_eq!(space.vocabulary.len(), 0);
        assert_eq!(space.dense.len(), TEXTUAL_METRICS.len());
        let tc = space.dense.iter().position(|f| f.metric == Metric::TokenCount).unwrap();
        assert_eq!(space.dense[tc].mean, 6.0);
        assert_eq!(space.dense[tc].std, 2.0);

        // 4 tokens → z = (4−6)/2 = −1.
        let v = space.featurize(&["one two three four".to_string()]).unwrap();
        let got = v.iter().find(|(i, _)| *i == tc).map(|(_, z)| *z).unwrap();
        assert!((got + 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_feature_group_is_an_error() {
        let cfg = FeatureConfig { use_ngrams: false, ..Default::default() };
        assert!(FeatureSpace::build(&[], cfg).is_err());
    }

    #[test]
    fn empty_vocabulary_is_an_error() {
        // Every n-gram is a hapax, so nothing reaches min_count 2.
        let train = vec![ex("a", &["one lone pass"], 1)];
        let cfg = FeatureConfig { ngram_sizes: BTreeSet::from([3]), ..Default::default() };
        assert!(FeatureSpace::build(&train, cfg).is_err());
    }

    #[test]
    fn vocab_hash_tracks_content() {
        let t1 = vec![ex("a", &["up up down down"], 1)];
        let t2 = vec![ex("a", &["up up left left"], 1)];
        let cfg = FeatureConfig { ngram_sizes: BTreeSet::from([1]), ..Default::default() };
        let s1 = FeatureSpace::build(&t1, cfg.clone()).unwrap();
        let s2 = FeatureSpace::build(&t2, cfg.clone()).unwrap();
        let s1b = FeatureSpace::build(&t1, cfg).unwrap();
        assert_eq!(s1.vocab_hash(), s1b.vocab_hash());
        assert_ne!(s1.vocab_hash(), s2.vocab_hash());
    }
}
