//! Evaluation protocols around the classifier: stratified k-fold
//! cross-validation with per-fold vocabularies, weight inspection,
//! early identification by Precision@N, and the financial-domain
//! company/time split.

use super::features::{Example, FeatureConfig, FeatureSpace, SparseVec};
use super::logreg::{predict_logit, train_logreg, ModelArtifact, TrainConfig};
use crate::corpus::ForecastRecord;
use crate::error::{Error, Result};
use chrono::Datelike;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Serialize)]
pub struct CrossvalReport {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub n_examples: usize,
}

fn featurize_all(space: &FeatureSpace, examples: &[&Example]) -> Result<(Vec<SparseVec>, Vec<u8>)> {
    let mut xs = Vec::with_capacity(examples.len());
    let mut ys = Vec::with_capacity(examples.len());
    for ex in examples {
        xs.push(space.featurize(&ex.texts)?);
        ys.push(ex.label);
    }
    Ok((xs, ys))
}

/// Stratified seeded k-fold cross-validation. The feature space is
/// rebuilt inside every fold from that fold's training split only.
pub fn crossval_accuracy(
    examples: &[Example],
    k: usize,
    seed: u64,
    fconfig: &FeatureConfig,
    tconfig: &TrainConfig,
) -> Result<CrossvalReport> {
    if k < 2 {
        return Err(Error::Config(format!("k = {k} must be at least 2")));
    }
    let mut ids = BTreeSet::new();
    for ex in examples {
        if !ids.insert(ex.id.as_str()) {
            return Err(Error::Data(format!("duplicate example id {}", ex.id)));
        }
        if ex.label > 1 {
            return Err(Error::Data(format!("label {} is not binary", ex.label)));
        }
    }
    // Sort by id so fold assignment ignores input order.
    let mut order: Vec<&Example> = examples.iter().collect();
    order.sort_by(|a, b| a.id.cmp(&b.id));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<&Example>> = vec![Vec::new(); k];
    for class in [1u8, 0] {
        let mut members: Vec<&Example> = order.iter().copied().filter(|e| e.label == class).collect();
        if members.len() < k {
            return Err(Error::Data(format!(
                "class {class} has {} examples, fewer than k = {k}",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for (i, ex) in members.into_iter().enumerate() {
            folds[i % k].push(ex);
        }
    }

    let mut fold_accuracies = Vec::with_capacity(k);
    for held in 0..k {
        let train: Vec<&Example> = folds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != held)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        let space = FeatureSpace::build_from_refs(&train, fconfig.clone())?;
        let (xs, ys) = featurize_all(&space, &train)?;
        let model = train_logreg(&xs, &ys, space.dim(), tconfig)?;
        let (txs, tys) = featurize_all(&space, &folds[held])?;
        fold_accuracies.push(super::logreg::accuracy(&model.artifact, &txs, &tys));
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / k as f64;
    Ok(CrossvalReport { fold_accuracies, mean_accuracy, n_examples: examples.len() })
}

/// The n highest- and n lowest-weight n-grams, ties broken by string.
pub fn top_features(
    artifact: &ModelArtifact,
    space: &FeatureSpace,
    n: usize,
) -> Result<(Vec<(String, f64)>, Vec<(String, f64)>)> {
    let v = space.vocabulary.len();
    if n > v {
        return Err(Error::Config(format!("n = {n} exceeds vocabulary size {v}")));
    }
    if artifact.weights.len() != space.dim() {
        return Err(Error::Data("artifact does not match feature space".into()));
    }
    let mut entries: Vec<(&String, f64)> =
        space.vocabulary.iter().map(|(g, &i)| (g, artifact.weights[i])).collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let high = entries.iter().take(n).map(|(g, w)| ((*g).clone(), *w)).collect();
    entries.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    let low = entries.iter().take(n).map(|(g, w)| ((*g).clone(), *w)).collect();
    Ok((high, low))
}

/// One author in the early-identification protocol.
#[derive(Debug, Clone)]
pub struct EarlyAuthor {
    pub id: String,
    /// 1 = top half by mean standardized Brier score.
    pub label: u8,
    /// All justifications, used when the author lands in train.
    pub texts: Vec<String>,
    /// Earliest justification, the only text scored at test time.
    pub earliest_text: String,
    /// Standardized Brier score of the earliest forecast (baseline).
    pub earliest_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrecisionReport {
    pub n_train: usize,
    pub n_validation: usize,
    pub n_test: usize,
    /// (N, model P@N, baseline P@N) per requested N.
    pub at_n: Vec<(usize, f64, f64)>,
}

/// Fraction of label-1 authors among the N best-ranked. `scored` holds
/// (score, label, id); higher score means predicted-skilled. Ties by id.
fn precision_from_scores(scored: &mut [(f64, u8, &str)], n: usize) -> f64 {
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.2.cmp(b.2)));
    let hits = scored[..n].iter().filter(|(_, l, _)| *l == 1).count();
    hits as f64 / n as f64
}

/// Splits authors 60/20/20 within each label group, trains on the train
/// authors' combined texts, then ranks test authors two ways: by model
/// score on their earliest justification, and by the earliest forecast's
/// standardized Brier score (lower is better).
pub fn precision_at_n(
    authors: &[EarlyAuthor],
    ns: &[usize],
    seed: u64,
    fconfig: &FeatureConfig,
    tconfig: &TrainConfig,
) -> Result<PrecisionReport> {
    let mut ids = BTreeSet::new();
    for a in authors {
        if !ids.insert(a.id.as_str()) {
            return Err(Error::Data(format!("duplicate author id {}", a.id)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train: Vec<&EarlyAuthor> = Vec::new();
    let mut validation: Vec<&EarlyAuthor> = Vec::new();
    let mut test: Vec<&EarlyAuthor> = Vec::new();
    for class in [1u8, 0] {
        let mut members: Vec<&EarlyAuthor> = authors.iter().filter(|a| a.label == class).collect();
        members.sort_by(|a, b| a.id.cmp(&b.id));
        members.shuffle(&mut rng);
        let n = members.len();
        let n_train = (n as f64 * 0.6).floor() as usize;
        let n_val = (n as f64 * 0.2).floor() as usize;
        if n_train == 0 || n - n_train - n_val == 0 {
            return Err(Error::Data(format!(
                "class {class} has {n} authors, too few for a 60/20/20 split"
            )));
        }
        train.extend(&members[..n_train]);
        validation.extend(&members[n_train..n_train + n_val]);
        test.extend(&members[n_train + n_val..]);
    }

    let train_examples: Vec<Example> = train
        .iter()
        .map(|a| Example { id: a.id.clone(), texts: a.texts.clone(), label: a.label })
        .collect();
    let space = FeatureSpace::build(&train_examples, fconfig.clone())?;
    let refs: Vec<&Example> = train_examples.iter().collect();
    let (xs, ys) = featurize_all(&space, &refs)?;
    let model = train_logreg(&xs, &ys, space.dim(), tconfig)?;

    let mut by_model: Vec<(f64, u8, &str)> = Vec::with_capacity(test.len());
    let mut by_baseline: Vec<(f64, u8, &str)> = Vec::with_capacity(test.len());
    for a in &test {
        let x = space.featurize(std::slice::from_ref(&a.earliest_text))?;
        let score = predict_logit(&model.artifact.weights, model.artifact.bias, &x);
        by_model.push((score, a.label, a.id.as_str()));
        // Negated so that "higher is better" holds for both rankings.
        by_baseline.push((-a.earliest_z, a.label, a.id.as_str()));
    }

    let mut at_n = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 || n > test.len() {
            return Err(Error::Config(format!("N = {n} outside 1..={}", test.len())));
        }
        let p_model = precision_from_scores(&mut by_model, n);
        let p_base = precision_from_scores(&mut by_baseline, n);
        at_n.push((n, p_model, p_base));
    }
    Ok(PrecisionReport {
        n_train: train.len(),
        n_validation: validation.len(),
        n_test: test.len(),
        at_n,
    })
}

/// A forecast record paired with its accuracy label
/// (1 = among the top-K most accurate by standardized error).
#[derive(Debug, Clone)]
pub struct LabeledRecord {
    pub record: ForecastRecord,
    pub label: u8,
}

#[derive(Debug, Clone)]
pub struct FinancialSplit {
    pub train: Vec<LabeledRecord>,
    pub dev: Vec<LabeledRecord>,
    pub test: Vec<LabeledRecord>,
    pub train_companies: BTreeSet<String>,
    pub eval_companies: BTreeSet<String>,
}

const TRAIN_YEARS: std::ops::RangeInclusive<i32> = 2014..=2016;
const DEV_YEAR: i32 = 2017;
const TEST_YEAR: i32 = 2018;

/// Seeded downsampling of the majority class; output sorted by record_id.
fn balance(mut records: Vec<LabeledRecord>, rng: &mut ChaCha8Rng) -> Vec<LabeledRecord> {
    records.sort_by(|a, b| a.record.record_id.cmp(&b.record.record_id));
    let pos = records.iter().filter(|r| r.label == 1).count();
    let neg = records.len() - pos;
    let (majority, keep) = if pos > neg { (1, neg) } else { (0, pos) };
    let mut majority_records: Vec<LabeledRecord> =
        records.iter().filter(|r| r.label == majority).cloned().collect();
    majority_records.shuffle(rng);
    majority_records.truncate(keep);
    let mut out: Vec<LabeledRecord> =
        records.into_iter().filter(|r| r.label != majority).collect();
    out.extend(majority_records);
    out.sort_by(|a, b| a.record.record_id.cmp(&b.record.record_id));
    out
}

/// Company-disjoint 80/20 split crossed with time windows: train uses
/// train-group companies in 2014-2016; dev and test use evaluation-group
/// companies in 2017 and 2018. Dev and test are class-balanced by
/// seeded downsampling. Companies are taken from target_id.
pub fn financial_split(
    records: &[LabeledRecord],
    eval_frac: f64,
    seed: u64,
) -> Result<FinancialSplit> {
    if !(0.0..1.0).contains(&eval_frac) || eval_frac == 0.0 {
        return Err(Error::Config(format!("eval_frac {eval_frac} outside (0,1)")));
    }
    let mut companies: Vec<&str> =
        records.iter().map(|r| r.record.target_id.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    if companies.len() < 2 {
        return Err(Error::Data("need at least 2 companies to split".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    companies.shuffle(&mut rng);
    let n_eval = ((companies.len() as f64 * eval_frac).floor() as usize).max(1);
    let eval_companies: BTreeSet<String> =
        companies[..n_eval].iter().map(|c| c.to_string()).collect();
    let train_companies: BTreeSet<String> =
        companies[n_eval..].iter().map(|c| c.to_string()).collect();
    if train_companies.is_empty() {
        return Err(Error::Data("no companies left for the train group".into()));
    }

    let mut train = Vec::new();
    let mut dev = Vec::new();
    let mut test = Vec::new();
    for r in records {
        let year = r.record.timestamp.year();
        let in_eval = eval_companies.contains(&r.record.target_id);
        if !in_eval && TRAIN_YEARS.contains(&year) {
            train.push(r.clone());
        } else if in_eval && year == DEV_YEAR {
            dev.push(r.clone());
        } else if in_eval && year == TEST_YEAR {
            test.push(r.clone());
        }
    }
    train.sort_by(|a, b| a.record.record_id.cmp(&b.record.record_id));
    let dev = balance(dev, &mut rng);
    let test = balance(test, &mut rng);
    for (name, split) in [("train", &train), ("dev", &dev), ("test", &test)] {
        if split.is_empty() {
            return Err(Error::Data(format!("{name} split is empty after filtering")));
        }
    }
    Ok(FinancialSplit { train, dev, test, train_companies, eval_companies })
}

/// Top-K (most accurate, label 1) and bottom-K (least accurate, label 0)
/// records by standardized error; ties broken by record_id.
pub fn select_record_groups(
    std_errors: &BTreeMap<String, f64>,
    k: usize,
) -> Result<(Vec<String>, Vec<String>)> {
    if k == 0 {
        return Err(Error::Config("K must be at least 1".into()));
    }
    if 2 * k > std_errors.len() {
        return Err(Error::Data(format!(
            "2K = {} exceeds {} scored records",
            2 * k,
            std_errors.len()
        )));
    }
    let mut order: Vec<(&String, f64)> = std_errors.iter().map(|(id, &z)| (id, z)).collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    let accurate = order[..k].iter().map(|(id, _)| (*id).clone()).collect();
    let inaccurate = order[order.len() - k..].iter().map(|(id, _)| (*id).clone()).collect();
    Ok((accurate, inaccurate))
}

impl FeatureSpace {
    /// Convenience for slices of borrowed examples.
    pub fn build_from_refs(train: &[&Example], config: FeatureConfig) -> Result<FeatureSpace> {
        let owned: Vec<Example> = train.iter().map(|e| (*e).clone()).collect();
        FeatureSpace::build(&owned, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DomainTag;
    use chrono::{TimeZone, Utc};

    fn ex(id: &str, text: &str, label: u8) -> Example {
        Example { id: id.to_string(), texts: vec![text.to_string()], label }
    }

    fn separable_examples(per_class: usize) -> Vec<Example> {
        let mut out = Vec::new();
        for i in 0..per_class {
            out.push(ex(
                &format!("up{i:03}"),
                "growth continues and margins expand nicely here.",
                1,
            ));
            out.push(ex(
                &format!("dn{i:03}"),
                "decline persists and margins shrink badly there.",
                0,
            ));
        }
        out
    }

    #[test]
    fn separable_corpus_hits_full_accuracy() {
        let examples = separable_examples(20);
        let rep = crossval_accuracy(
            &examples,
            5,
            3,
            &FeatureConfig::default(),
            &TrainConfig::default(),
        )
        .unwrap();
        assert_eq!(rep.mean_accuracy, 1.0);
        assert_eq!(rep.fold_accuracies.len(), 5);
    }

    #[test]
    fn crossval_is_seed_deterministic_and_order_invariant() {
        let examples = separable_examples(10);
        let a = crossval_accuracy(&examples, 5, 7, &FeatureConfig::default(), &TrainConfig::default())
            .unwrap();
        let mut reversed = examples.clone();
        reversed.reverse();
        let b = crossval_accuracy(&reversed, 5, 7, &FeatureConfig::default(), &TrainConfig::default())
            .unwrap();
        assert_eq!(a.fold_accuracies, b.fold_accuracies);
    }

    #[test]
    fn crossval_rejects_small_classes() {
        let examples = separable_examples(3);
        let err = crossval_accuracy(&examples, 5, 0, &FeatureConfig::default(), &TrainConfig::default());
        assert!(err.is_err());
    }

    #[test]
    fn shuffled_labels_sit_near_chance() {
        // 400 authors from a shared vocabulary, labels independent of text.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pool =
            ["market", "trend", "signal", "margin", "report", "volume", "quarter", "outlook"];
        let mut examples = Vec::new();
        for i in 0..400 {
            let words: Vec<&str> =
                (0..12).map(|_| pool[rng.random_range(0..pool.len())]).collect();
            examples.push(ex(&format!("a{i:04}"), &words.join(" "), u8::from(i % 2 == 0)));
        }
        let rep = crossval_accuracy(
            &examples,
            5,
            13,
            &FeatureConfig::default(),
            &TrainConfig { max_epochs: 120, ..Default::default() },
        )
        .unwrap();
        assert!(
            (0.4..=0.6).contains(&rep.mean_accuracy),
            "accuracy {} outside chance band",
            rep.mean_accuracy
        );
    }

    #[test]
    fn planted_phrase_reaches_top_features() {
        let mut examples = Vec::new();
        for i in 0..12 {
            examples.push(ex(
                &format!("t{i:02}"),
                "it is likely margins expand. volumes rise steadily.",
                1,
            ));
            examples.push(ex(
                &format!("b{i:02}"),
                "numbers came in flat. volumes rise steadily.",
                0,
            ));
        }
        let fconfig = FeatureConfig {
            ngram_sizes: BTreeSet::from([1, 2, 3]),
            ..Default::default()
        };
        let space = FeatureSpace::build(&examples, fconfig).unwrap();
        let refs: Vec<&Example> = examples.iter().collect();
        let (xs, ys) = featurize_all(&space, &refs).unwrap();
        let model = train_logreg(&xs, &ys, space.dim(), &TrainConfig::default()).unwrap();
        let (high, _low) = top_features(&model.artifact, &space, 15).unwrap();
        assert!(
            high.iter().any(|(g, _)| g == "it is likely"),
            "top features: {high:?}"
        );
    }

    #[test]
    fn top_features_edge_cases() {
        let examples = separable_examples(4);
        let space = FeatureSpace::build(&examples, FeatureConfig::default()).unwrap();
        let zero = ModelArtifact {
            weights: vec![0.0; space.dim()],
            bias: 0.0,
            config: TrainConfig::default(),
            data_hash: String::new(),
        };
        let (high, low) = top_features(&zero, &space, 0).unwrap();
        assert!(high.is_empty() && low.is_empty());

        // All-zero weights: both lists fall back to lexicographic order.
        let v = space.vocabulary.len();
        let (high, low) = top_features(&zero, &space, v).unwrap();
        let sorted: Vec<String> = space.vocabulary.keys().cloned().collect();
        let high_names: Vec<String> = high.into_iter().map(|(g, _)| g).collect();
        let low_names: Vec<String> = low.into_iter().map(|(g, _)| g).collect();
        assert_eq!(high_names, sorted);
        assert_eq!(low_names, sorted);

        assert!(top_features(&zero, &space, v + 1).is_err());
    }

    fn early_authors(per_class: usize) -> Vec<EarlyAuthor> {
        let mut out = Vec::new();
        for i in 0..per_class {
            out.push(EarlyAuthor {
                id: format!("top{i:03}"),
                label: 1,
                texts: vec!["growth likely continues strongly.".into(); 3],
                earliest_text: "growth likely continues strongly.".into(),
                earliest_z: -0.5 - i as f64 * 0.01,
            });
            out.push(EarlyAuthor {
                id: format!("bot{i:03}"),
                label: 0,
                texts: vec!["flat numbers reported again today.".into(); 3],
                earliest_text: "flat numbers reported again today.".into(),
                earliest_z: 0.5 + i as f64 * 0.01,
            });
        }
        out
    }

    #[test]
    fn perfect_separation_gives_precision_one() {
        let authors = early_authors(20);
        let rep = precision_at_n(
            &authors,
            &[1, 4, 8],
            5,
            &FeatureConfig::default(),
            &TrainConfig::default(),
        )
        .unwrap();
        // 20 per class → 12 train, 4 validation, 4 test per class.
        assert_eq!(rep.n_train, 24);
        assert_eq!(rep.n_validation, 8);
        assert_eq!(rep.n_test, 8);
        for &(n, p_model, p_base) in &rep.at_n {
            if n <= 4 {
                assert_eq!(p_model, 1.0, "P@{n}");
                assert_eq!(p_base, 1.0, "baseline P@{n}");
            }
        }
        let err = precision_at_n(&authors, &[9], 5, &FeatureConfig::default(), &TrainConfig::default());
        assert!(err.is_err(), "N beyond test size must fail");
    }

    #[test]
    fn precision_invariant_to_monotone_score_transform() {
        let mut scored: Vec<(f64, u8, &str)> =
            vec![(0.9, 1, "a"), (0.2, 0, "b"), (0.6, 1, "c"), (0.4, 0, "d")];
        let p = precision_from_scores(&mut scored, 2);
        let mut transformed: Vec<(f64, u8, &str)> = scored
            .iter()
            .map(|&(s, l, id)| (s.exp() * 10.0 + 3.0, l, id))
            .collect();
        let q = precision_from_scores(&mut transformed, 2);
        assert_eq!(p, q);
        assert_eq!(p, 1.0);
    }

    fn fin_record(id: &str, company: &str, year: i32, label: u8) -> LabeledRecord {
        LabeledRecord {
            record: ForecastRecord {
                record_id: id.to_string(),
                author_id: format!("an-{}", &id[..1]),
                target_id: company.to_string(),
                timestamp: Utc.with_ymd_and_hms(year, 6, 1, 0, 0, 0).unwrap(),
                estimate: 1.0,
                justification: "estimate note".to_string(),
                outcome: Some(1.0),
                domain_tag: DomainTag::Eps,
            },
            label,
        }
    }

    fn fin_fixture() -> Vec<LabeledRecord> {
        let mut out = Vec::new();
        let companies = ["AAA", "BBB", "CCC", "DDD", "EEE", "FFF", "GGG", "HHH", "III", "JJJ"];
        let mut n = 0;
        for c in companies {
            // Each company carries both labels in 2017 and in 2018, so the
            // balanced dev/test sets are never empty whatever the draw.
            for (offset, year) in [2014, 2015, 2016, 2017, 2017, 2018, 2018].into_iter().enumerate()
            {
                let label = match offset {
                    3 | 5 => 0,
                    4 | 6 => 1,
                    o => (o % 2) as u8,
                };
                out.push(fin_record(&format!("r{n:03}"), c, year, label));
                n += 1;
            }
        }
        out
    }

    #[test]
    fn financial_split_respects_protocol() {
        let records = fin_fixture();
        let split = financial_split(&records, 0.2, 9).unwrap();
        assert_eq!(split.eval_companies.len(), 2);
        assert_eq!(split.train_companies.len(), 8);
        for r in &split.train {
            assert!(split.train_companies.contains(&r.record.target_id));
            assert!(TRAIN_YEARS.contains(&r.record.timestamp.year()));
        }
        for r in &split.dev {
            assert!(split.eval_companies.contains(&r.record.target_id));
            assert_eq!(r.record.timestamp.year(), DEV_YEAR);
        }
        for r in &split.test {
            assert!(split.eval_companies.contains(&r.record.target_id));
            assert_eq!(r.record.timestamp.year(), TEST_YEAR);
        }
        // Eval-company records from train years appear nowhere, and
        // train-company records from eval years appear nowhere.
        let all_ids: BTreeSet<&str> = split
            .train
            .iter()
            .chain(&split.dev)
            .chain(&split.test)
            .map(|r| r.record.record_id.as_str())
            .collect();
        for r in &records {
            let year = r.record.timestamp.year();
            let in_eval = split.eval_companies.contains(&r.record.target_id);
            if (in_eval && TRAIN_YEARS.contains(&year)) || (!in_eval && year >= DEV_YEAR) {
                assert!(!all_ids.contains(r.record.record_id.as_str()));
            }
        }
        // Dev and test are balanced.
        for part in [&split.dev, &split.test] {
            let pos = part.iter().filter(|r| r.label == 1).count();
            assert_eq!(pos * 2, part.len());
        }
    }

    #[test]
    fn financial_split_is_seed_deterministic() {
        let records = fin_fixture();
        let a = financial_split(&records, 0.2, 4).unwrap();
        let b = financial_split(&records, 0.2, 4).unwrap();
        assert_eq!(a.eval_companies, b.eval_companies);
        let ids = |s: &[LabeledRecord]| -> Vec<String> {
            s.iter().map(|r| r.record.record_id.clone()).collect()
        };
        assert_eq!(ids(&a.train), ids(&b.train));
        assert_eq!(ids(&a.dev), ids(&b.dev));
        assert_eq!(ids(&a.test), ids(&b.test));
        let c = financial_split(&records, 0.2, 5).unwrap();
        assert!(a.eval_companies != c.eval_companies || ids(&a.dev) != ids(&c.dev));
    }

    #[test]
    fn financial_split_rejects_empty_splits() {
        // Single year of data: dev and test cannot be populated.
        let records: Vec<LabeledRecord> = (0..6)
            .map(|i| fin_record(&format!("r{i}"), ["AAA", "BBB"][i % 2], 2015, (i % 2) as u8))
            .collect();
        assert!(financial_split(&records, 0.2, 1).is_err());
    }

    #[test]
    fn record_group_selection_orders_by_error() {
        let mut z = BTreeMap::new();
        for (id, v) in [("a", 0.5), ("b", -1.2), ("c", 0.0), ("d", 2.0), ("e", -0.3), ("f", 0.9)] {
            z.insert(id.to_string(), v);
        }
        let (acc, inacc) = select_record_groups(&z, 2).unwrap();
        assert_eq!(acc, vec!["b", "e"]);
        assert_eq!(inacc, vec!["f", "d"]);
        assert!(select_record_groups(&z, 4).is_err());
    }
}
