//! Skill measurement against ground truth: Brier scores standardized
//! within questions, author ranking with top/bottom-K selection,
//! calibration curves, and EPS forecast error with per-analyst trimmed
//! standardization.

use crate::corpus::{DomainTag, ForecastRecord};
use crate::error::{Error, Result};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Squared error between a probability forecast and a binary outcome.
pub fn brier(estimate: f64, outcome: u8) -> Result<f64> {
    if !(0.0..=1.0).contains(&estimate) {
        return Err(Error::Data(format!("estimate {estimate} outside [0,1]")));
    }
    if outcome > 1 {
        return Err(Error::Data(format!("outcome {outcome} not 0/1")));
    }
    let diff = estimate - f64::from(outcome);
    Ok(diff * diff)
}

/// One raw score attached to its question, input to standardization.
#[derive(Debug, Clone)]
pub struct QuestionScore {
    pub record_id: String,
    pub question_id: String,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct Standardized {
    /// record_id -> z-score.
    pub z: BTreeMap<String, f64>,
    /// Questions with a single forecast or zero variance; their z is 0.
    pub degenerate_questions: Vec<String>,
}

/// Relative std below this counts as zero variance.
const DEGENERATE_EPS: f64 = 1e-12;

/// z = (score − question mean) / question population std, per question.
pub fn standardize_within_question(scores: &[QuestionScore]) -> Standardized {
    let mut by_question: BTreeMap<&str, Vec<&QuestionScore>> = BTreeMap::new();
    for s in scores {
        by_question.entry(&s.question_id).or_default().push(s);
    }
    let mut z = BTreeMap::new();
    let mut degenerate = Vec::new();
    for (qid, group) in by_question {
        let n = group.len() as f64;
        let mean = group.iter().map(|s| s.score).sum::<f64>() / n;
        let var = group.iter().map(|s| (s.score - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        if group.len() < 2 || std <= DEGENERATE_EPS * mean.abs().max(1.0) {
            degenerate.push(qid.to_string());
            for s in group {
                z.insert(s.record_id.clone(), 0.0);
            }
        } else {
            for s in group {
                z.insert(s.record_id.clone(), (s.score - mean) / std);
            }
        }
    }
    Standardized { z, degenerate_questions: degenerate }
}

/// A resolved binary forecast with its raw and standardized Brier score.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoredForecast {
    pub record_id: String,
    pub author_id: String,
    pub question_id: String,
    pub timestamp: DateTime<Utc>,
    pub brier: f64,
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct ScoreReport {
    pub scored: Vec<ScoredForecast>,
    pub skipped_unresolved: usize,
    pub degenerate_questions: Vec<String>,
}

/// Brier-score every resolved binary record and standardize within
/// questions. Unresolved or non-binary records are skipped and counted.
pub fn brier_scores(records: &[ForecastRecord]) -> Result<ScoreReport> {
    let mut inputs = Vec::new();
    let mut skipped = 0usize;
    for rec in records {
        let outcome = match (rec.domain_tag, rec.outcome) {
            (DomainTag::Binary, Some(o)) => o as u8,
            _ => {
                skipped += 1;
                continue;
            }
        };
        inputs.push((rec, brier(rec.estimate, outcome)?));
    }
    let question_scores: Vec<QuestionScore> = inputs
        .iter()
        .map(|(r, b)| QuestionScore {
            record_id: r.record_id.clone(),
            question_id: r.target_id.clone(),
            score: *b,
        })
        .collect();
    let standardized = standardize_within_question(&question_scores);
    let scored = inputs
        .into_iter()
        .map(|(r, b)| ScoredForecast {
            record_id: r.record_id.clone(),
            author_id: r.author_id.clone(),
            question_id: r.target_id.clone(),
            timestamp: r.timestamp,
            brier: b,
            z: standardized.z[&r.record_id],
        })
        .collect();
    Ok(ScoreReport {
        scored,
        skipped_unresolved: skipped,
        degenerate_questions: standardized.degenerate_questions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Top,
    Bottom,
    Middle,
}

/// Per-author aggregate skill standing.
#[derive(Debug, Clone, Serialize)]
pub struct ForecasterProfile {
    pub author_id: String,
    pub n_forecasts: usize,
    pub mean_std_brier: f64,
    /// 1-based; 1 is the best (lowest) mean standardized Brier.
    pub rank: usize,
    pub group: Group,
}

/// Rank authors by ascending mean standardized Brier (lower is better),
/// ties broken by ascending author id.
pub fn rank_forecasters(scored: &[ScoredForecast]) -> Vec<ForecasterProfile> {
    let mut by_author: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for s in scored {
        let e = by_author.entry(&s.author_id).or_insert((0, 0.0));
        e.0 += 1;
        e.1 += s.z;
    }
    let mut profiles: Vec<ForecasterProfile> = by_author
        .into_iter()
        .map(|(author, (n, sum))| ForecasterProfile {
            author_id: author.to_string(),
            n_forecasts: n,
            mean_std_brier: sum / n as f64,
            rank: 0,
            group: Group::Middle,
        })
        .collect();
    profiles.sort_by(|a, b| {
        a.mean_std_brier
            .total_cmp(&b.mean_std_brier)
            .then_with(|| a.author_id.cmp(&b.author_id))
    });
    for (i, p) in profiles.iter_mut().enumerate() {
        p.rank = i + 1;
    }
    profiles
}

/// Mark the best and worst K profiles, returning their author ids.
/// Requires 2K ≤ author count so the groups stay disjoint.
pub fn select_groups(profiles: &mut [ForecasterProfile], k: usize) -> Result<(Vec<String>, Vec<String>)> {
    let n = profiles.len();
    if k == 0 {
        return Err(Error::Config("K must be positive".into()));
    }
    if 2 * k > n {
        return Err(Error::Config(format!("K = {k} exceeds half of {n} authors")));
    }
    profiles.sort_by(|a, b| a.rank.cmp(&b.rank));
    let mut top = Vec::with_capacity(k);
    let mut bottom = Vec::with_capacity(k);
    for (i, p) in profiles.iter_mut().enumerate() {
        p.group = if i < k {
            top.push(p.author_id.clone());
            Group::Top
        } else if i >= n - k {
            bottom.push(p.author_id.clone());
            Group::Bottom
        } else {
            Group::Middle
        };
    }
    Ok((top, bottom))
}

/// Reliability diagram over equal-width probability bins.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationCurve {
    /// n_bins + 1 edges over [0,1].
    pub edges: Vec<f64>,
    /// Mean forecast probability per bin; None for empty bins.
    pub mean_estimate: Vec<Option<f64>>,
    /// Empirical outcome frequency per bin; None for empty bins.
    pub frequency: Vec<Option<f64>>,
    pub count: Vec<usize>,
}

/// Bin forecasts by estimate ([0,1], last bin right-closed) and compare
/// mean estimate with empirical outcome frequency.
pub fn calibration_curve(forecasts: &[(f64, u8)], n_bins: usize) -> Result<CalibrationCurve> {
    if n_bins < 2 {
        return Err(Error::Config(format!("n_bins {n_bins} < 2")));
    }
    if forecasts.is_empty() {
        return Err(Error::Data("calibration_curve: no resolved records".into()));
    }
    let mut sum_est = vec![0.0; n_bins];
    let mut sum_out = vec![0.0; n_bins];
    let mut count = vec![0usize; n_bins];
    for &(est, out) in forecasts {
        if !(0.0..=1.0).contains(&est) {
            return Err(Error::Data(format!("estimate {est} outside [0,1]")));
        }
        let bin = ((est * n_bins as f64) as usize).min(n_bins - 1);
        sum_est[bin] += est;
        sum_out[bin] += f64::from(out);
        count[bin] += 1;
    }
    let edges = (0..=n_bins).map(|i| i as f64 / n_bins as f64).collect();
    let mean_estimate = (0..n_bins)
        .map(|i| (count[i] > 0).then(|| sum_est[i] / count[i] as f64))
        .collect();
    let frequency = (0..n_bins)
        .map(|i| (count[i] > 0).then(|| sum_out[i] / count[i] as f64))
        .collect();
    Ok(CalibrationCurve { edges, mean_estimate, frequency, count })
}

/// |estimate − actual| / |actual|; undefined at actual = 0.
pub fn eps_error(estimate: f64, actual: f64) -> Result<f64> {
    if actual == 0.0 {
        return Err(Error::Data("eps_error: actual EPS is zero".into()));
    }
    Ok((estimate - actual).abs() / actual.abs())
}

/// One analyst's standardized forecast errors.
#[derive(Debug, Clone)]
pub struct AnalystErrors {
    /// record_id -> standardized error.
    pub std_errors: BTreeMap<String, f64>,
    /// True when the trimmed errors had zero variance (all std set to 0).
    pub degenerate: bool,
}

/// Standardize one analyst's raw errors using moments of the ⌊trim·n⌋
/// smallest errors (ties at the cutoff resolved by record id); every
/// error is then standardized with those trimmed moments.
pub fn standardize_analyst_errors(
    errors: &[(String, f64)],
    trim: f64,
    min_n: usize,
) -> Result<AnalystErrors> {
    if !(0.0..=1.0).contains(&trim) || trim == 0.0 {
        return Err(Error::Config(format!("trim {trim} outside (0,1]")));
    }
    if errors.len() < min_n {
        return Err(Error::Data(format!(
            "analyst has {} errors, below the minimum {min_n}",
            errors.len()
        )));
    }
    let mut sorted: Vec<&(String, f64)> = errors.iter().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let m = ((trim * errors.len() as f64).floor() as usize).max(1);
    let kept = &sorted[..m];
    let mean = kept.iter().map(|e| e.1).sum::<f64>() / m as f64;
    let var = kept.iter().map(|e| (e.1 - mean).powi(2)).sum::<f64>() / m as f64;
    let std = var.sqrt();
    let degenerate = std <= DEGENERATE_EPS * mean.abs().max(1.0);
    let std_errors = errors
        .iter()
        .map(|(id, raw)| {
            let z = if degenerate { 0.0 } else { (raw - mean) / std };
            (id.clone(), z)
        })
        .collect();
    Ok(AnalystErrors { std_errors, degenerate })
}
