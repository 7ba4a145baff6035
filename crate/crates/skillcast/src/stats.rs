//! Group-difference testing and correlation: a two-sample bootstrap
//! test on group means, Bonferroni correction, and Spearman rank
//! correlation. Bootstrap draws are split into fixed-size chunks with
//! per-chunk random streams, so p-values do not depend on thread count.

use crate::error::{Error, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    TopHigher,
    BottomHigher,
}

/// Bootstrap comparison of one metric between two author groups.
#[derive(Debug, Clone, Serialize)]
pub struct GroupComparison {
    pub metric: String,
    pub mean_top: f64,
    pub mean_bottom: f64,
    pub direction: Direction,
    pub p_value: f64,
    pub passes_bonferroni: bool,
    pub n_bootstrap: usize,
}

/// Iterations per random stream; the chunk plan depends only on n_iter.
const CHUNK: usize = 256;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Two-sample bootstrap on the difference of group means. Each group is
/// resampled with replacement at its own size; the two-sided p-value is
/// the fraction of iterations with |d* − d| ≥ |d|. Inputs are sorted
/// first, so any permutation of either list gives bit-identical results.
pub fn bootstrap_test(
    top_values: &[f64],
    bottom_values: &[f64],
    n_iter: usize,
    seed: u64,
) -> Result<GroupComparison> {
    if top_values.is_empty() || bottom_values.is_empty() {
        return Err(Error::Data("bootstrap_test: empty group".into()));
    }
    if n_iter < 1000 {
        return Err(Error::Config(format!("n_iter {n_iter} < 1000")));
    }
    let mut top = top_values.to_vec();
    let mut bottom = bottom_values.to_vec();
    top.sort_by(f64::total_cmp);
    bottom.sort_by(f64::total_cmp);

    let mean_top = mean(&top);
    let mean_bottom = mean(&bottom);
    let observed = mean_top - mean_bottom;
    let threshold = observed.abs();

    let n_chunks = n_iter.div_ceil(CHUNK);
    let exceed: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64 + 1);
            let iters = CHUNK.min(n_iter - chunk * CHUNK);
            let mut count = 0u64;
            for _ in 0..iters {
                let mut sum_t = 0.0;
                for _ in 0..top.len() {
                    sum_t += top[rng.random_range(0..top.len())];
                }
                let mut sum_b = 0.0;
                for _ in 0..bottom.len() {
                    sum_b += bottom[rng.random_range(0..bottom.len())];
                }
                let d = sum_t / top.len() as f64 - sum_b / bottom.len() as f64;
                if (d - observed).abs() >= threshold {
                    count += 1;
                }
            }
            count
        })
        .sum();

    let p_value = exceed as f64 / n_iter as f64;
    Ok(GroupComparison {
        metric: String::new(),
        mean_top,
        mean_bottom,
        direction: if observed >= 0.0 { Direction::TopHigher } else { Direction::BottomHigher },
        p_value,
        passes_bonferroni: false,
        n_bootstrap: n_iter,
    })
}

impl GroupComparison {
    pub fn with_metric(mut self, name: impl Into<String>) -> Self {
        self.metric = name.into();
        self
    }
}

/// Pass iff p < alpha/m.
pub fn bonferroni(
    p_values: &BTreeMap<String, f64>,
    alpha: f64,
    m: usize,
) -> Result<BTreeMap<String, bool>> {
    if m == 0 {
        return Err(Error::Config("bonferroni: m must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!("alpha {alpha} outside [0,1]")));
    }
    let cut = alpha / m as f64;
    Ok(p_values.iter().map(|(k, &p)| (k.clone(), p < cut)).collect())
}

/// Average fractional ranks (ties share the mean of their positions).
fn fractional_ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // Positions i..=j hold equal values; each gets the mean rank.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's ρ: Pearson correlation of fractional ranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Data(format!("length mismatch: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::Data("spearman_rho needs at least 2 points".into()));
    }
    let rx = fractional_ranks(x);
    let ry = fractional_ranks(y);
    let mx = mean(&rx);
    let my = mean(&ry);
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..rx.len() {
        let dx = rx[i] - mx;
        let dy = ry[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::Undefined("spearman_rho on a constant list"));
    }
    Ok(cov / (vx * vy).sqrt())
}
