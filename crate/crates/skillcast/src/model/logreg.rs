//! L2-regularized logistic regression trained by full-batch gradient
//! descent. Gradients are reduced over fixed-size example chunks in
//! chunk order, so training is bit-reproducible at any thread count.
//! The step size is halved within an epoch whenever a full step would
//! increase the loss, which keeps the loss non-increasing.

use super::features::{FeatureSpace, SparseVec};
use crate::error::{Error, Result};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub max_epochs: usize,
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            l2_lambda: 1e-4,
            max_epochs: 500,
            grad_tol: 1e-6,
            seed: 0,
        }
    }
}

/// Trained weights plus the provenance needed to reuse them.
#[derive(Debug, Clone)]
pub struct ModelArtifact {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: TrainConfig,
    pub data_hash: String,
}

/// Training trace kept out of the artifact; tests assert on it.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub artifact: ModelArtifact,
    pub loss_history: Vec<f64>,
    pub final_grad_norm: f64,
    pub epochs_run: usize,
}

const GRAD_CHUNK: usize = 64;

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

pub fn predict_logit(weights: &[f64], bias: f64, x: &SparseVec) -> f64 {
    let mut z = bias;
    for &(i, v) in x {
        z += weights[i] * v;
    }
    z
}

pub fn predict_proba(artifact: &ModelArtifact, x: &SparseVec) -> f64 {
    sigmoid(predict_logit(&artifact.weights, artifact.bias, x))
}

/// Mean cross-entropy plus (λ/2)·||w||²; the bias is unregularized.
pub fn loss(weights: &[f64], bias: f64, xs: &[SparseVec], ys: &[u8], l2: f64) -> f64 {
    let n = xs.len() as f64;
    let ce: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| {
            let z = predict_logit(weights, bias, x);
            softplus(z) - f64::from(y) * z
        })
        .sum::<f64>()
        / n;
    let reg = 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    ce + reg
}

/// Gradient of the loss. Per-chunk partials are summed in chunk order.
pub fn gradient(
    weights: &[f64],
    bias: f64,
    xs: &[SparseVec],
    ys: &[u8],
    l2: f64,
    dim: usize,
) -> (Vec<f64>, f64) {
    let n = xs.len() as f64;
    let partials: Vec<(Vec<f64>, f64)> = xs
        .par_chunks(GRAD_CHUNK)
        .zip(ys.par_chunks(GRAD_CHUNK))
        .map(|(xc, yc)| {
            let mut g = vec![0.0; dim];
            let mut gb = 0.0;
            for (x, &y) in xc.iter().zip(yc) {
                let err = sigmoid(predict_logit(weights, bias, x)) - f64::from(y);
                for &(i, v) in x {
                    g[i] += err * v;
                }
                gb += err;
            }
            (g, gb)
        })
        .collect();
    let mut grad = vec![0.0; dim];
    let mut grad_b = 0.0;
    for (g, gb) in partials {
        for (acc, v) in grad.iter_mut().zip(g) {
            *acc += v;
        }
        grad_b += gb;
    }
    for (gi, wi) in grad.iter_mut().zip(weights) {
        *gi = *gi / n + l2 * wi;
    }
    (grad, grad_b / n)
}

fn grad_norm(grad: &[f64], grad_b: f64) -> f64 {
    (grad.iter().map(|g| g * g).sum::<f64>() + grad_b * grad_b).sqrt()
}

fn canonical_data_hash(xs: &[SparseVec], ys: &[u8]) -> String {
    let mut h = Sha256::new();
    for (x, y) in xs.iter().zip(ys) {
        h.update([*y]);
        for &(i, v) in x {
            h.update((i as u64).to_le_bytes());
            h.update(v.to_le_bytes());
        }
        h.update(b"|");
    }
    crate::util::to_hex(&h.finalize())
}

pub fn train_logreg(
    xs: &[SparseVec],
    ys: &[u8],
    dim: usize,
    config: &TrainConfig,
) -> Result<TrainedModel> {
    if xs.len() != ys.len() {
        return Err(Error::Data(format!("{} examples vs {} labels", xs.len(), ys.len())));
    }
    let pos = ys.iter().filter(|&&y| y == 1).count();
    let neg = ys.len() - pos;
    if pos < 2 || neg < 2 {
        return Err(Error::Data(format!(
            "need at least 2 examples per class, got {pos} positive / {neg} negative"
        )));
    }
    if let Some(bad) = ys.iter().find(|&&y| y > 1) {
        return Err(Error::Data(format!("label {bad} is not binary")));
    }
    if let Some((i, _)) = xs.iter().flatten().find(|(i, _)| *i >= dim) {
        return Err(Error::Data(format!("feature index {i} out of range for dim {dim}")));
    }

    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    let mut cur_loss = loss(&weights, bias, xs, ys, config.l2_lambda);
    let mut history = vec![cur_loss];
    let mut final_norm = f64::INFINITY;
    let mut epochs_run = 0;

    for _ in 0..config.max_epochs {
        let (grad, grad_b) = gradient(&weights, bias, xs, ys, config.l2_lambda, dim);
        final_norm = grad_norm(&grad, grad_b);
        if final_norm < config.grad_tol {
            break;
        }
        // Halve the step until the loss stops increasing.
        let mut step = config.learning_rate;
        let mut accepted = false;
        for _ in 0..40 {
            let cand_w: Vec<f64> =
                weights.iter().zip(&grad).map(|(w, g)| w - step * g).collect();
            let cand_b = bias - step * grad_b;
            let cand_loss = loss(&cand_w, cand_b, xs, ys, config.l2_lambda);
            if cand_loss <= cur_loss {
                weights = cand_w;
                bias = cand_b;
                cur_loss = cand_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        epochs_run += 1;
        history.push(cur_loss);
        if !accepted {
            break;
        }
    }

    Ok(TrainedModel {
        artifact: ModelArtifact {
            weights,
            bias,
            config: config.clone(),
            data_hash: canonical_data_hash(xs, ys),
        },
        loss_history: history,
        final_grad_norm: final_norm,
        epochs_run,
    })
}

pub fn accuracy(artifact: &ModelArtifact, xs: &[SparseVec], ys: &[u8]) -> f64 {
    let hits = xs
        .iter()
        .zip(ys)
        .filter(|(x, &y)| {
            let pred = u8::from(predict_logit(&artifact.weights, artifact.bias, x) >= 0.0);
            pred == y
        })
        .count();
    hits as f64 / xs.len() as f64
}

const MAGIC: &str = "skillcast-model";
const VERSION: u32 = 1;

/// Writes the model as a text header (config, hashes, vocabulary,
/// dense moments) followed by the raw weight vector in little-endian
/// f64, bias last.
pub fn save_model(path: &Path, space: &FeatureSpace, artifact: &ModelArtifact) -> Result<()> {
    if artifact.weights.len() != space.dim() {
        return Err(Error::Data(format!(
            "weight length {} does not match feature dim {}",
            artifact.weights.len(),
            space.dim()
        )));
    }
    let mut buf = Vec::new();
    let c = &artifact.config;
    let fc = &space.config;
    writeln!(buf, "{MAGIC} {VERSION}").unwrap();
    writeln!(buf, "lr {}", c.learning_rate).unwrap();
    writeln!(buf, "l2 {}", c.l2_lambda).unwrap();
    writeln!(buf, "epochs {}", c.max_epochs).unwrap();
    writeln!(buf, "tol {}", c.grad_tol).unwrap();
    writeln!(buf, "seed {}", c.seed).unwrap();
    let sizes: Vec<String> = fc.ngram_sizes.iter().map(|s| s.to_string()).collect();
    writeln!(buf, "sizes {}", sizes.join(" ")).unwrap();
    writeln!(buf, "min_count {}", fc.min_count).unwrap();
    writeln!(
        buf,
        "groups ngrams={} textual={} cognitive={}",
        u8::from(fc.use_ngrams),
        u8::from(fc.textual_metrics),
        u8::from(fc.cognitive_metrics)
    )
    .unwrap();
    writeln!(buf, "data_hash {}", artifact.data_hash).unwrap();
    writeln!(buf, "vocab_hash {}", space.vocab_hash()).unwrap();

    let mut by_index: Vec<(&String, usize)> =
        space.vocabulary.iter().map(|(g, &i)| (g, i)).collect();
    by_index.sort_by_key(|&(_, i)| i);
    writeln!(buf, "vocab {}", by_index.len()).unwrap();
    for (g, _) in by_index {
        writeln!(buf, "{g}").unwrap();
    }
    writeln!(buf, "dense {}", space.dense.len()).unwrap();
    for d in &space.dense {
        writeln!(buf, "{}\t{}\t{}", d.metric.name(), d.mean, d.std).unwrap();
    }
    writeln!(buf, "weights {}", artifact.weights.len() + 1).unwrap();
    for w in &artifact.weights {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    buf.extend_from_slice(&artifact.bias.to_le_bytes());
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

fn field<'a>(line: &'a str, key: &str, path: &Path, lineno: usize) -> Result<&'a str> {
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::parse(path.display().to_string(), lineno, format!("expected `{key} ...`")))
}

pub fn load_model(path: &Path) -> Result<(FeatureSpace, ModelArtifact)> {
    use super::features::{DenseFeature, FeatureConfig};
    use crate::metrics::Metric;
    use std::collections::BTreeSet;
    use std::str::FromStr;

    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut lineno = 0;
    let next = |reader: &mut BufReader<std::fs::File>, lineno: &mut usize| -> Result<String> {
        *lineno += 1;
        let mut line = String::new();
        let n = reader.read_line(&mut line).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            return Err(Error::parse(path.display().to_string(), *lineno, "unexpected end of file"));
        }
        Ok(line.trim_end_matches('\n').to_string())
    };

    let magic = next(&mut reader, &mut lineno)?;
    if magic != format!("{MAGIC} {VERSION}") {
        return Err(Error::parse(path.display().to_string(), lineno, format!("bad header `{magic}`")));
    }
    let parse_f64 = |s: &str, lineno: usize| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::parse(path.display().to_string(), lineno, format!("bad float `{s}`")))
    };
    let parse_usize = |s: &str, lineno: usize| -> Result<usize> {
        s.parse::<usize>().map_err(|_| Error::parse(path.display().to_string(), lineno, format!("bad integer `{s}`")))
    };

    let l = next(&mut reader, &mut lineno)?;
    let learning_rate = parse_f64(field(&l, "lr", path, lineno)?, lineno)?;
    let l = next(&mut reader, &mut lineno)?;
    let l2_lambda = parse_f64(field(&l, "l2", path, lineno)?, lineno)?;
    let l = next(&mut reader, &mut lineno)?;
    let max_epochs = parse_usize(field(&l, "epochs", path, lineno)?, lineno)?;
    let l = next(&mut reader, &mut lineno)?;
    let grad_tol = parse_f64(field(&l, "tol", path, lineno)?, lineno)?;
    let l = next(&mut reader, &mut lineno)?;
    let seed = field(&l, "seed", path, lineno)?
        .parse::<u64>()
        .map_err(|_| Error::parse(path.display().to_string(), lineno, "bad seed"))?;
    let l = next(&mut reader, &mut lineno)?;
    let mut ngram_sizes = BTreeSet::new();
    for tok in field(&l, "sizes", path, lineno)?.split_whitespace() {
        ngram_sizes.insert(parse_usize(tok, lineno)?);
    }
    let l = next(&mut reader, &mut lineno)?;
    let min_count = parse_usize(field(&l, "min_count", path, lineno)?, lineno)?;
    let l = next(&mut reader, &mut lineno)?;
    let groups = field(&l, "groups", path, lineno)?;
    let mut use_ngrams = false;
    let mut textual_metrics = false;
    let mut cognitive_metrics = false;
    for part in groups.split_whitespace() {
        match part.split_once('=') {
            Some(("ngrams", v)) => use_ngrams = v == "1",
            Some(("textual", v)) => textual_metrics = v == "1",
            Some(("cognitive", v)) => cognitive_metrics = v == "1",
            _ => return Err(Error::parse(path.display().to_string(), lineno, format!("bad group flag `{part}`"))),
        }
    }
    let l = next(&mut reader, &mut lineno)?;
    let data_hash = field(&l, "data_hash", path, lineno)?.to_string();
    let l = next(&mut reader, &mut lineno)?;
    let stored_vocab_hash = field(&l, "vocab_hash", path, lineno)?.to_string();

    let l = next(&mut reader, &mut lineno)?;
    let vocab_len = parse_usize(field(&l, "vocab", path, lineno)?, lineno)?;
    let mut vocabulary = std::collections::BTreeMap::new();
    for i in 0..vocab_len {
        let g = next(&mut reader, &mut lineno)?;
        if vocabulary.insert(g.clone(), i).is_some() {
            return Err(Error::parse(path.display().to_string(), lineno, format!("duplicate vocab entry `{g}`")));
        }
    }
    let l = next(&mut reader, &mut lineno)?;
    let dense_len = parse_usize(field(&l, "dense", path, lineno)?, lineno)?;
    let mut dense = Vec::with_capacity(dense_len);
    for _ in 0..dense_len {
        let l = next(&mut reader, &mut lineno)?;
        let mut it = l.split('\t');
        let (name, mean, std) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(Error::parse(path.display().to_string(), lineno, "dense line needs name\\tmean\\tstd")),
        };
        let metric = Metric::from_str(name)
            .map_err(|_| Error::parse(path.display().to_string(), lineno, format!("unknown metric `{name}`")))?;
        dense.push(DenseFeature {
            metric,
            mean: parse_f64(mean, lineno)?,
            std: parse_f64(std, lineno)?,
        });
    }
    let l = next(&mut reader, &mut lineno)?;
    let n_weights = parse_usize(field(&l, "weights", path, lineno)?, lineno)?;
    if n_weights != vocab_len + dense_len + 1 {
        return Err(Error::parse(
            path.display().to_string(),
            lineno,
            format!("weight count {n_weights} != vocab {vocab_len} + dense {dense_len} + 1"),
        ));
    }
    let mut raw = vec![0u8; n_weights * 8];
    reader.read_exact(&mut raw).map_err(|e| Error::io(path, e))?;
    let mut trailing = [0u8; 1];
    if reader.read(&mut trailing).map_err(|e| Error::io(path, e))? != 0 {
        return Err(Error::parse(path.display().to_string(), lineno, "trailing bytes after weights"));
    }
    let mut weights: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let bias = weights.pop().unwrap();

    let space = FeatureSpace {
        config: FeatureConfig {
            ngram_sizes,
            min_count,
            use_ngrams,
            textual_metrics,
            cognitive_metrics,
        },
        vocabulary,
        dense,
    };
    if space.vocab_hash() != stored_vocab_hash {
        return Err(Error::Data(format!(
            "vocabulary hash mismatch in {}: stored {stored_vocab_hash}, computed {}",
            path.display(),
            space.vocab_hash()
        )));
    }
    let artifact = ModelArtifact {
        weights,
        bias,
        config: TrainConfig { learning_rate, l2_lambda, max_epochs, grad_tol, seed },
        data_hash,
    };
    Ok((space, artifact))
}
