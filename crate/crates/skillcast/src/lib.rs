//! Forecasting skill, measured from text. Brier scores standardized
//! within questions make forecasters comparable across questions of
//! different difficulty; a linguistic metric suite over the written
//! justifications, a paired bootstrap group test, and a from-scratch
//! bag-of-n-grams classifier then ask whether good forecasters write
//! differently, and whether text alone predicts who they are. A
//! pattern-based extractor pulls (fiscal period, EPS value) estimates
//! out of analyst notes, and a seeded synthetic generator provides
//! corpora with known ground-truth skill.
//!
//! The examples directory is the front door. Each program is one
//! complete workflow over the public API: `score_and_rank`,
//! `compare_groups`, `text_metrics`, `train_and_evaluate`,
//! `early_identification`, `extract_eps`, `calibration_curve`,
//! `bootstrap_significance`, `financial_errors`, `synth_corpus`. The
//! `skillcast` binary wraps the same calls behind subcommands.
//!
//! Every entry point is deterministic: given the same inputs and seed
//! the output is byte-identical, regardless of thread count.
//!
//! ```
//! use skillcast::scoring::{brier_scores, rank_forecasters};
//! use skillcast::synth::{generate_corpus, SynthConfig, TemplateBank};
//!
//! let config = SynthConfig {
//!     n_authors: 6,
//!     forecasts_per_author: (8, 8),
//!     n_questions: 10,
//!     ..Default::default()
//! };
//! let (records, truth) = generate_corpus(&config, TemplateBank::bundled())?;
//! let report = brier_scores(&records)?;
//! let profiles = rank_forecasters(&report.scored);
//! assert_eq!(profiles.len(), 6);
//! assert!(truth.values().all(|s| (0.0..=1.0).contains(s)));
//! # Ok::<(), skillcast::Error>(())
//! ```

pub mod corpus;
pub mod error;
pub mod extract;
pub mod metrics;
pub mod model;
pub mod scoring;
pub mod report;
pub mod stats;
pub mod synth;
pub mod text;
pub mod util;

pub use error::{Error, Result};
