//! Text-only skill classification: n-gram features, logistic
//! regression trained from scratch, and the evaluation protocols
//! built on top of it.

pub mod eval;
pub mod features;
pub mod logreg;

pub use eval::{
    crossval_accuracy, financial_split, precision_at_n, select_record_groups, top_features,
    CrossvalReport, EarlyAuthor, FinancialSplit, LabeledRecord, PrecisionReport,
};
pub use features::{Example, FeatureConfig, FeatureSpace, SparseVec, COGNITIVE_METRICS, TEXTUAL_METRICS, UNK};
pub use logreg::{
    accuracy, gradient, load_model, loss, predict_logit, predict_proba, save_model, train_logreg,
    ModelArtifact, TrainConfig, TrainedModel,
};
