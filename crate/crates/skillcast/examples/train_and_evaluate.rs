//! Train the bag-of-n-grams skill classifier and cross-validate it.
//!
//! Authors are labeled by their standardized Brier ranking (best K vs.
//! worst K), featurized as unigram+bigram counts over all their
//! justifications, and classified with from-scratch logistic regression.
//! Prints per-fold accuracies and the heaviest features per side.

use skillcast::model::{
    crossval_accuracy, top_features, train_logreg, Example, FeatureConfig, FeatureSpace,
    TrainConfig,
};
use skillcast::scoring::{brier_scores, rank_forecasters, select_groups};
use skillcast::synth::{generate_corpus, SynthConfig, TemplateBank};
use std::collections::BTreeMap;

fn main() -> skillcast::Result<()> {
    let config = SynthConfig {
        n_authors: 100,
        forecasts_per_author: (25, 25),
        n_questions: 60,
        seed: 11,
        ..Default::default()
    };
    let (records, _) = generate_corpus(&config, TemplateBank::bundled())?;

    // Label: 1 = top-25 author by mean standardized Brier, 0 = bottom-25.
    let report = brier_scores(&records)?;
    let mut profiles = rank_forecasters(&report.scored);
    let (top_ids, bottom_ids) = select_groups(&mut profiles, 25)?;
    let mut texts: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for r in &records {
        texts.entry(r.author_id.as_str()).or_default().push(r.justification.clone());
    }
    let mut examples = Vec::new();
    for (ids, label) in [(&top_ids, 1u8), (&bottom_ids, 0u8)] {
        for id in ids {
            examples.push(Example { id: id.clone(), texts: texts[id.as_str()].clone(), label });
        }
    }

    let fconfig = FeatureConfig::default();
    let tconfig = TrainConfig::default();

    let cv = crossval_accuracy(&examples, 5, 11, &fconfig, &tconfig)?;
    println!("5-fold cross-validation on {} authors:", cv.n_examples);
    for (i, acc) in cv.fold_accuracies.iter().enumerate() {
        println!("  fold {}: {:.3}", i + 1, acc);
    }
    println!("  mean:   {:.3}  (0.5 = chance)\n", cv.mean_accuracy);

    // Full-data fit to inspect what the classifier keys on.
    let space = FeatureSpace::build(&examples, fconfig)?;
    let xs: Vec<_> = examples.iter().map(|e| space.featurize(&e.texts)).collect::<Result<_, _>>()?;
    let ys: Vec<u8> = examples.iter().map(|e| e.label).collect();
    let trained = train_logreg(&xs, &ys, space.dim(), &tconfig)?;
    println!(
        "full fit: {} features, {} epochs, final loss {:.4}",
        space.dim(),
        trained.epochs_run,
        trained.loss_history.last().unwrap()
    );

    let (skilled, unskilled) = top_features(&trained.artifact, &space, 8)?;
    println!("\nheaviest features toward the skilled class:");
    for (feature, weight) in &skilled {
        println!("  {weight:>8.4}  {feature}");
    }
    println!("heaviest features toward the unskilled class:");
    for (feature, weight) in &unskilled {
        println!("  {weight:>8.4}  {feature}");
    }
    Ok(())
}
