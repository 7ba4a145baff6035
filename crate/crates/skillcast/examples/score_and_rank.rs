//! Score a corpus and rank its authors.
//!
//! Generates a small synthetic corpus with known author skill, Brier-scores
//! every resolved forecast, standardizes within questions, and prints the
//! author ranking next to the planted ground truth.

use skillcast::scoring::{brier_scores, rank_forecasters, select_groups};
use skillcast::synth::{generate_corpus, SynthConfig, TemplateBank};

fn main() -> skillcast::Result<()> {
    let config = SynthConfig {
        n_authors: 12,
        forecasts_per_author: (30, 30),
        n_questions: 40,
        seed: 1,
        ..Default::default()
    };
    let (records, truth) = generate_corpus(&config, TemplateBank::bundled())?;

    let report = brier_scores(&records)?;
    println!(
        "{} forecasts scored, {} skipped, {} degenerate questions\n",
        report.scored.len(),
        report.skipped_unresolved,
        report.degenerate_questions.len()
    );

    let mut profiles = rank_forecasters(&report.scored);
    let (top, bottom) = select_groups(&mut profiles, 3)?;

    println!("rank  author  mean std brier  true skill");
    for p in &profiles {
        println!(
            "{:>4}  {}  {:>14.4}  {:>10.3}",
            p.rank, p.author_id, p.mean_std_brier, truth[&p.author_id]
        );
    }
    println!("\nbest 3:  {}", top.join(", "));
    println!("worst 3: {}", bottom.join(", "));
    Ok(())
}
