//! Compute the full linguistic metric suite for a justification text.
//!
//! Covers readability (Flesch, Dale-Chall), lexicon sentiment with
//! negation and intensifiers, hedge-based uncertainty, temporal
//! orientation, part-of-speech rates, connective rates, and the
//! analytical-style score.

use skillcast::metrics::{compute_record_metrics, Metric, MetricLexicons};

const CONFIDENT: &str = "The rollout is ahead of schedule. Production doubled last quarter \
and the backlog cleared. We will hit the target because demand is strong and costs fell.";

const HEDGED: &str = "This might work, though it seems unlikely the schedule holds. \
Perhaps demand could recover; we suspect the estimates may be too optimistic.";

fn main() {
    let lex = MetricLexicons::bundled();
    let confident = compute_record_metrics(CONFIDENT, lex);
    let hedged = compute_record_metrics(HEDGED, lex);

    println!("{:<28} {:>10} {:>10}", "metric", "confident", "hedged");
    for metric in Metric::ALL {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"));
        println!(
            "{:<28} {:>10} {:>10}",
            metric.name(),
            fmt(confident.get(metric)),
            fmt(hedged.get(metric))
        );
    }
    println!(
        "\nThe hedged text scores {:.2} on uncertain-sentence share vs {:.2} for the confident one.",
        hedged.get(Metric::PctUncertainSentences).unwrap(),
        confident.get(Metric::PctUncertainSentences).unwrap()
    );
}
