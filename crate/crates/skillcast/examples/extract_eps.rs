//! Extract EPS estimates from analyst note sentences.
//!
//! Masks money and time entities, matches lexico-syntactic patterns over
//! the masked token stream, picks the earliest dated estimate, and scores
//! the output against a small gold set.

use skillcast::extract::{
    bundled_patterns, earliest_forecast, evaluate_extraction, extract_eps, ExtractionTuple,
};

const NOTES: [(&str, &str); 3] = [
    (
        "n1",
        "We trim our 12-month target price to $20 from $23 , 10X our '16 EPS estimate of $2.01 -LRB- trimmed today from $2.10 -RRB- .",
    ),
    ("n2", "We raise '18 and '19 EPS estimates by $4.61 and $5.72 to $19.85 and $25.95 ."),
    ("n3", "We raise our FY 17 EPS estimate to $3.23 from $2.96 and set FY 18 's at $3.43 ."),
];

fn main() -> skillcast::Result<()> {
    let patterns = bundled_patterns();
    let mut predicted = Vec::new();

    for (id, text) in NOTES {
        println!("note {id}: {text}");
        let mut estimates = extract_eps(text, patterns);
        for est in &mut estimates {
            est.record_id = id.to_string();
            println!(
                "  pattern {:>2}: time {:<6} value {:>6.2}  (bytes {}..{})",
                est.pattern_id, est.time_label, est.value, est.span.start, est.span.end
            );
        }
        let (earliest, warnings) = earliest_forecast(&estimates, 1990..=2068);
        for w in warnings {
            println!("  warning: {w}");
        }
        if let Some(e) = earliest {
            println!("  earliest: {} at {:.2}", e.time_label, e.value);
        }
        predicted.extend(estimates.into_iter().map(|e| ExtractionTuple {
            record_id: e.record_id,
            time_label: e.time_label,
            value: e.value,
        }));
        println!();
    }

    // Gold uses calendar years; labels like "'16" normalize before matching.
    let gold: Vec<ExtractionTuple> = [
        ("n1", "2016", 2.01),
        ("n2", "2018", 19.85),
        ("n2", "2019", 25.95),
        ("n3", "2017", 3.23),
        ("n3", "2018", 3.43),
    ]
    .into_iter()
    .map(|(id, label, value)| ExtractionTuple {
        record_id: id.to_string(),
        time_label: label.to_string(),
        value,
    })
    .collect();

    let eval = evaluate_extraction(&predicted, &gold)?;
    println!(
        "precision {} / recall {:.2} ({} of {} gold tuples)",
        eval.precision.map_or("n/a".to_string(), |p| format!("{p:.2}")),
        eval.recall,
        eval.correct,
        eval.n_gold
    );
    Ok(())
}
