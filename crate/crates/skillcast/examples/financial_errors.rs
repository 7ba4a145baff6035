//! EPS forecast errors: relative error, per-analyst standardization,
//! record labeling, and the company-disjoint train/dev/test split.
//!
//! Relative error |estimate - actual| / |actual| is scale-free but
//! explodes near zero actuals: a $1.63 estimate against a -$0.01 actual
//! scores 164. Standardizing within each analyst against the moments of
//! their own 90% best errors makes records comparable across analysts.

use chrono::{TimeZone, Utc};
use skillcast::corpus::{DomainTag, ForecastRecord};
use skillcast::model::{financial_split, select_record_groups, LabeledRecord};
use skillcast::scoring::{eps_error, standardize_analyst_errors};
use std::collections::BTreeMap;

fn main() -> skillcast::Result<()> {
    println!("eps_error(1.63, -0.01) = {}", eps_error(1.63, -0.01)?);
    println!("eps_error(2.10, 2.00)  = {:.3}\n", eps_error(2.10, 2.00)?);

    // Two analysts forecasting eight companies over 2014-2018. Analyst
    // an1 is precise; an0's errors grow with the record index.
    let mut records = Vec::new();
    let mut errors: BTreeMap<&str, Vec<(String, f64)>> = BTreeMap::new();
    for a in 0..2 {
        for f in 0..120usize {
            let company = format!("c{}", f % 8);
            let year = 2014 + (f % 5) as i32;
            let actual = 2.0 + (f % 7) as f64 * 0.25;
            let estimate = match a {
                0 => actual + 0.02 * f as f64,
                _ => actual + 0.05,
            };
            let record_id = format!("an{a}-r{f:03}");
            records.push(ForecastRecord {
                record_id: record_id.clone(),
                author_id: format!("an{a}"),
                target_id: company,
                timestamp: Utc.with_ymd_and_hms(year, 6, 1, 0, 0, 0).unwrap(),
                estimate,
                justification: String::new(),
                outcome: Some(actual),
                domain_tag: DomainTag::Eps,
            });
            errors
                .entry(if a == 0 { "an0" } else { "an1" })
                .or_default()
                .push((record_id, eps_error(estimate, actual)?));
        }
    }

    // Standardize each analyst against their own trimmed error moments.
    let mut std_errors = BTreeMap::new();
    for errs in errors.values() {
        std_errors.extend(standardize_analyst_errors(errs, 0.9, 100)?.std_errors);
    }

    // Label the 80 most and 80 least accurate records.
    let (accurate, inaccurate) = select_record_groups(&std_errors, 80)?;
    let label_of: BTreeMap<&str, u8> = accurate
        .iter()
        .map(|id| (id.as_str(), 1))
        .chain(inaccurate.iter().map(|id| (id.as_str(), 0)))
        .collect();
    let labeled: Vec<LabeledRecord> = records
        .iter()
        .filter(|r| label_of.contains_key(r.record_id.as_str()))
        .map(|r| LabeledRecord { record: r.clone(), label: label_of[r.record_id.as_str()] })
        .collect();

    // 80/20 company split; train years 2014-2016, dev 2017, test 2018.
    let split = financial_split(&labeled, 0.2, 4)?;
    for (name, part) in [("train", &split.train), ("dev", &split.dev), ("test", &split.test)] {
        let pos = part.iter().filter(|r| r.label == 1).count();
        println!("{name:<5}  {:>3} records  ({pos} accurate / {} not)", part.len(), part.len() - pos);
    }
    println!(
        "companies: {:?} train / {:?} eval, never shared",
        split.train_companies, split.eval_companies
    );
    Ok(())
}
