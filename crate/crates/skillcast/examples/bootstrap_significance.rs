//! Seeded bootstrap significance testing and rank correlation.
//!
//! Shows the two-sample bootstrap on a planted mean difference, the null
//! behavior on exchangeable groups, Bonferroni correction across a
//! family of tests, and Spearman rank correlation.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use skillcast::stats::{bonferroni, bootstrap_test, spearman_rho};
use std::collections::BTreeMap;

fn main() -> skillcast::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let draw = |rng: &mut ChaCha8Rng, shift: f64, n: usize| -> Vec<f64> {
        (0..n).map(|_| noise.sample(rng) + shift).collect()
    };

    let group_a = draw(&mut rng, 0.0, 150);
    let shifted = draw(&mut rng, 0.6, 150);
    let exchangeable = draw(&mut rng, 0.0, 150);

    let planted = bootstrap_test(&group_a, &shifted, 10_000, 5)?;
    let null = bootstrap_test(&group_a, &exchangeable, 10_000, 5)?;
    println!("planted 0.6 shift: p = {:.4} ({:?})", planted.p_value, planted.direction);
    println!("no true difference: p = {:.4}\n", null.p_value);

    // Family of 6 tests; only the corrected threshold separates them.
    let mut p_values = BTreeMap::new();
    p_values.insert("planted".to_string(), planted.p_value);
    p_values.insert("null".to_string(), null.p_value);
    for i in 0..4 {
        let other = draw(&mut rng, 0.0, 150);
        let t = bootstrap_test(&group_a, &other, 10_000, 10 + i)?;
        p_values.insert(format!("null_{i}"), t.p_value);
    }
    let passes = bonferroni(&p_values, 0.05, p_values.len())?;
    for (name, p) in &p_values {
        println!("{name:<9} p {:<7.4} {}", p, if passes[name] { "significant" } else { "" });
    }

    // Spearman is rank-based: any monotone transform leaves it alone.
    let x: Vec<f64> = (0..50).map(f64::from).collect();
    let noisy: Vec<f64> = x.iter().map(|v| v + 8.0 * noise.sample(&mut rng)).collect();
    let transformed: Vec<f64> = noisy.iter().map(|v| v.exp() / 1e6).collect();
    println!("\nspearman(x, noisy)        = {:.4}", spearman_rho(&x, &noisy)?);
    println!("spearman(x, exp(noisy))   = {:.4}", spearman_rho(&x, &transformed)?);
    Ok(())
}
