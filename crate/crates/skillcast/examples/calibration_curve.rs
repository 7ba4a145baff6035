//! Reliability curves for a calibrated and an overconfident forecaster.
//!
//! A calibrated forecaster's outcomes occur at the stated probability,
//! so every bin sits near the diagonal. The overconfident forecaster
//! pushes estimates toward the extremes and the curve bends away.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use skillcast::scoring::calibration_curve;

fn main() -> skillcast::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut calibrated = Vec::new();
    let mut overconfident = Vec::new();
    for _ in 0..10_000 {
        let p: f64 = rng.random();
        let outcome = u8::from(rng.random::<f64>() < p);
        calibrated.push((p, outcome));
        // Same outcomes, estimates pushed toward 0/1.
        let pushed = if p < 0.5 { p * 0.5 } else { 1.0 - (1.0 - p) * 0.5 };
        overconfident.push((pushed, outcome));
    }

    for (name, forecasts) in [("calibrated", &calibrated), ("overconfident", &overconfident)] {
        let curve = calibration_curve(forecasts, 10)?;
        println!("{name}:");
        println!("  bin           n     mean est  outcome freq  gap");
        for i in 0..10 {
            let (Some(est), Some(freq)) = (curve.mean_estimate[i], curve.frequency[i]) else {
                continue;
            };
            println!(
                "  [{:.1}, {:.1})  {:>5}  {:>8.3}  {:>12.3}  {:>+.3}",
                curve.edges[i],
                curve.edges[i + 1],
                curve.count[i],
                est,
                freq,
                freq - est
            );
        }
        println!();
    }
    Ok(())
}
