//! Simulated nine-setting runs: the plug-in estimate of G, its bootstrap
//! error, and how the bias shrinks with the number of shots.
//!
//!     cargo run --release --example finite_shot_estimate

use covent::sampler::{estimate_g, simulate_record};
use covent::states::{rho_u, CanonicalState};

fn main() -> covent::Result<()> {
    let rho = rho_u(0.3, 0.0)?;
    let exact = covent::analyze(&rho).g;
    println!("rho_u(0.3): exact G = {exact:.4}");
    for shots in [100, 1_000, 10_000, 100_000] {
        let est = estimate_g(&simulate_record(&rho, shots, 1)?)?;
        println!(
            "  {shots:>6} shots/setting: g_hat = {:.4} +/- {:.4}  95% [{:.4}, {:.4}]",
            est.g_hat, est.stderr, est.ci_low, est.ci_high
        );
    }

    let mm = CanonicalState::MaximallyMixed.density();
    println!("maximally mixed (G = 0), mean g_hat over 200 runs:");
    for shots in [100u64, 1_000, 10_000] {
        let mean = (0..200)
            .map(|s| estimate_g(&simulate_record(&mm, shots, s).unwrap()).unwrap().g_hat)
            .sum::<f64>()
            / 200.0;
        println!("  {shots:>6} shots: {mean:.5}  (9/N = {:.5})", 9.0 / shots as f64);
    }
    Ok(())
}
