//! Estimating G from coincidence counts, e.g. typed in from a lab notebook.
//! Each setting lists n(+,+), n(+,−), n(−,+), n(−,−) for σᵢ on A and σⱼ on B.
//!
//!     cargo run --example lab_counts

use covent::concurrence::concurrence_mixed;
use covent::gmeasure::concurrence_interval;
use covent::sampler::{estimate_g, MeasurementRecord};

const COUNTS: &str = r#"{
  "shots": 1000,
  "seed": 1,
  "counts": {
    "11": [41, 462, 455, 42], "12": [251, 249, 262, 238], "13": [243, 262, 250, 245],
    "21": [248, 247, 244, 261], "22": [38, 457, 469, 36], "23": [255, 251, 241, 253],
    "31": [260, 240, 246, 254], "32": [252, 249, 251, 248], "33": [45, 458, 452, 45]
  }
}"#;

fn main() -> covent::Result<()> {
    let rec: MeasurementRecord = serde_json::from_str(COUNTS)?;
    let est = estimate_g(&rec)?;
    println!("g_hat = {:.4} +/- {:.4}", est.g_hat, est.stderr);
    if est.g_hat - 3.0 * est.stderr > 1.0 {
        let iv = concurrence_interval(est.g_hat.min(3.0))?;
        println!("entangled at 3 standard errors; concurrence roughly in [{:.3}, {:.3}]", iv.c_min, iv.c_max);
    } else {
        println!("not certified");
    }

    // The same numbers from an exactly known state, for comparison.
    let werner = covent::DensityMatrix::mixture(&[
        (0.83, &covent::CanonicalState::Singlet.density()),
        (0.17, &covent::CanonicalState::MaximallyMixed.density()),
    ])?;
    println!(
        "a Werner state with p = 0.83 has G = {:.4} and C = {:.4}",
        covent::analyze(&werner).g,
        concurrence_mixed(&werner)
    );
    Ok(())
}
