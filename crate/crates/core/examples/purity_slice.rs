//! At fixed purity below one the states fill an area of the (C, G) plane;
//! at purity one they collapse onto a single curve.
//!
//!     cargo run --release --example purity_slice

use covent::figures::purity_slice;

fn main() -> covent::Result<()> {
    for (target, window) in [(0.46, 0.005), (1.0, 1e-6)] {
        let slice = purity_slice(target, window, 5000, 3)?;
        println!("purity {target} +/- {window}:");
        println!("  c_lo  c_hi     n   g_spread  spread about pure curve");
        for b in &slice.bins {
            println!(
                "  {:.2}  {:.2}  {:4}  {:9.6}  {:.3e}",
                b.c_lo, b.c_hi, b.n, b.g_spread, b.residual_spread
            );
        }
    }
    Ok(())
}
