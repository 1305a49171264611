//! Random mixed states of each rank against the two curves of the (C, G)
//! plane. Pass a path to also write the full scatter as CSV.
//!
//!     cargo run --release --example mixed_bounds_scan [out.csv]

use covent::figures::{scan_bounds, RowKind};
use covent::gmeasure::{lower_bound_g, upper_bound_g};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for rank in 1..=4 {
        let rows = scan_bounds(50_000, 2, &[rank])?;
        let samples: Vec<_> = rows.iter().filter(|r| r.kind == RowKind::Sample).collect();
        let below = samples.iter().filter(|r| r.g < lower_bound_g(r.concurrence) - 1e-9).count();
        let above = samples.iter().filter(|r| r.g > upper_bound_g(r.concurrence) + 1e-9).count();
        let deepest = samples
            .iter()
            .map(|r| r.g - lower_bound_g(r.concurrence))
            .fold(f64::INFINITY, f64::min);
        println!(
            "rank {rank}: {} samples, {below} below C^2(2+C^2), {above} above 1+2C^2, min G - C^2(2+C^2) = {deepest:.4}",
            samples.len()
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        let mut w = csv::Writer::from_path(&path)?;
        for row in scan_bounds(10_000, 2, &[1, 2, 3, 4])? {
            w.serialize(row)?;
        }
        w.flush()?;
        println!("wrote {path}");
    }
    Ok(())
}
