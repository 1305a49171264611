//! G, L₃, verdict and the compatible concurrence range for reference states.
//!
//!     cargo run --example measure_g

use covent::concurrence::concurrence_mixed;
use covent::states::{rho_u, CanonicalState};
use covent::{analyze, DensityMatrix};

fn show(name: &str, rho: &DensityMatrix) {
    let r = analyze(rho);
    println!(
        "{name:<24} G {:.4}  G_HS {:.4}  L3 {:.4}  {:<20} C in [{:.4}, {:.4}]  (C = {:.4})",
        r.g,
        r.g_hs,
        r.l3,
        r.verdict.as_str(),
        r.c_min,
        r.c_max,
        concurrence_mixed(rho)
    );
}

fn main() -> covent::Result<()> {
    for st in CanonicalState::ALL {
        show(st.name(), &st.density());
    }
    for gamma in [0.1, 0.25, 0.4] {
        show(&format!("rho_u(gamma = {gamma})"), &rho_u(gamma, 0.3)?);
    }
    Ok(())
}
