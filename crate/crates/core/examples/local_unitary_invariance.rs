//! G and the concurrence ignore local unitaries and partial transposition;
//! the L₃ test does not.
//!
//!     cargo run --release --example local_unitary_invariance

use covent::concurrence::concurrence_mixed;
use covent::ensembles::{ginibre, random_local_unitary};
use covent::gmeasure::{g_hs_of_operator, l3};
use covent::linalg::{partial_transpose, pauli, Subsystem};
use covent::states::{apply_local_unitary, CanonicalState};

fn main() -> covent::Result<()> {
    let (mut dg, mut dc, mut dpt) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..10_000 {
        let rho = ginibre(4, i, 1 + (i % 4) as usize)?;
        let (ua, ub) = random_local_unitary(4, i);
        let moved = apply_local_unitary(&rho, &ua, &ub)?;
        let g = covent::analyze(&rho).g;
        dg = dg.max((covent::analyze(&moved).g - g).abs());
        dc = dc.max((concurrence_mixed(&moved) - concurrence_mixed(&rho)).abs());
        let pt = partial_transpose(rho.mat(), Subsystem::B)?;
        dpt = dpt.max((g_hs_of_operator(&pt)? - g).abs());
    }
    println!("10^4 random states: max change of G {dg:.1e}, of C {dc:.1e}, of G under partial transpose {dpt:.1e}");

    let singlet = CanonicalState::Singlet.density();
    let flipped = apply_local_unitary(&singlet, &pauli(0), &pauli(1))?;
    println!(
        "singlet:           L3 = {:.3} (< 4, entanglement detected), G = {:.3}",
        l3(&singlet),
        covent::analyze(&singlet).g
    );
    println!(
        "after sigma_1 on B: L3 = {:.3} (not detected),           G = {:.3}",
        l3(&flipped),
        covent::analyze(&flipped).g
    );
    Ok(())
}
