//! Shots per setting needed before G certifies entanglement in 95 of 100
//! repetitions at three standard errors.
//!
//!     cargo run --release --example certification_budget

use covent::sampler::shots_for_verdict;
use covent::states::{rho_u, CanonicalState};

fn main() -> covent::Result<()> {
    let singlet = CanonicalState::Singlet.density();
    println!("singlet (G = 3):      {} shots", shots_for_verdict(&singlet, 3.0, 7)?);
    for gamma in [0.4, 0.25, 0.1] {
        let rho = rho_u(gamma, 0.0)?;
        let g = covent::analyze(&rho).g;
        println!("rho_u({gamma}) (G = {g:.2}): {} shots", shots_for_verdict(&rho, 3.0, 7)?);
    }
    Ok(())
}
