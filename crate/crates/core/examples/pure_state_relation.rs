//! For pure states G is a function of the concurrence alone.
//!
//!     cargo run --release --example pure_state_relation

use covent::concurrence::{concurrence_pure, g_pure_from_invariants, pure_invariants};
use covent::ensembles::haar_pure;
use covent::gmeasure::lower_bound_g;
use covent::states::from_pure;

fn main() {
    let n = 10_000;
    let mut worst = 0.0f64;
    let mut worst_inv = 0.0f64;
    for i in 0..n {
        let p = haar_pure(1, i);
        let c = concurrence_pure(&p);
        let g = covent::analyze(&from_pure(&p)).g;
        worst = worst.max((g - lower_bound_g(c)).abs());
        worst_inv = worst_inv.max((g_pure_from_invariants(&pure_invariants(&p)) - g).abs());
        if i < 5 {
            println!("C = {c:.6}  G = {g:.6}  C^2(2+C^2) = {:.6}", lower_bound_g(c));
        }
    }
    println!("{n} Haar states: max |G - C^2(2+C^2)| = {worst:.2e}, invariant form off by {worst_inv:.2e}");
}
