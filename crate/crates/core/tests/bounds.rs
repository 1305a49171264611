use rayon::prelude::*;

use covent::concurrence::{concurrence_mixed, concurrence_mixed_hermitian};
use covent::ensembles::{ginibre, haar_pure, separable_mixture};
use covent::figures::{scan_bounds, violates_bounds, RowKind};
use covent::gmeasure::{analyze, concurrence_interval, lower_bound_g, upper_bound_g};
use covent::states::from_pure;

#[test]
fn full_rank_states_stay_inside_the_region() {
    let bad: usize = (0..100_000u64)
        .into_par_iter()
        .map(|i| {
            let rho = ginibre(41, i, 4).unwrap();
            usize::from(violates_bounds(concurrence_mixed(&rho), analyze(&rho).g))
        })
        .sum();
    assert_eq!(bad, 0);
}

#[test]
fn upper_curve_holds_for_every_rank() {
    let worst = (0..40_000u64)
        .into_par_iter()
        .map(|i| {
            let rho = ginibre(42, i, 1 + (i % 4) as usize).unwrap();
            let c = concurrence_mixed(&rho);
            analyze(&rho).g - upper_bound_g(c)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-9, "{worst}");
}

/// A rank-2 state below the pure-state curve. Reference values from a
/// 50-digit evaluation (Pauli covariances, Wootters via the eigenvalues of
/// ρρ̃).
#[test]
fn rank_two_state_below_the_pure_curve() {
    let rho = ginibre(0x5eed_2007, 128, 2).unwrap();
    let g = analyze(&rho).g;
    let c = concurrence_mixed(&rho);
    assert!((g - 0.352_126_881_859_913).abs() < 1e-12, "{g}");
    assert!((c - 0.416_170_908_863_598_6).abs() < 1e-12, "{c}");
    assert!((concurrence_mixed_hermitian(&rho) - c).abs() < 1e-7);
    assert!(g < lower_bound_g(c) - 0.02);
    assert!(g < upper_bound_g(c));

    // The interval built from G misses the true concurrence.
    let iv = concurrence_interval(g).unwrap();
    assert!(c > iv.c_max);

    let rows = scan_bounds(200, 0x5eed_2007, &[2]).unwrap();
    let flagged = rows.iter().filter(|r| r.kind == RowKind::Sample && r.violates == 1).count();
    assert!(flagged > 0);
}

#[test]
fn pure_and_separable_states_respect_both_curves() {
    for i in 0..2000u64 {
        let rho = from_pure(&haar_pure(43, i));
        assert!(!violates_bounds(concurrence_mixed(&rho), analyze(&rho).g));
        let rho = separable_mixture(43, i, 1 + (i % 8) as usize).unwrap();
        assert!(!violates_bounds(concurrence_mixed(&rho), analyze(&rho).g));
    }
}
