use proptest::prelude::*;

use covent::concurrence::concurrence_mixed;
use covent::ensembles::{ginibre, haar_pure, random_local_unitary, separable_mixture, EnsembleKind, EnsembleSpec};
use covent::gmeasure::{analyze, concurrence_interval, g_cov_of_operator, g_hs_of_operator, l3};
use covent::linalg::{partial_transpose, Subsystem};
use covent::observables::{correlation_data, covariance, local_a, local_b, variance};
use covent::sampler::MeasurementRecord;
use covent::states::{apply_local_unitary, from_pure, purity, DensityMatrix};

fn any_state() -> impl Strategy<Value = DensityMatrix> {
    (any::<u64>(), 0u64..1_000_000, 1usize..=4).prop_map(|(seed, i, rank)| ginibre(seed, i, rank).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn local_unitaries_preserve_g_and_concurrence(rho in any_state(), seed in any::<u64>(), i in any::<u64>()) {
        let (ua, ub) = random_local_unitary(seed, i);
        let moved = apply_local_unitary(&rho, &ua, &ub).unwrap();
        let (a, b) = (analyze(&rho), analyze(&moved));
        prop_assert!((a.g - b.g).abs() <= 1e-9);
        prop_assert!((a.g_hs - b.g_hs).abs() <= 1e-9);
        prop_assert!((concurrence_mixed(&rho) - concurrence_mixed(&moved)).abs() <= 1e-9);
        prop_assert!((purity(&rho) - purity(&moved)).abs() <= 1e-12);
    }

    #[test]
    fn partial_transpose_preserves_g(rho in any_state()) {
        let g = analyze(&rho).g;
        for sub in [Subsystem::A, Subsystem::B] {
            let pt = partial_transpose(rho.mat(), sub).unwrap();
            prop_assert!((g_hs_of_operator(&pt).unwrap() - g).abs() <= 1e-9);
            prop_assert!((g_cov_of_operator(&pt).unwrap() - g).abs() <= 1e-9);
        }
    }

    #[test]
    fn covariance_bounded_by_local_variances(rho in any_state()) {
        for i in 1..=3 {
            for j in 1..=3 {
                let c = covariance(&rho, i, j).unwrap();
                let s = variance(&rho, local_a(i)).unwrap() + variance(&rho, local_b(j)).unwrap();
                prop_assert!(2.0 * c <= s + 1e-12 && -2.0 * c <= s + 1e-12, "axes {i}{j}: c {c}, s {s}");
            }
        }
    }

    #[test]
    fn ranges(rho in any_state()) {
        let r = analyze(&rho);
        let p = purity(&rho);
        prop_assert!((0.25..=1.0).contains(&p));
        prop_assert!((0.0..=3.0).contains(&r.g));
        prop_assert!((-1e-12..=8.0 + 1e-12).contains(&r.l3));
        prop_assert!(r.c_min <= r.c_max);
        let c = concurrence_mixed(&rho);
        prop_assert!((0.0..=1.0).contains(&c));
        // Upper curve: G ≤ 1 + 2C².
        prop_assert!(r.g <= 1.0 + 2.0 * c * c + 1e-9);
    }

    #[test]
    fn pure_states_sit_inside_their_interval(seed in any::<u64>(), i in any::<u64>()) {
        let rho = from_pure(&haar_pure(seed, i));
        let iv = concurrence_interval(analyze(&rho).g).unwrap();
        prop_assert!(iv.contains(concurrence_mixed(&rho), 1e-9));
    }

    #[test]
    fn separable_mixtures_are_never_certified(seed in any::<u64>(), i in any::<u64>(), terms in 1usize..10) {
        let rho = separable_mixture(seed, i, terms).unwrap();
        prop_assert!(analyze(&rho).g <= 1.0 + 1e-9);
        prop_assert!(l3(&rho) >= 4.0 - 1e-9);
        prop_assert!(concurrence_mixed(&rho) <= 1e-9);
    }

    #[test]
    fn pure_product_states_have_zero_covariance(seed in any::<u64>(), i in any::<u64>()) {
        let rho = separable_mixture(seed, i, 1).unwrap();
        for row in correlation_data(&rho).cov {
            for c in row {
                prop_assert!(c.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn record_json_round_trip(shots in 1u64..1_000_000_000, seed in any::<u64>(), cuts in prop::array::uniform9(prop::array::uniform3(0.0f64..1.0))) {
        let mut counts = [[[0u64; 4]; 3]; 3];
        for (k, cut) in cuts.iter().enumerate() {
            let mut c = cut.map(|x| (x * shots as f64) as u64);
            c.sort_unstable();
            counts[k / 3][k % 3] = [c[0], c[1] - c[0], c[2] - c[1], shots - c[2]];
        }
        let rec = MeasurementRecord { shots_per_setting: shots, counts, seed };
        let text = serde_json::to_string(&rec).unwrap();
        let back: MeasurementRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn state_json_round_trip(rho in any_state()) {
        let text = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.mat().entries(), rho.mat().entries());
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ensembles_are_order_independent(seed in any::<u64>(), kind in 0usize..4) {
        let kind = [EnsembleKind::HaarPure, EnsembleKind::Ginibre, EnsembleKind::SeparableMixture, EnsembleKind::RhoUSweep][kind];
        let mut spec = EnsembleSpec::new(kind, 40, seed);
        if kind == EnsembleKind::Ginibre {
            spec.rank = Some(3);
        }
        if kind == EnsembleKind::SeparableMixture {
            spec.mixture_terms = Some(4);
        }
        let all = spec.generate().unwrap();
        for i in (0..40).rev().step_by(7) {
            let one = spec.sample(i).unwrap();
            prop_assert_eq!(one.mat().entries(), all[i as usize].mat().entries());
        }
        let again = spec.generate().unwrap();
        prop_assert_eq!(all, again);
    }
}
