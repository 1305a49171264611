//! Seeded random states and local unitaries.
//!
//! Every sample is a pure function of `(seed, stream, index)`: the generator
//! is ChaCha8 keyed by the seed and the stream id, with the sample index as
//! its 64-bit stream selector. A sample never depends on which other indices
//! were drawn or in which order, so ensembles can be generated in parallel
//! and still come out byte-identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64};
use crate::states::{from_pure, purity, rho_u, DensityMatrix, PureState};

/// Attempts allowed in [`fixed_purity`] before giving up.
pub const FIXED_PURITY_MAX_ATTEMPTS: u64 = 1_000_000;

/// Independent random streams; each consumer of randomness owns one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    HaarPure,
    Ginibre(usize),
    FixedPurity,
    SeparableMixture,
    LocalUnitary,
    RhoUSweep,
    Shots,
    Bootstrap,
    Trials,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Self::HaarPure => 1,
            Self::Ginibre(rank) => 0x100 + rank as u64,
            Self::FixedPurity => 3,
            Self::SeparableMixture => 4,
            Self::LocalUnitary => 5,
            Self::RhoUSweep => 6,
            Self::Shots => 7,
            Self::Bootstrap => 8,
            Self::Trials => 9,
        }
    }
}

/// The generator for sample `index` of `stream` under `seed`.
pub fn rng_for(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.id().to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Derives a child seed, e.g. one per trial of a repeated experiment.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    rng_for(seed, Stream::Trials, index).random()
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    loop {
        let v = [complex_normal(rng), complex_normal(rng)];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n > 1e-300 {
            return [v[0] / n, v[1] / n];
        }
    }
}

/// Haar-random two-qubit pure state.
pub fn haar_pure(seed: u64, index: u64) -> PureState {
    let mut rng = rng_for(seed, Stream::HaarPure, index);
    loop {
        let amps = [(); 4].map(|_| complex_normal(&mut rng));
        if let Ok(p) = PureState::normalized(amps) {
            return p;
        }
    }
}

fn ginibre_from<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> DensityMatrix {
    loop {
        let x: Vec<C64> = (0..4 * rank).map(|_| complex_normal(rng)).collect();
        let mut m = CMat::zeros_unchecked(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = (0..rank).map(|k| x[i * rank + k] * x[j * rank + k].conj()).sum();
            }
        }
        let tr = m.trace().re;
        if tr > 1e-300 {
            if let Ok(rho) = DensityMatrix::new(m.scale(c(1.0 / tr, 0.0))) {
                return rho;
            }
        }
    }
}

fn check_rank(rank: usize) -> Result<()> {
    if (1..=4).contains(&rank) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("rank {rank} outside 1..=4")))
    }
}

/// `XX†/Tr(XX†)` with `X` a 4×rank matrix of complex standard normals
/// (Hilbert–Schmidt induced measure).
pub fn ginibre(seed: u64, index: u64, rank: usize) -> Result<DensityMatrix> {
    check_rank(rank)?;
    Ok(ginibre_from(&mut rng_for(seed, Stream::Ginibre(rank), index), rank))
}

/// First full-rank Ginibre draw whose purity lies in
/// `[target − window, target + window]`.
///
/// Windows that reach purity 1 have measure zero under the full-rank
/// ensemble; for those the candidates are rank-1 (pure) draws instead.
pub fn fixed_purity(seed: u64, index: u64, target: f64, window: f64) -> Result<DensityMatrix> {
    fixed_purity_capped(seed, index, target, window, FIXED_PURITY_MAX_ATTEMPTS)
}

pub(crate) fn fixed_purity_capped(
    seed: u64,
    index: u64,
    target: f64,
    window: f64,
    max_attempts: u64,
) -> Result<DensityMatrix> {
    if !(0.25..=1.0).contains(&target) {
        return Err(Error::InvalidArgument(format!(
            "purity target {target} outside [1/4, 1]"
        )));
    }
    if !(window > 0.0) || !window.is_finite() {
        return Err(Error::InvalidArgument(format!("purity window {window} must be > 0")));
    }
    let (lo, hi) = (target - window, target + window);
    let rank = if hi >= 1.0 { 1 } else { 4 };
    let mut rng = rng_for(seed, Stream::FixedPurity, index);
    for _ in 0..max_attempts {
        let rho = ginibre_from(&mut rng, rank);
        let p = purity(&rho);
        if (lo..=hi).contains(&p) {
            return Ok(rho);
        }
    }
    Err(Error::RejectionExhausted {
        lo,
        hi,
        attempts: max_attempts,
    })
}

/// `Σₖ pₖ |aₖ⟩⟨aₖ| ⊗ |bₖ⟩⟨bₖ|` with Haar-random qubit factors and
/// flat-Dirichlet weights.
pub fn separable_mixture(seed: u64, index: u64, terms: usize) -> Result<DensityMatrix> {
    if terms == 0 {
        return Err(Error::InvalidArgument("mixture needs at least one term".into()));
    }
    let mut rng = rng_for(seed, Stream::SeparableMixture, index);
    let weights: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = CMat::zeros_unchecked(4);
    for w in weights {
        let a = haar_qubit(&mut rng);
        let b = haar_qubit(&mut rng);
        let rho = from_pure(&PureState::product(a, b)?);
        acc = &acc + &rho.mat().scale(c(w / total, 0.0));
    }
    DensityMatrix::new(acc)
}

fn haar_unitary_2<R: Rng + ?Sized>(rng: &mut R) -> CMat {
    loop {
        let u = haar_qubit(rng);
        let v = [complex_normal(rng), complex_normal(rng)];
        // Gram–Schmidt the second column against the first.
        let overlap = u[0].conj() * v[0] + u[1].conj() * v[1];
        let w = [v[0] - overlap * u[0], v[1] - overlap * u[1]];
        let n = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if n < 1e-8 {
            continue;
        }
        let w = [w[0] / n, w[1] / n];
        return CMat::from_rows([[u[0], w[0]], [u[1], w[1]]]).expect("2x2");
    }
}

/// Two independent Haar-random single-qubit unitaries `(u_a, u_b)`.
pub fn random_local_unitary(seed: u64, index: u64) -> (CMat, CMat) {
    let mut rng = rng_for(seed, Stream::LocalUnitary, index);
    let ua = haar_unitary_2(&mut rng);
    let ub = haar_unitary_2(&mut rng);
    (ua, ub)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    HaarPure,
    Ginibre,
    FixedPurity,
    SeparableMixture,
    RhoUSweep,
}

/// Recipe for a reproducible ensemble of states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity_target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity_window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixture_terms: Option<usize>,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, count: u64, seed: u64) -> Self {
        Self {
            kind,
            count,
            rank: None,
            purity_target: None,
            purity_window: None,
            mixture_terms: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidArgument("count must be >= 1".into()));
        }
        match self.kind {
            EnsembleKind::Ginibre => check_rank(self.rank.unwrap_or(4)),
            EnsembleKind::FixedPurity => {
                let (t, w) = self.purity_params()?;
                if !(0.25..=1.0).contains(&t) {
                    return Err(Error::InvalidArgument(format!("purity target {t} outside [1/4, 1]")));
                }
                if !(w > 0.0) {
                    return Err(Error::InvalidArgument(format!("purity window {w} must be > 0")));
                }
                Ok(())
            }
            EnsembleKind::SeparableMixture => {
                if self.mixture_terms.unwrap_or(1) == 0 {
                    return Err(Error::InvalidArgument("mixture_terms must be >= 1".into()));
                }
                Ok(())
            }
            EnsembleKind::HaarPure | EnsembleKind::RhoUSweep => Ok(()),
        }
    }

    fn purity_params(&self) -> Result<(f64, f64)> {
        match (self.purity_target, self.purity_window) {
            (Some(t), Some(w)) => Ok((t, w)),
            _ => Err(Error::InvalidArgument(
                "fixed_purity needs purity_target and purity_window".into(),
            )),
        }
    }

    /// The `index`-th member of the ensemble.
    pub fn sample(&self, index: u64) -> Result<DensityMatrix> {
        let seed = self.seed;
        match self.kind {
            EnsembleKind::HaarPure => Ok(from_pure(&haar_pure(seed, index))),
            EnsembleKind::Ginibre => ginibre(seed, index, self.rank.unwrap_or(4)),
            EnsembleKind::FixedPurity => {
                let (t, w) = self.purity_params()?;
                fixed_purity(seed, index, t, w)
            }
            EnsembleKind::SeparableMixture => {
                separable_mixture(seed, index, self.mixture_terms.unwrap_or(1))
            }
            EnsembleKind::RhoUSweep => {
                // γ on an even grid over [0, 1/2]; θ drawn per sample.
                let gamma = if self.count > 1 {
                    0.5 * index as f64 / (self.count - 1) as f64
                } else {
                    0.0
                };
                let theta = rng_for(seed, Stream::RhoUSweep, index)
                    .random_range(0.0..std::f64::consts::TAU);
                rho_u(gamma.min(0.5), theta)
            }
        }
    }

    /// All members, in index order. Generated in parallel.
    pub fn generate(&self) -> Result<Vec<DensityMatrix>> {
        self.validate()?;
        (0..self.count)
            .into_par_iter()
            .map(|i| self.sample(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::concurrence_pure;

    #[test]
    fn haar_is_deterministic_and_order_free() {
        let a = haar_pure(7, 3);
        let _ = haar_pure(7, 4);
        assert_eq!(a, haar_pure(7, 3));
        assert_ne!(a, haar_pure(7, 4));
        assert_ne!(a, haar_pure(8, 3));
    }

    #[test]
    fn haar_mean_concurrence() {
        // Known Haar average of the two-qubit concurrence: 3π/16.
        let n = 20_000;
        let mean: f64 = (0..n).map(|i| concurrence_pure(&haar_pure(11, i))).sum::<f64>() / n as f64;
        assert!((mean - 3.0 * std::f64::consts::PI / 16.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn ginibre_rank_and_determinism() {
        for rank in 1..=4 {
            let rho = ginibre(5, 9, rank).unwrap();
            assert_eq!(rho, ginibre(5, 9, rank).unwrap());
            let ev = rho.eigenvalues();
            let nonzero = ev.iter().filter(|&&v| v > 1e-10).count();
            assert!(nonzero <= rank);
        }
        assert!((purity(&ginibre(1, 0, 1).unwrap()) - 1.0).abs() < 1e-10);
        assert!(ginibre(1, 0, 0).is_err());
        assert!(ginibre(1, 0, 5).is_err());
    }

    #[test]
    fn fixed_purity_windows() {
        for (t, w) in [(0.46, 0.005), (0.5, 0.005)] {
            for i in 0..20 {
                let p = purity(&fixed_purity(3, i, t, w).unwrap());
                assert!(p >= t - w && p <= t + w);
            }
        }
        assert_eq!(fixed_purity(3, 1, 0.46, 0.005).unwrap(), fixed_purity(3, 1, 0.46, 0.005).unwrap());
        // Pure end of the range.
        let p = purity(&fixed_purity(3, 0, 1.0, 1e-12).unwrap());
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_purity_infeasible_window_errors() {
        // Exactly maximally mixed has measure zero.
        let err = fixed_purity_capped(1, 0, 0.25, 1e-9, 2_000).unwrap_err();
        assert!(matches!(err, Error::RejectionExhausted { attempts: 2_000, .. }));
        assert!(fixed_purity(1, 0, 0.2, 0.01).is_err());
        assert!(fixed_purity(1, 0, 0.5, 0.0).is_err());
    }

    #[test]
    fn separable_mixture_single_term_is_product() {
        let rho = separable_mixture(2, 5, 1).unwrap();
        assert!((purity(&rho) - 1.0).abs() < 1e-10);
        assert!(separable_mixture(2, 5, 0).is_err());
    }

    #[test]
    fn local_unitaries_are_unitary() {
        for i in 0..100 {
            let (ua, ub) = random_local_unitary(4, i);
            assert!(ua.is_unitary(1e-12) && ub.is_unitary(1e-12));
            assert_eq!((ua.clone(), ub.clone()), random_local_unitary(4, i));
        }
    }

    #[test]
    fn spec_generation_is_ordered_and_reproducible() {
        let mut spec = EnsembleSpec::new(EnsembleKind::Ginibre, 64, 99);
        spec.rank = Some(3);
        let all = spec.generate().unwrap();
        assert_eq!(all.len(), 64);
        for (i, rho) in all.iter().enumerate() {
            assert_eq!(rho, &spec.sample(i as u64).unwrap());
        }
        let json = serde_json::to_string(&spec).unwrap();
        let back: EnsembleSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::new(EnsembleKind::HaarPure, 0, 1).validate().is_err());
        let mut s = EnsembleSpec::new(EnsembleKind::FixedPurity, 3, 1);
        assert!(s.validate().is_err());
        s.purity_target = Some(0.46);
        s.purity_window = Some(0.005);
        assert!(s.validate().is_ok());
        s.purity_target = Some(1.5);
        assert!(s.validate().is_err());
        let mut g = EnsembleSpec::new(EnsembleKind::Ginibre, 3, 1);
        g.rank = Some(7);
        assert!(g.validate().is_err());
    }

    #[test]
    fn rho_u_sweep_covers_range() {
        let spec = EnsembleSpec::new(EnsembleKind::RhoUSweep, 11, 1);
        let states = spec.generate().unwrap();
        assert!((purity(&states[0]) - 0.5).abs() < 1e-12);
        assert!((purity(&states[10]) - 1.0).abs() < 1e-12);
    }
}
