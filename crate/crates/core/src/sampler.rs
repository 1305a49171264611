//! Finite-shot simulation of the nine-setting local measurement protocol.
//!
//! Each setting `(i, j)` measures `σᵢ` on qubit A and `σⱼ` on qubit B and
//! records the four coincidence counts `n(a, b)` for outcomes `a, b = ±1`,
//! in the order `(+,+), (+,−), (−,+), (−,−)`. Singles marginals come from
//! the same table, so nine settings give all correlations and both Bloch
//! vectors. Detectors are ideal: no loss, dark counts or accidentals.
//!
//! The estimator is the plug-in one, `ĝ = Σ Ĉᵢⱼ²`, without bias
//! correction. Its bias is `O(1/N)` in the shots per setting.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{derive_seed, rng_for, Stream};
use crate::error::{Error, Result};
use crate::gmeasure::{g_from_covariances, CERTIFY_MARGIN};
use crate::linalg::{c, pauli, tensor, CMat};
use crate::observables::{correlation_data, covariance_from_moments};
use crate::states::DensityMatrix;

/// Bootstrap resamples used by [`estimate_g`].
pub const DEFAULT_BOOTSTRAP: usize = 200;
/// Repetitions per grid point in [`shots_for_verdict`].
pub const VERDICT_TRIALS: usize = 100;
/// Successful repetitions required out of [`VERDICT_TRIALS`].
pub const VERDICT_REQUIRED: usize = 95;
/// Upper end of the shot search in [`shots_for_verdict`].
pub const VERDICT_MAX_SHOTS: u64 = 1 << 24;

const OUTCOMES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Coincidence tables for one run of the nine-setting protocol.
/// `counts[i][j]` belongs to setting `(i + 1, j + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RecordJson", into = "RecordJson")]
pub struct MeasurementRecord {
    pub shots_per_setting: u64,
    pub counts: [[[u64; 4]; 3]; 3],
    pub seed: u64,
}

impl MeasurementRecord {
    pub fn validate(&self) -> Result<()> {
        if self.shots_per_setting == 0 {
            return Err(Error::InvalidRecord("empty record (0 shots per setting)".into()));
        }
        for i in 0..3 {
            for j in 0..3 {
                let table = &self.counts[i][j];
                let total = table.iter().try_fold(0u64, |acc, &n| acc.checked_add(n));
                if total != Some(self.shots_per_setting) {
                    return Err(Error::InvalidRecord(format!(
                        "setting {}{} has {:?} counts, expected {}",
                        i + 1,
                        j + 1,
                        total,
                        self.shots_per_setting
                    )));
                }
            }
        }
        Ok(())
    }

    /// Counts rounded from the exact outcome probabilities, so every
    /// frequency is within `1/shots` of the truth.
    pub fn expected(rho: &DensityMatrix, shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be >= 1".into()));
        }
        let mut counts = [[[0u64; 4]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let p = outcome_probabilities(rho, i + 1, j + 1)?;
                let mut table = p.map(|q| (q * shots as f64).round() as u64);
                let sum: u64 = table.iter().sum();
                let largest = (0..4).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0);
                table[largest] = (table[largest] + shots).saturating_sub(sum);
                counts[i][j] = table;
            }
        }
        let rec = Self {
            shots_per_setting: shots,
            counts,
            seed: 0,
        };
        rec.validate()?;
        Ok(rec)
    }

    /// Empirical `(⟨σᵢσⱼ⟩, ⟨σᵢ⟩, ⟨σⱼ⟩)` from the table of setting `(i, j)`, axes 1..=3.
    pub fn moments(&self, i: usize, j: usize) -> (f64, f64, f64) {
        table_moments(&self.counts[i - 1][j - 1])
    }
}

fn table_moments(table: &[u64; 4]) -> (f64, f64, f64) {
    let n: u64 = table.iter().sum();
    let n = n as f64;
    let (mut joint, mut ma, mut mb) = (0i128, 0i128, 0i128);
    for (k, &(a, b)) in OUTCOMES.iter().enumerate() {
        let cnt = table[k] as i128;
        joint += (a * b) as i128 * cnt;
        ma += a as i128 * cnt;
        mb += b as i128 * cnt;
    }
    (joint as f64 / n, ma as f64 / n, mb as f64 / n)
}

fn table_covariance(table: &[u64; 4]) -> f64 {
    let (joint, ma, mb) = table_moments(table);
    covariance_from_moments(joint, ma, mb)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordJson {
    shots: u64,
    seed: u64,
    counts: BTreeMap<String, [u64; 4]>,
}

impl TryFrom<RecordJson> for MeasurementRecord {
    type Error = Error;

    fn try_from(j: RecordJson) -> Result<Self> {
        let mut counts = [[[0u64; 4]; 3]; 3];
        let mut seen = 0;
        for (key, table) in &j.counts {
            let b = key.as_bytes();
            let ok = b.len() == 2 && (b'1'..=b'3').contains(&b[0]) && (b'1'..=b'3').contains(&b[1]);
            if !ok {
                return Err(Error::InvalidRecord(format!("unknown setting key `{key}`")));
            }
            counts[(b[0] - b'1') as usize][(b[1] - b'1') as usize] = *table;
            seen += 1;
        }
        if seen != 9 {
            return Err(Error::InvalidRecord(format!("expected 9 settings, found {seen}")));
        }
        let rec = Self {
            shots_per_setting: j.shots,
            counts,
            seed: j.seed,
        };
        rec.validate()?;
        Ok(rec)
    }
}

impl From<MeasurementRecord> for RecordJson {
    fn from(r: MeasurementRecord) -> Self {
        let mut counts = BTreeMap::new();
        for i in 0..3 {
            for j in 0..3 {
                counts.insert(format!("{}{}", i + 1, j + 1), r.counts[i][j]);
            }
        }
        Self {
            shots: r.shots_per_setting,
            seed: r.seed,
            counts,
        }
    }
}

fn projector(axis: usize, sign: i8) -> CMat {
    &pauli(0) + &pauli(axis).scale(c(sign as f64, 0.0))
}

/// Joint outcome probabilities for setting `(i, j)` in the order
/// `(+,+), (+,−), (−,+), (−,−)`.
pub fn outcome_probabilities(rho: &DensityMatrix, i: usize, j: usize) -> Result<[f64; 4]> {
    for axis in [i, j] {
        if !(1..=3).contains(&axis) {
            return Err(Error::InvalidArgument(format!("Pauli axis {axis} outside 1..=3")));
        }
    }
    let mut p = [0.0; 4];
    for (k, &(a, b)) in OUTCOMES.iter().enumerate() {
        // (σ₀ + aσᵢ)/2 ⊗ (σ₀ + bσⱼ)/2
        let proj = tensor(&projector(i, a), &projector(j, b))?.scale(c(0.25, 0.0));
        p[k] = rho.mat().trace_product(&proj).re.max(0.0);
    }
    Ok(p)
}

/// One multinomial draw of `n` outcomes, as successive binomials.
fn multinomial<R: Rng + ?Sized>(rng: &mut R, n: u64, probs: &[f64; 4]) -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut left = n;
    let mut mass: f64 = probs.iter().sum();
    for k in 0..3 {
        if left == 0 {
            break;
        }
        let q = if mass > 0.0 { (probs[k] / mass).clamp(0.0, 1.0) } else { 0.0 };
        let draw = Binomial::new(left, q).expect("q in [0, 1]").sample(rng);
        out[k] = draw;
        left -= draw;
        mass -= probs[k];
    }
    out[3] = left;
    out
}

/// Simulates `shots` detections per setting. Setting `k` draws from its
/// own random stream, so the record does not depend on evaluation order.
pub fn simulate_record(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be >= 1".into()));
    }
    let mut counts = [[[0u64; 4]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let p = outcome_probabilities(rho, i + 1, j + 1)?;
            let mut rng = rng_for(seed, Stream::Shots, (3 * i + j) as u64);
            counts[i][j] = multinomial(&mut rng, shots, &p);
        }
    }
    Ok(MeasurementRecord {
        shots_per_setting: shots,
        counts,
        seed,
    })
}

/// Plug-in estimate of G from count data with a bootstrap error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GEstimate {
    pub g_hat: f64,
    pub cov_hat: [[f64; 3]; 3],
    /// Standard deviation of the bootstrap replicates.
    pub stderr: f64,
    /// 2.5 % and 97.5 % bootstrap percentiles.
    pub ci_low: f64,
    pub ci_high: f64,
    pub shots_per_setting: u64,
}

fn covariances(counts: &[[[u64; 4]; 3]; 3]) -> [[f64; 3]; 3] {
    let mut cov = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            cov[i][j] = table_covariance(&counts[i][j]);
        }
    }
    cov
}

fn g_of(cov: &[[f64; 3]; 3]) -> f64 {
    cov.iter().flatten().map(|c| c * c).sum()
}

pub fn estimate_g(rec: &MeasurementRecord) -> Result<GEstimate> {
    estimate_g_with(rec, DEFAULT_BOOTSTRAP)
}

/// [`estimate_g`] with an explicit number of bootstrap resamples. Each
/// resample redraws every setting's table from its empirical frequencies.
pub fn estimate_g_with(rec: &MeasurementRecord, resamples: usize) -> Result<GEstimate> {
    rec.validate()?;
    if resamples < 2 {
        return Err(Error::InvalidArgument("need at least 2 bootstrap resamples".into()));
    }
    let n = rec.shots_per_setting;
    let cov_hat = covariances(&rec.counts);
    let g_hat = g_of(&cov_hat);

    let freqs = rec.counts.map(|row| row.map(|t| t.map(|k| k as f64 / n as f64)));
    let mut reps: Vec<f64> = (0..resamples)
        .map(|r| {
            let mut rng = rng_for(rec.seed, Stream::Bootstrap, r as u64);
            let counts = freqs.map(|row| row.map(|p| multinomial(&mut rng, n, &p)));
            g_of(&covariances(&counts))
        })
        .collect();
    let mean = reps.iter().sum::<f64>() / resamples as f64;
    let var = reps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    reps.sort_by(f64::total_cmp);
    let pct = |q: f64| reps[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];

    Ok(GEstimate {
        g_hat,
        cov_hat,
        stderr: var.sqrt(),
        ci_low: pct(0.025),
        ci_high: pct(0.975),
        shots_per_setting: n,
    })
}

/// Number of repetitions, out of [`VERDICT_TRIALS`], in which
/// `ĝ − sigma·stderr > 1` at `shots` per setting.
pub fn verdict_successes(rho: &DensityMatrix, shots: u64, sigma: f64, seed: u64) -> Result<usize> {
    let hits: Result<Vec<bool>> = (0..VERDICT_TRIALS as u64)
        .into_par_iter()
        .map(|t| {
            let rec = simulate_record(rho, shots, derive_seed(seed, t))?;
            let est = estimate_g(&rec)?;
            Ok(est.g_hat - sigma * est.stderr > 1.0)
        })
        .collect();
    Ok(hits?.into_iter().filter(|&h| h).count())
}

/// Smallest shots per setting at which G certifies entanglement
/// (`ĝ − sigma·stderr > 1`) in at least 95 of 100 seeded repetitions.
/// Doubling search followed by bisection; the same trial seeds are used at
/// every grid point.
pub fn shots_for_verdict(rho: &DensityMatrix, sigma: f64, seed: u64) -> Result<u64> {
    let g = g_from_covariances(&correlation_data(rho));
    if g <= 1.0 + CERTIFY_MARGIN {
        return Err(Error::NotCertifiable(g));
    }
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("confidence sigma {sigma} must be >= 0")));
    }
    let ok = |shots: u64| -> Result<bool> {
        Ok(verdict_successes(rho, shots, sigma, seed)? >= VERDICT_REQUIRED)
    };
    let mut hi = 1u64;
    while !ok(hi)? {
        if hi >= VERDICT_MAX_SHOTS {
            return Err(Error::InvalidArgument(format!(
                "no certification below {VERDICT_MAX_SHOTS} shots per setting"
            )));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // Invariant: ok(hi), and lo == 0 or !ok(lo).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
