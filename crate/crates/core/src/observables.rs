//! Pauli expectation values, variances and covariances of two-qubit states.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli, tensor, CMat, HERMITIAN_TOL};
use crate::states::DensityMatrix;

/// Largest imaginary part of `Tr(ρ·O)` tolerated for Hermitian `O`.
pub const IMAG_TOL: f64 = 1e-10;

/// `σₘ ⊗ σₙ` for m, n ∈ 0..4.
static PAULI_PRODUCTS: LazyLock<Vec<Vec<CMat>>> = LazyLock::new(|| {
    (0..4)
        .map(|m| {
            (0..4)
                .map(|n| tensor(&pauli(m), &pauli(n)).expect("2x2 factors"))
                .collect()
        })
        .collect()
});

/// `σₘᴬ ⊗ σₙᴮ` with index 0 standing for the identity.
pub fn pauli_product(m: usize, n: usize) -> &'static CMat {
    &PAULI_PRODUCTS[m][n]
}

/// `σᵢ ⊗ 𝟙`.
pub fn local_a(i: usize) -> &'static CMat {
    pauli_product(i, 0)
}

/// `𝟙 ⊗ σⱼ`.
pub fn local_b(j: usize) -> &'static CMat {
    pauli_product(0, j)
}

fn check_axis(i: usize) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Pauli axis {i} outside 1..=3")))
    }
}

fn real_trace(rho: &CMat, obs: &CMat) -> Result<f64> {
    let t = rho.trace_product(obs);
    if t.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue(t.im));
    }
    Ok(t.re)
}

/// `Tr(ρ·obs)` for a Hermitian 4×4 observable.
pub fn expectation(rho: &DensityMatrix, obs: &CMat) -> Result<f64> {
    if obs.dim() != 4 {
        return Err(Error::Dimension("observable must be 4x4".into()));
    }
    let defect = obs.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    real_trace(rho.mat(), obs)
}

/// `⟨O²⟩ − ⟨O⟩²`, clamped at zero.
pub fn variance(rho: &DensityMatrix, obs: &CMat) -> Result<f64> {
    let mean = expectation(rho, obs)?;
    let second = expectation(rho, &(obs * obs))?;
    Ok((second - mean * mean).max(0.0))
}

/// `C(σᵢᴬ, σⱼᴮ) = ⟨σᵢ⊗σⱼ⟩ − ⟨σᵢ⊗𝟙⟩⟨𝟙⊗σⱼ⟩` for axes 1..=3.
pub fn covariance(rho: &DensityMatrix, i: usize, j: usize) -> Result<f64> {
    check_axis(i)?;
    check_axis(j)?;
    let joint = real_trace(rho.mat(), pauli_product(i, j))?;
    let a = real_trace(rho.mat(), local_a(i))?;
    let b = real_trace(rho.mat(), local_b(j))?;
    Ok(joint - a * b)
}

/// All nine Pauli covariances of a state together with the raw
/// correlations and both local Bloch vectors. Index `[i][j]` holds axis
/// `i + 1` on A and `j + 1` on B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationData {
    pub cov: [[f64; 3]; 3],
    pub bloch_a: [f64; 3],
    pub bloch_b: [f64; 3],
    pub corr_t: [[f64; 3]; 3],
}

impl CorrelationData {
    /// Builds covariances from raw correlations and Bloch vectors.
    pub fn from_moments(corr_t: [[f64; 3]; 3], bloch_a: [f64; 3], bloch_b: [f64; 3]) -> Self {
        let mut cov = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] = covariance_from_moments(corr_t[i][j], bloch_a[i], bloch_b[j]);
            }
        }
        Self {
            cov,
            bloch_a,
            bloch_b,
            corr_t,
        }
    }

    /// Squared Frobenius norm of the covariance matrix.
    pub fn cov_norm_sq(&self) -> f64 {
        self.cov.iter().flatten().map(|c| c * c).sum()
    }
}

/// The one covariance formula shared by the exact and the sampled paths.
pub fn covariance_from_moments(joint: f64, mean_a: f64, mean_b: f64) -> f64 {
    joint - mean_a * mean_b
}

pub fn correlation_data(rho: &DensityMatrix) -> CorrelationData {
    correlation_data_of_operator(rho.mat()).expect("validated state is Hermitian")
}

/// Pauli moments of any Hermitian 4×4 operator, including non-physical
/// ones such as a partial transpose.
pub fn correlation_data_of_operator(m: &CMat) -> Result<CorrelationData> {
    if m.dim() != 4 {
        return Err(Error::Dimension("operator must be 4x4".into()));
    }
    let mut corr_t = [[0.0; 3]; 3];
    let mut bloch_a = [0.0; 3];
    let mut bloch_b = [0.0; 3];
    for i in 0..3 {
        bloch_a[i] = real_trace(m, local_a(i + 1))?;
        bloch_b[i] = real_trace(m, local_b(i + 1))?;
        for j in 0..3 {
            corr_t[i][j] = real_trace(m, pauli_product(i + 1, j + 1))?;
        }
    }
    Ok(CorrelationData::from_moments(corr_t, bloch_a, bloch_b))
}
