//! The covariance measure G, the three-setting local uncertainty relation
//! L₃, and the mapping from a G value to the concurrence range compatible
//! with it.
//!
//! G is the squared Frobenius norm of the 3×3 Pauli covariance matrix,
//! equivalently `4·Tr{(ρ − ρ_A⊗ρ_B)²}`. It lies in `[0, 3]`, is unchanged
//! by local unitaries, and for pure states equals `C²(2 + C²)`.
//!
//! For mixed states the region `C²(2 + C²) ≤ G ≤ 1 + 2C²` is a sampled
//! observation, not a theorem. The upper edge has held for every state
//! sampled so far. The lower edge fails for a small fraction of rank-2
//! states (about 0.6 % of Hilbert–Schmidt rank-2 draws, by up to 0.06 in
//! G) and very rarely for rank 3; no full-rank violation has been seen.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, tensor, CMat, Subsystem};
use crate::observables::{
    correlation_data, correlation_data_of_operator, local_a, local_b, variance, CorrelationData,
};
use crate::states::DensityMatrix;

/// Largest possible G (maximally entangled states).
pub const G_MAX: f64 = 3.0;
/// Values within this distance outside `[0, 3]` are clamped.
pub const G_CLAMP_TOL: f64 = 1e-10;
/// Inputs to [`concurrence_interval`] this far outside `[0, 3]` are clamped.
pub const INTERVAL_INPUT_TOL: f64 = 1e-9;
/// Margin above 1 required before G certifies entanglement.
pub const CERTIFY_MARGIN: f64 = 1e-9;
/// L₃ of every separable mixture is at least this.
pub const L3_SEPARABLE_BOUND: f64 = 4.0;

fn clamp_g(raw: f64) -> f64 {
    if (-G_CLAMP_TOL..0.0).contains(&raw) {
        0.0
    } else if raw > G_MAX && raw <= G_MAX + G_CLAMP_TOL {
        G_MAX
    } else {
        if !(0.0..=G_MAX).contains(&raw) {
            log::debug!("G = {raw:.12} outside [0, 3]: input is not a valid state");
        }
        raw
    }
}

/// `Σᵢⱼ C(σᵢᴬ, σⱼᴮ)²`.
pub fn g_from_covariances(cd: &CorrelationData) -> f64 {
    clamp_g(cd.cov_norm_sq())
}

/// `4·Tr{(ρ − ρ_A⊗ρ_B)²}`.
pub fn g_hilbert_schmidt(rho: &DensityMatrix) -> f64 {
    clamp_g(hs_distance_sq(rho.mat()).expect("4x4 state") * 4.0)
}

fn hs_distance_sq(m: &CMat) -> Result<f64> {
    let ra = partial_trace(m, Subsystem::A)?;
    let rb = partial_trace(m, Subsystem::B)?;
    let d = m - &tensor(&ra, &rb)?;
    // Tr(D²) = Σ|Dᵢⱼ|² for Hermitian D.
    Ok(d.entries().iter().map(|z| z.norm_sqr()).sum())
}

/// Hilbert–Schmidt form evaluated on an arbitrary Hermitian operator
/// (no clamping), e.g. a partial transpose that is not a state.
pub fn g_hs_of_operator(m: &CMat) -> Result<f64> {
    let defect = m.hermiticity_defect();
    if defect > crate::linalg::HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(4.0 * hs_distance_sq(m)?)
}

/// Covariance form evaluated on an arbitrary Hermitian operator (no clamping).
pub fn g_cov_of_operator(m: &CMat) -> Result<f64> {
    Ok(correlation_data_of_operator(m)?.cov_norm_sq())
}

/// Polarization measurement settings entering L₃ and the Pauli axis each
/// one is assigned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizationBasis {
    /// 0/90: horizontal–vertical, `σ₃`.
    HV,
    /// 45/135: diagonal–antidiagonal, `σ₁`.
    Diagonal,
    /// R/L: circular, `σ₂`.
    Circular,
}

impl PolarizationBasis {
    pub const ALL: [PolarizationBasis; 3] = [Self::HV, Self::Diagonal, Self::Circular];

    pub fn pauli_axis(self) -> usize {
        match self {
            Self::HV => 3,
            Self::Diagonal => 1,
            Self::Circular => 2,
        }
    }
}

/// `Σ δ²(σᴬ + σᴮ)` over the three polarization bases. Separable mixtures
/// give at least 4; the range is `[0, 8]`.
pub fn l3(rho: &DensityMatrix) -> f64 {
    PolarizationBasis::ALL
        .iter()
        .map(|b| {
            let k = b.pauli_axis();
            variance(rho, &(local_a(k) + local_b(k))).expect("Pauli sums are Hermitian")
        })
        .sum()
}

/// Concurrence range `[c_min, c_max]` consistent with a measured G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceInterval {
    pub c_min: f64,
    pub c_max: f64,
}

impl ConcurrenceInterval {
    pub fn width(&self) -> f64 {
        self.c_max - self.c_min
    }

    pub fn contains(&self, c: f64, tol: f64) -> bool {
        c >= self.c_min - tol && c <= self.c_max + tol
    }
}

/// Inverts `C²(2 + C²) ≤ G ≤ 1 + 2C²`: the lower bound gives
/// `c_max = √(√(1+G) − 1)`, the upper bound `c_min = √((G−1)/2)` for
/// `G > 1` and zero otherwise.
///
/// `c_max` is exact for pure states but can be exceeded by low-rank mixed
/// states that fall below the lower curve (see the module docs).
pub fn concurrence_interval(g: f64) -> Result<ConcurrenceInterval> {
    if !g.is_finite() || g < -INTERVAL_INPUT_TOL || g > G_MAX + INTERVAL_INPUT_TOL {
        return Err(Error::InvalidArgument(format!("G = {g} outside [0, 3]")));
    }
    let g = g.clamp(0.0, G_MAX);
    let c_max = ((1.0 + g).sqrt() - 1.0).max(0.0).sqrt().min(1.0);
    let c_min = if g > 1.0 {
        ((g - 1.0) / 2.0).sqrt().min(c_max)
    } else {
        0.0
    };
    Ok(ConcurrenceInterval { c_min, c_max })
}

/// Upper edge of the region: `G = 1 + 2C²`.
pub fn upper_bound_g(concurrence: f64) -> f64 {
    1.0 + 2.0 * concurrence * concurrence
}

/// The pure-state curve `G = C²(2 + C²)`. Not a strict lower bound for
/// mixed states of rank 2 or 3.
pub fn lower_bound_g(concurrence: f64) -> f64 {
    let c2 = concurrence * concurrence;
    c2 * (2.0 + c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    EntangledCertified,
    NotCertified,
}

impl Verdict {
    pub fn from_g(g: f64) -> Self {
        if g > 1.0 + CERTIFY_MARGIN {
            Self::EntangledCertified
        } else {
            Self::NotCertified
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::EntangledCertified => "entangled_certified",
            Self::NotCertified => "not_certified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GReport {
    pub g: f64,
    pub g_hs: f64,
    pub l3: f64,
    pub verdict: Verdict,
    pub c_min: f64,
    pub c_max: f64,
}

impl GReport {
    pub fn interval(&self) -> ConcurrenceInterval {
        ConcurrenceInterval {
            c_min: self.c_min,
            c_max: self.c_max,
        }
    }
}

pub fn analyze(rho: &DensityMatrix) -> GReport {
    let g = g_from_covariances(&correlation_data(rho));
    let interval = concurrence_interval(g).unwrap_or_else(|_| {
        // Only reachable for invalid input; keep the report and log it.
        log::debug!("no concurrence interval for G = {g}");
        ConcurrenceInterval {
            c_min: f64::NAN,
            c_max: f64::NAN,
        }
    });
    GReport {
        g,
        g_hs: g_hilbert_schmidt(rho),
        l3: l3(rho),
        verdict: Verdict::from_g(g),
        c_min: interval.c_min,
        c_max: interval.c_max,
    }
}
