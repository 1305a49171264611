//! Two-qubit states: validated density matrices, pure-state amplitudes and
//! the canonical families used throughout the crate.
//!
//! Basis labels: `|0⟩ ≡ |↑⟩ ≡ horizontal`, `|1⟩ ≡ |↓⟩ ≡ vertical`; two-qubit
//! amplitudes are ordered `|00⟩, |01⟩, |10⟩, |11⟩` with qubit A leftmost.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, eig_hermitian, tensor, CMat, C64, HERMITIAN_TOL, PSD_TOL};

/// Tolerance on trace, Hermiticity and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on the norm of pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-12;

/// A validated two-qubit density matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityMatrixJson", into = "DensityMatrixJson")]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (each within
    /// [`STATE_TOL`]). Invalid input is rejected, never repaired.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::Dimension(format!(
                "density matrix must be 4x4, got {0}x{0}",
                mat.dim()
            )));
        }
        let defect = mat.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::BadTrace(tr));
        }
        let min = eig_hermitian(&mat)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { mat })
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.mat)
            .expect("validated density matrix is Hermitian")
            .values
    }

    /// Convex combination `Σ wₖ ρₖ`; the weights must be non-negative and sum to one.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("empty mixture".into()));
        }
        if terms.iter().any(|(w, _)| !(*w >= 0.0)) {
            return Err(Error::InvalidArgument("negative mixture weight".into()));
        }
        let mut acc = CMat::zeros_unchecked(4);
        for (w, rho) in terms {
            acc = &acc + &rho.mat.scale(c(*w, 0.0));
        }
        Self::new(acc)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.mat)
    }
}

/// Normalized two-qubit pure state `α₀₀|00⟩ + α₀₁|01⟩ + α₁₀|10⟩ + α₁₁|11⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateJson", into = "PureStateJson")]
pub struct PureState {
    amps: [C64; 4],
}

impl PureState {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amps: [C64; 4]) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(amps.map(|z| z / norm))
    }

    /// Product state `|a⟩ ⊗ |b⟩` of two single-qubit amplitude pairs.
    pub fn product(a: [C64; 2], b: [C64; 2]) -> Result<Self> {
        Self::normalized([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    pub fn amps(&self) -> &[C64; 4] {
        &self.amps
    }

    /// Amplitude `α_kl` for A-index `k` and B-index `l`.
    pub fn alpha(&self, k: usize, l: usize) -> C64 {
        self.amps[2 * k + l]
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn from_pure(p: &PureState) -> DensityMatrix {
    let mut m = CMat::zeros_unchecked(4);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = p.amps[i] * p.amps[j].conj();
        }
    }
    DensityMatrix::new(m).expect("outer product of a normalized vector is a state")
}

/// `Tr(ρ²)`, clamped into `[1/4, 1]`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
    let p: f64 = rho.mat.entries().iter().map(|z| z.norm_sqr()).sum();
    p.clamp(0.25, 1.0)
}

/// The phase-correlated family interpolating between the classically
/// correlated mixture (`gamma = 0`) and a Bell state (`gamma = 1/2`):
/// diagonal `(½, 0, 0, ½)`, corners `γe^{iθ}` and `γe^{-iθ}`.
pub fn rho_u(gamma: f64, theta: f64) -> Result<DensityMatrix> {
    if !(0.0..=0.5).contains(&gamma) {
        return Err(Error::InvalidArgument(format!(
            "gamma = {gamma} outside [0, 1/2]"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidArgument("theta must be finite".into()));
    }
    let mut m = CMat::zeros_unchecked(4);
    m[(0, 0)] = c(0.5, 0.0);
    m[(3, 3)] = c(0.5, 0.0);
    m[(0, 3)] = C64::from_polar(gamma, theta);
    m[(3, 0)] = C64::from_polar(gamma, -theta);
    DensityMatrix::new(m)
}

/// Named reference states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalState {
    /// `(|01⟩ − |10⟩)/√2`
    Singlet,
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
    /// `(|00⟩ − |11⟩)/√2`
    PhiMinus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `|00⟩`
    Product00,
    /// `𝟙/4`
    MaximallyMixed,
    /// `(|00⟩⟨00| + |11⟩⟨11|)/2`
    ClassicallyCorrelated,
}

impl CanonicalState {
    pub const ALL: [CanonicalState; 7] = [
        Self::Singlet,
        Self::PhiPlus,
        Self::PhiMinus,
        Self::PsiPlus,
        Self::Product00,
        Self::MaximallyMixed,
        Self::ClassicallyCorrelated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Singlet => "singlet",
            Self::PhiPlus => "phi_plus",
            Self::PhiMinus => "phi_minus",
            Self::PsiPlus => "psi_plus",
            Self::Product00 => "product00",
            Self::MaximallyMixed => "maximally_mixed",
            Self::ClassicallyCorrelated => "classically_correlated",
        }
    }

    /// Amplitudes for the pure members of the set.
    pub fn pure_state(self) -> Option<PureState> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        let amps = match self {
            Self::Singlet => [z, c(h, 0.0), c(-h, 0.0), z],
            Self::PhiPlus => [c(h, 0.0), z, z, c(h, 0.0)],
            Self::PhiMinus => [c(h, 0.0), z, z, c(-h, 0.0)],
            Self::PsiPlus => [z, c(h, 0.0), c(h, 0.0), z],
            Self::Product00 => [c(1.0, 0.0), z, z, z],
            Self::MaximallyMixed | Self::ClassicallyCorrelated => return None,
        };
        Some(PureState::new(amps).expect("canonical amplitudes are normalized"))
    }

    pub fn density(self) -> DensityMatrix {
        if let Some(p) = self.pure_state() {
            return from_pure(&p);
        }
        match self {
            Self::MaximallyMixed => DensityMatrix::new(
                CMat::from_real_diag(&[0.25; 4]).expect("4x4 diagonal"),
            )
            .expect("maximally mixed state"),
            Self::ClassicallyCorrelated => rho_u(0.0, 0.0).expect("gamma = 0 is valid"),
            _ => unreachable!("pure states handled above"),
        }
    }
}

impl FromStr for CanonicalState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::UnknownState(s.to_string()))
    }
}

impl fmt::Display for CanonicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Looks up a canonical state by name.
pub fn canonical(name: &str) -> Result<DensityMatrix> {
    Ok(name.parse::<CanonicalState>()?.density())
}

/// `(u_a ⊗ u_b) ρ (u_a ⊗ u_b)†`.
pub fn apply_local_unitary(rho: &DensityMatrix, u_a: &CMat, u_b: &CMat) -> Result<DensityMatrix> {
    for u in [u_a, u_b] {
        if u.dim() != 2 {
            return Err(Error::Dimension("local unitary must be 2x2".into()));
        }
        let defect = u.unitarity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotUnitary(defect));
        }
    }
    let u = tensor(u_a, u_b)?;
    DensityMatrix::new(rho.mat.conjugate_by(&u))
}

/// On-disk density matrix: `{"re": [[..4..] x4], "im": [[..4..] x4]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityMatrixJson {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let entries = (0..16).map(|k| c(j.re[k / 4][k % 4], j.im[k / 4][k % 4])).collect();
        DensityMatrix::new(CMat::new(4, entries)?)
    }
}

impl From<DensityMatrix> for DensityMatrixJson {
    fn from(rho: DensityMatrix) -> Self {
        let mut re = [[0.0; 4]; 4];
        let mut im = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                re[i][j] = rho.mat[(i, j)].re;
                im[i][j] = rho.mat[(i, j)].im;
            }
        }
        Self { re, im }
    }
}

/// On-disk pure state: `{"amps": [[re, im] x4]}` in `|00⟩,|01⟩,|10⟩,|11⟩` order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureStateJson {
    pub amps: [[f64; 2]; 4],
}

impl TryFrom<PureStateJson> for PureState {
    type Error = Error;

    fn try_from(j: PureStateJson) -> Result<Self> {
        PureState::new(j.amps.map(|[re, im]| c(re, im)))
    }
}

impl From<PureState> for PureStateJson {
    fn from(p: PureState) -> Self {
        Self {
            amps: p.amps.map(|z| [z.re, z.im]),
        }
    }
}

/// A state file in either accepted format.
#[derive(Debug, Clone)]
pub enum StateFile {
    Density(DensityMatrix),
    Pure(PureState),
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("amps").is_some() {
            let j: PureStateJson = serde_json::from_value(value)?;
            Ok(Self::Pure(j.try_into()?))
        } else {
            let j: DensityMatrixJson = serde_json::from_value(value)?;
            Ok(Self::Density(j.try_into()?))
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Density(rho) => rho.clone(),
            Self::Pure(p) => from_pure(p),
        }
    }
}
