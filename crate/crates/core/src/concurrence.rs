//! Concurrence, computed independently of G, and the local-unitary
//! invariants of pure two-qubit states.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{eig_hermitian, pauli, singular_values, sqrt_psd, tensor, CMat, C64};
use crate::states::{DensityMatrix, PureState};

/// Pure-state invariants. `i1` and `i2` are the two independent
/// local-unitary invariants; `i_alpha` is the norm and `i_beta` the squared
/// modulus of the amplitude determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureInvariants {
    pub i1: f64,
    pub i2: f64,
    pub i_alpha: f64,
    pub i_beta: f64,
}

pub fn pure_invariants(p: &PureState) -> PureInvariants {
    let a = |k: usize, l: usize| p.alpha(k, l);

    let i1: f64 = (0..2)
        .flat_map(|k| (0..2).map(move |l| (k, l)))
        .map(|(k, l)| (a(k, l) * a(k, l).conj()).re)
        .sum();

    let mut i2 = C64::new(0.0, 0.0);
    for k in 0..2 {
        for l in 0..2 {
            for m in 0..2 {
                for n in 0..2 {
                    i2 += a(k, m) * a(k, n).conj() * a(l, n) * a(l, m).conj();
                }
            }
        }
    }

    let i_alpha = a(0, 0).norm_sqr() + a(0, 1).norm_sqr() + a(1, 0).norm_sqr() + a(1, 1).norm_sqr();
    let det = a(0, 1) * a(1, 0) - a(0, 0) * a(1, 1);
    let i_beta = (det * det.conj()).re;

    PureInvariants {
        i1,
        i2: i2.re,
        i_alpha,
        i_beta,
    }
}

/// G expressed through the pure-state invariants, evaluated term by term:
/// `(I_α² + 8I_β) − 2I_α(I_α² − 4I_β) + (I_α² − 4I_β)²`.
pub fn g_pure_from_invariants(inv: &PureInvariants) -> f64 {
    let a2 = inv.i_alpha * inv.i_alpha;
    let d = a2 - 4.0 * inv.i_beta;
    (a2 + 8.0 * inv.i_beta) - 2.0 * inv.i_alpha * d + d * d
}

/// `2·|α₀₀α₁₁ − α₀₁α₁₀|`.
pub fn concurrence_pure(p: &PureState) -> f64 {
    let det = p.alpha(0, 0) * p.alpha(1, 1) - p.alpha(0, 1) * p.alpha(1, 0);
    (2.0 * det.norm()).min(1.0)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, `λᵢ` the descending
/// square roots of the spectrum of `ρρ̃` with `ρ̃ = (σ₂⊗σ₂) ρ* (σ₂⊗σ₂)`.
///
/// The `λᵢ` are taken as the singular values of `τ = V†(σ₂⊗σ₂)V*`, where
/// the columns of `V` are the eigenvectors of `ρ` scaled by the square
/// roots of their eigenvalues. Squaring and re-rooting (as in
/// [`concurrence_mixed_hermitian`]) turns rounding in near-zero eigenvalues
/// into errors of order `√ε` for rank-deficient states; this route does not.
pub fn concurrence_mixed(rho: &DensityMatrix) -> f64 {
    let eig = eig_hermitian(rho.mat()).expect("validated state is Hermitian");
    let mut v = eig.vectors;
    for (j, &p) in eig.values.iter().enumerate() {
        let s = p.max(0.0).sqrt();
        for i in 0..4 {
            v[(i, j)] *= s;
        }
    }
    let tau = &(&v.adjoint() * &spin_flip_operator()) * &v.conj();
    wootters_from_lambdas(&singular_values(&tau))
}

/// The same quantity through the manifestly Hermitian PSD matrix
/// `√ρ·ρ̃·√ρ`, using only the Hermitian eigensolver. Accurate to about
/// `1e-8` on rank-deficient states.
pub fn concurrence_mixed_hermitian(rho: &DensityMatrix) -> f64 {
    try_concurrence_hermitian(rho).expect("validated state is Hermitian PSD")
}

fn spin_flip_operator() -> CMat {
    tensor(&pauli(2), &pauli(2)).expect("2x2 factors")
}

fn wootters_from_lambdas(lambdas: &[f64]) -> f64 {
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    c.clamp(0.0, 1.0)
}

fn try_concurrence_hermitian(rho: &DensityMatrix) -> Result<f64> {
    let spin_flipped = rho.mat().conj().conjugate_by(&spin_flip_operator());
    let root = sqrt_psd(rho.mat())?;
    let r = &(&root * &spin_flipped) * &root;
    // r is Hermitian up to rounding in the products.
    let r = (&r + &r.adjoint()).scale(C64::new(0.5, 0.0));
    let lambdas: Vec<f64> = eig_hermitian(&r)?
        .values
        .iter()
        .map(|&v| v.max(0.0).sqrt())
        .collect();
    Ok(wootters_from_lambdas(&lambdas))
}
