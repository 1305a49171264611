//! Dense complex matrices of dimension 2 and 4.
//!
//! Index convention: for two-qubit operators subsystem A is the slow
//! (leftmost) tensor factor, so row `2*i + k` pairs A-index `i` with
//! B-index `k`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance (entrywise max of `|m - m†|`).
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 50;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Which tensor factor of a two-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Square complex matrix, row-major, of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct CMat {
    dim: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::Dimension(format!("unsupported dimension {dim}")));
        }
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros_unchecked(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d, 0.0);
        }
        Self::new(n, m.data)
    }

    pub(crate) fn zeros_unchecked(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![C64::new(0.0, 0.0); dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    fn require_dim(&self, dim: usize, what: &str) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what}: expected {dim}x{dim}, got {0}x{0}",
                self.dim
            )))
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &CMat) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn unitarity_defect(&self) -> f64 {
        let id = Self::identity(self.dim).expect("dim already validated");
        (self * &self.adjoint()).max_abs_diff(&id)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `u * self * u†`.
    pub fn conjugate_by(&self, u: &CMat) -> Self {
        &(u * self) * &u.adjoint()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = CMat::zeros_unchecked(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        CMat {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        CMat {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {0}x{0} [", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// The identity `σ₀` (n = 0) and the Pauli matrices `σ₁, σ₂, σ₃` (n = 1, 2, 3).
pub fn pauli(n: usize) -> CMat {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let rows = match n {
        0 => [[one, z], [z, one]],
        1 => [[z, one], [one, z]],
        2 => [[z, -i], [i, z]],
        3 => [[one, z], [z, -one]],
        _ => panic!("pauli index {n} out of range 0..=3"),
    };
    CMat::from_rows(rows).expect("static 2x2")
}

/// Kronecker product of two single-qubit operators: `((2i+k),(2j+l)) = a(i,j) b(k,l)`.
pub fn tensor(a: &CMat, b: &CMat) -> Result<CMat> {
    a.require_dim(2, "tensor factor A")?;
    b.require_dim(2, "tensor factor B")?;
    let mut out = CMat::zeros_unchecked(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reduced operator on `keep`, tracing out the other qubit.
pub fn partial_trace(m: &CMat, keep: Subsystem) -> Result<CMat> {
    m.require_dim(4, "partial trace")?;
    let mut out = CMat::zeros_unchecked(2);
    for r in 0..2 {
        for s in 0..2 {
            out[(r, s)] = (0..2)
                .map(|t| match keep {
                    Subsystem::A => m[(2 * r + t, 2 * s + t)],
                    Subsystem::B => m[(2 * t + r, 2 * t + s)],
                })
                .sum();
        }
    }
    Ok(out)
}

/// Transpose the indices of subsystem `sub` only.
pub fn partial_transpose(m: &CMat, sub: Subsystem) -> Result<CMat> {
    m.require_dim(4, "partial transpose")?;
    let mut out = CMat::zeros_unchecked(4);
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let v = m[(2 * i + k, 2 * j + l)];
                    match sub {
                        Subsystem::A => out[(2 * j + k, 2 * i + l)] = v,
                        Subsystem::B => out[(2 * i + l, 2 * j + k)] = v,
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix. `vectors` holds the
/// eigenvectors as columns, in the same order as `values`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.vectors.dim();
        let mut d = CMat::zeros_unchecked(n);
        for (i, &l) in self.values.iter().enumerate() {
            d[(i, i)] = c(l, 0.0);
        }
        d.conjugate_by(&self.vectors)
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }
}

/// Cyclic complex Jacobi eigensolver. Eigenvalues are returned in
/// descending order.
pub fn eig_hermitian(m: &CMat) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    // Symmetrize so the rotations see an exactly Hermitian input.
    let mut a = (m + &m.adjoint()).scale(c(0.5, 0.0));
    let mut v = CMat::identity(n)?;
    let scale = m.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMat::zeros_unchecked(n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation zeroing `a[p][q]`: `a ← J† a J`, `v ← v J`.
fn jacobi_rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let n = a.dim();
    // Phase that makes the (p, q) element real and positive.
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on the (p, q) plane.
    let jpp = c(cs, 0.0);
    let jpq = c(sn, 0.0);
    let jqp = phase.conj() * -sn;
    let jqq = phase.conj() * cs;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(app - t * mag, 0.0);
    a[(q, q)] = c(aqq + t * mag, 0.0);
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn sqrt_psd(m: &CMat) -> Result<CMat> {
    let eig = eig_hermitian(m)?;
    let min = eig.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPositive(min));
    }
    let roots = HermitianEigen {
        values: eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect(),
        vectors: eig.vectors,
    };
    Ok(roots.reconstruct())
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi rotations
/// on the columns. Works on the matrix itself rather than on `m†m`, so
/// small singular values keep an absolute error of order `ε‖m‖`.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let mag = gamma.norm();
                if mag <= JACOBI_OFF_TOL * (alpha * beta).sqrt() || mag < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                // Diagonalize the Gram block [[α, γ], [γ*, β]].
                let phase = gamma / mag;
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let jqp = phase.conj() * -sn;
                let jqq = phase.conj() * cs;
                for k in 0..n {
                    let (ap, aq) = (cols[p][k], cols[q][k]);
                    cols[p][k] = ap * cs + aq * jqp;
                    cols[q][k] = ap * sn + aq * jqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
