use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (max |m - m†| = {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("trace is {0:.12}, expected 1")]
    BadTrace(f64),
    #[error("pure state is not normalized (norm² = {0:.12})")]
    NotNormalized(f64),
    #[error("operator is not unitary (max |u u† - 1| = {0:.3e})")]
    NotUnitary(f64),
    #[error("expectation value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown canonical state `{0}`")]
    UnknownState(String),
    #[error("no sample accepted in purity window [{lo}, {hi}] after {attempts} attempts")]
    RejectionExhausted { lo: f64, hi: f64, attempts: u64 },
    #[error("state is not certifiable by G (G = {0:.6} ≤ 1)")]
    NotCertifiable(f64),
    #[error("invalid measurement record: {0}")]
    InvalidRecord(String),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
