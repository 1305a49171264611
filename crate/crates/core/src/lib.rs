//! Covariance-based entanglement quantification for two qubits.
//!
//! The measure `G` is the sum of the nine squared covariances between
//! local Pauli observables. It is invariant under local unitaries, equals
//! `C²(2 + C²)` on pure states (`C` the concurrence), and for mixed states
//! confines the concurrence to an interval. `G > 1` certifies entanglement.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: 2×2 / 4×4 complex matrices, tensor products, partial
//!   trace and transpose, Hermitian Jacobi eigensolver.
//! - [`states`]: validated density matrices, pure states, reference states.
//! - [`observables`]: Pauli expectations, variances, covariances.
//! - [`gmeasure`]: `G` in covariance and Hilbert–Schmidt form, `L₃`,
//!   concurrence intervals.
//! - [`concurrence`]: Wootters concurrence and pure-state invariants.
//! - [`ensembles`]: seeded, counter-based random states and unitaries.
//! - [`sampler`]: finite-shot simulation of the nine-setting protocol.
//! - [`figures`]: data behind the G-versus-concurrence plots.
//! - [`cli`]: the `covent` command-line front end.

pub mod cli;
pub mod concurrence;
pub mod ensembles;
pub mod error;
pub mod figures;
pub mod gmeasure;
pub mod linalg;
pub mod observables;
pub mod sampler;
pub mod states;

pub use error::{Error, Result};
pub use gmeasure::{analyze, GReport, Verdict};
pub use states::{CanonicalState, DensityMatrix, PureState};
