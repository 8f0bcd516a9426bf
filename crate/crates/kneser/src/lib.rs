//! Exact-arithmetic engine for even unimodular lattices over small quadratic
//! fields: Kneser neighbours, genus enumeration, Hecke operators and their
//! spectra, Arthur-parameter eigenvalue predictions, and degree-1 theta series.
//!
//! Everything is computed over ℤ, ℚ, or ℚ(√m) for m ∈ {2, 3, 5, −3} with no
//! floating point in any decision path. Floating point appears only as a hint
//! source for eigenvalue factorization, and every hint is verified exactly
//! before use.
//!
//! The crate is organised as a pipeline:
//!
//! * [`numbers`] — fields, integers, prime ideals, characters, Bernoulli data;
//! * [`linalg`] — exact matrices, characteristic polynomials, kernels;
//! * [`lattice`] — lattices over the ring of integers, trace forms, seeds,
//!   short-vector enumeration;
//! * [`isometry`] — isometry testing and automorphism group orders;
//! * [`neighbours`] — isotropic lines, neighbour construction, genus graphs,
//!   Hecke matrices;
//! * [`spectra`] — simultaneous eigendecomposition, inner products, degree
//!   bounds, congruence scanning, spinor bipartitions;
//! * [`arthur`] — parameter algebra and eigenvalue prediction;
//! * [`theta`] — degree-1 Hilbert theta expansions and Hecke eigenvalue
//!   extraction.

pub mod arthur;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod neighbours;
pub mod numbers;
pub mod spectra;
pub mod theta;

use thiserror::Error;

/// Crate-wide error type.
///
/// Most operations are total on their documented domains; errors surface
/// mainly at construction boundaries (unsupported field, malformed input) and
/// in bounded searches that are guaranteed to succeed on the supported inputs
/// but fail loudly rather than silently if pushed outside them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field: squarefree part {0} (supported: 2, 3, 5, -3, and the rational field)")]
    UnsupportedField(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("generator search exhausted for p = {p} with coefficient bound {bound}")]
    GeneratorSearch { p: u64, bound: i64 },
    #[error("no totally positive generator: {0}")]
    NoTotallyPositiveGenerator(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("lattice is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice predicate failed: {0}")]
    Lattice(String),
    #[error("backtracking node limit {0} exceeded; the lattice basis likely needs reduction")]
    NodeLimit(u64),
    #[error("prime ideal not supported here: {0}")]
    BadPrime(String),
    #[error("genus not closed: a neighbour at {prime} lies outside the recorded classes")]
    GenusNotClosed { prime: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("eigen decomposition failed: {0}")]
    Eigen(String),
    #[error("serialization: {0}")]
    Serial(String),
    #[error("theta extraction failed: {0}")]
    Theta(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

pub type Result<T> = std::result::Result<T, Error>;
