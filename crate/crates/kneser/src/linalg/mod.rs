//! Exact dense linear algebra sized for genus computations: a few dozen
//! rows, entries that are machine integers in the hot paths and arbitrary
//! precision everywhere else.
//!
//! * [`charpoly`] — characteristic polynomials of integer matrices by a
//!   CRT-modular Hessenberg method;
//! * [`poly`] — integer polynomial utilities (primitive PRS gcd, exact
//!   division, squarefree part);
//! * [`roots`] — verified extraction of integer roots, quadratic factors,
//!   and residual blocks from a characteristic polynomial, starting from
//!   floating-point hints that are never trusted;
//! * [`scalar`] — field scalars for kernel computations: ℚ and real
//!   quadratic extensions ℚ(√D) for arbitrary nonsquare D;
//! * [`mat`] — matrix helpers over those scalars and over ℤ;
//! * [`ldl`] — exact LDL^t decomposition for positive-definiteness checks
//!   and short-vector enumeration.

mod charpoly;
mod ldl;
mod mat;
mod poly;
mod roots;
mod scalar;

pub use charpoly::char_poly;
pub use ldl::{ldl_decompose, ldl_from_int, Ldl};
pub use mat::{
    big_identity, big_mat_mul, big_poly_eval, int_mat_mul, int_to_big, kernel, mat_vec_big,
    transpose,
};
pub use poly::{
    poly_derivative, poly_divide_exact, poly_eval_big, poly_eval_rational, poly_gcd, poly_mul,
    squarefree_part,
};
pub use roots::{extract_spectrum, jacobi_eigenvalues, pieces_product, SpectralPiece};
pub use scalar::{QuadExt, Scalar};
