//! Number-theoretic groundwork: real and imaginary quadratic fields with
//! class number one, their rings of integers, prime ideals, residue fields,
//! a ray class character, Dirichlet characters, and exact Bernoulli / zeta
//! data.

mod bernoulli;
pub(crate) mod field;
pub(crate) mod primes;
mod residue;

pub use bernoulli::{
    bernoulli_number, bernoulli_polynomial, dedekind_zeta_algebraic_part, generalized_bernoulli,
    DirichletData,
};
pub use field::{FieldElem, OElem, QuadField};
pub use primes::{factor_rational_prime, ray_class_character, PrimeIdeal, Splitting};
pub use residue::ResidueField;
