//! Exact linear algebra over the rationals and prime fields.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod subspace;

pub use field::{is_prime, primes, Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use poly::{interpolate, interpolate_integers, RationalPolynomial};
pub use subspace::Subspace;
