//! Exact computations with finite-dimensional nilpotent modules over
//! preprojective algebras: Hom and Ext via an explicit complex, extension
//! middle terms, the trace pairing between `Ext^1(M, N)` and `Ext^1(N, M)`,
//! Euler characteristics of composition-series varieties by point counting
//! over prime fields, and exact checks of the multiplication formulas for
//! evaluation forms.

pub mod error;
pub mod flag_euler;
pub mod hom_ext;
pub mod linalg;
pub mod module;
pub mod mult_verify;
pub mod par;
pub mod quiver;
pub mod random;

pub use error::{Error, Result};
pub use linalg::{Field, FieldSpec, Matrix, PrimeField, Rationals, Subspace};
pub use module::{GradedSubspace, LambdaModule, ModularModule, RationalModule};
pub use quiver::{build_double, DimVector, DoubleQuiver, Quiver, Word};
