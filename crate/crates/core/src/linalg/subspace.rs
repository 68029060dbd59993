//! Subspaces in canonical reduced column echelon form.

use crate::error::{Error, Result};
use crate::linalg::field::Field;
use crate::linalg::matrix::Matrix;

/// A subspace of `k^n`, stored as a basis in reduced column echelon form.
///
/// The form is canonical: two equal subspaces have identical basis matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Matrix<E>,
}

impl<E: Clone> Subspace<E> {
    /// The span of the columns of `gens`.
    pub fn span<F: Field<Elem = E>>(f: &F, gens: &Matrix<E>) -> Self {
        let ambient = gens.rows();
        let (r, pivots) = gens.transpose().rref(f);
        let k = pivots.len();
        let basis = r.submatrix(0, 0, k, ambient).transpose();
        Subspace { ambient, basis }
    }

    pub fn from_vectors<F: Field<Elem = E>>(f: &F, ambient: usize, vecs: &[Vec<E>]) -> Self {
        Self::span(f, &Matrix::from_columns(ambient, vecs))
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(f, ambient, 0) }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(f, ambient) }
    }

    pub fn kernel<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        Self::from_vectors(f, m.cols(), &m.kernel_columns(f))
    }

    pub fn image<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        Self::span(f, m)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<E>> {
        self.basis.columns()
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        Ok(self.basis.solve(f, v)?.is_some())
    }

    pub fn contains_subspace<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<bool> {
        for v in other.basis_vectors() {
            if !self.contains(f, &v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        Ok(Self::span(f, &self.basis.hstack(&other.basis)?))
    }

    /// Coordinates of `v` in this subspace's basis.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<Option<Vec<E>>> {
        self.basis.solve(f, v)
    }

    /// `{u' : phi(u, u') = 0 for all u in self}` for the pairing `phi(u, u') = u^T G u'`.
    pub fn perp<F: Field<Elem = E>>(&self, f: &F, gram: &Matrix<E>) -> Result<Self> {
        if gram.rows() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "gram matrix with {} rows for ambient dimension {}",
                gram.rows(),
                self.ambient
            )));
        }
        let constraints = self.basis.transpose().mul(f, gram)?;
        Ok(Self::kernel(f, &constraints))
    }

    /// `{u : phi(u, u') = 0 for all u' in self}`, the left orthogonal.
    pub fn left_perp<F: Field<Elem = E>>(&self, f: &F, gram: &Matrix<E>) -> Result<Self> {
        self.perp(f, &gram.transpose())
    }
}
