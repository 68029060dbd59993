//! Modules over the preprojective algebra, stored as one matrix per arrow of
//! the double quiver.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::field::format_rational;
use crate::linalg::{Field, Matrix, PrimeField, Rationals, Subspace};
use crate::quiver::{DimVector, DoubleQuiver};

pub mod d4;
pub mod io;

/// A representation `x` of `Q̄`: for each doubled arrow `β` a matrix
/// `x(β)` from the `s(β)`-piece to the `e(β)`-piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaModule<F: Field> {
    quiver: Arc<DoubleQuiver>,
    field: F,
    dim: DimVector,
    action: Vec<Matrix<F::Elem>>,
}

pub type RationalModule = LambdaModule<Rationals>;
pub type ModularModule = LambdaModule<PrimeField>;

/// Per-vertex subspaces of a module's graded pieces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedSubspace<E>(pub Vec<Subspace<E>>);

impl<E: Clone> GradedSubspace<E> {
    pub fn dims(&self) -> DimVector {
        DimVector(self.0.iter().map(|s| s.dim()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport<E> {
    /// Vertices whose relation residual is nonzero, with the residual.
    pub residuals: Vec<(String, Matrix<E>)>,
    /// `None` when nilpotency was not requested.
    pub nilpotent: Option<bool>,
}

impl<E> ValidationReport<E> {
    pub fn is_valid(&self) -> bool {
        self.residuals.is_empty() && self.nilpotent != Some(false)
    }
}

fn check_same<F: Field>(a: &LambdaModule<F>, b: &LambdaModule<F>) -> Result<()> {
    if !Arc::ptr_eq(&a.quiver, &b.quiver) && a.quiver != b.quiver {
        return Err(Error::QuiverMismatch);
    }
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

impl<F: Field> LambdaModule<F> {
    /// Builds a module, checking every matrix shape against `dim`.
    ///
    /// The preprojective relations are not enforced here; see [`Self::validate`].
    pub fn new(quiver: Arc<DoubleQuiver>, field: F, dim: DimVector, action: Vec<Matrix<F::Elem>>) -> Result<Self> {
        if dim.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "dimension vector of length {} for {} vertices",
                dim.len(),
                quiver.vertex_count()
            )));
        }
        if action.len() != quiver.arrows().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} arrows",
                action.len(),
                quiver.arrows().len()
            )));
        }
        for (b, m) in quiver.arrows().iter().zip(&action) {
            let want = (dim[b.target], dim[b.source]);
            if m.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} has a {:?} matrix, expected {:?}",
                    b.id,
                    m.shape(),
                    want
                )));
            }
        }
        Ok(LambdaModule { quiver, field, dim, action })
    }

    /// Builds a module from `(arrow id, matrix)` pairs; unlisted arrows act by zero.
    pub fn from_arrow_map(
        quiver: Arc<DoubleQuiver>,
        field: F,
        dim: DimVector,
        maps: Vec<(&str, Matrix<F::Elem>)>,
    ) -> Result<Self> {
        let mut action: Vec<Matrix<F::Elem>> = quiver
            .arrows()
            .iter()
            .map(|b| Matrix::zeros(&field, dim.0.get(b.target).copied().unwrap_or(0), dim.0.get(b.source).copied().unwrap_or(0)))
            .collect();
        for (id, m) in maps {
            let k = quiver.arrow_index(id)?;
            action[k] = m;
        }
        Self::new(quiver, field, dim, action)
    }

    pub fn zero(quiver: Arc<DoubleQuiver>, field: F) -> Self {
        let n = quiver.vertex_count();
        Self::from_arrow_map(quiver, field, DimVector::zero(n), Vec::new()).expect("zero module")
    }

    /// The simple module at vertex `i`.
    pub fn simple(quiver: Arc<DoubleQuiver>, field: F, i: usize) -> Result<Self> {
        let n = quiver.vertex_count();
        if i >= n {
            return Err(Error::UnknownVertex(i.to_string()));
        }
        Self::from_arrow_map(quiver, field, DimVector::unit(n, i), Vec::new())
    }

    pub fn simple_named(quiver: Arc<DoubleQuiver>, field: F, name: &str) -> Result<Self> {
        let i = quiver.base().vertex_index(name)?;
        Self::simple(quiver, field, i)
    }

    pub fn quiver(&self) -> &Arc<DoubleQuiver> {
        &self.quiver
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn total_dim(&self) -> usize {
        self.dim.total()
    }

    pub fn action(&self, arrow: usize) -> &Matrix<F::Elem> {
        &self.action[arrow]
    }

    pub fn actions(&self) -> &[Matrix<F::Elem>] {
        &self.action
    }

    /// `sum_{β: s(β)=i} (-1)^{|β|} x(β̄) x(β)` as a `d_i x d_i` matrix.
    pub fn relation_residual(&self, i: usize) -> Matrix<F::Elem> {
        let f = &self.field;
        let mut acc = Matrix::zeros(f, self.dim[i], self.dim[i]);
        for (k, b) in self.quiver.arrows().iter().enumerate() {
            if b.source != i {
                continue;
            }
            let term = self.action[b.bar].mul(f, &self.action[k]).expect("shapes checked");
            acc = if b.sign == 0 { acc.add(f, &term) } else { acc.sub(f, &term) }.expect("shapes checked");
        }
        acc
    }

    /// Offsets of each vertex's block inside the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dim.len());
        let mut acc = 0;
        for &d in &self.dim.0 {
            off.push(acc);
            acc += d;
        }
        off
    }

    /// The endomorphism of the total space assembled from all arrow blocks.
    pub fn total_endomorphism(&self) -> Matrix<F::Elem> {
        let f = &self.field;
        let n = self.total_dim();
        let off = self.offsets();
        let mut total = Matrix::zeros(f, n, n);
        for (k, b) in self.quiver.arrows().iter().enumerate() {
            let blk = &self.action[k];
            for r in 0..blk.rows() {
                for c in 0..blk.cols() {
                    let (rr, cc) = (off[b.target] + r, off[b.source] + c);
                    let v = f.add(total.get(rr, cc), blk.get(r, c));
                    total.set(rr, cc, v);
                }
            }
        }
        total
    }

    pub fn is_nilpotent(&self) -> bool {
        let n = self.total_dim();
        self.total_endomorphism().pow(&self.field, n).expect("square").is_zero(&self.field)
    }

    pub fn validate(&self, require_nilpotent: bool) -> ValidationReport<F::Elem> {
        let residuals = (0..self.dim.len())
            .filter_map(|i| {
                let r = self.relation_residual(i);
                (!r.is_zero(&self.field)).then(|| (self.quiver.vertex_name(i).to_string(), r))
            })
            .collect();
        let nilpotent = require_nilpotent.then(|| self.is_nilpotent());
        ValidationReport { residuals, nilpotent }
    }

    pub fn is_valid(&self) -> bool {
        self.validate(false).is_valid()
    }

    /// Block-diagonal sum; in each piece the basis of `self` comes first.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let f = &self.field;
        let dim = self.dim.add(&other.dim);
        let action = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mut m = Matrix::zeros(f, dim[b.target], dim[b.source]);
                m.paste(0, 0, &self.action[k]);
                m.paste(self.dim[b.target], self.dim[b.source], &other.action[k]);
                m
            })
            .collect();
        Self::new(self.quiver.clone(), f.clone(), dim, action)
    }

    /// Whether `s` is stable under every arrow; on failure names the arrow.
    pub fn check_stable(&self, s: &GradedSubspace<F::Elem>) -> Result<()> {
        self.restrict(s).map(|_| ())
    }

    /// The submodule structure on an `x`-stable graded subspace, written in
    /// the canonical basis of each piece.
    pub fn restrict(&self, s: &GradedSubspace<F::Elem>) -> Result<Self> {
        let f = &self.field;
        if s.0.len() != self.dim.len() || s.0.iter().zip(&self.dim.0).any(|(sub, &d)| sub.ambient() != d) {
            return Err(Error::DimensionMismatch("graded subspace does not fit the module".into()));
        }
        let mut action = Vec::with_capacity(self.action.len());
        for (k, b) in self.quiver.arrows().iter().enumerate() {
            let src = s.0[b.source].basis();
            let dst = s.0[b.target].basis();
            let image = self.action[k].mul(f, src)?;
            match dst.solve_matrix(f, &image)? {
                Some(y) => action.push(y),
                None => return Err(Error::Unstable { arrow: b.id.clone() }),
            }
        }
        Self::new(self.quiver.clone(), f.clone(), s.dims(), action)
    }

    /// Transports the module along per-vertex invertible matrices `g_i`:
    /// `x(β) ↦ g_e x(β) g_s^{-1}`.
    pub fn change_basis(&self, g: &[Matrix<F::Elem>]) -> Result<Self> {
        let f = &self.field;
        let mut inverses = Vec::with_capacity(g.len());
        for (i, gi) in g.iter().enumerate() {
            let id = Matrix::identity(f, self.dim[i]);
            let inv = gi
                .solve_matrix(f, &id)?
                .ok_or_else(|| Error::DimensionMismatch(format!("base change at vertex {i} is singular")))?;
            inverses.push(inv);
        }
        let action = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, b)| g[b.target].mul(f, &self.action[k])?.mul(f, &inverses[b.source]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.quiver.clone(), f.clone(), self.dim.clone(), action)
    }

    /// Nonzero paths of length `1..=max_len` in `Q̄`, as arrow sequences in
    /// the order they act (first arrow first).
    pub fn nonzero_paths(&self, max_len: usize, cap: usize) -> Vec<Vec<usize>> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut frontier: Vec<(Vec<usize>, Matrix<F::Elem>)> = Vec::new();
        for (k, m) in self.action.iter().enumerate() {
            if !m.is_zero(f) {
                frontier.push((vec![k], m.clone()));
            }
        }
        for _ in 0..max_len {
            if frontier.is_empty() || out.len() >= cap {
                break;
            }
            let mut next = Vec::new();
            for (path, m) in frontier {
                let end = self.quiver.arrow(*path.last().expect("nonempty")).target;
                out.push(path.clone());
                for (k, b) in self.quiver.arrows().iter().enumerate() {
                    if b.source != end {
                        continue;
                    }
                    let prod = self.action[k].mul(f, &m).expect("composable");
                    if !prod.is_zero(f) {
                        let mut p = path.clone();
                        p.push(k);
                        next.push((p, prod));
                    }
                }
            }
            frontier = next;
        }
        out.truncate(cap);
        out
    }

    pub fn path_matrix(&self, path: &[usize]) -> Matrix<F::Elem> {
        let f = &self.field;
        let first = self.quiver.arrow(path[0]);
        let mut m = Matrix::identity(f, self.dim[first.source]);
        for &k in path {
            m = self.action[k].mul(f, &m).expect("composable path");
        }
        m
    }

    /// Ranks of the given path products, then for each vertex and each path
    /// length the rank of all incoming images and of all outgoing kernels
    /// combined.
    pub fn rank_signature(&self, paths: &[Vec<usize>]) -> Vec<usize> {
        let f = &self.field;
        let mut sig: Vec<usize> = paths.iter().map(|p| self.path_matrix(p).rank(f)).collect();
        let max_len = paths.iter().map(|p| p.len()).max().unwrap_or(0);
        for v in 0..self.dim.len() {
            for len in 1..=max_len {
                let incoming: Vec<Matrix<F::Elem>> = paths
                    .iter()
                    .filter(|p| p.len() == len && self.quiver.arrow(*p.last().unwrap()).target == v)
                    .map(|p| self.path_matrix(p))
                    .collect();
                let outgoing: Vec<Matrix<F::Elem>> = paths
                    .iter()
                    .filter(|p| p.len() == len && self.quiver.arrow(p[0]).source == v)
                    .map(|p| self.path_matrix(p))
                    .collect();
                let hs = incoming
                    .iter()
                    .fold(Matrix::zeros(f, self.dim[v], 0), |acc, m| acc.hstack(m).expect("rows agree"));
                let vs = outgoing
                    .iter()
                    .fold(Matrix::zeros(f, 0, self.dim[v]), |acc, m| acc.vstack(m).expect("cols agree"));
                sig.push(hs.rank(f));
                sig.push(vs.rank(f));
            }
        }
        sig
    }
}

impl LambdaModule<Rationals> {
    /// Entrywise reduction modulo `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<LambdaModule<PrimeField>> {
        let fp = PrimeField::new(p)?;
        let mut action = Vec::with_capacity(self.action.len());
        for (k, m) in self.action.iter().enumerate() {
            let arrow = &self.quiver.arrow(k).id;
            let red = m.try_map(|q: &BigRational| {
                fp.reduce(q).ok_or_else(|| Error::BadPrime {
                    p,
                    entry: format!("arrow {arrow}, entry {}", format_rational(q)),
                })
            })?;
            action.push(red);
        }
        LambdaModule::new(self.quiver.clone(), fp, self.dim.clone(), action)
    }
}
