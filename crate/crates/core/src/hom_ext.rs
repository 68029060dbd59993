//! Hom and Ext between modules via the explicit three-term complex
//!
//! ```text
//! ⊕_i Hom(M_i, N_i) --d0--> ⊕_β Hom(M_s(β), N_e(β)) --d1--> ⊕_i Hom(M_i, N_i)
//! ```
//!
//! with `d0(f)_β = N(β) f_s(β) - f_e(β) M(β)` and
//! `d1(g)_i = Σ_{s(β)=i} (-1)^{|β|} (N(β̄) g_β + g_β̄ M(β))`.
//! Kernels of `d1` are derivations, images of `d0` are (up to sign) inner
//! derivations, and `Ext^1 = Ker d1 / Im d0`.

use serde::{Deserialize, Serialize};

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};
use crate::module::LambdaModule;

/// A tuple of vertexwise linear maps `f_i: M_i -> N_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMap<E> {
    pub maps: Vec<Matrix<E>>,
}

/// A tuple of maps `d(β): M_s(β) -> N_e(β)` indexed by the arrows of `Q̄`.
///
/// The source and target modules are not stored; every operation takes them
/// explicitly and checks shapes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation<E> {
    pub maps: Vec<Matrix<E>>,
}

fn c0_blocks<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Vec<(usize, usize)> {
    (0..m.dim().len()).map(|i| (n.dim()[i], m.dim()[i])).collect()
}

fn c1_blocks<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Vec<(usize, usize)> {
    m.quiver().arrows().iter().map(|b| (n.dim()[b.target], m.dim()[b.source])).collect()
}

fn flatten<E: Clone>(blocks: &[Matrix<E>]) -> Vec<E> {
    blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
}

fn unflatten<E: Clone>(shapes: &[(usize, usize)], v: &[E]) -> Vec<Matrix<E>> {
    let mut out = Vec::with_capacity(shapes.len());
    let mut pos = 0;
    for &(r, c) in shapes {
        out.push(Matrix::from_vec(r, c, v[pos..pos + r * c].to_vec()).expect("block size"));
        pos += r * c;
    }
    out
}

fn zero_blocks<F: Field>(f: &F, shapes: &[(usize, usize)]) -> Vec<Matrix<F::Elem>> {
    shapes.iter().map(|&(r, c)| Matrix::zeros(f, r, c)).collect()
}

fn unit_blocks<F: Field>(f: &F, shapes: &[(usize, usize)], idx: usize) -> Vec<Matrix<F::Elem>> {
    let mut blocks = zero_blocks(f, shapes);
    let mut pos = idx;
    for (b, &(r, c)) in shapes.iter().enumerate() {
        if pos < r * c {
            blocks[b].set(pos / c, pos % c, f.one());
            return blocks;
        }
        pos -= r * c;
    }
    unreachable!("index within total size")
}

fn total(shapes: &[(usize, usize)]) -> usize {
    shapes.iter().map(|(r, c)| r * c).sum()
}

/// Matrix of a linear map given by its action on unit block-tuples.
fn matrix_of<F: Field>(
    f: &F,
    in_shapes: &[(usize, usize)],
    out_dim: usize,
    apply: impl Fn(&[Matrix<F::Elem>]) -> Vec<Matrix<F::Elem>>,
) -> Matrix<F::Elem> {
    let cols: Vec<Vec<F::Elem>> = (0..total(in_shapes))
        .map(|k| flatten(&apply(&unit_blocks(f, in_shapes, k))))
        .collect();
    if cols.is_empty() {
        Matrix::zeros(f, out_dim, 0)
    } else {
        Matrix::from_columns(out_dim, &cols)
    }
}

fn check_pair<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<()> {
    if m.quiver() != n.quiver() {
        return Err(Error::QuiverMismatch);
    }
    if m.field() != n.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

fn apply_d0<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>, phi: &[Matrix<F::Elem>]) -> Vec<Matrix<F::Elem>> {
    let f = m.field();
    m.quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let left = n.action(k).mul(f, &phi[b.source]).expect("shape");
            let right = phi[b.target].mul(f, m.action(k)).expect("shape");
            left.sub(f, &right).expect("shape")
        })
        .collect()
}

fn apply_d1<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>, g: &[Matrix<F::Elem>]) -> Vec<Matrix<F::Elem>> {
    let f = m.field();
    let mut out: Vec<Matrix<F::Elem>> = zero_blocks(f, &c0_blocks(m, n));
    for (k, b) in m.quiver().arrows().iter().enumerate() {
        let t1 = n.action(b.bar).mul(f, &g[k]).expect("shape");
        let t2 = g[b.bar].mul(f, m.action(k)).expect("shape");
        let term = t1.add(f, &t2).expect("shape");
        let i = b.source;
        out[i] = if b.sign == 0 { out[i].add(f, &term) } else { out[i].sub(f, &term) }.expect("shape");
    }
    out
}

/// Left-hand side of the derivation equation, summed over arrows of `Q` only:
/// `Σ_{s(a)=p} (d(ā) x'(a) + x''(ā) d(a)) - Σ_{e(a)=p} (d(a) x'(ā) + x''(a) d(ā))`.
fn apply_derivation_equation<F: Field>(
    m: &LambdaModule<F>,
    n: &LambdaModule<F>,
    d: &[Matrix<F::Elem>],
) -> Vec<Matrix<F::Elem>> {
    let f = m.field();
    let mut out: Vec<Matrix<F::Elem>> = zero_blocks(f, &c0_blocks(m, n));
    for (k, b) in m.quiver().arrows().iter().enumerate() {
        if b.sign != 0 {
            continue;
        }
        let abar = b.bar;
        let at_source = d[abar]
            .mul(f, m.action(k))
            .and_then(|x| x.add(f, &n.action(abar).mul(f, &d[k])?))
            .expect("shape");
        out[b.source] = out[b.source].add(f, &at_source).expect("shape");
        let at_target = d[k]
            .mul(f, m.action(abar))
            .and_then(|x| x.add(f, &n.action(k).mul(f, &d[abar])?))
            .expect("shape");
        out[b.target] = out[b.target].sub(f, &at_target).expect("shape");
    }
    out
}

/// Matrix of `d0_{M,N}`.
pub fn d0_matrix<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<Matrix<F::Elem>> {
    check_pair(m, n)?;
    let out = total(&c1_blocks(m, n));
    Ok(matrix_of(m.field(), &c0_blocks(m, n), out, |phi| apply_d0(m, n, phi)))
}

/// Matrix of `d1_{M,N}`.
pub fn d1_matrix<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<Matrix<F::Elem>> {
    check_pair(m, n)?;
    let out = total(&c0_blocks(m, n));
    Ok(matrix_of(m.field(), &c1_blocks(m, n), out, |g| apply_d1(m, n, g)))
}

/// Matrix of the derivation equation written over the arrows of `Q`.
pub fn derivation_equation_matrix<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<Matrix<F::Elem>> {
    check_pair(m, n)?;
    let out = total(&c0_blocks(m, n));
    Ok(matrix_of(m.field(), &c1_blocks(m, n), out, |d| apply_derivation_equation(m, n, d)))
}

impl<E: Clone> HomMap<E> {
    pub fn to_vec(&self) -> Vec<E> {
        flatten(&self.maps)
    }
}

impl<E: Clone> Derivation<E> {
    pub fn to_vec(&self) -> Vec<E> {
        flatten(&self.maps)
    }

    pub fn from_vec<F: Field<Elem = E>>(m: &LambdaModule<F>, n: &LambdaModule<F>, v: &[E]) -> Self {
        Derivation { maps: unflatten(&c1_blocks(m, n), v) }
    }

    pub fn zero<F: Field<Elem = E>>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Self {
        Derivation { maps: zero_blocks(m.field(), &c1_blocks(m, n)) }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.maps.iter().all(|m| m.is_zero(f))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(f, b)).collect::<Result<_>>()?;
        Ok(Derivation { maps })
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Self {
        Derivation { maps: self.maps.iter().map(|m| m.scale(f, s)).collect() }
    }
}

fn check_shapes<E: Clone>(maps: &[Matrix<E>], shapes: &[(usize, usize)], what: &str) -> Result<()> {
    if maps.len() != shapes.len() || maps.iter().zip(shapes).any(|(m, &s)| m.shape() != s) {
        return Err(Error::ShapeMismatch(format!("{what} does not fit the modules")));
    }
    Ok(())
}

/// Whether `d` satisfies the derivation equation for `(M, N)`; on failure the
/// first offending vertex is reported.
pub fn check_derivation<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>, d: &Derivation<F::Elem>) -> Result<()> {
    check_pair(m, n)?;
    check_shapes(&d.maps, &c1_blocks(m, n), "derivation")?;
    let res = apply_derivation_equation(m, n, &d.maps);
    match res.iter().position(|r| !r.is_zero(m.field())) {
        None => Ok(()),
        Some(i) => Err(Error::NotDerivation { vertex: m.quiver().vertex_name(i).to_string() }),
    }
}

/// Whether `phi` is a module homomorphism `M -> N`.
pub fn check_intertwiner<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>, phi: &HomMap<F::Elem>) -> Result<()> {
    check_pair(m, n)?;
    check_shapes(&phi.maps, &c0_blocks(m, n), "vertexwise map")?;
    let res = apply_d0(m, n, &phi.maps);
    match res.iter().position(|r| !r.is_zero(m.field())) {
        None => Ok(()),
        Some(k) => Err(Error::NotIntertwiner { arrow: m.quiver().arrow(k).id.clone() }),
    }
}

/// The inner derivation `i(β) = φ_e(β) M(β) - N(β) φ_s(β)`.
pub fn inner_derivation<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>, phi: &HomMap<F::Elem>) -> Result<Derivation<F::Elem>> {
    check_pair(m, n)?;
    check_shapes(&phi.maps, &c0_blocks(m, n), "vertexwise map")?;
    let f = m.field();
    Ok(Derivation { maps: apply_d0(m, n, &phi.maps).iter().map(|x| x.neg(f)).collect() })
}

/// Basis of `Hom_Λ(M, N) = Ker d0`.
#[derive(Debug, Clone)]
pub struct HomSpace<E> {
    pub subspace: Subspace<E>,
    pub basis: Vec<HomMap<E>>,
}

impl<E> HomSpace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_space<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<HomSpace<F::Elem>> {
    let d0 = d0_matrix(m, n)?;
    let subspace = Subspace::kernel(m.field(), &d0);
    let shapes = c0_blocks(m, n);
    let basis = subspace.basis_vectors().iter().map(|v| HomMap { maps: unflatten(&shapes, v) }).collect();
    Ok(HomSpace { subspace, basis })
}

/// Hom/Ext data for an ordered pair `(M, N)` with a fixed complement `E_Λ`
/// of the inner derivations inside all derivations.
#[derive(Debug, Clone)]
pub struct ExtPresentation<E> {
    pub hom_dim: usize,
    pub ext1_dim: usize,
    /// `dim C0 - rank d1`; equals `dim Ext^2` only for non-Dynkin quivers.
    pub ext2_cokernel: usize,
    pub ext2_is_ext2: bool,
    /// `Σ_q dim M_q · dim N_q`.
    pub c0_dim: usize,
    pub derivations: Subspace<E>,
    pub inner: Subspace<E>,
    pub complement: Vec<Derivation<E>>,
    /// Columns: inner basis, then complement basis.
    adapted_basis: Matrix<E>,
}

impl<E: Clone> ExtPresentation<E> {
    pub fn derivation_dim(&self) -> usize {
        self.derivations.dim()
    }

    pub fn inner_dim(&self) -> usize {
        self.inner.dim()
    }

    /// Coordinates of the class of `d` in the complement basis.
    pub fn class_coordinates<F: Field<Elem = E>>(&self, f: &F, d: &Derivation<E>) -> Result<Vec<E>> {
        let x = self
            .adapted_basis
            .solve(f, &d.to_vec())?
            .ok_or_else(|| Error::ShapeMismatch("tuple is not a derivation".into()))?;
        Ok(x[self.inner.dim()..].to_vec())
    }

    pub fn is_inner<F: Field<Elem = E>>(&self, f: &F, d: &Derivation<E>) -> Result<bool> {
        Ok(self.class_coordinates(f, d)?.iter().all(|c| f.is_zero(c)))
    }

    /// `Σ_j c_j E_j` for complement coordinates `c`.
    pub fn derivation_from_class<F: Field<Elem = E>>(&self, f: &F, coords: &[E]) -> Result<Derivation<E>> {
        if coords.len() != self.complement.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for an Ext space of dimension {}",
                coords.len(),
                self.complement.len()
            )));
        }
        let mut it = self.complement.iter().zip(coords);
        let (first, c0) = it.next().ok_or_else(|| Error::ShapeMismatch("Ext^1 vanishes".into()))?;
        it.try_fold(first.scale(f, c0), |acc, (e, c)| acc.add(f, &e.scale(f, c)))
    }
}

pub fn ext_presentation<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<ExtPresentation<F::Elem>> {
    let f = m.field();
    let d0 = d0_matrix(m, n)?;
    let d1 = d1_matrix(m, n)?;
    let rank0 = d0.rank(f);
    let rank1 = d1.rank(f);
    let c0_dim = total(&c0_blocks(m, n));
    let derivations = Subspace::kernel(f, &d1);
    let inner = Subspace::image(f, &d0);

    let mut adapted = inner.basis().clone();
    let mut complement_vecs = Vec::new();
    for v in derivations.basis_vectors() {
        let candidate = adapted.hstack(&Matrix::from_columns(adapted.rows(), std::slice::from_ref(&v)))?;
        if candidate.rank(f) > adapted.cols() {
            adapted = candidate;
            complement_vecs.push(v);
        }
    }
    let complement: Vec<Derivation<F::Elem>> =
        complement_vecs.iter().map(|v| Derivation::from_vec(m, n, v)).collect();
    debug_assert_eq!(inner.dim() + complement.len(), derivations.dim());
    Ok(ExtPresentation {
        hom_dim: c0_dim - rank0,
        ext1_dim: derivations.dim() - rank0,
        ext2_cokernel: c0_dim - rank1,
        ext2_is_ext2: !m.quiver().base().is_dynkin(),
        c0_dim,
        derivations,
        inner,
        complement,
        adapted_basis: adapted,
    })
}

/// The block lower-triangular module
/// `E_d(β) = [[M(β), 0], [d(β), N(β)]]`, an extension `0 -> N -> E_d -> M -> 0`.
/// In each piece the basis of `M` comes first.
pub fn middle_term<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>, d: &Derivation<F::Elem>) -> Result<LambdaModule<F>> {
    check_derivation(m, n, d)?;
    let f = m.field();
    let dim = m.dim().add(n.dim());
    let action = m
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let mut blk = Matrix::zeros(f, dim[b.target], dim[b.source]);
            blk.paste(0, 0, m.action(k));
            blk.paste(m.dim()[b.target], 0, &d.maps[k]);
            blk.paste(m.dim()[b.target], m.dim()[b.source], n.action(k));
            blk
        })
        .collect();
    LambdaModule::new(m.quiver().clone(), f.clone(), dim, action)
}

/// `[ε] ∘ ρ`: for `d ∈ D(y', y'')` and `ρ: x' -> y'`, the derivation
/// `β ↦ d(β) ρ_s(β)` in `D(x', y'')`.
pub fn pullback<F: Field>(
    x1: &LambdaModule<F>,
    y1: &LambdaModule<F>,
    y2: &LambdaModule<F>,
    d: &Derivation<F::Elem>,
    rho: &HomMap<F::Elem>,
) -> Result<Derivation<F::Elem>> {
    check_intertwiner(x1, y1, rho)?;
    check_derivation(y1, y2, d)?;
    let f = x1.field();
    let maps = x1
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, b)| d.maps[k].mul(f, &rho.maps[b.source]))
        .collect::<Result<_>>()?;
    Ok(Derivation { maps })
}

/// `λ ∘ [ε]`: for `d ∈ D(y', y'')` and `λ: y'' -> z''`, the derivation
/// `β ↦ λ_e(β) d(β)` in `D(y', z'')`.
pub fn pushout<F: Field>(
    y1: &LambdaModule<F>,
    y2: &LambdaModule<F>,
    z2: &LambdaModule<F>,
    d: &Derivation<F::Elem>,
    lambda: &HomMap<F::Elem>,
) -> Result<Derivation<F::Elem>> {
    check_intertwiner(y2, z2, lambda)?;
    check_derivation(y1, y2, d)?;
    let f = y1.field();
    let maps = y1
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, b)| lambda.maps[b.target].mul(f, &d.maps[k]))
        .collect::<Result<_>>()?;
    Ok(Derivation { maps })
}

/// `Σ_β (-1)^{|β|} Tr(d(β̄) g(β))` for `d ∈ D(M, N)`, `g ∈ D(N, M)`.
///
/// Shapes are checked; the derivation equations are the caller's contract
/// (see [`cy_pairing_checked`]).
pub fn cy_pairing<F: Field>(
    m: &LambdaModule<F>,
    n: &LambdaModule<F>,
    d: &Derivation<F::Elem>,
    g: &Derivation<F::Elem>,
) -> Result<F::Elem> {
    check_pair(m, n)?;
    check_shapes(&d.maps, &c1_blocks(m, n), "first argument")?;
    check_shapes(&g.maps, &c1_blocks(n, m), "second argument")?;
    let f = m.field();
    let mut acc = f.zero();
    for (k, b) in m.quiver().arrows().iter().enumerate() {
        let t = d.maps[b.bar].mul(f, &g.maps[k])?.trace(f)?;
        acc = if b.sign == 0 { f.add(&acc, &t) } else { f.sub(&acc, &t) };
    }
    Ok(acc)
}

pub fn cy_pairing_checked<F: Field>(
    m: &LambdaModule<F>,
    n: &LambdaModule<F>,
    d: &Derivation<F::Elem>,
    g: &Derivation<F::Elem>,
) -> Result<F::Elem> {
    check_derivation(m, n, d)?;
    check_derivation(n, m, g)?;
    cy_pairing(m, n, d, g)
}

/// Gram matrix of the pairing on `E(M, N) × E(N, M)`.
pub fn pairing_gram<F: Field>(
    m: &LambdaModule<F>,
    n: &LambdaModule<F>,
    mn: &ExtPresentation<F::Elem>,
    nm: &ExtPresentation<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    let mut data = Vec::with_capacity(mn.complement.len() * nm.complement.len());
    for d in &mn.complement {
        for g in &nm.complement {
            data.push(cy_pairing(m, n, d, g)?);
        }
    }
    Matrix::from_vec(mn.complement.len(), nm.complement.len(), data)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub hom_mn: usize,
    pub hom_nm: usize,
    pub ext1_mn: usize,
    pub ext1_nm: usize,
    pub ext2_cokernel_mn: usize,
    pub form: i64,
    pub dynkin: bool,
    /// `dim Ext^1(M,N) = dim Hom(M,N) + dim Hom(N,M) - (dim M, dim N)_Q`.
    pub crawley_boevey: bool,
    /// `Hom - Ext^1 + Ext^2 = (dim M, dim N)_Q`; only asserted off Dynkin type.
    pub euler_form: Option<bool>,
    pub ext_symmetric: bool,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.crawley_boevey && self.ext_symmetric && self.euler_form != Some(false)
    }
}

pub fn dimension_checks<F: Field>(m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<DimensionReport> {
    let mn = ext_presentation(m, n)?;
    let nm = ext_presentation(n, m)?;
    let q = m.quiver().base();
    let form = q.symmetric_form(m.dim(), n.dim());
    let dynkin = q.is_dynkin();
    let cb = mn.ext1_dim as i64 == mn.hom_dim as i64 + nm.hom_dim as i64 - form;
    let euler = (!dynkin).then(|| mn.hom_dim as i64 - mn.ext1_dim as i64 + mn.ext2_cokernel as i64 == form);
    Ok(DimensionReport {
        hom_mn: mn.hom_dim,
        hom_nm: nm.hom_dim,
        ext1_mn: mn.ext1_dim,
        ext1_nm: nm.ext1_dim,
        ext2_cokernel_mn: mn.ext2_cokernel,
        form,
        dynkin,
        crawley_boevey: cb,
        euler_form: euler,
        ext_symmetric: mn.ext1_dim == nm.ext1_dim,
    })
}

/// On-disk form of a derivation: maps keyed by arrow id, tagged with the
/// source and target module references.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationFile {
    pub source: String,
    pub target: String,
    pub maps: IndexMap<String, Vec<Vec<String>>>,
}

impl DerivationFile {
    pub fn from_derivation<F: Field>(
        source: &str,
        target: &str,
        m: &LambdaModule<F>,
        d: &Derivation<F::Elem>,
    ) -> Self {
        let f = m.field();
        let maps = m
            .quiver()
            .arrows()
            .iter()
            .zip(&d.maps)
            .map(|(b, mat)| {
                let rows = (0..mat.rows()).map(|r| mat.row(r).iter().map(|e| f.format_elem(e)).collect()).collect();
                (b.id.clone(), rows)
            })
            .collect();
        DerivationFile { source: source.into(), target: target.into(), maps }
    }

    pub fn to_derivation<F: Field>(&self, m: &LambdaModule<F>, n: &LambdaModule<F>) -> Result<Derivation<F::Elem>> {
        let f = m.field();
        for id in self.maps.keys() {
            m.quiver().arrow_index(id)?;
        }
        let maps = m
            .quiver()
            .arrows()
            .iter()
            .zip(c1_blocks(m, n))
            .map(|(b, (r, c))| match self.maps.get(&b.id) {
                None => Ok(Matrix::zeros(f, r, c)),
                Some(rows) if r == 0 && rows.is_empty() => Ok(Matrix::zeros(f, 0, c)),
                Some(rows) => {
                    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                        return Err(Error::ShapeMismatch(format!("derivation map for {}", b.id)));
                    }
                    let data = rows.iter().flatten().map(|s| f.parse_elem(s)).collect::<Result<Vec<_>>>()?;
                    Matrix::from_vec(r, c, data)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Derivation { maps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use crate::module::d4::{d4_quiver, module_s4, module_t};
    use crate::quiver::{build_double, DimVector, DoubleQuiver, Quiver};
    use std::sync::Arc;

    fn quiver(q: Quiver) -> Arc<DoubleQuiver> {
        Arc::new(build_double(&q).unwrap())
    }

    fn simple<F: Field>(dq: &Arc<DoubleQuiver>, f: F, i: usize) -> LambdaModule<F> {
        LambdaModule::simple(dq.clone(), f, i).unwrap()
    }

    fn a2_x() -> LambdaModule<Rationals> {
        let q = Rationals;
        LambdaModule::from_arrow_map(
            quiver(Quiver::a_n(2)),
            q,
            DimVector(vec![1, 1]),
            vec![("a1", Matrix::from_i64(&q, 1, 1, &[1]).unwrap())],
        )
        .unwrap()
    }

    #[test]
    fn hom_examples() {
        let dq = quiver(Quiver::a_n(2));
        let s1 = simple(&dq, Rationals, 0);
        let s2 = simple(&dq, Rationals, 1);
        assert_eq!(hom_space(&s1, &s1).unwrap().dim(), 1);
        assert_eq!(hom_space(&s1, &s2).unwrap().dim(), 0);
        let x = a2_x();
        assert_eq!(hom_space(&x, &x).unwrap().dim(), 1);
    }

    #[test]
    fn ext_examples() {
        let dq = quiver(Quiver::a_n(2));
        let s1 = simple(&dq, Rationals, 0);
        let s2 = simple(&dq, Rationals, 1);
        let p = ext_presentation(&s1, &s2).unwrap();
        assert_eq!(p.ext1_dim, 1);
        assert_eq!(p.inner_dim(), 0);
        assert_eq!(ext_presentation(&s1, &s1).unwrap().ext1_dim, 0);
        let d4 = d4_quiver();
        let (t, s4) = (module_t(&d4), module_s4(&d4));
        assert_eq!(ext_presentation(&t, &s4).unwrap().ext1_dim, 2);
        assert_eq!(ext_presentation(&s4, &t).unwrap().ext1_dim, 2);
    }

    #[test]
    fn four_term_sequence_count() {
        let d4 = d4_quiver();
        let (t, s4) = (module_t(&d4), module_s4(&d4));
        for (m, n) in [(&t, &s4), (&s4, &t), (&t, &t)] {
            let p = ext_presentation(m, n).unwrap();
            assert_eq!(p.complement.len(), p.derivation_dim() + p.hom_dim - p.c0_dim);
        }
    }

    #[test]
    fn middle_terms() {
        let dq = quiver(Quiver::a_n(2));
        let s1 = simple(&dq, Rationals, 0);
        let s2 = simple(&dq, Rationals, 1);
        let zero = Derivation::zero(&s1, &s2);
        assert_eq!(middle_term(&s1, &s2, &zero).unwrap(), s1.direct_sum(&s2).unwrap());
        let mut d = zero.clone();
        d.maps[0] = Matrix::from_i64(&Rationals, 1, 1, &[1]).unwrap();
        assert_eq!(middle_term(&s1, &s2, &d).unwrap(), a2_x());
    }

    #[test]
    fn middle_term_rejects_non_derivation() {
        let dq = quiver(Quiver::a_n(2));
        let q = Rationals;
        let m = a2_x();
        let s1 = simple(&dq, q, 0);
        // d(ā): x_2 -> (S1)_1 with x(a) = 1 forces a relation at vertex 1
        let mut d = Derivation::zero(&m, &s1);
        d.maps[1] = Matrix::from_i64(&q, 1, 1, &[1]).unwrap();
        assert!(matches!(middle_term(&m, &s1, &d), Err(Error::NotDerivation { .. })));
    }

    #[test]
    fn pullback_pushout_identities() {
        let dq = quiver(Quiver::a_n(2));
        let q = Rationals;
        let s1 = simple(&dq, q, 0);
        let s2 = simple(&dq, q, 1);
        let mut d = Derivation::zero(&s1, &s2);
        d.maps[0] = Matrix::from_i64(&q, 1, 1, &[1]).unwrap();
        let id1 = HomMap { maps: vec![Matrix::identity(&q, 1), Matrix::identity(&q, 0)] };
        assert_eq!(pullback(&s1, &s1, &s2, &d, &id1).unwrap(), d);
        let zero2 = HomMap { maps: vec![Matrix::zeros(&q, 0, 0), Matrix::zeros(&q, 1, 1)] };
        assert!(pushout(&s1, &s2, &s2, &d, &zero2).unwrap().is_zero(&q));
        // the only map S2 -> S1 is zero
        let rho = HomMap { maps: vec![Matrix::zeros(&q, 1, 0), Matrix::zeros(&q, 0, 1)] };
        assert!(pullback(&s2, &s1, &s2, &d, &rho).unwrap().is_zero(&q));
        let bad = HomMap { maps: vec![Matrix::identity(&q, 1), Matrix::zeros(&q, 1, 1)] };
        let x = a2_x();
        assert!(matches!(pullback(&x, &x, &s2, &Derivation::zero(&x, &s2), &bad), Err(Error::NotIntertwiner { .. })));
    }

    #[test]
    fn pairing_examples() {
        let dq = quiver(Quiver::a_n(2));
        let q = Rationals;
        let s1 = simple(&dq, q, 0);
        let s2 = simple(&dq, q, 1);
        let mut d = Derivation::zero(&s1, &s2);
        d.maps[0] = Matrix::from_i64(&q, 1, 1, &[1]).unwrap();
        let mut g = Derivation::zero(&s2, &s1);
        g.maps[1] = Matrix::from_i64(&q, 1, 1, &[1]).unwrap();
        assert_eq!(cy_pairing_checked(&s1, &s2, &d, &g).unwrap(), q.from_i64(-1));
        assert_eq!(cy_pairing(&s1, &s2, &d, &Derivation::zero(&s2, &s1)).unwrap(), q.zero());
        assert!(cy_pairing(&s1, &s2, &g, &d).is_err());
    }

    #[test]
    fn inner_derivations_pair_to_zero() {
        let d4 = d4_quiver();
        let q = Rationals;
        let (t, s4) = (module_t(&d4), module_s4(&d4));
        let nm = ext_presentation(&s4, &t).unwrap();
        // φ_4 = 1: T_4 -> (S4)_4
        let phi = HomMap {
            maps: vec![Matrix::zeros(&q, 0, 1), Matrix::zeros(&q, 0, 1), Matrix::zeros(&q, 0, 1), Matrix::identity(&q, 1)],
        };
        let inner = inner_derivation(&t, &s4, &phi).unwrap();
        check_derivation(&t, &s4, &inner).unwrap();
        assert!(!inner.is_zero(&q));
        for g in &nm.complement {
            assert_eq!(cy_pairing(&t, &s4, &inner, g).unwrap(), q.zero());
        }
        let mn = ext_presentation(&t, &s4).unwrap();
        assert!(mn.is_inner(&q, &inner).unwrap());
        let gram = pairing_gram(&t, &s4, &mn, &nm).unwrap();
        assert_eq!(gram.rank(&q), 2);
    }

    #[test]
    fn dimension_examples() {
        let kr = quiver(Quiver::kronecker());
        let s1 = simple(&kr, Rationals, 0);
        let s2 = simple(&kr, Rationals, 1);
        let rep = dimension_checks(&s1, &s2).unwrap();
        assert_eq!(rep.ext1_mn, 2);
        assert!(rep.passed());
        assert_eq!(rep.euler_form, Some(true));
        let same = dimension_checks(&s1, &s1).unwrap();
        assert_eq!((same.hom_mn, same.ext1_mn), (1, 0));
        let d4 = d4_quiver();
        let rep = dimension_checks(&module_t(&d4), &module_s4(&d4)).unwrap();
        assert_eq!((rep.ext1_mn, rep.ext1_nm), (2, 2));
        assert_eq!(rep.euler_form, None);
        assert!(rep.passed());
    }

    #[test]
    fn works_over_prime_fields() {
        let d4 = d4_quiver();
        let t = module_t(&d4).reduce_mod_p(3).unwrap();
        let s4 = module_s4(&d4).reduce_mod_p(3).unwrap();
        let p = ext_presentation(&t, &s4).unwrap();
        assert_eq!(p.ext1_dim, 2);
        let f = PrimeField::new(3).unwrap();
        let d = p.derivation_from_class(&f, &[1, 2]).unwrap();
        assert_eq!(p.class_coordinates(&f, &d).unwrap(), vec![1, 2]);
    }

    #[test]
    fn derivation_file_round_trip() {
        let d4 = d4_quiver();
        let (t, s4) = (module_t(&d4), module_s4(&d4));
        let p = ext_presentation(&s4, &t).unwrap();
        let d = &p.complement[0];
        let file = DerivationFile::from_derivation("S4", "T", &s4, d);
        let text = serde_json::to_string(&file).unwrap();
        let back: DerivationFile = serde_json::from_str(&text).unwrap();
        assert_eq!(&back.to_derivation(&s4, &t).unwrap(), d);
    }
}
