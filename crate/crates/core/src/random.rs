//! Random nilpotent modules built as iterated extensions of simples.

use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;

use crate::error::Result;
use crate::hom_ext::{ext_presentation, middle_term, Derivation, HomMap, HomSpace};
use crate::linalg::{Field, Matrix, Rationals};
use crate::module::{LambdaModule, RationalModule};
use crate::quiver::DoubleQuiver;

/// Seed from `PREPRO_SEED`, falling back to `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("PREPRO_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn small_rational<R: Rng>(rng: &mut R, range: i64) -> BigRational {
    BigRational::from_integer(rng.gen_range(-range..=range).into())
}

/// A random element of the derivation space `D(M, N)` with small integer
/// coordinates in the canonical basis.
pub fn random_derivation<R: Rng>(
    rng: &mut R,
    m: &RationalModule,
    n: &RationalModule,
    range: i64,
) -> Result<Derivation<BigRational>> {
    let q = Rationals;
    let pres = ext_presentation(m, n)?;
    let basis = pres.derivations.basis_vectors();
    let mut v = vec![q.zero(); Derivation::zero(m, n).to_vec().len()];
    for b in basis {
        let c = small_rational(rng, range);
        for (slot, e) in v.iter_mut().zip(&b) {
            *slot = q.add(slot, &q.mul(&c, e));
        }
    }
    Ok(Derivation::from_vec(m, n, &v))
}

/// A random combination of a Hom basis.
pub fn random_hom<R: Rng>(rng: &mut R, space: &HomSpace<BigRational>, zero: &HomMap<BigRational>, range: i64) -> HomMap<BigRational> {
    let q = Rationals;
    let mut acc = zero.clone();
    for b in &space.basis {
        let c = small_rational(rng, range);
        acc = HomMap {
            maps: acc.maps.iter().zip(&b.maps).map(|(a, x)| a.add(&q, &x.scale(&q, &c)).expect("shape")).collect(),
        };
    }
    acc
}

/// Builds a module by `steps` random extensions by simples, keeping every
/// vertex dimension at most `max_vertex_dim`.
pub fn random_module<R: Rng>(
    rng: &mut R,
    quiver: &Arc<DoubleQuiver>,
    steps: usize,
    max_vertex_dim: usize,
    range: i64,
) -> Result<RationalModule> {
    let q = Rationals;
    let n = quiver.vertex_count();
    let mut m = LambdaModule::zero(quiver.clone(), q);
    for _ in 0..steps {
        let open: Vec<usize> = (0..n).filter(|&i| m.dim()[i] < max_vertex_dim).collect();
        if open.is_empty() {
            break;
        }
        let j = open[rng.gen_range(0..open.len())];
        let s = LambdaModule::simple(quiver.clone(), q, j)?;
        m = if rng.gen_bool(0.5) {
            let d = random_derivation(rng, &s, &m, range)?;
            middle_term(&s, &m, &d)?
        } else {
            let d = random_derivation(rng, &m, &s, range)?;
            middle_term(&m, &s, &d)?
        };
    }
    Ok(m)
}

/// A random invertible matrix with small integer entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, range: i64) -> Matrix<BigRational> {
    let q = Rationals;
    loop {
        let data = (0..n * n).map(|_| small_rational(rng, range)).collect();
        let m = Matrix::from_vec(n, n, data).expect("square");
        if m.rank(&q) == n {
            return m;
        }
    }
}

/// The module transported along a random graded base change.
pub fn random_base_change<R: Rng>(rng: &mut R, m: &RationalModule, range: i64) -> Result<RationalModule> {
    let g: Vec<_> = m.dim().0.iter().map(|&d| random_invertible(rng, d, range)).collect();
    m.change_basis(&g)
}
