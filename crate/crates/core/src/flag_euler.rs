//! Counting `x`-stable flags over prime fields and recovering Euler
//! characteristics from the counting polynomial evaluated at `q = 1`.
//!
//! A flag `V = V^0 ⊇ V^1 ⊇ ... ⊇ V^m = 0` of type `i` with `x`-stable terms
//! is a composition series. The top step `V^0 ⊇ V^1` with quotient `S_{i_1}`
//! is a graded hyperplane `H` at vertex `i_1` containing the images of all
//! arrows ending there; the rest of the flag is a flag of the restriction.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom_ext::hom_space;
use crate::linalg::{interpolate_integers, is_prime, primes, Field, Matrix, RationalPolynomial, Subspace};
use crate::module::{GradedSubspace, LambdaModule, ModularModule, RationalModule};
use crate::par;
use crate::quiver::{enumerate_words, DimVector, Quiver, Word};

/// Canonical representatives of the points of `P^{r-1}(F_p)`: the first
/// nonzero coordinate is 1.
pub fn projective_points(p: u64, r: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        let count = p.pow(free as u32);
        for mut k in 0..count {
            let mut v = vec![0u64; r];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = k % p;
                k /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Number of points of `P^{r-1}(F_p)`.
pub fn projective_count(p: u64, r: usize) -> u64 {
    (0..r as u32).map(|k| p.pow(k)).sum()
}

type MemoKey = (usize, Vec<usize>, Vec<u64>);

/// Recursive flag counter with a per-job memo keyed on the exact restricted
/// module data (restrictions use canonical echelon bases).
#[derive(Default)]
pub struct FlagCounter {
    memo: HashMap<MemoKey, u64>,
}

impl FlagCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of `x`-stable flags of type `word`.
    pub fn count(&mut self, m: &ModularModule, word: &Word) -> Result<u64> {
        if word.content(m.dim().len()) != *m.dim() {
            return Err(Error::ContentMismatch);
        }
        self.count_from(m, &word.0, 0)
    }

    fn key(m: &ModularModule, pos: usize) -> MemoKey {
        let entries = m.actions().iter().flat_map(|a| a.entries().iter().copied()).collect();
        (pos, m.dim().0.clone(), entries)
    }

    fn count_from(&mut self, m: &ModularModule, letters: &[usize], pos: usize) -> Result<u64> {
        if pos == letters.len() {
            return Ok(1);
        }
        let key = Self::key(m, pos);
        if let Some(&c) = self.memo.get(&key) {
            return Ok(c);
        }
        let f = m.field();
        let i = letters[pos];
        let n = m.dim()[i];
        let incoming = m
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .filter(|(_, b)| b.target == i)
            .try_fold(Matrix::zeros(f, n, 0), |acc, (k, _)| acc.hstack(m.action(k)))?;
        // functionals vanishing on the incoming images
        let annihilator = Subspace::kernel(f, &incoming.transpose());
        let mut total: u64 = 0;
        let ann = annihilator.basis();
        for c in projective_points(f.modulus(), annihilator.dim()) {
            let functional = ann.mul_vec(f, &c)?;
            let row = Matrix::from_vec(1, n, functional)?;
            let hyperplane = Subspace::kernel(f, &row);
            let pieces: Vec<Subspace<u64>> = (0..m.dim().len())
                .map(|v| if v == i { hyperplane.clone() } else { Subspace::full(f, m.dim()[v]) })
                .collect();
            let sub = m.restrict(&GradedSubspace(pieces))?;
            let c = self.count_from(&sub, letters, pos + 1)?;
            total = total.checked_add(c).ok_or(Error::CountOverflow)?;
        }
        self.memo.insert(key, total);
        Ok(total)
    }
}

/// Number of `x`-stable flags of type `word` over `F_p`.
pub fn count_flags(m: &ModularModule, word: &Word) -> Result<u64> {
    FlagCounter::new().count(m, word)
}

/// Flags of type `(word, coeffs)`: letters with coefficient 0 are skipped.
pub fn count_flags_weighted(m: &ModularModule, word: &Word, coeffs: &[bool]) -> Result<u64> {
    count_flags(m, &word.subword(coeffs))
}

/// Raw counts for every word of content `dim m`, in word order.
pub fn count_flags_fp(m: &ModularModule) -> Result<Vec<u64>> {
    let words = enumerate_words(m.dim());
    count_words_fp(m, &words)
}

pub fn count_words_fp(m: &ModularModule, words: &[Word]) -> Result<Vec<u64>> {
    par::try_map(words, |w| count_flags(m, w))
}

/// Decides whether a prime gives a faithful reduction of a rational module.
///
/// Besides denominators, reduction must keep the ranks of all nonzero path
/// products (and of their combined images and kernels at each vertex) and
/// the endomorphism dimension and the rank of the vertexwise trace forms on it.
#[derive(Debug, Clone)]
pub struct ReductionGuard {
    paths: Vec<Vec<usize>>,
    signature: Vec<usize>,
    end: (usize, usize),
}

/// `(dim End(m), rank of the forms (f, g) ↦ Tr(f_i g_i) over all vertices i)`.
/// Over ℚ the common kernel is the radical of `End(m)`, so the rank sees
/// eigenvalue collisions that keep `dim End` fixed, e.g. `k×k` against `k[t]/t²`.
fn end_invariants<F: Field>(m: &LambdaModule<F>) -> Result<(usize, usize)> {
    let f = m.field();
    let basis = hom_space(m, m)?.basis;
    let n = basis.len();
    let vertices = m.dim().len();
    let mut forms = Vec::with_capacity(vertices * n * n);
    for i in 0..vertices {
        for a in &basis {
            for b in &basis {
                forms.push(a.maps[i].mul(f, &b.maps[i])?.trace(f)?);
            }
        }
    }
    Ok((n, Matrix::from_vec(vertices * n, n, forms)?.rank(f)))
}

const PATH_CAP: usize = 512;

impl ReductionGuard {
    pub fn new(m: &RationalModule) -> Result<Self> {
        let paths = m.nonzero_paths(m.total_dim(), PATH_CAP);
        let signature = m.rank_signature(&paths);
        let end = end_invariants(m)?;
        Ok(ReductionGuard { paths, signature, end })
    }

    /// `Ok(None)` for a bad prime.
    pub fn reduce(&self, m: &RationalModule, p: u64) -> Result<Option<ModularModule>> {
        let red = match m.reduce_mod_p(p) {
            Ok(r) => r,
            Err(Error::BadPrime { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        if red.rank_signature(&self.paths) != self.signature {
            return Ok(None);
        }
        if end_invariants(&red)? != self.end {
            return Ok(None);
        }
        Ok(Some(red))
    }
}

const PRIME_SEARCH_LIMIT: usize = 200;

static PRIME_OVERRIDE: RwLock<Option<Vec<u64>>> = RwLock::new(None);

/// Restricts every prime search to `primes` (in the given order); `None`
/// restores the default search over the first 200 primes.
pub fn set_prime_override(primes: Option<Vec<u64>>) -> Result<()> {
    if let Some(ps) = &primes {
        if let Some(&bad) = ps.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::NotPrime(bad));
        }
    }
    *PRIME_OVERRIDE.write().unwrap_or_else(|e| e.into_inner()) = primes;
    Ok(())
}

/// Primes tried, in order, by every good-prime search.
pub fn candidate_primes() -> Vec<u64> {
    match &*PRIME_OVERRIDE.read().unwrap_or_else(|e| e.into_inner()) {
        Some(ps) => ps.clone(),
        None => primes().take(PRIME_SEARCH_LIMIT).collect(),
    }
}

/// The first `count` good primes for `m`, with the reductions.
pub fn good_primes(m: &RationalModule, count: usize) -> Result<Vec<(u64, ModularModule)>> {
    let guard = ReductionGuard::new(m)?;
    let mut out = Vec::with_capacity(count);
    let candidates = candidate_primes();
    for &p in &candidates {
        if out.len() == count {
            break;
        }
        if let Some(red) = guard.reduce(m, p)? {
            out.push((p, red));
        }
    }
    if out.len() < count {
        return Err(Error::NotEnoughPrimes(format!(
            "found {} of {count} good primes among {} candidates",
            out.len(),
            candidates.len()
        )));
    }
    Ok(out)
}

/// Counts at several primes, the fitted counting polynomial, and its value at 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountProfile {
    pub word: String,
    /// `(prime, count)` for fitting primes followed by validation primes.
    pub samples: Vec<(u64, u64)>,
    pub degree_bound: usize,
    pub polynomial: RationalPolynomial,
    pub euler: i64,
    pub validation_primes: Vec<u64>,
}

/// Number of extra primes used to certify a fitted counting polynomial.
pub const VALIDATION_PRIMES: usize = 2;

/// Fits the first `degree_bound + 1` samples and certifies the fit on the rest.
///
/// Fails with `NonPolynomialCount` if any remaining sample disagrees, if the
/// fit is not integer-valued at a sample, or if its value at 1 is not an integer.
pub fn fit_profile(word: &str, samples: &[(u64, u64)], degree_bound: usize) -> Result<CountProfile> {
    let need = degree_bound + 1 + VALIDATION_PRIMES;
    if samples.len() < need {
        return Err(Error::NotEnoughPrimes(format!("{} samples for degree bound {degree_bound}", samples.len())));
    }
    let fit: Vec<(i64, BigInt)> = samples[..degree_bound + 1]
        .iter()
        .map(|&(p, c)| (p as i64, BigInt::from(c)))
        .collect();
    let poly = interpolate_integers(&fit)?;
    let non_poly = |detail: String| Error::NonPolynomialCount { word: word.to_string(), detail };
    for &(p, c) in samples {
        let v = poly.eval_int(p as i64);
        if v != BigRational::from_integer(BigInt::from(c)) {
            return Err(non_poly(format!("count {c} at p = {p}, fitted polynomial {poly} gives {v}")));
        }
    }
    let at_one = poly.eval(&BigRational::one());
    if !at_one.is_integer() {
        return Err(non_poly(format!("fitted polynomial {poly} is not integral at 1")));
    }
    let euler = at_one.to_integer().to_i64().ok_or(Error::CountOverflow)?;
    Ok(CountProfile {
        word: word.to_string(),
        samples: samples.to_vec(),
        degree_bound,
        polynomial: poly,
        euler,
        validation_primes: samples[degree_bound + 1..].iter().map(|s| s.0).collect(),
    })
}

/// Euler characteristic of the variety of composition series of type `word`.
pub fn euler_characteristic(m: &RationalModule, word: &Word) -> Result<CountProfile> {
    if word.content(m.dim().len()) != *m.dim() {
        return Err(Error::ContentMismatch);
    }
    let bound = m.dim().flag_variety_dim();
    let reductions = good_primes(m, bound + 1 + VALIDATION_PRIMES)?;
    let samples = par::try_map(&reductions, |(p, red)| Ok::<_, Error>((*p, count_flags(red, word)?)))?;
    fit_profile(&word.display(m.quiver().base()), &samples, bound)
}

/// The vector of Euler characteristics over all words of content `dim`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaFingerprint {
    pub dim: DimVector,
    pub words: Vec<Word>,
    pub euler: Vec<i64>,
    pub profiles: Vec<CountProfile>,
}

impl PartialEq for DeltaFingerprint {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.words == other.words && self.euler == other.euler
    }
}

impl Eq for DeltaFingerprint {}

impl DeltaFingerprint {
    /// χ for a word of the fingerprint's content.
    pub fn value(&self, word: &Word) -> Option<i64> {
        self.words.binary_search(word).ok().map(|k| self.euler[k])
    }

    pub fn render(&self, q: &Quiver) -> String {
        self.words
            .iter()
            .zip(&self.euler)
            .map(|(w, e)| format!("{} {e}", w.display(q)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Euler characteristics for every word, sharing one prime selection.
pub fn fingerprint(m: &RationalModule) -> Result<DeltaFingerprint> {
    let words = enumerate_words(m.dim());
    let bound = m.dim().flag_variety_dim();
    let reductions = good_primes(m, bound + 1 + VALIDATION_PRIMES)?;
    let jobs: Vec<(usize, usize)> =
        (0..reductions.len()).flat_map(|pi| (0..words.len()).map(move |wi| (pi, wi))).collect();
    let counts = par::try_map(&jobs, |&(pi, wi)| count_flags(&reductions[pi].1, &words[wi]))?;
    let q = m.quiver().base();
    let profiles = words
        .iter()
        .enumerate()
        .map(|(wi, w)| {
            let samples: Vec<(u64, u64)> = reductions
                .iter()
                .enumerate()
                .map(|(pi, (p, _))| (*p, counts[pi * words.len() + wi]))
                .collect();
            fit_profile(&w.display(q), &samples, bound)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeltaFingerprint {
        dim: m.dim().clone(),
        euler: profiles.iter().map(|p| p.euler).collect(),
        words,
        profiles,
    })
}

/// Coordinatewise sum of fingerprints of the same content.
pub fn add_fingerprints(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
