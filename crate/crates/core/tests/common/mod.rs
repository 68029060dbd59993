#![allow(dead_code)]

use std::sync::Arc;

use prepro_core::module::RationalModule;
use prepro_core::quiver::{build_double, DoubleQuiver, Quiver};
use prepro_core::random::{random_module, seed_from_env};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_from_env(20240601) ^ salt)
}

pub fn double(q: &Quiver) -> Arc<DoubleQuiver> {
    Arc::new(build_double(q).unwrap())
}

/// A pair of random nilpotent modules with at most `steps` composition
/// factors each (at least one).
pub fn random_pair<R: Rng>(rng: &mut R, dq: &Arc<DoubleQuiver>, steps: usize, max_vertex_dim: usize) -> (RationalModule, RationalModule) {
    let s1 = rng.gen_range(1..=steps);
    let s2 = rng.gen_range(1..=steps);
    let m = random_module(rng, dq, s1, max_vertex_dim, 2).unwrap();
    let n = random_module(rng, dq, s2, max_vertex_dim, 2).unwrap();
    (m, n)
}
