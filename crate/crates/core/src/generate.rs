//! Seeded random chain synthesis for tests and pipeline inputs.
//!
//! Coefficients are drawn in enumeration order from a ChaCha stream, so a
//! (window, region, degree, seed) tuple always reproduces the same chain, and
//! chains generated on deep regions are identical across window radii.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::Chain;
use crate::coeff::int;
use crate::product::{ProductComplex, Region, Simplex};

/// A chain with coefficients uniform in [-norm_bound, norm_bound] on every
/// region simplex of the given degree (zeros are dropped).
pub fn random_chain(
    pc: &ProductComplex,
    degree: usize,
    region: Region,
    norm_bound: i128,
    seed: u64,
) -> Chain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = Chain::zero(degree);
    for s in pc.simplices_in(degree, region) {
        let c = rng.gen_range(-norm_bound..=norm_bound);
        chain.add_term(s, int(c));
    }
    chain
}

/// Sparse variant: `count` simplices sampled from a pre-enumerated pool with
/// nonzero coefficients in [-norm_bound, norm_bound].
pub fn random_sparse_chain(
    pool: &[Simplex],
    degree: usize,
    count: usize,
    norm_bound: i128,
    seed: u64,
) -> Chain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = Chain::zero(degree);
    if pool.is_empty() {
        return chain;
    }
    for _ in 0..count {
        let s = pool[rng.gen_range(0..pool.len())].clone();
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-norm_bound..=norm_bound);
        }
        chain.add_term(s, int(c));
    }
    chain
}

/// Returns (psi, boundary(psi)) for a random degree-`degree` chain supported
/// in the region. The boundary is a cycle everywhere by construction.
pub fn random_boundary(
    pc: &ProductComplex,
    degree: usize,
    region: Region,
    norm_bound: i128,
    seed: u64,
) -> (Chain, Chain) {
    let psi = random_chain(pc, degree, region, norm_bound, seed);
    let c = psi.boundary().expect("degree >= 1");
    (psi, c)
}
