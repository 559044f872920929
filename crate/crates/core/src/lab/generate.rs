use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::cube::SubsetIndexer;
use crate::error::Result;
use crate::poly::MultilinearPoly;
use crate::seed::{derive_seed, rng_from_seed, Rng};

/// Random degree-`d` polynomial with i.i.d. standard normal coefficients on
/// every subset of size at most `d`.
pub fn gaussian_poly(n: usize, d: usize, rng: &mut Rng) -> Result<MultilinearPoly> {
    let indexer = SubsetIndexer::new(n, d)?;
    let coeffs: Vec<f64> = (0..indexer.len()).map(|_| rng.sample(StandardNormal)).collect();
    MultilinearPoly::from_dense(n, d, indexer.subsets(), &coeffs)
}

/// Random polynomial with only the size-`d` terms (homogeneous), standard normal coefficients.
pub fn gaussian_homogeneous_poly(n: usize, d: usize, rng: &mut Rng) -> Result<MultilinearPoly> {
    let indexer = SubsetIndexer::new(n, d)?;
    let top = indexer.size_class(d);
    let subsets = &indexer.subsets()[top];
    let coeffs: Vec<f64> = subsets.iter().map(|_| rng.sample(StandardNormal)).collect();
    MultilinearPoly::from_dense(n, d, subsets, &coeffs)
}

/// The seeded corpus of random degree-`d` PTF polynomials: entry `k` is drawn
/// from the seed `derive_seed(seed, k)`.
pub fn ptf_corpus(n: usize, d: usize, count: usize, seed: u64) -> Result<Vec<MultilinearPoly>> {
    (0..count as u64)
        .map(|k| gaussian_poly(n, d, &mut rng_from_seed(derive_seed(seed, k))))
        .collect()
}
