//! Example oracles over the uniform distribution and Chow-parameter estimators
//! built on them: full examples, restricted-focus-of-attention (d-RFA)
//! examples, and nasty-noise corrupted sample sets.

pub mod format;
mod nasty;
mod rfa;
mod sampled;

use rand::Rng as _;
use serde::Serialize;

pub use nasty::{
    nasty_corrupt, robust_estimate_chow, trimmed_mean, Adversary, AdversaryView, CorruptedSampleSet,
    MIN_TRIMMED_SAMPLES,
};
pub use rfa::{estimate_chow_rfa, rfa_sample, RfaEstimate, RfaExample, RfaMode, RfaOracle};
pub use sampled::SampledOracle;

use crate::cube::{chow_vector, full_mask, ChowVector, SubsetIndexer, TruthTable};
use crate::error::{Error, Result};
use crate::poly::MultilinearPoly;
use crate::seed::Rng;

/// Labels points of the cube with a hidden ±1 target.
pub trait LabelOracle {
    fn n(&self) -> usize;

    fn label(&self, code: u64) -> i8;

    /// Exact Chow vector, for simulation shortcuts at desk scale.
    fn exact_chow(&self, _d: usize) -> Option<ChowVector> {
        None
    }
}

impl LabelOracle for TruthTable {
    fn n(&self) -> usize {
        TruthTable::n(self)
    }

    fn label(&self, code: u64) -> i8 {
        self.get(code as usize)
    }

    fn exact_chow(&self, d: usize) -> Option<ChowVector> {
        chow_vector(self, d).ok()
    }
}

/// `sign(p)` evaluated on demand, for targets too wide to tabulate.
#[derive(Clone, Debug)]
pub struct PtfTarget {
    poly: MultilinearPoly,
}

impl PtfTarget {
    pub fn new(poly: MultilinearPoly) -> Self {
        PtfTarget { poly }
    }

    pub fn poly(&self) -> &MultilinearPoly {
        &self.poly
    }
}

impl LabelOracle for PtfTarget {
    fn n(&self) -> usize {
        self.poly.n()
    }

    fn label(&self, code: u64) -> i8 {
        self.poly.ptf_eval_code(code)
    }

    fn exact_chow(&self, d: usize) -> Option<ChowVector> {
        let table = self.poly.materialize_sign().ok()?;
        chow_vector(&table, d).ok()
    }
}

/// A labeled example `(x, y)` with `x` as a point code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledExample {
    pub x: u64,
    pub y: i8,
}

/// Per-coordinate Hoeffding allocation: with this many `[-1,1]`-valued
/// samples per coordinate, every one of `coords` means is within
/// `l2_eps / √coords` of its expectation with probability at least `1 − delta/2`,
/// so the vector is within `l2_eps` in ℓ2.
pub fn hoeffding_samples(coords: usize, l2_eps: f64, delta: f64) -> usize {
    let n = coords as f64;
    (2.0 * (4.0 * n / delta).ln() * n / (l2_eps * l2_eps)).ceil() as usize
}

pub(crate) fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Parameter(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

#[inline]
pub(crate) fn uniform_point(n: usize, rng: &mut Rng) -> u64 {
    rng.random::<u64>() & full_mask(n)
}

/// `m` independent uniform examples labeled by the target.
pub fn draw_examples<T: LabelOracle + ?Sized>(target: &T, m: usize, rng: &mut Rng) -> Vec<LabeledExample> {
    let n = target.n();
    (0..m)
        .map(|_| {
            let x = uniform_point(n, rng);
            LabeledExample { x, y: target.label(x) }
        })
        .collect()
}

/// Every point of the cube with its label, in point-code order.
pub fn all_examples(table: &TruthTable) -> Vec<LabeledExample> {
    (0..table.len())
        .map(|c| LabeledExample {
            x: c as u64,
            y: table.get(c),
        })
        .collect()
}

/// Empirical Chow vector: the mean of `y·χ_S(x)` for every `|S| ≤ d`.
pub fn estimate_chow_full(samples: &[LabeledExample], n: usize, d: usize) -> Result<ChowVector> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let indexer = SubsetIndexer::new(n, d)?;
    let sums = contribution_sums(&indexer, samples);
    let m = samples.len() as f64;
    ChowVector::new(n, d, sums.into_iter().map(|s| s as f64 / m).collect())
}

/// `Σ_j y_j χ_S(x_j)` per basis subset, in exact integer arithmetic.
pub(crate) fn contribution_sums(indexer: &SubsetIndexer, samples: &[LabeledExample]) -> Vec<i64> {
    let subsets = indexer.subsets();
    let mut sums = vec![0i64; subsets.len()];
    for ex in samples {
        let y = i64::from(ex.y);
        for (acc, s) in sums.iter_mut().zip(subsets) {
            *acc += if s.chi(ex.x) > 0 { y } else { -y };
        }
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn full_cube_sample_is_exact() {
        let maj = TruthTable::majority(3).unwrap();
        let est = estimate_chow_full(&all_examples(&maj), 3, 3).unwrap();
        assert_eq!(est, chow_vector(&maj, 3).unwrap());
    }

    #[test]
    fn single_sample_gives_signed_characters() {
        let ex = LabeledExample { x: 0b101, y: -1 };
        let est = estimate_chow_full(&[ex], 3, 2).unwrap();
        let ix = SubsetIndexer::new(3, 2).unwrap();
        for (s, c) in ix.subsets().iter().zip(est.coeffs()) {
            assert_eq!(*c, f64::from(-s.chi(0b101)));
        }
    }

    #[test]
    fn maj3_sampled_degree_one() {
        let maj = TruthTable::majority(3).unwrap();
        let samples = draw_examples(&maj, 100_000, &mut rng_from_seed(11));
        let est = estimate_chow_full(&samples, 3, 1).unwrap();
        for (e, t) in est.coeffs().iter().zip([0.0, 0.5, 0.5, 0.5]) {
            assert!((e - t).abs() < 0.02);
        }
    }

    #[test]
    fn empty_samples_are_an_error() {
        assert!(matches!(estimate_chow_full(&[], 3, 1), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn ptf_target_labels_match_table() {
        let p = crate::lab::gaussian_poly(6, 2, &mut rng_from_seed(4)).unwrap();
        let table = p.materialize_sign().unwrap();
        let target = PtfTarget::new(p);
        for c in 0..64u64 {
            assert_eq!(target.label(c), table.get(c as usize));
        }
        assert_eq!(target.exact_chow(2), table.exact_chow(2));
    }

    #[test]
    fn hoeffding_allocation_formula() {
        // N = 56, eps = 0.1, delta = 0.1: 2·ln(2240)·56/0.01.
        let expect = (2.0 * (2240f64).ln() * 56.0 / 0.01).ceil() as usize;
        assert_eq!(hoeffding_samples(56, 0.1, 0.1), expect);
    }

    /// Over many seeds the empirical coefficients average to the exact ones.
    #[test]
    fn estimator_is_unbiased() {
        let f = crate::lab::gaussian_poly(6, 2, &mut rng_from_seed(77))
            .unwrap()
            .materialize_sign()
            .unwrap();
        let exact = chow_vector(&f, 2).unwrap();
        let (seeds, m) = (200u64, 500usize);
        let mut mean = vec![0.0; exact.len()];
        for seed in 0..seeds {
            let est = estimate_chow_full(&draw_examples(&f, m, &mut rng_from_seed(seed)), 6, 2).unwrap();
            for (acc, c) in mean.iter_mut().zip(est.coeffs()) {
                *acc += c / seeds as f64;
            }
        }
        for (mu, t) in mean.iter().zip(exact.coeffs()) {
            let sigma = ((1.0 - t * t) / (m as f64 * seeds as f64)).sqrt();
            assert!((mu - t).abs() <= 3.0 * sigma + 1e-12, "{mu} vs {t}");
        }
    }
}
