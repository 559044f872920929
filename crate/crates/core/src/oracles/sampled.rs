use super::{check_unit_interval, hoeffding_samples, uniform_point};
use crate::cube::{ChowVector, SubsetIndexer};
use crate::error::{Error, Result};
use crate::poly::{p1, PbfHypothesis};
use crate::reconstruct::ChowOracle;
use crate::seed::Rng;

/// Estimates a hypothesis' Chow vector from uniform samples of `g`, with the
/// sample size set by [`hoeffding_samples`] for the requested ℓ2 accuracy.
#[derive(Clone, Debug)]
pub struct SampledOracle {
    indexer: SubsetIndexer,
    samples: usize,
}

impl SampledOracle {
    /// Accuracy `accuracy` in ℓ2 with probability at least `1 − delta` per call.
    pub fn new(n: usize, d: usize, accuracy: f64, delta: f64) -> Result<Self> {
        if !(accuracy > 0.0) {
            return Err(Error::Parameter(format!("accuracy {accuracy} must be positive")));
        }
        check_unit_interval("delta", delta)?;
        let indexer = SubsetIndexer::new(n, d)?;
        let samples = hoeffding_samples(indexer.len(), accuracy, delta);
        Ok(SampledOracle { indexer, samples })
    }

    /// Fixed sample size per call, bypassing the Hoeffding allocation.
    pub fn with_samples(n: usize, d: usize, samples: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Parameter("sample size must be positive".into()));
        }
        Ok(SampledOracle {
            indexer: SubsetIndexer::new(n, d)?,
            samples,
        })
    }

    pub fn samples_per_call(&self) -> usize {
        self.samples
    }
}

impl ChowOracle for SampledOracle {
    fn indexer(&self) -> &SubsetIndexer {
        &self.indexer
    }

    fn chow(&mut self, h: &PbfHypothesis, rng: &mut Rng) -> Result<ChowVector> {
        let subsets = self.indexer.subsets();
        let n = self.indexer.n();
        let active: Vec<(crate::cube::Subset, i64)> = subsets
            .iter()
            .zip(h.weights())
            .filter(|(_, &w)| w != 0)
            .map(|(s, &w)| (*s, w))
            .collect();
        let mut sums = vec![0.0f64; subsets.len()];
        for _ in 0..self.samples {
            let x = uniform_point(n, rng);
            let q: i64 = active.iter().map(|(s, w)| if s.chi(x) > 0 { *w } else { -*w }).sum();
            let g = p1(h.lambda() * q as f64);
            for (acc, s) in sums.iter_mut().zip(subsets) {
                *acc += if s.chi(x) > 0 { g } else { -g };
            }
        }
        let m = self.samples as f64;
        ChowVector::new(
            n,
            self.indexer.d(),
            sums.into_iter().map(|v| (v / m).clamp(-1.0, 1.0)).collect(),
        )
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn name(&self) -> &'static str {
        "sampled"
    }
}
