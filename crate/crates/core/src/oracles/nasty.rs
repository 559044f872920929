use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{contribution_sums, estimate_chow_full, uniform_point, LabelOracle, LabeledExample};
use crate::cube::{ChowVector, Subset, SubsetIndexer};
use crate::error::{Error, Result};
use crate::poly::MultilinearPoly;
use crate::seed::rng_from_seed;

/// Smallest number of contributions a trimmed coordinate may keep.
pub const MIN_TRIMMED_SAMPLES: usize = 10;

/// Nasty-noise strategies. Each inspects the whole clean sample first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adversary {
    /// Flip the labels of the clean points with the smallest `|p(x)|`.
    MarginFlip,
    /// Replace points to push one Chow coordinate. `None` lets the adversary
    /// pick the non-empty coordinate with the largest empirical magnitude.
    CoordinateBias { coordinate: Option<Subset> },
    /// Replace uniformly chosen examples with uniform points and labels.
    UniformReplace,
}

impl Adversary {
    pub fn id(&self) -> &'static str {
        match self {
            Adversary::MarginFlip => "a",
            Adversary::CoordinateBias { .. } => "b",
            Adversary::UniformReplace => "c",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "a" => Ok(Adversary::MarginFlip),
            "b" => Ok(Adversary::CoordinateBias { coordinate: None }),
            "c" => Ok(Adversary::UniformReplace),
            other => Err(Error::Parameter(format!("unknown adversary `{other}` (a|b|c)"))),
        }
    }
}

/// An ε-corrupted labeled sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorruptedSampleSet {
    n: usize,
    examples: Vec<LabeledExample>,
    eps_corrupt: f64,
    adversary_id: String,
    seed: u64,
    /// Positions that were replaced, ascending.
    corrupted: Vec<usize>,
    /// Coordinate and direction pushed by the coordinate-bias adversary.
    planted: Option<(Subset, i8)>,
}

impl CorruptedSampleSet {
    /// Reassembles a set read from disk. Replaced positions are unknown.
    pub fn from_parts(
        n: usize,
        examples: Vec<LabeledExample>,
        eps_corrupt: f64,
        adversary_id: String,
        seed: u64,
    ) -> Result<Self> {
        check_eps(eps_corrupt)?;
        Ok(CorruptedSampleSet {
            n,
            examples,
            eps_corrupt,
            adversary_id,
            seed,
            corrupted: Vec::new(),
            planted: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn eps_corrupt(&self) -> f64 {
        self.eps_corrupt
    }

    pub fn adversary_id(&self) -> &str {
        &self.adversary_id
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn corrupted_positions(&self) -> &[usize] {
        &self.corrupted
    }

    pub fn planted(&self) -> Option<(Subset, i8)> {
        self.planted
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::Parameter(format!("corruption rate {eps} must lie in [0, 1/2)")));
    }
    Ok(())
}

// The 1e-9 guards keep products like 0.013 · 1000 on the intended integer.
fn floor_count(eps: f64, m: usize) -> usize {
    (eps * m as f64 + 1e-9).floor() as usize
}

fn ceil_count(eps: f64, m: usize) -> usize {
    (eps * m as f64 - 1e-9).ceil().max(0.0) as usize
}

/// What the omniscient adversary may consult besides the sample.
pub struct AdversaryView<'a> {
    pub target: &'a dyn LabelOracle,
    /// The threshold polynomial, needed by [`Adversary::MarginFlip`].
    pub poly: Option<&'a MultilinearPoly>,
    /// Degree of the Chow coordinates the learner will estimate.
    pub d: usize,
}

/// Replaces exactly `⌊eps·m⌋` examples according to `adversary`.
pub fn nasty_corrupt(
    clean: &[LabeledExample],
    eps_corrupt: f64,
    adversary: &Adversary,
    view: &AdversaryView<'_>,
    seed: u64,
) -> Result<CorruptedSampleSet> {
    check_eps(eps_corrupt)?;
    let n = view.target.n();
    let m = clean.len();
    let budget = floor_count(eps_corrupt, m);
    let mut rng = rng_from_seed(seed);
    let mut examples = clean.to_vec();
    let mut planted = None;

    let positions: Vec<usize> = match adversary {
        Adversary::MarginFlip => {
            let p = view
                .poly
                .ok_or_else(|| Error::Parameter("margin-targeted flips need the target polynomial".into()))?;
            let mut order: Vec<(f64, usize)> = clean
                .iter()
                .enumerate()
                .map(|(i, ex)| (p.eval_code(ex.x).abs(), i))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let chosen: Vec<usize> = order.into_iter().take(budget).map(|(_, i)| i).collect();
            for &i in &chosen {
                examples[i].y = -examples[i].y;
            }
            chosen
        }
        Adversary::UniformReplace => {
            let mut idx: Vec<usize> = (0..m).collect();
            idx.shuffle(&mut rng);
            idx.truncate(budget);
            for &i in &idx {
                examples[i] = LabeledExample {
                    x: uniform_point(n, &mut rng),
                    y: if rng.random_bool(0.5) { 1 } else { -1 },
                };
            }
            idx
        }
        Adversary::CoordinateBias { coordinate } => {
            let indexer = SubsetIndexer::new(n, view.d)?;
            let target_s = match coordinate {
                Some(s) => {
                    indexer.index_of(*s)?;
                    *s
                }
                None => strongest_coordinate(&indexer, clean)?,
            };
            let sum: i64 = clean.iter().map(|ex| i64::from(ex.y * target_s.chi(ex.x))).sum();
            // Push against the current sign, toward and past zero.
            let push: i8 = if sum >= 0 { -1 } else { 1 };
            let mut idx: Vec<usize> = (0..m).collect();
            idx.shuffle(&mut rng);
            // Stable partition: aligned points (contribution = -push) go first.
            idx.sort_by_key(|&i| clean[i].y * target_s.chi(clean[i].x) != -push);
            idx.truncate(budget);
            for &i in &idx {
                examples[i] = biased_replacement(view.target, target_s, push, &mut rng);
            }
            planted = Some((target_s, push));
            idx
        }
    };

    let mut corrupted = positions;
    corrupted.sort_unstable();
    debug_assert_eq!(corrupted.len(), budget);
    Ok(CorruptedSampleSet {
        n,
        examples,
        eps_corrupt,
        adversary_id: adversary.id().to_string(),
        seed,
        corrupted,
        planted,
    })
}

fn strongest_coordinate(indexer: &SubsetIndexer, clean: &[LabeledExample]) -> Result<Subset> {
    let sums = contribution_sums(indexer, clean);
    indexer
        .subsets()
        .iter()
        .zip(&sums)
        .filter(|(s, _)| !s.is_empty())
        .max_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(b.0.cmp(a.0)))
        .map(|(s, _)| *s)
        .ok_or_else(|| Error::Parameter("no non-empty coordinate to bias".into()))
}

/// A point whose label is flipped relative to the target and whose
/// contribution `y·χ_S(x)` equals `push`.
fn biased_replacement(target: &dyn LabelOracle, s: Subset, push: i8, rng: &mut crate::seed::Rng) -> LabeledExample {
    const ATTEMPTS: usize = 256;
    let n = target.n();
    for _ in 0..ATTEMPTS {
        let x = uniform_point(n, rng);
        let y = -target.label(x);
        if y * s.chi(x) == push {
            return LabeledExample { x, y };
        }
    }
    let x = uniform_point(n, rng);
    LabeledExample { x, y: push * s.chi(x) }
}

/// Mean after dropping the `k` largest and `k` smallest values.
pub fn trimmed_mean(values: &[f64], k: usize) -> Result<f64> {
    if values.len() < 2 * k + 1 {
        return Err(Error::InsufficientData(format!(
            "cannot trim {k} from each side of {} values",
            values.len()
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let kept = &sorted[k..sorted.len() - k];
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}

/// Coordinatewise trimmed mean of `y·χ_S(x)`, trimming `⌈eps·m⌉` per side.
///
/// Contributions are `±1`, so each coordinate only needs its count of `+1`s.
pub fn robust_estimate_chow(set: &CorruptedSampleSet, d: usize, eps_corrupt: f64) -> Result<ChowVector> {
    check_eps(eps_corrupt)?;
    let m = set.len();
    let k = ceil_count(eps_corrupt, m);
    if m < 2 * k + MIN_TRIMMED_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "trimming {k} per side leaves {} of {m} samples (need {MIN_TRIMMED_SAMPLES})",
            m.saturating_sub(2 * k)
        )));
    }
    if k == 0 {
        return estimate_chow_full(set.examples(), set.n(), d);
    }
    let indexer = SubsetIndexer::new(set.n(), d)?;
    let sums = contribution_sums(&indexer, set.examples());
    let kept = (m - 2 * k) as f64;
    let coeffs = sums
        .into_iter()
        .map(|sum| {
            let plus = ((m as i64 + sum) / 2) as usize;
            let minus = m - plus;
            // Sorted ascending: `minus` copies of -1, then `plus` copies of +1.
            let low_minus = k.min(minus);
            let low_plus = k - low_minus;
            let high_plus = k.min(plus);
            let high_minus = k - high_plus;
            let plus_left = plus - low_plus - high_plus;
            let minus_left = minus - low_minus - high_minus;
            (plus_left as f64 - minus_left as f64) / kept
        })
        .collect();
    ChowVector::new(set.n(), d, coeffs)
}
