//! End-to-end learning pipelines: estimate the Chow vector, reconstruct, score.

use serde::{Deserialize, Serialize};

use crate::cube::{chow_distance, ChowVector, Subset, TruthTable, MAX_TABLE_VARS};
use crate::error::{Error, Result};
use crate::oracles::SampledOracle;
use crate::oracles::{
    draw_examples, estimate_chow_full, estimate_chow_rfa, nasty_corrupt, robust_estimate_chow, Adversary,
    AdversaryView, CorruptedSampleSet, LabelOracle, PtfTarget, RfaMode, RfaOracle,
};
use crate::poly::{MultilinearPoly, PbfHypothesis};
use crate::reconstruct::{reconstruct_and_learn, ChowOracle, ExactOracle, LearnOutcome, ReconstructParams};
use crate::seed::{derive_seed, rng_from_seed};

/// How the reconstruction loop measures its hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Exact,
    Sampled,
}

impl OracleMode {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "exact" => Ok(OracleMode::Exact),
            "sampled" => Ok(OracleMode::Sampled),
            _ => Err(Error::Parameter(format!("unknown oracle mode {id:?}"))),
        }
    }
}

/// Exact tables up to `MAX_TABLE_VARS`, Hoeffding-sized sampling at accuracy `ξ` otherwise.
pub fn make_oracle(mode: OracleMode, n: usize, d: usize, xi: f64, delta: f64) -> Result<Box<dyn ChowOracle>> {
    Ok(match mode {
        OracleMode::Exact => Box::new(ExactOracle::new(n, d)?),
        OracleMode::Sampled => Box::new(SampledOracle::new(n, d, xi, delta)?),
    })
}

/// Truth table of a label oracle, when the cube is small enough.
pub fn tabulate<T: LabelOracle + ?Sized>(target: &T) -> Option<TruthTable> {
    (target.n() <= MAX_TABLE_VARS)
        .then(|| TruthTable::from_fn(target.n(), |c| target.label(c)).ok())
        .flatten()
}

/// Outcome of a reconstruction from an estimated Chow vector.
#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub iterations: usize,
    pub residual_l2: f64,
    pub certificate_sum_sq: u128,
    /// `dist(f, sign Q)`, when `f` can be tabulated.
    pub dist_exact: Option<f64>,
    pub dist_pbf: Option<f64>,
    pub factor_two_holds: Option<bool>,
    pub hypothesis: PbfHypothesis,
}

impl FitReport {
    fn from_outcome(o: LearnOutcome) -> Self {
        let r = o.reference.as_ref();
        FitReport {
            iterations: o.reconstruction.iterations,
            residual_l2: o.reconstruction.residual_l2,
            certificate_sum_sq: o.ptf.certificate,
            dist_exact: r.map(|m| m.dist_sign),
            dist_pbf: r.map(|m| m.dist_pbf),
            factor_two_holds: r.map(|m| m.factor_two_holds),
            hypothesis: o.reconstruction.hypothesis,
        }
    }
}

fn fit(
    alpha: &ChowVector,
    xi: f64,
    mode: OracleMode,
    delta: f64,
    reference: Option<&TruthTable>,
    seed: u64,
) -> Result<FitReport> {
    let params = ReconstructParams::new(xi)?;
    let mut oracle = make_oracle(mode, alpha.n(), alpha.d(), xi, delta)?;
    let outcome = reconstruct_and_learn(alpha, None, &params, oracle.as_mut(), reference, seed)?;
    Ok(FitReport::from_outcome(outcome))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RfaLearnConfig {
    pub d: usize,
    pub eps: f64,
    pub delta: f64,
    pub xi: f64,
    pub oracle: OracleMode,
    pub rfa_mode: RfaMode,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RfaLearnReport {
    pub n: usize,
    pub d: usize,
    pub samples_per_subset: usize,
    pub total_samples: u64,
    pub used_exact: bool,
    /// `‖estimate − exact Chow vector‖₂`, when the exact vector is available.
    pub estimate_error_l2: Option<f64>,
    pub estimate: ChowVector,
    pub fit: FitReport,
}

/// Chow estimation through the `d`-RFA oracle, then reconstruction.
pub fn learn_rfa<T: LabelOracle + ?Sized>(target: &T, cfg: &RfaLearnConfig) -> Result<RfaLearnReport> {
    let mut oracle = RfaOracle::new(target, cfg.d);
    let est = estimate_chow_rfa(
        &mut oracle,
        cfg.d,
        cfg.eps,
        cfg.delta,
        derive_seed(cfg.seed, 0),
        cfg.rfa_mode,
    )?;
    let estimate_error_l2 = match target.exact_chow(cfg.d) {
        Some(exact) => Some(chow_distance(&est.chow, &exact)?),
        None => None,
    };
    let reference = tabulate(target);
    let fit = fit(
        &est.chow,
        cfg.xi,
        cfg.oracle,
        cfg.delta,
        reference.as_ref(),
        derive_seed(cfg.seed, 1),
    )?;
    Ok(RfaLearnReport {
        n: target.n(),
        d: cfg.d,
        samples_per_subset: est.samples_per_subset,
        total_samples: est.total_samples,
        used_exact: est.used_exact,
        estimate_error_l2,
        estimate: est.chow,
        fit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NastyLearnConfig {
    pub d: usize,
    pub m: usize,
    pub eps_corrupt: f64,
    pub adversary: Adversary,
    pub xi: f64,
    pub oracle: OracleMode,
    pub delta: f64,
    pub seed: u64,
}

/// One estimator's side of a paired comparison.
#[derive(Clone, Debug, Serialize)]
pub struct NastyArm {
    pub estimator: &'static str,
    /// `‖estimate − exact clean Chow vector‖₂`.
    pub chow_error_l2: f64,
    /// `max_S |estimate_S − f̂(S)|`.
    pub max_coordinate_deviation: f64,
    /// `|estimate_S − f̂(S)|` on the coordinate the adversary attacked.
    pub attacked_coordinate_shift: Option<f64>,
    pub fit: FitReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct NastyLearnReport {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub eps_corrupt: f64,
    pub adversary: &'static str,
    pub corrupted: usize,
    pub attacked_coordinate: Option<Subset>,
    /// `4ε + 5/√m`.
    pub deviation_bound: f64,
    pub trimmed: NastyArm,
    pub plain: NastyArm,
}

impl NastyLearnReport {
    /// Trimmed pipeline at least as accurate as the plain one.
    pub fn trimmed_not_worse(&self) -> Option<bool> {
        Some(self.trimmed.fit.dist_exact? <= self.plain.fit.dist_exact?)
    }

    pub fn trimmed_within_bound(&self) -> bool {
        self.trimmed.max_coordinate_deviation <= self.deviation_bound
    }
}

/// The corrupted sample `learn_nasty` runs on.
pub fn corrupted_sample(poly: &MultilinearPoly, cfg: &NastyLearnConfig) -> Result<CorruptedSampleSet> {
    let target = PtfTarget::new(poly.clone());
    let clean = draw_examples(&target, cfg.m, &mut rng_from_seed(derive_seed(cfg.seed, 0)));
    let view = AdversaryView {
        target: &target,
        poly: Some(poly),
        d: cfg.d,
    };
    nasty_corrupt(&clean, cfg.eps_corrupt, &cfg.adversary, &view, derive_seed(cfg.seed, 1))
}

/// Clean samples of a PTF target, nasty corruption, then both estimators on
/// the same corrupted set.
pub fn learn_nasty(poly: &MultilinearPoly, cfg: &NastyLearnConfig) -> Result<NastyLearnReport> {
    let target = PtfTarget::new(poly.clone());
    let n = poly.n();
    let exact = target
        .exact_chow(cfg.d)
        .ok_or_else(|| Error::Capacity(format!("exact Chow vector needs n ≤ {MAX_TABLE_VARS}")))?;
    let set = corrupted_sample(poly, cfg)?;
    let reference = tabulate(&target);
    let attacked = set.planted().map(|(s, _)| s);
    let arm = |estimator: &'static str, est: ChowVector| -> Result<NastyArm> {
        let diff = est.difference(&exact)?;
        let attacked_coordinate_shift = match attacked {
            Some(s) => Some((est.get(s)? - exact.get(s)?).abs()),
            None => None,
        };
        Ok(NastyArm {
            estimator,
            chow_error_l2: diff.iter().map(|x| x * x).sum::<f64>().sqrt(),
            max_coordinate_deviation: diff.iter().fold(0.0, |a, x| a.max(x.abs())),
            attacked_coordinate_shift,
            fit: fit(
                &est,
                cfg.xi,
                cfg.oracle,
                cfg.delta,
                reference.as_ref(),
                derive_seed(cfg.seed, 2),
            )?,
        })
    };
    let trimmed = arm("trimmed", robust_estimate_chow(&set, cfg.d, cfg.eps_corrupt)?)?;
    let plain = arm("plain", estimate_chow_full(set.examples(), n, cfg.d)?)?;
    Ok(NastyLearnReport {
        n,
        d: cfg.d,
        m: cfg.m,
        eps_corrupt: cfg.eps_corrupt,
        adversary: cfg.adversary.id(),
        corrupted: set.corrupted_positions().len(),
        attacked_coordinate: attacked,
        deviation_bound: 4.0 * cfg.eps_corrupt + 5.0 / (cfg.m as f64).sqrt(),
        trimmed,
        plain,
    })
}
