//! Iterative reconstruction of a degree-d polynomial bounded function from
//! (approximate) degree-d Chow parameters, and extraction of the integer-weight
//! threshold function it certifies.
//!
//! The hypothesis is always `g = P1((ξ/2) · Σ_S H_S χ_S)` with integer `H`.
//! Each round compares the target vector against the oracle's estimate of
//! `g`'s Chow vector and moves `H` by the residual rounded to whole multiples
//! of `ξ` (nearest, ties to even). The loop stops once the residual norm is at
//! most `stop_radius`; running out of budget first is an error.

use serde::Serialize;

use crate::cube::{chow_distance, wht_values, ChowVector, SubsetIndexer, TruthTable};
use crate::error::{Error, Result};
use crate::poly::{boolean_dist, dist, MultilinearPoly, PbfHypothesis};
use crate::seed::{rng_from_seed, Rng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReconstructParams {
    xi: f64,
    max_iters: usize,
    stop_radius: f64,
}

impl ReconstructParams {
    /// Defaults: `max_iters = ⌈64/ξ²⌉`, `stop_radius = 4ξ`.
    pub fn new(xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(Error::Parameter(format!("xi = {xi} must lie in (0, 1)")));
        }
        Ok(ReconstructParams {
            xi,
            max_iters: default_budget(xi),
            stop_radius: 4.0 * xi,
        })
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Result<Self> {
        if max_iters == 0 {
            return Err(Error::Parameter("max_iters must be at least 1".into()));
        }
        self.max_iters = max_iters;
        Ok(self)
    }

    pub fn with_stop_radius(mut self, stop_radius: f64) -> Result<Self> {
        if !(stop_radius > 0.0 && stop_radius < 6.0 * self.xi) {
            return Err(Error::Parameter(format!(
                "stop_radius = {stop_radius} must lie in (0, 6·xi)"
            )));
        }
        self.stop_radius = stop_radius;
        Ok(self)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    pub fn stop_radius(&self) -> f64 {
        self.stop_radius
    }

    /// The hypothesis scale `λ = ξ/2`.
    pub fn lambda(&self) -> f64 {
        self.xi / 2.0
    }
}

/// `⌈64/ξ²⌉`.
pub fn default_budget(xi: f64) -> usize {
    (64.0 / (xi * xi)).ceil() as usize
}

/// Supplies (estimates of) the degree-d Chow vector of a hypothesis.
pub trait ChowOracle {
    fn indexer(&self) -> &SubsetIndexer;

    fn chow(&mut self, h: &PbfHypothesis, rng: &mut Rng) -> Result<ChowVector>;

    /// True when repeated calls on the same hypothesis return the same vector.
    fn is_deterministic(&self) -> bool;

    fn name(&self) -> &'static str;
}

/// Computes `g`'s Chow vector exactly by tabulating `g` over the cube.
#[derive(Clone, Debug)]
pub struct ExactOracle {
    indexer: SubsetIndexer,
}

impl ExactOracle {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n > crate::cube::MAX_TABLE_VARS {
            return Err(Error::Capacity(format!(
                "exact oracle needs n ≤ {}, got {n}",
                crate::cube::MAX_TABLE_VARS
            )));
        }
        Ok(ExactOracle {
            indexer: SubsetIndexer::new(n, d)?,
        })
    }
}

impl ChowOracle for ExactOracle {
    fn indexer(&self) -> &SubsetIndexer {
        &self.indexer
    }

    fn chow(&mut self, h: &PbfHypothesis, _rng: &mut Rng) -> Result<ChowVector> {
        let g = h.materialize(&self.indexer)?;
        ChowVector::from_spectrum(&self.indexer, &wht_values(g.values())?)
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "exact"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub hypothesis: PbfHypothesis,
    /// Number of weight updates performed.
    pub iterations: usize,
    /// Residual norm `||alpha − oracle(g)||₂` at the accepted hypothesis.
    pub residual_l2: f64,
    /// Residual norm before each update and at acceptance.
    pub trace: Vec<f64>,
}

/// Runs the reconstruction loop against `alpha`.
pub fn reconstruct(
    alpha: &ChowVector,
    params: &ReconstructParams,
    oracle: &mut dyn ChowOracle,
    seed: u64,
) -> Result<Reconstruction> {
    let (n, d) = (oracle.indexer().n(), oracle.indexer().d());
    if alpha.n() != n || alpha.d() != d {
        return Err(Error::Shape(format!(
            "target over (n, d) = ({}, {}), oracle over ({n}, {d})",
            alpha.n(),
            alpha.d()
        )));
    }
    if alpha.max_abs() > 1.0 {
        return Err(Error::Parameter("target has a coefficient outside [-1,1]".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut h = PbfHypothesis::zero(n, d, params.lambda())?;
    let mut trace = Vec::new();
    for iteration in 0..=params.max_iters() {
        let estimate = oracle.chow(&h, &mut rng)?;
        let residual = alpha.difference(&estimate)?;
        let norm = residual.iter().map(|r| r * r).sum::<f64>().sqrt();
        trace.push(norm);
        if norm <= params.stop_radius() {
            return Ok(Reconstruction {
                hypothesis: h,
                iterations: iteration,
                residual_l2: norm,
                trace,
            });
        }
        if iteration == params.max_iters() {
            break;
        }
        let mut moved = false;
        for (w, r) in h.weights_mut().iter_mut().zip(&residual) {
            let step = (r / params.xi()).round_ties_even() as i64;
            moved |= step != 0;
            *w += step;
        }
        if !moved && oracle.is_deterministic() {
            return Err(Error::NonConvergence {
                reason: "every residual coordinate rounds to zero; the update is stuck".into(),
                last_residual: norm,
                trace,
            });
        }
    }
    Err(Error::NonConvergence {
        reason: format!("iteration budget {} exhausted", params.max_iters()),
        last_residual: *trace.last().unwrap_or(&f64::NAN),
        trace,
    })
}

/// The threshold function read off a reconstructed hypothesis.
#[derive(Clone, Debug)]
pub struct ExtractedPtf {
    /// `Σ_S H_S χ_S`; the scale is dropped since sign is scale-invariant.
    pub poly: MultilinearPoly,
    /// `Σ_S H_S²`.
    pub certificate: u128,
}

pub fn extract_ptf(h: &PbfHypothesis) -> Result<ExtractedPtf> {
    let indexer = SubsetIndexer::new(h.n(), h.d())?;
    Ok(ExtractedPtf {
        poly: h.integer_poly(&indexer)?,
        certificate: h.sum_sq(),
    })
}

/// Exact comparisons against a known target, available at desk scale.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceMetrics {
    /// `dist(f, sign Q)`.
    pub dist_sign: f64,
    /// `dist(f, g)` for the bounded hypothesis.
    pub dist_pbf: f64,
    /// `||χ^d_f − χ^d_g||₂`.
    pub chow_distance_to_reference: f64,
    /// `dist(f, sign Q) ≤ 2·dist(f, g)`.
    pub factor_two_holds: bool,
    /// `dist(f, sign Q) ≤ eps_report`, when a target accuracy was given.
    pub within_eps: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct LearnOutcome {
    pub reconstruction: Reconstruction,
    pub ptf: ExtractedPtf,
    pub reference: Option<ReferenceMetrics>,
}

/// Reconstruction followed by PTF extraction; scores the result against the
/// reference table when one is supplied.
pub fn reconstruct_and_learn(
    alpha: &ChowVector,
    eps_report: Option<f64>,
    params: &ReconstructParams,
    oracle: &mut dyn ChowOracle,
    reference: Option<&TruthTable>,
    seed: u64,
) -> Result<LearnOutcome> {
    let reconstruction = reconstruct(alpha, params, oracle, seed)?;
    let ptf = extract_ptf(&reconstruction.hypothesis)?;
    let reference = match reference {
        None => None,
        Some(f) => Some(score_against(f, &reconstruction.hypothesis, eps_report)?),
    };
    Ok(LearnOutcome {
        reconstruction,
        ptf,
        reference,
    })
}

/// Exact distances between a Boolean target and a hypothesis.
pub fn score_against(f: &TruthTable, h: &PbfHypothesis, eps_report: Option<f64>) -> Result<ReferenceMetrics> {
    if f.n() != h.n() {
        return Err(Error::Shape(format!(
            "reference over {} variables, hypothesis over {}",
            f.n(),
            h.n()
        )));
    }
    let indexer = SubsetIndexer::new(h.n(), h.d())?;
    let g = h.materialize(&indexer)?;
    let sign_q = h.sign_table(&indexer)?;
    let dist_sign = boolean_dist(f, &sign_q)?;
    let dist_pbf = dist(f, &g)?;
    let chow_f = ChowVector::from_spectrum(&indexer, &crate::cube::wht(f))?;
    let chow_g = ChowVector::from_spectrum(&indexer, &crate::cube::wht(&g))?;
    // Pointwise: wherever sign(Q) ≠ f, |f − P1(Q)| ≥ 1, so the inequality is
    // exact up to the rounding in the two averages.
    let factor_two_holds = dist_sign <= 2.0 * dist_pbf + 1e-12;
    Ok(ReferenceMetrics {
        dist_sign,
        dist_pbf,
        chow_distance_to_reference: chow_distance(&chow_f, &chow_g)?,
        factor_two_holds,
        within_eps: eps_report.map(|e| dist_sign <= e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::chow_vector;

    #[test]
    fn params_validate() {
        assert!(ReconstructParams::new(0.0).is_err());
        assert!(ReconstructParams::new(1.0).is_err());
        let p = ReconstructParams::new(0.05).unwrap();
        assert_eq!(p.max_iters(), 25600);
        assert!((p.stop_radius() - 0.2).abs() < 1e-15);
        assert!(p.clone().with_stop_radius(0.31).is_err());
        assert!(p.clone().with_max_iters(0).is_err());
        assert_eq!(default_budget(0.1), 6400);
    }

    #[test]
    fn zero_target_accepts_zero_weights_immediately() {
        let alpha = ChowVector::zeros(4, 2).unwrap();
        let mut oracle = ExactOracle::new(4, 2).unwrap();
        let params = ReconstructParams::new(0.3).unwrap();
        let out = reconstruct(&alpha, &params, &mut oracle, 0).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.residual_l2, 0.0);
        assert!(out.hypothesis.weights().iter().all(|&w| w == 0));
    }

    #[test]
    fn dictator_reconstruction() {
        let f = TruthTable::dictator(4, 1).unwrap();
        let alpha = chow_vector(&f, 1).unwrap();
        let mut oracle = ExactOracle::new(4, 1).unwrap();
        let params = ReconstructParams::new(0.1).unwrap();
        let out = reconstruct_and_learn(&alpha, Some(0.0), &params, &mut oracle, Some(&f), 0).unwrap();
        let r = &out.reconstruction;
        assert!(r.residual_l2 <= 0.4);
        assert!(r.iterations <= params.max_iters());
        let sign_table = out.ptf.poly.materialize_sign().unwrap();
        assert_eq!(sign_table, f);
        let m = out.reference.unwrap();
        assert_eq!(m.dist_sign, 0.0);
        assert!(m.factor_two_holds);
        assert_eq!(m.within_eps, Some(true));
        assert_eq!(
            out.ptf.certificate,
            r.hypothesis.weights().iter().map(|&w| (w * w) as u128).sum::<u128>()
        );
        // The residual against alpha is the exact Chow distance to g.
        let g = r.hypothesis.materialize(&SubsetIndexer::new(4, 1).unwrap()).unwrap();
        let exact = chow_distance(&alpha, &chow_vector(&g, 1).unwrap()).unwrap();
        assert!((exact - r.residual_l2).abs() <= 1e-12);
    }

    #[test]
    fn trace_decreases_to_acceptance() {
        let f = TruthTable::majority(5).unwrap();
        let alpha = chow_vector(&f, 1).unwrap();
        let mut oracle = ExactOracle::new(5, 1).unwrap();
        let params = ReconstructParams::new(0.05).unwrap();
        let out = reconstruct(&alpha, &params, &mut oracle, 3).unwrap();
        assert_eq!(out.trace.len(), out.iterations + 1);
        assert_eq!(*out.trace.last().unwrap(), out.residual_l2);
        assert!(out.trace[0] > params.stop_radius());
    }

    #[test]
    fn zero_weights_extract_to_constant_plus_one() {
        let h = PbfHypothesis::zero(3, 2, 0.1).unwrap();
        let ptf = extract_ptf(&h).unwrap();
        assert!(ptf.poly.is_zero());
        assert_eq!(ptf.certificate, 0);
        assert_eq!(
            ptf.poly.materialize_sign().unwrap(),
            TruthTable::constant(3, 1).unwrap()
        );
    }

    #[test]
    fn extraction_is_scale_invariant() {
        let ix = SubsetIndexer::new(5, 2).unwrap();
        let h: Vec<i64> = (0..ix.len() as i64).map(|i| (i * 5 % 7) - 3).collect();
        let a = PbfHypothesis::new(5, 2, 0.05, h).unwrap();
        let b = a.with_lambda(0.1).unwrap();
        let ta = extract_ptf(&a).unwrap().poly.materialize_sign().unwrap();
        let tb = extract_ptf(&b).unwrap().poly.materialize_sign().unwrap();
        assert_eq!(ta, tb);
    }

    #[test]
    fn budget_exhaustion_is_an_error_with_trace() {
        let f = TruthTable::majority(5).unwrap();
        let alpha = chow_vector(&f, 1).unwrap();
        let mut oracle = ExactOracle::new(5, 1).unwrap();
        let params = ReconstructParams::new(0.02).unwrap().with_max_iters(2).unwrap();
        match reconstruct(&alpha, &params, &mut oracle, 0) {
            Err(Error::NonConvergence { trace, .. }) => assert_eq!(trace.len(), 3),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_mismatched_or_out_of_range_targets() {
        let mut oracle = ExactOracle::new(4, 1).unwrap();
        let params = ReconstructParams::new(0.1).unwrap();
        let wrong = ChowVector::zeros(4, 2).unwrap();
        assert!(matches!(
            reconstruct(&wrong, &params, &mut oracle, 0),
            Err(Error::Shape(_))
        ));
        assert!(ExactOracle::new(25, 1).is_err());
    }

    #[test]
    fn deterministic_given_inputs() {
        let f = TruthTable::from_minus_fn(6, |c| (c * 13 + 5) % 7 < 3).unwrap();
        let alpha = chow_vector(&f, 2).unwrap();
        let params = ReconstructParams::new(0.1).unwrap();
        let a = reconstruct(&alpha, &params, &mut ExactOracle::new(6, 2).unwrap(), 9).unwrap();
        let b = reconstruct(&alpha, &params, &mut ExactOracle::new(6, 2).unwrap(), 9).unwrap();
        assert_eq!(a.hypothesis, b.hypothesis);
        assert_eq!(a.trace, b.trace);
    }
}
