use serde::Serialize;

use crate::cube::{chow_distance, chow_vector, TruthTable};
use crate::error::{Error, Result};
use crate::poly::{sign, MultilinearPoly};

use super::tails::MAX_SCAN_VARS;

/// Mass of the disagreement region of `sign(p)` and `g` away from the zero set of `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPDiagnostic {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub eta: f64,
    /// `Pr[sign(p) ≠ g]`.
    pub disagreement_mass: f64,
    /// `Pr[x ∈ D, |p(x)| > δ/η]` with `‖p‖₂ = 1`.
    pub large_p_mass: f64,
    pub chow_distance: f64,
    pub precondition_met: bool,
    /// `large_p_mass ≤ η/2`, checked only when `chow_distance ≤ δ`.
    pub claim_holds: bool,
}

/// Exact disagreement masses for `f = sign(p)` against `g`, with `p` normalized.
pub fn small_p_mass(p: &MultilinearPoly, g: &TruthTable, delta: f64, eta: f64) -> Result<SmallPDiagnostic> {
    if p.n() > MAX_SCAN_VARS {
        return Err(Error::Capacity(format!("n = {} exceeds {MAX_SCAN_VARS}", p.n())));
    }
    if p.n() != g.n() {
        return Err(Error::Shape(format!("p over {} variables, g over {}", p.n(), g.n())));
    }
    if !(delta > 0.0 && delta.is_finite()) || !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Parameter(format!(
            "need delta > 0 and eta in (0, 1]; got {delta}, {eta}"
        )));
    }
    let p = p.normalized()?;
    let values = p.values()?;
    let f = TruthTable::from_fn(p.n(), |c| sign(values[c as usize]))?;
    let threshold = delta / eta;
    let (mut disagree, mut large) = (0u64, 0u64);
    for (c, v) in values.iter().enumerate() {
        if f.is_minus(c) != g.is_minus(c) {
            disagree += 1;
            if v.abs() > threshold {
                large += 1;
            }
        }
    }
    let len = values.len() as f64;
    let chow = chow_distance(&chow_vector(&f, p.d())?, &chow_vector(g, p.d())?)?;
    let large_p_mass = large as f64 / len;
    let precondition_met = chow <= delta;
    Ok(SmallPDiagnostic {
        n: p.n(),
        d: p.d(),
        delta,
        eta,
        disagreement_mass: disagree as f64 / len,
        large_p_mass,
        chow_distance: chow,
        precondition_met,
        claim_holds: !precondition_met || large_p_mass <= eta / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::gaussian_poly;
    use crate::seed::rng_from_seed;

    #[test]
    fn identical_functions_have_no_disagreement() {
        let p = gaussian_poly(8, 2, &mut rng_from_seed(1)).unwrap();
        let f = p.materialize_sign().unwrap();
        let r = small_p_mass(&p, &f, 0.01, 0.1).unwrap();
        assert_eq!((r.disagreement_mass, r.large_p_mass, r.chow_distance), (0.0, 0.0, 0.0));
        assert!(r.precondition_met && r.claim_holds);
    }

    #[test]
    fn negation_misses_the_precondition() {
        let p = gaussian_poly(6, 6, &mut rng_from_seed(2)).unwrap();
        let f = p.materialize_sign().unwrap();
        let r = small_p_mass(&p, &f.negated(), 0.1, 0.1).unwrap();
        assert!((r.chow_distance - 2.0).abs() < 1e-12);
        assert!(!r.precondition_met);
        assert!(r.claim_holds);
        assert_eq!(r.disagreement_mass, 1.0);
    }

    #[test]
    fn margin_flips_satisfy_the_claim() {
        for seed in 0..10 {
            let p = gaussian_poly(10, 2, &mut rng_from_seed(seed)).unwrap();
            let g = crate::lab::margin_flip(&p, 0.02).unwrap();
            let probe = small_p_mass(&p, &g, 1.0, 1.0).unwrap();
            for eta in [0.02, 0.05, 0.1] {
                let r = small_p_mass(&p, &g, probe.chow_distance.max(1e-12), eta).unwrap();
                assert!(r.precondition_met && r.claim_holds, "{r:?}");
            }
        }
    }

    #[test]
    fn parameter_guards() {
        let p = gaussian_poly(4, 1, &mut rng_from_seed(0)).unwrap();
        let f = p.materialize_sign().unwrap();
        assert!(small_p_mass(&p, &f, 0.0, 0.1).is_err());
        assert!(small_p_mass(&p, &f, 0.1, 0.0).is_err());
        assert!(matches!(
            small_p_mass(&p, &TruthTable::constant(5, 1).unwrap(), 0.1, 0.1),
            Err(Error::Shape(_))
        ));
    }
}
