use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MultilinearPoly;

/// Largest cube the exhaustive scans accept.
pub const MAX_SCAN_VARS: usize = 22;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub threshold: f64,
    /// `Pr[|p(x)| ≥ t·‖p‖₂]`.
    pub probability: f64,
    /// `1/t²`.
    pub chebyshev_bound: f64,
}

impl TailRow {
    pub fn chebyshev_holds(&self) -> bool {
        self.probability <= self.chebyshev_bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntiTailRow {
    pub tau: f64,
    /// `Pr[|p(x)| ≤ τ·‖p‖₂]`.
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailScan {
    pub n: usize,
    pub d: usize,
    pub l2_norm: f64,
    pub tails: Vec<TailRow>,
    pub anti_tails: Vec<AntiTailRow>,
}

/// Exact tail and anti-concentration table of `p` over the uniform cube.
pub fn tail_scan(p: &MultilinearPoly, thresholds: &[f64], taus: &[f64]) -> Result<TailScan> {
    if p.n() > MAX_SCAN_VARS {
        return Err(Error::Capacity(format!("n = {} exceeds {MAX_SCAN_VARS}", p.n())));
    }
    if p.is_zero() {
        return Err(Error::Degenerate("tail scan of the zero polynomial".into()));
    }
    if thresholds.iter().chain(taus).any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Parameter("thresholds must be finite and non-negative".into()));
    }
    let norm = p.l2_norm();
    let mut abs: Vec<f64> = p.values()?.into_iter().map(|v| v.abs() / norm).collect();
    abs.sort_by(f64::total_cmp);
    let len = abs.len() as f64;
    let tails = thresholds
        .iter()
        .map(|&t| TailRow {
            threshold: t,
            probability: (abs.len() - abs.partition_point(|&v| v < t)) as f64 / len,
            chebyshev_bound: if t > 0.0 { 1.0 / (t * t) } else { f64::INFINITY },
        })
        .collect();
    let anti_tails = taus
        .iter()
        .map(|&tau| AntiTailRow {
            tau,
            probability: abs.partition_point(|&v| v <= tau) as f64 / len,
        })
        .collect();
    Ok(TailScan {
        n: p.n(),
        d: p.d(),
        l2_norm: norm,
        tails,
        anti_tails,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Subset;
    use crate::lab::gaussian_poly;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;

    #[test]
    fn dictator_rows() {
        let p = MultilinearPoly::from_terms(3, 1, [(Subset::singleton(1), 1.0)]).unwrap();
        let scan = tail_scan(&p, &[0.5, 1.5], &[0.5]).unwrap();
        assert_eq!(scan.tails[0].probability, 1.0);
        assert_eq!(scan.tails[1].probability, 0.0);
        assert_eq!(scan.anti_tails[0].probability, 0.0);
    }

    #[test]
    fn chebyshev_is_tight_on_an_indicator() {
        // (1+x1)(1+x2) is 4 on a quarter of the cube and 0 elsewhere; norm 2.
        let terms = [(vec![], 1.0), (vec![1], 1.0), (vec![2], 1.0), (vec![1, 2], 1.0)]
            .map(|(m, c)| (Subset::from_members(&m).unwrap(), c));
        let p = MultilinearPoly::from_terms(2, 2, terms).unwrap();
        let scan = tail_scan(&p, &[2.0], &[0.0]).unwrap();
        assert_eq!(scan.tails[0].probability, 0.25);
        assert!(scan.tails[0].chebyshev_holds());
        assert_eq!(scan.anti_tails[0].probability, 0.75);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let p = MultilinearPoly::zero(3, 1).unwrap();
        assert!(matches!(tail_scan(&p, &[2.0], &[]), Err(Error::Degenerate(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn chebyshev_row_never_exceeds_bound(seed in any::<u64>(), n in 1usize..9, d in 1usize..4, t in 1.0f64..4.0) {
            let p = gaussian_poly(n, d.min(n), &mut rng_from_seed(seed)).unwrap();
            let scan = tail_scan(&p, &[t, 2.0], &[]).unwrap();
            for row in &scan.tails {
                prop_assert!(row.chebyshev_holds(), "{row:?}");
            }
        }
    }
}
