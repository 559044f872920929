//! Seeded verification suites over the exhaustive oracles.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::cube::Subset;
use crate::error::Result;
use crate::poly::MultilinearPoly;
use crate::seed::{derive_seed, rng_from_seed};

use super::affine::{affine_zero_mass, AffineMass};
use super::diophantine::{diophantine_bound, diophantine_t, near_integer_multiple};
use super::experiment::margin_flip;
use super::generate::gaussian_poly;
use super::small_p::{small_p_mass, SmallPDiagnostic};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophantineCase {
    pub trial: u64,
    pub w: Vec<f64>,
    pub t: u64,
    pub membership: bool,
    pub within_bound: bool,
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophantineSuite {
    pub trials: u64,
    pub dim: usize,
    pub gamma: f64,
    pub bound: u64,
    pub max_t: u64,
    pub failures: Vec<DiophantineCase>,
    pub passed: bool,
}

/// Random `w ∈ [0,1)^dim`; each returned `t` is re-checked directly.
pub fn diophantine_suite(trials: u64, dim: usize, gamma: f64, seed: u64) -> Result<DiophantineSuite> {
    let bound = diophantine_bound(dim, gamma).unwrap_or(u64::MAX);
    let mut failures = Vec::new();
    let mut max_t = 0;
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, trial));
        let w: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let t = diophantine_t(&w, gamma)?;
        max_t = max_t.max(t);
        let case = DiophantineCase {
            trial,
            membership: near_integer_multiple(&w, t, gamma),
            within_bound: t <= bound,
            minimal: (1..t).all(|s| !near_integer_multiple(&w, s, gamma)),
            w,
            t,
        };
        if !(case.membership && case.within_bound && case.minimal) {
            failures.push(case);
        }
    }
    Ok(DiophantineSuite {
        trials,
        dim,
        gamma,
        bound,
        max_t,
        passed: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineCase {
    pub trial: u64,
    pub forms: Vec<MultilinearPoly>,
    pub result: AffineMass,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineSuite {
    pub trials: u64,
    pub n: usize,
    pub max_dim: usize,
    /// Instances per span dimension, index = dim.
    pub dims: Vec<u64>,
    pub max_mass_ratio: f64,
    pub failures: Vec<AffineCase>,
    pub passed: bool,
}

/// A random affine form: coefficients in `{−1, 0, 1}`, constant 0 half the time.
fn random_form(n: usize, rng: &mut crate::seed::Rng) -> Result<MultilinearPoly> {
    let mut terms = Vec::with_capacity(n + 1);
    if rng.random_bool(0.5) {
        terms.push((Subset::EMPTY, if rng.random_bool(0.5) { 1.0 } else { -1.0 }));
    }
    for i in 1..=n {
        let c = f64::from(rng.random_range(-1i8..=1));
        if c != 0.0 {
            terms.push((Subset::singleton(i), c));
        }
    }
    MultilinearPoly::from_terms(n, 1, terms)
}

/// Random families of up to `max_dim` forms; mass must not exceed `2^{−dim}`.
pub fn affine_suite(trials: u64, n: usize, max_dim: usize, seed: u64) -> Result<AffineSuite> {
    let mut dims = vec![0u64; max_dim + 1];
    let mut failures = Vec::new();
    let mut max_mass_ratio = 0.0f64;
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, trial));
        let count = rng.random_range(1..=max_dim.max(1));
        let forms = (0..count)
            .map(|_| random_form(n, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let result = affine_zero_mass(&forms, n)?;
        dims[result.dim.min(max_dim)] += 1;
        max_mass_ratio = max_mass_ratio.max(result.mass / result.bound());
        if !result.within_bound() {
            failures.push(AffineCase { trial, forms, result });
        }
    }
    Ok(AffineSuite {
        trials,
        n,
        max_dim,
        dims,
        max_mass_ratio,
        passed: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallPSuiteConfig {
    pub trials: u64,
    pub n: usize,
    pub d: usize,
    pub flip_rate: f64,
    pub deltas: Vec<f64>,
    pub etas: Vec<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPCase {
    pub trial: u64,
    pub seed: u64,
    pub diagnostic: SmallPDiagnostic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPSuite {
    pub config: SmallPSuiteConfig,
    pub checks: u64,
    pub precondition_met: u64,
    pub max_chow_distance: f64,
    /// Largest `Pr[D'] / (η/2)` among checks meeting the precondition.
    pub max_mass_ratio: f64,
    pub failures: Vec<SmallPCase>,
    pub passed: bool,
}

/// Margin-flipped random PTFs; each trial is checked at δ = its own Chow
/// distance and on the configured `δ` grid, for every `η`.
pub fn small_p_suite(cfg: &SmallPSuiteConfig) -> Result<SmallPSuite> {
    let mut checks = 0;
    let mut met = 0;
    let mut max_chow = 0.0f64;
    let mut max_ratio = 0.0f64;
    let mut failures = Vec::new();
    for trial in 0..cfg.trials {
        let seed = derive_seed(cfg.seed, trial);
        let p = gaussian_poly(cfg.n, cfg.d, &mut rng_from_seed(seed))?;
        let g = margin_flip(&p, cfg.flip_rate)?;
        let chow = small_p_mass(&p, &g, 1.0, 1.0)?.chow_distance;
        max_chow = max_chow.max(chow);
        let mut deltas = vec![chow.max(f64::MIN_POSITIVE)];
        deltas.extend(&cfg.deltas);
        for &delta in &deltas {
            for &eta in &cfg.etas {
                let diag = small_p_mass(&p, &g, delta, eta)?;
                checks += 1;
                if diag.precondition_met {
                    met += 1;
                    max_ratio = max_ratio.max(diag.large_p_mass / (eta / 2.0));
                }
                if !diag.claim_holds {
                    failures.push(SmallPCase {
                        trial,
                        seed,
                        diagnostic: diag,
                    });
                }
            }
        }
    }
    Ok(SmallPSuite {
        config: cfg.clone(),
        checks,
        precondition_met: met,
        max_chow_distance: max_chow,
        max_mass_ratio: max_ratio,
        passed: failures.is_empty(),
        failures,
    })
}
