use std::fmt::Write as _;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::format::fmt_coeff;
use crate::cube::{chow_distance, chow_vector, BoundedTable, TruthTable};
use crate::error::{Error, Result};
use crate::poly::{boolean_dist, dist, p1, MultilinearPoly};
use crate::seed::{derive_seed, rng_from_seed, Rng};

use super::generate::gaussian_poly;
use super::rounding::random_round;
use super::small_p::small_p_mass;
use super::tails::{tail_scan, MAX_SCAN_VARS};

/// Generative model behind every experiment, repeated in each report header.
pub const RANDOM_PTF_MODEL: &str =
    "p has i.i.d. standard normal coefficients on every subset of size <= d; f = sign(p)";

/// Attempts per trial when rejection-sampling regular polynomials.
pub const MAX_REGULAR_ATTEMPTS: usize = 10_000;

/// How the comparison function `g` is built from `f = sign(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlipStrategy {
    /// Each point flipped independently with probability `rate`.
    RandomFlip,
    /// The `⌈rate·2^n⌉` points with smallest `|p|` flipped.
    MarginFlip,
    /// Random rounding of `P1(p / (rate·‖p‖₂))`.
    RoundMollified,
    /// `g = −f`.
    Negate,
}

impl FlipStrategy {
    pub fn id(self) -> &'static str {
        match self {
            FlipStrategy::RandomFlip => "random-flip",
            FlipStrategy::MarginFlip => "margin-flip",
            FlipStrategy::RoundMollified => "round-mollified",
            FlipStrategy::Negate => "negate",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        [Self::RandomFlip, Self::MarginFlip, Self::RoundMollified, Self::Negate]
            .into_iter()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::Parameter(format!("unknown flip strategy {id:?}")))
    }
}

/// One `(dist, Chow_d)` observation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub strategy: FlipStrategy,
    pub dist: f64,
    pub chow_distance: f64,
    /// Disagreement mass with `|p(x)| > Chow_d/η`, `p` normalized.
    pub aux_small_p_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessConfig {
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub strategy: FlipStrategy,
    pub rate: f64,
    pub eta: f64,
    pub seed: u64,
}

fn check_cube(n: usize, d: usize) -> Result<()> {
    if n > MAX_SCAN_VARS {
        return Err(Error::Capacity(format!("n = {n} exceeds {MAX_SCAN_VARS}")));
    }
    if d == 0 || d > n {
        return Err(Error::Parameter(format!("degree {d} must lie in 1..={n}")));
    }
    Ok(())
}

/// `f` flipped on the `⌈rate·2^n⌉` points of smallest `|p|` (ties by point code).
pub fn margin_flip(p: &MultilinearPoly, rate: f64) -> Result<TruthTable> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::Parameter(format!("flip rate {rate} outside [0, 1]")));
    }
    let values = p.values()?;
    let mut f = p.materialize_sign()?;
    let count = ((rate * values.len() as f64) - 1e-9).ceil().max(0.0) as usize;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()).then(a.cmp(&b)));
    for &c in &order[..count.min(order.len())] {
        f.flip(c);
    }
    Ok(f)
}

/// `f` with each point flipped independently with probability `rate`.
pub fn random_flip(f: &TruthTable, rate: f64, rng: &mut Rng) -> Result<TruthTable> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::Parameter(format!("flip rate {rate} outside [0, 1]")));
    }
    TruthTable::from_minus_fn(f.n(), |c| f.is_minus(c as usize) != (rng.random::<f64>() < rate))
}

/// `P1(p(x) / (width·‖p‖₂))`.
pub fn mollify(p: &MultilinearPoly, width: f64) -> Result<BoundedTable> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::Parameter(format!("mollifier width {width} must be positive")));
    }
    let scale = width * p.l2_norm();
    if scale == 0.0 {
        return Err(Error::Degenerate("cannot mollify the zero polynomial".into()));
    }
    BoundedTable::new(p.values()?.into_iter().map(|v| p1(v / scale)).collect())
}

fn robustness_trial(cfg: &RobustnessConfig, trial: u64) -> Result<ExperimentRecord> {
    let seed = derive_seed(cfg.seed, trial);
    let mut rng = rng_from_seed(seed);
    let p = gaussian_poly(cfg.n, cfg.d, &mut rng)?;
    let f = p.materialize_sign()?;
    let g = match cfg.strategy {
        FlipStrategy::RandomFlip => random_flip(&f, cfg.rate, &mut rng)?,
        FlipStrategy::MarginFlip => margin_flip(&p, cfg.rate)?,
        FlipStrategy::RoundMollified => random_round(&mollify(&p, cfg.rate)?, &mut rng)?,
        FlipStrategy::Negate => f.negated(),
    };
    let chow = chow_distance(&chow_vector(&f, cfg.d)?, &chow_vector(&g, cfg.d)?)?;
    // A zero Chow distance would put the cut at 0; any positive δ works then.
    let aux = small_p_mass(&p, &g, chow.max(f64::MIN_POSITIVE), cfg.eta)?;
    Ok(ExperimentRecord {
        trial,
        seed,
        n: cfg.n,
        d: cfg.d,
        strategy: cfg.strategy,
        dist: boolean_dist(&f, &g)?,
        chow_distance: chow,
        aux_small_p_mass: aux.large_p_mass,
    })
}

/// Exact `(dist, Chow_d)` over seeded trials; records come back in trial order.
pub fn robustness_experiment(cfg: &RobustnessConfig) -> Result<Vec<ExperimentRecord>> {
    check_cube(cfg.n, cfg.d)?;
    let rate_ok = match cfg.strategy {
        FlipStrategy::RoundMollified => cfg.rate > 0.0 && cfg.rate.is_finite(),
        _ => (0.0..=1.0).contains(&cfg.rate),
    };
    if !rate_ok {
        return Err(Error::Parameter(format!(
            "rate {} invalid for {}",
            cfg.rate,
            cfg.strategy.id()
        )));
    }
    if !(cfg.eta > 0.0 && cfg.eta <= 1.0) {
        return Err(Error::Parameter(format!("eta = {} must lie in (0, 1]", cfg.eta)));
    }
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| robustness_trial(cfg, t))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustnessSummary {
    pub trials: usize,
    pub far_threshold: f64,
    pub far_trials: usize,
    /// Smallest Chow distance among trials with `dist ≥ far_threshold`.
    pub min_far_chow_distance: Option<f64>,
    pub max_dist: f64,
    pub max_chow_distance: f64,
}

pub fn summarize(records: &[ExperimentRecord], far_threshold: f64) -> RobustnessSummary {
    let far: Vec<_> = records.iter().filter(|r| r.dist >= far_threshold).collect();
    RobustnessSummary {
        trials: records.len(),
        far_threshold,
        far_trials: far.len(),
        min_far_chow_distance: far.iter().map(|r| r.chow_distance).reduce(f64::min),
        max_dist: records.iter().map(|r| r.dist).fold(0.0, f64::max),
        max_chow_distance: records.iter().map(|r| r.chow_distance).fold(0.0, f64::max),
    }
}

fn header_block(out: &mut String, header: &[String]) {
    for line in header {
        writeln!(out, "# {line}").unwrap();
    }
    writeln!(out, "# model: {RANDOM_PTF_MODEL}").unwrap();
}

/// Experiment CSV with `#` provenance lines ahead of the column header.
pub fn write_records_csv(records: &[ExperimentRecord], header: &[String]) -> String {
    let mut out = String::new();
    header_block(&mut out, header);
    out.push_str("trial,seed,n,d,strategy,dist,chow_distance,aux_small_p_mass\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.trial,
            r.seed,
            r.n,
            r.d,
            r.strategy.id(),
            fmt_coeff(r.dist),
            fmt_coeff(r.chow_distance),
            fmt_coeff(r.aux_small_p_mass)
        )
        .unwrap();
    }
    out
}

/// One trial of the random-rounding comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundingRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub dist_f_g: f64,
    pub dist_f_g0: f64,
    pub chow_distance_f_g: f64,
    pub chow_distance_f_g0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingConfig {
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub seed: u64,
}

/// Random PTF `f`, pointwise-uniform bounded `g` on `[−1, 1]`, and `g₀ = random_round(g)`.
pub fn rounding_experiment(cfg: &RoundingConfig) -> Result<Vec<RoundingRecord>> {
    check_cube(cfg.n, cfg.d)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(cfg.seed, trial);
            let mut rng = rng_from_seed(seed);
            let f = gaussian_poly(cfg.n, cfg.d, &mut rng)?.materialize_sign()?;
            let g = BoundedTable::from_fn(cfg.n, |_| rng.random_range(-1.0..=1.0))?;
            let g0 = random_round(&g, &mut rng)?;
            let cf = chow_vector(&f, cfg.d)?;
            Ok(RoundingRecord {
                trial,
                seed,
                n: cfg.n,
                d: cfg.d,
                dist_f_g: dist(&f, &g)?,
                dist_f_g0: boolean_dist(&f, &g0)?,
                chow_distance_f_g: chow_distance(&cf, &chow_vector(&g, cfg.d)?)?,
                chow_distance_f_g0: chow_distance(&cf, &chow_vector(&g0, cfg.d)?)?,
            })
        })
        .collect()
}

pub fn write_rounding_csv(records: &[RoundingRecord], header: &[String]) -> String {
    let mut out = String::new();
    header_block(&mut out, header);
    out.push_str("trial,seed,n,d,dist_f_g,dist_f_g0,chow_distance_f_g,chow_distance_f_g0\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.trial,
            r.seed,
            r.n,
            r.d,
            fmt_coeff(r.dist_f_g),
            fmt_coeff(r.dist_f_g0),
            fmt_coeff(r.chow_distance_f_g),
            fmt_coeff(r.chow_distance_f_g0)
        )
        .unwrap();
    }
    out
}

/// Tail and anti-tail probabilities of one random polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub attempts: usize,
    pub regularity: f64,
    pub tails: Vec<(f64, f64)>,
    pub anti_tails: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailsConfig {
    pub n: usize,
    pub d: usize,
    pub trials: u64,
    pub seed: u64,
    pub thresholds: Vec<f64>,
    pub taus: Vec<f64>,
    /// Keep drawing until the polynomial is this regular.
    pub max_regularity: Option<f64>,
}

/// Draws a Gaussian polynomial, rejection-sampling toward `max_regularity` when set.
pub fn draw_regular_poly(
    n: usize,
    d: usize,
    max_regularity: Option<f64>,
    rng: &mut Rng,
) -> Result<(MultilinearPoly, usize)> {
    for attempt in 1..=MAX_REGULAR_ATTEMPTS {
        let p = gaussian_poly(n, d, rng)?;
        match max_regularity {
            None => return Ok((p, attempt)),
            Some(tau) if p.is_tau_regular(tau)? => return Ok((p, attempt)),
            Some(_) => {}
        }
    }
    Err(Error::Degenerate(format!(
        "no {:?}-regular draw in {MAX_REGULAR_ATTEMPTS} attempts (n = {n}, d = {d})",
        max_regularity
    )))
}

pub fn tails_experiment(cfg: &TailsConfig) -> Result<Vec<TailRecord>> {
    check_cube(cfg.n, cfg.d)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(cfg.seed, trial);
            let mut rng = rng_from_seed(seed);
            let (p, attempts) = draw_regular_poly(cfg.n, cfg.d, cfg.max_regularity, &mut rng)?;
            let scan = tail_scan(&p, &cfg.thresholds, &cfg.taus)?;
            Ok(TailRecord {
                trial,
                seed,
                n: cfg.n,
                d: cfg.d,
                attempts,
                regularity: p.regularity()?,
                tails: scan.tails.iter().map(|r| (r.threshold, r.probability)).collect(),
                anti_tails: scan.anti_tails.iter().map(|r| (r.tau, r.probability)).collect(),
            })
        })
        .collect()
}

/// Long-format tails CSV: one row per (trial, level).
pub fn write_tails_csv(records: &[TailRecord], header: &[String]) -> String {
    let mut out = String::new();
    header_block(&mut out, header);
    out.push_str("trial,seed,n,d,regularity,kind,level,probability,bound\n");
    for r in records {
        let prefix = format!("{},{},{},{},{}", r.trial, r.seed, r.n, r.d, fmt_coeff(r.regularity));
        for &(t, prob) in &r.tails {
            let bound = if t > 0.0 {
                fmt_coeff(1.0 / (t * t))
            } else {
                String::new()
            };
            writeln!(out, "{prefix},tail,{},{},{bound}", fmt_coeff(t), fmt_coeff(prob)).unwrap();
        }
        for &(tau, prob) in &r.anti_tails {
            writeln!(out, "{prefix},anti-tail,{},{},", fmt_coeff(tau), fmt_coeff(prob)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(strategy: FlipStrategy, rate: f64) -> RobustnessConfig {
        RobustnessConfig {
            n: 8,
            d: 2,
            trials: 6,
            strategy,
            rate,
            eta: 0.1,
            seed: 5,
        }
    }

    #[test]
    fn zero_rate_gives_zero_distances() {
        for s in [FlipStrategy::RandomFlip, FlipStrategy::MarginFlip] {
            for r in robustness_experiment(&cfg(s, 0.0)).unwrap() {
                assert_eq!((r.dist, r.chow_distance, r.aux_small_p_mass), (0.0, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn negation_doubles_the_truncated_spectrum() {
        let c = cfg(FlipStrategy::Negate, 0.0);
        for r in robustness_experiment(&c).unwrap() {
            let p = gaussian_poly(c.n, c.d, &mut rng_from_seed(r.seed)).unwrap();
            let norm = chow_vector(&p.materialize_sign().unwrap(), c.d).unwrap().l2_norm();
            assert_eq!(r.dist, 2.0);
            assert!((r.chow_distance - 2.0 * norm).abs() < 1e-12);
        }
    }

    #[test]
    fn margin_flip_count_and_order() {
        let p = gaussian_poly(8, 2, &mut rng_from_seed(9)).unwrap();
        let g = margin_flip(&p, 0.05).unwrap();
        let f = p.materialize_sign().unwrap();
        let flipped = crate::poly::disagreement(&f, &g).unwrap();
        assert_eq!(flipped.len(), 13);
        let values = p.values().unwrap();
        let cut = flipped.iter().map(|&c| values[c as usize].abs()).fold(0.0, f64::max);
        let kept_min = (0..256u64)
            .filter(|c| !flipped.contains(c))
            .map(|c| values[c as usize].abs())
            .fold(f64::INFINITY, f64::min);
        assert!(cut <= kept_min);
    }

    #[test]
    fn records_are_seeded_and_ordered() {
        let c = cfg(FlipStrategy::RandomFlip, 0.1);
        let a = robustness_experiment(&c).unwrap();
        let b = robustness_experiment(&c).unwrap();
        assert_eq!(a, b);
        assert!(a
            .iter()
            .enumerate()
            .all(|(i, r)| r.trial == i as u64 && r.seed == derive_seed(5, i as u64)));
        let csv = write_records_csv(&a, &["config: test".into()]);
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 7);
        assert!(csv.contains("# model: "));
    }

    #[test]
    fn mollified_rounding_stays_close_for_narrow_width() {
        let c = cfg(FlipStrategy::RoundMollified, 1e-6);
        for r in robustness_experiment(&c).unwrap() {
            assert!(r.dist < 0.05, "{r:?}");
        }
    }

    #[test]
    fn strategy_ids_round_trip() {
        for s in [
            FlipStrategy::RandomFlip,
            FlipStrategy::MarginFlip,
            FlipStrategy::RoundMollified,
            FlipStrategy::Negate,
        ] {
            assert_eq!(FlipStrategy::from_id(s.id()).unwrap(), s);
        }
        assert!(FlipStrategy::from_id("x").is_err());
    }

    #[test]
    fn rounding_preserves_distance() {
        let records = rounding_experiment(&RoundingConfig {
            n: 10,
            d: 2,
            trials: 20,
            seed: 1,
        })
        .unwrap();
        for r in &records {
            assert!((r.dist_f_g - r.dist_f_g0).abs() <= 0.1, "{r:?}");
        }
        let csv = write_rounding_csv(&records, &[]);
        assert_eq!(csv.lines().count(), 22);
    }

    #[test]
    fn tails_rows_and_regular_draws() {
        let cfg = TailsConfig {
            n: 10,
            d: 2,
            trials: 3,
            seed: 4,
            thresholds: vec![2.0, 3.0],
            taus: vec![0.01, 0.1],
            max_regularity: Some(0.2),
        };
        let records = tails_experiment(&cfg).unwrap();
        for r in &records {
            assert!(r.regularity <= 0.2 * (1.0 + 1e-12));
            assert!(r.tails[0].1 <= 0.25);
        }
        let csv = write_tails_csv(&records, &[]);
        assert_eq!(csv.lines().filter(|l| l.contains(",tail,")).count(), 6);
        assert_eq!(csv.lines().filter(|l| l.contains(",anti-tail,")).count(), 6);
    }

    #[test]
    fn unreachable_regularity_is_reported() {
        let err = draw_regular_poly(4, 2, Some(0.01), &mut rng_from_seed(0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }
}
