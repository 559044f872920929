use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use chowd::cube::format::{parse_chow_csv, parse_truth_table, write_chow_csv};
use chowd::cube::{chow_vector, Subset, SubsetIndexer, TruthTable};
use chowd::lab::suites::{affine_suite, diophantine_suite, small_p_suite, SmallPSuiteConfig};
use chowd::lab::{
    chow_uniqueness_bruteforce, robustness_experiment, rounding_experiment, summarize, tails_experiment,
    write_records_csv, write_rounding_csv, write_tails_csv, FlipStrategy, RobustnessConfig, RoundingConfig,
    TailsConfig,
};
use chowd::learn::{
    corrupted_sample, learn_nasty, learn_rfa, make_oracle, NastyLearnConfig, NastyLearnReport, OracleMode,
    RfaLearnConfig, RfaLearnReport,
};
use chowd::oracles::format::{write_samples_csv, write_sidecar};
use chowd::oracles::{Adversary, PtfTarget, RfaMode};
use chowd::poly::format::parse_poly_json;
use chowd::poly::MultilinearPoly;
use chowd::reconstruct::{reconstruct_and_learn, ReconstructParams};

use crate::args::*;
use crate::{fixtures, read, to_json, with_header, Outcome, RunConfig};

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Spectrum(a) => spectrum(&a),
        Command::Reconstruct(a) => reconstruct(&a),
        Command::LearnRfa(a) => learn_rfa_cmd(&a),
        Command::LearnNasty(a) => learn_nasty_cmd(&a),
        Command::Experiment(a) => experiment(&a),
        Command::Verify(a) => verify(&a),
        Command::GenFixtures(a) => gen_fixtures(&a),
    }
}

fn read_table(path: &Path) -> Result<TruthTable> {
    parse_truth_table(&read(path)?).with_context(|| format!("parsing table {}", path.display()))
}

fn read_poly(path: &Path) -> Result<MultilinearPoly> {
    parse_poly_json(&read(path)?).with_context(|| format!("parsing polynomial {}", path.display()))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn oracle_mode(o: OracleArg) -> OracleMode {
    match o {
        OracleArg::Exact => OracleMode::Exact,
        OracleArg::Sampled => OracleMode::Sampled,
    }
}

fn ok(text: String, out: &OutputArgs) -> Outcome {
    Outcome {
        text,
        out: out.out.clone(),
        verified: true,
    }
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let table = read_table(&a.table)?;
    let d = a.d.unwrap_or(table.n());
    let chow = chow_vector(&table, d)?;
    let cfg = RunConfig::new("spectrum", a);
    Ok(ok(
        with_header(&cfg.comment_lines(), &write_chow_csv(&chow)?),
        &a.output,
    ))
}

#[derive(Serialize)]
struct ReconstructOut<'a> {
    config: RunConfig<'a, ReconstructArgs>,
    n: usize,
    d: usize,
    xi: f64,
    lambda: f64,
    basis: &'a [Subset],
    #[serde(rename = "H")]
    h: &'a [i64],
    iterations: usize,
    residual_l2: f64,
    certificate_sum_sq: u128,
    trace: &'a [f64],
    ptf: &'a MultilinearPoly,
    #[serde(skip_serializing_if = "Option::is_none")]
    dist_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dist_pbf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factor_two_holds: Option<bool>,
}

fn reconstruct(a: &ReconstructArgs) -> Result<Outcome> {
    let alpha = parse_chow_csv(&read(&a.alpha)?).with_context(|| format!("parsing {}", a.alpha.display()))?;
    let reference = a.reference.as_deref().map(read_table).transpose()?;
    let mode = oracle_mode(a.oracle);
    if mode == OracleMode::Sampled && a.seed.is_none() {
        bail!("--seed is required with --oracle sampled");
    }
    let mut params = ReconstructParams::new(a.xi)?;
    if let Some(m) = a.max_iters {
        params = params.with_max_iters(m)?;
    }
    if let Some(r) = a.stop_radius {
        params = params.with_stop_radius(r)?;
    }
    let mut oracle = make_oracle(mode, alpha.n(), alpha.d(), a.xi, a.delta)?;
    let o = reconstruct_and_learn(
        &alpha,
        None,
        &params,
        oracle.as_mut(),
        reference.as_ref(),
        a.seed.unwrap_or(0),
    )?;
    let indexer = SubsetIndexer::new(alpha.n(), alpha.d())?;
    let r = o.reference.as_ref();
    let out = ReconstructOut {
        config: RunConfig::new("reconstruct", a),
        n: alpha.n(),
        d: alpha.d(),
        xi: a.xi,
        lambda: params.lambda(),
        basis: indexer.subsets(),
        h: o.reconstruction.hypothesis.weights(),
        iterations: o.reconstruction.iterations,
        residual_l2: o.reconstruction.residual_l2,
        certificate_sum_sq: o.ptf.certificate,
        trace: &o.reconstruction.trace,
        ptf: &o.ptf.poly,
        dist_exact: r.map(|m| m.dist_sign),
        dist_pbf: r.map(|m| m.dist_pbf),
        factor_two_holds: r.map(|m| m.factor_two_holds),
    };
    Ok(Outcome {
        text: to_json(&out),
        out: a.output.out.clone(),
        verified: r.is_none_or(|m| m.factor_two_holds),
    })
}

#[derive(Serialize)]
struct Report<'a, A: Serialize, R: Serialize> {
    config: RunConfig<'a, A>,
    passed: bool,
    report: R,
}

fn learn_rfa_cmd(a: &LearnRfaArgs) -> Result<Outcome> {
    let cfg = RfaLearnConfig {
        d: a.d,
        eps: a.eps,
        delta: a.delta,
        xi: a.xi,
        oracle: oracle_mode(a.oracle),
        rfa_mode: if a.exact_when_cheaper {
            RfaMode::ExactWhenCheaper
        } else {
            RfaMode::Sampled
        },
        seed: a.seed,
    };
    let report: RfaLearnReport = if is_json(&a.target) {
        learn_rfa(&PtfTarget::new(read_poly(&a.target)?), &cfg)?
    } else {
        learn_rfa(&read_table(&a.target)?, &cfg)?
    };
    let passed = report.fit.factor_two_holds.unwrap_or(true);
    let out = Report {
        config: RunConfig::new("learn-rfa", a),
        passed,
        report,
    };
    Ok(Outcome {
        text: to_json(&out),
        out: a.output.out.clone(),
        verified: passed,
    })
}

#[derive(Serialize)]
struct NastyOut<'a> {
    config: RunConfig<'a, LearnNastyArgs>,
    selected: &'static str,
    selected_dist_exact: Option<f64>,
    trimmed_not_worse: Option<bool>,
    trimmed_within_bound: bool,
    report: NastyLearnReport,
}

fn learn_nasty_cmd(a: &LearnNastyArgs) -> Result<Outcome> {
    let poly = read_poly(&a.target)?;
    let adversary = match a.adversary {
        AdversaryArg::A => Adversary::MarginFlip,
        AdversaryArg::B => Adversary::CoordinateBias {
            coordinate: a.coordinate.as_deref().map(Subset::from_members).transpose()?,
        },
        AdversaryArg::C => Adversary::UniformReplace,
    };
    if a.coordinate.is_some() && !matches!(a.adversary, AdversaryArg::B) {
        bail!("--coordinate only applies to adversary b");
    }
    let cfg = NastyLearnConfig {
        d: a.d.unwrap_or(poly.d()),
        m: a.m,
        eps_corrupt: a.eps_corrupt,
        adversary,
        xi: a.xi.unwrap_or(a.eps_corrupt / 2.0),
        oracle: oracle_mode(a.oracle),
        delta: a.delta,
        seed: a.seed,
    };
    if let Some(path) = &a.samples_out {
        let set = corrupted_sample(&poly, &cfg)?;
        fs::write(path, write_samples_csv(set.examples())).with_context(|| format!("writing {}", path.display()))?;
        let sidecar = path.with_extension("json");
        fs::write(&sidecar, write_sidecar(&set)).with_context(|| format!("writing {}", sidecar.display()))?;
    }
    let report = learn_nasty(&poly, &cfg)?;
    let selected = if a.no_trim { &report.plain } else { &report.trimmed };
    let passed = [&report.plain, &report.trimmed]
        .iter()
        .all(|arm| arm.fit.factor_two_holds.unwrap_or(true));
    let out = NastyOut {
        config: RunConfig::new("learn-nasty", a),
        selected: selected.estimator,
        selected_dist_exact: selected.fit.dist_exact,
        trimmed_not_worse: report.trimmed_not_worse(),
        trimmed_within_bound: report.trimmed_within_bound(),
        report,
    };
    Ok(Outcome {
        text: to_json(&out),
        out: a.output.out.clone(),
        verified: passed,
    })
}

fn strategy(s: StrategyArg) -> FlipStrategy {
    match s {
        StrategyArg::RandomFlip => FlipStrategy::RandomFlip,
        StrategyArg::MarginFlip => FlipStrategy::MarginFlip,
        StrategyArg::RoundMollified => FlipStrategy::RoundMollified,
        StrategyArg::Negate => FlipStrategy::Negate,
    }
}

fn experiment(a: &ExperimentArgs) -> Result<Outcome> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = a.workers {
        if w == 0 {
            bail!("--workers must be at least 1");
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().context("building worker pool")?;
    let mut header = RunConfig::new("experiment", a).comment_lines();
    let text = pool.install(|| -> Result<String> {
        Ok(match a.kind {
            ExperimentKind::Robustness => {
                let cfg = RobustnessConfig {
                    n: a.n,
                    d: a.d,
                    trials: a.trials,
                    strategy: strategy(a.strategy),
                    rate: a.rate,
                    eta: a.eta,
                    seed: a.seed,
                };
                let records = robustness_experiment(&cfg)?;
                header.push(format!(
                    "summary: {}",
                    serde_json::to_string(&summarize(&records, a.far))?
                ));
                write_records_csv(&records, &header)
            }
            ExperimentKind::Rounding => {
                let cfg = RoundingConfig {
                    n: a.n,
                    d: a.d,
                    trials: a.trials,
                    seed: a.seed,
                };
                write_rounding_csv(&rounding_experiment(&cfg)?, &header)
            }
            ExperimentKind::Tails => {
                let cfg = TailsConfig {
                    n: a.n,
                    d: a.d,
                    trials: a.trials,
                    seed: a.seed,
                    thresholds: a.thresholds.clone(),
                    taus: a.taus.clone(),
                    max_regularity: a.max_regularity,
                };
                write_tails_csv(&tails_experiment(&cfg)?, &header)
            }
        })
    })?;
    Ok(ok(text, &a.output))
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let config = RunConfig::new("verify", a);
    let (passed, text) = match a.suite {
        Suite::ChowUniqueness => {
            let r = chow_uniqueness_bruteforce(a.n.unwrap_or(4))?;
            (
                r.passed,
                to_json(&Report {
                    config,
                    passed: r.passed,
                    report: r,
                }),
            )
        }
        Suite::Diophantine => {
            let r = diophantine_suite(a.trials, a.dim, a.gamma, a.seed)?;
            (
                r.passed,
                to_json(&Report {
                    config,
                    passed: r.passed,
                    report: r,
                }),
            )
        }
        Suite::Affine => {
            let r = affine_suite(a.trials, a.n.unwrap_or(12), a.max_dim, a.seed)?;
            (
                r.passed,
                to_json(&Report {
                    config,
                    passed: r.passed,
                    report: r,
                }),
            )
        }
        Suite::SmallP => {
            let r = small_p_suite(&SmallPSuiteConfig {
                trials: a.trials,
                n: a.n.unwrap_or(12),
                d: a.d,
                flip_rate: a.flip_rate,
                deltas: a.deltas.clone(),
                etas: a.etas.clone(),
                seed: a.seed,
            })?;
            (
                r.passed,
                to_json(&Report {
                    config,
                    passed: r.passed,
                    report: r,
                }),
            )
        }
    };
    Ok(Outcome {
        text,
        out: a.output.out.clone(),
        verified: passed,
    })
}

fn gen_fixtures(a: &GenFixturesArgs) -> Result<Outcome> {
    let written = fixtures::write_all(&a.dir)?;
    let mut text = String::new();
    for path in written {
        text.push_str(&path);
        text.push('\n');
    }
    Ok(Outcome {
        text,
        out: None,
        verified: true,
    })
}
