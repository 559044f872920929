use serde::{Deserialize, Serialize};

use super::{check_unit_interval, hoeffding_samples, uniform_point, LabelOracle};
use crate::cube::{ChowVector, Subset, SubsetIndexer};
use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, Rng};

/// One d-RFA example: the requested coordinates `J`, their values, and the label.
///
/// Only the coordinates in `J` are ever stored; the rest of the drawn point is
/// discarded before the example is constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RfaExample {
    focus: Subset,
    revealed: u64,
    label: i8,
}

impl RfaExample {
    pub fn focus(&self) -> Subset {
        self.focus
    }

    pub fn label(&self) -> i8 {
        self.label
    }

    /// `x_i` for a revealed coordinate; anything outside `J` is a protocol error.
    pub fn value(&self, i: usize) -> Result<i8> {
        if !self.focus.contains(i) {
            return Err(Error::Protocol(format!(
                "coordinate {i} was not requested (J = {})",
                self.focus
            )));
        }
        Ok(if self.revealed >> (i - 1) & 1 == 1 { -1 } else { 1 })
    }

    /// `χ_T(x)` for any `T ⊆ J`.
    pub fn chi(&self, t: Subset) -> Result<i8> {
        if t.bits() & !self.focus.bits() != 0 {
            return Err(Error::Protocol(format!(
                "{t} is not inside the revealed set {}",
                self.focus
            )));
        }
        Ok(t.chi(self.revealed))
    }
}

/// A d-RFA example oracle around a hidden target.
pub struct RfaOracle<'a, T: LabelOracle + ?Sized> {
    target: &'a T,
    max_focus: usize,
    draws: u64,
}

impl<'a, T: LabelOracle + ?Sized> RfaOracle<'a, T> {
    pub fn new(target: &'a T, max_focus: usize) -> Self {
        RfaOracle {
            target,
            max_focus,
            draws: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    pub fn max_focus(&self) -> usize {
        self.max_focus
    }

    /// Examples handed out so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn draw(&mut self, focus: Subset, rng: &mut Rng) -> Result<RfaExample> {
        let example = rfa_sample(self.target, self.max_focus, focus, rng)?;
        self.draws += 1;
        Ok(example)
    }
}

/// Draws a fresh uniform point and reveals only `x_J` and the label.
pub fn rfa_sample<T: LabelOracle + ?Sized>(
    target: &T,
    max_focus: usize,
    focus: Subset,
    rng: &mut Rng,
) -> Result<RfaExample> {
    if focus.len() > max_focus {
        return Err(Error::Protocol(format!(
            "requested {} coordinates, the model allows at most {max_focus}",
            focus.len()
        )));
    }
    if !focus.within(target.n()) {
        return Err(Error::Protocol(format!(
            "{focus} names coordinates outside [{}]",
            target.n()
        )));
    }
    let x = uniform_point(target.n(), rng);
    Ok(RfaExample {
        focus,
        revealed: x & focus.bits(),
        label: target.label(x),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RfaMode {
    /// Always sample.
    Sampled,
    /// Use the exact Chow vector when the per-subset budget reaches `2^n`
    /// examples and the target can provide it.
    ExactWhenCheaper,
}

#[derive(Clone, Debug, Serialize)]
pub struct RfaEstimate {
    pub chow: ChowVector,
    pub samples_per_subset: usize,
    pub total_samples: u64,
    pub used_exact: bool,
}

/// Estimates every degree-≤d Chow coefficient, querying `J = S` for subset `S`
/// in basis order and averaging `y·χ_S(x_S)` over a Hoeffding-sized batch.
pub fn estimate_chow_rfa<T: LabelOracle + ?Sized>(
    oracle: &mut RfaOracle<'_, T>,
    d: usize,
    eps: f64,
    delta: f64,
    seed: u64,
    mode: RfaMode,
) -> Result<RfaEstimate> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("delta", delta)?;
    if d > oracle.max_focus() {
        return Err(Error::Protocol(format!(
            "degree {d} needs focus sets larger than {}",
            oracle.max_focus()
        )));
    }
    let n = oracle.n();
    let indexer = SubsetIndexer::new(n, d)?;
    let per_subset = hoeffding_samples(indexer.len(), eps, delta);

    let cheaper = n < 64 && per_subset as u128 >= 1u128 << n;
    if mode == RfaMode::ExactWhenCheaper && cheaper {
        if let Some(chow) = oracle.target.exact_chow(d) {
            return Ok(RfaEstimate {
                chow,
                samples_per_subset: 0,
                total_samples: 0,
                used_exact: true,
            });
        }
    }

    let mut rng = rng_from_seed(seed);
    let mut coeffs = Vec::with_capacity(indexer.len());
    for &s in indexer.subsets() {
        let mut acc = 0i64;
        for _ in 0..per_subset {
            let ex = oracle.draw(s, &mut rng)?;
            acc += i64::from(ex.label() * ex.chi(s)?);
        }
        coeffs.push(acc as f64 / per_subset as f64);
    }
    Ok(RfaEstimate {
        chow: ChowVector::new(n, d, coeffs)?,
        samples_per_subset: per_subset,
        total_samples: per_subset as u64 * indexer.len() as u64,
        used_exact: false,
    })
}
