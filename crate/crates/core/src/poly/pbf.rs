use serde::{Deserialize, Serialize};

use super::{p1, MultilinearPoly};
use crate::cube::{fwht_in_place, BoundedTable, Subset, SubsetIndexer, TruthTable, MAX_TABLE_VARS};
use crate::error::{Error, Result};

/// `g(x) = P1(λ · Σ_S H_S χ_S(x))` with integer `H` in graded colex order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PbfHypothesis {
    n: usize,
    d: usize,
    lambda: f64,
    h: Vec<i64>,
}

impl PbfHypothesis {
    pub fn new(n: usize, d: usize, lambda: f64, h: Vec<i64>) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!("scale {lambda} must be positive")));
        }
        let expect = crate::cube::basis_len(n, d);
        if d > n || h.len() as u64 != expect {
            return Err(Error::Shape(format!(
                "{} weights for a basis of {expect} subsets (n = {n}, d = {d})",
                h.len()
            )));
        }
        Ok(PbfHypothesis { n, d, lambda, h })
    }

    pub fn zero(n: usize, d: usize, lambda: f64) -> Result<Self> {
        Self::new(n, d, lambda, vec![0; crate::cube::basis_len(n, d) as usize])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn weights(&self) -> &[i64] {
        &self.h
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [i64] {
        &mut self.h
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.n, self.d, lambda, self.h.clone())
    }

    fn check_indexer(&self, indexer: &SubsetIndexer) -> Result<()> {
        if indexer.n() != self.n || indexer.d() != self.d {
            return Err(Error::Shape(format!(
                "indexer over (n, d) = ({}, {}) for a hypothesis over ({}, {})",
                indexer.n(),
                indexer.d(),
                self.n,
                self.d
            )));
        }
        Ok(())
    }

    /// Integer form `Σ_S H_S χ_S(x)` at a point code.
    pub fn integer_form_at(&self, indexer: &SubsetIndexer, code: u64) -> Result<i64> {
        self.check_indexer(indexer)?;
        Ok(integer_form(indexer.subsets(), &self.h, code))
    }

    /// `g(x)` at a point code.
    pub fn eval_with(&self, indexer: &SubsetIndexer, code: u64) -> Result<f64> {
        Ok(p1(self.lambda * self.integer_form_at(indexer, code)? as f64))
    }

    /// `g(x)` at a point code; builds the basis on every call.
    pub fn eval(&self, code: u64) -> Result<f64> {
        self.eval_with(&SubsetIndexer::new(self.n, self.d)?, code)
    }

    /// `Σ_S H_S χ_S(x)` at every point code, exactly.
    pub fn integer_values(&self, indexer: &SubsetIndexer) -> Result<Vec<i64>> {
        self.check_indexer(indexer)?;
        if self.n > MAX_TABLE_VARS {
            return Err(Error::Capacity(format!(
                "cannot tabulate {} variables (limit {MAX_TABLE_VARS})",
                self.n
            )));
        }
        let mut buf = vec![0i64; 1usize << self.n];
        for (s, &h) in indexer.subsets().iter().zip(&self.h) {
            buf[s.bits() as usize] = h;
        }
        fwht_in_place(&mut buf);
        Ok(buf)
    }

    /// The bounded function `g` as a table.
    pub fn materialize(&self, indexer: &SubsetIndexer) -> Result<BoundedTable> {
        let lambda = self.lambda;
        BoundedTable::new(
            self.integer_values(indexer)?
                .into_iter()
                .map(|v| p1(lambda * v as f64))
                .collect(),
        )
    }

    /// `sign(Σ_S H_S χ_S)` as a table; independent of `λ`.
    pub fn sign_table(&self, indexer: &SubsetIndexer) -> Result<TruthTable> {
        let vals = self.integer_values(indexer)?;
        TruthTable::from_minus_fn(self.n, |c| vals[c as usize] < 0)
    }

    /// The integer polynomial `Σ_S H_S χ_S`.
    pub fn integer_poly(&self, indexer: &SubsetIndexer) -> Result<MultilinearPoly> {
        self.check_indexer(indexer)?;
        MultilinearPoly::from_terms(
            self.n,
            self.d,
            indexer
                .subsets()
                .iter()
                .zip(&self.h)
                .filter(|(_, &h)| h != 0)
                .map(|(s, &h)| (*s, h as f64)),
        )
    }

    /// `Σ_S H_S²`.
    pub fn sum_sq(&self) -> u128 {
        self.h.iter().map(|&h| (h as i128 * h as i128) as u128).sum()
    }
}

#[inline]
pub(crate) fn integer_form(subsets: &[Subset], h: &[i64], code: u64) -> i64 {
    subsets
        .iter()
        .zip(h)
        .filter(|(_, &w)| w != 0)
        .map(|(s, &w)| if s.chi(code) > 0 { w } else { -w })
        .sum()
}
