//! Sparse multilinear polynomials over `{-1,1}^n` and the quantities the
//! analysis needs from them: evaluation, threshold/bounded evaluation, norms,
//! influences, regularity, rank, and distance between tables.

pub mod format;
mod pbf;

use std::collections::BTreeMap;

pub use pbf::PbfHypothesis;

use crate::cube::{fwht_in_place, BoundedTable, CubeTable, Subset, TruthTable, MAX_TABLE_VARS, MAX_VARS};
use crate::error::{Error, Result};

/// Guard on the number of top-degree terms the exact rank search accepts.
pub const EXACT_RANK_MAX_TERMS: usize = 20;

/// Relative slack in the regularity comparison, absorbing rounding in the
/// influence sums.
pub const REGULARITY_SLACK: f64 = 1e-12;

/// `sign(z)`, with `sign(0) = +1`.
#[inline]
pub fn sign(z: f64) -> i8 {
    if z >= 0.0 {
        1
    } else {
        -1
    }
}

/// Projection of a real onto `[-1,1]`.
#[inline]
pub fn p1(a: f64) -> f64 {
    if a.abs() <= 1.0 {
        a
    } else {
        a.signum()
    }
}

/// `p(x) = Σ_S p_S χ_S(x)` with at most `d`-element supports.
///
/// Zero coefficients are never stored, so the key set is the support.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly {
    n: usize,
    d: usize,
    terms: BTreeMap<Subset, f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    Greedy,
}

/// Result of [`MultilinearPoly::materialize`].
#[derive(Clone, Debug, PartialEq)]
pub enum Table {
    Boolean(TruthTable),
    Bounded(BoundedTable),
}

impl MultilinearPoly {
    pub fn zero(n: usize, d: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::Capacity(format!("n = {n} exceeds {MAX_VARS}")));
        }
        if d > n {
            return Err(Error::Parameter(format!("degree {d} exceeds n = {n}")));
        }
        Ok(MultilinearPoly {
            n,
            d,
            terms: BTreeMap::new(),
        })
    }

    /// Sums the given terms; repeated subsets accumulate.
    pub fn from_terms(n: usize, d: usize, terms: impl IntoIterator<Item = (Subset, f64)>) -> Result<Self> {
        let mut p = Self::zero(n, d)?;
        for (s, c) in terms {
            p.add_term(s, c)?;
        }
        Ok(p)
    }

    /// Polynomial whose coefficient on `subsets[i]` is `coeffs[i]`.
    pub fn from_dense(n: usize, d: usize, subsets: &[Subset], coeffs: &[f64]) -> Result<Self> {
        if subsets.len() != coeffs.len() {
            return Err(Error::Shape(format!(
                "{} subsets and {} coefficients",
                subsets.len(),
                coeffs.len()
            )));
        }
        Self::from_terms(n, d, subsets.iter().copied().zip(coeffs.iter().copied()))
    }

    fn check_subset(&self, s: Subset) -> Result<()> {
        if !s.within(self.n) {
            return Err(Error::Index(format!("{s} not within [{}]", self.n)));
        }
        if s.len() > self.d {
            return Err(Error::Index(format!("{s} has more than d = {} members", self.d)));
        }
        Ok(())
    }

    pub fn add_term(&mut self, s: Subset, c: f64) -> Result<()> {
        self.check_subset(s)?;
        if !c.is_finite() {
            return Err(Error::Parameter(format!("coefficient {c} on {s}")));
        }
        let entry = self.terms.entry(s).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&s);
        }
        Ok(())
    }

    pub fn set_term(&mut self, s: Subset, c: f64) -> Result<()> {
        self.check_subset(s)?;
        if !c.is_finite() {
            return Err(Error::Parameter(format!("coefficient {c} on {s}")));
        }
        if c == 0.0 {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, c);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeff(&self, s: Subset) -> f64 {
        self.terms.get(&s).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.terms.iter().map(|(s, c)| (*s, *c))
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_terms(self.n, self.d, self.terms().map(|(s, c)| (s, c * factor)))
    }

    pub fn add(&self, other: &MultilinearPoly) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Shape(format!(
                "adding polynomials over {} and {} variables",
                self.n, other.n
            )));
        }
        let mut out = Self::zero(self.n, self.d.max(other.d))?;
        for (s, c) in self.terms().chain(other.terms()) {
            out.add_term(s, c)?;
        }
        Ok(out)
    }

    /// `p / ||p||₂`; the zero polynomial is an error.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return Err(Error::Degenerate("cannot normalize the zero polynomial".into()));
        }
        self.scaled(1.0 / norm)
    }

    /// `p` at a point code.
    pub fn eval_code(&self, code: u64) -> f64 {
        self.terms
            .iter()
            .map(|(s, c)| if s.chi(code) > 0 { *c } else { -*c })
            .sum()
    }

    /// `p` at an explicit `±1` point of length `n`.
    pub fn eval(&self, x: &[i8]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "point has {} coordinates, polynomial has {}",
                x.len(),
                self.n
            )));
        }
        Ok(self.eval_code(crate::cube::point_code(x)?))
    }

    pub fn ptf_eval_code(&self, code: u64) -> i8 {
        sign(self.eval_code(code))
    }

    pub fn ptf_eval(&self, x: &[i8]) -> Result<i8> {
        self.eval(x).map(sign)
    }

    /// `p` at every point code, via one inverse transform.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.n > MAX_TABLE_VARS {
            return Err(Error::Capacity(format!(
                "cannot tabulate {} variables (limit {MAX_TABLE_VARS})",
                self.n
            )));
        }
        let mut buf = vec![0.0f64; 1usize << self.n];
        for (s, c) in self.terms() {
            buf[s.bits() as usize] = c;
        }
        fwht_in_place(&mut buf);
        Ok(buf)
    }

    pub fn materialize_sign(&self) -> Result<TruthTable> {
        let vals = self.values()?;
        TruthTable::from_minus_fn(self.n, |c| vals[c as usize] < 0.0)
    }

    pub fn materialize_bounded(&self) -> Result<BoundedTable> {
        BoundedTable::new(self.values()?.into_iter().map(p1).collect())
    }

    /// Tabulates `sign(p)` when `as_sign`, otherwise `P1(p)`.
    pub fn materialize(&self, as_sign: bool) -> Result<Table> {
        if as_sign {
            self.materialize_sign().map(Table::Boolean)
        } else {
            self.materialize_bounded().map(Table::Bounded)
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `Inf_i(p) = Σ_{S ∋ i} p_S²` for a 1-based coordinate.
    pub fn influence(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.n {
            return Err(Error::Index(format!("coordinate {i} outside 1..={}", self.n)));
        }
        Ok(self.terms().filter(|(s, _)| s.contains(i)).map(|(_, c)| c * c).sum())
    }

    pub fn influences(&self) -> Vec<f64> {
        let mut inf = vec![0.0; self.n];
        for (s, c) in self.terms() {
            for m in s.members() {
                inf[m - 1] += c * c;
            }
        }
        inf
    }

    pub fn total_influence(&self) -> f64 {
        self.terms().map(|(s, c)| s.len() as f64 * c * c).sum()
    }

    /// `max_i Inf_i(p) / Inf(p)`, the smallest `τ` for which `p` is `τ`-regular.
    pub fn regularity(&self) -> Result<f64> {
        let total = self.total_influence();
        if total == 0.0 {
            return Err(Error::Degenerate(
                "regularity is undefined for a polynomial with zero total influence".into(),
            ));
        }
        let max = self.influences().into_iter().fold(0.0f64, f64::max);
        Ok(max / total)
    }

    pub fn is_tau_regular(&self, tau: f64) -> Result<bool> {
        let total = self.total_influence();
        if total == 0.0 {
            return Err(Error::Degenerate(
                "regularity is undefined for a polynomial with zero total influence".into(),
            ));
        }
        let max = self.influences().into_iter().fold(0.0f64, f64::max);
        Ok(max <= tau * total * (1.0 + REGULARITY_SLACK))
    }

    /// Supports of the nonzero terms of size exactly `d`, in mask order.
    pub fn top_degree_supports(&self) -> Vec<Subset> {
        self.terms
            .keys()
            .copied()
            .filter(|s| s.len() == self.d && self.d > 0)
            .collect()
    }

    /// A maximal pairwise-disjoint family of top-degree supports, picked
    /// first-fit in mask order.
    pub fn greedy_disjoint_family(&self) -> Vec<Subset> {
        let mut used = Subset::EMPTY;
        let mut family = Vec::new();
        for s in self.top_degree_supports() {
            if !s.intersects(used) {
                used = used.union(s);
                family.push(s);
            }
        }
        family
    }

    /// Number of pairwise-disjoint size-`d` supports with nonzero coefficient.
    ///
    /// `Exact` is the maximum (set packing, guarded at
    /// [`EXACT_RANK_MAX_TERMS`] terms); `Greedy` is the size of one maximal
    /// family, between `rank / d` and `rank`.
    pub fn rank(&self, mode: RankMode) -> Result<usize> {
        match mode {
            RankMode::Greedy => Ok(self.greedy_disjoint_family().len()),
            RankMode::Exact => {
                let supports = self.top_degree_supports();
                if supports.len() > EXACT_RANK_MAX_TERMS {
                    return Err(Error::Capacity(format!(
                        "exact rank over {} top-degree terms (limit {EXACT_RANK_MAX_TERMS}); use greedy mode",
                        supports.len()
                    )));
                }
                Ok(max_packing(&supports))
            }
        }
    }

    /// Coordinates covering every nonzero size-`d` term: the union of the
    /// greedy disjoint family.
    pub fn hitting_set(&self) -> Subset {
        self.greedy_disjoint_family()
            .into_iter()
            .fold(Subset::EMPTY, Subset::union)
    }
}

fn max_packing(sets: &[Subset]) -> usize {
    fn go(sets: &[Subset], used: u64, count: usize, best: &mut usize) {
        if count + sets.len() <= *best {
            return;
        }
        match sets.split_first() {
            None => *best = (*best).max(count),
            Some((first, rest)) => {
                if first.bits() & used == 0 {
                    go(rest, used | first.bits(), count + 1, best);
                }
                go(rest, used, count, best);
            }
        }
    }
    let mut best = 0;
    go(sets, 0, 0, &mut best);
    best
}

/// `E_x |f(x) − g(x)|` over the whole cube.
pub fn dist<A: CubeTable + ?Sized, B: CubeTable + ?Sized>(f: &A, g: &B) -> Result<f64> {
    if f.n() != g.n() {
        return Err(Error::Shape(format!("tables over {} and {} variables", f.n(), g.n())));
    }
    let total: f64 = (0..f.len()).map(|c| (f.value(c) - g.value(c)).abs()).sum();
    Ok(total / f.len() as f64)
}

/// Exact `2·Pr[f ≠ g]` for Boolean tables, computed on packed words.
pub fn boolean_dist(f: &TruthTable, g: &TruthTable) -> Result<f64> {
    if f.n() != g.n() {
        return Err(Error::Shape(format!("tables over {} and {} variables", f.n(), g.n())));
    }
    let differ: u64 = f
        .words()
        .iter()
        .zip(g.words())
        .map(|(a, b)| u64::from((a ^ b).count_ones()))
        .sum();
    Ok(2.0 * differ as f64 / f.len() as f64)
}

/// Point codes where two Boolean tables disagree.
pub fn disagreement(f: &TruthTable, g: &TruthTable) -> Result<Vec<u64>> {
    if f.n() != g.n() {
        return Err(Error::Shape(format!("tables over {} and {} variables", f.n(), g.n())));
    }
    Ok((0..f.len())
        .filter(|&c| f.is_minus(c) != g.is_minus(c))
        .map(|c| c as u64)
        .collect())
}
