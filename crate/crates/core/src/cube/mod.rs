//! The Boolean cube `{-1,1}^n`, its Fourier basis, and degree-d Chow vectors.
//!
//! Points are addressed by *point code*: bit `i` of the code is 1 iff
//! `x_{i+1} = -1`, so code 0 is the all-ones point. Full spectra are indexed
//! by subset mask with the same bit layout; truncated (degree ≤ d) vectors use
//! the graded colex order of [`SubsetIndexer`].

pub mod format;
mod indexer;
mod subset;
mod wht;

use serde::{Deserialize, Serialize};

pub use indexer::{basis_index, basis_len, binomial, SubsetIndexer, MAX_BASIS};
pub use subset::{full_mask, point_code, point_from_code, Subset, MAX_VARS};
pub use wht::{dimension_of, fwht_in_place, inverse_wht, naive_spectrum, wht_values, MAX_TABLE_VARS};

use crate::error::{Error, Result};

fn check_table_dim(n: usize) -> Result<()> {
    if n > MAX_TABLE_VARS {
        return Err(Error::Capacity(format!("dimension {n} exceeds {MAX_TABLE_VARS}")));
    }
    Ok(())
}

/// Any real-valued function on the cube stored densely in point-code order.
pub trait CubeTable {
    fn n(&self) -> usize;

    fn value(&self, code: usize) -> f64;

    /// Normalized Fourier spectrum indexed by subset mask.
    fn spectrum(&self) -> Vec<f64>;

    fn len(&self) -> usize {
        1usize << self.n()
    }
}

/// A `{-1,+1}`-valued function on the cube, one bit per point.
///
/// A set bit means the value at that point is `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    /// The constant function `value` (which must be ±1).
    pub fn constant(n: usize, value: i8) -> Result<Self> {
        check_table_dim(n)?;
        let words = vec![0u64; (1usize << n).div_ceil(64)];
        let mut t = TruthTable { n, words };
        match value {
            1 => {}
            -1 => {
                for c in 0..t.len() {
                    t.set(c, -1);
                }
            }
            _ => return Err(Error::Parameter(format!("{value} is not ±1"))),
        }
        Ok(t)
    }

    /// Tabulates `f` at every point code. `f` returns `true` for `-1`.
    pub fn from_minus_fn(n: usize, mut is_minus: impl FnMut(u64) -> bool) -> Result<Self> {
        check_table_dim(n)?;
        let len = 1usize << n;
        let mut words = vec![0u64; len.div_ceil(64)];
        for c in 0..len {
            if is_minus(c as u64) {
                words[c / 64] |= 1u64 << (c % 64);
            }
        }
        Ok(TruthTable { n, words })
    }

    /// Tabulates a `±1`-valued function; any other value is an error.
    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> i8) -> Result<Self> {
        let mut bad = None;
        let t = Self::from_minus_fn(n, |c| match f(c) {
            1 => false,
            -1 => true,
            v => {
                bad.get_or_insert((c, v));
                false
            }
        })?;
        match bad {
            Some((c, v)) => Err(Error::Parameter(format!("value {v} at point {c} is not ±1"))),
            None => Ok(t),
        }
    }

    pub fn from_values(values: &[i8]) -> Result<Self> {
        let n = dimension_of(values.len())?;
        Self::from_fn(n, |c| values[c as usize])
    }

    /// Builds a table from packed words (bit set ⇔ value −1). Bits past `2^n` must be clear.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        check_table_dim(n)?;
        let len = 1usize << n;
        if words.len() != len.div_ceil(64) {
            return Err(Error::Shape(format!("{} words cannot hold 2^{n} points", words.len())));
        }
        if len < 64 && words[0] >> len != 0 {
            return Err(Error::Shape("bits set beyond 2^n points".into()));
        }
        Ok(TruthTable { n, words })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The dictator `x_i` (1-based).
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Index(format!("coordinate {i} outside 1..={n}")));
        }
        Self::from_minus_fn(n, |c| c >> (i - 1) & 1 == 1)
    }

    /// The parity `χ_S`.
    pub fn parity(n: usize, s: Subset) -> Result<Self> {
        if !s.within(n) {
            return Err(Error::Index(format!("{s} not within [{n}]")));
        }
        Self::from_minus_fn(n, |c| s.chi(c) < 0)
    }

    /// Majority of `n` bits (`n` odd).
    pub fn majority(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::Parameter("majority needs an odd number of bits".into()));
        }
        Self::from_minus_fn(n, |c| c.count_ones() as usize > n / 2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn is_minus(&self, code: usize) -> bool {
        self.words[code / 64] >> (code % 64) & 1 == 1
    }

    #[inline]
    pub fn get(&self, code: usize) -> i8 {
        if self.is_minus(code) {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, code: usize, value: i8) {
        let bit = 1u64 << (code % 64);
        if value < 0 {
            self.words[code / 64] |= bit;
        } else {
            self.words[code / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, code: usize) {
        self.words[code / 64] ^= 1u64 << (code % 64);
    }

    pub fn negated(&self) -> Self {
        let mut t = self.clone();
        for c in 0..self.len() {
            t.flip(c);
        }
        t
    }

    /// Values as `±1` in point-code order.
    pub fn values(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len()).map(|c| self.get(c))
    }

    /// Scaled integer spectrum `Σ_x f(x) χ_S(x)` (no `2^{-n}` factor).
    pub fn integer_spectrum(&self) -> Vec<i64> {
        let mut buf: Vec<i64> = self.values().map(i64::from).collect();
        fwht_in_place(&mut buf);
        buf
    }

    pub fn to_bounded(&self) -> BoundedTable {
        BoundedTable {
            n: self.n,
            values: self.values().map(f64::from).collect(),
        }
    }
}

impl CubeTable for TruthTable {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, code: usize) -> f64 {
        f64::from(self.get(code))
    }

    /// Computed in exact integer arithmetic and divided by `2^n` once.
    fn spectrum(&self) -> Vec<f64> {
        let scale = (-(self.n as f64)).exp2();
        self.integer_spectrum().into_iter().map(|v| v as f64 * scale).collect()
    }
}

/// A `[-1,1]`-valued function on the cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedTable {
    n: usize,
    values: Vec<f64>,
}

impl BoundedTable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = dimension_of(values.len())?;
        if let Some((c, v)) = values.iter().enumerate().find(|(_, v)| !(-1.0..=1.0).contains(*v)) {
            return Err(Error::Parameter(format!("value {v} at point {c} outside [-1,1]")));
        }
        Ok(BoundedTable { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> f64) -> Result<Self> {
        check_table_dim(n)?;
        Self::new((0..1u64 << n).map(&mut f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, code: usize) -> f64 {
        self.values[code]
    }
}

impl CubeTable for BoundedTable {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, code: usize) -> f64 {
        self.values[code]
    }

    fn spectrum(&self) -> Vec<f64> {
        wht_values(&self.values).expect("bounded tables have power-of-two length")
    }
}

/// Full normalized spectrum of a table, indexed by subset mask.
pub fn wht<T: CubeTable + ?Sized>(table: &T) -> Vec<f64> {
    table.spectrum()
}

/// The coefficients `f̂(S)` for all `|S| ≤ d`, in graded colex order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChowVector {
    n: usize,
    d: usize,
    coeffs: Vec<f64>,
}

impl ChowVector {
    /// Tolerance on `|coeff| ≤ 1` for vectors built from floating-point sums.
    pub const BOUND_SLACK: f64 = 1e-12;

    pub fn new(n: usize, d: usize, coeffs: Vec<f64>) -> Result<Self> {
        if d > n {
            return Err(Error::Parameter(format!("degree {d} exceeds n = {n}")));
        }
        let expect = basis_len(n, d);
        if coeffs.len() as u64 != expect {
            return Err(Error::Shape(format!(
                "{} coefficients given, basis for n = {n}, d = {d} has {expect}",
                coeffs.len()
            )));
        }
        if let Some((i, c)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || c.abs() > 1.0 + Self::BOUND_SLACK)
        {
            return Err(Error::Parameter(format!("coefficient {i} = {c} outside [-1,1]")));
        }
        Ok(ChowVector { n, d, coeffs })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, vec![0.0; basis_len(n, d) as usize])
    }

    /// Truncates a full spectrum to the indexer's basis.
    pub fn from_spectrum(indexer: &SubsetIndexer, spectrum: &[f64]) -> Result<Self> {
        if spectrum.len() != 1usize << indexer.n() {
            return Err(Error::Shape(format!(
                "spectrum of length {} for n = {}",
                spectrum.len(),
                indexer.n()
            )));
        }
        Self::new(indexer.n(), indexer.d(), indexer.gather(spectrum))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, s: Subset) -> Result<f64> {
        Ok(self.coeffs[basis_index(self.n, self.d, s)?])
    }

    pub fn sum_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sum_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn same_shape(&self, other: &ChowVector) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::Shape(format!(
                "Chow vectors over (n, d) = ({}, {}) and ({}, {})",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }

    /// Coordinatewise `self - other`, unconstrained.
    pub fn difference(&self, other: &ChowVector) -> Result<Vec<f64>> {
        self.same_shape(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }
}

/// Degree-`d` Chow vector of a table.
pub fn chow_vector<T: CubeTable + ?Sized>(table: &T, d: usize) -> Result<ChowVector> {
    let indexer = SubsetIndexer::new(table.n(), d)?;
    ChowVector::from_spectrum(&indexer, &table.spectrum())
}

/// Euclidean distance between two Chow vectors of the same shape.
pub fn chow_distance(a: &ChowVector, b: &ChowVector) -> Result<f64> {
    Ok(a.difference(b)?.iter().map(|x| x * x).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: &[usize]) -> Subset {
        Subset::from_members(m).unwrap()
    }

    /// Majority of three bits, written out point by point.
    fn maj3() -> TruthTable {
        let vals: Vec<i8> = (0..8).map(|c: u32| if c.count_ones() >= 2 { -1 } else { 1 }).collect();
        TruthTable::from_values(&vals).unwrap()
    }

    #[test]
    fn constant_has_only_the_empty_coefficient() {
        let spec = TruthTable::constant(3, 1).unwrap().spectrum();
        assert_eq!(spec[0], 1.0);
        assert!(spec[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn dictator_is_a_single_parity() {
        let spec = TruthTable::dictator(2, 1).unwrap().spectrum();
        assert_eq!(spec, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn maj3_spectrum() {
        // Naive sum over the 8 points: 1/2 on singletons, -1/2 on {1,2,3}.
        let naive = naive_spectrum(&maj3().to_bounded().values());
        let fast = maj3().spectrum();
        assert_eq!(fast, naive);
        assert_eq!(fast, vec![0.0, 0.5, 0.5, 0.0, 0.5, 0.0, 0.0, -0.5]);
        assert_eq!(TruthTable::majority(3).unwrap(), maj3());
    }

    #[test]
    fn maj3_degree_one_chow() {
        let chow = chow_vector(&maj3(), 1).unwrap();
        assert_eq!(chow.coeffs(), &[0.0, 0.5, 0.5, 0.5]);
        assert_eq!(chow.get(s(&[2])).unwrap(), 0.5);
    }

    #[test]
    fn full_degree_chow_satisfies_parseval() {
        let t = TruthTable::from_minus_fn(6, |c| (c * 37 + 11) % 5 < 2).unwrap();
        let chow = chow_vector(&t, 6).unwrap();
        assert!((chow.sum_sq() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn degree_two_parity_has_no_low_coefficients() {
        let t = TruthTable::parity(2, s(&[1, 2])).unwrap();
        let chow = chow_vector(&t, 1).unwrap();
        assert!(chow.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn chow_distance_examples() {
        let f = chow_vector(&TruthTable::dictator(3, 1).unwrap(), 1).unwrap();
        let g = chow_vector(&TruthTable::dictator(3, 1).unwrap().negated(), 1).unwrap();
        assert_eq!(chow_distance(&f, &f).unwrap(), 0.0);
        assert_eq!(chow_distance(&f, &g).unwrap(), 2.0);

        // One flipped point moves every one of the 8 coefficients by 2/8.
        let a = maj3();
        let mut b = a.clone();
        b.flip(5);
        let dist = chow_distance(&chow_vector(&a, 3).unwrap(), &chow_vector(&b, 3).unwrap()).unwrap();
        assert!((dist - 2.0 / 8.0 * 8f64.sqrt()).abs() < 1e-15);
        assert!((dist - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn chow_distance_rejects_mismatched_shapes() {
        let a = ChowVector::zeros(3, 1).unwrap();
        let b = ChowVector::zeros(3, 2).unwrap();
        assert!(matches!(chow_distance(&a, &b), Err(Error::Shape(_))));
    }

    #[test]
    fn tables_enforce_their_invariants() {
        assert!(matches!(TruthTable::constant(25, 1), Err(Error::Capacity(_))));
        assert!(TruthTable::from_values(&[1, 0]).is_err());
        assert!(BoundedTable::new(vec![0.5, 1.5]).is_err());
        assert!(ChowVector::new(2, 1, vec![0.0, 2.0, 0.0]).is_err());
        assert!(ChowVector::new(2, 1, vec![0.0, 0.0]).is_err());
        let t = TruthTable::constant(7, -1).unwrap();
        assert!(t.values().all(|v| v == -1));
        assert_eq!(TruthTable::from_words(7, t.words().to_vec()).unwrap(), t);
    }
}
