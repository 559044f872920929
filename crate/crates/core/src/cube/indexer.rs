use crate::cube::subset::{full_mask, Subset, MAX_VARS};
use crate::error::{Error, Result};

/// Upper bound on the number of low-degree basis elements we will materialize.
pub const MAX_BASIS: usize = 1 << 26;

/// Bijection between `{S ⊆ [n] : |S| ≤ d}` and `0..N`.
///
/// The order is graded colexicographic: every subset of size `k` precedes
/// every subset of size `k + 1`, and within a size class subsets are ordered
/// colexicographically on their sorted members. For bitmask-encoded subsets
/// the colex order within a class is plain numeric order, so successors come
/// from Gosper's hack and ranks from the combinatorial number system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetIndexer {
    n: usize,
    d: usize,
    masks: Vec<Subset>,
    /// `offsets[k]` is the index of the first subset of size `k`; length `d + 2`.
    offsets: Vec<usize>,
    /// `binom[a][b] = C(a, b)` for `a ≤ n`, `b ≤ d + 1`.
    binom: Vec<Vec<u64>>,
}

impl SubsetIndexer {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::Capacity(format!("n = {n} exceeds {MAX_VARS}")));
        }
        if d > n {
            return Err(Error::Parameter(format!("degree {d} exceeds n = {n}")));
        }
        let binom = binomial_table(n, d + 1);
        let mut offsets = Vec::with_capacity(d + 2);
        let mut total: u64 = 0;
        offsets.push(0);
        for k in 0..=d {
            total = total.saturating_add(binom[n][k]);
            if total > MAX_BASIS as u64 {
                return Err(Error::Capacity(format!(
                    "basis for n = {n}, d = {d} exceeds {MAX_BASIS} subsets"
                )));
            }
            offsets.push(total as usize);
        }
        let mut masks = Vec::with_capacity(total as usize);
        for k in 0..=d {
            push_size_class(&mut masks, n, k);
        }
        debug_assert_eq!(masks.len(), total as usize);
        Ok(SubsetIndexer {
            n,
            d,
            masks,
            offsets,
            binom,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of basis subsets `N = Σ_{k ≤ d} C(n, k)`.
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// All basis subsets in index order.
    pub fn subsets(&self) -> &[Subset] {
        &self.masks
    }

    /// Index range occupied by subsets of size exactly `k`.
    pub fn size_class(&self, k: usize) -> std::ops::Range<usize> {
        if k > self.d {
            return self.len()..self.len();
        }
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn index_of(&self, s: Subset) -> Result<usize> {
        let k = s.len();
        if k > self.d || !s.within(self.n) {
            return Err(Error::Index(format!(
                "subset {s} not in the degree-{} basis over n = {}",
                self.d, self.n
            )));
        }
        let mut rank = 0u64;
        for (j, member) in s.members().into_iter().enumerate() {
            rank += self.binom[member - 1][j + 1];
        }
        Ok(self.offsets[k] + rank as usize)
    }

    pub fn subset_of(&self, i: usize) -> Result<Subset> {
        self.masks
            .get(i)
            .copied()
            .ok_or_else(|| Error::Index(format!("basis index {i} outside 0..{}", self.len())))
    }

    /// Restricts a full `2^n` spectrum (indexed by subset mask) to the basis.
    pub fn gather(&self, spectrum: &[f64]) -> Vec<f64> {
        self.masks.iter().map(|s| spectrum[s.bits() as usize]).collect()
    }
}

fn push_size_class(out: &mut Vec<Subset>, n: usize, k: usize) {
    if k == 0 {
        out.push(Subset::EMPTY);
        return;
    }
    if k > n {
        return;
    }
    let mut v = full_mask(k);
    let last = full_mask(k) << (n - k);
    loop {
        out.push(Subset(v));
        if v == last {
            return;
        }
        let c = v & v.wrapping_neg();
        let r = v.wrapping_add(c);
        v = (((r ^ v) >> 2) / c) | r;
    }
}

/// `C(a, b)` saturating at `u64::MAX`.
pub fn binomial(a: usize, b: usize) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Basis size `Σ_{k ≤ d} C(n, k)` without building an indexer.
pub fn basis_len(n: usize, d: usize) -> u64 {
    (0..=d.min(n)).fold(0u64, |acc, k| acc.saturating_add(binomial(n, k)))
}

/// Position of `s` in the graded colex order, without building an indexer.
pub fn basis_index(n: usize, d: usize, s: Subset) -> Result<usize> {
    let k = s.len();
    if k > d || !s.within(n) {
        return Err(Error::Index(format!(
            "subset {s} not in the degree-{d} basis over n = {n}"
        )));
    }
    let offset = basis_len(n, k.saturating_sub(1)) * u64::from(k > 0);
    let rank: u64 = s
        .members()
        .into_iter()
        .enumerate()
        .map(|(j, m)| binomial(m - 1, j + 1))
        .sum();
    Ok((offset + rank) as usize)
}

fn binomial_table(n: usize, kmax: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; kmax + 1]; n + 1];
    for a in 0..=n {
        t[a][0] = 1;
        for b in 1..=kmax.min(a) {
            t[a][b] = t[a - 1][b - 1].saturating_add(if b < a { t[a - 1][b] } else { 0 });
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: &[usize]) -> Subset {
        Subset::from_members(m).unwrap()
    }

    #[test]
    fn empty_set_is_index_zero() {
        let ix = SubsetIndexer::new(5, 3).unwrap();
        assert_eq!(ix.index_of(Subset::EMPTY).unwrap(), 0);
        assert_eq!(ix.subset_of(0).unwrap(), Subset::EMPTY);
    }

    #[test]
    fn singletons_follow_the_empty_set() {
        let ix = SubsetIndexer::new(3, 2).unwrap();
        assert_eq!(ix.index_of(s(&[1])).unwrap(), 1);
        assert_eq!(ix.index_of(s(&[2])).unwrap(), 2);
        assert_eq!(ix.index_of(s(&[3])).unwrap(), 3);
        assert_eq!(ix.subset_of(ix.index_of(s(&[1, 3])).unwrap()).unwrap(), s(&[1, 3]));
    }

    #[test]
    fn pairs_in_colex_order() {
        let ix = SubsetIndexer::new(4, 2).unwrap();
        let pairs: Vec<Vec<usize>> = ix.size_class(2).map(|i| ix.subsets()[i].members()).collect();
        assert_eq!(
            pairs,
            vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn counts_match_binomial_sums() {
        for n in 0..=10 {
            for d in 0..=n {
                let ix = SubsetIndexer::new(n, d).unwrap();
                let expect: u64 = (0..=d).map(|k| binomial_table(n, n)[n][k]).sum();
                assert_eq!(ix.len() as u64, expect, "n={n} d={d}");
            }
        }
        assert_eq!(SubsetIndexer::new(24, 3).unwrap().len(), 1 + 24 + 276 + 2024);
        assert_eq!(SubsetIndexer::new(64, 2).unwrap().len(), 1 + 64 + 2016);
    }

    #[test]
    fn index_and_subset_are_inverse() {
        for (n, d) in [(6, 6), (9, 3), (12, 2), (64, 2)] {
            let ix = SubsetIndexer::new(n, d).unwrap();
            for i in 0..ix.len() {
                let sub = ix.subset_of(i).unwrap();
                assert!(sub.within(n) && sub.len() <= d);
                assert_eq!(ix.index_of(sub).unwrap(), i);
            }
        }
    }

    #[test]
    fn standalone_rank_agrees_with_table() {
        let ix = SubsetIndexer::new(11, 3).unwrap();
        for (i, &sub) in ix.subsets().iter().enumerate() {
            assert_eq!(basis_index(11, 3, sub).unwrap(), i);
        }
        assert_eq!(basis_len(11, 3), ix.len() as u64);
    }

    #[test]
    fn out_of_range_is_an_index_error() {
        let ix = SubsetIndexer::new(3, 1).unwrap();
        assert!(matches!(ix.index_of(s(&[1, 2])), Err(Error::Index(_))));
        assert!(matches!(ix.index_of(s(&[4])), Err(Error::Index(_))));
        assert!(matches!(ix.subset_of(4), Err(Error::Index(_))));
        assert!(SubsetIndexer::new(3, 4).is_err());
    }
}
