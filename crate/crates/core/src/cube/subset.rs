use std::fmt;

use crate::error::{Error, Result};

/// Largest number of variables for which a [`Subset`] can name coordinates.
pub const MAX_VARS: usize = 64;

/// A subset of the coordinates `[n]`, stored as a bitmask.
///
/// Bit `i` is set iff coordinate `i + 1` is a member. Displayed and serialized
/// with 1-based members.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// Builds a subset from 1-based member indices. Duplicates are an error.
    pub fn from_members(members: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &m in members {
            if m == 0 || m > MAX_VARS {
                return Err(Error::Index(format!("coordinate {m} outside 1..={MAX_VARS}")));
            }
            let bit = 1u64 << (m - 1);
            if mask & bit != 0 {
                return Err(Error::Index(format!("coordinate {m} listed twice")));
            }
            mask |= bit;
        }
        Ok(Subset(mask))
    }

    /// Singleton `{i}` for a 1-based coordinate.
    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_VARS).contains(&i));
        Subset(1u64 << (i - 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// 1-based coordinate membership.
    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_VARS).contains(&i) && self.0 & (1u64 << (i - 1)) != 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    /// Sorted 1-based members.
    pub fn members(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        out
    }

    /// True iff every member lies in `1..=n`.
    pub fn within(self, n: usize) -> bool {
        self.0 & !full_mask(n) == 0
    }

    /// Parity character `chi_S` at a point code: `+1` or `-1`.
    #[inline]
    pub fn chi(self, point: u64) -> i8 {
        if (self.0 & point).count_ones() & 1 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

impl serde::Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members())
    }
}

impl<'de> serde::Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        Subset::from_members(&members).map_err(serde::de::Error::custom)
    }
}

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Point code of `x ∈ {-1,1}^n`: bit `i` is 1 iff `x_{i+1} = -1`.
pub fn point_code(x: &[i8]) -> Result<u64> {
    if x.len() > MAX_VARS {
        return Err(Error::Capacity(format!("points have at most {MAX_VARS} coordinates")));
    }
    let mut code = 0u64;
    for (i, &v) in x.iter().enumerate() {
        match v {
            1 => {}
            -1 => code |= 1u64 << i,
            other => {
                return Err(Error::Parameter(format!(
                    "coordinate {} has value {other}, expected ±1",
                    i + 1
                )))
            }
        }
    }
    Ok(code)
}

/// Inverse of [`point_code`].
pub fn point_from_code(code: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if code >> i & 1 == 1 { -1 } else { 1 }).collect()
}
