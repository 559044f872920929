use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest arity the exhaustive scan accepts (2^16 functions at n = 4).
pub const MAX_UNIQUENESS_VARS: usize = 4;
/// Coordinate range of the LTF weight enumeration.
pub const LTF_WEIGHT_BOUND: i32 = 32;

/// A Boolean function on at most four variables: bit `c` is set iff `f(c) = −1`.
pub type SmallFn = u16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    /// Hex truth table of the LTF, in the `0x` table format.
    pub ltf: String,
    pub other: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub functions_scanned: u64,
    pub ltf_count: u64,
    pub distinct_buckets: u64,
    /// Buckets holding more than one function (all non-LTF when the scan passes).
    pub shared_buckets: u64,
    pub ltf_collisions: Vec<Collision>,
    pub passed: bool,
}

/// Mask of points where `x_{i+1} = −1`.
fn coordinate_mask(n: usize, i: usize) -> u16 {
    (0..1u32 << n)
        .filter(|c| (c >> i) & 1 == 1)
        .fold(0u16, |m, c| m | 1 << c)
}

/// Degree-1 Chow parameters scaled by `2^n`: `(Σ f, Σ f·x_1, …, Σ f·x_n)`.
pub fn degree1_key(n: usize, f: SmallFn) -> [i32; MAX_UNIQUENESS_VARS + 1] {
    let size = 1i32 << n;
    let ones = f.count_ones() as i32;
    let mut key = [0; MAX_UNIQUENESS_VARS + 1];
    key[0] = size - 2 * ones;
    for i in 0..n {
        let a = coordinate_mask(n, i);
        key[i + 1] = size - 2 * ones - 2 * a.count_ones() as i32 + 4 * (f & a).count_ones() as i32;
    }
    key
}

/// Truth table of a small function in the hex table format.
pub fn small_fn_hex(n: usize, f: SmallFn) -> String {
    let digits = ((1usize << n) / 4).max(1);
    format!("0x{:0digits$x}", f)
}

/// Every LTF on `n ≤ 4` variables, as a bitmap over the `2^{2^n}` functions.
///
/// Thresholds range over half-integers with `|θ| ≤ 32n`; each weight vector
/// contributes one function per distinct level of `w·x` plus the constant.
pub fn ltf_bitmap(n: usize) -> Result<Vec<bool>> {
    if n > MAX_UNIQUENESS_VARS {
        return Err(Error::Capacity(format!("n = {n} exceeds {MAX_UNIQUENESS_VARS}")));
    }
    let points = 1usize << n;
    let functions = 1usize << points;
    let side = (2 * LTF_WEIGHT_BOUND + 1) as usize;
    let theta_max = f64::from(LTF_WEIGHT_BOUND) * n as f64;
    let total = side.pow(n as u32);
    let chunk = side;
    let bitmap = (0..total.div_ceil(chunk))
        .into_par_iter()
        .fold(
            || vec![false; functions],
            |mut seen, block| {
                let mut order: Vec<(i32, usize)> = vec![(0, 0); points];
                for w_index in block * chunk..((block + 1) * chunk).min(total) {
                    let mut rest = w_index;
                    let mut w = [0i32; MAX_UNIQUENESS_VARS];
                    for wi in w.iter_mut().take(n) {
                        *wi = (rest % side) as i32 - LTF_WEIGHT_BOUND;
                        rest /= side;
                    }
                    for (c, slot) in order.iter_mut().enumerate() {
                        let v = (0..n).map(|i| if (c >> i) & 1 == 0 { w[i] } else { -w[i] }).sum();
                        *slot = (v, c);
                    }
                    order.sort_unstable();
                    // θ below every level: the constant +1.
                    if f64::from(order[0].0) - 0.5 >= -theta_max {
                        seen[0] = true;
                    }
                    let mut mask = 0usize;
                    for k in 0..points {
                        mask |= 1 << order[k].1;
                        let last_of_level = k + 1 == points || order[k + 1].0 != order[k].0;
                        if last_of_level && f64::from(order[k].0) + 0.5 <= theta_max {
                            seen[mask] = true;
                        }
                    }
                }
                seen
            },
        )
        .reduce(
            || vec![false; functions],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    Ok(bitmap)
}

/// Exhaustive check that no LTF shares its degree-1 Chow vector with another function.
pub fn chow_uniqueness_bruteforce(n: usize) -> Result<UniquenessReport> {
    let ltfs = ltf_bitmap(n)?;
    let functions = ltfs.len();
    let mut buckets: HashMap<[i32; MAX_UNIQUENESS_VARS + 1], Vec<SmallFn>> = HashMap::new();
    for f in 0..functions {
        buckets
            .entry(degree1_key(n, f as SmallFn))
            .or_default()
            .push(f as SmallFn);
    }
    let mut ltf_collisions = Vec::new();
    for f in (0..functions).filter(|&f| ltfs[f]) {
        let bucket = &buckets[&degree1_key(n, f as SmallFn)];
        ltf_collisions.extend(bucket.iter().filter(|&&g| g as usize != f).map(|&g| Collision {
            ltf: small_fn_hex(n, f as SmallFn),
            other: small_fn_hex(n, g),
        }));
    }
    Ok(UniquenessReport {
        n,
        functions_scanned: functions as u64,
        ltf_count: ltfs.iter().filter(|&&b| b).count() as u64,
        distinct_buckets: buckets.len() as u64,
        shared_buckets: buckets.values().filter(|b| b.len() > 1).count() as u64,
        passed: ltf_collisions.is_empty(),
        ltf_collisions,
    })
}
