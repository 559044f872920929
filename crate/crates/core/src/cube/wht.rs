use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// Largest cube dimension with a dense representation.
pub const MAX_TABLE_VARS: usize = 24;

/// Unnormalized in-place Walsh-Hadamard butterfly.
///
/// After the call `data[s] = Σ_c (-1)^{|s ∧ c|} data_in[c]`. The transform is
/// its own inverse up to a factor of `len`. Panics if the length is not a
/// power of two.
pub fn fwht_in_place<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

/// Dimension `n` with `values.len() == 2^n`, bounded by [`MAX_TABLE_VARS`].
pub fn dimension_of(len: usize) -> Result<usize> {
    if !len.is_power_of_two() {
        return Err(Error::Shape(format!("length {len} is not a power of two")));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_TABLE_VARS {
        return Err(Error::Capacity(format!("dimension {n} exceeds {MAX_TABLE_VARS}")));
    }
    Ok(n)
}

/// Normalized spectrum `f̂(S) = 2^{-n} Σ_x f(x) χ_S(x)` of arbitrary real values.
///
/// Indexed by subset mask. No clamping is applied, so the map is linear.
pub fn wht_values(values: &[f64]) -> Result<Vec<f64>> {
    let n = dimension_of(values.len())?;
    let mut out = values.to_vec();
    fwht_in_place(&mut out);
    let scale = (-(n as f64)).exp2();
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// Values of `Σ_S coeffs[S] χ_S(x)` at every point code; the inverse of [`wht_values`].
pub fn inverse_wht(coeffs_by_mask: &[f64]) -> Result<Vec<f64>> {
    dimension_of(coeffs_by_mask.len())?;
    let mut out = coeffs_by_mask.to_vec();
    fwht_in_place(&mut out);
    Ok(out)
}

/// Naive `O(4^n)` evaluation of the normalized spectrum. Test oracle only.
pub fn naive_spectrum(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    let scale = 1.0 / len as f64;
    (0..len)
        .map(|s| {
            let acc: f64 = values
                .iter()
                .enumerate()
                .map(|(c, &v)| if (s & c).count_ones() % 2 == 0 { v } else { -v })
                .sum();
            acc * scale
        })
        .collect()
}
