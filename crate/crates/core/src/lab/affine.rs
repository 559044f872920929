use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MultilinearPoly;

/// Largest cube the exhaustive affine scan accepts.
pub const MAX_AFFINE_VARS: usize = 22;

/// Exact zero-set mass of a family of affine forms and the dimension of their span.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineMass {
    pub n: usize,
    pub forms: usize,
    pub dim: usize,
    pub zeros: u64,
    pub mass: f64,
}

impl AffineMass {
    /// `2^{−dim}`.
    pub fn bound(&self) -> f64 {
        (-(self.dim as f64)).exp2()
    }

    pub fn within_bound(&self) -> bool {
        self.mass <= self.bound()
    }
}

/// Coefficient row `(c_∅, a_1, …, a_n)` of a degree-≤1 polynomial.
fn affine_row(l: &MultilinearPoly, n: usize) -> Result<Vec<f64>> {
    if l.n() != n {
        return Err(Error::Shape(format!("form over {} variables, expected {n}", l.n())));
    }
    let mut row = vec![0.0; n + 1];
    for (s, c) in l.terms() {
        match s.members().as_slice() {
            [] => row[0] = c,
            &[i] => row[i] = c,
            _ => return Err(Error::Parameter(format!("term {s} is not affine"))),
        }
    }
    Ok(row)
}

/// Rank by Gaussian elimination with partial pivoting; entries below
/// `1e-9 · max|entry|` count as zero.
pub fn span_dimension(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let scale = m.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = 1e-9 * scale;
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else {
            break;
        };
        if m[pivot][col].abs() <= tol {
            continue;
        }
        m.swap(rank, pivot);
        let p = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let factor = row[col] / p[col];
            if factor != 0.0 {
                for (x, y) in row.iter_mut().zip(&p).skip(col) {
                    *x -= factor * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact `Pr_x[L(x) = 0 for every listed L]`, by enumeration.
///
/// `L(x)` counts as zero when `|L(x)| ≤ 1e-9 · Σ|coef|`, so integer-coefficient
/// forms are tested exactly.
pub fn affine_zero_mass(linears: &[MultilinearPoly], n: usize) -> Result<AffineMass> {
    if n > MAX_AFFINE_VARS {
        return Err(Error::Capacity(format!("n = {n} exceeds {MAX_AFFINE_VARS}")));
    }
    let rows = linears.iter().map(|l| affine_row(l, n)).collect::<Result<Vec<_>>>()?;
    let dim = span_dimension(&rows);
    let len = 1u64 << n;
    let mut alive = vec![true; len as usize];
    for row in &rows {
        let tol = 1e-9 * row.iter().map(|c| c.abs()).sum::<f64>();
        for (code, keep) in alive.iter_mut().enumerate() {
            if !*keep {
                continue;
            }
            let mut v = row[0];
            for i in 0..n {
                if (code >> i) & 1 == 0 {
                    v += row[i + 1];
                } else {
                    v -= row[i + 1];
                }
            }
            *keep = v.abs() <= tol;
        }
    }
    let zeros = alive.iter().filter(|&&z| z).count() as u64;
    Ok(AffineMass {
        n,
        forms: linears.len(),
        dim,
        zeros,
        mass: zeros as f64 / len as f64,
    })
}
