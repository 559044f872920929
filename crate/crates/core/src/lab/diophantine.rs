use crate::error::{Error, Result};

/// Largest vector length the exhaustive search accepts.
pub const MAX_DIOPHANTINE_DIM: usize = 6;
/// Largest search range `m^N + 1` the exhaustive search accepts.
pub const MAX_DIOPHANTINE_SEARCH: u64 = 1 << 34;

/// True iff every coordinate of `t·w` lies within `gamma` (exclusive) of an integer.
pub fn near_integer_multiple(w: &[f64], t: u64, gamma: f64) -> bool {
    w.iter().all(|&x| {
        let y = t as f64 * x;
        (y - y.round()).abs() < gamma
    })
}

/// Search bound `m^N + 1`, `m = ⌈1/γ⌉`.
pub fn diophantine_bound(n: usize, gamma: f64) -> Option<u64> {
    let m = (1.0 / gamma).ceil() as u64;
    m.checked_pow(n as u32)?.checked_add(1)
}

/// Smallest positive integer `t` with `t·w ∈ (ℤ + (−γ, γ))^N`.
///
/// Pigeonhole over the `m^N` half-open subcubes of side `1/m` guarantees one
/// exists with `t ≤ m^N`.
pub fn diophantine_t(w: &[f64], gamma: f64) -> Result<u64> {
    if w.len() > MAX_DIOPHANTINE_DIM {
        return Err(Error::Capacity(format!(
            "vector length {} exceeds {MAX_DIOPHANTINE_DIM}",
            w.len()
        )));
    }
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(Error::Parameter(format!("gamma = {gamma} must lie in (0, 1/2)")));
    }
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter("vector has a non-finite entry".into()));
    }
    let bound = diophantine_bound(w.len(), gamma)
        .filter(|&b| b <= MAX_DIOPHANTINE_SEARCH)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "search range for N = {}, gamma = {gamma} exceeds {MAX_DIOPHANTINE_SEARCH}",
                w.len()
            ))
        })?;
    (1..=bound)
        .find(|&t| near_integer_multiple(w, t, gamma))
        .ok_or_else(|| Error::Degenerate(format!("no multiplier up to {bound}; floating-point breakdown")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use rand::Rng;

    #[test]
    fn half_needs_two() {
        assert_eq!(diophantine_t(&[0.5], 0.4).unwrap(), 2);
    }

    #[test]
    fn integer_vectors_need_one() {
        assert_eq!(diophantine_t(&[3.0, -2.0, 0.0], 0.01).unwrap(), 1);
        assert_eq!(diophantine_t(&[], 0.3).unwrap(), 1);
    }

    #[test]
    fn random_vectors_meet_membership_and_bound() {
        let mut rng = rng_from_seed(8);
        for _ in 0..100 {
            let w: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
            let t = diophantine_t(&w, 0.1).unwrap();
            assert!(near_integer_multiple(&w, t, 0.1));
            assert!(t <= 1001);
            assert!((1..t).all(|s| !near_integer_multiple(&w, s, 0.1)));
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(diophantine_t(&[0.1; 7], 0.3), Err(Error::Capacity(_))));
        assert!(matches!(diophantine_t(&[0.1], 0.5), Err(Error::Parameter(_))));
        assert!(matches!(diophantine_t(&[0.1; 6], 0.001), Err(Error::Capacity(_))));
        assert_eq!(diophantine_bound(3, 0.1), Some(1001));
    }
}
