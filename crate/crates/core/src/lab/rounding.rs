use rand::Rng as _;

use crate::cube::{BoundedTable, TruthTable};
use crate::error::Result;
use crate::seed::Rng;

/// Independent per-point rounding: `g₀(x) = 1` with probability `(g(x)+1)/2`.
pub fn random_round(g: &BoundedTable, rng: &mut Rng) -> Result<TruthTable> {
    let values = g.values();
    TruthTable::from_minus_fn(g.n(), |c| {
        let p_plus = (values[c as usize] + 1.0) / 2.0;
        // `random::<f64>()` is in [0, 1), so p_plus = 1 never yields -1.
        rng.random::<f64>() >= p_plus
    })
}
