use chowd::cube::{naive_spectrum, wht, BoundedTable, TruthTable};
use chowd::seed::rng_from_seed;
use proptest::prelude::*;
use rand::Rng;

fn boolean(n: usize, seed: u64) -> TruthTable {
    let mut rng = rng_from_seed(seed);
    TruthTable::from_fn(n, |_| if rng.random_bool(0.5) { 1 } else { -1 }).unwrap()
}

fn bounded(n: usize, seed: u64) -> BoundedTable {
    let mut rng = rng_from_seed(seed);
    BoundedTable::from_fn(n, |_| rng.random_range(-1.0..=1.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(n in 0usize..=12, seed in any::<u64>()) {
        let energy: f64 = wht(&boolean(n, seed)).iter().map(|c| c * c).sum();
        prop_assert!((energy - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn linearity(n in 0usize..=10, seed in any::<u64>(), a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let f = bounded(n, seed);
        let g = bounded(n, seed ^ 0x5555);
        // Raw combination, no clamping: |a f + b g| may exceed 1.
        let combo: Vec<f64> = f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect();
        let lhs = chowd::cube::wht_values(&combo).unwrap();
        let (wf, wg) = (wht(&f), wht(&g));
        for ((l, x), y) in lhs.iter().zip(&wf).zip(&wg) {
            prop_assert!((l - (a * x + b * y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn fast_matches_naive(n in 0usize..=10, seed in any::<u64>()) {
        let f = bounded(n, seed);
        for (x, y) in wht(&f).iter().zip(naive_spectrum(f.values())) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn plancherel(n in 0usize..=10, seed in any::<u64>()) {
        let f = boolean(n, seed);
        let g = bounded(n, seed.wrapping_add(1));
        let direct: f64 = (0..f.len()).map(|c| f64::from(f.get(c)) * g.get(c)).sum::<f64>() / f.len() as f64;
        let spectral: f64 = wht(&f).iter().zip(wht(&g)).map(|(a, b)| a * b).sum();
        prop_assert!((direct - spectral).abs() <= 1e-12);
    }
}
