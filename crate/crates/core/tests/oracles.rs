use chowd::cube::{chow_distance, chow_vector, Subset};
use chowd::lab::gaussian_poly;
use chowd::oracles::{
    draw_examples, estimate_chow_rfa, nasty_corrupt, robust_estimate_chow, Adversary, AdversaryView, PtfTarget,
    RfaMode, RfaOracle,
};
use chowd::seed::{derive_seed, rng_from_seed};
use rayon::prelude::*;

#[test]
fn hoeffding_contract_for_rfa_estimates() {
    let p = gaussian_poly(8, 2, &mut rng_from_seed(77)).unwrap();
    let f = p.materialize_sign().unwrap();
    let exact = chow_vector(&f, 2).unwrap();
    let hits = (0..200u64)
        .into_par_iter()
        .filter(|&seed| {
            let mut oracle = RfaOracle::new(&f, 2);
            let est = estimate_chow_rfa(&mut oracle, 2, 0.1, 0.1, seed, RfaMode::Sampled).unwrap();
            chow_distance(&est.chow, &exact).unwrap() <= 0.1
        })
        .count();
    assert!(hits >= 180, "{hits}/200");
}

#[test]
fn rfa_examples_reveal_only_the_focus() {
    let f = chowd::cube::TruthTable::majority(5).unwrap();
    let mut oracle = RfaOracle::new(&f, 2);
    let mut rng = rng_from_seed(0);
    let focus = Subset::from_members(&[2, 4]).unwrap();
    for _ in 0..50 {
        let ex = oracle.draw(focus, &mut rng).unwrap();
        for i in 1..=5 {
            assert_eq!(ex.value(i).is_ok(), focus.contains(i));
        }
        assert!(ex.chi(Subset::from_members(&[1, 2]).unwrap()).is_err());
        assert!(ex.chi(focus).is_ok());
    }
}

#[test]
fn trimmed_deviation_bound_on_every_adversary() {
    let (m, eps, d) = (20_000, 0.02, 2);
    let bound = 4.0 * eps + 5.0 / (m as f64).sqrt();
    for k in 0..6u64 {
        let p = gaussian_poly(8, d, &mut rng_from_seed(derive_seed(31, k))).unwrap();
        let target = PtfTarget::new(p.clone());
        let exact = chow_vector(&p.materialize_sign().unwrap(), d).unwrap();
        let clean = draw_examples(&target, m, &mut rng_from_seed(k));
        let view = AdversaryView {
            target: &target,
            poly: Some(&p),
            d,
        };
        for adversary in [
            Adversary::MarginFlip,
            Adversary::CoordinateBias { coordinate: None },
            Adversary::UniformReplace,
        ] {
            let set = nasty_corrupt(&clean, eps, &adversary, &view, k).unwrap();
            let est = robust_estimate_chow(&set, d, eps).unwrap();
            let worst = est
                .difference(&exact)
                .unwrap()
                .iter()
                .fold(0.0f64, |a, x| a.max(x.abs()));
            assert!(worst <= bound, "{} on trial {k}: {worst} > {bound}", adversary.id());
        }
    }
}
