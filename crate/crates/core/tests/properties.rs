//! Randomized invariants.

use proptest::prelude::*;
use purity_core::asymptotics::resource_ledger;
use purity_core::ensemble::{apply_channel, average_state, channel_mutual_information, cross_check_iybe, holevo_information};
use purity_core::sampling::{random_channel, random_ensemble, random_state_any_rank, rng_from_seed};
use purity_core::state::{
    dephase, purity_kappa, shannon_entropy, trace_distance, von_neumann_entropy, DensityMatrix,
};
use purity_core::tradeoff::{compute_p_curve, flag_mixture, lagrangian_objective, OptimizerOptions};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn entropy_within_bounds(seed in any::<u64>(), dim in 1usize..6) {
        let rho = random_state_any_rank(dim, &mut rng_from_seed(seed));
        let h = von_neumann_entropy(&rho).unwrap();
        prop_assert!(h >= 0.0 && h <= (dim as f64).log2() + 1e-9);
        let k = purity_kappa(&rho).unwrap();
        prop_assert!(k >= -1e-9 && k <= (dim as f64).log2() + 1e-9);
    }

    #[test]
    fn dephasing_never_lowers_entropy(seed in any::<u64>(), dim in 1usize..6) {
        let rho = random_state_any_rank(dim, &mut rng_from_seed(seed));
        prop_assert!(von_neumann_entropy(&dephase(&rho)).unwrap() >= von_neumann_entropy(&rho).unwrap() - 1e-9);
    }

    #[test]
    fn trace_distance_is_a_bounded_metric(seed in any::<u64>(), dim in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let a = random_state_any_rank(dim, &mut rng);
        let b = random_state_any_rank(dim, &mut rng);
        let c = random_state_any_rank(dim, &mut rng);
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&ab));
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-9);
    }

    #[test]
    fn channel_informations_obey_data_processing(seed in any::<u64>(), nx in 1usize..5, d in 1usize..4, ny in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(nx, d, &mut rng);
        let w = random_channel(nx, ny, &mut rng);
        let i_yx = channel_mutual_information(ens.probs(), &w).unwrap();
        let i_yb = holevo_information(&apply_channel(&ens, &w).unwrap()).unwrap();
        prop_assert!(i_yb <= i_yx + 1e-9);
        prop_assert!(i_yb <= holevo_information(&ens).unwrap() + 1e-9);
        prop_assert!(i_yx <= shannon_entropy(ens.probs()) + 1e-9);
        let (i_ybe, classical) = cross_check_iybe(&ens, &w).unwrap();
        prop_assert!((i_ybe - classical).abs() < 1e-9);
    }

    #[test]
    fn post_processing_cannot_help(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(3, 2, &mut rng);
        let w = random_channel(3, 3, &mut rng);
        let v = random_channel(3, 2, &mut rng);
        let composed = w.then(&v).unwrap();
        let before = holevo_information(&apply_channel(&ens, &w).unwrap()).unwrap();
        let after = holevo_information(&apply_channel(&ens, &composed).unwrap()).unwrap();
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn objective_is_at_most_zero_at_unit_multiplier(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(3, 2, &mut rng);
        let w = random_channel(3, 4, &mut rng);
        prop_assert!(lagrangian_objective(&ens, &w, 1.0).unwrap() <= 1e-9);
    }

    #[test]
    fn flag_mixture_time_shares_both_informations(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(3, 2, &mut rng);
        let (w1, w2) = (random_channel(3, 2, &mut rng), random_channel(3, 3, &mut rng));
        let m = flag_mixture(&w1, &w2, t).unwrap();
        let info = |w| {
            (
                channel_mutual_information(ens.probs(), w).unwrap(),
                holevo_information(&apply_channel(&ens, w).unwrap()).unwrap(),
            )
        };
        let ((a1, b1), (a2, b2), (am, bm)) = (info(&w1), info(&w2), info(&m));
        prop_assert!((am - (t * a1 + (1.0 - t) * a2)).abs() < 1e-9);
        prop_assert!((bm - (t * b1 + (1.0 - t) * b2)).abs() < 1e-9);
    }

    #[test]
    fn ledger_identities(seed in any::<u64>(), delta in 0.0f64..0.2) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(3, 2, &mut rng);
        let w = random_channel(3, 3, &mut rng);
        let l = resource_ledger(&ens, &w, 100, delta).unwrap();
        let h_y = shannon_entropy(&purity_core::state::ProbabilityDistribution::from_weights(
            &w.output_distribution(ens.probs().probs())).unwrap());
        prop_assert!((l.rate_m + l.rate_l - h_y - 2.0 * delta).abs() < 1e-9);
        let i_yb = holevo_information(&apply_channel(&ens, &w).unwrap()).unwrap();
        let kappa = purity_kappa(&ens.classical_state()).unwrap() + purity_kappa(&average_state(&ens)).unwrap();
        prop_assert!((l.net_p - kappa - i_yb).abs() < 1e-9);
        prop_assert!(l.rate_m >= 0.0 && l.rate_l >= 0.0 && l.p_a_rate >= 0.0 && l.p_b_rate >= 0.0);
    }
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn p_curve_envelope_shape(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(3, 2, &mut rng);
        let opts = OptimizerOptions { restarts: 4, master_seed: seed, ..Default::default() };
        let curve = compute_p_curve(&ens, &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0], &opts).unwrap();
        let chi = holevo_information(&ens).unwrap();
        prop_assert_eq!(curve.at(0.0), 0.0);
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let vals: Vec<f64> = grid.iter().map(|&r| curve.at(r)).collect();
        for (r, v) in grid.iter().zip(&vals) {
            prop_assert!(*v <= r + 1e-9 && *v <= chi + 1e-9);
        }
        for w in vals.windows(3) {
            prop_assert!(w[1] >= w[0] - 1e-12);
            prop_assert!(w[1] >= 0.5 * (w[0] + w[2]) - 1e-12);
        }
    }
}

#[test]
fn pure_state_entropy_is_zero_and_maximally_mixed_is_log_dim() {
    for d in 1..6 {
        assert!(von_neumann_entropy(&DensityMatrix::basis(d, d - 1)).unwrap().abs() < 1e-12);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(d)).unwrap() - (d as f64).log2()).abs() < 1e-12);
    }
}
