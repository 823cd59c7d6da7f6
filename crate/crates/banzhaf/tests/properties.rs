//! Property suites for the game, count-vector, and metric invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use banzhaf::data::TableSource;
use banzhaf::report::dataset_csv;
use banzhaf::game::{evaluate_coalition, Coalition, GameInstance, QuotaSpec, VotingBody};
use banzhaf::metrics::{euclidean, gini, hhi, manhattan, max_ratio, pearson};
use banzhaf::power::{banzhaf_indices, build_count_vector, multi_quota_profiles};

fn body_strategy(max_players: usize) -> impl Strategy<Value = VotingBody> {
    prop::collection::vec(1u64..=50, 1..=max_players)
        .prop_map(|ws| VotingBody::from_weights(ws).expect("positive weights"))
}

fn game_strategy(max_players: usize) -> impl Strategy<Value = (GameInstance, usize)> {
    body_strategy(max_players).prop_flat_map(|body| {
        let total = body.total_votes();
        let n = body.n_players();
        (Just(body), 1..=total, 0usize..(1 << n)).prop_map(move |(body, t, mask)| {
            (GameInstance::new(body, t).expect("valid threshold"), mask)
        })
    })
}

fn coalition_from_mask(n: usize, mask: usize) -> Coalition {
    Coalition::new(n, (0..n).filter(|i| mask & (1 << i) != 0)).expect("indices in range")
}

/// Positive rational vectors summing to exactly 1.
fn normalized_strategy(len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(1u32..1000, len).prop_map(|xs| {
        let total: u32 = xs.iter().sum();
        xs.into_iter()
            .map(|x| BigRational::new(BigInt::from(x), BigInt::from(total)))
            .collect()
    })
}

fn paired_normalized() -> impl Strategy<Value = (Vec<BigRational>, Vec<BigRational>)> {
    (2usize..=16).prop_flat_map(|n| (normalized_strategy(n), normalized_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_a_player_never_breaks_a_win((game, mask) in game_strategy(10), extra in 0usize..10) {
        let n = game.body().n_players();
        let extra = extra % n;
        let base = coalition_from_mask(n, mask);
        let wider = coalition_from_mask(n, mask | (1 << extra));
        if evaluate_coalition(&game, &base).is_winning() {
            prop_assert!(evaluate_coalition(&game, &wider).is_winning());
        }
    }

    #[test]
    fn strict_majority_forbids_winning_complements((game, mask) in game_strategy(10)) {
        let total = game.body().total_votes();
        prop_assume!(game.threshold_votes() * 2 > total);
        let n = game.body().n_players();
        let coalition = coalition_from_mask(n, mask);
        let complement = coalition_from_mask(n, !mask & ((1 << n) - 1));
        prop_assert!(
            !(evaluate_coalition(&game, &coalition).is_winning()
                && evaluate_coalition(&game, &complement).is_winning())
        );
    }

    #[test]
    fn threshold_is_monotone_in_the_quota(body in body_strategy(10), a in 500u64..=1000, b in 500u64..=1000) {
        use banzhaf::game::threshold_from_quota;
        // denominators of 10 give fractional percents in [50, 100]
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let q_lo = QuotaSpec::new(num_rational::Ratio::new(lo, 10)).expect("range");
        let q_hi = QuotaSpec::new(num_rational::Ratio::new(hi, 10)).expect("range");
        prop_assert!(threshold_from_quota(&q_lo, &body) <= threshold_from_quota(&q_hi, &body));
    }

    #[test]
    fn counts_conserve_and_mirror(body in body_strategy(12)) {
        let c = build_count_vector(&body).expect("small table");
        let total = body.total_votes();
        prop_assert_eq!(c.window_sum(0, total), c.total());
        for t in 0..=total {
            prop_assert_eq!(c.count(t), c.count(total - t));
        }
    }

    #[test]
    fn decisiveness_never_grows_with_the_threshold(body in body_strategy(12), t1 in 1u64..=600, t2 in 1u64..=600) {
        let total = body.total_votes();
        let (lo, hi) = (t1.min(t2).min(total), t1.max(t2).min(total));
        let c = build_count_vector(&body).expect("small table");
        prop_assert!(c.winning_count(lo) >= c.winning_count(hi));
    }

    #[test]
    fn a_dictator_takes_all_power(others in prop::collection::vec(1u64..=20, 1..=8), slack in 0u64..5) {
        // one player outweighs everyone else combined
        let rest: u64 = others.iter().sum();
        let dictator_weight = rest + 1 + slack;
        let mut weights = vec![dictator_weight];
        weights.extend(&others);
        let body = VotingBody::from_weights(weights).expect("positive");
        // any threshold in (rest, dictator_weight] makes player 0 a dictator
        let threshold = rest + 1 + slack.min(1);
        let mut dp = multi_quota_profiles(&body, &[threshold]).expect("dp runs");
        let (swings, _) = dp.pop().unwrap();
        let profile = banzhaf_indices(&swings).expect("dictator is critical");
        prop_assert!(profile.beta()[0].is_one());
        for beta in &profile.beta()[1..] {
            prop_assert_eq!(beta.to_f64().unwrap(), 0.0);
        }
    }

    #[test]
    fn norm_inequalities_hold((beta, w) in paired_normalized()) {
        let n = beta.len() as f64;
        let d_euc = euclidean(&beta, &w).unwrap();
        let d_man = manhattan(&beta, &w).unwrap();
        prop_assert!(d_man + 1e-12 >= d_euc);
        prop_assert!(d_euc + 1e-12 >= d_man / n.sqrt());
    }

    #[test]
    fn all_measures_are_optimal_at_identity(w in (2usize..=16).prop_flat_map(normalized_strategy)) {
        prop_assert_eq!(euclidean(&w, &w).unwrap(), 0.0);
        prop_assert_eq!(manhattan(&w, &w).unwrap(), 0.0);
        let omega = max_ratio(&w, &w).unwrap();
        prop_assert_eq!(omega.value(), Some(1.0));
        if w.iter().any(|x| x != &w[0]) {
            let rho = pearson(&w, &w).unwrap();
            prop_assert!((rho - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_is_affine_invariant((w, beta) in paired_normalized(), scale in 1u32..50, shift in 0u32..10) {
        prop_assume!(w.iter().any(|x| x != &w[0]));
        prop_assume!(beta.iter().any(|x| x != &beta[0]));
        let a = BigRational::new(BigInt::from(scale), BigInt::from(7u32));
        let b = BigRational::new(BigInt::from(shift), BigInt::from(3u32));
        let transformed: Vec<BigRational> = w.iter().map(|x| &a * x + &b).collect();
        let before = pearson(&w, &beta).unwrap();
        let after = pearson(&transformed, &beta).unwrap();
        prop_assert!((before - after).abs() < 1e-9, "{before} vs {after}");
    }

    #[test]
    fn gini_is_scale_invariant_and_matches_the_double_sum(a in (2usize..=16).prop_flat_map(normalized_strategy), c in 1u32..100) {
        let sorted_form = gini(&a).unwrap();

        // O(n^2) double-sum oracle, straight from the definition
        let n = a.len() as f64;
        let values: Vec<f64> = a.iter().map(|x| x.to_f64().unwrap()).collect();
        let total: f64 = values.iter().sum();
        let double_sum: f64 = values
            .iter()
            .flat_map(|x| values.iter().map(move |y| (x - y).abs()))
            .sum::<f64>()
            / (2.0 * n * total);
        prop_assert!((sorted_form - double_sum).abs() < 1e-12, "{sorted_form} vs {double_sum}");

        let scale = BigRational::new(BigInt::from(c), BigInt::from(13u32));
        let scaled: Vec<BigRational> = a.iter().map(|x| &scale * x).collect();
        prop_assert!((gini(&scaled).unwrap() - sorted_form).abs() < 1e-12);

        prop_assert!(sorted_form >= 0.0);
        prop_assert!(sorted_form <= 1.0 - 1.0 / n + 1e-12);
    }

    #[test]
    fn hhi_is_minimized_by_the_uniform_vector(a in (2usize..=16).prop_flat_map(normalized_strategy)) {
        let value = hhi(&a).unwrap();
        let n = a.len() as f64;
        prop_assert!(value + 1e-12 >= 1.0 / n);
        prop_assert!(value <= 1.0 + 1e-12);
    }

    #[test]
    fn max_ratio_is_symmetric_and_at_least_one((beta, w) in paired_normalized()) {
        let forward = max_ratio(&beta, &w).unwrap();
        let backward = max_ratio(&w, &beta).unwrap();
        prop_assert_eq!(forward.value(), backward.value());
        prop_assert_eq!(forward.player(), backward.player());
        prop_assert!(forward.value().unwrap() >= 1.0);
    }

    #[test]
    fn weight_tables_round_trip_through_csv(
        votes in prop::collection::vec(1u64..=10_000_000, 1..=20),
        with_shares in any::<bool>(),
        comma_names in any::<bool>(),
    ) {
        let total: u64 = votes.iter().sum();
        let mut text = String::from(if with_shares { "country,votes,share\n" } else { "country,votes\n" });
        for (i, v) in votes.iter().enumerate() {
            let name = if comma_names && i % 3 == 0 {
                format!("\"Land, Republic of {i}\"")
            } else {
                format!("Land{i}")
            };
            if with_shares {
                let share = (100.0 * *v as f64 / total as f64 * 100.0).round() / 100.0;
                text.push_str(&format!("{name},{v},{share}\n"));
            } else {
                text.push_str(&format!("{name},{v}\n"));
            }
        }
        let table = banzhaf::parse_weights_csv(&text, TableSource::Embedded).unwrap();
        let rewritten = dataset_csv(&table);
        let again = banzhaf::parse_weights_csv(&rewritten, TableSource::Embedded).unwrap();
        prop_assert_eq!(table.rows(), again.rows());
    }
}
