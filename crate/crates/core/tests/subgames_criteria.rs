use mbrainbow::criteria::{
    beck_sum, box_criterion, crossing_edges, path_count_upper_bound, rs_beck_partition_sum, threshold_bounds,
    HypergraphSummary, SumMode, ThresholdGame,
};
use mbrainbow::solver::{maker_vs_policy, oracle_list, random_hypergraph, solve_hypergraph, OracleInstance, OracleItem};
use mbrainbow::strategies::potential_pick;
use mbrainbow::subgames::{
    minbox_invariant_check, play_box_game, play_minbox_game, BoxOpponent, MinBoxOpponent, MinBoxState,
};
use mbrainbow::{Player, Rng};
use proptest::prelude::*;

fn opponent(k: u8) -> MinBoxOpponent {
    match k % 3 {
        0 => MinBoxOpponent::Random,
        1 => MinBoxOpponent::Focused,
        _ => MinBoxOpponent::Spread,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minbox_invariant_in_every_game(
        sizes in prop::collection::vec(1usize..80, 1..30),
        b in 1usize..5,
        gamma in 0.01f64..0.5,
        opp in any::<u8>(),
        breaker_first in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let d = *sizes.iter().min().unwrap();
        let st = MinBoxState::new(&sizes, d, gamma, b);
        prop_assert!(minbox_invariant_check(&st));
        let first = if breaker_first { Player::Breaker } else { Player::Maker };
        let r = play_minbox_game(st, first, opponent(opp), &mut Rng::seed_from_u64(seed));
        prop_assert_eq!(r.violations, 0);
        prop_assert!(r.checks > 0);
    }

    #[test]
    fn minbox_maker_reaches_every_box_under_the_growth_condition(
        n_boxes in 2usize..40,
        b in 1usize..4,
        opp in any::<u8>(),
        seed in any::<u64>(),
    ) {
        let gamma = 0.5 / (b + 1) as f64;
        let d_min = b as f64 * ((n_boxes as f64).ln() + 1.0) / (1.0 - gamma * (b + 1) as f64);
        let d = d_min.floor() as usize + 1;
        let mut rng = Rng::seed_from_u64(seed);
        let sizes: Vec<usize> = (0..n_boxes).map(|_| d + rng.index(d)).collect();
        let r = play_minbox_game(MinBoxState::new(&sizes, d, gamma, b), Player::Breaker, opponent(opp), &mut rng);
        prop_assert!(r.maker_reached_all);
    }

    #[test]
    fn box_maker_wins_under_the_criterion(p in 2usize..5, n in 2usize..60, seed in any::<u64>(), greedy in any::<bool>()) {
        let m = ((p as f64 - 1.0) * (n as f64).ln()).floor() as usize;
        prop_assume!(m >= 1 && box_criterion(p, n, m));
        let opp = if greedy { BoxOpponent::GreedyDestroyer } else { BoxOpponent::Random };
        let w = play_box_game(&vec![m; n], p, 1, Player::Breaker, opp, &mut Rng::seed_from_u64(seed));
        prop_assert_eq!(w, Player::Maker);
    }

    #[test]
    fn beck_sum_grouped_equals_explicit(sets in prop::collection::vec(1usize..30, 1..40), p in 1usize..4, q in 1usize..4) {
        let explicit = HypergraphSummary::Explicit { sets: sets.iter().map(|&k| (0..k).collect()).collect() };
        let grouped = HypergraphSummary::Grouped { sizes: explicit.grouped() };
        let a = beck_sum(&explicit, p, q).unwrap();
        let b = beck_sum(&grouped, p, q).unwrap();
        prop_assert!((a.ln_sum - b.ln_sum).abs() < 1e-12);
        let direct: f64 = sets.iter().map(|&k| (1.0 + q as f64).powf(-(k as f64) / p as f64)).sum();
        prop_assert!((a.sum - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn potential_breaker_beats_optimal_maker(seed in any::<u64>(), p in 1usize..3, q in 1usize..3) {
        let mut rng = Rng::seed_from_u64(seed);
        let n = 6 + rng.index(7);
        let m = 2 + rng.index(6);
        let h = random_hypergraph(&mut rng, n, m, 3..=n.min(9)).unwrap();
        prop_assume!(beck_sum(&h.summary(), p, q).unwrap().breaker_wins);
        let sets = h.sets.clone();
        let w = maker_vs_policy(&h, p, q, Player::Breaker, |m, b| potential_pick(&sets, n, m, b, p, q)).unwrap();
        prop_assert_eq!(w, Player::Breaker);
        prop_assert_eq!(solve_hypergraph(&h, p, q, Player::Breaker).unwrap(), Player::Breaker);
    }

    #[test]
    fn partition_sums_increase_in_b(n in 3usize..8, b in 0.5f64..6.0) {
        let lo = rs_beck_partition_sum(n, b, SumMode::Exact).unwrap();
        let hi = rs_beck_partition_sum(n, b * 1.5, SumMode::Exact).unwrap();
        prop_assert!(hi.total.unwrap() > lo.total.unwrap());
    }
}

// Independent enumeration of the three partition classes, frozen below.
fn partition_sums_by_enumeration(n: usize, b: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for item in oracle_list(&OracleInstance::Partitions { n }).unwrap() {
        let OracleItem::Blocks(blocks) = item else { unreachable!() };
        let k = blocks.len();
        if k < 2 {
            continue;
        }
        let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let within: usize = sizes.iter().map(|&x| x * (x - 1) / 2).sum();
        let e = n * (n - 1) / 2 - within;
        let m = n - k + 1;
        let mut subsets = 0u64;
        for mask in 0u32..1 << (n - 1) {
            subsets += (mask.count_ones() as usize == m) as u64;
        }
        let term = subsets as f64 * 2f64.powf(-(m as f64) * e as f64 / b);
        let big = sizes.iter().any(|&x| 2 * x > n);
        out[3] += term;
        if 2 * k <= n && !big {
            out[0] += term;
        }
        if big {
            out[1] += term;
        }
        if 2 * k > n {
            out[2] += term;
        }
    }
    out
}

#[test]
fn partition_sums_match_enumeration() {
    for n in 3..=7 {
        for b in [1.0, 2.0, 3.5] {
            let got = rs_beck_partition_sum(n, b, SumMode::Exact).unwrap();
            let want = partition_sums_by_enumeration(n, b);
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
            assert!(close(got.f1, want[0]), "n={n} b={b} f1 {} vs {}", got.f1, want[0]);
            assert!(close(got.f2, want[1]));
            assert!(close(got.f3, want[2]));
            assert!(close(got.total.unwrap(), want[3]));
        }
    }
}

#[test]
fn partition_sums_frozen() {
    // n=3, b=1: the three {2,1} partitions have 2 crossing edges and choose
    // 2 of 2 colors; the singletons have 3 crossing edges and choose 1 of 2
    let r = rs_beck_partition_sum(3, 1.0, SumMode::Exact).unwrap();
    assert!((r.total.unwrap() - 7.0 / 16.0).abs() < 1e-15);
    assert_eq!(r.f1, 0.0);
    assert!((r.f2 - 3.0 / 16.0).abs() < 1e-15);
    assert!((r.f3 - 7.0 / 16.0).abs() < 1e-15);
    assert_eq!(crossing_edges(&[2, 1]), 2);
    assert_eq!(crossing_edges(&[2, 2, 2]), 12);
}

#[test]
fn path_count_bound_frozen() {
    // K_6, 3 layers: 324 paths, 18 through the edge Maker already holds
    let r = path_count_upper_bound(6, 3, 1);
    assert!((r.f1 - 306.0 / 8.0).abs() < 1e-12);
    assert!((r.f2 - 18.0 / 4.0).abs() < 1e-12);
    assert!((r.total - 42.75).abs() < 1e-12);
}

#[test]
fn threshold_values() {
    let rs = threshold_bounds(ThresholdGame::RainbowSpanningTree, 100, 99).unwrap();
    assert_eq!(rs.upper, Some(1079.0));
    let c2 = threshold_bounds(ThresholdGame::RainbowConnectivity, 10, 2).unwrap();
    assert_eq!((c2.lower, c2.upper), (Some(2.0), Some(2.0)));
    let d = threshold_bounds(ThresholdGame::Diameter, 100, 3).unwrap();
    assert!((d.exponent - 0.5).abs() < 1e-15);
    assert!((d.upper.unwrap() - 72.0 * 10.0).abs() < 1e-9);
}

#[test]
fn box_game_without_criterion_can_be_lost() {
    // one box of 10 against a destroyer that moves first
    let w = play_box_game(&[10], 2, 1, Player::Breaker, BoxOpponent::GreedyDestroyer, &mut Rng::seed_from_u64(0));
    assert_eq!(w, Player::Breaker);
    assert!(!box_criterion(2, 1, 10));
}
