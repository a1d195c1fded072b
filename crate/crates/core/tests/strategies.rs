use mbrainbow::rainbow::{has_rainbow_spanning_tree, rainbow_path_exists};
use mbrainbow::strategies::{
    distances, injective_sequences, path_count_report, sequence_path_counts, CliqueIsolationBreaker, DiameterBreaker,
    GreedyPathMaker, LayerIsolationBreaker, PairingBreaker, PairingMaker, RainbowMaker, RandomStrategy,
};
use mbrainbow::{play_game, Board, ClaimState, ColoredSubgraph, EdgeRef, GameConfig, Outcome, Player, Predicate};
use proptest::prelude::*;

fn rc() -> Predicate {
    Predicate::RainbowConnected { max_len: None }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pairing_maker_wins_one_to_one(n in 2usize..12, seed in any::<u64>(), greedy in any::<bool>()) {
        let cfg = GameConfig::new(1, rc(), seed);
        let board = Board::new_layered_complete(n, 2).unwrap();
        let r = if greedy {
            play_game(board, &mut PairingMaker, &mut GreedyPathMaker::default(), &cfg).unwrap()
        } else {
            play_game(board, &mut PairingMaker, &mut RandomStrategy, &cfg).unwrap()
        };
        prop_assert_eq!(r.outcome, Outcome::Maker);
    }

    #[test]
    fn pairing_breaker_wins_one_to_two(n in 4usize..12, seed in any::<u64>()) {
        let cfg = GameConfig::new(2, rc(), seed);
        let r = play_game(Board::new_layered_complete(n, 2).unwrap(), &mut RandomStrategy, &mut PairingBreaker::default(), &cfg).unwrap();
        prop_assert_eq!(r.outcome, Outcome::Breaker);
    }

    #[test]
    fn diameter_breaker_keeps_sentinels_apart(n in 12usize..30, s in 3usize..5, seed in any::<u64>()) {
        let e = 1.0 - 1.0 / s.div_ceil(2) as f64;
        let b = (24.0 * s as f64 * (n as f64).powf(e)).ceil() as usize;
        let mut br = DiameterBreaker::new(Some(s));
        br.verify = true;
        let cfg = GameConfig::new(b, Predicate::RainbowConnected { max_len: Some(s) }, seed);
        let r = play_game(Board::new_layered_complete(n, s).unwrap(), &mut GreedyPathMaker::default(), &mut br, &cfg).unwrap();
        prop_assert_eq!(&r.outcome, &Outcome::Breaker);
        let (v, w) = br.sentinels.unwrap();
        prop_assert!(distances(&r.board, ClaimState::Maker, v)[w] > s);
        prop_assert!(rainbow_path_exists(&r.board.subgraph(ClaimState::Maker), v, w, s).unwrap().is_none());
        prop_assert!(br.diag.bound_violations.is_empty());
        prop_assert_eq!(br.diag.distance_mismatches, 0);
    }

    #[test]
    fn sequence_counts_sum_to_total(n in 3usize..7, s in 1usize..4, len in 1usize..4, mask in prop::collection::vec(any::<bool>(), 1..60)) {
        prop_assume!(len < n);
        let mut g = ColoredSubgraph::new(n, s);
        let mut k = 0;
        for c in 0..s {
            for u in 0..n {
                for v in u + 1..n {
                    if mask[k % mask.len()] {
                        g.insert(EdgeRef::new(c, u, v));
                    }
                    k += 1;
                }
            }
        }
        let seq: Vec<usize> = (0..len).map(|i| i % s).collect();
        let counts = sequence_path_counts(&g, &seq);
        prop_assert_eq!(counts.len(), n * n);
        for v in 0..n {
            prop_assert_eq!(counts[v * n + v], 0);
            for w in 0..n {
                // reversing a path reverses its color word
                let rev: Vec<usize> = seq.iter().rev().copied().collect();
                prop_assert_eq!(counts[v * n + w], sequence_path_counts(&g, &rev)[w * n + v]);
            }
        }
    }
}

#[test]
fn injective_sequence_counts() {
    assert_eq!(injective_sequences(3, 3).len(), 6);
    assert_eq!(injective_sequences(5, 3).len(), 60);
    assert_eq!(injective_sequences(2, 3).len(), 0);
    assert!(injective_sequences(4, 2).iter().all(|q| q[0] != q[1]));
}

#[test]
fn path_counts_on_a_complete_board() {
    // every ordered pair of K_5 has 3*2 paths of length 3 per color word
    let mut g = ColoredSubgraph::new(5, 3);
    for c in 0..3 {
        for u in 0..5 {
            for v in u + 1..5 {
                g.insert(EdgeRef::new(c, u, v));
            }
        }
    }
    let r = path_count_report(&g, 1, &injective_sequences(3, 3));
    assert_eq!(r.min_count, 6);
    assert_eq!(r.zero_cells, 0);
    assert!((r.mean_count - 6.0).abs() < 1e-12);
    assert!(r.beta_hat > 0.0);
}

#[test]
fn layer_isolation_owns_a_layer_at_n6() {
    let b = (15.0 / 5f64.ln()).ceil() as usize + 1;
    assert_eq!(b, 11);
    for seed in 0..20 {
        let mut br = LayerIsolationBreaker::default();
        let cfg = GameConfig::new(b, Predicate::RainbowSpanningTree, seed);
        let r = play_game(Board::new_layered_complete(6, 5).unwrap(), &mut RandomStrategy, &mut br, &cfg).unwrap();
        assert!(br.owned_layer().is_some());
        assert!(has_rainbow_spanning_tree(&r.board.subgraph(ClaimState::Maker)).is_none());
        assert_eq!(r.outcome, Outcome::Breaker);
    }
}

#[test]
fn clique_isolation_isolates_a_vertex() {
    let n = 40usize;
    let s = 4 * (2.0 * (n as f64).ln()).ceil() as usize;
    let b = (1.2 * (s * n) as f64 / (n as f64).ln()) as usize;
    for seed in 0..5 {
        let mut br = CliqueIsolationBreaker::default();
        let cfg = GameConfig::new(b, rc(), seed);
        let r = play_game(Board::new_layered_complete(n, s).unwrap(), &mut RandomStrategy, &mut br, &cfg).unwrap();
        let v = br.isolated().expect("isolated vertex");
        assert_eq!(r.board.total_degree(v, ClaimState::Maker), 0);
        assert_eq!(r.outcome, Outcome::Breaker);
    }
}

#[test]
fn rainbow_maker_small_desk_game() {
    let (n, b) = (40, 1);
    let mut wins = 0;
    for seed in 0..10 {
        let mut mk = RainbowMaker::desk(n, 3, 3, b);
        let cfg = GameConfig::new(b, Predicate::RainbowConnected { max_len: Some(3) }, seed);
        let r = play_game(Board::new_layered_complete(n, 3).unwrap(), &mut mk, &mut RandomStrategy, &cfg).unwrap();
        wins += r.outcome.maker_won() as usize;
    }
    assert!(wins >= 9, "{wins}/10");
}

#[test]
fn breaker_first_pairing_still_loses_to_maker() {
    let mut cfg = GameConfig::new(1, rc(), 4);
    cfg.first_player = Player::Breaker;
    let r = play_game(Board::new_layered_complete(6, 2).unwrap(), &mut PairingMaker, &mut RandomStrategy, &cfg).unwrap();
    assert_eq!(r.outcome, Outcome::Maker);
}
