use std::io::Cursor;

use mbrainbow::strategies::{GreedyPathMaker, PairingMaker, RandomStrategy};
use mbrainbow::{
    play_game, replay, Board, ClaimState, EdgeRef, GameConfig, Outcome, Player, Predicate, Side, Transcript,
};
use proptest::prelude::*;

fn predicates() -> impl Strategy<Value = Predicate> {
    prop_oneof![
        Just(Predicate::RainbowConnected { max_len: None }),
        (1usize..4).prop_map(|m| Predicate::RainbowConnected { max_len: Some(m) }),
        (1usize..4).prop_map(|bound| Predicate::DiameterAtMost { bound }),
        Just(Predicate::RainbowSpanningTree),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn board_partitions_edges(n in 2usize..9, s in 1usize..4, claims in prop::collection::vec((any::<u16>(), any::<bool>()), 0..40)) {
        let mut b = Board::new_layered_complete(n, s).unwrap();
        prop_assert_eq!(b.edge_count(), s * n * (n - 1) / 2);
        for (k, maker) in claims {
            let free = b.free_ids().to_vec();
            if free.is_empty() {
                break;
            }
            let e = b.edge(free[k as usize % free.len()] as usize);
            let who = if maker { ClaimState::Maker } else { ClaimState::Breaker };
            b.claim(e, who).unwrap();
            prop_assert!(b.claim(e, ClaimState::Maker).is_err());
        }
        let (m, br, f) = (b.count(ClaimState::Maker), b.count(ClaimState::Breaker), b.free_count());
        prop_assert_eq!(m + br + f, b.edge_count());
        prop_assert_eq!(b.free_ids().len(), f);
        prop_assert_eq!(b.subgraph(ClaimState::Maker).len(), m);
        for v in 0..n {
            let deg: usize = (0..s).map(|c| b.degree(v, c, ClaimState::Maker)).sum();
            prop_assert_eq!(deg, b.total_degree(v, ClaimState::Maker));
        }
        let back: Board = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        for e in b.edges() {
            prop_assert_eq!(back.state(&e), b.state(&e));
        }
        prop_assert_eq!(back.bipartition(), b.bipartition());
    }

    #[test]
    fn edge_ids_are_a_bijection(n in 2usize..12, s in 1usize..5) {
        let b = Board::new_layered_complete(n, s).unwrap();
        for id in 0..b.edge_count() {
            let e = b.edge(id);
            prop_assert!(e.u < e.v && e.v < n && e.layer < s);
            prop_assert_eq!(b.edge_id(&e), id);
        }
    }

    #[test]
    fn bipartition_is_balanced(n in 2usize..40) {
        let b = Board::new_layered_complete(n, 1).unwrap();
        let left = b.vertices_on(Side::L).len();
        let right = b.vertices_on(Side::R).len();
        prop_assert_eq!(left + right, n);
        prop_assert!(left == right || left == right + 1);
    }

    #[test]
    fn random_games_replay(n in 3usize..8, s in 1usize..4, bias in 1usize..4, seed in any::<u64>(), pred in predicates(), breaker_first in any::<bool>()) {
        let mut cfg = GameConfig::new(bias, pred, seed);
        if breaker_first {
            cfg.first_player = Player::Breaker;
        }
        let r = play_game(Board::new_layered_complete(n, s).unwrap(), &mut RandomStrategy, &mut RandomStrategy, &cfg).unwrap();
        prop_assert_eq!(r.board.free_count(), 0);
        prop_assert_eq!(r.transcript.moves.len(), r.board.edge_count());
        prop_assert_eq!(replay(&r.transcript).unwrap(), r.outcome.clone());
        let expected = cfg.predicate.holds(&r.board.subgraph(ClaimState::Maker)).unwrap();
        prop_assert_eq!(r.outcome.maker_won(), expected);
        // every full round gives each player exactly their bias
        let first = r.transcript.moves.first().unwrap().player;
        prop_assert_eq!(first, cfg.first_player);
        let mut buf = Vec::new();
        r.transcript.write_jsonl(&mut buf).unwrap();
        let back = Transcript::read_jsonl(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back, r.transcript);
    }

    #[test]
    fn same_seed_same_game(n in 3usize..7, bias in 1usize..3, seed in any::<u64>()) {
        let cfg = GameConfig::new(bias, Predicate::RainbowConnected { max_len: None }, seed);
        let a = play_game(Board::new_layered_complete(n, 2).unwrap(), &mut GreedyPathMaker::default(), &mut RandomStrategy, &cfg).unwrap();
        let b = play_game(Board::new_layered_complete(n, 2).unwrap(), &mut GreedyPathMaker::default(), &mut RandomStrategy, &cfg).unwrap();
        prop_assert_eq!(a.transcript, b.transcript);
    }
}

#[test]
fn per_round_claim_counts() {
    let cfg = GameConfig::new(3, Predicate::RainbowConnected { max_len: None }, 5);
    let r = play_game(Board::new_layered_complete(5, 2).unwrap(), &mut RandomStrategy, &mut RandomStrategy, &cfg).unwrap();
    // 20 edges: rounds of 1 + 3 claims, five full rounds
    let mut per_round = std::collections::BTreeMap::<(u64, bool), usize>::new();
    for m in &r.transcript.moves {
        *per_round.entry((m.round, m.player == Player::Maker)).or_default() += 1;
    }
    for round in 1..=5 {
        assert_eq!(per_round[&(round, true)], 1);
        assert_eq!(per_round[&(round, false)], 3);
    }
}

#[test]
fn tampered_transcript_is_rejected() {
    let cfg = GameConfig::new(1, Predicate::RainbowConnected { max_len: None }, 3);
    let r = play_game(Board::new_layered_complete(4, 2).unwrap(), &mut PairingMaker, &mut RandomStrategy, &cfg).unwrap();
    assert_eq!(r.outcome, Outcome::Maker);
    let mut t = r.transcript.clone();
    t.moves[1].edge = t.moves[0].edge;
    assert!(replay(&t).is_err());
    let mut t = r.transcript;
    t.moves.truncate(4);
    assert!(matches!(replay(&t), Ok(Outcome::Undecided) | Err(_)));
}

#[test]
fn edge_ref_normalizes_endpoints() {
    let e = EdgeRef::new(1, 5, 2);
    assert_eq!((e.u, e.v), (2, 5));
    assert_eq!(e.other(2), 5);
    assert!(e.touches(5) && !e.touches(3));
}
