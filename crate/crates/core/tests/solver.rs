use std::time::Instant;

use mbrainbow::solver::{
    exact_threshold_bias, exhaustive_adversary, solve_exact, solve_exact_with, SolveOptions,
};
use mbrainbow::strategies::{PairingBreaker, PairingMaker};
use mbrainbow::{Board, ClaimState, EdgeRef, Error, GameConfig, Player, Predicate};

fn rc() -> Predicate {
    Predicate::RainbowConnected { max_len: None }
}

fn plain() -> SolveOptions {
    SolveOptions {
        canonical: false,
        parallel: false,
        cache: None,
    }
}

#[test]
fn c24_threshold_is_two() {
    let board = Board::new_layered_complete(4, 2).unwrap();
    let t = Instant::now();
    let scan = exact_threshold_bias(&board, &rc(), 3).unwrap();
    assert_eq!(scan.threshold, 2);
    assert_eq!(scan.outcomes, vec![(1, Player::Maker), (2, Player::Breaker), (3, Player::Breaker)]);
    assert!(t.elapsed().as_secs() < 300);
}

#[test]
fn c25_threshold_is_two() {
    let board = Board::new_layered_complete(5, 2).unwrap();
    assert_eq!(exact_threshold_bias(&board, &rc(), 2).unwrap().threshold, 2);
}

#[test]
fn small_n_values() {
    // with Maker first on C_{2,2} her first edge already joins the only pair
    let b2 = Board::new_layered_complete(2, 2).unwrap();
    assert_eq!(exact_threshold_bias(&b2, &rc(), 4), Err(Error::NotFound(4)));
    let b3 = Board::new_layered_complete(3, 2).unwrap();
    assert_eq!(exact_threshold_bias(&b3, &rc(), 3).unwrap().threshold, 2);
}

fn soundness_boards() -> Vec<(Board, Predicate)> {
    let mut out = Vec::new();
    for (n, s) in [(3, 1), (3, 2), (4, 1), (3, 3), (4, 2)] {
        for p in [
            rc(),
            Predicate::DiameterAtMost { bound: 2 },
            Predicate::RainbowSpanningTree,
            Predicate::RainbowPerfectMatching,
        ] {
            out.push((Board::new_layered_complete(n, s).unwrap(), p));
        }
    }
    let mut pre = Board::new_layered_complete(4, 2).unwrap();
    pre.claim(EdgeRef::new(0, 0, 1), ClaimState::Maker).unwrap();
    pre.claim(EdgeRef::new(1, 2, 3), ClaimState::Breaker).unwrap();
    out.push((pre, rc()));
    out
}

#[test]
fn canonical_and_plain_search_agree() {
    for (board, pred) in soundness_boards() {
        assert!(board.edge_count() <= 12);
        for b in 1..=3 {
            for first in [Player::Maker, Player::Breaker] {
                let mut cfg = GameConfig::new(b, pred.clone(), 0);
                cfg.first_player = first;
                let a = solve_exact_with(&board, &cfg, SolveOptions::default()).unwrap();
                let p = solve_exact_with(&board, &cfg, plain()).unwrap();
                assert_eq!(a.winner, p.winner, "{pred:?} n={} s={} b={b} {first:?}", board.n(), board.s());
                assert!(a.positions <= p.positions);
            }
        }
    }
}

#[test]
fn bias_monotonicity() {
    for (board, pred) in soundness_boards() {
        let mut breaker_won = false;
        for b in 1..=4 {
            let w = solve_exact(&board, &GameConfig::new(b, pred.clone(), 0)).unwrap();
            assert!(!(breaker_won && w == Player::Maker));
            breaker_won |= w == Player::Breaker;
        }
    }
}

#[test]
fn maker_bias_two() {
    // (2:1) on K_4 in one color: Maker gets 4 of 6 edges, plenty for a path
    let board = Board::new_layered_complete(4, 1).unwrap();
    let mut cfg = GameConfig::new(1, Predicate::RainbowConnected { max_len: Some(3) }, 0);
    cfg.maker_bias = 2;
    // one color means rainbow paths are single edges: Maker needs all of K_4
    assert_eq!(solve_exact(&board, &cfg).unwrap(), Player::Breaker);
    cfg.predicate = Predicate::DiameterAtMost { bound: 3 };
    assert_eq!(solve_exact(&board, &cfg).unwrap(), Player::Maker);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c24.cache");
    let board = Board::new_layered_complete(4, 2).unwrap();
    let cfg = GameConfig::new(2, rc(), 0);
    let opts = SolveOptions {
        cache: Some(path.clone()),
        ..SolveOptions::default()
    };
    let first = solve_exact_with(&board, &cfg, opts.clone()).unwrap();
    assert_eq!(first.loaded, 0);
    let second = solve_exact_with(&board, &cfg, opts.clone()).unwrap();
    assert_eq!(second.winner, first.winner);
    assert!(second.loaded > 0);
    let head = std::fs::read(&path).unwrap();
    assert!(head.starts_with(b"mbrainbow-solver-cache 1\n"));
    // a different instance ignores the file
    let other = solve_exact_with(&board, &GameConfig::new(1, rc(), 0), opts).unwrap();
    assert_eq!(other.loaded, 0);
    assert_eq!(other.winner, Player::Maker);
}

#[test]
fn too_large_board() {
    let board = Board::new_layered_complete(6, 2).unwrap();
    let cfg = GameConfig::new(1, rc(), 0);
    assert!(matches!(solve_exact(&board, &cfg), Err(Error::TooLarge { .. })));
}

#[test]
fn pairing_maker_wins_every_line() {
    for n in 2..=4 {
        let board = Board::new_layered_complete(n, 2).unwrap();
        let cfg = GameConfig::new(1, rc(), 0);
        let r = exhaustive_adversary(&board, &cfg, &PairingMaker, Player::Maker, 10_000_000).unwrap();
        assert!(r.all_won(), "n={n} {r:?}");
        assert!(r.forfeits.is_empty());
        assert_eq!(r.short_turns, 0);
    }
}

#[test]
fn pairing_breaker_wins_every_line() {
    for n in 4..=5 {
        let board = Board::new_layered_complete(n, 2).unwrap();
        let cfg = GameConfig::new(2, rc(), 0);
        let r = exhaustive_adversary(&board, &cfg, &PairingBreaker::default(), Player::Breaker, 10_000_000).unwrap();
        assert!(r.all_won(), "n={n} {r:?}");
        assert!(r.forfeits.is_empty());
    }
}
