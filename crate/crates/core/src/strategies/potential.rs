use std::collections::BTreeMap;

use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::rng::Rng;

/// Beck-potential pick for Breaker on a hypergraph with at most 64 elements.
/// Every set without a Breaker element weighs `(1+q)^(-k/p)`, `k` the number of
/// its elements Maker does not own; Breaker takes the free element of largest
/// total weight, lowest index on ties.
pub fn potential_pick(sets: &[u64], n_elements: usize, maker: u64, breaker: u64, p: usize, q: usize) -> Option<usize> {
    let base = (1.0 + q as f64).ln() / p as f64;
    let taken = maker | breaker;
    let mut score = vec![0.0f64; n_elements];
    for &f in sets {
        if f & breaker != 0 {
            continue;
        }
        let w = (-base * (f & !maker).count_ones() as f64).exp();
        let mut free = f & !taken;
        while free != 0 {
            let x = free.trailing_zeros() as usize;
            score[x] += w;
            free &= free - 1;
        }
    }
    (0..n_elements)
        .filter(|&x| taken >> x & 1 == 0)
        .fold(None, |best: Option<usize>, x| match best {
            Some(b) if score[b] >= score[x] => Some(b),
            _ => Some(x),
        })
}

/// Potential-greedy Breaker for board games with explicit winning sets.
#[derive(Clone, Debug)]
pub struct PotentialBreaker {
    pub sets: Vec<Vec<EdgeRef>>,
    /// Maker's bias in the potential's exponent.
    pub p: usize,
}

impl PotentialBreaker {
    pub fn new(sets: Vec<Vec<EdgeRef>>, p: usize) -> Self {
        PotentialBreaker { sets, p }
    }
}

impl Strategy for PotentialBreaker {
    fn name(&self) -> String {
        "potential-breaker".into()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([("p".into(), self.p as f64)])
    }

    fn play(&mut self, view: &TurnView, _rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board: &Board = view.board;
        let q = view.budget;
        let base = (1.0 + q as f64).ln() / self.p as f64;
        let mut mine: Vec<EdgeRef> = Vec::new();
        for _ in 0..q {
            let mut score: BTreeMap<EdgeRef, f64> = BTreeMap::new();
            for f in &self.sets {
                if f.iter().any(|e| board.state(e) == ClaimState::Breaker || mine.contains(e)) {
                    continue;
                }
                let open = f.iter().filter(|e| board.state(e) != ClaimState::Maker).count();
                let w = (-base * open as f64).exp();
                for e in f.iter().filter(|e| board.is_free(e)) {
                    *score.entry(*e).or_default() += w;
                }
            }
            let pick = score
                .iter()
                .fold(None, |best: Option<(EdgeRef, f64)>, (&e, &w)| match best {
                    Some((_, bw)) if bw >= w => best,
                    _ => Some((e, w)),
                })
                .map(|(e, _)| e);
            match pick {
                Some(e) => mine.push(e),
                None => break,
            }
        }
        Ok(mine)
    }
}
