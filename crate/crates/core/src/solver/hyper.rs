use std::collections::HashMap;

use crate::criteria::HypergraphSummary;
use crate::engine::Player;
use crate::error::{Error, Result};
use crate::rng::Rng;

pub const MAX_ELEMENTS: usize = 32;

/// Winning sets over elements `0..n`, one bitmask per set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub n: usize,
    pub sets: Vec<u64>,
}

impl Hypergraph {
    pub fn new(n: usize, sets: Vec<u64>) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                what: "hypergraph elements",
                value: n,
                cap: MAX_ELEMENTS,
            });
        }
        if sets.iter().any(|&f| f == 0 || (n < 64 && f >> n != 0)) {
            return Err(Error::InvalidParameter("set outside the ground set or empty".into()));
        }
        Ok(Hypergraph { n, sets })
    }

    pub fn summary(&self) -> HypergraphSummary {
        HypergraphSummary::Explicit {
            sets: self
                .sets
                .iter()
                .map(|&f| (0..self.n).filter(|&x| f >> x & 1 == 1).collect())
                .collect(),
        }
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn settled(&self, maker: u64, breaker: u64) -> Option<bool> {
        if self.sets.iter().any(|&f| f & !maker == 0) {
            return Some(true);
        }
        let free = self.all() & !(maker | breaker);
        if free == 0 || self.sets.iter().all(|&f| f & breaker != 0) {
            return Some(false);
        }
        None
    }
}

/// Random hypergraph with `m` sets whose sizes are uniform in `sizes`.
pub fn random_hypergraph(rng: &mut Rng, n: usize, m: usize, sizes: std::ops::RangeInclusive<usize>) -> Result<Hypergraph> {
    let (lo, hi) = (*sizes.start(), *sizes.end());
    if lo == 0 || hi > n || lo > hi {
        return Err(Error::InvalidParameter(format!("set sizes {lo}..={hi} on {n} elements")));
    }
    let ground: Vec<usize> = (0..n).collect();
    let sets = (0..m)
        .map(|_| {
            let k = lo + rng.index(hi - lo + 1);
            rng.sample(&ground, k).iter().fold(0u64, |acc, &x| acc | 1 << x)
        })
        .collect();
    Hypergraph::new(n, sets)
}

type Key = (u64, u64, bool, usize);

struct Game<'a> {
    h: &'a Hypergraph,
    p: usize,
    q: usize,
    memo: HashMap<Key, bool>,
}

impl Game<'_> {
    fn next(&self, turn: Player, rem: usize) -> (Player, usize) {
        if rem > 1 {
            (turn, rem - 1)
        } else {
            match turn {
                Player::Maker => (Player::Breaker, self.q),
                Player::Breaker => (Player::Maker, self.p),
            }
        }
    }

    fn minimax(&mut self, maker: u64, breaker: u64, turn: Player, rem: usize) -> bool {
        if let Some(v) = self.h.settled(maker, breaker) {
            return v;
        }
        let key = (maker, breaker, turn == Player::Maker, rem);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (nt, nr) = self.next(turn, rem);
        let want = turn == Player::Maker;
        let mut free = self.h.all() & !(maker | breaker);
        let mut v = !want;
        while free != 0 {
            let x = free & free.wrapping_neg();
            free &= free - 1;
            let r = if want {
                self.minimax(maker | x, breaker, nt, nr)
            } else {
                self.minimax(maker, breaker | x, nt, nr)
            };
            if r == want {
                v = want;
                break;
            }
        }
        self.memo.insert(key, v);
        v
    }

    fn against<F: Fn(u64, u64) -> Option<usize>>(&mut self, policy: &F, maker: u64, breaker: u64, turn: Player, rem: usize) -> bool {
        if let Some(v) = self.h.settled(maker, breaker) {
            return v;
        }
        let key = (maker, breaker, turn == Player::Maker, rem);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (nt, nr) = self.next(turn, rem);
        let v = match turn {
            Player::Breaker => {
                let x = policy(maker, breaker).expect("free element exists");
                let x = 1u64 << x;
                debug_assert!((maker | breaker) & x == 0);
                self.against(policy, maker, breaker | x, nt, nr)
            }
            Player::Maker => {
                let mut free = self.h.all() & !(maker | breaker);
                let mut v = false;
                while free != 0 {
                    let x = free & free.wrapping_neg();
                    free &= free - 1;
                    if self.against(policy, maker | x, breaker, nt, nr) {
                        v = true;
                        break;
                    }
                }
                v
            }
        };
        self.memo.insert(key, v);
        v
    }
}

/// Winner of the (p:q) game on `h` under optimal play by both sides.
pub fn solve_hypergraph(h: &Hypergraph, p: usize, q: usize, first: Player) -> Result<Player> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter("biases must be positive".into()));
    }
    let mut g = Game { h, p, q, memo: HashMap::new() };
    let rem = if first == Player::Maker { p } else { q };
    Ok(if g.minimax(0, 0, first, rem) { Player::Maker } else { Player::Breaker })
}

/// Winner when Breaker claims one element at a time by `policy` and Maker
/// plays optimally against it.
pub fn maker_vs_policy<F: Fn(u64, u64) -> Option<usize>>(h: &Hypergraph, p: usize, q: usize, first: Player, policy: F) -> Result<Player> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter("biases must be positive".into()));
    }
    let mut g = Game { h, p, q, memo: HashMap::new() };
    let rem = if first == Player::Maker { p } else { q };
    Ok(if g.against(&policy, 0, 0, first, rem) { Player::Maker } else { Player::Breaker })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_set() {
        let h = Hypergraph::new(2, vec![0b11]).unwrap();
        assert_eq!(solve_hypergraph(&h, 1, 1, Player::Maker).unwrap(), Player::Breaker);
        assert_eq!(solve_hypergraph(&h, 2, 1, Player::Maker).unwrap(), Player::Maker);
    }

    #[test]
    fn triangle_of_pairs() {
        // all pairs of {0,1,2}: Maker first takes two elements eventually
        let h = Hypergraph::new(3, vec![0b011, 0b101, 0b110]).unwrap();
        assert_eq!(solve_hypergraph(&h, 1, 1, Player::Maker).unwrap(), Player::Maker);
        assert_eq!(solve_hypergraph(&h, 1, 2, Player::Maker).unwrap(), Player::Breaker);
    }

    #[test]
    fn lazy_policy() {
        let h = Hypergraph::new(3, vec![0b011, 0b101, 0b110]).unwrap();
        let lazy = |m: u64, b: u64| (0..3).find(|&x| (m | b) >> x & 1 == 0);
        assert_eq!(maker_vs_policy(&h, 1, 2, Player::Maker, lazy).unwrap(), Player::Breaker);
    }
}
