use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::rng::Rng;

/// Maker's pairing strategy on two layers: the two parallel edges of a pair
/// form a pair, and Breaker's claim of one is answered with its twin.
#[derive(Clone, Debug, Default)]
pub struct PairingMaker;

fn fresh_pair(board: &Board, taken: &[EdgeRef]) -> Option<EdgeRef> {
    let n = board.n();
    for u in 0..n {
        for v in u + 1..n {
            let a = EdgeRef::new(0, u, v);
            let b = EdgeRef::new(1, u, v);
            if board.is_free(&a) && board.is_free(&b) && !taken.contains(&a) && !taken.contains(&b) {
                return Some(a);
            }
        }
    }
    None
}

impl Strategy for PairingMaker {
    fn name(&self) -> String {
        "pairing-maker".into()
    }

    fn play(&mut self, view: &TurnView, _rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        let mut out = Vec::new();
        for e in view.opponent_moves {
            if out.len() == view.budget {
                break;
            }
            let twin = EdgeRef::new(1 - e.layer, e.u, e.v);
            if board.is_free(&twin) && !out.contains(&twin) {
                out.push(twin);
            }
        }
        while out.len() < view.budget {
            match fresh_pair(board, &out) {
                Some(e) => out.push(e),
                None => break,
            }
        }
        Ok(out)
    }
}

/// Breaker's strategy for bias 2 on two layers: take both edges of an
/// untouched pair `v, w`, then answer `xv` in one color with `xw` in the other.
#[derive(Clone, Debug, Default)]
pub struct PairingBreaker {
    pub target: Option<(usize, usize)>,
}

impl PairingBreaker {
    fn respond(&self, e: &EdgeRef) -> Option<EdgeRef> {
        let (v, w) = self.target?;
        let other = 1 - e.layer;
        if e.touches(v) && !e.touches(w) {
            Some(EdgeRef::new(other, e.other(v), w))
        } else if e.touches(w) && !e.touches(v) {
            Some(EdgeRef::new(other, e.other(w), v))
        } else {
            None
        }
    }
}

impl Strategy for PairingBreaker {
    fn name(&self) -> String {
        "pairing-breaker".into()
    }

    fn play(&mut self, view: &TurnView, _rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        let mut out = Vec::new();
        if self.target.is_none() {
            let n = board.n();
            let untouched: Vec<usize> = (0..n)
                .filter(|&x| board.total_degree(x, ClaimState::Maker) == 0)
                .collect();
            if untouched.len() < 2 {
                return Err(Forfeit::new("no-untouched-pair"));
            }
            let (v, w) = (untouched[0], untouched[1]);
            self.target = Some((v, w));
            for c in 0..2 {
                let e = EdgeRef::new(c, v, w);
                if board.is_free(&e) && out.len() < view.budget {
                    out.push(e);
                }
            }
            return Ok(out);
        }
        for e in view.opponent_moves {
            if let Some(r) = self.respond(e) {
                match board.state(&r) {
                    ClaimState::Free => {
                        if !out.contains(&r) {
                            out.push(r);
                        }
                    }
                    ClaimState::Maker => return Err(Forfeit::new("pairing-broken")),
                    _ => {}
                }
            }
        }
        if out.len() > view.budget {
            return Err(Forfeit::new("pairing-broken"));
        }
        let mut free: Vec<EdgeRef> = board.free_ids().iter().map(|&id| board.edge(id as usize)).collect();
        free.sort();
        for e in free {
            if out.len() == view.budget {
                break;
            }
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(out)
    }
}
