use serde::{Deserialize, Serialize};

use crate::engine::Player;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// One box of MinBox. Elements are interchangeable, so only counts are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinBox {
    pub size: usize,
    pub w_m: usize,
    pub w_b: usize,
}

impl MinBox {
    pub fn free(&self) -> usize {
        self.size - self.w_m - self.w_b
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinBoxState {
    pub boxes: Vec<MinBox>,
    /// Minimum box size D.
    pub d: usize,
    pub gamma: f64,
    pub b: usize,
    /// Integer count replacing `gamma |F|` in the activity test when set.
    #[serde(default)]
    pub target: Option<usize>,
}

impl MinBoxState {
    pub fn new(sizes: &[usize], d: usize, gamma: f64, b: usize) -> Self {
        MinBoxState {
            boxes: sizes
                .iter()
                .map(|&size| MinBox {
                    size,
                    w_m: 0,
                    w_b: 0,
                })
                .collect(),
            d,
            gamma,
            b,
            target: None,
        }
    }

    pub fn n_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn active(&self, i: usize) -> bool {
        let f = &self.boxes[i];
        match self.target {
            Some(t) => f.w_m < t,
            None => (f.w_m as f64) < self.gamma * f.size as f64,
        }
    }

    pub fn danger(&self, i: usize) -> i64 {
        let f = &self.boxes[i];
        f.w_b as i64 - (self.b * f.w_m) as i64
    }

    pub fn maker_claim(&mut self, i: usize) -> Result<()> {
        let f = &mut self.boxes[i];
        if f.free() == 0 {
            return Err(Error::IllegalClaim(format!("box {i} is full")));
        }
        f.w_m += 1;
        Ok(())
    }

    pub fn breaker_claim(&mut self, i: usize) -> Result<()> {
        let f = &mut self.boxes[i];
        if f.free() == 0 {
            return Err(Error::IllegalClaim(format!("box {i} is full")));
        }
        f.w_b += 1;
        Ok(())
    }

    /// Counts Maker's element without taking one from the free pool. Used when
    /// a composite strategy obtains an element of the box by other means.
    pub fn record_maker(&mut self, i: usize) {
        self.boxes[i].w_m += 1;
    }

    pub fn record_breaker(&mut self, i: usize) {
        self.boxes[i].w_b += 1;
    }

    pub fn any_active(&self) -> bool {
        (0..self.boxes.len()).any(|i| self.active(i))
    }
}

/// Box index of Maker's next element: the active box of largest danger
/// `w_B - b*w_M` among those with a free element, lowest index on ties.
pub fn minbox_maker_move(state: &MinBoxState) -> Result<usize> {
    (0..state.boxes.len())
        .filter(|&i| state.active(i) && state.boxes[i].free() > 0)
        .max_by_key(|&i| (state.danger(i), std::cmp::Reverse(i)))
        .ok_or(Error::NoActiveBox)
}

/// `w_B <= b (w_M + ln n + 1)` for every active box.
pub fn minbox_invariant_check(state: &MinBoxState) -> bool {
    let ln_n = (state.boxes.len() as f64).ln();
    (0..state.boxes.len()).filter(|&i| state.active(i)).all(|i| {
        let f = &state.boxes[i];
        f.w_b as f64 <= state.b as f64 * (f.w_m as f64 + ln_n + 1.0)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinBoxOpponent {
    Random,
    /// Puts all claims into the active box of largest danger.
    Focused,
    /// One claim per active box, cycling through them by danger.
    Spread,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinBoxReport {
    /// Every box reached `w_M >= gamma |F|`.
    pub maker_reached_all: bool,
    /// Number of checks of the invariant that failed.
    pub violations: usize,
    pub checks: usize,
    pub final_state: MinBoxState,
}

fn opponent_pick(st: &MinBoxState, opp: MinBoxOpponent, rng: &mut Rng, k: usize) -> Option<usize> {
    let with_free: Vec<usize> = (0..st.boxes.len()).filter(|&i| st.boxes[i].free() > 0).collect();
    if with_free.is_empty() {
        return None;
    }
    let active: Vec<usize> = with_free.iter().copied().filter(|&i| st.active(i)).collect();
    let pool = if active.is_empty() { &with_free } else { &active };
    Some(match opp {
        MinBoxOpponent::Random => {
            let total: usize = with_free.iter().map(|&i| st.boxes[i].free()).sum();
            let mut r = rng.index(total);
            *with_free
                .iter()
                .find(|&&i| {
                    let f = st.boxes[i].free();
                    if r < f {
                        true
                    } else {
                        r -= f;
                        false
                    }
                })
                .unwrap()
        }
        MinBoxOpponent::Focused => *pool
            .iter()
            .max_by_key(|&&i| (st.danger(i), std::cmp::Reverse(i)))
            .unwrap(),
        MinBoxOpponent::Spread => {
            let mut order = pool.clone();
            order.sort_by_key(|&i| (std::cmp::Reverse(st.danger(i)), i));
            order[k % order.len()]
        }
    })
}

/// Plays MinBox with Maker using `minbox_maker_move` against `opp`, checking
/// the invariant after every move of either player.
pub fn play_minbox_game(
    mut st: MinBoxState,
    first: Player,
    opp: MinBoxOpponent,
    rng: &mut Rng,
) -> MinBoxReport {
    let mut violations = 0;
    let mut checks = 0;
    let mut turn = first;
    loop {
        if !st.any_active() || st.boxes.iter().all(|f| f.free() == 0) {
            break;
        }
        match turn {
            Player::Maker => match minbox_maker_move(&st) {
                Ok(i) => st.maker_claim(i).unwrap(),
                // every active box is full, so nothing can change any more
                Err(_) => break,
            },
            Player::Breaker => {
                for k in 0..st.b {
                    match opponent_pick(&st, opp, rng, k) {
                        Some(i) => st.breaker_claim(i).unwrap(),
                        None => break,
                    }
                }
            }
        }
        checks += 1;
        if !minbox_invariant_check(&st) {
            violations += 1;
        }
        turn = turn.other();
    }
    let maker_reached_all = (0..st.boxes.len()).all(|i| !st.active(i));
    MinBoxReport {
        maker_reached_all,
        violations,
        checks,
        final_state: st,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn danger_rule() {
        let mut st = MinBoxState::new(&[10, 10], 5, 0.5, 2);
        st.boxes[0].w_b = 3;
        st.boxes[1].w_b = 1;
        assert_eq!(minbox_maker_move(&st).unwrap(), 0);
        st.boxes[0].w_m = 1;
        st.boxes[1].w_b = 2;
        assert_eq!(minbox_maker_move(&st).unwrap(), 1);
    }

    #[test]
    fn invariant_examples() {
        let st = MinBoxState::new(&[10; 8], 10, 0.2, 1);
        assert!(minbox_invariant_check(&st));
        let mut st = st;
        st.boxes[0].w_b = 4;
        assert!(!minbox_invariant_check(&st));
    }

    #[test]
    fn no_active_box() {
        let mut st = MinBoxState::new(&[4], 4, 0.5, 1);
        st.boxes[0].w_m = 2;
        assert_eq!(minbox_maker_move(&st), Err(Error::NoActiveBox));
    }
}
