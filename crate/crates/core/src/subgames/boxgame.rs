use serde::{Deserialize, Serialize};

use crate::engine::Player;
use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    Free,
    Maker,
    Breaker,
}

/// Disjoint boxes for Box(p, q). Elements are addressed as (box, slot).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxState {
    pub boxes: Vec<Vec<Cell>>,
    pub p: usize,
    pub q: usize,
    /// BoxMaker claims still to make in the current round.
    pub claims_left: usize,
}

impl BoxState {
    pub fn new(sizes: &[usize], p: usize, q: usize) -> Self {
        BoxState {
            boxes: sizes.iter().map(|&a| vec![Cell::Free; a]).collect(),
            p,
            q,
            claims_left: p,
        }
    }

    pub fn free_in(&self, i: usize) -> usize {
        self.boxes[i].iter().filter(|&&c| c == Cell::Free).count()
    }

    pub fn destroyed(&self, i: usize) -> bool {
        self.boxes[i].contains(&Cell::Breaker)
    }

    pub fn completed(&self, i: usize) -> bool {
        self.boxes[i].iter().all(|&c| c == Cell::Maker)
    }

    pub fn maker_won(&self) -> bool {
        (0..self.boxes.len()).any(|i| self.completed(i))
    }

    pub fn all_destroyed(&self) -> bool {
        (0..self.boxes.len()).all(|i| self.destroyed(i))
    }

    pub fn has_free(&self) -> bool {
        self.boxes.iter().flatten().any(|&c| c == Cell::Free)
    }

    pub fn claim(&mut self, (i, j): (usize, usize), who: Cell) -> Result<()> {
        let cell = self
            .boxes
            .get_mut(i)
            .and_then(|b| b.get_mut(j))
            .ok_or_else(|| Error::IllegalClaim(format!("no element ({i}, {j})")))?;
        if *cell != Cell::Free || who == Cell::Free {
            return Err(Error::IllegalClaim(format!("element ({i}, {j}) is taken")));
        }
        *cell = who;
        if who == Cell::Maker {
            self.claims_left = self.claims_left.saturating_sub(1);
        }
        Ok(())
    }

    pub fn start_round(&mut self) {
        self.claims_left = self.p;
    }

    fn first_free(&self, i: usize) -> usize {
        self.boxes[i].iter().position(|&c| c == Cell::Free).unwrap()
    }
}

/// BoxMaker's next element. Among boxes Breaker has not touched: if one can be
/// finished with the claims left this round, take the smallest such box;
/// otherwise keep the survivors level by playing in the box with the most
/// free elements. Ties go to the lowest index.
pub fn box_maker_move(state: &BoxState) -> Result<(usize, usize)> {
    let live: Vec<(usize, usize)> = (0..state.boxes.len())
        .filter(|&i| !state.destroyed(i))
        .map(|i| (i, state.free_in(i)))
        .filter(|&(_, f)| f > 0)
        .collect();
    if live.is_empty() {
        return Err(Error::NoFreeElement);
    }
    let budget = state.claims_left.max(1);
    let finishable = live
        .iter()
        .filter(|&&(_, f)| f <= budget)
        .min_by_key(|&&(i, f)| (f, i));
    let (i, _) = match finishable {
        Some(&x) => x,
        None => *live.iter().max_by_key(|&&(i, f)| (f, std::cmp::Reverse(i))).unwrap(),
    };
    Ok((i, state.first_free(i)))
}

/// BoxBreaker opponents used in tests and experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxOpponent {
    /// Uniformly random free element.
    Random,
    /// Hits the untouched box with the fewest free elements.
    GreedyDestroyer,
}

impl BoxOpponent {
    pub fn pick(self, state: &BoxState, rng: &mut Rng) -> Option<(usize, usize)> {
        let free: Vec<(usize, usize)> = state
            .boxes
            .iter()
            .enumerate()
            .flat_map(|(i, b)| {
                b.iter()
                    .enumerate()
                    .filter(|(_, &c)| c == Cell::Free)
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        if free.is_empty() {
            return None;
        }
        match self {
            BoxOpponent::Random => Some(free[rng.index(free.len())]),
            BoxOpponent::GreedyDestroyer => {
                let target = (0..state.boxes.len())
                    .filter(|&i| !state.destroyed(i) && state.free_in(i) > 0)
                    .min_by_key(|&i| (state.free_in(i), i));
                match target {
                    Some(i) => Some((i, state.first_free(i))),
                    None => Some(free[0]),
                }
            }
        }
    }
}

/// Plays Box(p, q) with the BoxMaker strategy against `opponent`; returns the winner.
pub fn play_box_game(
    sizes: &[usize],
    p: usize,
    q: usize,
    first: Player,
    opponent: BoxOpponent,
    rng: &mut Rng,
) -> Player {
    let mut st = BoxState::new(sizes, p, q);
    let mut turn = first;
    loop {
        if st.maker_won() {
            return Player::Maker;
        }
        if st.all_destroyed() || !st.has_free() {
            return Player::Breaker;
        }
        match turn {
            Player::Maker => {
                st.start_round();
                for _ in 0..p {
                    match box_maker_move(&st) {
                        Ok(e) => st.claim(e, Cell::Maker).unwrap(),
                        Err(_) => break,
                    }
                    if st.maker_won() {
                        return Player::Maker;
                    }
                }
            }
            Player::Breaker => {
                for _ in 0..q {
                    match opponent.pick(&st, rng) {
                        Some(e) => st.claim(e, Cell::Breaker).unwrap(),
                        None => break,
                    }
                }
            }
        }
        turn = turn.other();
    }
}
