use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SbgCell {
    Free,
    Maker,
    Breaker,
    Haunted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperedge {
    pub members: Vec<usize>,
    /// Maker and Breaker elements of the set.
    pub c_f: usize,
    /// Maker elements of the set.
    pub c_fm: usize,
    pub free: usize,
}

/// Spooky Balancing Game with a Ghost. Elements are `0..n_elements`;
/// hyperedges start empty and only grow.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SbgState {
    pub m: usize,
    pub b: usize,
    pub ell: f64,
    /// Maximum hyperedge size.
    pub cap: usize,
    pub cells: Vec<SbgCell>,
    pub hyperedges: Vec<Hyperedge>,
    member_of: Vec<Vec<usize>>,
    #[serde(skip)]
    heap: BinaryHeap<(i64, Reverse<usize>)>,
    #[serde(skip)]
    heap_valid: bool,
}

impl PartialEq for SbgState {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m
            && self.b == o.b
            && self.ell == o.ell
            && self.cap == o.cap
            && self.cells == o.cells
            && self.hyperedges == o.hyperedges
    }
}

impl SbgState {
    pub fn new(n_elements: usize, h: usize, m: usize, b: usize, ell: f64, cap: usize) -> Self {
        SbgState {
            m,
            b,
            ell,
            cap,
            cells: vec![SbgCell::Free; n_elements],
            hyperedges: vec![Hyperedge::default(); h],
            member_of: vec![Vec::new(); n_elements],
            heap: BinaryHeap::new(),
            heap_valid: false,
        }
    }

    pub fn h(&self) -> usize {
        self.hyperedges.len()
    }

    /// Adds an empty hyperedge and returns its index.
    pub fn add_hyperedge(&mut self) -> usize {
        self.hyperedges.push(Hyperedge::default());
        self.hyperedges.len() - 1
    }

    /// `m c_F - (b+m) c_FM`, i.e. the deficit scaled by `b+m`.
    fn key(&self, i: usize) -> i64 {
        let f = &self.hyperedges[i];
        (self.m * f.c_f) as i64 - ((self.b + self.m) * f.c_fm) as i64
    }

    pub fn deficit(&self, i: usize) -> f64 {
        self.key(i) as f64 / (self.b + self.m) as f64
    }

    fn touch(&mut self, i: usize) {
        if self.heap_valid && self.hyperedges[i].free > 0 {
            let k = self.key(i);
            self.heap.push((k, Reverse(i)));
        }
    }

    fn rebuild_heap(&mut self) {
        self.heap = (0..self.hyperedges.len())
            .filter(|&i| self.hyperedges[i].free > 0)
            .map(|i| (self.key(i), Reverse(i)))
            .collect();
        self.heap_valid = true;
    }

    /// Ghost adds a free element to hyperedge `i`.
    pub fn grow(&mut self, i: usize, x: usize) -> Result<()> {
        if x >= self.cells.len() || self.cells[x] != SbgCell::Free {
            return Err(Error::IllegalClaim(format!("element {x} is not free")));
        }
        let f = &mut self.hyperedges[i];
        if f.members.len() >= self.cap {
            return Err(Error::GrowthOverflow {
                edge: i,
                cap: self.cap,
            });
        }
        if self.member_of[x].contains(&i) {
            return Ok(());
        }
        f.members.push(x);
        f.free += 1;
        self.member_of[x].push(i);
        self.touch(i);
        Ok(())
    }

    fn set(&mut self, x: usize, to: SbgCell) -> Result<()> {
        if x >= self.cells.len() || self.cells[x] != SbgCell::Free {
            return Err(Error::IllegalClaim(format!("element {x} is not free")));
        }
        self.cells[x] = to;
        for k in 0..self.member_of[x].len() {
            let i = self.member_of[x][k];
            let f = &mut self.hyperedges[i];
            f.free -= 1;
            match to {
                SbgCell::Maker => {
                    f.c_f += 1;
                    f.c_fm += 1;
                }
                SbgCell::Breaker => f.c_f += 1,
                _ => {}
            }
            self.touch(i);
        }
        Ok(())
    }

    pub fn grant_maker(&mut self, x: usize) -> Result<()> {
        self.set(x, SbgCell::Maker)
    }

    pub fn claim_breaker(&mut self, x: usize) -> Result<()> {
        self.set(x, SbgCell::Breaker)
    }

    pub fn haunt(&mut self, x: usize) -> Result<()> {
        self.set(x, SbgCell::Haunted)
    }

    pub fn is_free(&self, x: usize) -> bool {
        self.cells[x] == SbgCell::Free
    }

    pub fn hyperedges_of(&self, x: usize) -> &[usize] {
        &self.member_of[x]
    }

    fn best_hyperedge(&mut self) -> Option<usize> {
        if !self.heap_valid {
            self.rebuild_heap();
        }
        while let Some(&(k, Reverse(i))) = self.heap.peek() {
            if self.hyperedges[i].free > 0 && self.key(i) == k {
                return Some(i);
            }
            self.heap.pop();
        }
        None
    }
}

/// The deficit-greedy choice when some hyperedge with a free element has
/// deficit above `-ell`.
pub fn sbg_best_move(state: &mut SbgState) -> Option<usize> {
    let i = state.best_hyperedge()?;
    if state.deficit(i) <= -state.ell {
        return None;
    }
    state.hyperedges[i]
        .members
        .iter()
        .copied()
        .find(|&x| state.cells[x] == SbgCell::Free)
}

/// Deficit-greedy pick: the first free element of the hyperedge with the largest
/// deficit `m/(b+m) c_F - c_FM`, lowest index on ties. When every deficit is at
/// most `-ell`, or no hyperedge has a free element, the lowest free element.
pub fn sbg_maker_move(state: &mut SbgState) -> Option<usize> {
    sbg_best_move(state).or_else(|| state.cells.iter().position(|&c| c == SbgCell::Free))
}

/// One round: Ghost growth, then Maker picks until she holds `m` new elements
/// (Ghost may haunt each pick), then Breaker's claims. Returns Maker's elements.
pub fn sbg_round(
    state: &mut SbgState,
    growth: &[(usize, usize)],
    mut ghost_haunts: impl FnMut(&SbgState, usize) -> bool,
    breaker_claims: &[usize],
) -> Result<Vec<usize>> {
    for &(i, x) in growth {
        state.grow(i, x)?;
    }
    let mut granted = Vec::new();
    while granted.len() < state.m {
        let Some(x) = sbg_maker_move(state) else { break };
        if ghost_haunts(state, x) {
            state.haunt(x)?;
        } else {
            state.grant_maker(x)?;
            granted.push(x);
        }
    }
    if breaker_claims.len() > state.b {
        return Err(Error::IllegalClaim(format!(
            "{} Breaker claims with bias {}",
            breaker_claims.len(),
            state.b
        )));
    }
    for &x in breaker_claims {
        state.claim_breaker(x)?;
    }
    Ok(granted)
}

/// `c_FM >= m/(b+m) c_F - ell` for every hyperedge.
pub fn sbg_goal_holds(state: &SbgState) -> bool {
    (0..state.hyperedges.len()).all(|i| state.deficit(i) <= state.ell)
}

/// Index of a hyperedge violating the goal, with the largest deficit.
pub fn sbg_worst(state: &SbgState) -> Option<(usize, f64)> {
    (0..state.hyperedges.len())
        .map(|i| (i, state.deficit(i)))
        .filter(|&(_, d)| d > state.ell)
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
}

/// `M >= 9(m+b) ln h` and `ell >= 5mb/(m+b) sqrt(M ln h / (m+b))`.
pub fn sbg_conditions(m: f64, b: f64, h: f64, big_m: f64, ell: f64) -> (bool, bool) {
    let lh = h.ln();
    let c1 = big_m >= 9.0 * (m + b) * lh;
    let c2 = ell >= 5.0 * m * b / (m + b) * (big_m * lh / (m + b)).sqrt();
    (c1, c2)
}
