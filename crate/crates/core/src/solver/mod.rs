//! Exact minimax for tiny boards, plus brute-force oracles.
//!
//! Positions are a pair of claim masks over the board's edges (at most 24),
//! the side to move and the number of claims left in the current turn.
//! Memo keys are canonical under the symmetry group of the predicate.

mod adversary;
mod cache;
mod hyper;
mod oracle;

pub use adversary::{exhaustive_adversary, AdversaryReport};
pub use hyper::{maker_vs_policy, random_hypergraph, solve_hypergraph, Hypergraph};
pub use oracle::{oracle_enumerate, oracle_list, OracleInstance, OracleItem};

use std::path::PathBuf;
use std::sync::atomic::{AtomicU8, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;

use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{GameConfig, Player, Predicate};
use crate::error::{Error, Result};
use crate::rainbow::ColoredSubgraph;

pub const MAX_EDGES: usize = 24;
const MAX_GROUP: usize = 50_000;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub canonical: bool,
    pub parallel: bool,
    pub cache: Option<PathBuf>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            canonical: true,
            parallel: true,
            cache: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub winner: Player,
    /// Memo entries at the end of the search.
    pub positions: usize,
    /// Size of the permutation group used for canonical keys.
    pub symmetries: usize,
    /// Entries read back from the on-disk cache.
    pub loaded: usize,
}

/// Canonical position key with its solved winner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolvedPosition {
    pub key: u64,
    pub winner: Player,
}

pub(crate) fn pack(maker: u32, breaker: u32, turn: Player, rem: usize) -> u64 {
    maker as u64 | (breaker as u64) << 24 | ((turn == Player::Breaker) as u64) << 48 | (rem as u64) << 49
}

/// Edge permutations acting on 24-bit masks through byte lookup tables.
struct Symmetry {
    tables: Vec<[[u32; 256]; 3]>,
}

impl Symmetry {
    fn identity(m: usize) -> Self {
        let perm: Vec<usize> = (0..m).collect();
        Symmetry {
            tables: vec![Self::table(&perm)],
        }
    }

    fn table(perm: &[usize]) -> [[u32; 256]; 3] {
        let mut t = [[0u32; 256]; 3];
        for (chunk, row) in t.iter_mut().enumerate() {
            for (byte, slot) in row.iter_mut().enumerate() {
                let mut out = 0u32;
                for bit in 0..8 {
                    let i = chunk * 8 + bit;
                    if byte >> bit & 1 == 1 && i < perm.len() {
                        out |= 1 << perm[i];
                    }
                }
                *slot = out;
            }
        }
        t
    }

    /// Layer permutations and split-preserving vertex permutations that
    /// leave the predicate unchanged.
    fn search(board: &Board, predicate: &Predicate) -> Result<Self> {
        let (n, s) = (board.n(), board.s());
        let split = board.bipartition();
        let vperms: Vec<Vec<usize>> = permutations(n)
            .into_iter()
            .filter(|p| (0..n).all(|v| split[p[v]] == split[v]))
            .collect();
        let lperms = permutations(s);
        if vperms.len() * lperms.len() > MAX_GROUP {
            return Err(Error::TooLarge {
                what: "symmetry group",
                value: vperms.len() * lperms.len(),
                cap: MAX_GROUP,
            });
        }
        let family: Option<std::collections::BTreeSet<Vec<EdgeRef>>> = match predicate {
            Predicate::OwnAny { sets } => Some(
                sets.iter()
                    .map(|f| {
                        let mut f = f.clone();
                        f.sort();
                        f.dedup();
                        f
                    })
                    .collect(),
            ),
            _ => None,
        };
        let map = |e: &EdgeRef, vp: &[usize], lp: &[usize]| EdgeRef::new(lp[e.layer], vp[e.u], vp[e.v]);
        let mut tables = Vec::new();
        for lp in &lperms {
            for vp in &vperms {
                if let Some(fam) = &family {
                    let ok = fam.iter().all(|f| {
                        let mut g: Vec<EdgeRef> = f.iter().map(|e| map(e, vp, lp)).collect();
                        g.sort();
                        fam.contains(&g)
                    });
                    if !ok {
                        continue;
                    }
                }
                let perm: Vec<usize> = (0..board.edge_count())
                    .map(|id| board.edge_id(&map(&board.edge(id), vp, lp)))
                    .collect();
                tables.push(Self::table(&perm));
            }
        }
        Ok(Symmetry { tables })
    }

    fn apply(t: &[[u32; 256]; 3], x: u32) -> u32 {
        t[0][(x & 0xff) as usize] | t[1][(x >> 8 & 0xff) as usize] | t[2][(x >> 16 & 0xff) as usize]
    }

    fn canonical(&self, maker: u32, breaker: u32) -> (u32, u32) {
        let mut best = u64::MAX;
        for t in &self.tables {
            let k = (Self::apply(t, maker) as u64) << 24 | Self::apply(t, breaker) as u64;
            best = best.min(k);
        }
        ((best >> 24) as u32, (best & 0xff_ffff) as u32)
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    fn rec(i: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(i + 1, p, out);
            p.swap(i, j);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Search state shared across biases: edge list, predicate cache and symmetry.
pub struct Solver {
    board: Board,
    edges: Vec<EdgeRef>,
    predicate: Predicate,
    pred_cache: Vec<AtomicU8>,
    sym: Symmetry,
    all: u32,
    start: (u32, u32),
    opts: SolveOptions,
}

struct Search<'a> {
    solver: &'a Solver,
    maker_bias: usize,
    breaker_bias: usize,
    memo: DashMap<u64, bool>,
}

impl Solver {
    pub fn new(board: &Board, predicate: &Predicate, opts: SolveOptions) -> Result<Self> {
        let m = board.edge_count();
        if m > MAX_EDGES {
            return Err(Error::TooLarge {
                what: "board edges",
                value: m,
                cap: MAX_EDGES,
            });
        }
        let edges: Vec<EdgeRef> = board.edges().collect();
        let mut start = (0u32, 0u32);
        for (i, e) in edges.iter().enumerate() {
            match board.state(e) {
                ClaimState::Maker => start.0 |= 1 << i,
                ClaimState::Breaker | ClaimState::Ghost => start.1 |= 1 << i,
                ClaimState::Free => {}
            }
        }
        let sym = if opts.canonical {
            Symmetry::search(board, predicate)?
        } else {
            Symmetry::identity(m)
        };
        Ok(Solver {
            board: board.clone(),
            edges,
            predicate: predicate.clone(),
            pred_cache: (0..1usize << m).map(|_| AtomicU8::new(0)).collect(),
            sym,
            all: ((1u64 << m) - 1) as u32,
            start,
            opts,
        })
    }

    pub fn symmetries(&self) -> usize {
        self.sym.tables.len()
    }

    fn pred(&self, mask: u32) -> bool {
        let slot = &self.pred_cache[mask as usize];
        match slot.load(Ordering::Relaxed) {
            1 => false,
            2 => true,
            _ => {
                let g = ColoredSubgraph::from_edges(
                    self.board.n(),
                    self.board.s(),
                    (0..self.edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.edges[i]),
                );
                let v = self.predicate.holds(&g).unwrap_or(false);
                slot.store(if v { 2 } else { 1 }, Ordering::Relaxed);
                v
            }
        }
    }

    /// Winner of the game with the given biases and first player.
    pub fn solve(&self, maker_bias: usize, breaker_bias: usize, first: Player) -> Result<SolveReport> {
        if maker_bias == 0 || breaker_bias == 0 {
            return Err(Error::InvalidParameter("biases must be positive".into()));
        }
        let search = Search {
            solver: self,
            maker_bias,
            breaker_bias,
            memo: DashMap::new(),
        };
        let desc = cache::Descriptor::new(&self.board, &self.predicate, maker_bias, breaker_bias, first, self.opts.canonical);
        let mut loaded = 0;
        if let Some(path) = &self.opts.cache {
            loaded = cache::load(path, &desc, &search.memo)?;
        }
        let rem = search.bias(first);
        let maker_wins = search.root(self.start.0, self.start.1, first, rem);
        if let Some(path) = &self.opts.cache {
            cache::save(path, &desc, &search.memo)?;
        }
        Ok(SolveReport {
            winner: if maker_wins { Player::Maker } else { Player::Breaker },
            positions: search.memo.len(),
            symmetries: self.symmetries(),
            loaded,
        })
    }
}

impl Search<'_> {
    fn bias(&self, p: Player) -> usize {
        match p {
            Player::Maker => self.maker_bias,
            Player::Breaker => self.breaker_bias,
        }
    }

    fn next(&self, turn: Player, rem: usize) -> (Player, usize) {
        if rem > 1 {
            (turn, rem - 1)
        } else {
            (turn.other(), self.bias(turn.other()))
        }
    }

    fn children(&self, maker: u32, breaker: u32, turn: Player, x: u32) -> (u32, u32) {
        match turn {
            Player::Maker => (maker | x, breaker),
            Player::Breaker => (maker, breaker | x),
        }
    }

    /// Terminal value if decided without search.
    fn settled(&self, maker: u32, breaker: u32) -> Option<bool> {
        let s = self.solver;
        if s.pred(maker) {
            return Some(true);
        }
        let free = s.all & !(maker | breaker);
        if free == 0 || !s.pred(maker | free) {
            return Some(false);
        }
        None
    }

    fn root(&self, maker: u32, breaker: u32, turn: Player, rem: usize) -> bool {
        if !self.solver.opts.parallel {
            return self.win(maker, breaker, turn, rem);
        }
        if let Some(v) = self.settled(maker, breaker) {
            return v;
        }
        let free = self.solver.all & !(maker | breaker);
        let moves: Vec<u32> = (0..32).map(|i| 1u32 << i).filter(|x| free & x != 0).collect();
        let (nt, nr) = self.next(turn, rem);
        let child = |&x: &u32| {
            let (m, b) = self.children(maker, breaker, turn, x);
            self.win(m, b, nt, nr)
        };
        let v = match turn {
            Player::Maker => moves.par_iter().any(child),
            Player::Breaker => moves.par_iter().all(child),
        };
        self.memo.insert(self.key(maker, breaker, turn, rem), v);
        v
    }

    fn key(&self, maker: u32, breaker: u32, turn: Player, rem: usize) -> u64 {
        let (m, b) = self.solver.sym.canonical(maker, breaker);
        pack(m, b, turn, rem)
    }

    fn win(&self, maker: u32, breaker: u32, turn: Player, rem: usize) -> bool {
        if let Some(v) = self.settled(maker, breaker) {
            return v;
        }
        let key = self.key(maker, breaker, turn, rem);
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let mut free = self.solver.all & !(maker | breaker);
        let (nt, nr) = self.next(turn, rem);
        let want = turn == Player::Maker;
        let mut v = !want;
        while free != 0 {
            let x = free & free.wrapping_neg();
            free &= free - 1;
            let (m, b) = self.children(maker, breaker, turn, x);
            if self.win(m, b, nt, nr) == want {
                v = want;
                break;
            }
        }
        self.memo.insert(key, v);
        v
    }
}

/// Winner of the game described by `board` and `config` under optimal play.
pub fn solve_exact(board: &Board, config: &GameConfig) -> Result<Player> {
    Ok(solve_exact_with(board, config, SolveOptions::default())?.winner)
}

pub fn solve_exact_with(board: &Board, config: &GameConfig, opts: SolveOptions) -> Result<SolveReport> {
    config.validate()?;
    let solver = Solver::new(board, &config.predicate, opts)?;
    solver.solve(config.maker_bias, config.breaker_bias, config.first_player)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdScan {
    /// Smallest Breaker-winning bias.
    pub threshold: usize,
    /// Winner for each scanned bias, ascending.
    pub outcomes: Vec<(usize, Player)>,
}

/// Smallest `b <= b_max` for which Breaker wins the (1:b) game with Maker
/// first. Every bias up to `b_max` is solved and the outcomes must be
/// monotone in `b`.
pub fn exact_threshold_bias(board: &Board, predicate: &Predicate, b_max: usize) -> Result<ThresholdScan> {
    exact_threshold_bias_with(board, predicate, b_max, SolveOptions::default())
}

pub fn exact_threshold_bias_with(
    board: &Board,
    predicate: &Predicate,
    b_max: usize,
    opts: SolveOptions,
) -> Result<ThresholdScan> {
    let solver = Solver::new(board, predicate, opts)?;
    let mut outcomes = Vec::new();
    let mut threshold = None;
    for b in 1..=b_max {
        let w = solver.solve(1, b, Player::Maker)?.winner;
        match (threshold, w) {
            (None, Player::Breaker) => threshold = Some(b),
            (Some(_), Player::Maker) => return Err(Error::NonMonotone(b)),
            _ => {}
        }
        outcomes.push((b, w));
    }
    match threshold {
        Some(threshold) => Ok(ThresholdScan { threshold, outcomes }),
        None => Err(Error::NotFound(b_max)),
    }
}
