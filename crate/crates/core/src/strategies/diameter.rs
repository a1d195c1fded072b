use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::basic::bfs;
use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::rng::Rng;

const INF: usize = usize::MAX;

/// Per-game record of what the diameter Breaker did and which bounds held.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiameterDiagnostics {
    /// Sizes of parts (i) to (iv) for each Breaker turn.
    pub parts: Vec<[usize; 4]>,
    /// Checks of the ball-size and round bounds (with `rho = s n / floor(b/4)`).
    pub bound_checks: usize,
    pub bound_violations: Vec<String>,
    /// The same bounds with `4sn/b` in place of `rho`, which only hold for large `4sn/b`.
    pub literal_violations: usize,
    /// Turns where incremental distances disagreed with a fresh BFS.
    pub distance_mismatches: usize,
    pub forfeited: bool,
}

/// Breaker strategy that keeps two sentinel vertices far apart in Maker's graph.
#[derive(Clone, Debug)]
pub struct DiameterBreaker {
    /// Paths of at most this length between the sentinels are blocked.
    pub path_len: Option<usize>,
    /// Recompute distances from scratch every turn and compare.
    pub verify: bool,
    pub sentinels: Option<(usize, usize)>,
    dist: [Vec<usize>; 2],
    adj: Vec<Vec<usize>>,
    maker_deg: Vec<usize>,
    round: usize,
    bias: usize,
    pub diag: DiameterDiagnostics,
}

impl Default for DiameterBreaker {
    fn default() -> Self {
        DiameterBreaker {
            path_len: None,
            verify: true,
            sentinels: None,
            dist: [Vec::new(), Vec::new()],
            adj: Vec::new(),
            maker_deg: Vec::new(),
            round: 0,
            bias: 0,
            diag: DiameterDiagnostics::default(),
        }
    }
}

impl DiameterBreaker {
    pub fn new(path_len: Option<usize>) -> Self {
        DiameterBreaker {
            path_len,
            ..Default::default()
        }
    }

    pub fn k(&self, s: usize) -> usize {
        self.path_len.unwrap_or(s).div_ceil(2).saturating_sub(1)
    }

    /// Color-blind distance from the sentinel `which` (0 or 1).
    pub fn distance(&self, which: usize, z: usize) -> usize {
        self.dist[which][z]
    }

    fn add_maker_edge(&mut self, e: &EdgeRef) {
        self.adj[e.u].push(e.v);
        self.adj[e.v].push(e.u);
        self.maker_deg[e.u] += 1;
        self.maker_deg[e.v] += 1;
        for d in self.dist.iter_mut() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if d[a] != INF && d[a] + 1 < d[b] {
                    d[b] = d[a] + 1;
                    let mut q = VecDeque::from([b]);
                    while let Some(x) = q.pop_front() {
                        for &y in &self.adj[x] {
                            if d[x] + 1 < d[y] {
                                d[y] = d[x] + 1;
                                q.push_back(y);
                            }
                        }
                    }
                }
            }
        }
    }

    fn near(&self, z: usize) -> usize {
        self.dist[0][z].min(self.dist[1][z])
    }

    /// Checks the ball-size and round bounds once `done` Breaker turns are complete.
    fn check_bounds(&mut self, board: &Board, done: usize) {
        let b = self.bias;
        let q = b / 4;
        if q == 0 {
            return;
        }
        let (n, s) = (board.n() as f64, board.s() as f64);
        let rho = s * n / q as f64;
        let lit = 4.0 * s * n / b as f64;
        let k = self.k(board.s());
        let r = done as f64;
        let mut ball = 0.0;
        for i in 0..=k + 1 {
            ball += (1.0 + rho).powi(i as i32);
            for t in 0..2 {
                let size = self.dist[t].iter().filter(|&&d| d <= i).count();
                self.diag.bound_checks += 1;
                if size as f64 > ball + 1e-9 {
                    self.diag
                        .bound_violations
                        .push(format!("after {done} turns: |C<={i}| = {size} > {ball:.3}"));
                }
                if size as f64 > 2.0 * lit.powi(i as i32) + 1e-9 {
                    self.diag.literal_violations += 1;
                }
            }
            let touching = (0..board.n())
                .any(|z| self.near(z) <= i && board.total_degree(z, ClaimState::Free) > 0);
            if touching {
                self.diag.bound_checks += 1;
                if r > 2.0 * ball * rho + 1e-9 {
                    self.diag
                        .bound_violations
                        .push(format!("after {done} turns: free edge at C<={i}, bound {:.3}", 2.0 * ball * rho));
                }
                if r >= 4.0 * lit.powi(i as i32 + 1) {
                    self.diag.literal_violations += 1;
                }
            }
        }
    }
}

struct Turn<'a> {
    board: &'a Board,
    taken: HashSet<EdgeRef>,
    out: Vec<EdgeRef>,
    free_deg: Vec<usize>,
}

impl Turn<'_> {
    fn is_free(&self, e: &EdgeRef) -> bool {
        self.board.is_free(e) && !self.taken.contains(e)
    }

    fn take(&mut self, e: EdgeRef) {
        self.taken.insert(e);
        self.free_deg[e.u] -= 1;
        self.free_deg[e.v] -= 1;
        self.out.push(e);
    }

    fn free_at(&self, x: usize) -> Vec<EdgeRef> {
        self.board
            .free_edges_at_any_layer(x)
            .into_iter()
            .filter(|e| !self.taken.contains(e))
            .collect()
    }
}

impl Strategy for DiameterBreaker {
    fn name(&self) -> String {
        "diameter-breaker".into()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        if let Some(l) = self.path_len {
            m.insert("path_len".into(), l as f64);
        }
        m
    }

    fn play(&mut self, view: &TurnView, rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        let n = board.n();
        self.round += 1;
        if self.sentinels.is_none() {
            let untouched: Vec<usize> =
                (0..n).filter(|&x| board.total_degree(x, ClaimState::Maker) == 0).collect();
            if untouched.len() < 2 {
                self.diag.forfeited = true;
                return Err(Forfeit::new("no-untouched-pair"));
            }
            let (v, w) = (untouched[0], untouched[1]);
            self.sentinels = Some((v, w));
            self.adj = vec![Vec::new(); n];
            self.maker_deg = vec![0; n];
            self.dist = [vec![INF; n], vec![INF; n]];
            self.dist[0][v] = 0;
            self.dist[1][w] = 0;
            for e in board.edges_with(ClaimState::Maker) {
                self.add_maker_edge(&e);
            }
        } else {
            for e in view.opponent_moves {
                self.add_maker_edge(e);
            }
        }
        if self.verify {
            let (v, w) = self.sentinels.unwrap();
            if bfs(&self.adj, &[v]) != self.dist[0] || bfs(&self.adj, &[w]) != self.dist[1] {
                self.diag.distance_mismatches += 1;
            }
        }
        let b = view.budget;
        self.bias = self.bias.max(b);
        self.check_bounds(board, self.round - 1);
        let q = b / 4;
        let k = self.k(board.s());
        let mut t = Turn {
            board,
            taken: HashSet::new(),
            out: Vec::new(),
            free_deg: (0..n).map(|z| board.total_degree(z, ClaimState::Free)).collect(),
        };
        let mut sizes = [0usize; 4];
        // (i) and (ii): random free edges at both ends of Maker's last edge
        if let Some(last) = view.opponent_moves.last() {
            for (part, x) in [(0, last.u), (1, last.v)] {
                let pick = rng.sample(&t.free_at(x), q);
                sizes[part] = pick.len();
                for e in pick {
                    t.take(e);
                }
            }
        }
        // (iii): edges at the closest layer around the sentinels
        for _ in 0..q {
            let Some(i) = (0..n).filter(|&z| t.free_deg[z] > 0).map(|z| self.near(z)).filter(|&d| d != INF).min()
            else {
                break;
            };
            let cands: Vec<usize> = (0..n).filter(|&z| t.free_deg[z] > 0 && self.near(z) == i).collect();
            let mut best: Option<EdgeRef> = None;
            'layers: for c in 0..board.s() {
                for &z in &cands {
                    for y in 0..n {
                        if y == z {
                            continue;
                        }
                        let e = EdgeRef::new(c, z, y);
                        if t.is_free(&e) && best.is_none_or(|b| e < b) {
                            best = Some(e);
                        }
                    }
                }
                if best.is_some() {
                    break 'layers;
                }
            }
            match best {
                Some(e) => {
                    t.take(e);
                    sizes[2] += 1;
                }
                None => break,
            }
        }
        // (iv): every free edge between the k-balls and Maker's vertices
        let in_ball: Vec<bool> = (0..n).map(|z| self.near(z) <= k).collect();
        let mut part4 = Vec::new();
        for z in (0..n).filter(|&z| in_ball[z]) {
            for e in t.free_at(z) {
                let y = e.other(z);
                if self.maker_deg[y] > 0 && (!in_ball[y] || z < y) {
                    part4.push(e);
                }
            }
        }
        part4.sort();
        part4.dedup();
        sizes[3] = part4.len();
        self.diag.parts.push(sizes);
        if part4.len() > q {
            self.diag.forfeited = true;
            return Err(Forfeit::new(format!("part (iv) needs {} > {q} edges", part4.len())));
        }
        for e in part4 {
            t.take(e);
        }
        Ok(t.out)
    }

    fn finish(&mut self, board: &Board, _rng: &mut Rng) {
        if self.sentinels.is_none() {
            return;
        }
        // rebuild from the final board so Maker's last edges are included
        let (v, w) = self.sentinels.unwrap();
        self.adj = vec![Vec::new(); board.n()];
        self.maker_deg = vec![0; board.n()];
        self.dist = [vec![INF; board.n()], vec![INF; board.n()]];
        self.dist[0][v] = 0;
        self.dist[1][w] = 0;
        for e in board.edges_with(ClaimState::Maker) {
            self.add_maker_edge(&e);
        }
        self.check_bounds(board, self.round);
    }
}
