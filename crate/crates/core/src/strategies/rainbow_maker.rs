use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::board::{Board, ClaimState, EdgeRef, Side};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::error::Error;
use crate::rng::Rng;
use crate::subgames::{minbox_maker_move, sbg_best_move, sbg_goal_holds, MinBoxState, SbgState};

/// Parameters of the three-subgame Maker. `asymptotic` gives the literal constants,
/// `desk` a pack that is usable at a few hundred vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RainbowMakerParams {
    /// Length bound of the paths Maker builds; `k = floor((path_len-1)/2)`.
    pub path_len: usize,
    pub k: usize,
    pub p: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub delta: f64,
    pub gamma: f64,
    /// Maker out-degree per (vertex, color, side) that ends the type-1 game there.
    pub d1: usize,
    /// Exposure cap per (vertex, color, side).
    pub e2: usize,
    pub ell2: f64,
    pub m2: usize,
    pub ell3: f64,
    pub m3: usize,
    /// Only color sequences with distinct colors are balanced in type 3.
    pub rainbow_tuples: bool,
}

fn t_of(path_len: usize) -> f64 {
    1.0 - 1.0 / path_len.div_ceil(2) as f64
}

fn sbg_ell(b3: f64, big_m: f64, h: f64) -> f64 {
    5.0 * b3 / (1.0 + b3) * (big_m * h.ln() / (1.0 + b3)).sqrt()
}

impl RainbowMakerParams {
    /// Constants as stated for large `n`. Most of them degenerate at small `n`.
    pub fn asymptotic(n: usize, layers: usize, path_len: usize, b: usize) -> Self {
        let nf = n as f64;
        let k = (path_len.max(1) - 1) / 2;
        let p = nf.powf(-t_of(path_len));
        let s = path_len as f64;
        let delta = 10f64.powf(-80.0 * s) * s.powf(-20.0);
        let gamma = 10f64.powf(-4.0 * s) * delta;
        let alpha1 = 1.0 / (50.0 * b.max(1) as f64);
        let alpha2 = 2.0 * alpha1;
        let m3 = (p * nf / (100.0 * gamma)).powi(2 * k as i32);
        RainbowMakerParams {
            path_len,
            k,
            p,
            alpha1,
            alpha2,
            delta,
            gamma,
            d1: (alpha1 * nf / 2.0).floor() as usize,
            e2: (alpha2 * nf / 2.0).floor() as usize,
            ell2: delta * p * nf,
            m2: n - 1,
            ell3: delta * p * (p * nf).powi(2 * k as i32),
            m3: if m3 >= usize::MAX as f64 { usize::MAX } else { m3.ceil() as usize },
            rainbow_tuples: layers > 1,
        }
    }

    /// Desk-scale pack: a target out-degree Maker can reach before Breaker fills
    /// the boxes, and SBG sizes and slacks raised until both SBG conditions hold.
    pub fn desk(n: usize, layers: usize, path_len: usize, b: usize) -> Self {
        let mut pp = Self::asymptotic(n, layers, path_len, b);
        let nf = n as f64;
        let b3 = 3.0 * b as f64;
        pp.delta = 0.05;
        pp.gamma = 0.2;
        pp.d1 = ((n - 1) / (16 * (b + 1))).max(1);
        pp.alpha1 = 2.0 * pp.d1 as f64 / nf;
        pp.alpha2 = 0.8;
        pp.e2 = ((pp.alpha2 * nf / 2.0).floor() as usize).max(pp.d1);
        let h2 = (layers * n) as f64;
        pp.m2 = (n - 1).max((9.0 * (1.0 + b3) * h2.ln()).ceil() as usize);
        pp.ell2 = (pp.delta * pp.p * nf).max(sbg_ell(b3, pp.m2 as f64, h2));
        let h3 = (layers as f64).powi(2 * pp.k as i32 + 1) * nf * nf;
        pp.m3 = pp.d1.pow(2 * pp.k as u32).max((9.0 * (1.0 + b3) * h3.ln()).ceil() as usize);
        pp.ell3 = (pp.delta * pp.p * (pp.p * nf).powi(2 * pp.k as i32)).max(sbg_ell(b3, pp.m3 as f64, h3));
        pp
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("path_len".into(), self.path_len as f64),
            ("k".into(), self.k as f64),
            ("p".into(), self.p),
            ("alpha1".into(), self.alpha1),
            ("alpha2".into(), self.alpha2),
            ("delta".into(), self.delta),
            ("gamma".into(), self.gamma),
            ("d1".into(), self.d1 as f64),
            ("e2".into(), self.e2 as f64),
            ("ell2".into(), self.ell2),
            ("m2".into(), self.m2 as f64),
            ("ell3".into(), self.ell3),
            ("m3".into(), self.m3 as f64),
            ("rainbow_tuples".into(), self.rainbow_tuples as u8 as f64),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coin {
    Untossed,
    Success,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RainbowMakerStats {
    pub moves_by_type: [usize; 3],
    pub exposures: usize,
    pub failures: usize,
    pub tosses: usize,
    pub successes: usize,
    /// Subgame claims of edges Maker already owned.
    pub imagined: usize,
    /// Moves where the subgame of that type had nothing to do.
    pub idle: usize,
    pub type3_sets: usize,
    pub max_type3_set: usize,
    pub sbg2_goal_at_end: bool,
    pub sbg3_goal_at_end: bool,
}

/// Maker for rainbow connectivity (and, on one layer, the diameter game):
/// type-1 moves expand every vertex into both halves, types 2 and 3 claim
/// coin-selected edges guided by two balancing games.
#[derive(Clone, Debug)]
pub struct RainbowMaker {
    pub params: RainbowMakerParams,
    pub bias: usize,
    n: usize,
    layers: usize,
    side: Vec<Side>,
    tuples: Vec<Vec<usize>>,
    seqs: [Vec<Vec<usize>>; 2],
    tuple_seq: Vec<[usize; 2]>,
    tuples_by_seq: [Vec<Vec<usize>>; 2],
    pub minbox: Option<MinBoxState>,
    box_perm: Vec<Vec<usize>>,
    box_ptr: Vec<usize>,
    /// Maker's out-neighbors per box `(c*n + v)*2 + D`.
    pub out: Vec<Vec<usize>>,
    /// Exposure bits per edge id: 1 = at the lower endpoint, 2 = at the higher.
    pub exposed: Vec<u8>,
    pub coin: Vec<Coin>,
    pub sbg2: Option<SbgState>,
    pub sbg3: Option<SbgState>,
    type3_index: HashMap<(u32, u32, u32), usize>,
    reach: [Vec<Vec<Vec<usize>>>; 2],
    pending: [Vec<EdgeRef>; 3],
    pub stats: RainbowMakerStats,
}

impl RainbowMaker {
    pub fn new(params: RainbowMakerParams, bias: usize) -> Self {
        RainbowMaker {
            params,
            bias,
            n: 0,
            layers: 0,
            side: Vec::new(),
            tuples: Vec::new(),
            seqs: [Vec::new(), Vec::new()],
            tuple_seq: Vec::new(),
            tuples_by_seq: [Vec::new(), Vec::new()],
            minbox: None,
            box_perm: Vec::new(),
            box_ptr: Vec::new(),
            out: Vec::new(),
            exposed: Vec::new(),
            coin: Vec::new(),
            sbg2: None,
            sbg3: None,
            type3_index: HashMap::new(),
            reach: [Vec::new(), Vec::new()],
            pending: [Vec::new(), Vec::new(), Vec::new()],
            stats: RainbowMakerStats::default(),
        }
    }

    pub fn desk(n: usize, layers: usize, path_len: usize, b: usize) -> Self {
        Self::new(RainbowMakerParams::desk(n, layers, path_len, b), b)
    }

    /// Move type of round `r`: 1, 2, 3, 1, ...
    pub fn move_type(round: u64) -> usize {
        ((round + 2) % 3 + 1) as usize
    }

    fn box_index(&self, v: usize, c: usize, d: Side) -> usize {
        (c * self.n + v) * 2 + d.index()
    }

    /// Color sequences used for the middle-edge balancing game.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn gamma2(&self) -> Vec<bool> {
        self.coin.iter().map(|&c| c == Coin::Success).collect()
    }

    fn init(&mut self, board: &Board) {
        let n = board.n();
        let s = board.s();
        self.n = n;
        self.layers = s;
        self.side = board.bipartition().to_vec();
        let len = 2 * self.params.k + 1;
        let mut all = vec![Vec::new()];
        for _ in 0..len {
            all = all
                .into_iter()
                .flat_map(|t: Vec<usize>| {
                    (0..s).map(move |c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        let distinct: Vec<Vec<usize>> = all
            .iter()
            .filter(|t| {
                let mut u = (*t).clone();
                u.sort();
                u.dedup();
                u.len() == t.len()
            })
            .cloned()
            .collect();
        self.tuples = if self.params.rainbow_tuples && !distinct.is_empty() { distinct } else { all };
        let k = self.params.k;
        for t in &self.tuples {
            let left: Vec<usize> = t[..k].to_vec();
            let right: Vec<usize> = t[k + 1..].iter().rev().copied().collect();
            let mut ids = [0; 2];
            for (d, seq) in [left, right].into_iter().enumerate() {
                ids[d] = match self.seqs[d].iter().position(|x| *x == seq) {
                    Some(i) => i,
                    None => {
                        self.seqs[d].push(seq);
                        self.seqs[d].len() - 1
                    }
                };
            }
            self.tuple_seq.push(ids);
        }
        for d in 0..2 {
            self.tuples_by_seq[d] = vec![Vec::new(); self.seqs[d].len()];
            self.reach[d] = (0..self.seqs[d].len())
                .map(|_| (0..n).map(|v| if k == 0 { vec![v] } else { Vec::new() }).collect())
                .collect();
        }
        for (ti, ids) in self.tuple_seq.iter().enumerate() {
            for d in 0..2 {
                self.tuples_by_seq[d][ids[d]].push(ti);
            }
        }
        let nb = 2 * s * n;
        let mut sizes = vec![0; nb];
        for c in 0..s {
            for v in 0..n {
                for d in [Side::L, Side::R] {
                    sizes[self.box_index(v, c, d)] =
                        (0..n).filter(|&w| w != v && self.side[w] == d).count();
                }
            }
        }
        let mut mb = MinBoxState::new(&sizes, n / 2, self.params.alpha1, 6 * self.bias);
        mb.target = Some(self.params.d1);
        self.minbox = Some(mb);
        self.box_perm = vec![Vec::new(); nb];
        self.box_ptr = vec![0; nb];
        self.out = vec![Vec::new(); nb];
        self.exposed = vec![0; board.edge_count()];
        self.coin = vec![Coin::Untossed; board.edge_count()];
        let b3 = 3 * self.bias;
        let mut sbg2 = SbgState::new(board.edge_count(), s * n, 1, b3, self.params.ell2, self.params.m2);
        for id in 0..board.edge_count() {
            let e = board.edge(id);
            sbg2.grow(e.layer * n + e.u, id).unwrap();
            sbg2.grow(e.layer * n + e.v, id).unwrap();
        }
        self.sbg2 = Some(sbg2);
        self.sbg3 = Some(SbgState::new(board.edge_count(), 0, 1, b3, self.params.ell3, self.params.m3));
        let earlier = board.edges_with(ClaimState::Breaker);
        for p in self.pending.iter_mut() {
            p.extend(earlier.iter().copied());
        }
        if k == 0 {
            for v in 0..n {
                for w in 0..n {
                    if v != w {
                        for ti in 0..self.tuples.len() {
                            let e = EdgeRef::new(self.tuples[ti][0], v, w);
                            // ignore overflow: single-edge sets always fit
                            let _ = self.type3_add(board, v, w, ti, e);
                        }
                    }
                }
            }
        }
    }

    fn type3_add(&mut self, board: &Board, v: usize, w: usize, ti: usize, e: EdgeRef) -> Result<(), Forfeit> {
        if !board.is_free(&e) {
            return Ok(());
        }
        let id = board.edge_id(&e);
        let sbg3 = self.sbg3.as_mut().unwrap();
        if !sbg3.is_free(id) {
            return Ok(());
        }
        let key = (v as u32, w as u32, ti as u32);
        let h = match self.type3_index.get(&key) {
            Some(&h) => h,
            None => {
                let h = sbg3.add_hyperedge();
                self.type3_index.insert(key, h);
                self.stats.type3_sets += 1;
                h
            }
        };
        match sbg3.grow(h, id) {
            Ok(()) => {
                self.stats.max_type3_set = self.stats.max_type3_set.max(sbg3.hyperedges[h].members.len());
                Ok(())
            }
            Err(Error::GrowthOverflow { .. }) => Err(Forfeit::new("type-3 set exceeds its size cap")),
            Err(_) => Ok(()),
        }
    }

    fn compute_reach(&self, d: Side, seq: &[usize], u: usize) -> Vec<usize> {
        let mut frontier = vec![u];
        for &c in seq {
            let mut next: Vec<usize> = frontier
                .iter()
                .flat_map(|&x| self.out[self.box_index(x, c, d)].iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            frontier = next;
        }
        frontier
    }

    /// Ghost growth after Maker gained the out-edge `v -> y` of color `c` into side `d`.
    fn reach_grew(&mut self, board: &Board, v: usize, c: usize, d: Side) -> Result<(), Forfeit> {
        let k = self.params.k;
        if k == 0 {
            return Ok(());
        }
        let di = d.index();
        let mut changes: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for si in 0..self.seqs[di].len() {
            if !self.seqs[di][si].contains(&c) {
                continue;
            }
            let us: Vec<usize> = if k == 1 { vec![v] } else { (0..self.n).collect() };
            for u in us {
                let seq = self.seqs[di][si].clone();
                let new = self.compute_reach(d, &seq, u);
                let old = &self.reach[di][si][u];
                let added: Vec<usize> = new.iter().copied().filter(|y| old.binary_search(y).is_err()).collect();
                if !added.is_empty() {
                    self.reach[di][si][u] = new;
                    changes.push((si, u, added));
                }
            }
        }
        for (si, u, added) in changes {
            for y in added {
                for other in 0..self.n {
                    if other == u {
                        continue;
                    }
                    for idx in 0..self.tuples_by_seq[di][si].len() {
                        let ti = self.tuples_by_seq[di][si][idx];
                        let mid = self.tuples[ti][k];
                        let oseq = self.tuple_seq[ti][1 - di];
                        let zs = self.reach[1 - di][oseq][other].clone();
                        for z in zs {
                            if z == y {
                                continue;
                            }
                            let e = EdgeRef::new(mid, y, z);
                            let (vv, ww) = if d == Side::L { (u, other) } else { (other, u) };
                            self.type3_add(board, vv, ww, ti, e)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn type1(&mut self, board: &Board, chosen: &[EdgeRef], rng: &mut Rng) -> Result<Option<EdgeRef>, Forfeit> {
        let n = self.n;
        for e in std::mem::take(&mut self.pending[0]) {
            let b1 = self.box_index(e.u, e.layer, self.side[e.v]);
            let b2 = self.box_index(e.v, e.layer, self.side[e.u]);
            let mb = self.minbox.as_mut().unwrap();
            mb.record_breaker(b1);
            mb.record_breaker(b2);
        }
        let Ok(bi) = minbox_maker_move(self.minbox.as_ref().unwrap()) else {
            self.stats.idle += 1;
            return Ok(None);
        };
        let (c, v, d) = (bi / 2 / n, bi / 2 % n, if bi % 2 == 0 { Side::L } else { Side::R });
        if self.box_perm[bi].is_empty() && self.box_ptr[bi] == 0 {
            let mut cands: Vec<usize> = (0..n).filter(|&w| w != v && self.side[w] == d).collect();
            rng.shuffle(&mut cands);
            self.box_perm[bi] = cands;
        }
        loop {
            let ptr = self.box_ptr[bi];
            if ptr >= self.box_perm[bi].len() {
                return Err(Forfeit::new("type-1 exposure ran out of edges"));
            }
            let w = self.box_perm[bi][ptr];
            self.box_ptr[bi] += 1;
            let e = EdgeRef::new(c, v, w);
            let id = board.edge_id(&e);
            self.exposed[id] |= if v == e.u { 1 } else { 2 };
            self.stats.exposures += 1;
            if self.box_ptr[bi] > self.params.e2 {
                return Err(Forfeit::new("type-1 exposure cap exceeded"));
            }
            let claimed = match board.state(&e) {
                ClaimState::Breaker => {
                    self.stats.failures += 1;
                    continue;
                }
                ClaimState::Free if !chosen.contains(&e) => Some(e),
                _ => {
                    self.stats.imagined += 1;
                    None
                }
            };
            self.minbox.as_mut().unwrap().record_maker(bi);
            self.out[bi].push(w);
            self.reach_grew(board, v, c, d)?;
            if self.minbox.as_ref().unwrap().boxes[bi].w_m == self.params.d1 {
                let stop = self.params.e2.min(self.box_perm[bi].len());
                for j in self.box_ptr[bi]..stop {
                    let f = EdgeRef::new(c, v, self.box_perm[bi][j]);
                    let fid = board.edge_id(&f);
                    self.exposed[fid] |= if v == f.u { 1 } else { 2 };
                }
                self.box_ptr[bi] = self.box_ptr[bi].max(stop);
            }
            return Ok(claimed);
        }
    }

    fn coin_move(
        &mut self,
        which: usize,
        board: &Board,
        chosen: &[EdgeRef],
        rng: &mut Rng,
    ) -> Result<Option<EdgeRef>, Forfeit> {
        for e in std::mem::take(&mut self.pending[which - 1]) {
            let id = board.edge_id(&e);
            let sbg = if which == 2 { self.sbg2.as_mut() } else { self.sbg3.as_mut() }.unwrap();
            if sbg.is_free(id) {
                sbg.claim_breaker(id).unwrap();
            }
        }
        loop {
            let sbg = if which == 2 { self.sbg2.as_mut() } else { self.sbg3.as_mut() }.unwrap();
            let Some(x) = sbg_best_move(sbg) else {
                self.stats.idle += 1;
                return Ok(None);
            };
            match self.coin[x] {
                Coin::Success => {
                    sbg.grant_maker(x).unwrap();
                    self.stats.imagined += 1;
                    return Ok(None);
                }
                Coin::Fail => {
                    sbg.haunt(x).unwrap();
                }
                Coin::Untossed => {
                    self.stats.tosses += 1;
                    if rng.bernoulli(self.params.p) {
                        self.coin[x] = Coin::Success;
                        self.stats.successes += 1;
                        sbg.grant_maker(x).unwrap();
                        let e = board.edge(x);
                        if board.is_free(&e) && !chosen.contains(&e) {
                            return Ok(Some(e));
                        }
                        self.stats.imagined += 1;
                        return Ok(None);
                    }
                    self.coin[x] = Coin::Fail;
                    for g in [self.sbg2.as_mut().unwrap(), self.sbg3.as_mut().unwrap()] {
                        if g.is_free(x) {
                            g.haunt(x).unwrap();
                        }
                    }
                }
            }
        }
    }

    /// Edges revealed not to be in the second random graph.
    pub fn spooky_count(&self) -> usize {
        self.coin.iter().filter(|&&c| c == Coin::Fail).count()
    }
}

impl Strategy for RainbowMaker {
    fn name(&self) -> String {
        "rainbow-maker".into()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        self.params.to_map()
    }

    fn play(&mut self, view: &TurnView, rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        if self.minbox.is_none() {
            self.init(board);
        } else {
            for p in self.pending.iter_mut() {
                p.extend(view.opponent_moves.iter().copied());
            }
        }
        let ty = Self::move_type(view.round);
        let mut chosen = Vec::new();
        for _ in 0..view.budget {
            self.stats.moves_by_type[ty - 1] += 1;
            let pick = match ty {
                1 => self.type1(board, &chosen, rng)?,
                t => self.coin_move(t, board, &chosen, rng)?,
            };
            let e = match pick {
                Some(e) => e,
                None => {
                    let free = board.free_ids();
                    let mut e = None;
                    for _ in 0..8 {
                        let cand = board.edge(free[rng.index(free.len())] as usize);
                        if !chosen.contains(&cand) {
                            e = Some(cand);
                            break;
                        }
                    }
                    match e.or_else(|| board.free_ids().iter().map(|&i| board.edge(i as usize)).find(|c| !chosen.contains(c))) {
                        Some(e) => e,
                        None => break,
                    }
                }
            };
            chosen.push(e);
        }
        Ok(chosen)
    }

    fn finish(&mut self, _board: &Board, rng: &mut Rng) {
        if self.minbox.is_none() {
            return;
        }
        for c in self.coin.iter_mut() {
            if *c == Coin::Untossed {
                *c = if rng.bernoulli(self.params.p) { Coin::Success } else { Coin::Fail };
            }
        }
        self.stats.sbg2_goal_at_end = sbg_goal_holds(self.sbg2.as_ref().unwrap());
        self.stats.sbg3_goal_at_end = sbg_goal_holds(self.sbg3.as_ref().unwrap());
    }
}
