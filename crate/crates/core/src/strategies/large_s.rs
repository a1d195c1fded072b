use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::rng::Rng;
use crate::subgames::{MinDegState, MinDegStatus};

/// Largest board on which type-2 moves use the explicit Beck potential.
pub const EXACT_BLOCKING_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeSParams {
    pub eps: f64,
    /// Block length.
    pub t: usize,
    pub b_prime: usize,
    /// Colors in each of S1 and S2.
    pub s_prime: usize,
    /// Colors in S3.
    pub s3: usize,
    /// Target out-degree per vertex and part.
    pub d: usize,
    /// Size of the vertex sets Maker must join by an S3 edge.
    pub a: usize,
}

impl LargeSParams {
    pub fn new(n: usize, s: usize, b: usize, eps: f64) -> Self {
        let lln = (n as f64).ln().ln();
        let t = (lln.ceil() as usize).max(2);
        let b_prime = (t as f64 / (t - 1) as f64 * b as f64).ceil() as usize;
        let mut s3 = ((s as f64 / lln.max(1.0)).round() as usize).clamp(1, s.saturating_sub(2).max(1));
        let s_prime = (s - s3) / 2;
        s3 = s - 2 * s_prime;
        let d = ((eps * (s_prime * n) as f64 / b_prime as f64).ceil() as usize).max(1);
        let a = ((n as f64 / lln.max(2.0)).ceil() as usize).clamp(1, n / 2);
        LargeSParams {
            eps,
            t,
            b_prime,
            s_prime,
            s3,
            d,
            a,
        }
    }

    /// Color part: 0 for S1, 1 for S2, 2 for S3.
    pub fn part_of(&self, c: usize) -> usize {
        (c / self.s_prime.max(1)).min(2)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LargeSStats {
    pub type1_moves: usize,
    pub type2_moves: usize,
    /// Type-1 moves whose chosen edge was already Maker's.
    pub repeated_edges: usize,
    /// Type-1 rounds with every simulated vertex done; a type-2 move was played instead.
    pub idle_type1: usize,
    pub block_checks: usize,
    pub block_mismatches: usize,
    /// Breaker won the simulated game at least once.
    pub simulated_lost: bool,
}

/// Maker for rainbow connectivity with many colors: out-degree games in S1
/// and S2 grow rainbow trees, S3 joins them.
#[derive(Clone, Debug)]
pub struct LargeSMaker {
    pub params: LargeSParams,
    pub bias: usize,
    pub mindeg: Option<MinDegState>,
    /// Buffered first-round Breaker edges of the current block, by `j - 2`.
    b1_parts: Vec<Vec<EdgeRef>>,
    /// Maker's out-edges as `(color, head)`, per tail.
    pub out: Vec<Vec<(usize, usize)>>,
    pub stats: LargeSStats,
}

impl LargeSMaker {
    pub fn new(n: usize, s: usize, b: usize, eps: f64) -> Self {
        LargeSMaker {
            params: LargeSParams::new(n, s, b, eps),
            bias: b,
            mindeg: None,
            b1_parts: Vec::new(),
            out: Vec::new(),
            stats: LargeSStats::default(),
        }
    }

    /// Out-degree of `v` in colors of part `i`.
    pub fn out_degree(&self, v: usize, i: usize) -> usize {
        self.out[v].iter().filter(|(c, _)| self.params.part_of(*c) == i).count()
    }

    fn sim_edge(&self, e: &EdgeRef) -> Option<usize> {
        let p = &self.params;
        let part = p.part_of(e.layer);
        if part == 2 {
            return None;
        }
        let j = e.layer - part * p.s_prime;
        Some(self.mindeg.as_ref().unwrap().edge_id(part, j, e.u, e.v))
    }

    fn feed(&mut self, edges: &[EdgeRef]) {
        for e in edges {
            if let Some(id) = self.sim_edge(e) {
                let md = self.mindeg.as_mut().unwrap();
                if md.is_free(id) {
                    md.claim_breaker(id).unwrap();
                }
            }
        }
        if matches!(self.mindeg.as_ref().unwrap().status, MinDegStatus::BreakerWon(_)) {
            self.stats.simulated_lost = true;
        }
    }

    fn check_block(&mut self, board: &Board) {
        let md = self.mindeg.as_ref().unwrap();
        let n = board.n();
        self.stats.block_checks += 1;
        let mut ok = true;
        for e in board.edges_with(ClaimState::Breaker) {
            if let Some(id) = self.sim_edge(&e) {
                ok &= md.marks[id].breaker;
            }
        }
        let sim_breaker = md.marks.iter().filter(|m| m.breaker).count();
        let real = board
            .edges_with(ClaimState::Breaker)
            .iter()
            .filter(|e| self.params.part_of(e.layer) < 2)
            .count();
        ok &= sim_breaker == real;
        for v in 0..n {
            for i in 0..2 {
                ok &= md.d_out[i * n + v] == self.out_degree(v, i);
            }
        }
        if !ok {
            self.stats.block_mismatches += 1;
        }
    }

    fn type1(&mut self, board: &Board, chosen: &[EdgeRef], rng: &mut Rng) -> Result<Option<EdgeRef>, Forfeit> {
        let n = board.n();
        let Some(x) = self.mindeg.as_ref().unwrap().select_vertex() else {
            self.stats.idle_type1 += 1;
            return Ok(self.type2(board, chosen, rng));
        };
        self.stats.type1_moves += 1;
        let (i, v) = (x / n, x % n);
        let p = &self.params;
        let colors = i * p.s_prime..(i + 1) * p.s_prime;
        let c = colors
            .filter(|&c| !self.out[v].iter().any(|&(oc, _)| oc == c))
            .min_by_key(|&c| (board.degree(v, c, ClaimState::Breaker), c))
            .ok_or_else(|| Forfeit::new(format!("no unused color in part {} at vertex {v}", i + 1)))?;
        let cands: Vec<usize> = (0..n)
            .filter(|&w| w != v && board.state(&EdgeRef::new(c, v, w)) != ClaimState::Breaker)
            .collect();
        if cands.is_empty() {
            return Err(Forfeit::new(format!("no non-Breaker edge at {v} in color {c}")));
        }
        let w = cands[rng.index(cands.len())];
        let e = EdgeRef::new(c, v, w);
        let id = self.sim_edge(&e).unwrap();
        self.mindeg
            .as_mut()
            .unwrap()
            .claim_maker_out(x, id)
            .map_err(|err| Forfeit::new(format!("simulated move rejected: {err}")))?;
        self.out[v].push((c, w));
        if board.is_free(&e) && !chosen.contains(&e) {
            Ok(Some(e))
        } else {
            self.stats.repeated_edges += 1;
            Ok(None)
        }
    }

    fn type2(&mut self, board: &Board, chosen: &[EdgeRef], rng: &mut Rng) -> Option<EdgeRef> {
        self.stats.type2_moves += 1;
        let free: Vec<EdgeRef> = board
            .free_ids()
            .iter()
            .map(|&id| board.edge(id as usize))
            .filter(|e| self.params.part_of(e.layer) == 2 && !chosen.contains(e))
            .collect();
        if free.is_empty() {
            return None;
        }
        if board.n() <= EXACT_BLOCKING_MAX_N {
            return self.beck_pick(board, &free);
        }
        let _ = rng;
        self.sketch_pick(board, &free)
    }

    /// Free S3 edge of largest Beck potential over the family of S3 edge sets
    /// between two disjoint `a`-sets that Maker has not hit yet.
    fn beck_pick(&self, board: &Board, free: &[EdgeRef]) -> Option<EdgeRef> {
        let n = board.n();
        let a = self.params.a;
        let base = 1.0 + (self.params.t * self.bias) as f64;
        let sets = subsets(n, a);
        let s3: Vec<usize> = (2 * self.params.s_prime..board.s()).collect();
        let mut score = vec![0.0f64; board.edge_count()];
        for (ai, &am) in sets.iter().enumerate() {
            for &bm in &sets[ai + 1..] {
                if am & bm != 0 {
                    continue;
                }
                let mut members = Vec::new();
                let mut hit = false;
                let mut open = 0;
                for x in bits(am) {
                    for y in bits(bm) {
                        for &c in &s3 {
                            let e = EdgeRef::new(c, x, y);
                            match board.state(&e) {
                                ClaimState::Maker => hit = true,
                                ClaimState::Free => {
                                    open += 1;
                                    members.push(board.edge_id(&e));
                                }
                                ClaimState::Breaker | ClaimState::Ghost => {}
                            }
                        }
                    }
                }
                if hit {
                    continue;
                }
                let w = base.powi(-open);
                for id in members {
                    score[id] += w;
                }
            }
        }
        free.iter()
            .copied()
            .max_by(|x, y| {
                score[board.edge_id(x)]
                    .total_cmp(&score[board.edge_id(y)])
                    .then(y.cmp(x))
            })
    }

    /// Free S3 edge between the sketches `{v} + N+_S1(v)` and `{w} + N+_S2(w)`
    /// of the pair with the fewest Maker S3 edges between them.
    fn sketch_pick(&self, board: &Board, free: &[EdgeRef]) -> Option<EdgeRef> {
        let n = board.n();
        let words = n.div_ceil(64);
        let mut maker3 = vec![0u64; n * words];
        let mut free3 = vec![0u64; n * words];
        for e in board.edges_with(ClaimState::Maker) {
            if self.params.part_of(e.layer) == 2 {
                maker3[e.u * words + e.v / 64] |= 1 << (e.v % 64);
                maker3[e.v * words + e.u / 64] |= 1 << (e.u % 64);
            }
        }
        for e in free {
            free3[e.u * words + e.v / 64] |= 1 << (e.v % 64);
            free3[e.v * words + e.u / 64] |= 1 << (e.u % 64);
        }
        let sketch = |v: usize, i: usize| -> Vec<usize> {
            let mut s: Vec<usize> = std::iter::once(v)
                .chain(self.out[v].iter().filter(|(c, _)| self.params.part_of(*c) == i).map(|&(_, w)| w))
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let masks: Vec<Vec<u64>> = (0..n)
            .map(|w| {
                let mut m = vec![0u64; words];
                for y in sketch(w, 1) {
                    m[y / 64] |= 1 << (y % 64);
                }
                m
            })
            .collect();
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..n {
            let l1 = sketch(v, 0);
            for w in 0..n {
                if w == v {
                    continue;
                }
                let mut made = 0;
                let mut open = false;
                for &x in &l1 {
                    for k in 0..words {
                        made += (maker3[x * words + k] & masks[w][k]).count_ones() as usize;
                        open |= free3[x * words + k] & masks[w][k] != 0;
                    }
                }
                if open && best.is_none_or(|(m, _, _)| made < m) {
                    best = Some((made, v, w));
                }
            }
        }
        let (_, v, w) = best?;
        let l1 = sketch(v, 0);
        let l2 = sketch(w, 1);
        free.iter()
            .copied()
            .filter(|e| (l1.contains(&e.u) && l2.contains(&e.v)) || (l1.contains(&e.v) && l2.contains(&e.u)))
            .min()
    }
}

fn bits(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

fn subsets(n: usize, a: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == a).collect()
}

impl Strategy for LargeSMaker {
    fn name(&self) -> String {
        "large-s-maker".into()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        let p = &self.params;
        BTreeMap::from([
            ("eps".into(), p.eps),
            ("t".into(), p.t as f64),
            ("b_prime".into(), p.b_prime as f64),
            ("s_prime".into(), p.s_prime as f64),
            ("s3".into(), p.s3 as f64),
            ("d".into(), p.d as f64),
        ])
    }

    fn play(&mut self, view: &TurnView, rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        let n = board.n();
        let p = self.params.clone();
        if p.s_prime == 0 {
            return Err(Forfeit::new("too few colors for the split"));
        }
        if self.mindeg.is_none() {
            self.mindeg = Some(MinDegState::new(n, 2, p.s_prime, p.d, p.b_prime, p.eps));
            self.out = vec![Vec::new(); n];
        }
        let mut incoming: Vec<EdgeRef> = view.opponent_moves.to_vec();
        if view.round == 1 {
            incoming = board.edges_with(ClaimState::Breaker);
        }
        let j = ((view.round - 1) % p.t as u64) as usize + 1;
        let mut chosen = Vec::new();
        if j == 1 {
            // whatever is still buffered belongs to the finished block
            let rest: Vec<EdgeRef> = self.b1_parts.drain(..).flatten().collect();
            self.feed(&rest);
            self.b1_parts = vec![Vec::new(); p.t - 1];
            for (k, e) in incoming.into_iter().enumerate() {
                self.b1_parts[k % (p.t - 1)].push(e);
            }
            for _ in 0..view.budget {
                match self.type2(board, &chosen, rng) {
                    Some(e) => chosen.push(e),
                    None => break,
                }
            }
            return Ok(chosen);
        }
        let mut batch = self.b1_parts.get_mut(j - 2).map(std::mem::take).unwrap_or_default();
        batch.extend(incoming);
        self.feed(&batch);
        for _ in 0..view.budget {
            if let Some(e) = self.type1(board, &chosen, rng)? {
                chosen.push(e);
            }
        }
        if j == p.t {
            self.check_block(board);
        }
        Ok(chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_n64() {
        let p = LargeSParams::new(64, 32, 148, 0.5);
        assert_eq!(p.t, 2);
        assert_eq!(p.b_prime, 296);
        assert_eq!(p.s3 + 2 * p.s_prime, 32);
        assert_eq!(p.part_of(0), 0);
        assert_eq!(p.part_of(p.s_prime), 1);
        assert_eq!(p.part_of(31), 2);
    }

    #[test]
    fn block_schedule() {
        let p = LargeSParams::new(10_000, 64, 100, 0.5);
        assert_eq!(p.t, 3);
        // round 7 = 1 + 3*2 is a type-2 round
        assert_eq!((7 - 1) % p.t + 1, 1);
    }

    #[test]
    fn reaches_target_against_random_breaker() {
        use crate::engine::{play_game, GameConfig, Predicate};
        use crate::strategies::{extract_rainbow_paths, ExtractMode, RandomStrategy};
        let (n, s) = (64, 32);
        let b = (0.3 * (s * n) as f64 / (n as f64).ln()).ceil() as usize;
        let mut mk = LargeSMaker::new(n, s, b, 0.5);
        let cfg = GameConfig::new(b, Predicate::RainbowConnected { max_len: None }, 3);
        let board = Board::new_layered_complete(n, s).unwrap();
        let res = play_game(board, &mut mk, &mut RandomStrategy, &cfg).unwrap();
        assert!(!matches!(res.outcome, crate::engine::Outcome::Forfeit { .. }), "{:?}", res.outcome);
        for v in 0..n {
            for i in 0..2 {
                assert_eq!(mk.out_degree(v, i), mk.params.d, "vertex {v} part {i}");
            }
        }
        assert_eq!(mk.stats.block_mismatches, 0);
        assert!(mk.stats.block_checks > 0);
        let g = res.board.subgraph(ClaimState::Maker);
        let mode = ExtractMode::LargeS { params: mk.params.clone() };
        let mut ok = 0;
        for w in 1..n {
            if let Ok(p) = extract_rainbow_paths(&g, 0, w, &mode) {
                assert!(p[0].is_valid(n, Some((0, w))));
                ok += 1;
            }
        }
        assert_eq!(ok, n - 1);
    }
}
