use std::collections::{BTreeMap, VecDeque};

use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::rng::Rng;

/// Claims uniformly random free edges.
#[derive(Clone, Debug, Default)]
pub struct RandomStrategy;

impl Strategy for RandomStrategy {
    fn name(&self) -> String {
        "random".into()
    }

    fn play(&mut self, view: &TurnView, rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let ids = rng.sample(view.board.free_ids(), view.budget);
        Ok(ids.into_iter().map(|id| view.board.edge(id as usize)).collect())
    }
}

/// Color-blind BFS distances in one player's graph. `usize::MAX` marks unreachable.
pub fn distances(board: &Board, who: ClaimState, src: usize) -> Vec<usize> {
    let n = board.n();
    let mut adj = vec![Vec::new(); n];
    for e in board.edges_with(who) {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    bfs(&adj, &[src])
}

pub(crate) fn bfs(adj: &[Vec<usize>], srcs: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut q = VecDeque::new();
    for &s in srcs {
        dist[s] = 0;
        q.push_back(s);
    }
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

/// Maker that grows short paths around a hub: it joins the reachable vertex
/// closest to the hub with the farthest (or unreachable) vertex it still can.
#[derive(Clone, Debug, Default)]
pub struct GreedyPathMaker {
    pub hub: usize,
}

impl Strategy for GreedyPathMaker {
    fn name(&self) -> String {
        "greedy-path".into()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([("hub".to_string(), self.hub as f64)])
    }

    fn play(&mut self, view: &TurnView, _rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        let mut picks = Vec::new();
        let mut extra: Vec<EdgeRef> = Vec::new();
        for _ in 0..view.budget {
            let mut adj = vec![Vec::new(); board.n()];
            for e in board.edges_with(ClaimState::Maker).into_iter().chain(extra.iter().copied()) {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
            let dist = bfs(&adj, &[self.hub]);
            let key = |e: &EdgeRef| {
                let (a, b) = (dist[e.u], dist[e.v]);
                let (near, far) = if a <= b { (a, b) } else { (b, a) };
                (near, std::cmp::Reverse(far), *e)
            };
            let best = board
                .free_ids()
                .iter()
                .map(|&id| board.edge(id as usize))
                .filter(|e| !extra.contains(e) && (dist[e.u] != usize::MAX || dist[e.v] != usize::MAX))
                .min_by_key(key);
            let e = match best {
                Some(e) => e,
                None => match board
                    .free_ids()
                    .iter()
                    .map(|&id| board.edge(id as usize))
                    .find(|e| !extra.contains(e))
                {
                    Some(e) => e,
                    None => break,
                },
            };
            extra.push(e);
            picks.push(e);
        }
        Ok(picks)
    }
}
