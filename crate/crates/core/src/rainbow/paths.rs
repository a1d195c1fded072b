use std::collections::{BTreeMap, HashSet, VecDeque};

use super::{ColorRows, ColoredSubgraph, RainbowWitness, WitnessKind};
use crate::board::EdgeRef;
use crate::error::{Error, Result};

/// Colors are tracked in a 64-bit mask; exact search is limited to this many.
pub const MAX_COLORS: usize = 62;
/// Longest path the exact search will look for.
pub const MAX_PATH_LEN: usize = 62;

fn effective_len(g: &ColoredSubgraph, max_len: usize) -> Result<usize> {
    if g.s > MAX_COLORS {
        return Err(Error::TooLarge {
            what: "colors for exact rainbow search",
            value: g.s,
            cap: MAX_COLORS,
        });
    }
    let eff = max_len.min(g.s).min(g.n.saturating_sub(1));
    if eff > MAX_PATH_LEN {
        return Err(Error::BoundTooLarge {
            value: eff,
            cap: MAX_PATH_LEN,
        });
    }
    Ok(eff)
}

fn bfs_from(adj: &[Vec<usize>], src: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[src] = 0;
    let mut q = VecDeque::from([src]);
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

struct PathSearch<'a> {
    rows: &'a ColorRows,
    target: usize,
    // color-blind distance to target, used to prune
    dist: &'a [usize],
    visited: Vec<bool>,
    stack: Vec<EdgeRef>,
}

impl PathSearch<'_> {
    // DFS for a path of exactly `remaining` more edges from `x`.
    fn dfs(&mut self, x: usize, used: u64, remaining: usize) -> bool {
        let w = self.target;
        if remaining == 1 {
            for c in 0..self.rows.s {
                if used >> c & 1 == 0 && self.rows.has(c, x, w) {
                    self.stack.push(EdgeRef::new(c, x, w));
                    return true;
                }
            }
            return false;
        }
        let rows = self.rows;
        for &(y, c) in &rows.nbrs[x] {
            if y == w || self.visited[y] || used >> c & 1 == 1 {
                continue;
            }
            if self.dist[y] == usize::MAX || self.dist[y] > remaining - 1 {
                continue;
            }
            self.visited[y] = true;
            self.stack.push(EdgeRef::new(c, x, y));
            if self.dfs(y, used | 1 << c, remaining - 1) {
                return true;
            }
            self.stack.pop();
            self.visited[y] = false;
        }
        false
    }
}

// Existence of a rainbow walk to `target`. Shortcutting a rainbow walk at
// repeated vertices leaves a rainbow path, so this decides unbounded rainbow
// connectivity without tracking visited vertices.
struct WalkSearch<'a> {
    rows: &'a ColorRows,
    target: usize,
    failed: HashSet<(usize, u64)>,
    queue: VecDeque<usize>,
}

impl WalkSearch<'_> {
    // distances to the target over edges of unused colors
    fn dist_avoiding(&mut self, used: u64) -> Vec<usize> {
        let t = self.target;
        // a single unused color at the target is kept for the last edge
        let last = self.rows.nbrs[t].iter().fold(0u64, |m, &(_, c)| m | 1 << c) & !used;
        let reserved = if last.count_ones() == 1 { last } else { 0 };
        let mut d = vec![usize::MAX; self.rows.n];
        d[t] = 0;
        self.queue.clear();
        self.queue.push_back(t);
        while let Some(a) = self.queue.pop_front() {
            let skip = if a == t { used } else { used | reserved };
            for &(b, c) in &self.rows.nbrs[a] {
                if skip >> c & 1 == 0 && d[b] == usize::MAX {
                    d[b] = d[a] + 1;
                    self.queue.push_back(b);
                }
            }
        }
        d
    }

    fn dfs(&mut self, x: usize, used: u64) -> bool {
        if x == self.target {
            return true;
        }
        if self.failed.contains(&(x, used)) {
            return false;
        }
        let d = self.dist_avoiding(used);
        let free = self.rows.s - used.count_ones() as usize;
        if d[x] <= free {
            let rows = self.rows;
            let mut moves: Vec<(usize, usize)> = rows.nbrs[x]
                .iter()
                .copied()
                .filter(|&(y, c)| used >> c & 1 == 0 && d[y] < free)
                .collect();
            moves.sort_by_key(|&(y, _)| d[y]);
            for (y, c) in moves {
                if self.dfs(y, used | 1 << c) {
                    return true;
                }
            }
        }
        self.failed.insert((x, used));
        false
    }
}

fn shortest_with(
    rows: &ColorRows,
    dist_to_w: &[usize],
    v: usize,
    w: usize,
    max_len: usize,
) -> Option<RainbowWitness> {
    if v == w || dist_to_w[v] == usize::MAX {
        return None;
    }
    let mut search = PathSearch {
        rows,
        target: w,
        dist: dist_to_w,
        visited: vec![false; rows.n],
        stack: Vec::new(),
    };
    search.visited[v] = true;
    for len in dist_to_w[v].max(1)..=max_len {
        search.stack.clear();
        if search.dfs(v, 0, len) {
            return Some(RainbowWitness::new(WitnessKind::Path, search.stack));
        }
    }
    None
}

/// Shortest rainbow `v`,`w`-path of length at most `max_len`, searched length by
/// length with ascending vertex order inside each length.
pub fn rainbow_path_exists(
    g: &ColoredSubgraph,
    v: usize,
    w: usize,
    max_len: usize,
) -> Result<Option<RainbowWitness>> {
    let eff = effective_len(g, max_len)?;
    let rows = ColorRows::new(g);
    let adj = g.union_adjacency();
    let dist = bfs_from(&adj, w);
    Ok(shortest_with(&rows, &dist, v, w, eff))
}

/// Number of `v`,`w`-paths whose i-th edge has color `seq[i]` and whose
/// vertices are pairwise distinct.
pub fn rainbow_path_with_sequence(g: &ColoredSubgraph, v: usize, w: usize, seq: &[usize]) -> u64 {
    let len = seq.len();
    if v == w || len == 0 || len > g.n - 1 || seq.iter().any(|&c| c >= g.s) {
        return 0;
    }
    let rows = ColorRows::new(g);
    if len == 1 {
        return rows.has(seq[0], v, w) as u64;
    }
    let words = rows.words;
    let mut blocked = vec![0u64; words];
    blocked[v / 64] |= 1 << (v % 64);
    blocked[w / 64] |= 1 << (w % 64);
    fn count(
        rows: &ColorRows,
        seq: &[usize],
        x: usize,
        step: usize,
        w: usize,
        blocked: &mut Vec<u64>,
    ) -> u64 {
        let len = seq.len();
        if step == len - 2 {
            let a = rows.row(seq[len - 2], x);
            let b = rows.row(seq[len - 1], w);
            return a
                .iter()
                .zip(b)
                .zip(blocked.iter())
                .map(|((p, q), m)| (p & q & !m).count_ones() as u64)
                .sum();
        }
        let mut total = 0;
        for &(y, c) in &rows.nbrs[x] {
            if c != seq[step] || blocked[y / 64] >> (y % 64) & 1 == 1 {
                continue;
            }
            blocked[y / 64] |= 1 << (y % 64);
            total += count(rows, seq, y, step + 1, w, blocked);
            blocked[y / 64] &= !(1 << (y % 64));
        }
        total
    }
    count(&rows, seq, v, 0, w, &mut blocked)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RainbowConnectivity {
    pub connected: bool,
    /// One entry per unordered pair `(v, w)` with `v < w`.
    pub witnesses: BTreeMap<(usize, usize), Option<RainbowWitness>>,
}

/// Rainbow connectivity with a witness path for every pair. `max_len`
/// defaults to `n - 1`.
pub fn rainbow_connected(g: &ColoredSubgraph, max_len: Option<usize>) -> Result<RainbowConnectivity> {
    let eff = effective_len(g, max_len.unwrap_or(g.n - 1))?;
    let rows = ColorRows::new(g);
    let adj = g.union_adjacency();
    let mut witnesses = BTreeMap::new();
    let mut connected = true;
    for w in 1..g.n {
        let dist = bfs_from(&adj, w);
        for v in 0..w {
            let wit = shortest_with(&rows, &dist, v, w, eff);
            connected &= wit.is_some();
            witnesses.insert((v, w), wit);
        }
    }
    Ok(RainbowConnectivity {
        connected,
        witnesses,
    })
}

/// Boolean rainbow connectivity with early exit.
pub fn is_rainbow_connected(g: &ColoredSubgraph, max_len: Option<usize>) -> Result<bool> {
    let eff = effective_len(g, max_len.unwrap_or(g.n - 1))?;
    let adj = g.union_adjacency();
    let first = bfs_from(&adj, 0);
    if first.iter().any(|&d| d == usize::MAX || d > eff) {
        return Ok(false);
    }
    let rows = ColorRows::new(g);
    // cheap pass over pairs joined by an edge or a two-colored 2-path first,
    // on neighbor lists carrying the mask of colors to each neighbor
    let masks: Vec<Vec<(usize, u64)>> = rows
        .nbrs
        .iter()
        .map(|list| {
            let mut out: Vec<(usize, u64)> = Vec::with_capacity(list.len());
            for &(y, c) in list {
                match out.last_mut() {
                    Some((z, m)) if *z == y => *m |= 1 << c,
                    _ => out.push((y, 1 << c)),
                }
            }
            out
        })
        .collect();
    let mut pending = Vec::new();
    for v in 0..g.n {
        for w in v + 1..g.n {
            if masks[v].binary_search_by_key(&w, |&(y, _)| y).is_ok() {
                continue;
            }
            if eff >= 2 {
                let (a, b) = (&masks[v], &masks[w]);
                let (mut i, mut j) = (0, 0);
                let mut found = false;
                while i < a.len() && j < b.len() {
                    match a[i].0.cmp(&b[j].0) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            let (x, y) = (a[i].1, b[j].1);
                            // two distinct colors exist unless both are the same single color
                            if !(x == y && x.is_power_of_two()) {
                                found = true;
                                break;
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
                if found {
                    continue;
                }
            }
            pending.push((v, w));
        }
    }
    if eff == g.s.min(g.n.saturating_sub(1)) {
        // no length bound beyond the trivial one
        let mut last_w = usize::MAX;
        let mut dist = Vec::new();
        pending.sort_by_key(|&(v, w)| (w, v));
        for (v, w) in pending {
            if w != last_w {
                dist = bfs_from(&adj, w);
                last_w = w;
            }
            if shortest_with(&rows, &dist, v, w, eff.min(dist[v] + 1)).is_some() {
                continue;
            }
            // start from the end with fewer colors, where moves are forced sooner
            let colors = |x: usize| rows.nbrs[x].iter().fold(0u64, |m, &(_, c)| m | 1 << c).count_ones();
            let (v, w) = if colors(w) < colors(v) { (w, v) } else { (v, w) };
            let mut search = WalkSearch {
                rows: &rows,
                target: w,
                failed: HashSet::new(),
                queue: VecDeque::new(),
            };
            if !search.dfs(v, 0) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let mut last_w = usize::MAX;
    let mut dist = Vec::new();
    pending.sort_by_key(|&(v, w)| (w, v));
    for (v, w) in pending {
        if w != last_w {
            dist = bfs_from(&adj, w);
            last_w = w;
        }
        if shortest_with(&rows, &dist, v, w, eff).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff the color-blind graph has diameter at most `bound`.
pub fn diameter_at_most(g: &ColoredSubgraph, bound: usize) -> bool {
    let adj = g.union_adjacency();
    (0..g.n).all(|x| bfs_from(&adj, x).iter().all(|&d| d <= bound))
}
