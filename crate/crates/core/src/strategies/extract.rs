//! Certificates of rainbow connectivity read off Maker's final graph.

use serde::{Deserialize, Serialize};

use super::large_s::LargeSParams;
use crate::board::EdgeRef;
use crate::error::{Error, Result};
use crate::rainbow::{rainbow_path_with_sequence, ColorRows, ColoredSubgraph, RainbowWitness, WitnessKind};

/// Number of `v`,`w`-paths with color sequence `seq` for every ordered pair,
/// as a row-major `n x n` table.
pub fn sequence_path_counts(g: &ColoredSubgraph, seq: &[usize]) -> Vec<u64> {
    let n = g.n;
    let mut out = vec![0u64; n * n];
    if seq.is_empty() || seq.iter().any(|&c| c >= g.s) {
        return out;
    }
    let rows = ColorRows::new(g);
    let and_count = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum::<u64>();
    match seq.len() {
        1 => {
            for e in g.edges.iter().filter(|e| e.layer == seq[0]) {
                out[e.u * n + e.v] = 1;
                out[e.v * n + e.u] = 1;
            }
        }
        2 => {
            for v in 0..n {
                for w in 0..n {
                    if v != w {
                        out[v * n + w] = and_count(rows.row(seq[0], v), rows.row(seq[1], w));
                    }
                }
            }
        }
        3 => {
            let (c1, c2, c3) = (seq[0], seq[1], seq[2]);
            let mut mid = vec![0u64; n * n];
            for y in 0..n {
                for w in 0..n {
                    mid[y * n + w] = and_count(rows.row(c2, y), rows.row(c3, w));
                }
            }
            for v in 0..n {
                for &(y, c) in &rows.nbrs[v] {
                    if c != c1 {
                        continue;
                    }
                    let back = rows.has(c2, y, v);
                    for w in 0..n {
                        if w == v || w == y {
                            continue;
                        }
                        out[v * n + w] += mid[y * n + w] - (back && rows.has(c3, w, v)) as u64;
                    }
                }
            }
        }
        _ => {
            for v in 0..n {
                for w in 0..n {
                    out[v * n + w] = rainbow_path_with_sequence(g, v, w, seq);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathCountReport {
    /// `n^(L-1) b^(-L)` for sequences of length `L`.
    pub scale: f64,
    pub min_count: u64,
    /// Smallest count over pairs and sequences, divided by `scale`.
    pub beta_hat: f64,
    pub mean_count: f64,
    /// Pairs and sequences without any path.
    pub zero_cells: usize,
    pub cells: usize,
}

/// Path counts over every ordered pair of distinct vertices and every sequence.
pub fn path_count_report(g: &ColoredSubgraph, b: usize, seqs: &[Vec<usize>]) -> PathCountReport {
    let n = g.n;
    let len = seqs.first().map_or(1, |s| s.len());
    let scale = (n as f64).powi(len as i32 - 1) * (b.max(1) as f64).powi(-(len as i32));
    let mut min_count = u64::MAX;
    let mut total = 0u64;
    let mut zero = 0;
    let mut cells = 0;
    for seq in seqs {
        let counts = sequence_path_counts(g, seq);
        for v in 0..n {
            for w in 0..n {
                if v == w {
                    continue;
                }
                let c = counts[v * n + w];
                min_count = min_count.min(c);
                total += c;
                zero += (c == 0) as usize;
                cells += 1;
            }
        }
    }
    if cells == 0 {
        min_count = 0;
    }
    PathCountReport {
        scale,
        min_count,
        beta_hat: min_count as f64 / scale,
        mean_count: total as f64 / cells.max(1) as f64,
        zero_cells: zero,
        cells,
    }
}

/// All sequences of `len` distinct colors out of `s`.
pub fn injective_sequences(s: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(s: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in 0..s {
            if !cur.contains(&c) {
                cur.push(c);
                go(s, len, cur, out);
                cur.pop();
            }
        }
    }
    go(s, len, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtractMode {
    /// One witness per listed color sequence that has a path.
    ConstantS { seqs: Vec<Vec<usize>> },
    /// Trees rainbow in S1 and S2 joined directly or by an S3 edge.
    LargeS { params: LargeSParams },
}

/// Rainbow tree grown from `root` over edges with colors in `colors`, breadth
/// first; every root path uses distinct colors. Returns the parent edge per vertex.
fn grow_tree(g: &ColoredSubgraph, root: usize, colors: std::ops::Range<usize>) -> Vec<Option<(usize, EdgeRef)>> {
    let n = g.n;
    let mut adj: Vec<Vec<EdgeRef>> = vec![Vec::new(); n];
    for e in g.edges.iter().filter(|e| colors.contains(&e.layer)) {
        adj[e.u].push(*e);
        adj[e.v].push(*e);
    }
    let mut info: Vec<Option<(usize, EdgeRef)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            let used: Vec<usize> = root_path(&info, root, x).iter().map(|e| e.layer).collect();
            for e in &adj[x] {
                let y = e.other(x);
                if seen[y] || used.contains(&e.layer) {
                    continue;
                }
                seen[y] = true;
                info[y] = Some((x, *e));
                next.push(y);
            }
        }
        frontier = next;
    }
    info
}

fn root_path(info: &[Option<(usize, EdgeRef)>], root: usize, mut x: usize) -> Vec<EdgeRef> {
    let mut path = Vec::new();
    while x != root {
        let (p, e) = info[x].unwrap();
        path.push(e);
        x = p;
    }
    path.reverse();
    path
}

/// Certified rainbow `v`,`w`-paths in Maker's graph.
pub fn extract_rainbow_paths(g: &ColoredSubgraph, v: usize, w: usize, mode: &ExtractMode) -> Result<Vec<RainbowWitness>> {
    match mode {
        ExtractMode::ConstantS { seqs } => {
            let mut out = Vec::new();
            for seq in seqs {
                if let Some(p) = path_with_sequence(g, v, w, seq) {
                    out.push(RainbowWitness::new(WitnessKind::Path, p));
                }
            }
            if out.is_empty() {
                return Err(Error::ExtractionFailed(format!("no sequence-colored {v},{w}-path")));
            }
            Ok(out)
        }
        ExtractMode::LargeS { params } => {
            let sp = params.s_prime;
            let tv = grow_tree(g, v, 0..sp);
            let tw = grow_tree(g, w, sp..2 * sp);
            let in_v = |x: usize| x == v || tv[x].is_some();
            let in_w = |x: usize| x == w || tw[x].is_some();
            let depth = |info: &[Option<(usize, EdgeRef)>], root: usize, x: usize| root_path(info, root, x).len();
            // meeting vertex of smallest total depth keeps both halves disjoint
            let meet = (0..g.n)
                .filter(|&x| in_v(x) && in_w(x))
                .min_by_key(|&x| (depth(&tv, v, x) + depth(&tw, w, x), x));
            if let Some(x) = meet {
                let mut p = root_path(&tv, v, x);
                let mut q = root_path(&tw, w, x);
                q.reverse();
                p.extend(q);
                return Ok(vec![RainbowWitness::new(WitnessKind::Path, p)]);
            }
            let bridge = g
                .edges
                .iter()
                .find(|e| e.layer >= 2 * sp && ((in_v(e.u) && in_w(e.v)) || (in_v(e.v) && in_w(e.u))));
            match bridge {
                Some(e) => {
                    let (x, y) = if in_v(e.u) && in_w(e.v) { (e.u, e.v) } else { (e.v, e.u) };
                    let mut p = root_path(&tv, v, x);
                    p.push(*e);
                    let mut q = root_path(&tw, w, y);
                    q.reverse();
                    p.extend(q);
                    Ok(vec![RainbowWitness::new(WitnessKind::Path, p)])
                }
                None => {
                    let a = (0..g.n).filter(|&x| in_v(x)).count();
                    let b = (0..g.n).filter(|&x| in_w(x)).count();
                    Err(Error::ExtractionFailed(format!(
                        "trees at {v} and {w} have {a} and {b} vertices and no S3 edge between them"
                    )))
                }
            }
        }
    }
}

fn path_with_sequence(g: &ColoredSubgraph, v: usize, w: usize, seq: &[usize]) -> Option<Vec<EdgeRef>> {
    if v == w || seq.is_empty() {
        return None;
    }
    let mut path = Vec::new();
    let mut on = vec![false; g.n];
    on[v] = true;
    fn go(g: &ColoredSubgraph, x: usize, w: usize, seq: &[usize], on: &mut [bool], path: &mut Vec<EdgeRef>) -> bool {
        let Some((&c, rest)) = seq.split_first() else {
            return x == w;
        };
        for y in 0..g.n {
            let e = EdgeRef::new(c, x, y);
            if y == x || on[y] || !g.contains(&e) || (rest.is_empty() && y != w) || (!rest.is_empty() && y == w) {
                continue;
            }
            on[y] = true;
            path.push(e);
            if go(g, y, w, rest, on, path) {
                return true;
            }
            path.pop();
            on[y] = false;
        }
        false
    }
    go(g, v, w, seq, &mut on, &mut path).then_some(path)
}
