//! Predicates over colored subgraphs.

mod brute;
mod partition;
mod paths;
mod tree;

pub use brute::{has_rainbow_hamilton_cycle, has_rainbow_perfect_matching, BRUTE_FORCE_CAP};
pub use partition::{partition_criterion_holds, PartitionCheck, PARTITION_CAP};
pub use paths::{
    diameter_at_most, is_rainbow_connected, rainbow_connected, rainbow_path_exists,
    rainbow_path_with_sequence, RainbowConnectivity, MAX_COLORS, MAX_PATH_LEN,
};
pub use tree::has_rainbow_spanning_tree;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::board::EdgeRef;

/// A set of claimed edges on an `n`-vertex, `s`-layer board.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredSubgraph {
    pub n: usize,
    pub s: usize,
    pub edges: BTreeSet<EdgeRef>,
}

impl ColoredSubgraph {
    pub fn new(n: usize, s: usize) -> Self {
        ColoredSubgraph {
            n,
            s,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n: usize, s: usize, edges: impl IntoIterator<Item = EdgeRef>) -> Self {
        let edges: BTreeSet<EdgeRef> = edges.into_iter().collect();
        debug_assert!(edges.iter().all(|e| e.u < e.v && e.v < n && e.layer < s));
        ColoredSubgraph { n, s, edges }
    }

    pub fn insert(&mut self, e: EdgeRef) -> bool {
        self.edges.insert(e)
    }

    pub fn contains(&self, e: &EdgeRef) -> bool {
        self.edges.contains(e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Neighbors of every vertex ignoring colors, deduplicated and sorted.
    pub fn union_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Path,
    Tree,
    Matching,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowWitness {
    pub kind: WitnessKind,
    pub edges: Vec<EdgeRef>,
    pub colors: Vec<usize>,
}

impl RainbowWitness {
    pub fn new(kind: WitnessKind, edges: Vec<EdgeRef>) -> Self {
        let colors = edges.iter().map(|e| e.layer).collect();
        RainbowWitness {
            kind,
            edges,
            colors,
        }
    }

    pub fn colors_distinct(&self) -> bool {
        let set: BTreeSet<usize> = self.colors.iter().copied().collect();
        set.len() == self.colors.len()
            && self.colors.len() == self.edges.len()
            && self.edges.iter().zip(&self.colors).all(|(e, &c)| e.layer == c)
    }

    /// Vertex sequence of a path witness starting at `from`, if the edges chain up.
    pub fn path_vertices(&self, from: usize) -> Option<Vec<usize>> {
        let mut seq = vec![from];
        let mut at = from;
        for e in &self.edges {
            if !e.touches(at) {
                return None;
            }
            at = e.other(at);
            seq.push(at);
        }
        Some(seq)
    }

    /// Checks the witness on its own: distinct colors and the claimed shape.
    /// Path witnesses are checked as `v`..`w` paths when endpoints are given.
    pub fn is_valid(&self, n: usize, endpoints: Option<(usize, usize)>) -> bool {
        if !self.colors_distinct() || self.edges.iter().any(|e| e.v >= n || e.u >= e.v) {
            return false;
        }
        match self.kind {
            WitnessKind::Path => {
                let Some((v, w)) = endpoints else {
                    return !self.edges.is_empty();
                };
                match self.path_vertices(v) {
                    Some(seq) => {
                        let set: BTreeSet<usize> = seq.iter().copied().collect();
                        set.len() == seq.len() && *seq.last().unwrap() == w
                    }
                    None => false,
                }
            }
            WitnessKind::Tree => {
                if self.edges.len() + 1 != n {
                    return false;
                }
                let mut dsu: Vec<usize> = (0..n).collect();
                fn find(d: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while d[r] != r {
                        r = d[r];
                    }
                    let mut y = x;
                    while d[y] != r {
                        let nx = d[y];
                        d[y] = r;
                        y = nx;
                    }
                    r
                }
                for e in &self.edges {
                    let (a, b) = (find(&mut dsu, e.u), find(&mut dsu, e.v));
                    if a == b {
                        return false;
                    }
                    dsu[a] = b;
                }
                true
            }
            WitnessKind::Matching => {
                let mut seen = vec![false; n];
                for e in &self.edges {
                    if seen[e.u] || seen[e.v] {
                        return false;
                    }
                    seen[e.u] = true;
                    seen[e.v] = true;
                }
                seen.iter().all(|&x| x)
            }
            WitnessKind::Cycle => {
                if self.edges.len() != n || n < 3 {
                    return false;
                }
                let start = self.edges[0].u;
                let Some(seq) = self.path_vertices(start) else {
                    return false;
                };
                let set: BTreeSet<usize> = seq[..n].iter().copied().collect();
                set.len() == n && seq[n] == start
            }
        }
    }
}

/// Per-color adjacency rows as bitsets, shared by the search routines.
pub(crate) struct ColorRows {
    pub n: usize,
    pub s: usize,
    pub words: usize,
    rows: Vec<u64>,
    // neighbors of each vertex as (w, color), sorted
    pub nbrs: Vec<Vec<(usize, usize)>>,
}

impl ColorRows {
    pub fn new(g: &ColoredSubgraph) -> Self {
        let n = g.n;
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; g.s * n * words];
        let mut nbrs = vec![Vec::new(); n];
        for e in &g.edges {
            rows[(e.layer * n + e.u) * words + e.v / 64] |= 1 << (e.v % 64);
            rows[(e.layer * n + e.v) * words + e.u / 64] |= 1 << (e.u % 64);
            nbrs[e.u].push((e.v, e.layer));
            nbrs[e.v].push((e.u, e.layer));
        }
        for a in nbrs.iter_mut() {
            a.sort_unstable();
        }
        ColorRows {
            n,
            s: g.s,
            words,
            rows,
            nbrs,
        }
    }

    pub fn row(&self, c: usize, v: usize) -> &[u64] {
        let start = (c * self.n + v) * self.words;
        &self.rows[start..start + self.words]
    }

    pub fn has(&self, c: usize, v: usize, w: usize) -> bool {
        self.rows[(c * self.n + v) * self.words + w / 64] >> (w % 64) & 1 == 1
    }
}
