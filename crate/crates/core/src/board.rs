//! Layered multigraph board: `s` parallel copies of `K_n` with per-edge claims.

use std::fmt;

use base64::Engine as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A single edge of the board: layer (color) plus endpoints with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub layer: usize,
    pub u: usize,
    pub v: usize,
}

impl EdgeRef {
    /// Builds the canonical reference, swapping endpoints if needed.
    pub fn new(layer: usize, a: usize, b: usize) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        EdgeRef { layer, u, v }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}@{}", self.u, self.v, self.layer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClaimState {
    Free,
    Maker,
    Breaker,
    Ghost,
}

impl ClaimState {
    fn index(self) -> usize {
        match self {
            ClaimState::Free => 0,
            ClaimState::Maker => 1,
            ClaimState::Breaker => 2,
            ClaimState::Ghost => 3,
        }
    }

    fn from_index(i: u8) -> Option<Self> {
        Some(match i {
            0 => ClaimState::Free,
            1 => ClaimState::Maker,
            2 => ClaimState::Breaker,
            3 => ClaimState::Ghost,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::L => 0,
            Side::R => 1,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

/// Index of the unordered pair `{u, v}` among the `n(n-1)/2` pairs.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

#[derive(Clone, Debug)]
pub struct Board {
    n: usize,
    s: usize,
    pairs: Vec<(u32, u32)>,
    states: Vec<ClaimState>,
    counts: [usize; 4],
    // per (layer, vertex): number of incident edges in each claim state
    deg: Vec<[u32; 4]>,
    // swap-remove set of free edge ids, for O(1) uniform sampling
    free_list: Vec<u32>,
    free_pos: Vec<u32>,
    bipartition: Vec<Side>,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.s == other.s
            && self.states == other.states
            && self.bipartition == other.bipartition
    }
}

impl Board {
    pub fn new_layered_complete(n: usize, s: usize) -> Result<Board> {
        if n < 2 || s < 1 {
            return Err(Error::InvalidDimensions { n, s });
        }
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u as u32, v as u32));
            }
        }
        let total = s * pairs.len();
        let half = n.div_ceil(2);
        let bipartition = (0..n)
            .map(|v| if v < half { Side::L } else { Side::R })
            .collect();
        let mut deg = vec![[0u32; 4]; s * n];
        for d in deg.iter_mut() {
            d[0] = (n - 1) as u32;
        }
        Ok(Board {
            n,
            s,
            pairs,
            states: vec![ClaimState::Free; total],
            counts: [total, 0, 0, 0],
            deg,
            free_list: (0..total as u32).collect(),
            free_pos: (0..total as u32).collect(),
            bipartition,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.states.len()
    }

    pub fn contains(&self, e: &EdgeRef) -> bool {
        e.layer < self.s && e.u < e.v && e.v < self.n
    }

    pub fn edge_id(&self, e: &EdgeRef) -> usize {
        e.layer * self.pairs.len() + pair_index(self.n, e.u, e.v)
    }

    pub fn edge(&self, id: usize) -> EdgeRef {
        let layer = id / self.pairs.len();
        let (u, v) = self.pairs[id % self.pairs.len()];
        EdgeRef {
            layer,
            u: u as usize,
            v: v as usize,
        }
    }

    pub fn state(&self, e: &EdgeRef) -> ClaimState {
        self.states[self.edge_id(e)]
    }

    pub fn state_by_id(&self, id: usize) -> ClaimState {
        self.states[id]
    }

    pub fn is_free(&self, e: &EdgeRef) -> bool {
        self.contains(e) && self.state(e) == ClaimState::Free
    }

    pub fn side(&self, v: usize) -> Side {
        self.bipartition[v]
    }

    pub fn bipartition(&self) -> &[Side] {
        &self.bipartition
    }

    pub fn vertices_on(&self, side: Side) -> Vec<usize> {
        (0..self.n).filter(|&v| self.bipartition[v] == side).collect()
    }

    pub fn count(&self, state: ClaimState) -> usize {
        self.counts[state.index()]
    }

    pub fn free_count(&self) -> usize {
        self.counts[0]
    }

    /// Number of edges at `v` in `layer` with the given state.
    pub fn degree(&self, v: usize, layer: usize, state: ClaimState) -> usize {
        self.deg[layer * self.n + v][state.index()] as usize
    }

    /// Number of edges at `v` over all layers with the given state.
    pub fn total_degree(&self, v: usize, state: ClaimState) -> usize {
        (0..self.s).map(|c| self.degree(v, c, state)).sum()
    }

    pub fn claim(&mut self, e: EdgeRef, who: ClaimState) -> Result<()> {
        if !self.contains(&e) {
            return Err(Error::InvalidEdge(e));
        }
        if who == ClaimState::Free {
            return Err(Error::IllegalClaim("cannot claim as Free".into()));
        }
        let id = self.edge_id(&e);
        if self.states[id] != ClaimState::Free {
            return Err(Error::AlreadyClaimed(e));
        }
        self.states[id] = who;
        self.counts[0] -= 1;
        self.counts[who.index()] += 1;
        for x in [e.u, e.v] {
            let d = &mut self.deg[e.layer * self.n + x];
            d[0] -= 1;
            d[who.index()] += 1;
        }
        let pos = self.free_pos[id] as usize;
        let last = *self.free_list.last().expect("free list empty");
        self.free_list.swap_remove(pos);
        if (last as usize) != id {
            self.free_pos[last as usize] = pos as u32;
        }
        Ok(())
    }

    /// Free edges at `v` in `layer`, ascending by opposite endpoint, optionally
    /// restricted to opposite endpoints on `side`.
    pub fn free_edges_at(&self, v: usize, layer: usize, side: Option<Side>) -> Vec<EdgeRef> {
        self.edges_at_with(v, layer, side, ClaimState::Free)
    }

    pub fn edges_at_with(
        &self,
        v: usize,
        layer: usize,
        side: Option<Side>,
        state: ClaimState,
    ) -> Vec<EdgeRef> {
        (0..self.n)
            .filter(|&w| w != v && side.is_none_or(|sd| self.bipartition[w] == sd))
            .map(|w| EdgeRef::new(layer, v, w))
            .filter(|e| self.state(e) == state)
            .collect()
    }

    /// Free edges at `v` over all layers.
    pub fn free_edges_at_any_layer(&self, v: usize) -> Vec<EdgeRef> {
        (0..self.s)
            .flat_map(|c| self.free_edges_at(v, c, None))
            .collect()
    }

    /// Free edge ids in internal (unspecified but deterministic) order.
    pub fn free_ids(&self) -> &[u32] {
        &self.free_list
    }

    pub fn random_free_edge(&self, rng: &mut crate::rng::Rng) -> Option<EdgeRef> {
        if self.free_list.is_empty() {
            None
        } else {
            let id = self.free_list[rng.index(self.free_list.len())];
            Some(self.edge(id as usize))
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        (0..self.states.len()).map(|id| self.edge(id))
    }

    pub fn edges_with(&self, state: ClaimState) -> Vec<EdgeRef> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, &st)| st == state)
            .map(|(id, _)| self.edge(id))
            .collect()
    }

    /// The claimed edges of one player as a colored subgraph.
    pub fn subgraph(&self, state: ClaimState) -> crate::rainbow::ColoredSubgraph {
        crate::rainbow::ColoredSubgraph::from_edges(self.n, self.s, self.edges_with(state))
    }

    fn encode_states(&self) -> String {
        let mut bytes = Vec::new();
        let mut i = 0;
        while i < self.states.len() {
            let st = self.states[i];
            let mut j = i;
            while j < self.states.len() && self.states[j] == st {
                j += 1;
            }
            bytes.push(st.index() as u8);
            let mut run = (j - i) as u64;
            loop {
                let byte = (run & 0x7f) as u8;
                run >>= 7;
                if run == 0 {
                    bytes.push(byte);
                    break;
                }
                bytes.push(byte | 0x80);
            }
            i = j;
        }
        base64::engine::general_purpose::STANDARD.encode(bytes)
    }

    fn decode_states(text: &str, total: usize) -> Result<Vec<ClaimState>> {
        let bytes = base64::engine::general_purpose::STANDARD
            .decode(text)
            .map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Vec::with_capacity(total);
        let mut it = bytes.into_iter();
        while let Some(tag) = it.next() {
            let st = ClaimState::from_index(tag)
                .ok_or_else(|| Error::Parse(format!("bad state tag {tag}")))?;
            let mut run: u64 = 0;
            let mut shift = 0;
            loop {
                let b = it
                    .next()
                    .ok_or_else(|| Error::Parse("truncated run length".into()))?;
                run |= ((b & 0x7f) as u64) << shift;
                if b & 0x80 == 0 {
                    break;
                }
                shift += 7;
                if shift > 63 {
                    return Err(Error::Parse("run length overflow".into()));
                }
            }
            if out.len() + run as usize > total {
                return Err(Error::Parse("state runs exceed edge count".into()));
            }
            out.extend(std::iter::repeat_n(st, run as usize));
        }
        if out.len() != total {
            return Err(Error::Parse(format!(
                "decoded {} states, expected {total}",
                out.len()
            )));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct BoardJson {
    n: usize,
    s: usize,
    states: String,
    bipartition: Vec<Side>,
}

impl Serialize for Board {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        BoardJson {
            n: self.n,
            s: self.s,
            states: self.encode_states(),
            bipartition: self.bipartition.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Board {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BoardJson::deserialize(de)?;
        let mut board = Board::new_layered_complete(raw.n, raw.s).map_err(D::Error::custom)?;
        if raw.bipartition.len() != raw.n {
            return Err(D::Error::custom("bipartition length differs from n"));
        }
        board.bipartition = raw.bipartition;
        let states =
            Board::decode_states(&raw.states, board.edge_count()).map_err(D::Error::custom)?;
        for (id, st) in states.into_iter().enumerate() {
            if st != ClaimState::Free {
                let e = board.edge(id);
                board.claim(e, st).map_err(D::Error::custom)?;
            }
        }
        Ok(board)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(Board::new_layered_complete(3, 2).unwrap().edge_count(), 6);
        assert_eq!(Board::new_layered_complete(2, 1).unwrap().edge_count(), 1);
        let b = Board::new_layered_complete(4, 3).unwrap();
        assert_eq!(b.edge_count(), 18);
        assert_eq!(b.vertices_on(Side::L), vec![0, 1]);
        assert_eq!(b.vertices_on(Side::R), vec![2, 3]);
        assert!(matches!(
            Board::new_layered_complete(1, 1),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(Board::new_layered_complete(5, 0).is_err());
    }

    #[test]
    fn odd_n_left_side_is_larger() {
        let b = Board::new_layered_complete(5, 1).unwrap();
        assert_eq!(b.vertices_on(Side::L), vec![0, 1, 2]);
    }

    #[test]
    fn claims() {
        let mut b = Board::new_layered_complete(4, 1).unwrap();
        let e = EdgeRef::new(0, 1, 2);
        b.claim(e, ClaimState::Maker).unwrap();
        assert_eq!(b.state(&e), ClaimState::Maker);
        assert_eq!(b.claim(e, ClaimState::Breaker), Err(Error::AlreadyClaimed(e)));
        let g = EdgeRef::new(0, 0, 3);
        b.claim(g, ClaimState::Ghost).unwrap();
        assert!(!b.free_edges_at(0, 0, None).contains(&g));
        assert_eq!(b.free_count(), 4);
    }

    #[test]
    fn free_edges_query() {
        let mut b = Board::new_layered_complete(4, 1).unwrap();
        assert_eq!(
            b.free_edges_at(0, 0, Some(Side::R)),
            vec![EdgeRef::new(0, 0, 2), EdgeRef::new(0, 0, 3)]
        );
        b.claim(EdgeRef::new(0, 0, 2), ClaimState::Breaker).unwrap();
        assert_eq!(b.free_edges_at(0, 0, Some(Side::R)), vec![EdgeRef::new(0, 0, 3)]);
        let b = Board::new_layered_complete(4, 1).unwrap();
        assert_eq!(b.free_edges_at(0, 0, None).len(), 3);
    }

    #[test]
    fn edge_ids_roundtrip() {
        let b = Board::new_layered_complete(7, 3).unwrap();
        for id in 0..b.edge_count() {
            assert_eq!(b.edge_id(&b.edge(id)), id);
        }
    }

    #[test]
    fn json_roundtrip() {
        let mut b = Board::new_layered_complete(6, 2).unwrap();
        b.claim(EdgeRef::new(1, 2, 5), ClaimState::Maker).unwrap();
        b.claim(EdgeRef::new(0, 0, 1), ClaimState::Breaker).unwrap();
        b.claim(EdgeRef::new(0, 0, 2), ClaimState::Breaker).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        let back: Board = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.free_count(), b.free_count());
    }
}
