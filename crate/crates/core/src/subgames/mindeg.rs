use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Endpoint orientation recorded for one multigraph edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMark {
    pub breaker: bool,
    /// Maker holds the edge oriented out of the lower endpoint.
    pub out_u: bool,
    /// Maker holds the edge oriented out of the higher endpoint.
    pub out_v: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinDegStatus {
    Ongoing,
    MakerWon,
    /// A vertex hit the Breaker-degree limit while still active.
    BreakerWon(usize),
}

/// MinDeg⁺ on `parts` disjoint complete multigraphs, each on `n` vertices with
/// `mult` parallel edges per pair. Vertex `part*n + v`, edge
/// `(part*mult + j)*pairs + pair`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinDegState {
    pub n: usize,
    pub parts: usize,
    pub mult: usize,
    pub d: usize,
    pub b: usize,
    pub alpha: f64,
    pub marks: Vec<EdgeMark>,
    pub d_b: Vec<usize>,
    pub d_out: Vec<usize>,
    pub maker_claims: usize,
    /// Vertices that reached out-degree `d` before losing.
    pub done: Vec<bool>,
    pub status: MinDegStatus,
    pairs_list: Vec<(usize, usize)>,
    free_list: Vec<usize>,
    free_pos: Vec<usize>,
}

impl MinDegState {
    pub fn new(n: usize, parts: usize, mult: usize, d: usize, b: usize, alpha: f64) -> Self {
        let pairs_list: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let edges = parts * mult * pairs_list.len();
        MinDegState {
            n,
            parts,
            mult,
            d,
            b,
            alpha,
            marks: vec![EdgeMark::default(); edges],
            d_b: vec![0; parts * n],
            d_out: vec![0; parts * n],
            maker_claims: 0,
            done: vec![d == 0; parts * n],
            status: if d == 0 { MinDegStatus::MakerWon } else { MinDegStatus::Ongoing },
            pairs_list,
            free_list: (0..edges).collect(),
            free_pos: (0..edges).collect(),
        }
    }

    fn take_free(&mut self, e: usize) {
        let i = self.free_pos[e];
        if i == usize::MAX {
            return;
        }
        let last = *self.free_list.last().unwrap();
        self.free_list.swap_remove(i);
        if last != e {
            self.free_pos[last] = i;
        }
        self.free_pos[e] = usize::MAX;
    }

    /// Edges nobody has claimed.
    pub fn free_edges(&self) -> &[usize] {
        &self.free_list
    }

    pub fn is_free(&self, e: usize) -> bool {
        self.free_pos[e] != usize::MAX
    }

    pub fn vertex_count(&self) -> usize {
        self.parts * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.marks.len()
    }

    pub fn pairs(&self) -> usize {
        self.pairs_list.len()
    }

    pub fn host_degree(&self) -> usize {
        (self.n - 1) * self.mult
    }

    pub fn edge_id(&self, part: usize, j: usize, a: usize, b: usize) -> usize {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        let pair = crate::board::pair_index(self.n, u, v);
        (part * self.mult + j) * self.pairs() + pair
    }

    /// (part, multiplicity index, u, v) with `u < v` local to the part.
    pub fn edge(&self, e: usize) -> (usize, usize, usize, usize) {
        let pairs = self.pairs();
        let (u, v) = self.pairs_list[e % pairs];
        let pm = e / pairs;
        (pm / self.mult, pm % self.mult, u, v)
    }

    /// Global endpoints of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (p, _, u, v) = self.edge(e);
        (p * self.n + u, p * self.n + v)
    }

    pub fn dang(&self, x: usize) -> i64 {
        self.d_b[x] as i64 - 2 * (self.b * self.d_out[x]) as i64
    }

    pub fn active(&self, x: usize) -> bool {
        self.d_out[x] < self.d
    }

    pub fn limit(&self) -> f64 {
        (1.0 - self.alpha) * self.host_degree() as f64
    }

    /// Edges at global vertex `x`.
    pub fn edges_at(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let (p, u) = (x / self.n, x % self.n);
        (0..self.mult).flat_map(move |j| {
            (0..self.n)
                .filter(move |&w| w != u)
                .map(move |w| self.edge_id(p, j, u, w))
        })
    }

    /// Edges at `x` that Maker may take as an out-edge at `x`.
    pub fn eligible(&self, x: usize, e: usize) -> bool {
        let (a, _) = self.endpoints(e);
        let m = self.marks[e];
        !m.breaker && if a == x { !m.out_u } else { !m.out_v }
    }

    pub fn claim_breaker(&mut self, e: usize) -> Result<()> {
        if !self.is_free(e) {
            return Err(Error::IllegalClaim(format!("multigraph edge {e} is taken")));
        }
        self.marks[e].breaker = true;
        self.take_free(e);
        let (a, b) = self.endpoints(e);
        self.d_b[a] += 1;
        self.d_b[b] += 1;
        for x in [a, b] {
            if self.status == MinDegStatus::Ongoing && !self.done[x] && self.d_b[x] as f64 >= self.limit() {
                self.status = MinDegStatus::BreakerWon(x);
            }
        }
        Ok(())
    }

    /// Maker claims `e` and orients it out of `x`.
    pub fn claim_maker_out(&mut self, x: usize, e: usize) -> Result<()> {
        let (a, b) = self.endpoints(e);
        if x != a && x != b {
            return Err(Error::IllegalClaim(format!("edge {e} does not touch {x}")));
        }
        if !self.eligible(x, e) {
            return Err(Error::IllegalClaim(format!("edge {e} not eligible at {x}")));
        }
        if x == a {
            self.marks[e].out_u = true;
        } else {
            self.marks[e].out_v = true;
        }
        self.take_free(e);
        self.d_out[x] += 1;
        self.maker_claims += 1;
        if self.d_out[x] >= self.d && !self.done[x] {
            self.done[x] = true;
            if self.status == MinDegStatus::Ongoing && self.done.iter().all(|&f| f) {
                self.status = MinDegStatus::MakerWon;
            }
        }
        Ok(())
    }

    /// Active vertex of largest danger, lowest index on ties.
    pub fn select_vertex(&self) -> Option<usize> {
        (0..self.vertex_count())
            .filter(|&x| self.active(x))
            .max_by_key(|&x| (self.dang(x), std::cmp::Reverse(x)))
    }
}

/// One move of S⁺: the vertex of largest danger and a uniformly random eligible
/// edge there, oriented out of it. `None` once no vertex is active.
pub fn mindeg_plus_move(state: &MinDegState, rng: &mut Rng) -> Result<Option<(usize, usize)>> {
    let Some(x) = state.select_vertex() else {
        return Ok(None);
    };
    let cands: Vec<usize> = state.edges_at(x).filter(|&e| state.eligible(x, e)).collect();
    if cands.is_empty() {
        return Err(Error::Stuck(x));
    }
    Ok(Some((x, cands[rng.index(cands.len())])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinDegOpponent {
    Random,
    /// Spends every claim at the active vertex with the largest Breaker degree.
    MaxDegree,
}

fn breaker_pick(st: &MinDegState, opp: MinDegOpponent, rng: &mut Rng) -> Option<usize> {
    match opp {
        MinDegOpponent::Random => {
            let free = st.free_edges();
            (!free.is_empty()).then(|| free[rng.index(free.len())])
        }
        MinDegOpponent::MaxDegree => {
            let mut order: Vec<usize> = (0..st.vertex_count()).filter(|&x| !st.done[x]).collect();
            order.sort_by_key(|&x| (std::cmp::Reverse(st.d_b[x]), x));
            order.into_iter().find_map(|x| {
                let free: Vec<usize> = st.edges_at(x).filter(|&e| st.is_free(e)).collect();
                (!free.is_empty()).then(|| free[rng.index(free.len())])
            })
        }
    }
}

/// Plays MinDeg⁺ (Breaker first) with S⁺ against `opp` until it is decided.
pub fn play_mindeg_game(mut st: MinDegState, opp: MinDegOpponent, rng: &mut Rng) -> Result<MinDegState> {
    while st.status == MinDegStatus::Ongoing {
        for _ in 0..st.b {
            if let Some(e) = breaker_pick(&st, opp, rng) {
                st.claim_breaker(e)?;
            }
        }
        if st.status != MinDegStatus::Ongoing {
            break;
        }
        match mindeg_plus_move(&st, rng) {
            Ok(Some((x, e))) => st.claim_maker_out(x, e)?,
            Ok(None) => break,
            Err(Error::Stuck(x)) => {
                st.status = MinDegStatus::BreakerWon(x);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn danger_argmax() {
        let mut st = MinDegState::new(3, 1, 1, 5, 1, 0.1);
        st.d_b = vec![5, 1, 3];
        assert_eq!(st.select_vertex(), Some(0));
        let mut st = MinDegState::new(3, 1, 1, 5, 2, 0.1);
        st.d_b[0] = 5;
        st.d_out[0] = 1;
        assert_eq!(st.dang(0), 1);
    }

    #[test]
    fn indexing_round_trip() {
        let st = MinDegState::new(5, 2, 3, 1, 1, 0.1);
        for e in 0..st.edge_count() {
            let (p, j, u, v) = st.edge(e);
            assert_eq!(st.edge_id(p, j, u, v), e);
        }
        assert_eq!(st.edges_at(7).count(), st.host_degree());
    }

    #[test]
    fn double_orientation() {
        let mut st = MinDegState::new(3, 1, 1, 2, 1, 0.1);
        let e = st.edge_id(0, 0, 0, 1);
        st.claim_maker_out(0, e).unwrap();
        assert!(st.claim_maker_out(0, e).is_err());
        st.claim_maker_out(1, e).unwrap();
        assert_eq!(st.maker_claims, 2);
        assert!(st.claim_breaker(e).is_err());
    }
}
