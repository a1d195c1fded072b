use std::collections::{BTreeMap, HashMap};

use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{Forfeit, Strategy, TurnView};
use crate::rng::Rng;
use crate::subgames::{box_maker_move, BoxState, Cell};

/// Breaker playing BoxMaker on a fixed family of disjoint edge boxes.
#[derive(Clone, Debug)]
pub struct BoxPhase {
    pub state: BoxState,
    edges: Vec<Vec<EdgeRef>>,
    index: HashMap<EdgeRef, (usize, usize)>,
}

impl BoxPhase {
    pub fn new(boxes: Vec<Vec<EdgeRef>>, bias: usize) -> Self {
        let sizes: Vec<usize> = boxes.iter().map(|b| b.len()).collect();
        let mut index = HashMap::new();
        for (i, b) in boxes.iter().enumerate() {
            for (j, e) in b.iter().enumerate() {
                index.insert(*e, (i, j));
            }
        }
        BoxPhase {
            state: BoxState::new(&sizes, bias, 1),
            edges: boxes,
            index,
        }
    }

    /// Records an opponent edge; it destroys the box containing it.
    pub fn opponent_claimed(&mut self, e: &EdgeRef) {
        if let Some(&(i, j)) = self.index.get(e) {
            if self.state.boxes[i][j] == Cell::Free {
                self.state.boxes[i][j] = Cell::Breaker;
            }
        }
    }

    /// Records an edge the strategy already owns.
    pub fn own_claimed(&mut self, e: &EdgeRef) {
        if let Some(&(i, j)) = self.index.get(e) {
            self.state.boxes[i][j] = Cell::Maker;
        }
    }

    /// Up to `budget` edges chosen by the BoxMaker rule.
    pub fn moves(&mut self, budget: usize) -> Vec<EdgeRef> {
        self.state.p = budget;
        self.state.start_round();
        let mut out = Vec::new();
        for _ in 0..budget {
            if self.state.maker_won() {
                break;
            }
            match box_maker_move(&self.state) {
                Ok((i, j)) => {
                    self.state.claim((i, j), Cell::Maker).unwrap();
                    out.push(self.edges[i][j]);
                }
                Err(_) => break,
            }
        }
        out
    }

    /// Index of a box fully owned by the strategy, if any.
    pub fn completed(&self) -> Option<usize> {
        (0..self.state.boxes.len()).find(|&i| self.state.completed(i))
    }
}

/// Breaker that builds a clique of Maker-untouched vertices, then isolates
/// one of them with a Box game over their free edges.
#[derive(Clone, Debug, Default)]
pub struct CliqueIsolationBreaker {
    pub clique: Vec<usize>,
    round: usize,
    pub phase2: Option<BoxPhase>,
    /// Vertices of the boxes in phase 2, by box index.
    pub box_vertices: Vec<usize>,
    /// Largest phase-1 move, for the `s(2r+1)` size check.
    pub max_phase1_move: Vec<(usize, usize)>,
}

impl CliqueIsolationBreaker {
    /// Vertex Maker never touched, once Breaker owns a whole box.
    pub fn isolated(&self) -> Option<usize> {
        let p = self.phase2.as_ref()?;
        p.completed().map(|i| self.box_vertices[i])
    }

    fn start_phase2(&mut self, board: &Board, budget: usize) {
        let boxes: Vec<Vec<EdgeRef>> = self
            .clique
            .iter()
            .map(|&v| board.free_edges_at_any_layer(v))
            .collect();
        self.box_vertices = self.clique.clone();
        self.phase2 = Some(BoxPhase::new(boxes, budget));
    }
}

impl Strategy for CliqueIsolationBreaker {
    fn name(&self) -> String {
        "clique-isolation".into()
    }

    fn play(&mut self, view: &TurnView, _rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        let b = view.budget;
        let s = board.s();
        self.round += 1;
        if let Some(p) = self.phase2.as_mut() {
            for e in view.opponent_moves {
                p.opponent_claimed(e);
            }
            return Ok(p.moves(b));
        }
        let touched = |x: usize| board.total_degree(x, ClaimState::Maker) > 0;
        self.clique.retain(|&x| !touched(x));
        let fresh: Vec<usize> = (0..board.n())
            .filter(|&x| !touched(x) && !self.clique.contains(&x))
            .collect();
        let in_phase1 = (self.round as f64) <= b as f64 / (4.0 * s as f64);
        if in_phase1 && fresh.len() >= 2 {
            let (x, y) = (fresh[0], fresh[1]);
            let mut out = Vec::new();
            let targets: Vec<usize> = self.clique.iter().copied().chain([y]).collect();
            for &z in &targets {
                for c in 0..s {
                    let e = EdgeRef::new(c, x, z);
                    if board.is_free(&e) {
                        out.push(e);
                    }
                }
            }
            for &z in &self.clique {
                for c in 0..s {
                    let e = EdgeRef::new(c, y, z);
                    if board.is_free(&e) {
                        out.push(e);
                    }
                }
            }
            if out.len() > b {
                return Err(Forfeit::new("clique move exceeds bias"));
            }
            self.max_phase1_move.push((self.round, out.len()));
            self.clique.push(x);
            self.clique.push(y);
            return Ok(out);
        }
        if self.clique.is_empty() {
            return Err(Forfeit::new("clique-exhausted"));
        }
        self.start_phase2(board, b);
        Ok(self.phase2.as_mut().unwrap().moves(b))
    }
}

/// Breaker for the rainbow spanning tree game: each layer is a box, and
/// owning one whole layer leaves Maker a color short.
#[derive(Clone, Debug, Default)]
pub struct LayerIsolationBreaker {
    pub phase: Option<BoxPhase>,
    /// Box chosen for each claim, in order.
    pub chosen_boxes: Vec<usize>,
}

impl LayerIsolationBreaker {
    pub fn owned_layer(&self) -> Option<usize> {
        self.phase.as_ref()?.completed()
    }
}

impl Strategy for LayerIsolationBreaker {
    fn name(&self) -> String {
        "layer-isolation".into()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::new()
    }

    fn play(&mut self, view: &TurnView, _rng: &mut Rng) -> Result<Vec<EdgeRef>, Forfeit> {
        let board = view.board;
        if let Some(p) = self.phase.as_mut() {
            for e in view.opponent_moves {
                p.opponent_claimed(e);
            }
        } else {
            let boxes = (0..board.s())
                .map(|c| board.edges().filter(|e| e.layer == c).collect())
                .collect();
            let mut p = BoxPhase::new(boxes, view.budget);
            for e in board.edges_with(ClaimState::Maker) {
                p.opponent_claimed(&e);
            }
            for e in board.edges_with(ClaimState::Breaker) {
                p.own_claimed(&e);
            }
            self.phase = Some(p);
        }
        let phase = self.phase.as_mut().unwrap();
        let out = phase.moves(view.budget);
        self.chosen_boxes.extend(out.iter().map(|e| e.layer));
        Ok(out)
    }
}
