//! Referee for (p:b) Maker-Breaker play with transcripts and replay.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::board::{Board, ClaimState, EdgeRef};
use crate::error::{Error, Result};
use crate::rainbow::{self, ColoredSubgraph};
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }

    pub fn claim_state(self) -> ClaimState {
        match self {
            Player::Maker => ClaimState::Maker,
            Player::Breaker => ClaimState::Breaker,
        }
    }
}

/// Win condition, evaluated on Maker's final graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Predicate {
    /// Every pair joined by a rainbow path of length at most `max_len`
    /// (default `n - 1`).
    RainbowConnected { max_len: Option<usize> },
    /// Color-blind diameter at most `bound`.
    DiameterAtMost { bound: usize },
    RainbowSpanningTree,
    RainbowPerfectMatching,
    RainbowHamiltonCycle,
    /// Maker wins iff she owns every edge of at least one listed set.
    OwnAny { sets: Vec<Vec<EdgeRef>> },
}

impl Predicate {
    pub fn holds(&self, g: &ColoredSubgraph) -> Result<bool> {
        Ok(match self {
            Predicate::RainbowConnected { max_len } => rainbow::is_rainbow_connected(g, *max_len)?,
            Predicate::DiameterAtMost { bound } => rainbow::diameter_at_most(g, *bound),
            Predicate::RainbowSpanningTree => rainbow::has_rainbow_spanning_tree(g).is_some(),
            Predicate::RainbowPerfectMatching => rainbow::has_rainbow_perfect_matching(g)?.is_some(),
            Predicate::RainbowHamiltonCycle => rainbow::has_rainbow_hamilton_cycle(g)?.is_some(),
            Predicate::OwnAny { sets } => sets.iter().any(|f| f.iter().all(|e| g.contains(e))),
        })
    }
}

fn default_bias() -> usize {
    1
}

fn default_first() -> Player {
    Player::Maker
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    #[serde(default = "default_bias")]
    pub maker_bias: usize,
    pub breaker_bias: usize,
    #[serde(default = "default_first")]
    pub first_player: Player,
    pub predicate: Predicate,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub strategy_params: BTreeMap<String, f64>,
    /// Record how many random words each turn consumed.
    #[serde(default)]
    pub trace_rng: bool,
}

impl GameConfig {
    pub fn new(breaker_bias: usize, predicate: Predicate, seed: u64) -> Self {
        GameConfig {
            maker_bias: 1,
            breaker_bias,
            first_player: Player::Maker,
            predicate,
            seed,
            strategy_params: BTreeMap::new(),
            trace_rng: false,
        }
    }

    pub fn bias(&self, p: Player) -> usize {
        match p {
            Player::Maker => self.maker_bias,
            Player::Breaker => self.breaker_bias,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.maker_bias == 0 || self.breaker_bias == 0 {
            return Err(Error::InvalidParameter("biases must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Outcome {
    Maker,
    Breaker,
    Forfeit { by: Player, reason: String },
    /// The move log stops before the game is over.
    Undecided,
}

impl Outcome {
    /// The forfeiting player loses.
    pub fn winner(&self) -> Option<Player> {
        match self {
            Outcome::Maker => Some(Player::Maker),
            Outcome::Breaker => Some(Player::Breaker),
            Outcome::Forfeit { by, .. } => Some(by.other()),
            Outcome::Undecided => None,
        }
    }

    pub fn maker_won(&self) -> bool {
        self.winner() == Some(Player::Maker)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub round: u64,
    pub player: Player,
    #[serde(flatten)]
    pub edge: EdgeRef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub config: GameConfig,
    pub n: usize,
    pub s: usize,
    pub maker: String,
    pub breaker: String,
    #[serde(default)]
    pub maker_params: BTreeMap<String, f64>,
    #[serde(default)]
    pub breaker_params: BTreeMap<String, f64>,
    /// Starting position when the game did not start from a fresh board.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Board>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub moves: Vec<Move>,
    pub outcome: Outcome,
    #[serde(default)]
    pub rng_trace: Option<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct OutcomeLine {
    outcome: Outcome,
    #[serde(default)]
    rng_trace: Option<Vec<u64>>,
}

impl Transcript {
    pub fn config(&self) -> &GameConfig {
        &self.header.config
    }

    /// JSON Lines: header, one line per move, then the outcome.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &self.header)?;
        writeln!(w)?;
        for m in &self.moves {
            serde_json::to_writer(&mut w, m)?;
            writeln!(w)?;
        }
        serde_json::to_writer(
            &mut w,
            &OutcomeLine {
                outcome: self.outcome.clone(),
                rng_trace: self.rng_trace.clone(),
            },
        )?;
        writeln!(w)?;
        Ok(())
    }

    /// Reads a transcript; a missing outcome line yields `Undecided`.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Transcript> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::CorruptTranscript("empty transcript".into()))??;
        let header: TranscriptHeader = serde_json::from_str(&first)
            .map_err(|e| Error::CorruptTranscript(format!("header: {e}")))?;
        let mut moves = Vec::new();
        let mut outcome = Outcome::Undecided;
        let mut rng_trace = None;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if let Ok(m) = serde_json::from_str::<Move>(&line) {
                moves.push(m);
                continue;
            }
            let o: OutcomeLine = serde_json::from_str(&line)
                .map_err(|e| Error::CorruptTranscript(format!("line: {e}")))?;
            outcome = o.outcome;
            rng_trace = o.rng_trace;
        }
        Ok(Transcript {
            header,
            moves,
            outcome,
            rng_trace,
        })
    }
}

/// What a strategy sees when asked to move.
pub struct TurnView<'a> {
    pub board: &'a Board,
    pub me: Player,
    pub round: u64,
    /// Number of edges to claim this turn.
    pub budget: usize,
    /// Edges the opponent claimed since this player's previous turn.
    pub opponent_moves: &'a [EdgeRef],
    /// Edges claimed for this player in its previous turn, padding included.
    pub own_previous: &'a [EdgeRef],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forfeit {
    pub reason: String,
}

impl Forfeit {
    pub fn new(reason: impl Into<String>) -> Self {
        Forfeit {
            reason: reason.into(),
        }
    }
}

/// A resumable player. Returning fewer edges than the budget is allowed; the
/// referee fills the rest of the turn with uniformly random free edges.
pub trait Strategy {
    fn name(&self) -> String;

    /// Resolved parameter pack, recorded in the transcript header.
    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::new()
    }

    fn play(&mut self, view: &TurnView, rng: &mut Rng) -> std::result::Result<Vec<EdgeRef>, Forfeit>;

    /// Called once the board is exhausted.
    fn finish(&mut self, _board: &Board, _rng: &mut Rng) {}
}

pub const MAKER_STREAM: u64 = 1;
pub const BREAKER_STREAM: u64 = 2;
pub const REFEREE_STREAM: u64 = 3;

pub struct GameResult {
    pub outcome: Outcome,
    pub transcript: Transcript,
    pub board: Board,
}

fn is_fresh(board: &Board) -> bool {
    board.free_count() == board.edge_count()
}

/// Plays until the board is exhausted or a strategy forfeits.
pub fn play_game(
    mut board: Board,
    maker: &mut dyn Strategy,
    breaker: &mut dyn Strategy,
    config: &GameConfig,
) -> Result<GameResult> {
    config.validate()?;
    let header = TranscriptHeader {
        config: config.clone(),
        n: board.n(),
        s: board.s(),
        maker: maker.name(),
        breaker: breaker.name(),
        maker_params: maker.params(),
        breaker_params: breaker.params(),
        initial: (!is_fresh(&board)).then(|| board.clone()),
    };
    let mut rngs = [
        Rng::from_path(config.seed, &[MAKER_STREAM]),
        Rng::from_path(config.seed, &[BREAKER_STREAM]),
    ];
    let mut referee = Rng::from_path(config.seed, &[REFEREE_STREAM]);
    let mut moves = Vec::new();
    let mut trace = config.trace_rng.then(Vec::new);
    let mut last: [Vec<EdgeRef>; 2] = [Vec::new(), Vec::new()];
    let order = [config.first_player, config.first_player.other()];
    let idx = |p: Player| match p {
        Player::Maker => 0,
        Player::Breaker => 1,
    };
    let mut round = 0u64;
    let mut forfeit = None;
    'game: while board.free_count() > 0 {
        round += 1;
        for &p in &order {
            let budget = config.bias(p).min(board.free_count());
            if budget == 0 {
                break 'game;
            }
            let me = idx(p);
            let before = rngs[me].draws();
            let opp = last[1 - me].clone();
            let view = TurnView {
                board: &board,
                me: p,
                round,
                budget,
                opponent_moves: &opp,
                own_previous: &last[me],
            };
            let strategy: &mut dyn Strategy = if p == Player::Maker {
                &mut *maker
            } else {
                &mut *breaker
            };
            let chosen = match strategy.play(&view, &mut rngs[me]) {
                Ok(c) => c,
                Err(f) => {
                    forfeit = Some(Outcome::Forfeit {
                        by: p,
                        reason: f.reason,
                    });
                    break 'game;
                }
            };
            if let Some(t) = trace.as_mut() {
                t.push(rngs[me].draws() - before);
            }
            let distinct: BTreeSet<EdgeRef> = chosen.iter().copied().collect();
            if chosen.len() > budget
                || distinct.len() != chosen.len()
                || chosen.iter().any(|e| !board.is_free(e))
            {
                forfeit = Some(Outcome::Forfeit {
                    by: p,
                    reason: "illegal-move".into(),
                });
                break 'game;
            }
            let mut claimed = chosen;
            for e in &claimed {
                board.claim(*e, p.claim_state())?;
            }
            while claimed.len() < budget {
                let e = board
                    .random_free_edge(&mut referee)
                    .expect("budget exceeds free edges");
                board.claim(e, p.claim_state())?;
                claimed.push(e);
            }
            moves.extend(claimed.iter().map(|&edge| Move {
                round,
                player: p,
                edge,
            }));
            last[me] = claimed;
        }
    }
    let outcome = match forfeit {
        Some(f) => f,
        None => {
            maker.finish(&board, &mut rngs[0]);
            breaker.finish(&board, &mut rngs[1]);
            decide(&board, &config.predicate)?
        }
    };
    let transcript = Transcript {
        header,
        moves,
        outcome: outcome.clone(),
        rng_trace: trace,
    };
    Ok(GameResult {
        outcome,
        transcript,
        board,
    })
}

fn decide(board: &Board, predicate: &Predicate) -> Result<Outcome> {
    Ok(if predicate.holds(&board.subgraph(ClaimState::Maker))? {
        Outcome::Maker
    } else {
        Outcome::Breaker
    })
}

/// Re-executes the move log on the starting board and recomputes the outcome.
pub fn replay(t: &Transcript) -> Result<Outcome> {
    let cfg = &t.header.config;
    cfg.validate().map_err(|e| Error::CorruptTranscript(e.to_string()))?;
    let mut board = match &t.header.initial {
        Some(b) => b.clone(),
        None => Board::new_layered_complete(t.header.n, t.header.s)
            .map_err(|e| Error::CorruptTranscript(e.to_string()))?,
    };
    let order = [cfg.first_player, cfg.first_player.other()];
    let mut i = 0;
    let mut round = 0u64;
    let mut turn = 0usize;
    loop {
        if board.free_count() == 0 {
            if i != t.moves.len() {
                return Err(Error::CorruptTranscript("moves after the board is full".into()));
            }
            if let Outcome::Forfeit { .. } = t.outcome {
                return Err(Error::CorruptTranscript("forfeit recorded on a finished game".into()));
            }
            return decide(&board, &cfg.predicate);
        }
        if turn.is_multiple_of(2) {
            round += 1;
        }
        let p = order[turn % 2];
        let budget = cfg.bias(p).min(board.free_count());
        if i == t.moves.len() {
            return match &t.outcome {
                Outcome::Forfeit { by, .. } if *by == p => Ok(t.outcome.clone()),
                Outcome::Forfeit { .. } => Err(Error::CorruptTranscript(
                    "forfeit by a player who was not to move".into(),
                )),
                _ => Ok(Outcome::Undecided),
            };
        }
        for k in 0..budget {
            let Some(m) = t.moves.get(i) else {
                if matches!(t.outcome, Outcome::Forfeit { .. }) {
                    return Err(Error::CorruptTranscript("forfeit in the middle of a turn".into()));
                }
                return Ok(Outcome::Undecided);
            };
            if m.player != p || m.round != round {
                return Err(Error::CorruptTranscript(format!(
                    "move {i}: expected {:?} in round {round} (claim {} of {budget}), found {:?} in round {}",
                    p, k + 1, m.player, m.round
                )));
            }
            if !board.is_free(&m.edge) {
                return Err(Error::CorruptTranscript(format!(
                    "move {i}: edge {} is not free",
                    m.edge
                )));
            }
            board.claim(m.edge, p.claim_state())?;
            i += 1;
        }
        turn += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Lowest;

    impl Strategy for Lowest {
        fn name(&self) -> String {
            "lowest".into()
        }

        fn play(&mut self, v: &TurnView, _: &mut Rng) -> std::result::Result<Vec<EdgeRef>, Forfeit> {
            Ok(v.board.edges().filter(|e| v.board.is_free(e)).take(v.budget).collect())
        }
    }

    struct Cheater;

    impl Strategy for Cheater {
        fn name(&self) -> String {
            "cheater".into()
        }

        fn play(&mut self, _: &TurnView, _: &mut Rng) -> std::result::Result<Vec<EdgeRef>, Forfeit> {
            Ok(vec![EdgeRef::new(0, 0, 1)])
        }
    }

    fn own_edge() -> Predicate {
        Predicate::OwnAny {
            sets: vec![vec![EdgeRef::new(0, 0, 1)]],
        }
    }

    #[test]
    fn single_edge_games() {
        let board = Board::new_layered_complete(2, 1).unwrap();
        let cfg = GameConfig::new(1, own_edge(), 0);
        let r = play_game(board.clone(), &mut Lowest, &mut Lowest, &cfg).unwrap();
        assert_eq!(r.outcome, Outcome::Maker);
        let mut cfg = cfg;
        cfg.first_player = Player::Breaker;
        let r = play_game(board, &mut Lowest, &mut Lowest, &cfg).unwrap();
        assert_eq!(r.outcome, Outcome::Breaker);
    }

    #[test]
    fn illegal_move_is_forfeit() {
        let board = Board::new_layered_complete(4, 1).unwrap();
        let cfg = GameConfig::new(1, own_edge(), 0);
        let r = play_game(board, &mut Cheater, &mut Cheater, &cfg).unwrap();
        assert_eq!(
            r.outcome,
            Outcome::Forfeit {
                by: Player::Breaker,
                reason: "illegal-move".into()
            }
        );
        assert_eq!(replay(&r.transcript).unwrap(), r.outcome);
    }

    #[test]
    fn replay_and_corruption() {
        let board = Board::new_layered_complete(5, 2).unwrap();
        let cfg = GameConfig::new(3, Predicate::RainbowConnected { max_len: None }, 11);
        let r = play_game(board, &mut Lowest, &mut Lowest, &cfg).unwrap();
        assert_eq!(replay(&r.transcript).unwrap(), r.outcome);

        let mut bad = r.transcript.clone();
        bad.moves.swap(0, 1);
        assert!(matches!(replay(&bad), Err(Error::CorruptTranscript(_))));

        let mut cut = r.transcript.clone();
        cut.moves.truncate(5);
        assert_eq!(replay(&cut).unwrap(), Outcome::Undecided);
    }

    #[test]
    fn jsonl_roundtrip() {
        let board = Board::new_layered_complete(4, 2).unwrap();
        let mut cfg = GameConfig::new(2, Predicate::RainbowConnected { max_len: None }, 5);
        cfg.trace_rng = true;
        let r = play_game(board, &mut Lowest, &mut Lowest, &cfg).unwrap();
        let mut buf = Vec::new();
        r.transcript.write_jsonl(&mut buf).unwrap();
        let back = Transcript::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, r.transcript);
        let text = String::from_utf8(buf).unwrap();
        let without_outcome: Vec<&str> = text.lines().collect();
        let cut = without_outcome[..without_outcome.len() - 1].join("\n");
        let t = Transcript::read_jsonl(cut.as_bytes()).unwrap();
        assert_eq!(replay(&t).unwrap(), r.outcome);
    }
}
