use std::collections::BTreeMap;

use crate::board::{Board, ClaimState, EdgeRef};
use crate::engine::{GameConfig, Player, Strategy, TurnView, MAKER_STREAM, BREAKER_STREAM};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Results of playing a strategy against every possible opponent line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdversaryReport {
    /// Complete games explored.
    pub lines: u64,
    /// Lines the strategy's side won.
    pub wins: u64,
    pub losses: u64,
    /// Forfeit reasons raised by the strategy, with counts.
    pub forfeits: BTreeMap<String, u64>,
    /// Turns where the strategy returned fewer edges than its budget.
    pub short_turns: u64,
}

impl AdversaryReport {
    pub fn all_won(&self) -> bool {
        self.lines > 0 && self.wins == self.lines
    }
}

struct Walk<'a> {
    config: &'a GameConfig,
    side: Player,
    cap: u64,
    report: AdversaryReport,
}

#[derive(Clone)]
struct Node<S> {
    board: Board,
    strategy: S,
    rng: Rng,
    round: u64,
    last: [Vec<EdgeRef>; 2],
}

fn idx(p: Player) -> usize {
    match p {
        Player::Maker => 0,
        Player::Breaker => 1,
    }
}

/// Plays `strategy` for `side` against every sequence of opponent claims,
/// to board exhaustion. Stops with `TooLarge` after `cap` lines.
pub fn exhaustive_adversary<S: Strategy + Clone>(
    board: &Board,
    config: &GameConfig,
    strategy: &S,
    side: Player,
    cap: u64,
) -> Result<AdversaryReport> {
    config.validate()?;
    let stream = if side == Player::Maker { MAKER_STREAM } else { BREAKER_STREAM };
    let node = Node {
        board: board.clone(),
        strategy: strategy.clone(),
        rng: Rng::from_path(config.seed, &[stream]),
        round: 0,
        last: [Vec::new(), Vec::new()],
    };
    let mut walk = Walk {
        config,
        side,
        cap,
        report: AdversaryReport::default(),
    };
    walk.visit(node, config.first_player)?;
    Ok(walk.report)
}

impl Walk<'_> {
    fn leaf(&mut self, won: bool) -> Result<()> {
        self.report.lines += 1;
        if won {
            self.report.wins += 1;
        } else {
            self.report.losses += 1;
        }
        if self.report.lines > self.cap {
            return Err(Error::TooLarge {
                what: "adversary lines",
                value: self.report.lines as usize,
                cap: self.cap as usize,
            });
        }
        Ok(())
    }

    fn visit<S: Strategy + Clone>(&mut self, mut node: Node<S>, turn: Player) -> Result<()> {
        if node.board.free_count() == 0 {
            let won = self.config.predicate.holds(&node.board.subgraph(ClaimState::Maker))?;
            return self.leaf(won == (self.side == Player::Maker));
        }
        if turn == self.config.first_player {
            node.round += 1;
        }
        let budget = self.config.bias(turn).min(node.board.free_count());
        if turn == self.side {
            let chosen = {
                let view = TurnView {
                    board: &node.board,
                    me: turn,
                    round: node.round,
                    budget,
                    opponent_moves: &node.last[idx(turn.other())],
                    own_previous: &node.last[idx(turn)],
                };
                node.strategy.play(&view, &mut node.rng)
            };
            let mut chosen = match chosen {
                Ok(c) => c,
                Err(f) => {
                    *self.report.forfeits.entry(f.reason).or_default() += 1;
                    return self.leaf(false);
                }
            };
            let mut seen = chosen.clone();
            seen.sort();
            seen.dedup();
            if chosen.len() > budget || seen.len() != chosen.len() || chosen.iter().any(|e| !node.board.is_free(e)) {
                *self.report.forfeits.entry("illegal-move".into()).or_default() += 1;
                return self.leaf(false);
            }
            for e in &chosen {
                node.board.claim(*e, turn.claim_state())?;
            }
            if chosen.len() < budget {
                self.report.short_turns += 1;
                while chosen.len() < budget {
                    let e = node.board.edge(node.board.free_ids()[0] as usize);
                    node.board.claim(e, turn.claim_state())?;
                    chosen.push(e);
                }
            }
            node.last[idx(turn)] = chosen;
            self.visit(node, turn.other())
        } else {
            let free: Vec<EdgeRef> = node.board.free_ids().iter().map(|&id| node.board.edge(id as usize)).collect();
            let mut pick: Vec<usize> = (0..budget).collect();
            loop {
                let mut child = node.clone();
                let claim: Vec<EdgeRef> = pick.iter().map(|&i| free[i]).collect();
                for e in &claim {
                    child.board.claim(*e, turn.claim_state())?;
                }
                child.last[idx(turn)] = claim;
                self.visit(child, turn.other())?;
                // next combination in lexicographic order
                let k = pick.len();
                let mut i = k;
                while i > 0 && pick[i - 1] == free.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                pick[i - 1] += 1;
                for j in i..k {
                    pick[j] = pick[j - 1] + 1;
                }
            }
            Ok(())
        }
    }
}
