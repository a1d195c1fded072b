//! Biased Maker-Breaker games on layered multigraphs.
//!
//! A board is `s` parallel copies of `K_n`, one per color. Maker claims one
//! edge per round and Breaker claims `b`. The crate provides the referee,
//! structure checkers, auxiliary subgames, composite strategies, closed-form
//! criteria, an exact solver for tiny boards and an experiment harness.

pub mod board;
pub mod criteria;
pub mod engine;
pub mod error;
pub mod lab;
pub mod rainbow;
pub mod rng;
pub mod solver;
pub mod strategies;
pub mod subgames;

pub use board::{Board, ClaimState, EdgeRef, Side};
pub use engine::{play_game, replay, GameConfig, Outcome, Player, Predicate, Strategy, Transcript, TurnView};
pub use error::{Error, Result};
pub use rainbow::{ColoredSubgraph, RainbowWitness, WitnessKind};
pub use rng::Rng;
