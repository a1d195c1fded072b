//! Composite strategies for the main boards.

pub mod basic;
pub mod diameter;
pub mod extract;
pub mod isolation;
pub mod large_s;
pub mod pairing;
pub mod potential;
pub mod rainbow_maker;

pub use basic::{distances, GreedyPathMaker, RandomStrategy};
pub use diameter::{DiameterBreaker, DiameterDiagnostics};
pub use extract::{extract_rainbow_paths, injective_sequences, path_count_report, sequence_path_counts, ExtractMode, PathCountReport};
pub use isolation::{BoxPhase, CliqueIsolationBreaker, LayerIsolationBreaker};
pub use large_s::{LargeSMaker, LargeSParams, LargeSStats};
pub use pairing::{PairingBreaker, PairingMaker};
pub use potential::{potential_pick, PotentialBreaker};
pub use rainbow_maker::{Coin, RainbowMaker, RainbowMakerParams, RainbowMakerStats};
