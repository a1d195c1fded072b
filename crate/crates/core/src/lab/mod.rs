//! Experiment harness: game and strategy registry, sweeps, empirical
//! thresholds and random systems.

mod random;
mod sweep;
mod threshold;

pub use random::{
    crossing_point, fit_power_law, generate_random_system, layer_degree_chi_square, random_intuition_experiment,
    write_intuition_csv, ChiSquare, IntuitionConfig, IntuitionRow,
};
pub use sweep::{read_csv, run_sweep, write_csv, ResultRow, CSV_SCHEMA};
pub use threshold::{estimate_empirical_threshold, ThresholdEstimate, FAVOR_BREAKER, FAVOR_MAKER};

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::board::Board;
use crate::engine::{Predicate, Strategy};
use crate::error::{Error, Result};
use crate::strategies::{
    CliqueIsolationBreaker, DiameterBreaker, GreedyPathMaker, LargeSMaker, LayerIsolationBreaker, PairingBreaker,
    PairingMaker, RainbowMaker, RainbowMakerParams, RandomStrategy,
};

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "MBR_THREADS";

/// Games the harness can set up. For `Diameter` the board has one layer and
/// `s` is the diameter bound; the spanning tree, perfect matching and
/// Hamilton cycle games fix the layer count from `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameId {
    RainbowConnectivity,
    Diameter,
    RainbowSpanningTree,
    RainbowPerfectMatching,
    RainbowHamiltonCycle,
}

impl std::str::FromStr for GameId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rainbow-connectivity" | "C" => GameId::RainbowConnectivity,
            "diameter" | "D" => GameId::Diameter,
            "rainbow-spanning-tree" | "RS" => GameId::RainbowSpanningTree,
            "rainbow-perfect-matching" | "RP" => GameId::RainbowPerfectMatching,
            "rainbow-hamilton-cycle" | "RH" => GameId::RainbowHamiltonCycle,
            other => return Err(Error::UnknownGame(other.into())),
        })
    }
}

impl GameId {
    pub fn as_str(self) -> &'static str {
        match self {
            GameId::RainbowConnectivity => "rainbow-connectivity",
            GameId::Diameter => "diameter",
            GameId::RainbowSpanningTree => "rainbow-spanning-tree",
            GameId::RainbowPerfectMatching => "rainbow-perfect-matching",
            GameId::RainbowHamiltonCycle => "rainbow-hamilton-cycle",
        }
    }

    pub fn layers(self, n: usize, s: usize) -> usize {
        match self {
            GameId::RainbowConnectivity => s,
            GameId::Diameter => 1,
            GameId::RainbowSpanningTree => n.saturating_sub(1).max(1),
            GameId::RainbowPerfectMatching => (n / 2).max(1),
            GameId::RainbowHamiltonCycle => n,
        }
    }

    /// Length bound of the paths the game is about, where there is one.
    pub fn path_len(self, n: usize, s: usize) -> usize {
        match self {
            GameId::RainbowConnectivity | GameId::Diameter => s,
            _ => n.saturating_sub(1).max(1),
        }
    }

    pub fn board(self, n: usize, s: usize) -> Result<Board> {
        Board::new_layered_complete(n, self.layers(n, s))
    }

    pub fn predicate(self, s: usize) -> Predicate {
        match self {
            GameId::RainbowConnectivity => Predicate::RainbowConnected { max_len: None },
            GameId::Diameter => Predicate::DiameterAtMost { bound: s },
            GameId::RainbowSpanningTree => Predicate::RainbowSpanningTree,
            GameId::RainbowPerfectMatching => Predicate::RainbowPerfectMatching,
            GameId::RainbowHamiltonCycle => Predicate::RainbowHamiltonCycle,
        }
    }
}

pub const STRATEGIES: &[&str] = &[
    "random",
    "greedy-path",
    "pairing-maker",
    "pairing-breaker",
    "diameter-breaker",
    "clique-isolation",
    "layer-isolation",
    "rainbow-maker",
    "large-s-maker",
];

/// Builds a named strategy for one game. `params` overrides fields of the
/// strategy's parameter pack by name.
pub fn make_strategy(
    name: &str,
    game: GameId,
    n: usize,
    s: usize,
    b: usize,
    params: &BTreeMap<String, f64>,
) -> Result<Box<dyn Strategy>> {
    let get = |k: &str| params.get(k).copied();
    Ok(match name {
        "random" => Box::new(RandomStrategy),
        "greedy-path" => Box::new(GreedyPathMaker {
            hub: get("hub").map_or(0, |h| h as usize),
        }),
        "pairing-maker" => Box::new(PairingMaker),
        "pairing-breaker" => Box::new(PairingBreaker::default()),
        "diameter-breaker" => {
            let mut d = DiameterBreaker::new(Some(game.path_len(n, s)));
            d.verify = get("verify").is_some_and(|v| v != 0.0);
            Box::new(d)
        }
        "clique-isolation" => Box::new(CliqueIsolationBreaker::default()),
        "layer-isolation" => Box::new(LayerIsolationBreaker::default()),
        "rainbow-maker" => {
            let mut pp = RainbowMakerParams::desk(n, game.layers(n, s), game.path_len(n, s), b);
            override_rainbow(&mut pp, params)?;
            Box::new(RainbowMaker::new(pp, b))
        }
        "large-s-maker" => Box::new(LargeSMaker::new(n, game.layers(n, s), b, get("eps").unwrap_or(0.5))),
        other => return Err(Error::UnknownStrategy(other.into())),
    })
}

fn override_rainbow(pp: &mut RainbowMakerParams, params: &BTreeMap<String, f64>) -> Result<()> {
    for (k, &v) in params {
        match k.as_str() {
            "p" => pp.p = v,
            "alpha1" => pp.alpha1 = v,
            "alpha2" => pp.alpha2 = v,
            "delta" => pp.delta = v,
            "gamma" => pp.gamma = v,
            "d1" => pp.d1 = v as usize,
            "e2" => pp.e2 = v as usize,
            "ell2" => pp.ell2 = v,
            "m2" => pp.m2 = v as usize,
            "ell3" => pp.ell3 = v,
            "m3" => pp.m3 = v as usize,
            "rainbow_tuples" => pp.rainbow_tuples = v != 0.0,
            "hub" | "verify" | "eps" => {}
            other => return Err(Error::InvalidParameter(format!("unknown parameter {other}"))),
        }
    }
    Ok(())
}

/// A sweep or threshold search, read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: GameId,
    pub n: Vec<usize>,
    pub s: Vec<usize>,
    /// Bias grid for sweeps.
    #[serde(default)]
    pub b: Vec<usize>,
    /// Search range for threshold estimation.
    #[serde(default)]
    pub b_range: Option<(usize, usize)>,
    pub maker: String,
    pub breaker: String,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// JSONL transcripts of every game, when set.
    #[serde(default)]
    pub transcripts: Option<PathBuf>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.s.is_empty() {
            return Err(Error::InvalidParameter("n and s grids must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        for name in [&self.maker, &self.breaker] {
            if !STRATEGIES.contains(&name.as_str()) {
                return Err(Error::UnknownStrategy(name.clone()));
            }
        }
        Ok(())
    }
}

/// Thread pool sized by `MBR_THREADS`, or rayon's default when unset.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let k: usize = v
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_VAR}={v}")))?;
        b = b.num_threads(k);
    }
    b.build().map_err(|e| Error::InvalidParameter(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn game_ids_round_trip() {
        for g in [
            GameId::RainbowConnectivity,
            GameId::Diameter,
            GameId::RainbowSpanningTree,
            GameId::RainbowPerfectMatching,
            GameId::RainbowHamiltonCycle,
        ] {
            assert_eq!(g.as_str().parse::<GameId>().unwrap(), g);
        }
        assert!("chess".parse::<GameId>().is_err());
    }

    #[test]
    fn registry_knows_every_name() {
        for name in STRATEGIES {
            make_strategy(name, GameId::RainbowConnectivity, 8, 3, 2, &BTreeMap::new()).unwrap();
        }
        assert!(matches!(
            make_strategy("oracle", GameId::Diameter, 8, 3, 2, &BTreeMap::new()),
            Err(Error::UnknownStrategy(_))
        ));
    }

    #[test]
    fn config_from_toml() {
        let c = ExperimentConfig::from_toml(
            r#"
game = "rainbow-connectivity"
n = [4, 6]
s = [2]
b = [1, 2]
maker = "pairing-maker"
breaker = "random"
trials = 3
seed = 9
"#,
        )
        .unwrap();
        c.validate().unwrap();
        assert_eq!(c.n, vec![4, 6]);
        assert!(ExperimentConfig::from_toml("game = \"diameter\"\nbogus = 1").is_err());
    }
}
