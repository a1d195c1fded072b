use std::collections::BTreeMap;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use mbrainbow::criteria::{
    path_count_upper_bound, rs_beck_partition_sum, threshold_bounds, SumMode, ThresholdGame, RS_EXACT_CAP,
};
use mbrainbow::lab::{
    estimate_empirical_threshold, make_strategy, random_intuition_experiment, run_sweep, ExperimentConfig, GameId,
    IntuitionConfig,
};
use mbrainbow::rainbow::{
    diameter_at_most, has_rainbow_hamilton_cycle, has_rainbow_perfect_matching, has_rainbow_spanning_tree,
    rainbow_connected,
};
use mbrainbow::solver::{exact_threshold_bias, solve_exact_with, SolveOptions};
use mbrainbow::{play_game, Board, ClaimState, ColoredSubgraph, Error, GameConfig, Player, Predicate};

#[derive(Parser)]
#[command(name = "mbrainbow", version, about = "Biased Maker-Breaker games on layered multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and print the outcome as JSON.
    Play {
        #[arg(long, default_value = "rainbow-connectivity")]
        game: GameId,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value = "random")]
        maker: String,
        #[arg(long, default_value = "random")]
        breaker: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// TOML table of strategy parameters.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Write the JSONL transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Run a sweep described by a TOML config; rows go to the CSV it names.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Bracket the empirical threshold bias for every (n, s) of a config.
    Threshold {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the structure predicates on a graph file (a colored
    /// subgraph, or a board whose Maker edges are used).
    Check {
        graph: PathBuf,
        /// Path length bound for rainbow connectivity and the diameter.
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Solve a small board exactly.
    Solve {
        /// Board JSON; a fresh layered complete board when omitted.
        #[arg(long)]
        board: Option<PathBuf>,
        #[arg(long, default_value = "rainbow-connectivity")]
        game: GameId,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Breaker's bias; omit to scan for the threshold.
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, default_value_t = 4)]
        b_max: usize,
        #[arg(long)]
        breaker_first: bool,
        /// Disable symmetry reduction.
        #[arg(long)]
        plain: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Closed-form bounds and winning-criteria sums as JSON.
    Criteria {
        #[arg(long)]
        game: ThresholdGame,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long)]
        b: Option<f64>,
    },
    /// Connectivity of random systems and random-vs-random games.
    RandomIntuition {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_params(path: &Path) -> Result<BTreeMap<String, f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let table: toml::Table = text.parse().context("parsing parameter file")?;
    let mut out = BTreeMap::new();
    for (k, v) in table {
        let x = match v {
            toml::Value::Float(f) => f,
            toml::Value::Integer(i) => i as f64,
            toml::Value::Boolean(b) => b as u8 as f64,
            other => bail!("parameter {k} must be a number, got {other}"),
        };
        out.insert(k, x);
    }
    Ok(out)
}

fn print(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn player(p: Player) -> &'static str {
    match p {
        Player::Maker => "maker",
        Player::Breaker => "breaker",
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_play(
    game: GameId,
    n: usize,
    s: usize,
    b: usize,
    maker: &str,
    breaker: &str,
    seed: u64,
    params: Option<&Path>,
    transcript: Option<&Path>,
) -> Result<()> {
    let params = match params {
        Some(p) => read_params(p)?,
        None => BTreeMap::new(),
    };
    let mut mk = make_strategy(maker, game, n, s, b, &params)?;
    let mut br = make_strategy(breaker, game, n, s, b, &params)?;
    let mut cfg = GameConfig::new(b, game.predicate(s), seed);
    cfg.strategy_params = params;
    let r = play_game(game.board(n, s)?, mk.as_mut(), br.as_mut(), &cfg)?;
    if let Some(path) = transcript {
        let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        r.transcript.write_jsonl(BufWriter::new(f))?;
    }
    print(&json!({
        "game": game.as_str(),
        "n": n,
        "s": s,
        "b": b,
        "seed": seed,
        "maker": maker,
        "breaker": breaker,
        "outcome": r.outcome,
        "winner": r.outcome.winner().map(player),
        "moves": r.transcript.moves.len(),
        "maker_edges": r.board.edges_with(ClaimState::Maker).len(),
    }))
}

fn cmd_sweep(path: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(path)?;
    let rows = run_sweep(&cfg)?;
    let out: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n, "s": r.s, "b": r.b, "trials": r.trials,
                "maker_wins": r.maker_wins, "win_rate": r.win_rate(), "forfeits": r.forfeits,
            })
        })
        .collect();
    print(&json!({ "game": cfg.game.as_str(), "maker": cfg.maker, "breaker": cfg.breaker, "rows": out }))
}

fn cmd_threshold(path: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(path)?;
    let est = estimate_empirical_threshold(&cfg)?;
    print(&json!({
        "game": cfg.game.as_str(),
        "maker": cfg.maker,
        "breaker": cfg.breaker,
        // randomized strategies make the threshold soft: a side is favored
        // when its win rate clears these levels
        "favor_levels": { "maker": mbrainbow::lab::FAVOR_MAKER, "breaker": mbrainbow::lab::FAVOR_BREAKER },
        "estimates": est,
    }))
}

fn read_graph(path: &Path) -> Result<ColoredSubgraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(g) = serde_json::from_str::<ColoredSubgraph>(&text) {
        return Ok(g);
    }
    let board: Board = serde_json::from_str(&text).context("expected a colored subgraph or a board")?;
    Ok(board.subgraph(ClaimState::Maker))
}

/// `None` for checks that are too large to run.
fn capped<T>(r: mbrainbow::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::TooLarge { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn cmd_check(path: &Path, max_len: Option<usize>) -> Result<()> {
    let g = read_graph(path)?;
    let conn = rainbow_connected(&g, max_len)?;
    let missing: Vec<(usize, usize)> = conn
        .witnesses
        .iter()
        .filter(|(_, w)| w.is_none())
        .map(|(&k, _)| k)
        .collect();
    let bound = max_len.unwrap_or(g.n.saturating_sub(1).max(1));
    print(&json!({
        "n": g.n,
        "s": g.s,
        "edges": g.len(),
        "rainbow_connected": conn.connected,
        "unjoined_pairs": missing,
        "diameter_at_most": { "bound": bound, "holds": diameter_at_most(&g, bound) },
        "rainbow_spanning_tree": has_rainbow_spanning_tree(&g),
        "rainbow_perfect_matching": capped(has_rainbow_perfect_matching(&g))?,
        "rainbow_hamilton_cycle": capped(has_rainbow_hamilton_cycle(&g))?,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    board: Option<&Path>,
    game: GameId,
    n: Option<usize>,
    s: usize,
    b: Option<usize>,
    b_max: usize,
    breaker_first: bool,
    plain: bool,
    cache: Option<PathBuf>,
) -> Result<()> {
    let board = match (board, n) {
        (Some(p), _) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        (None, Some(n)) => game.board(n, s)?,
        (None, None) => bail!("give --board or --n"),
    };
    let predicate: Predicate = game.predicate(s);
    match b {
        Some(b) => {
            let mut cfg = GameConfig::new(b, predicate, 0);
            if breaker_first {
                cfg.first_player = Player::Breaker;
            }
            let opts = SolveOptions {
                canonical: !plain,
                parallel: true,
                cache,
            };
            let r = solve_exact_with(&board, &cfg, opts)?;
            print(&json!({
                "game": game.as_str(), "b": b, "first": player(cfg.first_player),
                "winner": player(r.winner), "positions": r.positions, "symmetries": r.symmetries,
            }))
        }
        None => {
            let scan = exact_threshold_bias(&board, &predicate, b_max)?;
            let outcomes: Vec<Value> = scan.outcomes.iter().map(|&(b, w)| json!({ "b": b, "winner": player(w) })).collect();
            print(&json!({ "game": game.as_str(), "threshold": scan.threshold, "outcomes": outcomes }))
        }
    }
}

fn cmd_criteria(game: ThresholdGame, n: usize, s: usize, b: Option<f64>) -> Result<()> {
    let t = threshold_bounds(game, n, s)?;
    let mut values = json!({
        "order": t.order,
        "lower": t.lower,
        "upper": t.upper,
        "exponent": t.exponent,
        "constants": t.constants,
    });
    let mut flags = json!({ "asymptotic": t.asymptotic });
    if let Some(b) = b {
        match game {
            ThresholdGame::RainbowSpanningTree => {
                let mode = if n <= RS_EXACT_CAP { SumMode::Exact } else { SumMode::Bound };
                let sums = rs_beck_partition_sum(n, b, mode)?;
                values["partition_sums"] = json!(sums);
                flags["partition_sums_exact"] = json!(mode == SumMode::Exact);
                flags["maker_sums_below_one"] = json!(sums.f1 < 1.0 && sums.f2 < 1.0 && sums.f3 < 1.0);
            }
            ThresholdGame::RainbowConnectivity | ThresholdGame::Diameter if b >= 1.0 && n >= 4 && s >= 2 => {
                let pc = path_count_upper_bound(n, s, b as usize);
                flags["path_count_below_one"] = json!(pc.total < 1.0);
                values["path_count"] = json!(pc);
            }
            _ => {}
        }
        if let Some(u) = t.upper {
            flags["b_at_least_upper"] = json!(b >= u);
        }
        if let Some(l) = t.lower {
            flags["b_below_lower"] = json!(b < l);
        }
    }
    print(&json!({ "game": game, "n": n, "s": s, "b": b, "values": values, "flags": flags }))
}

fn cmd_random_intuition(path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = IntuitionConfig::from_toml(&text)?;
    let rows = random_intuition_experiment(&cfg)?;
    print(&json!({ "rows": rows }))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Play {
            game,
            n,
            s,
            b,
            maker,
            breaker,
            seed,
            params,
            transcript,
        } => cmd_play(game, n, s, b, &maker, &breaker, seed, params.as_deref(), transcript.as_deref()),
        Command::Sweep { config } => cmd_sweep(&config),
        Command::Threshold { config } => cmd_threshold(&config),
        Command::Check { graph, max_len } => cmd_check(&graph, max_len),
        Command::Solve {
            board,
            game,
            n,
            s,
            b,
            b_max,
            breaker_first,
            plain,
            cache,
        } => cmd_solve(board.as_deref(), game, n, s, b, b_max, breaker_first, plain, cache),
        Command::Criteria { game, n, s, b } => cmd_criteria(game, n, s, b),
        Command::RandomIntuition { config } => cmd_random_intuition(&config),
    }
}
