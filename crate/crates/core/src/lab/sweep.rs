use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{make_strategy, thread_pool, ExperimentConfig};
use crate::engine::{play_game, GameConfig, Outcome, Player, Transcript};
use crate::error::{Error, Result};
use crate::rng::split;

/// Value of the `schema` column. Bump on any column change.
pub const CSV_SCHEMA: &str = "mbr-results-1";

/// Aggregated outcome of one grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub game: String,
    pub maker: String,
    pub breaker: String,
    pub n: usize,
    pub s: usize,
    pub b: usize,
    pub trials: usize,
    pub maker_wins: usize,
    /// Forfeits by reason, keyed `"maker:reason"` or `"breaker:reason"`.
    pub forfeits: BTreeMap<String, usize>,
    pub wall_time: f64,
    /// Parameter packs of the first trial, keys prefixed `maker.` / `breaker.`.
    pub params: BTreeMap<String, f64>,
}

impl ResultRow {
    pub fn win_rate(&self) -> f64 {
        self.maker_wins as f64 / self.trials as f64
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    schema: String,
    game: String,
    maker: String,
    breaker: String,
    n: usize,
    s: usize,
    b: usize,
    trials: usize,
    maker_wins: usize,
    forfeits: String,
    wall_time: f64,
    params: String,
}

pub(super) struct Cell {
    pub n: usize,
    pub s: usize,
    pub b: usize,
}

pub(super) struct GameRecord {
    pub outcome: Outcome,
    pub params: BTreeMap<String, f64>,
    pub transcript: Option<Transcript>,
    pub secs: f64,
}

pub(super) fn play_one(cfg: &ExperimentConfig, cell: &Cell, seed: u64, keep: bool) -> Result<GameRecord> {
    let started = Instant::now();
    let board = cfg.game.board(cell.n, cell.s)?;
    let mut maker = make_strategy(&cfg.maker, cfg.game, cell.n, cell.s, cell.b, &cfg.params)?;
    let mut breaker = make_strategy(&cfg.breaker, cfg.game, cell.n, cell.s, cell.b, &cfg.params)?;
    let mut gc = GameConfig::new(cell.b, cfg.game.predicate(cell.s), seed);
    gc.strategy_params = cfg.params.clone();
    let r = play_game(board, maker.as_mut(), breaker.as_mut(), &gc)?;
    let mut params = BTreeMap::new();
    for (k, v) in &r.transcript.header.maker_params {
        params.insert(format!("maker.{k}"), *v);
    }
    for (k, v) in &r.transcript.header.breaker_params {
        params.insert(format!("breaker.{k}"), *v);
    }
    Ok(GameRecord {
        outcome: r.outcome,
        params,
        transcript: keep.then_some(r.transcript),
        secs: started.elapsed().as_secs_f64(),
    })
}

/// Seed of trial `trial` in cell `cell`.
pub(super) fn task_seed(seed: u64, cell: usize, trial: usize) -> u64 {
    split(seed, &[cell as u64, trial as u64])
}

pub(super) fn aggregate(cfg: &ExperimentConfig, cell: &Cell, games: &[GameRecord]) -> ResultRow {
    let mut forfeits = BTreeMap::new();
    for g in games {
        if let Outcome::Forfeit { by, reason } = &g.outcome {
            let who = if *by == Player::Maker { "maker" } else { "breaker" };
            *forfeits.entry(format!("{who}:{reason}")).or_default() += 1;
        }
    }
    ResultRow {
        game: cfg.game.as_str().into(),
        maker: cfg.maker.clone(),
        breaker: cfg.breaker.clone(),
        n: cell.n,
        s: cell.s,
        b: cell.b,
        trials: games.len(),
        maker_wins: games.iter().filter(|g| g.outcome.maker_won()).count(),
        forfeits,
        wall_time: games.iter().map(|g| g.secs).sum(),
        params: games.first().map(|g| g.params.clone()).unwrap_or_default(),
    }
}

/// Plays every (n, s, b) cell of the grid `trials` times. Writes the CSV and
/// the transcripts when the config names them.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    if cfg.b.is_empty() {
        return Err(Error::InvalidParameter("bias grid must be nonempty".into()));
    }
    let mut cells = Vec::new();
    for &n in &cfg.n {
        for &s in &cfg.s {
            for &b in &cfg.b {
                cells.push(Cell { n, s, b });
            }
        }
    }
    let keep = cfg.transcripts.is_some();
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let pool = thread_pool()?;
    let records: Vec<Result<GameRecord>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(c, t)| play_one(cfg, &cells[c], task_seed(cfg.seed, c, t), keep))
            .collect()
    });
    let records: Vec<GameRecord> = records.into_iter().collect::<Result<_>>()?;
    if let Some(dir) = &cfg.transcripts {
        std::fs::create_dir_all(dir)?;
        for (&(c, t), r) in tasks.iter().zip(&records) {
            let path = dir.join(format!("cell{c:04}-trial{t:05}.jsonl"));
            let f = std::io::BufWriter::new(std::fs::File::create(path)?);
            r.transcript.as_ref().expect("kept").write_jsonl(f)?;
        }
    }
    let mut rows: Vec<ResultRow> = records
        .chunks(cfg.trials)
        .zip(&cells)
        .map(|(games, cell)| aggregate(cfg, cell, games))
        .collect();
    rows.sort_by_key(|r| (r.n, r.s, r.b));
    if let Some(path) = &cfg.output {
        write_csv(&rows, path)?;
    }
    Ok(rows)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        let forfeits: Vec<String> = r.forfeits.iter().map(|(k, v)| format!("{k}={v}")).collect();
        w.serialize(CsvRow {
            schema: CSV_SCHEMA.into(),
            game: r.game.clone(),
            maker: r.maker.clone(),
            breaker: r.breaker.clone(),
            n: r.n,
            s: r.s,
            b: r.b,
            trials: r.trials,
            maker_wins: r.maker_wins,
            forfeits: forfeits.join(";"),
            wall_time: r.wall_time,
            params: serde_json::to_string(&r.params)?,
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut out = Vec::new();
    for rec in r.deserialize::<CsvRow>() {
        let rec = rec.map_err(csv_err)?;
        if rec.schema != CSV_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {}", rec.schema)));
        }
        let mut forfeits = BTreeMap::new();
        for part in rec.forfeits.split(';').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .rsplit_once('=')
                .ok_or_else(|| Error::Parse(format!("forfeit entry {part}")))?;
            forfeits.insert(k.to_string(), v.parse().map_err(|_| Error::Parse(part.into()))?);
        }
        out.push(ResultRow {
            game: rec.game,
            maker: rec.maker,
            breaker: rec.breaker,
            n: rec.n,
            s: rec.s,
            b: rec.b,
            trials: rec.trials,
            maker_wins: rec.maker_wins,
            forfeits,
            wall_time: rec.wall_time,
            params: serde_json::from_str(&rec.params)?,
        });
    }
    Ok(out)
}
