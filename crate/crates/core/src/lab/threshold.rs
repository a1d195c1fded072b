use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::{play_one, Cell};
use super::{thread_pool, ExperimentConfig};
use crate::error::{Error, Result};
use crate::rng::split;

/// Maker is favored at a bias when her win rate is at least this.
pub const FAVOR_MAKER: f64 = 0.9;
/// Breaker is favored at a bias when Maker's win rate is at most this.
pub const FAVOR_BREAKER: f64 = 0.1;

/// Bracket `[b_low, b_high]` for one (n, s) cell: Maker is favored at
/// `b_low`, Breaker at `b_high`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub n: usize,
    pub s: usize,
    pub b_low: usize,
    pub b_high: usize,
    pub trials: usize,
    pub favor_maker: f64,
    pub favor_breaker: f64,
    /// Maker win rate at every bias that was played.
    pub rates: BTreeMap<usize, f64>,
}

struct Prober<'a> {
    cfg: &'a ExperimentConfig,
    pool: &'a rayon::ThreadPool,
    cell: usize,
    n: usize,
    s: usize,
    rates: BTreeMap<usize, f64>,
}

impl Prober<'_> {
    fn rate(&mut self, b: usize) -> Result<f64> {
        if let Some(&r) = self.rates.get(&b) {
            return Ok(r);
        }
        let cell = Cell { n: self.n, s: self.s, b };
        let (cfg, ci) = (self.cfg, self.cell as u64);
        let wins: Vec<Result<bool>> = self.pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = split(cfg.seed, &[ci, b as u64, t as u64]);
                    Ok(play_one(cfg, &cell, seed, false)?.outcome.maker_won())
                })
                .collect()
        });
        let wins = wins.into_iter().collect::<Result<Vec<bool>>>()?;
        let r = wins.iter().filter(|&&w| w).count() as f64 / cfg.trials as f64;
        self.rates.insert(b, r);
        Ok(r)
    }
}

/// Exponential bracketing then bisection on `b`, per (n, s) cell. Assumes
/// Maker's win rate is monotone in expectation; data that contradicts this
/// or never leaves the favored zone of one side is an error.
pub fn estimate_empirical_threshold(cfg: &ExperimentConfig) -> Result<Vec<ThresholdEstimate>> {
    cfg.validate()?;
    let pool = thread_pool()?;
    let mut out = Vec::new();
    let mut cell = 0;
    for &n in &cfg.n {
        for &s in &cfg.s {
            let (lo, hi) = match cfg.b_range {
                Some(r) => r,
                None => (1, cfg.game.board(n, s)?.edge_count()),
            };
            if lo == 0 || lo > hi {
                return Err(Error::InvalidParameter(format!("bias range {lo}..{hi}")));
            }
            let mut p = Prober {
                cfg,
                pool: &pool,
                cell,
                n,
                s,
                rates: BTreeMap::new(),
            };
            cell += 1;
            let (b_low, b_high) = bracket(&mut p, lo, hi)?;
            out.push(ThresholdEstimate {
                n,
                s,
                b_low,
                b_high,
                trials: cfg.trials,
                favor_maker: FAVOR_MAKER,
                favor_breaker: FAVOR_BREAKER,
                rates: p.rates,
            });
        }
    }
    Ok(out)
}

fn bracket(p: &mut Prober, lo: usize, hi: usize) -> Result<(usize, usize)> {
    if p.rate(lo)? < FAVOR_MAKER {
        return Err(Error::NonMonotoneData(format!(
            "n={} s={}: Maker not favored at the lowest bias {lo}",
            p.n, p.s
        )));
    }
    let mut low = lo;
    let mut b = lo;
    let high = loop {
        if b >= hi {
            return Err(Error::NonMonotoneData(format!(
                "n={} s={}: Breaker not favored up to b={hi}",
                p.n, p.s
            )));
        }
        b = (2 * b).min(hi);
        let r = p.rate(b)?;
        if r <= FAVOR_BREAKER {
            break b;
        }
        if r >= FAVOR_MAKER {
            low = b;
        }
    };
    let (mut l, mut h) = (low, high);
    while h - l > 1 {
        let mid = l + (h - l) / 2;
        if p.rate(mid)? >= FAVOR_MAKER {
            l = mid;
        } else {
            h = mid;
        }
    }
    let b_low = l;
    let mut h = high;
    while h - l > 1 {
        let mid = l + (h - l) / 2;
        if p.rate(mid)? <= FAVOR_BREAKER {
            h = mid;
        } else {
            l = mid;
        }
    }
    let b_high = h;
    let last_maker = p.rates.iter().filter(|(_, &r)| r >= FAVOR_MAKER).map(|(&b, _)| b).max();
    let first_breaker = p.rates.iter().filter(|(_, &r)| r <= FAVOR_BREAKER).map(|(&b, _)| b).min();
    if let (Some(m), Some(k)) = (last_maker, first_breaker) {
        if m > k {
            return Err(Error::NonMonotoneData(format!(
                "n={} s={}: Maker favored at b={m} above Breaker-favored b={k}",
                p.n, p.s
            )));
        }
    }
    Ok((b_low, b_high))
}
