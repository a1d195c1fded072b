use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use super::thread_pool;
use crate::board::{Board, EdgeRef};
use crate::engine::{play_game, GameConfig, Predicate};
use crate::error::{Error, Result};
use crate::rainbow::{is_rainbow_connected, ColoredSubgraph};
use crate::rng::{split, Rng};
use crate::strategies::RandomStrategy;

/// `s` independent `G(n, p)` layers.
pub fn generate_random_system(n: usize, s: usize, p: f64, seed: u64) -> Result<ColoredSubgraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p={p} outside [0, 1]")));
    }
    let mut rng = Rng::seed_from_u64(seed);
    let mut g = ColoredSubgraph::new(n, s);
    for c in 0..s {
        for u in 0..n {
            for v in u + 1..n {
                if rng.bernoulli(p) {
                    g.insert(EdgeRef::new(c, u, v));
                }
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub samples: usize,
}

/// Goodness of fit of `samples` to `Binomial(trials, p)`. Tail cells are
/// merged until every expected count is at least 5.
pub fn layer_degree_chi_square(samples: &[usize], trials: usize, p: f64) -> Result<ChiSquare> {
    let dist = Binomial::new(p, trials as u64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let total = samples.len() as f64;
    let mut observed = vec![0f64; trials + 1];
    for &x in samples {
        if x > trials {
            return Err(Error::InvalidParameter(format!("sample {x} exceeds {trials}")));
        }
        observed[x] += 1.0;
    }
    let expected: Vec<f64> = (0..=trials).map(|k| dist.pmf(k as u64) * total).collect();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for k in 0..=trials {
        o += observed[k];
        e += expected[k];
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    if cells.len() < 2 {
        return Err(Error::InvalidParameter("too few samples for a chi-square test".into()));
    }
    let statistic: f64 = cells.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = cells.len() - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: 1.0 - chi.cdf(statistic),
        samples: samples.len(),
    })
}

/// Random-system connectivity scan and random-vs-random games.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntuitionConfig {
    pub n: Vec<usize>,
    #[serde(default)]
    pub s: Vec<usize>,
    /// Use `s = 4 ceil(ln n)` for each `n` instead of the `s` grid.
    #[serde(default)]
    pub large_s: bool,
    /// The p grid is log-spaced over `[lo, hi]` times a reference scale:
    /// `n^(-(s-1)/s)`, or `ln n / (s n)` with `large_s`.
    pub p_factors: (f64, f64),
    pub p_points: usize,
    pub samples: usize,
    /// Biases for the random-vs-random games; empty to skip them.
    #[serde(default)]
    pub b: Vec<usize>,
    #[serde(default)]
    pub games: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl IntuitionConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &n in &self.n {
            if self.large_s {
                out.push((n, 4 * (n as f64).ln().ceil() as usize));
            } else {
                out.extend(self.s.iter().map(|&s| (n, s)));
            }
        }
        out
    }

    pub fn reference_p(&self, n: usize, s: usize) -> f64 {
        let nf = n as f64;
        if self.large_s {
            nf.ln() / (s as f64 * nf)
        } else {
            nf.powf(-((s as f64 - 1.0) / s as f64))
        }
    }

    pub fn p_grid(&self, n: usize, s: usize) -> Vec<f64> {
        let r = self.reference_p(n, s);
        let (lo, hi) = (self.p_factors.0.ln(), self.p_factors.1.ln());
        let k = self.p_points.max(2);
        (0..k)
            .map(|i| (r * (lo + (hi - lo) * i as f64 / (k - 1) as f64).exp()).min(1.0))
            .collect()
    }
}

/// One row: either a system-connectivity point (`kind = "system"`, `p` set)
/// or a random-game point (`kind = "game"`, `b` set).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntuitionRow {
    pub kind: String,
    pub n: usize,
    pub s: usize,
    pub p: Option<f64>,
    pub b: Option<usize>,
    pub samples: usize,
    pub successes: usize,
    pub freq: f64,
}

pub fn random_intuition_experiment(cfg: &IntuitionConfig) -> Result<Vec<IntuitionRow>> {
    if cfg.n.is_empty() || (!cfg.large_s && cfg.s.is_empty()) || cfg.samples == 0 {
        return Err(Error::InvalidParameter("empty grid or zero samples".into()));
    }
    if !(cfg.p_factors.0 > 0.0 && cfg.p_factors.0 <= cfg.p_factors.1) {
        return Err(Error::InvalidParameter("p_factors must satisfy 0 < lo <= hi".into()));
    }
    let pool = thread_pool()?;
    let mut rows = Vec::new();
    for (ci, (n, s)) in cfg.cells().into_iter().enumerate() {
        for (pi, p) in cfg.p_grid(n, s).into_iter().enumerate() {
            let hits: Result<Vec<bool>> = pool.install(|| {
                (0..cfg.samples)
                    .into_par_iter()
                    .map(|t| {
                        let seed = split(cfg.seed, &[0, ci as u64, pi as u64, t as u64]);
                        is_rainbow_connected(&generate_random_system(n, s, p, seed)?, None)
                    })
                    .collect()
            });
            let k = hits?.iter().filter(|&&h| h).count();
            rows.push(IntuitionRow {
                kind: "system".into(),
                n,
                s,
                p: Some(p),
                b: None,
                samples: cfg.samples,
                successes: k,
                freq: k as f64 / cfg.samples as f64,
            });
        }
        if cfg.games == 0 {
            continue;
        }
        for &b in &cfg.b {
            let wins: Result<Vec<bool>> = pool.install(|| {
                (0..cfg.games)
                    .into_par_iter()
                    .map(|t| {
                        let seed = split(cfg.seed, &[1, ci as u64, b as u64, t as u64]);
                        let gc = GameConfig::new(b, Predicate::RainbowConnected { max_len: None }, seed);
                        let r = play_game(Board::new_layered_complete(n, s)?, &mut RandomStrategy, &mut RandomStrategy, &gc)?;
                        Ok(r.outcome.maker_won())
                    })
                    .collect()
            });
            let k = wins?.iter().filter(|&&w| w).count();
            rows.push(IntuitionRow {
                kind: "game".into(),
                n,
                s,
                p: None,
                b: Some(b),
                samples: cfg.games,
                successes: k,
                freq: k as f64 / cfg.games as f64,
            });
        }
    }
    if let Some(path) = &cfg.output {
        write_intuition_csv(&rows, path)?;
    }
    Ok(rows)
}

pub fn write_intuition_csv(rows: &[IntuitionRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Where `freq` first crosses 1/2, interpolating linearly in `ln p`.
pub fn crossing_point(ps: &[f64], freqs: &[f64]) -> Option<f64> {
    let i = (1..ps.len().min(freqs.len())).find(|&i| freqs[i - 1] < 0.5 && freqs[i] >= 0.5)?;
    let (a, b) = (ps[i - 1].ln(), ps[i].ln());
    let t = (0.5 - freqs[i - 1]) / (freqs[i] - freqs[i - 1]);
    Some((a + t * (b - a)).exp())
}

/// Least-squares fit of `ln y = slope ln x + intercept`; returns
/// `(slope, intercept)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|&v| v <= 0.0) {
        return Err(Error::InvalidParameter("need at least two positive points".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all x equal".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert!(generate_random_system(6, 2, 0.0, 1).unwrap().is_empty());
        assert_eq!(generate_random_system(6, 2, 1.0, 1).unwrap().len(), 30);
        assert!(generate_random_system(6, 2, 1.5, 1).is_err());
    }

    #[test]
    fn crossing_interpolates() {
        let p = crossing_point(&[0.1, 0.2, 0.4], &[0.0, 0.25, 0.75]).unwrap();
        assert!((p - (0.2f64.ln() * 0.5 + 0.4f64.ln() * 0.5).exp()).abs() < 1e-12);
        assert!(crossing_point(&[0.1, 0.2], &[0.1, 0.2]).is_none());
    }

    #[test]
    fn power_law_exact() {
        let xs = [50.0, 100.0, 200.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.5)).collect();
        let (slope, c) = fit_power_law(&xs, &ys).unwrap();
        assert!((slope + 0.5).abs() < 1e-12);
        assert!((c - 3f64.ln()).abs() < 1e-12);
    }
}
