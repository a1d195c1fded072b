//! Closed-form criteria and threshold-bias calculators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};

pub use crate::subgames::sbg_conditions;

/// Running sum with Neumaier compensation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// `ln(sum exp(l_i))`, shifted by the largest term and summed with compensation.
pub fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let mut acc = Neumaier::default();
    for &l in logs {
        acc.add((l - m).exp());
    }
    m + acc.value().ln()
}

fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        f64::NEG_INFINITY
    } else {
        ln_binomial(n, k)
    }
}

/// Winning sets either listed or grouped by size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypergraphSummary {
    Explicit { sets: Vec<Vec<usize>> },
    /// `(set size, multiplicity)` pairs.
    Grouped { sizes: Vec<(usize, u64)> },
}

impl HypergraphSummary {
    pub fn grouped(&self) -> Vec<(usize, u64)> {
        match self {
            HypergraphSummary::Grouped { sizes } => sizes.clone(),
            HypergraphSummary::Explicit { sets } => {
                let mut m: BTreeMap<usize, u64> = BTreeMap::new();
                for f in sets {
                    *m.entry(f.len()).or_default() += 1;
                }
                m.into_iter().collect()
            }
        }
    }

    /// A disjoint family with the same size profile.
    pub fn to_explicit(&self) -> Result<Vec<Vec<usize>>> {
        match self {
            HypergraphSummary::Explicit { sets } => Ok(sets.clone()),
            HypergraphSummary::Grouped { sizes } => {
                let total: u64 = sizes.iter().map(|&(k, m)| k as u64 * m).sum();
                if total > 1 << 24 {
                    return Err(Error::TooLarge {
                        what: "explicit hypergraph",
                        value: total as usize,
                        cap: 1 << 24,
                    });
                }
                let mut next = 0;
                let mut out = Vec::new();
                for &(k, m) in sizes {
                    for _ in 0..m {
                        out.push((next..next + k).collect());
                        next += k;
                    }
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeckSum {
    pub sum: f64,
    pub ln_sum: f64,
    /// `sum < 1`; Breaker wins the `(p:q)` game when he starts.
    pub breaker_wins: bool,
}

/// `sum over F of (1+q)^(-|F|/p)`.
pub fn beck_sum(h: &HypergraphSummary, p: usize, q: usize) -> Result<BeckSum> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter("biases must be positive".into()));
    }
    let lq = (1.0 + q as f64).ln();
    let logs: Vec<f64> = h
        .grouped()
        .iter()
        .filter(|&&(_, m)| m > 0)
        .map(|&(k, m)| (m as f64).ln() - k as f64 * lq / p as f64)
        .collect();
    let ln_sum = log_sum_exp(&logs);
    Ok(BeckSum {
        sum: ln_sum.exp(),
        ln_sum,
        breaker_wins: ln_sum < 0.0,
    })
}

/// Box criterion: `m <= (p-1) ln n` for `n` boxes of size `m`.
pub fn box_criterion(p: usize, n_boxes: usize, m: usize) -> bool {
    p >= 1 && n_boxes >= 1 && m as f64 <= (p as f64 - 1.0) * (n_boxes as f64).ln()
}

/// Right-hand side of the MinBox guarantee `w_B <= b (w_M + ln n + 1)`.
pub fn minbox_breaker_bound(b: usize, w_m: usize, n_boxes: usize) -> f64 {
    b as f64 * (w_m as f64 + (n_boxes as f64).ln() + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdGame {
    RainbowConnectivity,
    Diameter,
    RainbowSpanningTree,
    RainbowConnectivityLargeS,
}

impl std::str::FromStr for ThresholdGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rainbow-connectivity" | "C" => ThresholdGame::RainbowConnectivity,
            "diameter" | "D" => ThresholdGame::Diameter,
            "rainbow-spanning-tree" | "RS" => ThresholdGame::RainbowSpanningTree,
            "rainbow-connectivity-large-s" | "C-large-s" => ThresholdGame::RainbowConnectivityLargeS,
            other => return Err(Error::UnknownGame(other.into())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBound {
    pub game: ThresholdGame,
    pub n: usize,
    pub s: usize,
    /// Growth order in `n` (the bounds are constant multiples of it).
    pub order: f64,
    /// `None` where only the existence of a constant is known.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub exponent: f64,
    pub constants: BTreeMap<String, f64>,
    /// Lower-order terms are dropped; the values are leading order only.
    pub asymptotic: bool,
}

/// `1 - 1/ceil(s/2)`.
pub fn t_exponent(s: usize) -> f64 {
    1.0 - 1.0 / s.div_ceil(2).max(1) as f64
}

pub fn threshold_bounds(game: ThresholdGame, n: usize, s: usize) -> Result<ThresholdBound> {
    if n < 2 || s == 0 {
        return Err(Error::InvalidDimensions { n, s });
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let mut constants = BTreeMap::new();
    let (order, lower, upper, exponent, asymptotic) = match game {
        ThresholdGame::RainbowConnectivity if s == 2 => (2.0, Some(2.0), Some(2.0), 0.0, false),
        ThresholdGame::RainbowConnectivity | ThresholdGame::Diameter => {
            let e = t_exponent(s);
            let order = nf.powf(e);
            constants.insert("C".into(), 24.0 * s as f64);
            (order, None, Some(24.0 * s as f64 * order), e, true)
        }
        ThresholdGame::RainbowSpanningTree => {
            let pairs = (n * (n - 1) / 2) as f64;
            let upper = if n > 2 { (pairs / (nf - 1.0).ln()).ceil() + 1.0 } else { f64::INFINITY };
            let c = 2f64.ln() / 8.0;
            constants.insert("lower".into(), c);
            (nf * nf / ln_n, Some(c * nf * nf / ln_n), Some(upper), 2.0, true)
        }
        ThresholdGame::RainbowConnectivityLargeS => {
            let order = s as f64 * nf / ln_n;
            constants.insert("lower".into(), 0.5);
            constants.insert("upper".into(), 1.0);
            (order, Some(0.5 * order), Some(order), 1.0, true)
        }
    };
    Ok(ThresholdBound {
        game,
        n,
        s,
        order,
        lower,
        upper,
        exponent,
        constants,
        asymptotic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumMode {
    Exact,
    Bound,
}

/// Partition-class sums for the rainbow-spanning-tree family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSums {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    /// Whole family, every partition counted once (exact mode only).
    pub total: Option<f64>,
}

/// Largest `n` for the exact partition enumeration.
pub const RS_EXACT_CAP: usize = 9;

/// Number of edges between different parts of a partition with these part sizes.
pub fn crossing_edges(part_sizes: &[usize]) -> usize {
    let n: usize = part_sizes.iter().sum();
    (n * n - part_sizes.iter().map(|a| a * a).sum::<usize>()) / 2
}

/// Part sizes of every set partition of `[n]` into at least two parts,
/// one entry per partition.
fn partition_shapes(n: usize) -> Vec<Vec<usize>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    loop {
        let k = a.iter().max().map_or(0, |m| m + 1);
        if k >= 2 {
            let mut sizes = vec![0; k];
            for &x in &a {
                sizes[x] += 1;
            }
            out.push(sizes);
        }
        // next string
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let m = a[..i].iter().max().copied().unwrap_or(0);
            if a[i] <= m {
                a[i] += 1;
                for x in a[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

pub fn rs_beck_partition_sum(n: usize, b: f64, mode: SumMode) -> Result<PartitionSums> {
    if n < 2 || b <= 0.0 {
        return Err(Error::InvalidParameter(format!("n={n}, b={b}")));
    }
    let ln2 = 2f64.ln();
    let nu = n as u64;
    let nf = n as f64;
    match mode {
        SumMode::Exact => {
            if n > RS_EXACT_CAP {
                return Err(Error::TooLarge {
                    what: "partition enumeration",
                    value: n,
                    cap: RS_EXACT_CAP,
                });
            }
            let (mut f1, mut f2, mut f3, mut all) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for sizes in partition_shapes(n) {
                let k = sizes.len();
                let e = crossing_edges(&sizes) as f64;
                let m = (n - k + 1) as u64;
                let l = ln_choose(nu - 1, m) - m as f64 * e * ln2 / b;
                all.push(l);
                if 2 * k <= n && sizes.iter().all(|&a| 2 * a <= n) {
                    f1.push(l);
                }
                if sizes.iter().any(|&a| 2 * a > n) {
                    f2.push(l);
                }
                if 2 * k > n {
                    f3.push(l);
                }
            }
            let ex = |v: &[f64]| log_sum_exp(v).exp();
            Ok(PartitionSums {
                f1: ex(&f1),
                f2: ex(&f2),
                f3: ex(&f3),
                total: Some(ex(&all)),
            })
        }
        SumMode::Bound => {
            let mut f1 = Vec::new();
            for k in 2..=n / 2 {
                let m = (n - k + 1) as u64;
                f1.push(nf * nf.ln() + ln_choose(nu - 1, m) - m as f64 * (nf * nf / 4.0) * ln2 / b);
            }
            let mut f2 = Vec::new();
            for t in 1..=n / 2 {
                let tf = t as f64;
                f2.push(2.0 * ln_choose(nu, t as u64) + tf * tf.ln() - tf * (nf - tf).powi(2) * ln2 / b);
            }
            let mut f3 = Vec::new();
            for k in n.div_ceil(2)..=n {
                let r = n - k;
                if 2 * r >= n {
                    continue;
                }
                let m = (n - k + 1) as u64;
                let rf = (2 * r) as f64;
                let parts = ln_choose(nu, 2 * r as u64) + if r > 0 { rf * rf.ln() } else { 0.0 };
                let e = (n * (n - 1) / 2 - (r + 1) * r / 2) as f64;
                f3.push(parts + ln_choose(nu - 1, m) - m as f64 * e * ln2 / b);
            }
            let ex = |v: &[f64]| log_sum_exp(v).exp();
            Ok(PartitionSums {
                f1: ex(&f1),
                f2: ex(&f2),
                f3: ex(&f3),
                total: None,
            })
        }
    }
}

fn ln_falling(n: i64, k: i64) -> f64 {
    if k < 0 || n < k {
        return f64::NEG_INFINITY;
    }
    (0..k).map(|i| ((n - i) as f64).ln()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathCountBound {
    /// Sum over paths avoiding Maker's first edge.
    pub f1: f64,
    /// Sum over paths through it (that edge removed from the set).
    pub f2: f64,
    pub total: f64,
    /// `s^s n^(s-1) b^(-s)`.
    pub leading: f64,
}

/// Ceiling on the number of length-`s` `v`,`w`-paths Maker can own on the
/// `s`-layer board once Breaker starts playing the potential strategy.
pub fn path_count_upper_bound(n: usize, s: usize, b: usize) -> PathCountBound {
    let (ni, si) = (n as i64, s as i64);
    let lb = (1.0 + b as f64).ln();
    let ls = (s as f64).ln();
    // vertex paths v..w with s-1 distinct inner vertices, and those with x,y adjacent inside
    let ln_all = ln_falling(ni - 2, si - 1);
    let ln_xy = if s >= 3 {
        (2.0 * (s - 2) as f64).ln() + ln_falling(ni - 4, si - 3)
    } else {
        f64::NEG_INFINITY
    };
    let all = ln_all.exp();
    let xy = ln_xy.exp();
    let colorings = (si as f64 * ls).exp();
    let through = ((si - 1) as f64 * ls).exp();
    let f1 = ((all - xy) * colorings + xy * (colorings - through)) * (-(s as f64) * lb).exp();
    let f2 = xy * through * (-((s - 1) as f64) * lb).exp();
    PathCountBound {
        f1,
        f2,
        total: f1 + f2,
        leading: colorings * (n as f64).powi(si as i32 - 1) * (b.max(1) as f64).powi(-(si as i32)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomRegime {
    ConstantS,
    LargeS,
}

/// Edge probability at which a random `s`-system becomes rainbow connected.
/// One color is ordinary connectivity, `ln n / n`, in either regime.
pub fn random_threshold(regime: RandomRegime, n: usize, s: usize) -> f64 {
    let nf = n as f64;
    if s <= 1 {
        return nf.ln() / nf;
    }
    match regime {
        RandomRegime::ConstantS => nf.powf(-((s - 1) as f64) / s as f64),
        RandomRegime::LargeS => nf.ln() / (s as f64 * nf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beck_examples() {
        let h = HypergraphSummary::Grouped { sizes: vec![(4, 4)] };
        let r = beck_sum(&h, 1, 1).unwrap();
        assert!((r.sum - 0.25).abs() < 1e-15);
        assert!(r.breaker_wins);
        let r = beck_sum(&HypergraphSummary::Explicit { sets: vec![vec![0]] }, 1, 1).unwrap();
        assert!((r.sum - 0.5).abs() < 1e-15);
        // terms far below f64 range still add up in log space
        let r = beck_sum(&HypergraphSummary::Grouped { sizes: vec![(5000, 1 << 40)] }, 1, 1).unwrap();
        assert!((r.ln_sum - (40.0 * 2f64.ln() - 5000.0 * 2f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn box_examples() {
        assert!(box_criterion(2, 10, 2));
        assert!(!box_criterion(2, 10, 3));
        assert!(!box_criterion(1, 10, 1));
    }

    #[test]
    fn threshold_examples() {
        let t = threshold_bounds(ThresholdGame::RainbowConnectivity, 1_000_000, 4).unwrap();
        assert!((t.order - 1000.0).abs() < 1e-6);
        assert!((t.upper.unwrap() - 96000.0).abs() < 1e-6);
        let t = threshold_bounds(ThresholdGame::RainbowSpanningTree, 100, 99).unwrap();
        assert_eq!(t.upper, Some(1079.0));
        let t = threshold_bounds(ThresholdGame::RainbowConnectivity, 17, 2).unwrap();
        assert_eq!((t.lower, t.upper), (Some(2.0), Some(2.0)));
    }

    #[test]
    fn crossing_count() {
        assert_eq!(crossing_edges(&[4, 4]), 16);
        assert_eq!(crossing_edges(&[1, 1, 1]), 3);
    }

    #[test]
    fn bell_numbers() {
        // partitions with at least two parts: B_n - 1
        for (n, bell) in [(2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            assert_eq!(partition_shapes(n).len(), bell - 1);
        }
    }

    #[test]
    fn bound_mode_large_n() {
        let n = 10_000f64;
        let b = (2f64.ln() / 8.0 - 0.01) * n * n / n.ln();
        let r = rs_beck_partition_sum(10_000, b, SumMode::Bound).unwrap();
        assert!(r.f1 < 1.0 && r.f2 < 1.0 && r.f3 < 1.0, "{r:?}");
    }

    #[test]
    fn random_thresholds() {
        assert!((random_threshold(RandomRegime::ConstantS, 10_000, 2) - 0.01).abs() < 1e-12);
        let l = random_threshold(RandomRegime::LargeS, 10_000, 200);
        assert!((l - 10_000f64.ln() / 2e6).abs() < 1e-15);
        assert!((random_threshold(RandomRegime::ConstantS, 50, 1) - 50f64.ln() / 50.0).abs() < 1e-15);
    }

    #[test]
    fn path_bound_limits() {
        let small = path_count_upper_bound(50, 3, 100_000_000);
        assert!(small.total < 1e-12);
        let p = path_count_upper_bound(6, 3, 1);
        assert!(p.f1 > 0.0 && p.f2 > 0.0);
    }
}
