use std::collections::BTreeMap;
use std::fs;

use mbrainbow::lab::{
    estimate_empirical_threshold, generate_random_system, layer_degree_chi_square, read_csv, run_sweep,
    ExperimentConfig, GameId,
};
use mbrainbow::{replay, Outcome, Player, Transcript};

fn sweep_config() -> ExperimentConfig {
    ExperimentConfig {
        game: GameId::RainbowConnectivity,
        n: vec![4, 5],
        s: vec![2, 3],
        b: vec![1, 2],
        b_range: None,
        maker: "random".into(),
        breaker: "random".into(),
        trials: 10,
        seed: 17,
        output: None,
        transcripts: None,
        params: BTreeMap::new(),
    }
}

#[test]
fn grid_counts() {
    let rows = run_sweep(&sweep_config()).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows.iter().map(|r| r.trials).sum::<usize>(), 80);
    assert!(rows.iter().all(|r| r.maker_wins <= r.trials));
    let keys: Vec<_> = rows.iter().map(|r| (r.n, r.s, r.b)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

fn strip_wall_time(text: &str) -> String {
    let mut out = String::new();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "wall_time").unwrap();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let kept: Vec<&str> = rec.iter().enumerate().filter(|&(i, _)| i != col).map(|(_, f)| f).collect();
        out.push_str(&kept.join(","));
        out.push('\n');
    }
    out
}

#[test]
fn rerun_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let mut cfg = sweep_config();
        cfg.output = Some(dir.path().join(format!("run{k}.csv")));
        run_sweep(&cfg).unwrap();
        texts.push(strip_wall_time(&fs::read_to_string(cfg.output.unwrap()).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
    let back = read_csv(&dir.path().join("run0.csv")).unwrap();
    assert_eq!(back.len(), 8);
}

#[test]
fn forfeits_match_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    // the pairing Breaker forfeits at bias 1 once no untouched pair is left
    let cfg = ExperimentConfig {
        game: GameId::RainbowConnectivity,
        n: vec![4],
        s: vec![2],
        b: vec![1, 2],
        maker: "random".into(),
        breaker: "pairing-breaker".into(),
        trials: 6,
        transcripts: Some(dir.path().join("t")),
        ..sweep_config()
    };
    let rows = run_sweep(&cfg).unwrap();
    let mut seen: BTreeMap<(usize, String), usize> = BTreeMap::new();
    let mut games = 0;
    for entry in fs::read_dir(dir.path().join("t")).unwrap() {
        let path = entry.unwrap().path();
        let t = Transcript::read_jsonl(std::io::BufReader::new(fs::File::open(&path).unwrap())).unwrap();
        assert_eq!(replay(&t).unwrap(), t.outcome);
        games += 1;
        if let Outcome::Forfeit { by, reason } = &t.outcome {
            let who = if *by == Player::Maker { "maker" } else { "breaker" };
            *seen.entry((t.config().breaker_bias, format!("{who}:{reason}"))).or_default() += 1;
        }
    }
    assert_eq!(games, 12);
    let mut reported = BTreeMap::new();
    for r in &rows {
        for (k, v) in &r.forfeits {
            reported.insert((r.b, k.clone()), *v);
        }
    }
    assert_eq!(seen, reported);
}

fn pairing_config(trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        game: GameId::RainbowConnectivity,
        n: vec![4, 6],
        s: vec![2],
        b: vec![],
        b_range: Some((1, 8)),
        maker: "pairing-maker".into(),
        breaker: "pairing-breaker".into(),
        trials,
        seed: 3,
        output: None,
        transcripts: None,
        params: BTreeMap::new(),
    }
}

#[test]
fn pairing_threshold_bracket() {
    for est in estimate_empirical_threshold(&pairing_config(20)).unwrap() {
        assert_eq!((est.b_low, est.b_high), (1, 2), "n={}", est.n);
        assert_eq!(est.rates[&1], 1.0);
        assert_eq!(est.rates[&2], 0.0);
    }
}

#[test]
fn more_trials_never_widen() {
    let a = estimate_empirical_threshold(&pairing_config(5)).unwrap();
    let b = estimate_empirical_threshold(&pairing_config(40)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(y.b_high - y.b_low <= x.b_high - x.b_low);
    }
}

#[test]
fn breaker_never_favored_is_an_error() {
    let mut cfg = pairing_config(5);
    cfg.breaker = "random".into();
    cfg.maker = "pairing-maker".into();
    cfg.b_range = Some((1, 1));
    assert!(estimate_empirical_threshold(&cfg).is_err());
}

#[test]
fn random_system_edge_count_mean() {
    let (n, s, p) = (12, 3, 0.3);
    let m = (s * n * (n - 1) / 2) as f64;
    let seeds = 1000;
    let total: usize = (0..seeds).map(|k| generate_random_system(n, s, p, k).unwrap().len()).sum();
    let mean = total as f64 / seeds as f64;
    let sigma = (m * p * (1.0 - p) / seeds as f64).sqrt();
    assert!((mean - p * m).abs() <= 3.0 * sigma, "mean {mean} vs {}", p * m);
}

#[test]
fn layer_degrees_are_binomial() {
    // degree of vertex 0 in every layer, one system per seed
    let (n, s, p) = (30, 2, 0.2);
    let mut samples = Vec::new();
    for k in 0..1500 {
        let g = generate_random_system(n, s, p, 1000 + k).unwrap();
        for c in 0..s {
            samples.push(g.edges.iter().filter(|e| e.layer == c && (e.u == 0 || e.v == 0)).count());
        }
    }
    let chi = layer_degree_chi_square(&samples, n - 1, p).unwrap();
    println!(
        "chi-square {:.3} on {} dof, p-value {:.4}, {} samples, alpha 0.01",
        chi.statistic, chi.dof, chi.p_value, chi.samples
    );
    assert!(chi.p_value > 0.01);
    // a wrong p is rejected
    assert!(layer_degree_chi_square(&samples, n - 1, 0.25).unwrap().p_value < 0.01);
}
