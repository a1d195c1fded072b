use mbrainbow::rainbow::{
    diameter_at_most, has_rainbow_hamilton_cycle, has_rainbow_perfect_matching, has_rainbow_spanning_tree,
    is_rainbow_connected, partition_criterion_holds, rainbow_path_exists, rainbow_path_with_sequence,
};
use mbrainbow::solver::{oracle_enumerate, oracle_list, OracleInstance, OracleItem};
use mbrainbow::{ColoredSubgraph, EdgeRef};
use proptest::prelude::*;

fn graph(n: usize, s: usize, mask: &[bool]) -> ColoredSubgraph {
    let mut g = ColoredSubgraph::new(n, s);
    let mut k = 0;
    for c in 0..s {
        for u in 0..n {
            for v in u + 1..n {
                if mask[k % mask.len()] {
                    g.insert(EdgeRef::new(c, u, v));
                }
                k += 1;
            }
        }
    }
    g
}

fn colored(max_n: usize, max_s: usize) -> impl Strategy<Value = ColoredSubgraph> {
    (2..=max_n, 1..=max_s, prop::collection::vec(prop::bool::weighted(0.35), 1..200))
        .prop_map(|(n, s, mask)| graph(n, s, &mask))
}

fn complete(n: usize, s: usize) -> ColoredSubgraph {
    graph(n, s, &[true])
}

/// Shortest rainbow path length between every pair, by oracle enumeration.
fn oracle_connected(g: &ColoredSubgraph, max_len: usize) -> bool {
    (0..g.n).all(|v| {
        (v + 1..g.n).all(|w| {
            (1..=max_len.min(g.n - 1)).any(|len| {
                oracle_enumerate(&OracleInstance::Paths { g: g.clone(), v, w, len, rainbow: true }).unwrap() > 0
            })
        })
    })
}

fn all_pairs_diameter(g: &ColoredSubgraph) -> usize {
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; g.n]; g.n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in &g.edges {
        d[e.u][e.v] = 1;
        d[e.v][e.u] = 1;
    }
    for k in 0..g.n {
        for i in 0..g.n {
            for j in 0..g.n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d.into_iter().flatten().max().unwrap_or(0)
}

/// Rainbow Hamilton cycles through vertex 0, by permutations and color choice.
fn brute_hamilton(g: &ColoredSubgraph) -> bool {
    fn extend(g: &ColoredSubgraph, path: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if path.len() == g.n {
            let mut cycle: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
            cycle.push((path[g.n - 1], path[0]));
            return colors_for(g, &cycle, 0, &mut vec![false; g.s]);
        }
        for v in 0..g.n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                if extend(g, path, used) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    fn colors_for(g: &ColoredSubgraph, pairs: &[(usize, usize)], i: usize, taken: &mut Vec<bool>) -> bool {
        if i == pairs.len() {
            return true;
        }
        let (a, b) = pairs[i];
        (0..g.s).any(|c| {
            if taken[c] || !g.contains(&EdgeRef::new(c, a, b)) {
                return false;
            }
            taken[c] = true;
            let ok = colors_for(g, pairs, i + 1, taken);
            taken[c] = false;
            ok
        })
    }
    if g.n < 3 {
        return false;
    }
    let mut used = vec![false; g.n];
    used[0] = true;
    extend(g, &mut vec![0], &mut used)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shortest_rainbow_path_matches_oracle(g in colored(7, 4), v in 0usize..7, w in 0usize..7, max_len in 1usize..5) {
        prop_assume!(v < g.n && w < g.n && v != w);
        let shortest = (1..=max_len.min(g.n - 1)).find(|&len| {
            oracle_enumerate(&OracleInstance::Paths { g: g.clone(), v, w, len, rainbow: true }).unwrap() > 0
        });
        let found = rainbow_path_exists(&g, v, w, max_len).unwrap();
        prop_assert_eq!(found.as_ref().map(|p| p.edges.len()), shortest);
        if let Some(p) = found {
            prop_assert!(p.colors_distinct());
            prop_assert!(p.is_valid(g.n, Some((v, w))));
            prop_assert!(p.edges.iter().all(|e| g.contains(e)));
        }
    }

    #[test]
    fn connectivity_matches_oracle(g in colored(6, 3), max_len in 1usize..6) {
        prop_assert_eq!(is_rainbow_connected(&g, Some(max_len)).unwrap(), oracle_connected(&g, max_len));
    }

    #[test]
    fn sequence_counts_match_oracle(g in colored(6, 3), seq in prop::collection::vec(0usize..3, 1..5)) {
        prop_assume!(seq.len() < g.n && seq.iter().all(|&c| c < g.s));
        let (v, w) = (0, g.n - 1);
        let brute = oracle_list(&OracleInstance::Paths { g: g.clone(), v, w, len: seq.len(), rainbow: false })
            .unwrap()
            .into_iter()
            .filter(|it| matches!(it, OracleItem::Edges(es) if es.iter().zip(&seq).all(|(e, &c)| e.layer == c)))
            .count() as u64;
        prop_assert_eq!(rainbow_path_with_sequence(&g, v, w, &seq), brute);
    }

    #[test]
    fn diameter_matches_floyd_warshall(g in colored(12, 2), bound in 1usize..8) {
        prop_assert_eq!(diameter_at_most(&g, bound), all_pairs_diameter(&g) <= bound);
    }

    #[test]
    fn spanning_tree_three_ways(n in 2usize..7, extra in 0usize..2, mask in prop::collection::vec(prop::bool::weighted(0.4), 1..120)) {
        let g = graph(n, n - 1 + extra, &mask);
        let count = oracle_enumerate(&OracleInstance::Trees { g: g.clone(), rainbow: true }).unwrap();
        let tree = has_rainbow_spanning_tree(&g);
        let part = partition_criterion_holds(&g).unwrap();
        prop_assert_eq!(tree.is_some(), count > 0);
        prop_assert_eq!(part.holds, count > 0);
        if let Some(t) = tree {
            prop_assert_eq!(t.edges.len(), n - 1);
            prop_assert!(t.colors_distinct());
            prop_assert!(t.is_valid(n, None));
        }
        if let Some(blocks) = part.violating {
            // a violating partition is crossed by fewer colors than blocks - 1
            let crossing: std::collections::BTreeSet<usize> = g
                .edges
                .iter()
                .filter(|e| !blocks.iter().any(|b| b.contains(&e.u) && b.contains(&e.v)))
                .map(|e| e.layer)
                .collect();
            prop_assert!(crossing.len() < blocks.len() - 1);
        }
    }

    #[test]
    fn perfect_matching_matches_oracle(n in 2usize..9, s in 1usize..5, mask in prop::collection::vec(prop::bool::weighted(0.4), 1..120)) {
        let g = graph(n, s, &mask);
        let count = oracle_enumerate(&OracleInstance::Matchings { g: g.clone(), rainbow: true }).unwrap();
        let found = has_rainbow_perfect_matching(&g).unwrap();
        prop_assert_eq!(found.is_some(), count > 0);
        if let Some(m) = found {
            prop_assert_eq!(m.edges.len(), n / 2);
            prop_assert!(m.colors_distinct());
        }
    }

    #[test]
    fn hamilton_cycle_matches_brute_force(n in 3usize..7, extra in 0usize..2, mask in prop::collection::vec(prop::bool::weighted(0.5), 1..120)) {
        let g = graph(n, n + extra, &mask);
        let found = has_rainbow_hamilton_cycle(&g).unwrap();
        prop_assert_eq!(found.is_some(), brute_hamilton(&g));
        if let Some(c) = found {
            prop_assert_eq!(c.edges.len(), n);
            prop_assert!(c.colors_distinct());
        }
    }

    #[test]
    fn adding_edges_never_hurts(g in colored(6, 3), extra in (0usize..3, 0usize..6, 0usize..6)) {
        let (c, a, b) = extra;
        prop_assume!(c < g.s && a < g.n && b < g.n && a != b);
        let mut h = g.clone();
        h.insert(EdgeRef::new(c, a, b));
        prop_assert!(!is_rainbow_connected(&g, None).unwrap() || is_rainbow_connected(&h, None).unwrap());
        prop_assert!(has_rainbow_spanning_tree(&g).is_none() || has_rainbow_spanning_tree(&h).is_some());
    }
}

// Values below were produced by the enumerators in `solver::oracle` and frozen.

#[test]
fn complete_board_path_counts() {
    // K_6 with 3 layers, paths 0 -> 1 of length 3: 4*3 vertex orders, 27 color words
    let g = complete(6, 3);
    assert_eq!(
        oracle_enumerate(&OracleInstance::Paths { g: g.clone(), v: 0, w: 1, len: 3, rainbow: false }).unwrap(),
        324
    );
    assert_eq!(
        oracle_enumerate(&OracleInstance::Paths { g: g.clone(), v: 0, w: 1, len: 3, rainbow: true }).unwrap(),
        72
    );
    assert_eq!(rainbow_path_with_sequence(&g, 0, 1, &[0, 1, 2]), 12);
    assert_eq!(rainbow_path_with_sequence(&g, 0, 1, &[0, 0, 0]), 12);
    assert_eq!(rainbow_path_with_sequence(&g, 0, 1, &[1]), 1);
}

#[test]
fn complete_board_structures() {
    // K_4 with 3 layers: 16 vertex trees, 3! colorings each
    assert_eq!(oracle_enumerate(&OracleInstance::Trees { g: complete(4, 3), rainbow: true }).unwrap(), 96);
    // K_6 with 3 layers: 15 perfect matchings, 3! colorings each
    assert_eq!(oracle_enumerate(&OracleInstance::Matchings { g: complete(6, 3), rainbow: true }).unwrap(), 90);
    assert!(has_rainbow_hamilton_cycle(&complete(5, 5)).unwrap().is_some());
    assert!(has_rainbow_hamilton_cycle(&complete(5, 4)).unwrap().is_none());
    assert!(has_rainbow_spanning_tree(&complete(5, 3)).is_none());
    assert!(is_rainbow_connected(&complete(5, 1), Some(1)).unwrap());
}

#[test]
fn monochromatic_path_is_not_rainbow() {
    let g = ColoredSubgraph::from_edges(3, 2, [EdgeRef::new(0, 0, 1), EdgeRef::new(0, 1, 2)]);
    assert!(!is_rainbow_connected(&g, None).unwrap());
    assert!(diameter_at_most(&g, 2));
    let g = ColoredSubgraph::from_edges(3, 2, [EdgeRef::new(0, 0, 1), EdgeRef::new(1, 1, 2)]);
    assert!(is_rainbow_connected(&g, None).unwrap());
    assert!(!is_rainbow_connected(&g, Some(1)).unwrap());
}
