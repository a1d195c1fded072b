//! Brute-force enumerators. None of them call the checkers in `rainbow`.

use crate::board::EdgeRef;
use crate::error::{Error, Result};
use crate::rainbow::ColoredSubgraph;

pub const PATHS_MAX_N: usize = 10;
pub const PARTITIONS_MAX_N: usize = 10;
pub const MATCHINGS_MAX_N: usize = 12;
pub const TREES_MAX_SUBSETS: u64 = 20_000_000;

#[derive(Clone, Debug)]
pub enum OracleInstance {
    /// `v`-`w` paths with exactly `len` edges.
    Paths {
        g: ColoredSubgraph,
        v: usize,
        w: usize,
        len: usize,
        rainbow: bool,
    },
    /// Perfect matchings.
    Matchings { g: ColoredSubgraph, rainbow: bool },
    /// Spanning trees, parallel edges of different colors counted apart.
    Trees { g: ColoredSubgraph, rainbow: bool },
    /// Set partitions of `0..n`.
    Partitions { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleItem {
    Edges(Vec<EdgeRef>),
    Blocks(Vec<Vec<usize>>),
}

fn too_large(what: &'static str, value: usize, cap: usize) -> Error {
    Error::TooLarge { what, value, cap }
}

fn distinct_colors(es: &[EdgeRef]) -> bool {
    let mut seen = vec![false; es.iter().map(|e| e.layer + 1).max().unwrap_or(0)];
    for e in es {
        if seen[e.layer] {
            return false;
        }
        seen[e.layer] = true;
    }
    true
}

pub fn oracle_enumerate(inst: &OracleInstance) -> Result<u64> {
    Ok(oracle_list(inst)?.len() as u64)
}

pub fn oracle_list(inst: &OracleInstance) -> Result<Vec<OracleItem>> {
    match inst {
        OracleInstance::Paths { g, v, w, len, rainbow } => paths(g, *v, *w, *len, *rainbow),
        OracleInstance::Matchings { g, rainbow } => matchings(g, *rainbow),
        OracleInstance::Trees { g, rainbow } => trees(g, *rainbow),
        OracleInstance::Partitions { n } => partitions(*n),
    }
}

fn colors_between(g: &ColoredSubgraph, a: usize, b: usize) -> Vec<EdgeRef> {
    (0..g.s)
        .map(|c| EdgeRef::new(c, a, b))
        .filter(|e| a != b && g.contains(e))
        .collect()
}

fn paths(g: &ColoredSubgraph, v: usize, w: usize, len: usize, rainbow: bool) -> Result<Vec<OracleItem>> {
    if g.n > PATHS_MAX_N {
        return Err(too_large("oracle path vertices", g.n, PATHS_MAX_N));
    }
    if v >= g.n || w >= g.n || v == w || len == 0 || len >= g.n {
        return Ok(Vec::new());
    }
    let inner = len - 1;
    let mut out = Vec::new();
    // odometer over all inner vertex tuples
    let mut digits = vec![0usize; inner];
    loop {
        let mut seq = Vec::with_capacity(len + 1);
        seq.push(v);
        seq.extend_from_slice(&digits);
        seq.push(w);
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == seq.len() {
            let options: Vec<Vec<EdgeRef>> = seq.windows(2).map(|p| colors_between(g, p[0], p[1])).collect();
            if options.iter().all(|o| !o.is_empty()) {
                let mut choice = vec![0usize; len];
                loop {
                    let es: Vec<EdgeRef> = choice.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                    if !rainbow || distinct_colors(&es) {
                        out.push(OracleItem::Edges(es));
                    }
                    let mut k = 0;
                    while k < len {
                        choice[k] += 1;
                        if choice[k] < options[k].len() {
                            break;
                        }
                        choice[k] = 0;
                        k += 1;
                    }
                    if k == len {
                        break;
                    }
                }
            }
        }
        let mut k = 0;
        while k < inner {
            digits[k] += 1;
            if digits[k] < g.n {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == inner {
            break;
        }
    }
    Ok(out)
}

fn matchings(g: &ColoredSubgraph, rainbow: bool) -> Result<Vec<OracleItem>> {
    if g.n > MATCHINGS_MAX_N {
        return Err(too_large("oracle matching vertices", g.n, MATCHINGS_MAX_N));
    }
    fn rec(g: &ColoredSubgraph, used: &mut Vec<bool>, acc: &mut Vec<EdgeRef>, rainbow: bool, out: &mut Vec<OracleItem>) {
        let Some(a) = used.iter().position(|&u| !u) else {
            if !rainbow || distinct_colors(acc) {
                out.push(OracleItem::Edges(acc.clone()));
            }
            return;
        };
        used[a] = true;
        for b in a + 1..g.n {
            if used[b] {
                continue;
            }
            used[b] = true;
            for e in colors_between(g, a, b) {
                acc.push(e);
                rec(g, used, acc, rainbow, out);
                acc.pop();
            }
            used[b] = false;
        }
        used[a] = false;
    }
    let mut out = Vec::new();
    if g.n.is_multiple_of(2) {
        rec(g, &mut vec![false; g.n], &mut Vec::new(), rainbow, &mut out);
    }
    Ok(out)
}

fn trees(g: &ColoredSubgraph, rainbow: bool) -> Result<Vec<OracleItem>> {
    let edges: Vec<EdgeRef> = g.edges.iter().copied().collect();
    let k = g.n.saturating_sub(1);
    let mut out = Vec::new();
    if k > edges.len() {
        return Ok(out);
    }
    let mut subsets: u128 = 1;
    for i in 0..k {
        subsets = subsets * (edges.len() - i) as u128 / (i + 1) as u128;
    }
    if subsets > TREES_MAX_SUBSETS as u128 {
        return Err(too_large("oracle tree subsets", subsets.min(usize::MAX as u128) as usize, TREES_MAX_SUBSETS as usize));
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let es: Vec<EdgeRef> = pick.iter().map(|&i| edges[i]).collect();
        // n-1 edges span iff they connect everything; relabel components
        let mut label: Vec<usize> = (0..g.n.max(1)).collect();
        for e in &es {
            let (from, to) = (label[e.u], label[e.v]);
            if from != to {
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
        if label.iter().all(|&l| l == label[0]) && (!rainbow || distinct_colors(&es)) {
            out.push(OracleItem::Edges(es));
        }
        let mut i = k;
        while i > 0 && pick[i - 1] == edges.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(out)
}

fn partitions(n: usize) -> Result<Vec<OracleItem>> {
    if n > PARTITIONS_MAX_N {
        return Err(too_large("oracle partition size", n, PARTITIONS_MAX_N));
    }
    let mut out = vec![Vec::<Vec<usize>>::new()];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    Ok(out.into_iter().map(OracleItem::Blocks).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize, s: usize) -> ColoredSubgraph {
        let mut g = ColoredSubgraph::new(n, s);
        for c in 0..s {
            for a in 0..n {
                for b in a + 1..n {
                    g.insert(EdgeRef::new(c, a, b));
                }
            }
        }
        g
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(oracle_enumerate(&OracleInstance::Partitions { n }).unwrap(), b);
        }
    }

    #[test]
    fn cayley() {
        for (n, t) in [(3, 3), (4, 16), (5, 125)] {
            let g = complete(n, 1);
            assert_eq!(oracle_enumerate(&OracleInstance::Trees { g, rainbow: false }).unwrap(), t);
        }
    }

    #[test]
    fn two_star() {
        // v=0, w=2 through centre 1 in two colors each way
        let mut g = ColoredSubgraph::new(3, 2);
        for c in 0..2 {
            g.insert(EdgeRef::new(c, 0, 1));
            g.insert(EdgeRef::new(c, 1, 2));
        }
        let inst = OracleInstance::Paths { g, v: 0, w: 2, len: 2, rainbow: true };
        assert_eq!(oracle_enumerate(&inst).unwrap(), 2);
    }

    #[test]
    fn matchings_of_k4() {
        assert_eq!(oracle_enumerate(&OracleInstance::Matchings { g: complete(4, 1), rainbow: false }).unwrap(), 3);
        // 3 matchings, 2 colors each edge, 2 ways to make the pair rainbow
        assert_eq!(oracle_enumerate(&OracleInstance::Matchings { g: complete(4, 2), rainbow: true }).unwrap(), 6);
    }

    #[test]
    fn caps() {
        assert!(oracle_enumerate(&OracleInstance::Partitions { n: 11 }).is_err());
    }
}
