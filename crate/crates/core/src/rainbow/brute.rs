use super::{ColorRows, ColoredSubgraph, RainbowWitness, WitnessKind};
use crate::board::EdgeRef;
use crate::error::{Error, Result};

/// Largest `n` for the brute-force matching and Hamilton cycle searches.
pub const BRUTE_FORCE_CAP: usize = 12;

fn check_cap(g: &ColoredSubgraph) -> Result<()> {
    if g.n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            what: "vertices for brute-force search",
            value: g.n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if g.s > 64 {
        return Err(Error::TooLarge {
            what: "colors for brute-force search",
            value: g.s,
            cap: 64,
        });
    }
    Ok(())
}

pub fn has_rainbow_perfect_matching(g: &ColoredSubgraph) -> Result<Option<RainbowWitness>> {
    check_cap(g)?;
    let n = g.n;
    if n % 2 == 1 || g.s < n / 2 {
        return Ok(None);
    }
    let rows = ColorRows::new(g);
    fn go(
        rows: &ColorRows,
        matched: &mut Vec<bool>,
        used: u64,
        acc: &mut Vec<EdgeRef>,
    ) -> bool {
        let Some(x) = matched.iter().position(|&m| !m) else {
            return true;
        };
        matched[x] = true;
        for &(y, c) in &rows.nbrs[x] {
            if matched[y] || used >> c & 1 == 1 {
                continue;
            }
            matched[y] = true;
            acc.push(EdgeRef::new(c, x, y));
            if go(rows, matched, used | 1 << c, acc) {
                return true;
            }
            acc.pop();
            matched[y] = false;
        }
        matched[x] = false;
        false
    }
    let mut acc = Vec::new();
    let mut matched = vec![false; n];
    Ok(go(&rows, &mut matched, 0, &mut acc).then(|| RainbowWitness::new(WitnessKind::Matching, acc)))
}

pub fn has_rainbow_hamilton_cycle(g: &ColoredSubgraph) -> Result<Option<RainbowWitness>> {
    check_cap(g)?;
    let n = g.n;
    if n < 3 || g.s < n {
        return Ok(None);
    }
    let rows = ColorRows::new(g);
    struct Ctx<'a> {
        rows: &'a ColorRows,
        n: usize,
        visited: Vec<bool>,
        acc: Vec<EdgeRef>,
    }
    fn go(cx: &mut Ctx, x: usize, used: u64, depth: usize) -> bool {
        if depth == cx.n {
            for c in 0..cx.rows.s {
                if used >> c & 1 == 0 && cx.rows.has(c, x, 0) {
                    cx.acc.push(EdgeRef::new(c, x, 0));
                    return true;
                }
            }
            return false;
        }
        let rows = cx.rows;
        for &(y, c) in &rows.nbrs[x] {
            if cx.visited[y] || used >> c & 1 == 1 {
                continue;
            }
            cx.visited[y] = true;
            cx.acc.push(EdgeRef::new(c, x, y));
            if go(cx, y, used | 1 << c, depth + 1) {
                return true;
            }
            cx.acc.pop();
            cx.visited[y] = false;
        }
        false
    }
    let mut cx = Ctx {
        rows: &rows,
        n,
        visited: vec![false; n],
        acc: Vec::new(),
    };
    cx.visited[0] = true;
    Ok(go(&mut cx, 0, 0, 1).then(|| RainbowWitness::new(WitnessKind::Cycle, cx.acc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_two_vertices() {
        let g = ColoredSubgraph::from_edges(2, 1, [EdgeRef::new(0, 0, 1)]);
        let w = has_rainbow_perfect_matching(&g).unwrap().unwrap();
        assert!(w.is_valid(2, None));
    }

    #[test]
    fn four_cycle() {
        let g = ColoredSubgraph::from_edges(
            4,
            4,
            [
                EdgeRef::new(0, 0, 1),
                EdgeRef::new(1, 1, 2),
                EdgeRef::new(2, 2, 3),
                EdgeRef::new(3, 3, 0),
            ],
        );
        let w = has_rainbow_hamilton_cycle(&g).unwrap().unwrap();
        assert!(w.is_valid(4, None));
        let mono = ColoredSubgraph::from_edges(4, 4, g.edges.iter().map(|e| EdgeRef::new(0, e.u, e.v)));
        assert!(has_rainbow_hamilton_cycle(&mono).unwrap().is_none());
    }

    #[test]
    fn cap() {
        assert!(has_rainbow_perfect_matching(&ColoredSubgraph::new(14, 7)).is_err());
    }
}
