use std::collections::VecDeque;

use super::{ColoredSubgraph, RainbowWitness, WitnessKind};
use crate::board::EdgeRef;

// Rooted view of the current rainbow forest, for exchange queries.
struct Forest {
    comp: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
    // for each forest element: the child endpoint (deeper vertex)
    child_of: Vec<usize>,
}

impl Forest {
    fn build(n: usize, elems: &[EdgeRef], in_set: &[bool]) -> Forest {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in elems.iter().enumerate() {
            if in_set[i] {
                adj[e.u].push((e.v, i));
                adj[e.v].push((e.u, i));
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut tin = vec![0; n];
        let mut tout = vec![0; n];
        let mut child_of = vec![usize::MAX; elems.len()];
        let mut clock = 0;
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            // iterative DFS with explicit exit events
            let mut stack = vec![(root, usize::MAX, 0usize)];
            comp[root] = root;
            tin[root] = clock;
            clock += 1;
            while let Some(&mut (x, parent_elem, ref mut next)) = stack.last_mut() {
                if *next < adj[x].len() {
                    let (y, ei) = adj[x][*next];
                    *next += 1;
                    if ei == parent_elem {
                        continue;
                    }
                    comp[y] = root;
                    tin[y] = clock;
                    clock += 1;
                    child_of[ei] = y;
                    stack.push((y, ei, 0));
                } else {
                    tout[x] = clock;
                    stack.pop();
                }
            }
        }
        Forest {
            comp,
            tin,
            tout,
            child_of,
        }
    }

    fn in_subtree(&self, root: usize, x: usize) -> bool {
        self.tin[root] <= self.tin[x] && self.tin[x] < self.tout[root]
    }

    // Whether removing forest element `y` and adding `z` keeps a forest.
    fn exchange_ok(&self, y: usize, z: &EdgeRef) -> bool {
        if self.comp[z.u] != self.comp[z.v] {
            return true;
        }
        let c = self.child_of[y];
        self.in_subtree(c, z.u) != self.in_subtree(c, z.v)
    }
}

/// Largest rainbow forest by matroid intersection of the graphic matroid and
/// the color partition matroid; a spanning tree iff it has `n - 1` edges.
pub fn has_rainbow_spanning_tree(g: &ColoredSubgraph) -> Option<RainbowWitness> {
    let n = g.n;
    if n <= 1 {
        return Some(RainbowWitness::new(WitnessKind::Tree, Vec::new()));
    }
    let elems: Vec<EdgeRef> = g.edges.iter().copied().collect();
    let m = elems.len();
    let mut in_set = vec![false; m];
    let mut color_owner: Vec<Option<usize>> = vec![None; g.s];
    let mut size = 0;
    while size < n - 1 {
        let forest = Forest::build(n, &elems, &in_set);
        let in_x1 = |z: usize| forest.comp[elems[z].u] != forest.comp[elems[z].v];
        let in_x2 = |z: usize| color_owner[elems[z].layer].is_none();
        let mut pred = vec![usize::MAX; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::new();
        for z in 0..m {
            if !in_set[z] && in_x1(z) {
                seen[z] = true;
                queue.push_back(z);
            }
        }
        let mut end = None;
        while let Some(x) = queue.pop_front() {
            if !in_set[x] {
                if in_x2(x) {
                    end = Some(x);
                    break;
                }
                // z -> y when color(y) = color(z)
                if let Some(y) = color_owner[elems[x].layer] {
                    if !seen[y] {
                        seen[y] = true;
                        pred[y] = x;
                        queue.push_back(y);
                    }
                }
            } else {
                for z in 0..m {
                    if !in_set[z] && !seen[z] && forest.exchange_ok(x, &elems[z]) {
                        seen[z] = true;
                        pred[z] = x;
                        queue.push_back(z);
                    }
                }
            }
        }
        let Some(mut cur) = end else {
            break;
        };
        loop {
            in_set[cur] = !in_set[cur];
            if pred[cur] == usize::MAX {
                break;
            }
            cur = pred[cur];
        }
        color_owner.iter_mut().for_each(|c| *c = None);
        for (i, e) in elems.iter().enumerate() {
            if in_set[i] {
                debug_assert!(color_owner[e.layer].is_none());
                color_owner[e.layer] = Some(i);
            }
        }
        size += 1;
    }
    if size == n - 1 {
        let edges = elems
            .iter()
            .zip(&in_set)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        Some(RainbowWitness::new(WitnessKind::Tree, edges))
    } else {
        None
    }
}
