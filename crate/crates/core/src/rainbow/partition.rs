use serde::{Deserialize, Serialize};

use super::ColoredSubgraph;
use crate::error::{Error, Result};

/// Largest `n` for which all set partitions are enumerated.
pub const PARTITION_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub holds: bool,
    /// Partition with the largest shortfall of crossing colors, when one exists.
    pub violating: Option<Vec<Vec<usize>>>,
}

/// Restricted growth strings of length `n` in lexicographic order.
pub(crate) fn for_each_rgs(n: usize, mut f: impl FnMut(&[usize], usize)) {
    if n == 0 {
        return;
    }
    let mut a = vec![0usize; n];
    // max block label used in a[..=i]
    let mut m = vec![0usize; n];
    loop {
        f(&a, m[n - 1] + 1);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if a[i] <= m[i - 1] {
                a[i] += 1;
                m[i] = m[i - 1].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    m[j] = m[j - 1];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Checks that every partition into `k` classes is crossed by at least `k - 1`
/// distinct colors.
pub fn partition_criterion_holds(g: &ColoredSubgraph) -> Result<PartitionCheck> {
    let n = g.n;
    if n > PARTITION_CAP {
        return Err(Error::TooLarge {
            what: "vertices for partition enumeration",
            value: n,
            cap: PARTITION_CAP,
        });
    }
    let edges: Vec<_> = g.edges.iter().copied().collect();
    let words = g.s.div_ceil(64).max(1);
    let mut worst: Option<(usize, Vec<usize>, usize)> = None;
    let mut seen = vec![0u64; words];
    for_each_rgs(n, |a, k| {
        seen.iter_mut().for_each(|x| *x = 0);
        let mut colors = 0;
        for e in &edges {
            if a[e.u] != a[e.v] {
                let (wi, bit) = (e.layer / 64, 1u64 << (e.layer % 64));
                if seen[wi] & bit == 0 {
                    seen[wi] |= bit;
                    colors += 1;
                }
            }
        }
        if colors + 1 < k {
            let deficit = k - 1 - colors;
            if worst.as_ref().is_none_or(|w| deficit > w.0) {
                worst = Some((deficit, a.to_vec(), k));
            }
        }
    });
    Ok(match worst {
        None => PartitionCheck {
            holds: true,
            violating: None,
        },
        Some((_, labels, k)) => {
            let mut classes = vec![Vec::new(); k];
            for (v, &l) in labels.iter().enumerate() {
                classes[l].push(v);
            }
            PartitionCheck {
                holds: false,
                violating: Some(classes),
            }
        }
    })
}
