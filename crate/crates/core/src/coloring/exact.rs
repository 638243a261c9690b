use crate::error::{Error, Result};
use crate::graph::BitGraph;

pub const EXACT_LIMIT: usize = 14;

/// Exact chromatic number by branch and bound over color classes.
pub fn exact_chromatic_small(g: &BitGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n > EXACT_LIMIT {
        return Err(Error::GraphTooLarge(n));
    }
    if n == 0 {
        return Ok(0);
    }
    // Highest degree first tightens the bound early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut colors = vec![usize::MAX; n];
    let mut best = n;
    branch(g, &order, 0, 0, &mut colors, &mut best);
    Ok(best)
}

fn branch(
    g: &BitGraph,
    order: &[usize],
    depth: usize,
    used: usize,
    colors: &mut [usize],
    best: &mut usize,
) {
    if used >= *best {
        return;
    }
    if depth == order.len() {
        *best = used;
        return;
    }
    let v = order[depth];
    // New colors are only opened one at a time, which removes relabelings.
    for c in 0..=used {
        let now_used = used.max(c + 1);
        if now_used >= *best {
            continue;
        }
        if g.neighbors(v).any(|u| colors[u] == c) {
            continue;
        }
        colors[v] = c;
        branch(g, order, depth + 1, now_used, colors, best);
        colors[v] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_known_values() {
        assert_eq!(exact_chromatic_small(&BitGraph::complete(5)).unwrap(), 5);
        assert_eq!(exact_chromatic_small(&BitGraph::new(10)).unwrap(), 1);
        let c5 = BitGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(exact_chromatic_small(&c5).unwrap(), 3);
        assert!(matches!(
            exact_chromatic_small(&BitGraph::new(15)),
            Err(Error::GraphTooLarge(15))
        ));
    }
}
