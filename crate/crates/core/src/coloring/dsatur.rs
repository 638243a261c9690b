use super::ColorAssignment;
use crate::graph::BitGraph;

/// DSATUR: repeatedly color the uncolored vertex with the most distinct
/// neighbour colors (ties: higher degree, then lower index) with the
/// smallest free color.
pub fn dsatur(g: &BitGraph) -> ColorAssignment {
    let n = g.vertex_count();
    let words = n / 64 + 1;
    let mut color: Vec<Option<u32>> = vec![None; n];
    let mut seen = vec![0u64; n * words];
    let mut saturation = vec![0usize; n];
    let degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();

    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v].is_none())
            .max_by_key(|&v| (saturation[v], degree[v], std::cmp::Reverse(v)))
            .expect("uncolored vertex remains");
        let row = &seen[v * words..(v + 1) * words];
        let c = row
            .iter()
            .enumerate()
            .find(|(_, &w)| w != u64::MAX)
            .map(|(i, &w)| i * 64 + (!w).trailing_zeros() as usize)
            .expect("free color exists");
        color[v] = Some(c as u32);
        for u in g.neighbors(v) {
            if color[u].is_some() {
                continue;
            }
            let slot = &mut seen[u * words + c / 64];
            if *slot >> (c % 64) & 1 == 0 {
                *slot |= 1 << (c % 64);
                saturation[u] += 1;
            }
        }
    }
    ColorAssignment::new(color.into_iter().map(|c| c.expect("all colored")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;

    #[test]
    fn bipartite_cycle_uses_two_colors() {
        let g = BitGraph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let a = dsatur(&g);
        assert!(verify_coloring(&g, &a).unwrap());
        assert_eq!(a.color_count(), 2);
    }

    #[test]
    fn complete_graph_uses_n_colors() {
        let g = BitGraph::complete(70);
        let a = dsatur(&g);
        assert!(verify_coloring(&g, &a).unwrap());
        assert_eq!(a.color_count(), 70);
    }

    #[test]
    fn empty_graph() {
        assert!(dsatur(&BitGraph::new(0)).is_empty());
        assert_eq!(dsatur(&BitGraph::new(5)).color_count(), 1);
    }
}
