//! Global minimum cut of a weighted graph (Stoer-Wagner), on arbitrary
//! vertex subsets. Used for exact edge strengths and for the small-cut
//! removal step of cut-sparsifier recovery.

use std::collections::BTreeSet;

use crate::graph::Edge;

/// Global minimum cut of the connected graph induced by `verts` and `edges`.
/// Returns the cut weight and one side of an optimal cut (as original vertex
/// labels). `verts` must have at least two entries; edges must connect
/// vertices from `verts`.
pub fn global_min_cut(verts: &[usize], edges: &[(Edge, f64)]) -> (f64, BTreeSet<usize>) {
    let n = verts.len();
    assert!(n >= 2, "min cut needs at least two vertices");
    let mut index = std::collections::BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        index.insert(v, i);
    }
    let mut w = vec![vec![0.0f64; n]; n];
    for &((u, v), wt) in edges {
        let (a, b) = (index[&u], index[&v]);
        w[a][b] += wt;
        w[b][a] += wt;
    }
    // merged[i] lists the original vertices currently contracted into i.
    let mut merged: Vec<Vec<usize>> = verts.iter().map(|&v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();

    let mut best = f64::INFINITY;
    let mut best_side: BTreeSet<usize> = BTreeSet::new();

    while active.len() > 1 {
        // Maximum adjacency ordering from the first active vertex.
        let mut weights = vec![0.0f64; n];
        let mut in_a = vec![false; n];
        let mut order = Vec::with_capacity(active.len());
        for _ in 0..active.len() {
            let mut pick = usize::MAX;
            for &v in &active {
                if !in_a[v] && (pick == usize::MAX || weights[v] > weights[pick]) {
                    pick = v;
                }
            }
            in_a[pick] = true;
            order.push(pick);
            for &v in &active {
                if !in_a[v] {
                    weights[v] += w[pick][v];
                }
            }
        }
        let t = *order.last().unwrap();
        let s = order[order.len() - 2];
        let cut_of_phase = weights[t];
        if cut_of_phase < best {
            best = cut_of_phase;
            best_side = merged[t].iter().cloned().collect();
        }
        // Merge t into s.
        let tm = std::mem::take(&mut merged[t]);
        merged[s].extend(tm);
        for &v in &active {
            if v != s && v != t {
                w[s][v] += w[t][v];
                w[v][s] = w[s][v];
            }
        }
        active.retain(|&v| v != t);
    }
    (best, best_side)
}

/// Convenience wrapper over a full vertex range.
pub fn min_cut_value(n: usize, edges: &[(Edge, f64)]) -> (f64, BTreeSet<usize>) {
    let verts: Vec<usize> = (0..n).collect();
    global_min_cut(&verts, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_cut() {
        // Two triangles joined by a light bridge.
        let mut edges = vec![];
        for (u, v) in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            edges.push(((u, v), 1.0));
        }
        edges.push(((2, 3), 0.5));
        let (cut, side) = min_cut_value(6, &edges);
        assert!((cut - 0.5).abs() < 1e-12);
        let small: BTreeSet<usize> = [0, 1, 2].into_iter().collect();
        let big: BTreeSet<usize> = [3, 4, 5].into_iter().collect();
        assert!(side == small || side == big);
    }

    #[test]
    fn complete_graph_cut() {
        let mut edges = vec![];
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push(((u, v), 2.0));
            }
        }
        let (cut, side) = min_cut_value(5, &edges);
        assert!((cut - 8.0).abs() < 1e-12);
        assert_eq!(side.len().min(5 - side.len()), 1);
    }

    #[test]
    fn weighted_asymmetric() {
        // Path with varying weights: cut at the lightest edge.
        let edges = vec![((0, 1), 3.0), ((1, 2), 1.0), ((2, 3), 2.0)];
        let (cut, _) = min_cut_value(4, &edges);
        assert!((cut - 1.0).abs() < 1e-12);
    }
}
