//! Model-oblivious reference algorithm for weighted cut sparsification.
//!
//! Levels run from `ceil(log2(n U))` down to 0. At level `l` the graph is
//! subsampled at rate `min(beta w 2^-l log n, 1)`, split into strongly
//! connected pieces by repeatedly removing cuts of weight at most
//! `gamma log n`, sampled into the sparsifier at rate
//! `min(alpha w eps^-2 2^-l log n, 1)` within the pieces, and contracted.

use std::collections::BTreeMap;

use crate::graph::{slot_index, Edge, WeightedGraph};
use crate::mincut;
use crate::sketch::SketchSeed;

/// Sampling-rate constants of the reference algorithm and its sketch
/// implementation.
#[derive(Debug, Clone, Copy)]
pub struct CutConstants {
    /// Sparsifier admission rate multiplier.
    pub alpha: f64,
    /// Level subsampling rate multiplier.
    pub beta: f64,
    /// Small-cut removal threshold multiplier.
    pub gamma: f64,
}

impl Default for CutConstants {
    fn default() -> Self {
        CutConstants { alpha: 800.0, beta: 400.0, gamma: 100.0 }
    }
}

pub(crate) fn log2n(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

pub(crate) fn level_count(n: usize, wmax: f64) -> u32 {
    ((n as f64 * wmax.max(1.0)).log2().ceil() as u32).max(1)
}

/// Partition into components with minimum internal cut above
/// `threshold`, found by repeatedly removing any lighter cut. Returns a
/// component label per vertex of `g` (labels are dense from 0).
pub fn strong_components(g: &WeightedGraph, threshold: f64) -> Vec<usize> {
    let verts: Vec<usize> = (0..g.n()).collect();
    let edges: Vec<(Edge, f64)> = g.edges().collect();
    let mut labels = vec![usize::MAX; g.n()];
    let mut next = 0;
    split_rec(&verts, &edges, threshold, &mut labels, &mut next);
    labels
}

fn split_rec(
    verts: &[usize],
    edges: &[(Edge, f64)],
    threshold: f64,
    labels: &mut [usize],
    next: &mut usize,
) {
    if verts.len() == 1 {
        labels[verts[0]] = *next;
        *next += 1;
        return;
    }
    // Connectivity split (a zero-weight cut).
    let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
    {
        let mut adj: BTreeMap<usize, Vec<usize>> = verts.iter().map(|&v| (v, vec![])).collect();
        for &((u, v), _) in edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        let mut c = 0;
        for &s in verts {
            if comp.contains_key(&s) {
                continue;
            }
            let mut stack = vec![s];
            comp.insert(s, c);
            while let Some(u) = stack.pop() {
                for &v in &adj[&u] {
                    if !comp.contains_key(&v) {
                        comp.insert(v, c);
                        stack.push(v);
                    }
                }
            }
            c += 1;
        }
        if c > 1 {
            for cc in 0..c {
                let vs: Vec<usize> = verts.iter().cloned().filter(|v| comp[v] == cc).collect();
                let es: Vec<(Edge, f64)> =
                    edges.iter().cloned().filter(|((u, _), _)| comp[u] == cc).collect();
                split_rec(&vs, &es, threshold, labels, next);
            }
            return;
        }
    }
    let (cut, side) = mincut::global_min_cut(verts, edges);
    if cut > threshold {
        for &v in verts {
            labels[v] = *next;
        }
        *next += 1;
        return;
    }
    let side_a: Vec<usize> = verts.iter().cloned().filter(|v| side.contains(v)).collect();
    let side_b: Vec<usize> = verts.iter().cloned().filter(|v| !side.contains(v)).collect();
    let ea: Vec<(Edge, f64)> = edges
        .iter()
        .cloned()
        .filter(|((u, v), _)| side.contains(u) && side.contains(v))
        .collect();
    let eb: Vec<(Edge, f64)> = edges
        .iter()
        .cloned()
        .filter(|((u, v), _)| !side.contains(u) && !side.contains(v))
        .collect();
    split_rec(&side_a, &ea, threshold, labels, next);
    split_rec(&side_b, &eb, threshold, labels, next);
}

/// Reference cut sparsifier with direct access to the graph. Weights are
/// expected in `[1, U]`; the overall shape is a `(1+eps)`-cut sparsifier
/// with `O(n eps^-2 log n)` edges.
pub fn cut_sparsify_reference(
    g: &WeightedGraph,
    eps: f64,
    seed: SketchSeed,
    constants: &CutConstants,
) -> WeightedGraph {
    let n = g.n();
    let ln2 = log2n(n);
    let mut sparsifier = WeightedGraph::new(n);
    if g.m() == 0 {
        return sparsifier;
    }
    let lmax = level_count(n, g.max_weight());
    // Supervertex label per vertex; contractions only merge labels.
    let mut label: Vec<usize> = (0..n).collect();

    for level in (0..=lmax).rev() {
        let p1_scale = constants.beta * (2.0f64).powi(-(level as i32)) * ln2;
        let p2_scale = constants.alpha / (eps * eps) * (2.0f64).powi(-(level as i32)) * ln2;
        let seed1 = seed.child3(0xC1, level as u64, 0);
        let seed2 = seed.child3(0xC2, level as u64, 0);

        // Surviving (uncontracted) edges of the working graph.
        let live: Vec<(Edge, f64)> =
            g.edges().filter(|&((u, v), _)| label[u] != label[v]).collect();
        if live.is_empty() {
            break;
        }

        // Level subsampling onto supervertices.
        let mut gl = WeightedGraph::new(n);
        for &((u, v), w) in &live {
            let p = (p1_scale * w).min(1.0);
            if seed1.unit_for(slot_index(n, (u, v)) as u64) < p {
                let (a, b) = (label[u], label[v]);
                // Weight (beta w 2^-l log n) / p_e.
                gl.add_edge(a.min(b), a.max(b), (p1_scale * w) / p).unwrap();
            }
        }

        // Pieces of minimum internal cut above gamma log n.
        let comps = strong_components(&gl, constants.gamma * ln2);

        // Admission sampling within pieces, reweighted by 1/p.
        for &((u, v), w) in &live {
            if comps[label[u]] != comps[label[v]] {
                continue;
            }
            let p = (p2_scale * w).min(1.0);
            if seed2.unit_for(slot_index(n, (u, v)) as u64) < p {
                sparsifier.add_edge(u, v, w / p).unwrap();
            }
        }

        // Contract the pieces.
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let c = comps[label[v]];
            let r = *rep.entry(c).or_insert(label[v]);
            label[v] = r;
        }
    }
    sparsifier
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize, w: f64) -> WeightedGraph {
        let mut g = WeightedGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, w).unwrap();
            }
        }
        g
    }

    #[test]
    fn strong_components_split_on_light_bridge() {
        let mut g = WeightedGraph::new(6);
        for (u, v) in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            g.add_edge(u, v, 3.0).unwrap();
        }
        g.add_edge(2, 3, 1.0).unwrap();
        let labels = strong_components(&g, 2.0);
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[0], labels[2]);
        assert_eq!(labels[3], labels[4]);
        assert_ne!(labels[0], labels[3]);
        // Threshold above the triangle connectivity shatters everything.
        let labels = strong_components(&g, 10.0);
        let mut distinct = labels.to_vec();
        distinct.dedup();
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn empty_graph_maps_to_empty() {
        let g = WeightedGraph::new(5);
        let h = cut_sparsify_reference(&g, 0.5, SketchSeed::new(1, 0), &CutConstants::default());
        assert_eq!(h.m(), 0);
    }

    #[test]
    fn k12_cuts_preserved_across_seeds() {
        let g = complete(12, 1.0);
        let eps = 0.5;
        let mut pass = 0;
        let seeds = 50;
        for s in 0..seeds {
            let h =
                cut_sparsify_reference(&g, eps, SketchSeed::new(s, 1), &CutConstants::default());
            if g.all_cuts_within(&h, eps).unwrap() {
                pass += 1;
            }
        }
        assert!(pass >= 48, "pass = {pass}/{seeds}");
    }

    #[test]
    fn tree_cuts_preserved() {
        let mut g = WeightedGraph::new(10);
        for v in 1..10 {
            g.add_edge(v / 2, v, 1.0 + (v % 3) as f64).unwrap();
        }
        for s in 0..20 {
            let h =
                cut_sparsify_reference(&g, 0.5, SketchSeed::new(s, 2), &CutConstants::default());
            assert!(g.all_cuts_within(&h, 0.5).unwrap(), "seed {s}");
        }
    }
}
