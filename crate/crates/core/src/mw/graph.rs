//! Matrix-weighted graph representation, scalings, and the block degree /
//! Laplacian / normalized Laplacian constructions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{edge, Edge};
use crate::linalg::{self, LinalgError, SymMatrix};

#[derive(Debug, Error)]
pub enum MwError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("decomposition budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, MwError>;

/// `n`-vertex graph whose edge `(u, v)` carries a nonzero vector
/// `phi_uv` in `R^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightedGraph {
    n: usize,
    k: usize,
    edges: BTreeMap<Edge, Vec<f64>>,
}

impl MatrixWeightedGraph {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n >= 1 && k >= 1);
        MatrixWeightedGraph { n, k, edges: BTreeMap::new() }
    }

    pub fn from_scalar(g: &crate::graph::WeightedGraph) -> Self {
        let mut out = MatrixWeightedGraph::new(g.n(), 1);
        for ((u, v), w) in g.edges() {
            out.edges.insert((u, v), vec![w.sqrt()]);
        }
        out
    }

    pub fn set_edge(&mut self, u: usize, v: usize, phi: Vec<f64>) -> Result<()> {
        if u == v {
            return Err(MwError::InvalidInput(format!("self-loop at {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(MwError::InvalidInput("vertex out of range".into()));
        }
        if phi.len() != self.k {
            return Err(MwError::InvalidInput(format!(
                "weight vector has length {}, expected {}",
                phi.len(),
                self.k
            )));
        }
        if phi.iter().all(|&x| x == 0.0) {
            self.edges.remove(&edge(u, v));
        } else {
            self.edges.insert(edge(u, v), phi);
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn dim(&self) -> usize {
        self.n * self.k
    }

    pub fn phi(&self, e: Edge) -> Option<&[f64]> {
        self.edges.get(&e).map(|v| v.as_slice())
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, &[f64])> + '_ {
        self.edges.iter().map(|(&e, p)| (e, p.as_slice()))
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.keys().cloned().collect()
    }

    pub fn incident(&self, u: usize) -> impl Iterator<Item = (Edge, &[f64])> + '_ {
        self.edges().filter(move |((a, b), _)| *a == u || *b == u)
    }

    pub fn max_phi_norm2(&self) -> f64 {
        self.edges.values().map(|p| linalg::dot(p, p)).fold(0.0, f64::max)
    }

    pub fn min_phi_norm2(&self) -> f64 {
        self.edges.values().map(|p| linalg::dot(p, p)).fold(f64::INFINITY, f64::min)
    }

    /// The graph with every `phi` rescaled by `s` and zero-scaled edges
    /// removed.
    pub fn rescaled(&self, s: &Scaling) -> MatrixWeightedGraph {
        let mut out = MatrixWeightedGraph::new(self.n, self.k);
        for (e, phi) in self.edges() {
            let c = s.get(e);
            if c > 0.0 {
                out.edges.insert(e, phi.iter().map(|&x| c * x).collect());
            }
        }
        out
    }

    /// Vertex-induced subgraph on `verts` (sorted, distinct), relabeled by
    /// position.
    pub fn induced(&self, verts: &[usize]) -> MatrixWeightedGraph {
        let mut pos = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut out = MatrixWeightedGraph::new(verts.len().max(1), self.k);
        for (&(u, v), phi) in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&u), pos.get(&v)) {
                out.edges.insert(edge(a, b), phi.clone());
            }
        }
        out
    }

    /// Block incidence vector of length `n k`: `s phi` at the head block,
    /// `-s phi` at the tail block.
    pub fn incidence_block(&self, e: Edge, s: &Scaling) -> Vec<f64> {
        let (u, v) = edge(e.0, e.1);
        let phi = &self.edges[&(u, v)];
        let c = s.get((u, v));
        let mut b = vec![0.0; self.dim()];
        for i in 0..self.k {
            b[u * self.k + i] = c * phi[i];
            b[v * self.k + i] = -c * phi[i];
        }
        b
    }

    /// Block-diagonal degree matrix `D_u = sum s^2 phi phiᵀ`.
    pub fn degree(&self, s: &Scaling) -> BlockDiag {
        let mut blocks = vec![SymMatrix::zeros(self.k); self.n];
        for (&(u, v), phi) in &self.edges {
            let c = s.get((u, v));
            if c == 0.0 {
                continue;
            }
            let scaled: Vec<f64> = phi.iter().map(|&x| c * x).collect();
            blocks[u].add_outer(1.0, &scaled);
            blocks[v].add_outer(1.0, &scaled);
        }
        BlockDiag { k: self.k, blocks }
    }

    /// Laplacian `sum s^2 b bᵀ` as a dense `nk x nk` matrix.
    pub fn laplacian(&self, s: &Scaling) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.dim());
        for (e, _) in self.edges() {
            let c = s.get(e);
            if c == 0.0 {
                continue;
            }
            let b = self.incidence_block(e, s);
            l.add_outer(1.0, &b);
        }
        l
    }

    /// Normalized Laplacian `D^{+/2} L D^{+/2}`.
    pub fn normalized_laplacian(&self, s: &Scaling) -> Result<SymMatrix> {
        let d = self.degree(s);
        let dhalf = d.pinv_sqrt()?;
        let l = self.laplacian(s);
        Ok(dhalf.sandwich(&l))
    }
}

/// Per-edge scale factors in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    values: BTreeMap<Edge, f64>,
}

impl Scaling {
    pub fn ones(g: &MatrixWeightedGraph) -> Self {
        Scaling { values: g.edges().map(|(e, _)| (e, 1.0)).collect() }
    }

    pub fn zeros(g: &MatrixWeightedGraph) -> Self {
        Scaling { values: g.edges().map(|(e, _)| (e, 0.0)).collect() }
    }

    #[inline]
    pub fn get(&self, e: Edge) -> f64 {
        self.values.get(&e).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, e: Edge, v: f64) {
        assert!((0.0..=1.0).contains(&v), "scale out of range: {v}");
        self.values.insert(e, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.values.iter().map(|(&e, &v)| (e, v))
    }

    pub fn support(&self) -> impl Iterator<Item = Edge> + '_ {
        self.values.iter().filter(|(_, &v)| v > 0.0).map(|(&e, _)| e)
    }

    pub fn count_in_open_unit(&self) -> usize {
        self.values.values().filter(|&&v| v > 0.0 && v < 1.0).count()
    }

    pub fn count_zero(&self) -> usize {
        self.values.values().filter(|&&v| v == 0.0).count()
    }
}

/// Block-diagonal symmetric matrix with `n` blocks of size `k`.
#[derive(Debug, Clone)]
pub struct BlockDiag {
    pub k: usize,
    pub blocks: Vec<SymMatrix>,
}

impl BlockDiag {
    pub fn dim(&self) -> usize {
        self.k * self.blocks.len()
    }

    pub fn block(&self, u: usize) -> &SymMatrix {
        &self.blocks[u]
    }

    pub fn rank(&self) -> Result<usize> {
        let mut r = 0;
        for b in &self.blocks {
            r += linalg::sym_eigen(b)?.rank();
        }
        Ok(r)
    }

    pub fn as_sym(&self) -> SymMatrix {
        let n = self.blocks.len();
        let mut m = SymMatrix::zeros(self.dim());
        for (u, b) in self.blocks.iter().enumerate() {
            for i in 0..self.k {
                for j in i..self.k {
                    m.set_sym(u * self.k + i, u * self.k + j, b.get(i, j));
                }
            }
        }
        let _ = n;
        m
    }

    fn map_blocks(&self, f: impl Fn(f64) -> f64) -> Result<BlockDiag> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let dec = linalg::sym_eigen(b)?;
            blocks.push(dec.apply_spectral(dec.zero_tol, &f));
        }
        Ok(BlockDiag { k: self.k, blocks })
    }

    pub fn pinv(&self) -> Result<BlockDiag> {
        self.map_blocks(|l| 1.0 / l)
    }

    /// `D^{+/2}`: pseudoinverse square root.
    pub fn pinv_sqrt(&self) -> Result<BlockDiag> {
        self.map_blocks(|l| 1.0 / l.max(0.0).sqrt())
    }

    /// `D^{1/2}`.
    pub fn sqrt(&self) -> Result<BlockDiag> {
        self.map_blocks(|l| l.max(0.0).sqrt())
    }

    /// Projector onto the range, block by block.
    pub fn range_projector(&self) -> Result<BlockDiag> {
        self.map_blocks(|_| 1.0)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        let mut y = vec![0.0; x.len()];
        for (u, b) in self.blocks.iter().enumerate() {
            let seg = &x[u * self.k..(u + 1) * self.k];
            let out = b.matvec(seg);
            y[u * self.k..(u + 1) * self.k].copy_from_slice(&out);
        }
        y
    }

    /// `B M B` for this block-diagonal `B`.
    pub fn sandwich(&self, m: &SymMatrix) -> SymMatrix {
        let dim = self.dim();
        assert_eq!(m.dim(), dim);
        // Compute M B first (columns transformed), then B (M B).
        let mut mb = crate::linalg::Mat::zeros(dim, dim);
        for i in 0..dim {
            let row = m.row(i);
            for (u, b) in self.blocks.iter().enumerate() {
                for jj in 0..self.k {
                    let j = u * self.k + jj;
                    let mut acc = 0.0;
                    for t in 0..self.k {
                        acc += row[u * self.k + t] * b.get(t, jj);
                    }
                    mb.set(i, j, acc);
                }
            }
        }
        let mut out = SymMatrix::zeros(dim);
        for (u, b) in self.blocks.iter().enumerate() {
            for ii in 0..self.k {
                let i = u * self.k + ii;
                for j in 0..dim {
                    let mut acc = 0.0;
                    for t in 0..self.k {
                        acc += b.get(ii, t) * mb.get(u * self.k + t, j);
                    }
                    if j >= i {
                        out.set_sym(i, j, acc);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::linalg::norm2;

    pub(crate) fn single_edge_k2() -> MatrixWeightedGraph {
        let mut g = MatrixWeightedGraph::new(2, 2);
        g.set_edge(0, 1, vec![1.0, 0.0]).unwrap();
        g
    }

    #[test]
    fn k1_laplacian_matches_scalar() {
        let sg = WeightedGraph::from_edges(4, &[(0, 1, 2.0), (1, 2, 0.5), (2, 3, 4.0), (0, 3, 1.0)])
            .unwrap();
        let mg = MatrixWeightedGraph::from_scalar(&sg);
        let ones = Scaling::ones(&mg);
        let lm = mg.laplacian(&ones);
        let ls = sg.laplacian();
        for i in 0..4 {
            for j in 0..4 {
                assert!((lm.get(i, j) - ls.get(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn incidence_and_rebuild() {
        let mut g = MatrixWeightedGraph::new(3, 2);
        g.set_edge(0, 1, vec![1.0, 2.0]).unwrap();
        g.set_edge(1, 2, vec![-1.0, 0.5]).unwrap();
        let s = Scaling::ones(&g);
        let b = g.incidence_block((0, 1), &s);
        assert_eq!(b, vec![1.0, 2.0, -1.0, -2.0, 0.0, 0.0]);
        // L = sum b bᵀ.
        let l = g.laplacian(&s);
        let mut rebuilt = SymMatrix::zeros(6);
        for (e, _) in g.edges() {
            rebuilt.add_outer(1.0, &g.incidence_block(e, &s));
        }
        for i in 0..6 {
            for j in 0..6 {
                assert!((l.get(i, j) - rebuilt.get(i, j)).abs() < 1e-12);
            }
        }
        // Constant-per-block vectors with equal value kill the Laplacian.
        let mut x = vec![0.0; 6];
        for u in 0..3 {
            x[u * 2] = 0.7;
            x[u * 2 + 1] = -0.3;
        }
        assert!(norm2(&l.matvec(&x)) < 1e-12);
    }

    #[test]
    fn quadratic_form_identity() {
        let mut g = MatrixWeightedGraph::new(4, 2);
        let data = crate::sketch::SketchSeed::new(8, 1);
        let mut t = 0u64;
        for u in 0..4 {
            for v in u + 1..4 {
                let phi = vec![data.unit_for(t) - 0.5, data.unit_for(t + 1) - 0.5];
                t += 2;
                g.set_edge(u, v, phi).unwrap();
            }
        }
        let mut s = Scaling::ones(&g);
        s.set((0, 1), 0.5);
        let l = g.laplacian(&s);
        let x: Vec<f64> = (0..8).map(|i| data.unit_for(100 + i as u64) - 0.5).collect();
        let direct: f64 = g
            .edges()
            .map(|((u, v), phi)| {
                let c = s.get((u, v));
                let mut ip = 0.0;
                for i in 0..2 {
                    ip += (x[u * 2 + i] - x[v * 2 + i]) * c * phi[i];
                }
                ip * ip
            })
            .sum();
        assert!((l.quadform(&x) - direct).abs() < 1e-9 * direct.max(1.0));
    }

    #[test]
    fn normalized_single_edge_k2_spectrum() {
        // Single edge with phi = (1, 0): N has eigenvalues {0, 0, 0, 2}
        // (two directions never touched by the degree).
        let g = single_edge_k2();
        let n = g.normalized_laplacian(&Scaling::ones(&g)).unwrap();
        let dec = linalg::sym_eigen(&n).unwrap();
        let want = [0.0, 0.0, 0.0, 2.0];
        for (a, b) in dec.eigenvalues.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-9, "{:?}", dec.eigenvalues);
        }
    }

    #[test]
    fn normalized_eigenvalues_in_zero_two() {
        let data = crate::sketch::SketchSeed::new(77, 0);
        let mut t = 0;
        for trial in 0..10 {
            let k = 1 + (trial % 3);
            let mut g = MatrixWeightedGraph::new(5, k);
            for u in 0..5 {
                for v in u + 1..5 {
                    if data.unit_for(10_000 + t) < 0.7 {
                        let phi: Vec<f64> =
                            (0..k).map(|i| data.unit_for(t + i as u64) * 2.0 - 1.0).collect();
                        t += k as u64;
                        if phi.iter().any(|&x| x != 0.0) {
                            g.set_edge(u, v, phi).unwrap();
                        }
                    }
                    t += 1;
                }
            }
            if g.m() == 0 {
                continue;
            }
            let n = g.normalized_laplacian(&Scaling::ones(&g)).unwrap();
            let dec = linalg::sym_eigen(&n).unwrap();
            assert!(dec.min_eigenvalue() >= -1e-9);
            assert!(dec.max_eigenvalue() <= 2.0 + 1e-9);
        }
    }
}
