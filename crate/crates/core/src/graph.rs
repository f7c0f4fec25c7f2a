//! Scalar-weighted undirected graphs: incidence vectors, Laplacians,
//! effective resistance, leverage scores, edge strengths, graph squaring,
//! electrical potentials, minimum-norm flows and leverage-score sampling.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{self, dot, norm2, LinalgError, SymMatrix};
use crate::mincut;
use crate::sketch::seed::SketchSeed;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cut enumeration limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("demand is not in the span of the given vectors")]
    Infeasible,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Canonical unordered pair with `u < v` (0-indexed).
pub type Edge = (usize, usize);

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Index of the edge slot `(u, v)`, `u < v`, in the canonical enumeration of
/// all `n(n-1)/2` pairs: slots of head `0` first, then head `1`, and so on.
pub fn slot_index(n: usize, e: Edge) -> usize {
    let (u, v) = e;
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`slot_index`].
pub fn slot_pair(n: usize, mut idx: usize) -> Edge {
    for u in 0..n {
        let cnt = n - u - 1;
        if idx < cnt {
            return (u, u + 1 + idx);
        }
        idx -= cnt;
    }
    panic!("slot index out of range");
}

pub fn slot_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Scalar-weighted undirected graph. Weights are strictly positive; a zero
/// weight means the edge is absent. The orientation convention is `u < v`
/// with `u` the head.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<Edge, f64>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one vertex");
        WeightedGraph { n, edges: BTreeMap::new() }
    }

    pub fn from_edges(n: usize, list: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = WeightedGraph::new(n);
        for &(u, v, w) in list {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Sets the weight of edge `(u, v)` to `w` (adding weights of repeated
    /// mentions). Zero or negative resulting weight removes the edge.
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if u == v {
            return Err(GraphError::InvalidInput(format!("self-loop at {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(GraphError::InvalidInput(format!(
                "vertex out of range: ({u},{v}) with n = {}",
                self.n
            )));
        }
        if !w.is_finite() {
            return Err(GraphError::InvalidInput("non-finite weight".into()));
        }
        let key = edge(u, v);
        let cur = self.edges.get(&key).copied().unwrap_or(0.0) + w;
        if cur > 0.0 {
            self.edges.insert(key, cur);
        } else {
            self.edges.remove(&key);
        }
        Ok(())
    }

    pub fn set_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        let key = edge(u, v);
        self.edges.remove(&key);
        if w != 0.0 {
            self.add_edge(u, v, w)?;
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.edges.get(&edge(u, v)).copied().unwrap_or(0.0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.edges.iter().map(|(&e, &w)| (e, w))
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.values().cloned().fold(0.0, f64::max)
    }

    pub fn min_weight(&self) -> f64 {
        self.edges.values().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    pub fn degree(&self, u: usize) -> f64 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == u || b == u)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Signed incidence vector of an edge slot: +1 at the head (smaller
    /// endpoint), -1 at the tail.
    pub fn incidence_vector(&self, e: Edge) -> Vec<f64> {
        let (u, v) = edge(e.0, e.1);
        let mut b = vec![0.0; self.n];
        b[u] = 1.0;
        b[v] = -1.0;
        b
    }

    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.n);
        for (&(u, v), &w) in &self.edges {
            l.add_sym(u, u, w);
            l.add_sym(v, v, w);
            l.add_sym(u, v, -w);
        }
        l
    }

    /// Laplacian of the graph with every edge weight squared.
    pub fn squared_weight_laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.n);
        for (&(u, v), &w) in &self.edges {
            let w2 = w * w;
            l.add_sym(u, u, w2);
            l.add_sym(v, v, w2);
            l.add_sym(u, v, -w2);
        }
        l
    }

    /// The graph with every edge weight squared.
    pub fn squared_weights(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n);
        for (&(u, v), &w) in &self.edges {
            g.edges.insert((u, v), w * w);
        }
        g
    }

    /// Vertex-induced subgraph; vertices are relabeled by the position in
    /// `verts` (which must be sorted and distinct).
    pub fn induced(&self, verts: &[usize]) -> WeightedGraph {
        let mut pos = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut g = WeightedGraph::new(verts.len().max(1));
        for (&(u, v), &w) in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&u), pos.get(&v)) {
                g.edges.insert(edge(a, b), w);
            }
        }
        g
    }

    pub fn connected_components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(u, v) in self.edges.keys() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut c = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = c;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = c;
                        stack.push(v);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        let comp = self.connected_components();
        comp.iter().all(|&c| c == 0)
    }

    /// Electrical potentials `x = L⁺ b_{s,t}`; `None` when `s` and `t` lie in
    /// different components.
    pub fn electrical_potentials(&self, s: usize, t: usize) -> Option<Vec<f64>> {
        assert!(s < self.n && t < self.n && s != t);
        let comp = self.connected_components();
        if comp[s] != comp[t] {
            return None;
        }
        let verts: Vec<usize> = (0..self.n).filter(|&v| comp[v] == comp[s]).collect();
        let sub = self.induced(&verts);
        let nl = verts.len();
        let pos = |v: usize| verts.binary_search(&v).unwrap();
        let (ls, lt) = (pos(s), pos(t));
        // Ground the last vertex of the component and solve the SPD system.
        let l = sub.laplacian();
        let keep: Vec<usize> = (0..nl - 1).collect();
        let lg = l.submatrix(&keep);
        let mut b = vec![0.0; nl - 1];
        if ls < nl - 1 {
            b[ls] += 1.0;
        }
        if lt < nl - 1 {
            b[lt] -= 1.0;
        }
        let xg = linalg::solve_spd(&lg, &b).ok()?;
        let mut xc = vec![0.0; nl];
        xc[..nl - 1].copy_from_slice(&xg);
        // Shift to the mean-zero representative, which equals L⁺ b.
        let mean = xc.iter().sum::<f64>() / nl as f64;
        let mut x = vec![0.0; self.n];
        for (i, &v) in verts.iter().enumerate() {
            x[v] = xc[i] - mean;
        }
        Some(x)
    }

    /// Effective resistance `b_{s,t}ᵀ L⁺ b_{s,t}`; `f64::INFINITY` across
    /// components.
    pub fn effective_resistance(&self, s: usize, t: usize) -> f64 {
        match self.electrical_potentials(s, t) {
            Some(x) => x[s] - x[t],
            None => f64::INFINITY,
        }
    }

    /// Leverage score `tau_e = w_e b_eᵀ L⁺ b_e` of a present edge.
    pub fn leverage_score(&self, e: Edge) -> f64 {
        let w = self.weight(e.0, e.1);
        if w == 0.0 {
            return 0.0;
        }
        w * self.effective_resistance(e.0, e.1)
    }

    /// All leverage scores from a single pseudoinverse (test oracle use).
    pub fn leverage_scores(&self) -> Result<BTreeMap<Edge, f64>> {
        let p = linalg::pinv_default(&self.laplacian())?;
        let mut out = BTreeMap::new();
        for (&(u, v), &w) in &self.edges {
            let r = p.get(u, u) + p.get(v, v) - 2.0 * p.get(u, v);
            out.insert((u, v), w * r);
        }
        Ok(out)
    }

    /// Laplacian of the squared graph `D - A D⁺ A`. Returned as a matrix:
    /// after cancellation the object is used only through quadratic forms.
    pub fn square_graph(&self) -> SymMatrix {
        let n = self.n;
        let mut deg = vec![0.0; n];
        let mut a = SymMatrix::zeros(n);
        for (&(u, v), &w) in &self.edges {
            deg[u] += w;
            deg[v] += w;
            a.add_sym(u, v, w);
        }
        let mut out = SymMatrix::from_diag(&deg);
        // out -= A D⁺ A
        for k in 0..n {
            if deg[k] == 0.0 {
                continue;
            }
            let inv = 1.0 / deg[k];
            let row = a.row(k).to_vec();
            for i in 0..n {
                if row[i] == 0.0 {
                    continue;
                }
                for j in i..n {
                    let v = row[i] * inv * row[j];
                    if v != 0.0 {
                        out.add_sym(i, j, -v);
                    }
                }
            }
        }
        out
    }

    /// Weight of the cut `(S, V - S)` where `in_s[v]` marks membership.
    pub fn cut_weight(&self, in_s: &[bool]) -> f64 {
        assert_eq!(in_s.len(), self.n);
        self.edges
            .iter()
            .filter(|(&(u, v), _)| in_s[u] != in_s[v])
            .map(|(_, &w)| w)
            .sum()
    }

    /// Exhaustive verification that every cut of `self` is preserved by `h`
    /// within `1 ± eps`. Only for `n <= 20`.
    pub fn all_cuts_within(&self, h: &WeightedGraph, eps: f64) -> Result<bool> {
        const LIMIT: usize = 20;
        if self.n > LIMIT {
            return Err(GraphError::TooLarge { n: self.n, limit: LIMIT });
        }
        if self.n != h.n {
            return Err(GraphError::InvalidInput("vertex count mismatch".into()));
        }
        let n = self.n;
        let mut in_s = vec![false; n];
        // Fix vertex 0 out of S: each cut enumerated once.
        for mask in 1u64..(1u64 << (n - 1)) {
            for v in 1..n {
                in_s[v] = (mask >> (v - 1)) & 1 == 1;
            }
            let wg = self.cut_weight(&in_s);
            let wh = h.cut_weight(&in_s);
            if wh < (1.0 - eps) * wg - 1e-12 || wh > (1.0 + eps) * wg + 1e-12 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Keeps each edge independently with the given probability, reweighting
    /// kept edges by `w_e / p_e`.
    pub fn leverage_sample_sparsify(
        &self,
        probs: &BTreeMap<Edge, f64>,
        seed: SketchSeed,
    ) -> Result<WeightedGraph> {
        let mut h = WeightedGraph::new(self.n);
        for (&(u, v), &w) in &self.edges {
            let p = probs.get(&(u, v)).copied().unwrap_or(1.0);
            if !(0.0..=1.0).contains(&p) || p == 0.0 {
                return Err(GraphError::InvalidInput(format!(
                    "invalid probability {p} for edge ({u},{v})"
                )));
            }
            let r = seed.unit_for(slot_index(self.n, (u, v)) as u64);
            if r < p {
                h.edges.insert((u, v), w / p);
            }
        }
        Ok(h)
    }

    /// Exact edge strengths by recursive global-min-cut refinement.
    pub fn edge_strengths(&self) -> StrengthTable {
        let mut table = BTreeMap::new();
        let verts: Vec<usize> = (0..self.n).collect();
        let live: Vec<(Edge, f64)> = self.edges().collect();
        strength_rec(&verts, &live, 0.0, &mut table);
        StrengthTable { strengths: table }
    }
}

/// Per-edge strengths `k_e`.
#[derive(Debug, Clone)]
pub struct StrengthTable {
    strengths: BTreeMap<Edge, f64>,
}

impl StrengthTable {
    pub fn get(&self, e: Edge) -> f64 {
        self.strengths.get(&e).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.strengths.iter().map(|(&e, &k)| (e, k))
    }

    /// `sum_e w_e / k_e`, which is at most `n - 1`.
    pub fn inverse_strength_sum(&self, g: &WeightedGraph) -> f64 {
        g.edges().map(|(e, w)| w / self.get(e)).sum()
    }
}

fn strength_rec(
    verts: &[usize],
    edges: &[(Edge, f64)],
    floor: f64,
    out: &mut BTreeMap<Edge, f64>,
) {
    if verts.len() <= 1 || edges.is_empty() {
        return;
    }
    // Split by connectivity first (a zero cut).
    let comp = components_of(verts, edges);
    if comp.values().max().copied().unwrap_or(0) > 0 {
        let ncomp = comp.values().max().unwrap() + 1;
        for c in 0..ncomp {
            let vs: Vec<usize> = verts.iter().cloned().filter(|v| comp[v] == c).collect();
            let es: Vec<(Edge, f64)> =
                edges.iter().cloned().filter(|((u, _), _)| comp[u] == c).collect();
            strength_rec(&vs, &es, floor, out);
        }
        return;
    }
    let (cut_value, side) = mincut::global_min_cut(verts, edges);
    let level = cut_value.max(floor);
    let mut side_a: Vec<usize> = Vec::new();
    let mut side_b: Vec<usize> = Vec::new();
    for &v in verts {
        if side.contains(&v) {
            side_a.push(v);
        } else {
            side_b.push(v);
        }
    }
    let mut ea = Vec::new();
    let mut eb = Vec::new();
    for &((u, v), w) in edges {
        let (ia, ib) = (side.contains(&u), side.contains(&v));
        match (ia, ib) {
            (true, true) => ea.push(((u, v), w)),
            (false, false) => eb.push(((u, v), w)),
            // Edges across the minimum cut have exactly this strength.
            _ => {
                out.insert((u, v), level);
            }
        }
    }
    strength_rec(&side_a, &ea, level, out);
    strength_rec(&side_b, &eb, level, out);
}

fn components_of(verts: &[usize], edges: &[(Edge, f64)]) -> BTreeMap<usize, usize> {
    let mut parent: BTreeMap<usize, usize> = verts.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            return v;
        }
        let r = find(parent, p);
        parent.insert(v, r);
        r
    }
    for &((u, v), _) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent.insert(ru, rv);
        }
    }
    let mut label = BTreeMap::new();
    let mut next = 0;
    let mut out = BTreeMap::new();
    for &v in verts {
        let r = find(&mut parent, v);
        let c = *label.entry(r).or_insert_with(|| {
            let c = next;
            next += 1;
            c
        });
        out.insert(v, c);
    }
    out
}

/// Least-norm combination: finds `x` minimizing `||x||_2` subject to
/// `B x = demand` where `B`'s columns are the given vectors. Errors with
/// `Infeasible` when the demand is outside their span.
pub fn min_norm_flow(vectors: &[Vec<f64>], demand: &[f64]) -> Result<Vec<f64>> {
    let dim = demand.len();
    for v in vectors {
        if v.len() != dim {
            return Err(GraphError::InvalidInput("vector length mismatch".into()));
        }
    }
    // B Bᵀ = sum of outer products.
    let mut gram = SymMatrix::zeros(dim);
    for v in vectors {
        gram.add_outer(1.0, v);
    }
    let p = linalg::pinv_default(&gram)?;
    let y = p.matvec(demand);
    let x: Vec<f64> = vectors.iter().map(|v| dot(v, &y)).collect();
    // Residual check: B x must reproduce the demand.
    let mut bx = vec![0.0; dim];
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..dim {
            bx[i] += v[i] * x[j];
        }
    }
    let mut resid = 0.0;
    for i in 0..dim {
        resid += (bx[i] - demand[i]).powi(2);
    }
    if resid.sqrt() > 1e-7 * (1.0 + norm2(demand)) {
        return Err(GraphError::Infeasible);
    }
    Ok(x)
}

/// Generalized eigenvalue oracle: checks `x L_h x / x L_g x` stays within
/// `[1/(1+eps), 1+eps]` over the range of `L_g`, including null-space
/// agreement. This is the spectral-sparsifier verification path.
pub fn spectral_within(lg: &SymMatrix, lh: &SymMatrix, eps: f64) -> Result<bool> {
    if lg.dim() != lh.dim() {
        return Err(GraphError::InvalidInput("dimension mismatch".into()));
    }
    let dec = linalg::sym_eigen(lg)?;
    let idx = dec.nonzero_indices();
    let r = idx.len();
    if r == 0 {
        // Zero graph: sparsifier must be (numerically) zero too.
        let hd = linalg::sym_eigen(lh)?;
        return Ok(hd.max_eigenvalue() <= hd.zero_tol);
    }
    // S = Lam^{-1/2} Eᵀ L_h E Lam^{-1/2} on the nonzero eigenspace of L_g.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(r);
    for &i in &idx {
        let l = dec.eigenvalues[i];
        let scale = 1.0 / l.sqrt();
        basis.push(dec.eigenvector(i).iter().map(|&v| v * scale).collect());
    }
    let mut s = SymMatrix::zeros(r);
    let hb: Vec<Vec<f64>> = basis.iter().map(|b| lh.matvec(b)).collect();
    for a in 0..r {
        for b in a..r {
            s.set_sym(a, b, dot(&basis[a], &hb[b]));
        }
    }
    let sd = linalg::sym_eigen(&s)?;
    let lo = 1.0 / (1.0 + eps) - 1e-9;
    let hi = (1.0 + eps) + 1e-9;
    if sd.min_eigenvalue() < lo || sd.max_eigenvalue() > hi {
        return Ok(false);
    }
    // L_h must not act outside range(L_g): every null vector of L_g must be
    // null for L_h as well.
    let trace_h: f64 = (0..lh.dim()).map(|i| lh.get(i, i)).sum();
    for i in 0..dec.dim() {
        if dec.eigenvalues[i].abs() <= dec.zero_tol
            && lh.quadform(dec.eigenvector(i)) > 1e-7 * trace_h.max(1.0)
        {
            return Ok(false);
        }
    }
    Ok(true)
}
