//! Vertex-sampling preservation checks: the matrix-weighted subgraph
//! preservation test and the scalar-expander sampling experiment.

use crate::graph::WeightedGraph;
use crate::linalg::{self, SymMatrix};
use crate::sketch::SketchSeed;

use super::graph::{MatrixWeightedGraph, Result, Scaling};

/// Verifies that the vertex-induced subgraph on `c_verts` (sorted)
/// `(alpha, beta, zeta)`-preserves `g`:
///
/// 1. the null space of `D_CC^{+/2} L_{G[C]} D_CC^{+/2}` (degrees from the
///    whole graph) is exactly the span of the restrictions of the zero
///    eigenvectors of the normalized Laplacian of `g`;
/// 2. the pseudoinverse of that matrix is dominated, on the admissible
///    subspace, by `alpha (n/t)^2` times the restricted inverse small
///    eigenspace plus `beta (n/t) / zeta` times the identity.
pub fn preservation_check(
    g: &MatrixWeightedGraph,
    c_verts: &[usize],
    alpha: f64,
    beta: f64,
    zeta: f64,
) -> Result<bool> {
    let k = g.k();
    let n = g.n() as f64;
    let t = c_verts.len() as f64;
    assert!(!c_verts.is_empty());
    let ones = Scaling::ones(g);
    let nfull = g.normalized_laplacian(&ones)?;
    let dec = linalg::sym_eigen(&nfull)?;

    // Restriction of a full vector to C-blocks.
    let restrict = |v: &[f64]| -> Vec<f64> {
        let mut r = Vec::with_capacity(c_verts.len() * k);
        for &vert in c_verts {
            r.extend_from_slice(&v[vert * k..(vert + 1) * k]);
        }
        r
    };

    let zero_restrictions: Vec<Vec<f64>> = (0..dec.dim())
        .filter(|&i| dec.eigenvalues[i].abs() <= dec.zero_tol)
        .map(|i| restrict(dec.eigenvector(i)))
        .collect();

    // M = D_CC^{+/2} L_{G[C]} D_CC^{+/2}.
    let sub = g.induced(c_verts);
    let l_sub = sub.laplacian(&Scaling::ones(&sub));
    let d_full = g.degree(&ones);
    let d_cc = super::graph::BlockDiag {
        k,
        blocks: c_verts.iter().map(|&v| d_full.block(v).clone()).collect(),
    };
    let m = d_cc.pinv_sqrt()?.sandwich(&l_sub);
    let mdec = linalg::sym_eigen(&m)?;

    // Condition 1a: every restricted zero eigenvector is null for M.
    let mscale = m.frobenius().max(1.0);
    for z in &zero_restrictions {
        let mz = m.matvec(z);
        if linalg::norm2(&mz) > 1e-7 * mscale {
            return Ok(false);
        }
    }
    // Condition 1b: dimensions match.
    let span = linalg::orthonormal_basis(&zero_restrictions, c_verts.len() * k)?;
    let null_dim =
        mdec.eigenvalues.iter().filter(|&&l| l.abs() <= mdec.zero_tol).count();
    if span.len() != null_dim {
        return Ok(false);
    }

    // Condition 2 on the admissible subspace.
    let dim = c_verts.len() * k;
    let proj = linalg::projector_orth(&span, dim)?;
    let m_pinv = linalg::pinv_default(&m)?;
    let lhs = SymMatrix::from_mat(
        &proj.as_mat().mul(&m_pinv.as_mat()).mul(&proj.as_mat()),
        1e-7,
    )?;
    let mut rhs = SymMatrix::identity(dim).scale(beta * (n / t) / zeta);
    for i in 0..dec.dim() {
        let l = dec.eigenvalues[i];
        if l > dec.zero_tol && l <= zeta {
            rhs.add_outer(alpha * (n / t) * (n / t) / l, &restrict(dec.eigenvector(i)));
        }
    }
    let rhs = SymMatrix::from_mat(
        &proj.as_mat().mul(&rhs.as_mat()).mul(&proj.as_mat()),
        1e-7,
    )?;
    let tol = 1e-7 * lhs.frobenius().max(rhs.frobenius()).max(1.0);
    Ok(linalg::psd_leq(&lhs, &rhs, tol)?)
}

/// Configuration for the scalar-expander sampling experiment.
#[derive(Debug, Clone, Copy)]
pub struct OrdinaryCheckConfig {
    /// Pass threshold for the sampled second eigenvalue, as a fraction of
    /// the host graph's expansion (default `1/16`).
    pub zeta_fraction: f64,
}

impl Default for OrdinaryCheckConfig {
    fn default() -> Self {
        OrdinaryCheckConfig { zeta_fraction: 1.0 / 16.0 }
    }
}

fn normalized_second_eigenvalue(g: &WeightedGraph) -> Result<f64> {
    let l = g.laplacian();
    let mut dhalf = vec![0.0; g.n()];
    for v in 0..g.n() {
        let d = l.get(v, v);
        dhalf[v] = if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 };
    }
    let n = SymMatrix::from_fn(g.n(), |i, j| l.get(i, j) * dhalf[i] * dhalf[j]);
    let dec = linalg::sym_eigen(&n).map_err(super::graph::MwError::from)?;
    Ok(if dec.dim() >= 2 { dec.eigenvalues[1] } else { f64::INFINITY })
}

/// Samples uniform vertex subsets of the given size and checks that the
/// induced subgraph keeps both a fraction of the expansion and a
/// proportional minimum degree. Returns the empirical pass frequency.
pub fn ordinary_sampling_check(
    g: &WeightedGraph,
    sample_size: usize,
    trials: usize,
    seed: SketchSeed,
    cfg: OrdinaryCheckConfig,
) -> Result<f64> {
    assert!(sample_size >= 1 && sample_size <= g.n());
    let n = g.n();
    let zeta = normalized_second_eigenvalue(g)?;
    let d_min = (0..n).map(|v| g.degree(v)).fold(f64::INFINITY, f64::min);
    let log2n = (n.max(2) as f64).log2();
    let degree_bound = (1.0 - 1.0 / (2.0 * log2n)) * (sample_size as f64 / n as f64) * d_min;
    let threshold = cfg.zeta_fraction * zeta;

    let mut passes = 0usize;
    for trial in 0..trials {
        // Uniform subset: order vertices by a per-trial hash, keep the
        // first `sample_size`.
        let tseed = seed.child(trial as u64);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| tseed.hash(v as u64));
        let mut verts: Vec<usize> = order[..sample_size].to_vec();
        verts.sort_unstable();
        if sample_size <= 1 {
            passes += 1;
            continue;
        }
        let sub = g.induced(&verts);
        let sub_dmin = (0..sub.n()).map(|v| sub.degree(v)).fold(f64::INFINITY, f64::min);
        if sub_dmin < degree_bound {
            continue;
        }
        if normalized_second_eigenvalue(&sub)? >= threshold {
            passes += 1;
        }
    }
    Ok(passes as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn complete_k1(n: usize) -> MatrixWeightedGraph {
        let mut sg = WeightedGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                sg.add_edge(u, v, 1.0).unwrap();
            }
        }
        MatrixWeightedGraph::from_scalar(&sg)
    }

    #[test]
    fn whole_graph_preserves_itself() {
        let g = complete_k1(6);
        let all: Vec<usize> = (0..6).collect();
        assert!(preservation_check(&g, &all, 1.0, 1.0, 0.5).unwrap());
        // Also at other zeta values.
        assert!(preservation_check(&g, &all, 1.0, 1.0, 0.05).unwrap());
    }

    #[test]
    fn dumbbell_missing_cut_vertex_fails() {
        // Two triangles joined through vertex 2-3 bridge; dropping enough
        // vertices disconnects the sample while the host stays connected,
        // which breaks the null-space condition.
        let mut sg = WeightedGraph::new(6);
        for (u, v) in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            sg.add_edge(u, v, 1.0).unwrap();
        }
        sg.add_edge(2, 3, 1.0).unwrap();
        let g = MatrixWeightedGraph::from_scalar(&sg);
        // C keeps both triangles' far sides but loses the bridge pair.
        let c = vec![0, 1, 4, 5];
        assert!(!preservation_check(&g, &c, 2.0, 64.0, 0.5).unwrap());
    }

    #[test]
    fn random_halves_of_complete_graph_preserve() {
        let g = complete_k1(16);
        let seed = SketchSeed::new(10, 3);
        let mut pass = 0;
        let trials = 30;
        for t in 0..trials {
            let tseed = seed.child(t as u64);
            let mut order: Vec<usize> = (0..16).collect();
            order.sort_by_key(|&v| tseed.hash(v as u64));
            let mut c = order[..8].to_vec();
            c.sort_unstable();
            if preservation_check(&g, &c, 2.0, 64.0, 0.5).unwrap() {
                pass += 1;
            }
        }
        assert!(pass * 10 >= trials * 9, "pass = {pass}/{trials}");
    }

    #[test]
    fn ordinary_sampling_on_complete_graph() {
        let mut g = WeightedGraph::new(16);
        for u in 0..16 {
            for v in u + 1..16 {
                g.add_edge(u, v, 1.0).unwrap();
            }
        }
        // Full sample always passes.
        let f = ordinary_sampling_check(
            &g,
            16,
            20,
            SketchSeed::new(4, 0),
            OrdinaryCheckConfig::default(),
        )
        .unwrap();
        assert_eq!(f, 1.0);
        // Single-vertex samples pass by convention.
        let f = ordinary_sampling_check(
            &g,
            1,
            20,
            SketchSeed::new(4, 1),
            OrdinaryCheckConfig::default(),
        )
        .unwrap();
        assert_eq!(f, 1.0);
        // Half samples overwhelmingly pass.
        let f = ordinary_sampling_check(
            &g,
            8,
            100,
            SketchSeed::new(4, 2),
            OrdinaryCheckConfig::default(),
        )
        .unwrap();
        assert!(f >= 0.95, "frequency {f}");
    }
}
