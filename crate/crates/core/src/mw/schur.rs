//! Schur complements, partial Cholesky factorization and graph squaring for
//! block Laplacians.

use crate::linalg::{self, Mat, SymMatrix};

use super::graph::{MatrixWeightedGraph, Result, Scaling};

fn block_indices(verts: &[usize], k: usize) -> Vec<usize> {
    let mut idx = Vec::with_capacity(verts.len() * k);
    for &v in verts {
        for i in 0..k {
            idx.push(v * k + i);
        }
    }
    idx
}

/// `SC(L, C) = L_CC - L_CF L_FF⁺ L_FC` over vertex blocks of size `k`,
/// eliminating the complement of `keep`. Returns a `|C|k x |C|k` matrix in
/// the order of `keep` (which must be sorted).
pub fn schur_complement(l: &SymMatrix, keep: &[usize], k: usize) -> Result<SymMatrix> {
    let n = l.dim() / k;
    let elim: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
    if elim.is_empty() {
        let idx = block_indices(keep, k);
        return Ok(l.submatrix(&idx));
    }
    let ci = block_indices(keep, k);
    let fi = block_indices(&elim, k);
    let lcc = l.submatrix(&ci);
    let lff = l.submatrix(&fi);
    let mut lcf = Mat::zeros(ci.len(), fi.len());
    for (a, &i) in ci.iter().enumerate() {
        for (b, &j) in fi.iter().enumerate() {
            lcf.set(a, b, l.get(i, j));
        }
    }
    let lff_pinv = linalg::pinv_default(&lff)?;
    let prod = lcf.mul(&lff_pinv.as_mat()).mul(&lcf.transpose());
    let mut out = lcc.clone();
    for i in 0..ci.len() {
        for j in i..ci.len() {
            // Average the (numerically symmetric) product for exactness.
            let v = 0.5 * (prod.get(i, j) + prod.get(j, i));
            out.set_sym(i, j, lcc.get(i, j) - v);
        }
    }
    Ok(out)
}

/// Schur complement padded back to `nk x nk` with zero blocks on eliminated
/// vertices.
pub fn schur_complement_padded(l: &SymMatrix, keep: &[usize], k: usize) -> Result<SymMatrix> {
    let sc = schur_complement(l, keep, k)?;
    let mut out = SymMatrix::zeros(l.dim());
    let ci = block_indices(keep, k);
    for (a, &i) in ci.iter().enumerate() {
        for (b, &j) in ci.iter().enumerate() {
            if b >= a {
                out.set_sym(i, j, sc.get(a, b));
            }
        }
    }
    Ok(out)
}

/// Partial Cholesky factorization around the vertex bipartition
/// `(F = eliminate, C = keep)`:
/// `L = W diag(L_FF, SC(L, C)) Wᵀ` with unit lower-triangular-ish `W`.
pub struct PartialCholesky {
    /// Vertex order: eliminated vertices first, kept vertices after.
    pub order: Vec<usize>,
    pub k: usize,
    /// `[[I, 0], [L_CF L_FF⁺, I]]` in the permuted order.
    pub lower: Mat,
    pub middle_ff: SymMatrix,
    pub middle_sc: SymMatrix,
}

impl PartialCholesky {
    /// Multiplies the factorization back together, in the original vertex
    /// order.
    pub fn reconstruct(&self) -> SymMatrix {
        let k = self.k;
        let dim = self.order.len() * k;
        let mut middle = Mat::zeros(dim, dim);
        let f_dim = self.middle_ff.dim();
        for i in 0..f_dim {
            for j in 0..f_dim {
                middle.set(i, j, self.middle_ff.get(i, j));
            }
        }
        for i in 0..self.middle_sc.dim() {
            for j in 0..self.middle_sc.dim() {
                middle.set(f_dim + i, f_dim + j, self.middle_sc.get(i, j));
            }
        }
        let prod = self.lower.mul(&middle).mul(&self.lower.transpose());
        // Undo the permutation.
        let mut out = SymMatrix::zeros(dim);
        for (pa, &va) in self.order.iter().enumerate() {
            for (pb, &vb) in self.order.iter().enumerate() {
                for i in 0..k {
                    for j in 0..k {
                        let (ri, rj) = (va * k + i, vb * k + j);
                        if rj >= ri {
                            let v = 0.5
                                * (prod.get(pa * k + i, pb * k + j)
                                    + prod.get(pb * k + j, pa * k + i));
                            out.set_sym(ri, rj, v);
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn partial_cholesky(l: &SymMatrix, eliminate: &[usize], k: usize) -> Result<PartialCholesky> {
    let n = l.dim() / k;
    let keep: Vec<usize> = (0..n).filter(|v| !eliminate.contains(v)).collect();
    let mut order: Vec<usize> = eliminate.to_vec();
    order.extend(&keep);
    let fi = block_indices(eliminate, k);
    let ci = block_indices(&keep, k);
    let lff = l.submatrix(&fi);
    let sc = schur_complement(l, &keep, k)?;
    let mut lower = Mat::identity(l.dim());
    if !fi.is_empty() {
        let mut lcf = Mat::zeros(ci.len(), fi.len());
        for (a, &i) in ci.iter().enumerate() {
            for (b, &j) in fi.iter().enumerate() {
                lcf.set(a, b, l.get(i, j));
            }
        }
        let block = lcf.mul(&linalg::pinv_default(&lff)?.as_mat());
        for a in 0..ci.len() {
            for b in 0..fi.len() {
                lower.set(fi.len() + a, b, block.get(a, b));
            }
        }
    }
    Ok(PartialCholesky { order, k, lower, middle_ff: lff, middle_sc: sc })
}

/// Laplacian of the squared graph `D - A D⁺ A` where `A = D - L` is the
/// block adjacency.
pub fn mw_square(g: &MatrixWeightedGraph, s: &Scaling) -> Result<SymMatrix> {
    let d = g.degree(s);
    let dsym = d.as_sym();
    let l = g.laplacian(s);
    let a = dsym.sub(&l);
    let dpinv = d.pinv()?;
    // A D⁺ A via block application: D⁺ is block diagonal.
    let ad = {
        let mut m = a.as_mat();
        // Right-multiply by D⁺ block-diagonally.
        let dim = g.dim();
        let k = g.k();
        let mut out = Mat::zeros(dim, dim);
        for i in 0..dim {
            for u in 0..g.n() {
                let b = dpinv.block(u);
                for jj in 0..k {
                    let mut acc = 0.0;
                    for t in 0..k {
                        acc += m.get(i, u * k + t) * b.get(t, jj);
                    }
                    out.set(i, u * k + jj, acc);
                }
            }
        }
        m = out.mul(&a.as_mat());
        m
    };
    let mut out = dsym.clone();
    for i in 0..g.dim() {
        for j in i..g.dim() {
            let v = 0.5 * (ad.get(i, j) + ad.get(j, i));
            out.set_sym(i, j, dsym.get(i, j) - v);
        }
    }
    let _ = l;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::linalg::psd_leq;
    use crate::mw::graph::{MatrixWeightedGraph, Scaling};
    use crate::sketch::SketchSeed;

    fn random_mw(n: usize, k: usize, density: f64, seed: u64) -> MatrixWeightedGraph {
        let data = SketchSeed::new(seed, 3);
        let mut g = MatrixWeightedGraph::new(n, k);
        let mut t = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                t += 1;
                if data.unit_for(t) < density {
                    let phi: Vec<f64> = (0..k)
                        .map(|i| data.unit_for(1000 + t * k as u64 + i as u64) * 2.0 - 1.0)
                        .collect();
                    if phi.iter().any(|&x| x.abs() > 1e-3) {
                        g.set_edge(u, v, phi).unwrap();
                    }
                }
            }
        }
        g
    }

    #[test]
    fn path_series_reduction() {
        // Unit path a-b-c, eliminate b: half-weight edge between a and c.
        let sg = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let g = MatrixWeightedGraph::from_scalar(&sg);
        let l = g.laplacian(&Scaling::ones(&g));
        let sc = schur_complement(&l, &[0, 2], 1).unwrap();
        assert!((sc.get(0, 0) - 0.5).abs() < 1e-9);
        assert!((sc.get(0, 1) + 0.5).abs() < 1e-9);
        assert!((sc.get(1, 1) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn keep_all_is_identity_operation() {
        let g = random_mw(4, 2, 0.9, 5);
        let l = g.laplacian(&Scaling::ones(&g));
        let sc = schur_complement(&l, &[0, 1, 2, 3], 2).unwrap();
        assert_eq!(sc, l);
    }

    #[test]
    fn schur_pseudoinverse_identity() {
        // SC(L, C)⁺ equals the projected restriction of L⁺ onto C, with the
        // projector built from null-space restrictions.
        for seed in [1, 2, 3, 4] {
            let k = 1 + (seed as usize % 3);
            let g = random_mw(6, k, 0.8, seed);
            if g.m() < 4 {
                continue;
            }
            let l = g.laplacian(&Scaling::ones(&g));
            let keep: Vec<usize> = vec![0, 2, 3, 5];
            let sc = schur_complement(&l, &keep, k).unwrap();
            let dec = linalg::sym_eigen(&l).unwrap();
            let nulls: Vec<Vec<f64>> = (0..dec.dim())
                .filter(|&i| dec.eigenvalues[i].abs() <= dec.zero_tol)
                .map(|i| {
                    let v = dec.eigenvector(i);
                    let mut r = Vec::with_capacity(keep.len() * k);
                    for &vert in &keep {
                        r.extend_from_slice(&v[vert * k..(vert + 1) * k]);
                    }
                    r
                })
                .collect();
            let pi = linalg::projector_orth(&nulls, keep.len() * k).unwrap();
            let lp = linalg::pinv_default(&l).unwrap();
            let idx = super::block_indices(&keep, k);
            let lpcc = lp.submatrix(&idx);
            let expected = SymMatrix::from_mat(
                &pi.as_mat().mul(&lpcc.as_mat()).mul(&pi.as_mat()),
                1e-9,
            )
            .unwrap();
            let scp = linalg::pinv_default(&sc).unwrap();
            let scale = expected.frobenius().max(1.0);
            for i in 0..expected.dim() {
                for j in 0..expected.dim() {
                    assert!(
                        (scp.get(i, j) - expected.get(i, j)).abs() <= 1e-7 * scale,
                        "seed {seed} mismatch at ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn partial_cholesky_reconstructs() {
        // F empty: middle = L, factor = identity.
        let g = random_mw(5, 2, 0.8, 9);
        let l = g.laplacian(&Scaling::ones(&g));
        let pc = partial_cholesky(&l, &[], 2).unwrap();
        assert_eq!(pc.middle_sc, l);
        let rec = pc.reconstruct();
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                assert!((rec.get(i, j) - l.get(i, j)).abs() < 1e-9);
            }
        }
        // Path with one eliminated vertex: exact 3x3 arithmetic.
        let sg = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let gp = MatrixWeightedGraph::from_scalar(&sg);
        let lp = gp.laplacian(&Scaling::ones(&gp));
        let pc = partial_cholesky(&lp, &[1], 1).unwrap();
        let rec = pc.reconstruct();
        for i in 0..3 {
            for j in 0..3 {
                assert!((rec.get(i, j) - lp.get(i, j)).abs() < 1e-9);
            }
        }
        // Random k = 2 graphs.
        for seed in [11, 12, 13] {
            let g = random_mw(6, 2, 0.7, seed);
            if g.m() < 3 {
                continue;
            }
            let l = g.laplacian(&Scaling::ones(&g));
            let pc = partial_cholesky(&l, &[1, 4], 2).unwrap();
            let rec = pc.reconstruct();
            let scale = l.frobenius().max(1.0);
            for i in 0..l.dim() {
                for j in 0..l.dim() {
                    assert!(
                        (rec.get(i, j) - l.get(i, j)).abs() <= 1e-8 * scale,
                        "seed {seed} at ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn square_graph_cases() {
        // Single edge, any k: the square vanishes on range(D).
        let g = crate::mw::graph::tests::single_edge_k2();
        let ones = Scaling::ones(&g);
        let sq = mw_square(&g, &ones).unwrap();
        assert!(sq.frobenius() < 1e-9);
        // k = 1 triangle: 0.5 L.
        let sg =
            WeightedGraph::from_edges(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let gt = MatrixWeightedGraph::from_scalar(&sg);
        let ones = Scaling::ones(&gt);
        let sq = mw_square(&gt, &ones).unwrap();
        let l = gt.laplacian(&ones);
        for i in 0..3 {
            for j in 0..3 {
                assert!((sq.get(i, j) - 0.5 * l.get(i, j)).abs() < 1e-9);
            }
        }
        // PSD and dominated by 2 L on random instances.
        for seed in [21, 22] {
            let g = random_mw(5, 2, 0.8, seed);
            if g.m() < 3 {
                continue;
            }
            let ones = Scaling::ones(&g);
            let sq = mw_square(&g, &ones).unwrap();
            let l = g.laplacian(&ones);
            let dec = linalg::sym_eigen(&sq).unwrap();
            assert!(dec.min_eigenvalue() >= -1e-9 * dec.max_eigenvalue().max(1.0));
            assert!(psd_leq(&sq, &l.scale(2.0), 1e-9 * l.frobenius().max(1.0)).unwrap());
        }
    }

    #[test]
    fn schur_sum_identity() {
        // Sum over single-vertex eliminations equals L_sq + (n-2) L.
        for (seed, k) in [(31u64, 1usize), (32, 2)] {
            let g = random_mw(5, k, 0.9, seed);
            if g.m() < 6 {
                continue;
            }
            let ones = Scaling::ones(&g);
            let l = g.laplacian(&ones);
            let mut sum = SymMatrix::zeros(g.dim());
            for u in 0..5 {
                let keep: Vec<usize> = (0..5).filter(|&v| v != u).collect();
                sum = sum.add(&schur_complement_padded(&l, &keep, k).unwrap());
            }
            let expect = mw_square(&g, &ones).unwrap().add(&l.scale(3.0));
            let scale = expect.frobenius().max(1.0);
            for i in 0..g.dim() {
                for j in 0..g.dim() {
                    assert!(
                        (sum.get(i, j) - expect.get(i, j)).abs() <= 1e-7 * scale,
                        "k={k} at ({i},{j}): {} vs {}",
                        sum.get(i, j),
                        expect.get(i, j)
                    );
                }
            }
        }
    }
}
