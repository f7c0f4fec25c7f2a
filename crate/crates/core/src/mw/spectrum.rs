//! Nontrivial spectrum of the normalized Laplacian, per-edge leverage and
//! small-eigenspace projection values, spectral embeddings, the rescaling
//! potential, and the expander report.
//!
//! An eigenpair of `N = D^{+/2} L D^{+/2}` is nontrivial when its eigenvector
//! lies in the range of `D` blockwise (equivalently, each block is
//! orthogonal to the kernel of the corresponding degree block). Positive
//! eigenpairs are automatically nontrivial; the nontrivial zero eigenspace
//! is recovered by projecting the kernel of `N` onto the range of `D`.

use crate::graph::{edge, Edge};
use crate::linalg::{self, dot, Mat, SymMatrix};

use super::graph::{BlockDiag, MatrixWeightedGraph, Result, Scaling};

/// Nontrivial eigenstructure of the normalized Laplacian of a rescaled
/// graph.
pub struct NontrivialSpectrum {
    pub k: usize,
    /// Ascending positive nontrivial eigenvalues with eigenvectors.
    pub positives: Vec<(f64, Vec<f64>)>,
    /// Orthonormal basis of the nontrivial zero eigenspace.
    pub zeros: Vec<Vec<f64>>,
    /// rank of the rescaled degree matrix.
    pub rank_d: usize,
    /// `D^{+/2}` of the rescaled graph, for projecting incidence vectors.
    pub dhalf_pinv: BlockDiag,
    pub zero_tol: f64,
}

impl NontrivialSpectrum {
    /// Number of nontrivial zero eigenvalues.
    pub fn zero_count(&self) -> usize {
        self.zeros.len()
    }

    pub fn positives_in(&self, lo: f64, hi: f64) -> impl Iterator<Item = &(f64, Vec<f64>)> + '_ {
        self.positives.iter().filter(move |(l, _)| *l > lo && *l <= hi)
    }
}

pub fn nontrivial_spectrum(g: &MatrixWeightedGraph, s: &Scaling) -> Result<NontrivialSpectrum> {
    let d = g.degree(s);
    let rank_d = d.rank()?;
    let dhalf_pinv = d.pinv_sqrt()?;
    let n = dhalf_pinv.sandwich(&g.laplacian(s));
    let dec = linalg::sym_eigen(&n)?;
    let mut positives = Vec::new();
    let mut kernel: Vec<Vec<f64>> = Vec::new();
    for i in 0..dec.dim() {
        let l = dec.eigenvalues[i];
        if l > dec.zero_tol {
            positives.push((l, dec.eigenvector(i).to_vec()));
        } else {
            kernel.push(dec.eigenvector(i).to_vec());
        }
    }
    // Nontrivial zeros: kernel of N intersected with range(D), found by
    // projecting the kernel basis blockwise onto range(D) and
    // re-orthonormalizing.
    let proj = d.range_projector()?;
    let projected: Vec<Vec<f64>> = kernel.iter().map(|v| proj.apply(v)).collect();
    let zeros = linalg::orthonormal_basis(&projected, g.dim())?;
    debug_assert!(positives.len() + zeros.len() <= rank_d + 1);
    Ok(NontrivialSpectrum {
        k: g.k(),
        positives,
        zeros,
        rank_d,
        dhalf_pinv,
        zero_tol: dec.zero_tol,
    })
}

/// Two-sided leverage of an edge: `(phi^s)ᵀ (D_u^s)⁺ phi^s` summed over both
/// endpoints. Values lie in `[0, 2]` and sum to `rank(D^s)` over the edges.
pub fn leverage_r(g: &MatrixWeightedGraph, s: &Scaling, e: Edge) -> Result<f64> {
    let e = edge(e.0, e.1);
    let phi = match g.phi(e) {
        Some(p) => p,
        None => return Ok(0.0),
    };
    let c = s.get(e);
    if c == 0.0 {
        return Ok(0.0);
    }
    let scaled: Vec<f64> = phi.iter().map(|&x| c * x).collect();
    let d = g.degree(s);
    let mut total = 0.0;
    for vertex in [e.0, e.1] {
        let block = d.block(vertex);
        let p = linalg::pinv_default(block)?;
        total += p.quadform(&scaled);
    }
    Ok(total)
}

/// One-sided leverage `(phi^s)ᵀ (D_u^s)⁺ phi^s` against vertex `u`, with the
/// degree blocks supplied by the caller (they are shared across queries).
pub fn leverage_one_sided(
    g: &MatrixWeightedGraph,
    s: &Scaling,
    degree_pinv: &BlockDiag,
    u: usize,
    e: Edge,
) -> f64 {
    let e = edge(e.0, e.1);
    let phi = g.phi(e).expect("edge present");
    let c = s.get(e);
    let scaled: Vec<f64> = phi.iter().map(|&x| c * x).collect();
    degree_pinv.block(u).quadform(&scaled)
}

/// Per-edge projection of the normalized incidence vector onto the inverse
/// small eigenspace: `(D^{+/2} b)ᵀ (sum_{0 < lambda <= zeta} (1/lambda) f fᵀ)
/// (D^{+/2} b)` for every edge in the support of `s`. The values sum to the
/// number of eigenvalues in `(0, zeta]`.
pub fn expander_h_values(
    g: &MatrixWeightedGraph,
    s: &Scaling,
    zeta: f64,
    spectrum: &NontrivialSpectrum,
) -> Vec<(Edge, f64)> {
    let smalls: Vec<&(f64, Vec<f64>)> = spectrum.positives_in(0.0, zeta).collect();
    let mut out = Vec::new();
    for (e, _) in g.edges() {
        if s.get(e) == 0.0 {
            continue;
        }
        let b = g.incidence_block(e, s);
        let y = spectrum.dhalf_pinv.apply(&b);
        let mut acc = 0.0;
        for (l, f) in &smalls {
            let c = dot(f, &y);
            acc += c * c / l;
        }
        out.push((e, acc));
    }
    out
}

/// Almost-regular expander report: exact maxima of the leverage and
/// small-eigenspace values against the `gamma k / n` and `psi k^2 / n^2`
/// thresholds.
#[derive(Debug, Clone)]
pub struct ExpanderReport {
    pub gamma: f64,
    pub zeta: f64,
    pub psi: f64,
    pub max_r: f64,
    pub max_h: f64,
    pub small_eig_count: usize,
    pub pass: bool,
    /// An edge attaining a violated bound, if any.
    pub violator: Option<Edge>,
}

pub fn expander_report(
    g: &MatrixWeightedGraph,
    s: &Scaling,
    gamma: f64,
    zeta: f64,
    psi: f64,
) -> Result<ExpanderReport> {
    let n = g.n() as f64;
    let k = g.k() as f64;
    let spectrum = nontrivial_spectrum(g, s)?;
    let small_eig_count = spectrum.positives_in(0.0, zeta).count();
    let d = g.degree(s);
    let dpinv = d.pinv()?;
    let mut max_r = 0.0f64;
    let mut max_h = 0.0f64;
    let mut violator = None;
    for (e, _) in g.edges() {
        if s.get(e) == 0.0 {
            continue;
        }
        let r = super::spectrum::leverage_one_sided(g, s, &dpinv, e.0, e)
            + super::spectrum::leverage_one_sided(g, s, &dpinv, e.1, e);
        if r > max_r {
            max_r = r;
        }
        if r > gamma * k / n && violator.is_none() {
            violator = Some(e);
        }
    }
    for (e, h) in expander_h_values(g, s, zeta, &spectrum) {
        if h > max_h {
            max_h = h;
        }
        if h > psi * k * k / (n * n) && violator.is_none() {
            violator = Some(e);
        }
    }
    let pass = max_r <= gamma * k / n + 1e-12 && max_h <= psi * k * k / (n * n) + 1e-12;
    Ok(ExpanderReport { gamma, zeta, psi, max_r, max_h, small_eig_count, pass, violator })
}

/// Spectral embedding induced by the nontrivial eigenvectors with
/// eigenvalue at most `zeta_cut`: per vertex, the `l x k` block of stacked
/// eigenvector restrictions.
pub struct EmbeddingNorms {
    /// `F(u)` per vertex.
    pub blocks: Vec<Mat>,
    /// `max_u lambda_max(F(u)ᵀ F(u))`.
    pub max_gram_norm: f64,
    /// Number of embedded eigenvectors.
    pub count: usize,
}

pub fn spectral_embedding(
    g: &MatrixWeightedGraph,
    s: &Scaling,
    zeta_cut: f64,
) -> Result<EmbeddingNorms> {
    let spectrum = nontrivial_spectrum(g, s)?;
    let mut vectors: Vec<&Vec<f64>> = spectrum.zeros.iter().collect();
    for (l, f) in &spectrum.positives {
        if *l <= zeta_cut {
            vectors.push(f);
        }
    }
    let k = g.k();
    let count = vectors.len();
    let mut blocks = Vec::with_capacity(g.n());
    let mut max_gram = 0.0f64;
    for u in 0..g.n() {
        let mut fu = Mat::zeros(count.max(1), k);
        for (row, f) in vectors.iter().enumerate() {
            for i in 0..k {
                fu.set(row, i, f[u * k + i]);
            }
        }
        // lambda_max of F(u)ᵀ F(u).
        let mut gram = SymMatrix::zeros(k);
        for a in 0..k {
            for b in a..k {
                let mut acc = 0.0;
                for row in 0..count {
                    acc += fu.get(row, a) * fu.get(row, b);
                }
                gram.set_sym(a, b, acc);
            }
        }
        let top = linalg::sym_eigen(&gram)?.max_eigenvalue().max(0.0);
        if top > max_gram {
            max_gram = top;
        }
        blocks.push(fu);
    }
    Ok(EmbeddingNorms { blocks, max_gram_norm: max_gram, count })
}

/// Log of the rescaling potential: the product of the `ell0` smallest
/// nonzero nontrivial eigenvalues, each capped at `zeta` (missing
/// eigenvalues count as `zeta`).
pub fn upsilon_log(spectrum: &NontrivialSpectrum, zeta: f64, ell0: usize) -> f64 {
    if ell0 == 0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..ell0 {
        let v = spectrum.positives.get(i).map(|(l, _)| l.min(zeta)).unwrap_or(zeta);
        acc += v.ln();
    }
    acc
}
