//! Dense symmetric linear algebra: Jacobi eigendecomposition, pseudoinverse,
//! projectors, PSD ordering and restricted determinants.
//!
//! Everything here is deterministic: the eigensolver uses a fixed cyclic sweep
//! order and normalizes eigenvector signs, so identical inputs produce
//! identical outputs.

use thiserror::Error;

/// Relative tolerance below which an eigenvalue counts as zero.
/// `zero_tol = ZERO_REL_TOL * max(1, lambda_max)`.
pub const ZERO_REL_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not positive semidefinite (lambda_min = {0:.3e})")]
    NotPsd(f64),
    #[error("requested {requested} nonzero eigenvalues but rank is {rank}")]
    InsufficientRank { requested: usize, rank: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense row-major rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += row[j] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for j in 0..other.cols {
                    out_row[j] += a * orow[j];
                }
            }
        }
        out
    }
}

/// Dense symmetric matrix. Symmetry holds exactly: constructors mirror the
/// upper triangle into the lower one.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        SymMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        m
    }

    /// Builds from `f(i, j)` evaluated only for `i <= j`; the lower triangle
    /// mirrors the upper one, so symmetry is exact by construction.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Validates that `mat` is square and symmetric to within `tol`
    /// (absolute, scaled by the largest entry), then mirrors the upper
    /// triangle so the stored matrix is exactly symmetric.
    pub fn from_mat(mat: &Mat, tol: f64) -> Result<Self> {
        if mat.rows != mat.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                mat.rows, mat.cols
            )));
        }
        let n = mat.rows;
        let scale = mat.data.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
        for i in 0..n {
            for j in i + 1..n {
                if (mat.get(i, j) - mat.get(j, i)).abs() > tol * scale {
                    return Err(LinalgError::InvalidInput(format!(
                        "asymmetry at ({i},{j}): {} vs {}",
                        mat.get(i, j),
                        mat.get(j, i)
                    )));
                }
            }
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = mat.get(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        Ok(m)
    }

    /// Checks exact symmetry of explicit rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::InvalidInput("empty matrix".into()));
        }
        for r in rows {
            if r.len() != n {
                return Err(LinalgError::DimensionMismatch("ragged rows".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if rows[i][j].to_bits() != rows[j][i].to_bits() {
                    return Err(LinalgError::InvalidInput(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n..(i + 1) * n].copy_from_slice(&rows[i]);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Adds `v` to both `(i, j)` and `(j, i)` (only once on the diagonal).
    #[inline]
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] += v;
        if i != j {
            self.data[j * self.dim + i] += v;
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_mat(&self) -> Mat {
        Mat { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = self.row(i);
            let mut acc = 0.0;
            for j in 0..self.dim {
                acc += row[j] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    pub fn quadform(&self, x: &[f64]) -> f64 {
        let y = self.matvec(x);
        dot(x, &y)
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// Adds `c * x xᵀ` in place.
    pub fn add_outer(&mut self, c: f64, x: &[f64]) {
        assert_eq!(x.len(), self.dim);
        for i in 0..self.dim {
            let xi = c * x[i];
            if xi == 0.0 {
                continue;
            }
            let row = &mut self.data[i * self.dim..(i + 1) * self.dim];
            for j in 0..self.dim {
                row[j] += xi * x[j];
            }
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Extracts the principal submatrix on `idx` (all indices distinct).
    pub fn submatrix(&self, idx: &[usize]) -> SymMatrix {
        let m = idx.len();
        let mut out = SymMatrix::zeros(m.max(1));
        if m == 0 {
            return out;
        }
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * m + b] = self.get(i, j);
            }
        }
        out
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Full spectral decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in nondecreasing order.
    pub eigenvalues: Vec<f64>,
    /// Row `i` is the (unit) eigenvector paired with `eigenvalues[i]`.
    vectors: Mat,
    /// Absolute threshold below which an eigenvalue counts as zero.
    pub zero_tol: f64,
}

impl EigenDecomposition {
    #[inline]
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector paired with `eigenvalues[i]`, as a contiguous slice.
    #[inline]
    pub fn eigenvector(&self, i: usize) -> &[f64] {
        self.vectors.row(i)
    }

    /// Eigenvector matrix with column `i` paired with `eigenvalues[i]`.
    pub fn vectors_colmajor(&self) -> Mat {
        self.vectors.transpose()
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|l| l.abs() > self.zero_tol).count()
    }

    /// Indices of eigenvalues treated as nonzero, ascending by value.
    pub fn nonzero_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.eigenvalues[i].abs() > self.zero_tol).collect()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Reconstructs `sum_{|lambda| > cut} g(lambda) v vᵀ`.
    pub fn apply_spectral(&self, cut: f64, g: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.dim();
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            let l = self.eigenvalues[i];
            if l.abs() > cut {
                out.add_outer(g(l), self.eigenvector(i));
            }
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition. Deterministic: fixed sweep order,
/// convergence when the off-diagonal Frobenius norm drops below
/// `1e-12 * ||A||_F`, hard cap of 100 sweeps, eigenvalues sorted ascending
/// and each eigenvector's first nonzero coordinate made positive.
pub fn sym_eigen(a: &SymMatrix) -> Result<EigenDecomposition> {
    if !a.is_finite() {
        return Err(LinalgError::InvalidInput("non-finite entries".into()));
    }
    let n = a.dim();
    let mut m = a.data.clone();
    // vt rows accumulate eigenvectors (starts as identity).
    let mut vt = Mat::identity(n).data;

    let norm_a = a.frobenius();
    let off_target = 1e-12 * norm_a;

    if n > 1 && norm_a > 0.0 {
        for _sweep in 0..100 {
            let mut off2 = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    let v = m[i * n + j];
                    off2 += v * v;
                }
            }
            if (2.0 * off2).sqrt() <= off_target {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = m[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = m[p * n + p];
                    let aqq = m[q * n + q];
                    // Rotation angle choice per the classical symmetric
                    // Schur decomposition.
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Rows p and q (contiguous), then mirror into columns.
                    {
                        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                        let (head, tail) = m.split_at_mut(hi * n);
                        let rowp = &mut head[lo * n..lo * n + n];
                        let rowq = &mut tail[..n];
                        for i in 0..n {
                            let xp = rowp[i];
                            let xq = rowq[i];
                            rowp[i] = c * xp - s * xq;
                            rowq[i] = s * xp + c * xq;
                        }
                    }
                    // Recompute the 2x2 block explicitly for symmetry.
                    let new_pp = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                    let new_qq = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                    m[p * n + p] = new_pp;
                    m[q * n + q] = new_qq;
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    for i in 0..n {
                        if i == p || i == q {
                            continue;
                        }
                        m[i * n + p] = m[p * n + i];
                        m[i * n + q] = m[q * n + i];
                    }
                    // Accumulate the rotation into the eigenvector rows.
                    {
                        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                        let (head, tail) = vt.split_at_mut(hi * n);
                        let rowp = &mut head[lo * n..lo * n + n];
                        let rowq = &mut tail[..n];
                        for i in 0..n {
                            let xp = rowp[i];
                            let xq = rowq[i];
                            rowp[i] = c * xp - s * xq;
                            rowq[i] = s * xp + c * xq;
                        }
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = Mat::zeros(n, n);
    for (slot, &i) in order.iter().enumerate() {
        eigenvalues.push(m[i * n + i]);
        let row = &vt[i * n..(i + 1) * n];
        // Sign convention: first coordinate of visible magnitude positive.
        let mut sign = 1.0;
        for &v in row.iter() {
            if v.abs() > 1e-12 {
                if v < 0.0 {
                    sign = -1.0;
                }
                break;
            }
        }
        for j in 0..n {
            vectors.data[slot * n + j] = sign * row[j];
        }
    }

    let lmax = eigenvalues.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
    let zero_tol = ZERO_REL_TOL * lmax.max(1.0);
    Ok(EigenDecomposition { eigenvalues, vectors, zero_tol })
}

/// Moore-Penrose pseudoinverse: eigenvalues with `|lambda| <= rel_tol * |lambda|_max`
/// are dropped, the rest inverted.
pub fn pinv(a: &SymMatrix, rel_tol: f64) -> Result<SymMatrix> {
    let dec = sym_eigen(a)?;
    let lmax = dec.eigenvalues.iter().cloned().fold(0.0f64, |m, l| m.max(l.abs()));
    let cut = rel_tol * lmax.max(1.0);
    Ok(dec.apply_spectral(cut, |l| 1.0 / l))
}

pub const PINV_REL_TOL: f64 = 1e-8;

/// Pseudoinverse at the default tolerance.
pub fn pinv_default(a: &SymMatrix) -> Result<SymMatrix> {
    pinv(a, PINV_REL_TOL)
}

/// Projection onto the subspace orthogonal to the span of `vectors`.
pub fn projector_orth(vectors: &[Vec<f64>], dim: usize) -> Result<SymMatrix> {
    let basis = orthonormal_basis(vectors, dim)?;
    let mut p = SymMatrix::identity(dim);
    for b in &basis {
        p.add_outer(-1.0, b);
    }
    Ok(p)
}

/// Projection onto the span of `vectors`.
pub fn projector_span(vectors: &[Vec<f64>], dim: usize) -> Result<SymMatrix> {
    let basis = orthonormal_basis(vectors, dim)?;
    let mut p = SymMatrix::zeros(dim);
    for b in &basis {
        p.add_outer(1.0, b);
    }
    Ok(p)
}

/// Modified Gram-Schmidt with a relative rank cutoff.
pub fn orthonormal_basis(vectors: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if v.len() != dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                v.len(),
                dim
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::InvalidInput("non-finite vector entry".into()));
        }
        let scale = norm2(v);
        if scale == 0.0 {
            continue;
        }
        let mut w = v.clone();
        // Two rounds of MGS for numerical orthogonality.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                for i in 0..dim {
                    w[i] -= c * b[i];
                }
            }
        }
        let nw = norm2(&w);
        if nw > 1e-10 * scale.max(1.0) {
            for x in w.iter_mut() {
                *x /= nw;
            }
            basis.push(w);
        }
    }
    Ok(basis)
}

/// `a <= b` in the PSD order: `lambda_min(b - a) >= -tol`.
pub fn psd_leq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch("psd_leq operands".into()));
    }
    let d = b.sub(a);
    let dec = sym_eigen(&d)?;
    Ok(dec.min_eigenvalue() >= -tol)
}

/// Product of nonzero eigenvalues in log space; `None` means the matrix has
/// a definitely negative eigenvalue.
pub fn det_plus_log(a: &SymMatrix) -> Result<f64> {
    let dec = sym_eigen(a)?;
    let lmax = dec.max_eigenvalue().max(0.0);
    let neg_tol = 1e-8 * lmax.max(1.0);
    let mut acc = 0.0;
    for &l in &dec.eigenvalues {
        if l < -neg_tol {
            return Err(LinalgError::NotPsd(l));
        }
        if l > dec.zero_tol {
            acc += l.ln();
        }
    }
    Ok(acc)
}

/// Product of all nonzero eigenvalues of a PSD matrix (1 for the zero matrix).
pub fn det_plus(a: &SymMatrix) -> Result<f64> {
    Ok(det_plus_log(a)?.exp())
}

/// Log-product of the `ell` smallest nonzero eigenvalues of a PSD matrix.
pub fn det_ell_log(a: &SymMatrix, ell: usize) -> Result<f64> {
    let dec = sym_eigen(a)?;
    let lmax = dec.max_eigenvalue().max(0.0);
    let neg_tol = 1e-8 * lmax.max(1.0);
    if dec.min_eigenvalue() < -neg_tol {
        return Err(LinalgError::NotPsd(dec.min_eigenvalue()));
    }
    let nonzero: Vec<f64> =
        dec.eigenvalues.iter().cloned().filter(|&l| l > dec.zero_tol).collect();
    if ell > nonzero.len() {
        return Err(LinalgError::InsufficientRank { requested: ell, rank: nonzero.len() });
    }
    Ok(nonzero[..ell].iter().map(|l| l.ln()).sum())
}

/// Product of the `ell` smallest nonzero eigenvalues.
pub fn det_ell(a: &SymMatrix, ell: usize) -> Result<f64> {
    Ok(det_ell_log(a, ell)?.exp())
}

/// Rank-one determinant update ratio `det(M + x yᵀ) / det(M) = 1 + yᵀ M⁻¹ x`
/// for invertible symmetric `M`.
pub fn det_rank1_update_ratio(m: &SymMatrix, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != m.dim() || y.len() != m.dim() {
        return Err(LinalgError::DimensionMismatch("rank-1 update vectors".into()));
    }
    let dec = sym_eigen(m)?;
    let lmax = dec.eigenvalues.iter().cloned().fold(0.0f64, |a, l| a.max(l.abs()));
    let cut = ZERO_REL_TOL * lmax.max(1.0);
    let mut acc = 0.0;
    for i in 0..dec.dim() {
        let l = dec.eigenvalues[i];
        if l.abs() <= cut {
            return Err(LinalgError::Singular);
        }
        let v = dec.eigenvector(i);
        acc += dot(v, y) * dot(v, x) / l;
    }
    Ok(1.0 + acc)
}

/// Cholesky factorization of a symmetric positive definite matrix
/// (lower-triangular `L` with `L Lᵀ = A`). Fails with `NotPsd` when a pivot
/// is not positive.
pub fn cholesky(a: &SymMatrix) -> Result<Mat> {
    let n = a.dim();
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(LinalgError::NotPsd(sum));
                }
                l.set(i, j, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solves `A x = b` for symmetric positive definite `A` via Cholesky.
pub fn solve_spd(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(a)?;
    let n = a.dim();
    // Forward substitution L y = b.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l.get(i, k) * y[k];
        }
        y[i] = sum / l.get(i, i);
    }
    // Back substitution Lᵀ x = y.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = y[i];
        for k in i + 1..n {
            sum -= l.get(k, i) * x[k];
        }
        x[i] = sum / l.get(i, i);
    }
    Ok(x)
}

/// Computes `bᵀ A⁺ b` together with a range-membership flag: the second
/// component is false when `b` has a component outside `range(A)` larger than
/// `1e-7 * ||b||`.
pub fn quadform_pinv(a: &SymMatrix, b: &[f64]) -> Result<(f64, bool)> {
    let dec = sym_eigen(a)?;
    let lmax = dec.eigenvalues.iter().cloned().fold(0.0f64, |m, l| m.max(l.abs()));
    let cut = ZERO_REL_TOL * lmax.max(1.0);
    let mut quad = 0.0;
    let mut proj_norm2 = 0.0;
    for i in 0..dec.dim() {
        let l = dec.eigenvalues[i];
        if l.abs() > cut {
            let c = dot(dec.eigenvector(i), b);
            quad += c * c / l;
            proj_norm2 += c * c;
        }
    }
    let total = dot(b, b);
    let in_range = (total - proj_norm2).max(0.0).sqrt() <= 1e-7 * total.sqrt().max(1e-300);
    Ok((quad, in_range))
}
