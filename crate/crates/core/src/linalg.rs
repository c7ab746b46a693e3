//! Dense linear-algebra helpers shared by the set and filter modules.

use nalgebra::{DMatrix, DVector};

/// Moore-Penrose pseudoinverse by SVD. Singular values below
/// `max(rows, cols) * eps * sigma_max` are treated as zero.
pub fn pinv(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return DMatrix::zeros(c, r);
    }
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = r.max(c) as f64 * f64::EPSILON * sigma_max;
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut out = DMatrix::zeros(c, r);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            out += (v_t.row(k).transpose() * u.column(k).transpose()) / s;
        }
    }
    out
}

/// Indicator of the nonzero rows of `m` (entries with magnitude above `tol`).
pub fn row_support(m: &DMatrix<f64>, tol: f64) -> Vec<bool> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().any(|v| v.abs() > tol))
        .collect()
}

/// `[a b]`
pub fn hcat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.nrows(), b.nrows(), "hcat row mismatch");
    let mut out = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

/// `[a; b]`
pub fn vcat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.ncols(), b.ncols(), "vcat column mismatch");
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn vstack(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

/// Block-diagonal `[a 0; 0 b]`.
pub fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Places `blocks` side by side inside a zero matrix with `cols` columns,
/// each block starting at its given column offset.
pub fn place_blocks(rows: usize, cols: usize, blocks: &[(usize, &DMatrix<f64>)]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(rows, cols);
    for (offset, m) in blocks {
        assert_eq!(m.nrows(), rows, "block row mismatch");
        out.view_mut((0, *offset), m.shape()).copy_from(m);
    }
    out
}

/// Greedily picks up to `n` rows of `m` that are well conditioned together,
/// normalized to unit length, completing with unit vectors when `m` has too
/// few independent rows. The result is an invertible `n × n` matrix.
pub fn well_conditioned_frame(m: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let mut candidates: Vec<DVector<f64>> = (0..m.nrows())
        .map(|i| m.row(i).transpose())
        .filter(|r| r.norm() > 1e-12)
        .map(|r| r.normalize())
        .collect();
    candidates.extend((0..n).map(|j| {
        let mut e = DVector::zeros(n);
        e[j] = 1.0;
        e
    }));
    let mut chosen: Vec<DVector<f64>> = Vec::new();
    // Gram-Schmidt residual of each candidate against the chosen rows; keep
    // the candidate with the largest residual until the frame is full.
    while chosen.len() < n {
        let mut best: Option<(usize, f64)> = None;
        for (k, cand) in candidates.iter().enumerate() {
            let mut r = cand.clone();
            let basis = orthonormalize(&chosen);
            for q in &basis {
                r -= q * q.dot(cand);
            }
            let score = r.norm();
            if best.is_none_or(|(_, s)| score > s + 1e-12) {
                best = Some((k, score));
            }
        }
        let (k, _) = best.expect("unit vectors always complete the frame");
        chosen.push(candidates.remove(k));
    }
    DMatrix::from_fn(n, n, |i, j| chosen[i][j])
}

fn orthonormalize(rows: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for q in &out {
            v -= q * q.dot(r);
        }
        let nrm = v.norm();
        if nrm > 1e-12 {
            out.push(v / nrm);
        }
    }
    out
}

/// Principal directions of the columns of `g` as the rows of an orthogonal
/// `n × n` matrix.
pub fn principal_frame(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    if g.ncols() == 0 {
        return DMatrix::identity(n, n);
    }
    let gram = g * g.transpose();
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(j, order[i])])
}
