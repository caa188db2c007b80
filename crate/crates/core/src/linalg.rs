//! Dense helpers shared by the Gaussian and unitary layers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub(crate) fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `f(M)` for symmetric `M`, applied through its eigendecomposition.
pub(crate) fn sym_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (values, vectors) = sym_eigen(m);
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, j| vectors[(i, j)] * f(values[j]));
    &scaled * vectors.transpose()
}

/// Positive-definite check plus `M^{1/2}` and `M^{-1/2}`.
pub(crate) fn spd_sqrt_pair(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (values, vectors) = sym_eigen(m);
    if values.first().is_some_and(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::NotPositiveDefinite);
    }
    let n = vectors.nrows();
    let half = DMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * values[j].sqrt());
    let inv_half = DMatrix::from_fn(n, n, |i, j| vectors[(i, j)] / values[j].sqrt());
    Ok((&half * vectors.transpose(), &inv_half * vectors.transpose()))
}

/// The symplectic form `[[0, I], [-I, 0]]` in `(Q, P)` ordering.
pub(crate) fn omega(n: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        w[(i, n + i)] = 1.0;
        w[(n + i, i)] = -1.0;
    }
    w
}

/// `[[Re U, -Im U], [Im U, Re U]]`.
pub(crate) fn real_embedding(u: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = u[(i, j)];
            s[(i, j)] = z.re;
            s[(i, n + j)] = -z.im;
            s[(n + i, j)] = z.im;
            s[(n + i, n + j)] = z.re;
        }
    }
    s
}

/// Inverse of [`real_embedding`] reading the left block column.
pub(crate) fn complex_part(s: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = s.nrows() / 2;
    DMatrix::from_fn(n, n, |i, j| Complex64::new(s[(i, j)], s[(n + i, j)]))
}

pub(crate) fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Orthonormal vectors in `C^dim` picked from `candidates` by pivoted
/// modified Gram-Schmidt: at each step the candidate with the largest
/// residual is kept. Stops after `count` vectors.
pub(crate) fn complex_orthonormal(candidates: &[DVector<Complex64>], count: usize) -> Result<Vec<DVector<Complex64>>> {
    extend_orthonormal(Vec::new(), candidates, count)
}

/// As [`complex_orthonormal`], keeping the already orthonormal `basis` as
/// the leading vectors.
pub(crate) fn extend_orthonormal(
    mut basis: Vec<DVector<Complex64>>,
    candidates: &[DVector<Complex64>],
    count: usize,
) -> Result<Vec<DVector<Complex64>>> {
    let mut residuals: Vec<DVector<Complex64>> = candidates.to_vec();
    for q in &basis {
        for r in residuals.iter_mut() {
            let proj = q.dotc(r);
            *r -= q * proj;
        }
    }
    while basis.len() < count {
        let (idx, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .ok_or_else(|| Error::Decomposition("ran out of candidate vectors".into()))?;
        if norm < 1e-6 {
            return Err(Error::Decomposition(format!(
                "candidate vectors span only {} of {} complex dimensions",
                basis.len(),
                count
            )));
        }
        let q = residuals.swap_remove(idx) / Complex64::new(norm, 0.0);
        for r in residuals.iter_mut() {
            let proj = q.dotc(r);
            *r -= &q * proj;
        }
        basis.push(q);
    }
    Ok(basis)
}
