//! Symplectic spectra, entropy, purity and the Williamson and Bloch-Messiah
//! factorizations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{CovarianceMatrix, SymplecticMatrix, SYMPLECTIC_TOL};
use crate::error::{Error, Result};
use crate::linalg;

const CLUSTER_GAP: f64 = 1e-9;
const UNPHYSICAL_TOL: f64 = 1e-6;

/// `Γ = S diag(ν, ν) Sᵀ` with `ν` sorted descending.
#[derive(Debug, Clone)]
pub struct WilliamsonResult {
    pub eigenvalues: Vec<f64>,
    pub symplectic: SymplecticMatrix,
}

impl WilliamsonResult {
    pub fn thermal(&self) -> CovarianceMatrix {
        CovarianceMatrix::thermal(&self.eigenvalues)
    }

    /// `‖S Γ_W Sᵀ - Γ‖_F / ‖Γ‖_F`.
    pub fn residual(&self, gamma: &CovarianceMatrix) -> f64 {
        let rebuilt = self.thermal().transformed(&self.symplectic).expect("same size");
        linalg::frobenius(&(rebuilt.matrix() - gamma.matrix())) / linalg::frobenius(gamma.matrix())
    }
}

/// `S = O1 · diag(d, 1/d) · O2` with passive `O1`, `O2` and `d` descending,
/// every `d ≥ 1`.
#[derive(Debug, Clone)]
pub struct BlochMessiah {
    pub o1: SymplecticMatrix,
    pub squeezing: Vec<f64>,
    pub o2: SymplecticMatrix,
}

impl BlochMessiah {
    pub fn reconstruct(&self) -> SymplecticMatrix {
        self.o1
            .compose(&SymplecticMatrix::squeezer(&self.squeezing))
            .compose(&self.o2)
    }
}

/// `Γ^{1/2} Ω Γ^{1/2}`: antisymmetric with eigenvalues `±iν`.
fn symplectic_kernel(gamma: &CovarianceMatrix) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (half, _) = linalg::spd_sqrt_pair(gamma.matrix())?;
    let k = &half * linalg::omega(gamma.n_modes()) * &half;
    Ok((half, k))
}

/// Splits a descending list into runs whose neighbours differ by at most the
/// relative gap.
fn clusters(desc: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=desc.len() {
        if i == desc.len() || desc[i - 1] - desc[i] > CLUSTER_GAP * desc[i - 1].abs().max(1.0) {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Symplectic eigenvalues, descending.
pub fn symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let (_, k) = symplectic_kernel(gamma)?;
    let (values, _) = linalg::sym_eigen(&(k.transpose() * &k));
    let desc: Vec<f64> = values.into_iter().rev().collect();
    Ok(desc.chunks(2).map(|p| ((p[0] + p[1]) / 2.0).max(0.0).sqrt()).collect())
}

/// Williamson normal form. Degenerate eigenvalues are handled jointly by
/// pivoted Gram-Schmidt inside each cluster.
pub fn williamson(gamma: &CovarianceMatrix) -> Result<WilliamsonResult> {
    let n = gamma.n_modes();
    let (half, k) = symplectic_kernel(gamma)?;
    let (values, vectors) = linalg::sym_eigen(&(k.transpose() * &k));
    let desc: Vec<f64> = values.iter().rev().copied().collect();
    let col = |i: usize| vectors.column(2 * n - 1 - i).into_owned();

    let mut us: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut ps: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut nus: Vec<f64> = Vec::with_capacity(n);
    for range in clusters(&desc) {
        if range.len() % 2 != 0 {
            return Err(Error::Decomposition(format!(
                "eigenvalue cluster near {} has odd size {}",
                desc[range.start].sqrt(),
                range.len()
            )));
        }
        let mut residuals: Vec<DVector<f64>> = range.clone().map(col).collect();
        for _ in 0..range.len() / 2 {
            for r in residuals.iter_mut() {
                for b in us.iter().chain(ps.iter()) {
                    let proj = b.dot(r);
                    *r -= b * proj;
                }
            }
            let (idx, norm) = residuals
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                .expect("cluster is non-empty");
            if norm < 1e-6 {
                return Err(Error::Decomposition("defective symplectic pairing".into()));
            }
            let u = residuals.swap_remove(idx) / norm;
            let ku = &k * &u;
            let nu = ku.norm();
            if nu <= 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
            ps.push(-ku / nu);
            us.push(u);
            nus.push(nu);
        }
    }

    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        o.set_column(j, &us[j]);
        o.set_column(n + j, &ps[j]);
    }
    let scale = DMatrix::from_fn(2 * n, 2 * n, |i, j| if i == j { 1.0 / nus[i % n].sqrt() } else { 0.0 });
    let s = &half * o * scale;
    Ok(WilliamsonResult {
        eigenvalues: nus,
        symplectic: SymplecticMatrix::new_unchecked(s),
    })
}

/// Von Neumann entropy in bits, `Σ G((ν - 1)/2)` with
/// `G(x) = (x+1) log2(x+1) - x log2 x`.
pub fn von_neumann_entropy(gamma: &CovarianceMatrix) -> Result<f64> {
    let nus = symplectic_eigenvalues(gamma)?;
    if let Some(&low) = nus.last() {
        if low < 1.0 - UNPHYSICAL_TOL {
            return Err(Error::Unphysical(low));
        }
    }
    Ok(nus.iter().map(|&nu| entropy_term((nu - 1.0) / 2.0)).sum())
}

fn entropy_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

/// `det(Γ)^{-1/2}`.
pub fn purity(gamma: &CovarianceMatrix) -> Result<f64> {
    let det = gamma.matrix().clone().determinant();
    if !(det > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(1.0 / det.sqrt())
}

/// Bloch-Messiah factorization via the eigenvectors of `S Sᵀ`.
pub fn bloch_messiah(s: &SymplecticMatrix) -> Result<BlochMessiah> {
    let n = s.n_modes();
    let defect = s.defect();
    if !(defect <= SYMPLECTIC_TOL * s.matrix().amax().powi(2).max(1.0)) {
        return Err(Error::NotSymplectic(defect));
    }
    let sst = s.matrix() * s.matrix().transpose();
    let (values, vectors) = linalg::sym_eigen(&sst);
    // Eigenvectors carry an arbitrary sign; fix it so the largest entry is
    // positive.
    let to_complex = |j: usize| {
        let v = vectors.column(j);
        let pivot = v
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        DVector::from_fn(n, |i, _| Complex64::new(sign * v[i], sign * v[n + i]))
    };
    // Squeezed directions (d > 1) come first; the unsqueezed eigenspace only
    // completes the basis.
    let top = values.last().copied().unwrap_or(1.0).max(1.0);
    let candidates: Vec<DVector<Complex64>> = (0..2 * n)
        .rev()
        .filter(|&j| values[j] > 1.0 + CLUSTER_GAP * top)
        .chain(
            (0..2 * n)
                .rev()
                .filter(|&j| (values[j] - 1.0).abs() <= CLUSTER_GAP * top),
        )
        .map(to_complex)
        .collect();
    let basis = linalg::complex_orthonormal(&candidates, n)?;
    let gain = |v: &DVector<Complex64>| {
        let real = DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im });
        real.dot(&(&sst * &real)).max(1.0).sqrt()
    };
    let mut modes: Vec<(f64, DVector<Complex64>)> = basis.into_iter().map(|v| (gain(&v), v)).collect();
    modes.sort_by(|a, b| b.0.total_cmp(&a.0));

    let u1 = DMatrix::from_fn(n, n, |i, j| modes[j].1[i]);
    let squeezing: Vec<f64> = modes.iter().map(|m| m.0).collect();
    let o1 = linalg::real_embedding(&u1);
    let inv_d = SymplecticMatrix::squeezer(&squeezing.iter().map(|d| 1.0 / d).collect::<Vec<_>>());
    let o2 = inv_d.matrix() * o1.transpose() * s.matrix();
    Ok(BlochMessiah {
        o1: SymplecticMatrix::new_unchecked(o1),
        squeezing,
        o2: SymplecticMatrix::new_unchecked(o2),
    })
}
