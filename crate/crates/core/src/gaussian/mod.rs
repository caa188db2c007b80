//! Covariance matrices of zero-mean Gaussian states and the symplectic maps
//! acting on them.
//!
//! Quadratures are ordered `(Q1..Qn, P1..Pn)`, the vacuum has covariance `I`
//! and the symplectic form is `[[0, I], [-I, 0]]`.

mod decompose;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::netgen::Graph;

pub use decompose::{
    bloch_messiah, purity, symplectic_eigenvalues, von_neumann_entropy, williamson, BlochMessiah, WilliamsonResult,
};

const SYMMETRY_TOL: f64 = 1e-12;
const SYMPLECTIC_TOL: f64 = 1e-10;

/// Equal single-mode squeezing `s = e^{2r}` applied to every vacuum mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SqueezingSpec {
    s: f64,
}

impl SqueezingSpec {
    pub fn new(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidSqueezing(format!(
                "s must be finite and positive, got {s}"
            )));
        }
        Ok(Self { s })
    }

    pub fn from_r(r: f64) -> Result<Self> {
        Self::new((2.0 * r).exp())
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn r(&self) -> f64 {
        self.s.ln() / 2.0
    }

    /// `cosh 2r`: the variance of one half of the target pair.
    pub fn lambda(&self) -> f64 {
        (self.s + 1.0 / self.s) / 2.0
    }

    /// `sinh 2r`: the cross-correlation of the target pair.
    pub fn mu(&self) -> f64 {
        (self.s - 1.0 / self.s) / 2.0
    }
}

impl TryFrom<f64> for SqueezingSpec {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<SqueezingSpec> for f64 {
    fn from(sq: SqueezingSpec) -> f64 {
        sq.s
    }
}

/// A symmetric `2n x 2n` covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates shape, finiteness and symmetry, then stores the exactly
    /// symmetrized matrix. Physicality is not checked here.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let dim = data.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || data.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: "non-empty even square matrix".into(),
                actual: format!("{}x{}", dim, data.ncols()),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotSymmetric(f64::NAN));
        }
        let scale = data.amax().max(1.0);
        let asym = (&data - data.transpose()).amax() / scale;
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        let data = (&data + data.transpose()) * 0.5;
        Ok(Self { data })
    }

    pub(crate) fn new_unchecked(data: DMatrix<f64>) -> Self {
        Self { data }
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            data: DMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Single-mode thermal states with the given symplectic eigenvalues.
    pub fn thermal(nu: &[f64]) -> Self {
        let n = nu.len();
        Self {
            data: DMatrix::from_fn(2 * n, 2 * n, |i, j| if i == j { nu[i % n] } else { 0.0 }),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Marginal of the listed modes, in the listed order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        let n = self.n_modes();
        check_modes(modes, n)?;
        let idx = quadrature_indices(modes, n);
        Ok(Self {
            data: self.data.select_rows(&idx).select_columns(&idx),
        })
    }

    /// `S Γ Sᵀ`.
    pub fn transformed(&self, s: &SymplecticMatrix) -> Result<Self> {
        if s.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} modes", self.n_modes()),
                actual: format!("{} modes", s.n_modes()),
            });
        }
        let data = &s.data * &self.data * s.data.transpose();
        Ok(Self {
            data: (&data + data.transpose()) * 0.5,
        })
    }

    /// Block-diagonal state of `self` on the first modes and `other` on the rest.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n_modes(), other.n_modes());
        let n = n1 + n2;
        let mut data = DMatrix::zeros(2 * n, 2 * n);
        let place = |k: usize, m: usize, offset: usize| if k < m { k + offset } else { k - m + n + offset };
        for i in 0..2 * n1 {
            for j in 0..2 * n1 {
                data[(place(i, n1, 0), place(j, n1, 0))] = self.data[(i, j)];
            }
        }
        for i in 0..2 * n2 {
            for j in 0..2 * n2 {
                data[(place(i, n2, n1), place(j, n2, n1))] = other.data[(i, j)];
            }
        }
        Self { data }
    }

    /// Relabels modes so that new mode `k` is old mode `order[k]`.
    pub fn permute_modes(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_modes() {
            return Err(Error::ModeIndex(format!(
                "permutation has {} entries for {} modes",
                order.len(),
                self.n_modes()
            )));
        }
        self.reduce(order)
    }
}

/// A real `2n x 2n` matrix preserving the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    data: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let dim = data.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || data.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: "non-empty even square matrix".into(),
                actual: format!("{}x{}", dim, data.ncols()),
            });
        }
        let err = symplectic_defect(&data);
        if !(err <= SYMPLECTIC_TOL * data.amax().powi(2).max(1.0)) {
            return Err(Error::NotSymplectic(err));
        }
        Ok(Self { data })
    }

    pub(crate) fn new_unchecked(data: DMatrix<f64>) -> Self {
        Self { data }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Phase-space image of a passive unitary: `[[Re U, -Im U], [Im U, Re U]]`.
    pub fn from_unitary(u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != u.ncols() || u.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: "square unitary".into(),
                actual: format!("{}x{}", u.nrows(), u.ncols()),
            });
        }
        let defect = (u.adjoint() * u - DMatrix::identity(u.nrows(), u.nrows())).camax();
        if defect > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic(defect));
        }
        Ok(Self {
            data: linalg::real_embedding(u),
        })
    }

    /// Single-mode squeezers `diag(d, 1/d)`.
    pub fn squeezer(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            data: DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i < n) {
                (true, true) => d[i],
                (true, false) => 1.0 / d[i - n],
                _ => 0.0,
            }),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// `max |SᵀΩS - Ω|`.
    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.data)
    }

    /// `max |SᵀS - I|`; zero for passive transformations.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.data.nrows();
        (self.data.transpose() * &self.data - DMatrix::identity(n, n)).amax()
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            data: &self.data * &rhs.data,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
        }
    }
}

fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let w = linalg::omega(s.nrows() / 2);
    (s.transpose() * &w * s - w).amax()
}

pub(crate) fn check_modes(modes: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &m in modes {
        if m >= n {
            return Err(Error::ModeIndex(format!("mode {m} out of range for {n} modes")));
        }
        if std::mem::replace(&mut seen[m], true) {
            return Err(Error::ModeIndex(format!("mode {m} listed twice")));
        }
    }
    Ok(())
}

fn quadrature_indices(modes: &[usize], n: usize) -> Vec<usize> {
    modes.iter().copied().chain(modes.iter().map(|&m| m + n)).collect()
}

/// Symplectic image of the cluster interferometer: `[[X, -Y], [Y, X]]` with
/// `X = (I + A²)^{-1/2}` and `Y = A X`.
pub fn cluster_symplectic(g: &Graph) -> SymplecticMatrix {
    let a = g.adjacency_matrix();
    let n = g.n();
    let x = linalg::sym_function(&a, |v| 1.0 / (1.0 + v * v).sqrt());
    let y = linalg::sym_function(&a, |v| v / (1.0 + v * v).sqrt());
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    s.view_mut((0, 0), (n, n)).copy_from(&x);
    s.view_mut((0, n), (n, n)).copy_from(&(-&y));
    s.view_mut((n, 0), (n, n)).copy_from(&y);
    s.view_mut((n, n), (n, n)).copy_from(&x);
    SymplecticMatrix { data: s }
}

/// Cluster state of `g`: vacua squeezed to `diag(s, 1/s)` sent through
/// [`cluster_symplectic`].
pub fn build_cluster(g: &Graph, sq: SqueezingSpec) -> CovarianceMatrix {
    let n = g.n();
    let squeezed = CovarianceMatrix::thermal(&vec![1.0; n]);
    let mut data = squeezed.into_matrix();
    for i in 0..n {
        data[(i, i)] = sq.s();
        data[(n + i, n + i)] = 1.0 / sq.s();
    }
    CovarianceMatrix::new_unchecked(data)
        .transformed(&cluster_symplectic(g))
        .expect("dimensions agree by construction")
}

/// The two-mode target `[[λ,0,0,μ],[0,λ,μ,0],[0,μ,λ,0],[μ,0,0,λ]]`.
pub fn target_pair_covariance(sq: SqueezingSpec) -> CovarianceMatrix {
    let (l, m) = (sq.lambda(), sq.mu());
    CovarianceMatrix::new_unchecked(DMatrix::from_row_slice(
        4,
        4,
        &[l, 0.0, 0.0, m, 0.0, l, m, 0.0, 0.0, m, l, 0.0, m, 0.0, 0.0, l],
    ))
}

fn pair_rows(n: usize, m_a: usize, m_b: usize) -> Result<[usize; 4]> {
    if m_a == m_b {
        return Err(Error::ModeIndex(format!("routing pair uses mode {m_a} twice")));
    }
    check_modes(&[m_a, m_b], n)?;
    Ok([m_a, m_b, m_a + n, m_b + n])
}

/// Rows `(m_A, m_B, m_A + n, m_B + n)` of `Γ`, all columns.
pub fn routing_rows(gamma: &CovarianceMatrix, m_a: usize, m_b: usize) -> Result<DMatrix<f64>> {
    let rows = pair_rows(gamma.n_modes(), m_a, m_b)?;
    Ok(gamma.matrix().select_rows(&rows))
}

/// What [`routing_rows`] returns for a perfectly routed state: the target
/// pair block in the pair columns and zeros elsewhere.
pub fn ideal_rows(n: usize, m_a: usize, m_b: usize, sq: SqueezingSpec) -> Result<DMatrix<f64>> {
    let rows = pair_rows(n, m_a, m_b)?;
    let target = target_pair_covariance(sq);
    let mut out = DMatrix::zeros(4, 2 * n);
    for (i, _) in rows.iter().enumerate() {
        for (j, &col) in rows.iter().enumerate() {
            out[(i, col)] = target.matrix()[(i, j)];
        }
    }
    Ok(out)
}
