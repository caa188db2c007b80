//! Provider-local passive unitaries.
//!
//! A unitary on `n` modes is `exp(i Σ ε_k Λ_k)` over the `n²` Hermitian
//! generators
//!
//! * `E_jk + E_kj` for `j < k` (lexicographic),
//! * `-i (E_jk - E_kj)` for `j < k`,
//! * `sqrt(2 / (l (l+1))) (Σ_{j<l} E_jj - l E_ll)` for `l = 1..n-1`,
//! * the identity (global phase).
//!
//! The first `n² - 1` are the generalized Gell-Mann matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::SymplecticMatrix;
use crate::netgen::Provider;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Generator {
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
    Diagonal(usize),
    Identity,
}

/// Ordered generator set for `U(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GellMannBasis {
    n: usize,
    order: Vec<Generator>,
}

impl GellMannBasis {
    pub fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
        let order = pairs
            .iter()
            .map(|&(j, k)| Generator::Symmetric(j, k))
            .chain(pairs.iter().map(|&(j, k)| Generator::Antisymmetric(j, k)))
            .chain((1..n).map(Generator::Diagonal))
            .chain((n > 0).then_some(Generator::Identity))
            .collect();
        Self { n, order }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n²`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of traceless generators, `n² - 1`.
    pub fn traceless_len(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn generator(&self, k: usize) -> DMatrix<Complex64> {
        let mut eps = vec![0.0; self.len()];
        eps[k] = 1.0;
        self.hermitian(&eps)
    }

    pub fn generators(&self) -> Vec<DMatrix<Complex64>> {
        (0..self.len()).map(|k| self.generator(k)).collect()
    }

    /// `Σ ε_k Λ_k`.
    pub fn hermitian(&self, eps: &[f64]) -> DMatrix<Complex64> {
        let mut h = DMatrix::<Complex64>::zeros(self.n, self.n);
        for (g, &e) in self.order.iter().zip(eps) {
            match *g {
                Generator::Symmetric(j, k) => {
                    h[(j, k)] += e;
                    h[(k, j)] += e;
                }
                Generator::Antisymmetric(j, k) => {
                    h[(j, k)] -= I * e;
                    h[(k, j)] += I * e;
                }
                Generator::Diagonal(l) => {
                    let c = (2.0 / (l * (l + 1)) as f64).sqrt() * e;
                    for j in 0..l {
                        h[(j, j)] += c;
                    }
                    h[(l, l)] -= c * l as f64;
                }
                Generator::Identity => {
                    for j in 0..self.n {
                        h[(j, j)] += e;
                    }
                }
            }
        }
        h
    }

    /// `exp(i Σ ε_k Λ_k)` through the eigendecomposition of the Hermitian
    /// exponent.
    pub fn to_unitary(&self, eps: &[f64]) -> Result<DMatrix<Complex64>> {
        if eps.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} parameters", self.len()),
                actual: format!("{}", eps.len()),
            });
        }
        if eps.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters("non-finite unitary parameter".into()));
        }
        let eig = SymmetricEigen::new(self.hermitian(eps));
        let v = &eig.eigenvectors;
        let phased = DMatrix::from_fn(self.n, self.n, |i, j| {
            v[(i, j)] * Complex64::from_polar(1.0, eig.eigenvalues[j])
        });
        Ok(phased * v.adjoint())
    }
}

/// [`GellMannBasis::to_unitary`] for a one-off basis.
pub fn to_unitary(eps: &[f64], n: usize) -> Result<DMatrix<Complex64>> {
    GellMannBasis::new(n).to_unitary(eps)
}

/// Parameters of the two provider unitaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryParams {
    pub eps_a: Vec<f64>,
    pub eps_b: Vec<f64>,
}

impl UnitaryParams {
    /// Identity unitaries for providers with `n_a` and `n_b` modes.
    pub fn zeros(n_a: usize, n_b: usize) -> Self {
        Self {
            eps_a: vec![0.0; n_a * n_a],
            eps_b: vec![0.0; n_b * n_b],
        }
    }

    /// Splits a flat search vector `(ε_A, ε_B)`.
    pub fn from_flat(x: &[f64], n_a: usize) -> Self {
        let (a, b) = x.split_at(n_a * n_a);
        Self {
            eps_a: a.to_vec(),
            eps_b: b.to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.eps_a.iter().chain(&self.eps_b).copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.eps_a.len() + self.eps_b.len()
    }

    pub fn validate(&self, n_a: usize, n_b: usize) -> Result<()> {
        if self.eps_a.len() != n_a * n_a || self.eps_b.len() != n_b * n_b {
            return Err(Error::DimensionMismatch {
                expected: format!("{} + {} parameters", n_a * n_a, n_b * n_b),
                actual: format!("{} + {}", self.eps_a.len(), self.eps_b.len()),
            });
        }
        if self.to_flat().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters("non-finite entry".into()));
        }
        Ok(())
    }
}

/// The global passive unitary acting as `U_A` on provider A's modes (in
/// increasing vertex order) and `U_B` on provider B's.
pub fn local_unitary(
    u_a: &DMatrix<Complex64>,
    u_b: &DMatrix<Complex64>,
    partition: &[Provider],
) -> Result<DMatrix<Complex64>> {
    let a: Vec<usize> = (0..partition.len()).filter(|&v| partition[v] == Provider::A).collect();
    let b: Vec<usize> = (0..partition.len()).filter(|&v| partition[v] == Provider::B).collect();
    for (u, modes) in [(u_a, &a), (u_b, &b)] {
        if u.nrows() != modes.len() || u.ncols() != modes.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} unitary", modes.len()),
                actual: format!("{}x{}", u.nrows(), u.ncols()),
            });
        }
    }
    let n = partition.len();
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for (block, modes) in [(u_a, &a), (u_b, &b)] {
        for (i, &gi) in modes.iter().enumerate() {
            for (j, &gj) in modes.iter().enumerate() {
                u[(gi, gj)] = block[(i, j)];
            }
        }
    }
    Ok(u)
}

/// Symplectic image of [`local_unitary`].
pub fn embed_local(
    u_a: &DMatrix<Complex64>,
    u_b: &DMatrix<Complex64>,
    partition: &[Provider],
) -> Result<SymplecticMatrix> {
    SymplecticMatrix::from_unitary(&local_unitary(u_a, u_b, partition)?)
}

/// General two-mode passive unitary
/// `[[e^{iφ2} cos θ, -e^{i(φ1+φ2)} sin θ], [e^{iφ3} sin θ, e^{i(φ1+φ3)} cos θ]]`.
pub fn beam_splitter_unitary(theta: f64, phi1: f64, phi2: f64, phi3: f64) -> DMatrix<Complex64> {
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(
        2,
        2,
        &[e(phi2) * c, -e(phi1 + phi2) * s, e(phi3) * s, e(phi1 + phi3) * c],
    )
}
