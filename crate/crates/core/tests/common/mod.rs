#![allow(dead_code)]

use cvrouter_core::gaussian::{CovarianceMatrix, SymplecticMatrix};
use cvrouter_core::netgen::Graph;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

pub fn omega(n: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        w[(i, n + i)] = 1.0;
        w[(n + i, i)] = -1.0;
    }
    w
}

/// Symplectic eigenvalues from the Schur form of `ΩΓ`, whose eigenvalues are
/// `±iν`. Descending.
pub fn schur_symplectic_eigenvalues(gamma: &DMatrix<f64>) -> Vec<f64> {
    let n = gamma.nrows() / 2;
    let ev = (omega(n) * gamma).complex_eigenvalues();
    let mut pos: Vec<f64> = ev.iter().map(|z| z.im).filter(|&im| im > 0.0).collect();
    pos.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(pos.len(), n, "eigenvalues of ΩΓ must pair up as ±iν");
    pos
}

/// Cluster "phase matrix" `V = (I + iA)(I - iA)^{-1}`; the cluster state is
/// `λI + μ[[Re V, Im V], [Im V, -Re V]]`.
pub fn cayley(a: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let ia = a.map(|x| Complex64::new(0.0, x));
    let id = DMatrix::<Complex64>::identity(n, n);
    let lhs = &id - &ia;
    let rhs = &id + &ia;
    lhs.lu().solve(&rhs).expect("I - iA is invertible")
}

pub fn cluster_oracle(a: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let v = cayley(a);
    let (l, m) = ((s + 1.0 / s) / 2.0, (s - 1.0 / s) / 2.0);
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = v[(i % n, j % n)];
        let r = match (i < n, j < n) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        };
        if i == j {
            l + m * r
        } else {
            m * r
        }
    })
}

/// Random symplectic matrix `exp(ΩH)` for symmetric `H`.
pub fn random_symplectic(h: &DMatrix<f64>) -> SymplecticMatrix {
    let n = h.nrows() / 2;
    let sym = (h + h.transpose()) * 0.5;
    SymplecticMatrix::new((omega(n) * sym).exp()).expect("exp of a Hamiltonian matrix is symplectic")
}

pub fn physical_state(nu: &[f64], h: &DMatrix<f64>) -> CovarianceMatrix {
    CovarianceMatrix::thermal(nu)
        .transformed(&random_symplectic(h))
        .unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

pub fn arb_state(max_modes: usize) -> impl Strategy<Value = CovarianceMatrix> {
    (1..=max_modes).prop_flat_map(|n| {
        (
            proptest::collection::vec(1.0..8.0f64, n),
            proptest::collection::vec(-0.6..0.6f64, 4 * n * n),
        )
            .prop_map(move |(nu, h)| physical_state(&nu, &DMatrix::from_vec(2 * n, 2 * n, h)))
    })
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
