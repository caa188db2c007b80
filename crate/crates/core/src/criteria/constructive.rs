//! Routing built from the Williamson and Bloch-Messiah factors.
//!
//! After `O_{A1}ᵀ ⊕ O_{B1}ᵀ` every provider block is diagonal. Across the
//! providers, a mode of A with variance `λ` in both quadratures correlates
//! only with B; one more unitary on B concentrates that correlation on a
//! single mode. Inside a provider, two pure modes `diag(s, 1/s)` are
//! entangled by the balanced beam splitter `(I + iσx)/√2`. Final mode swaps
//! place the pair at `(m_A, m_B)` with cross-correlation `+μ` between `Q_A`
//! and `P_B`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{is_lambda, is_one};
use crate::error::{Error, Result};
use crate::gaussian::{
    bloch_messiah, build_cluster, ideal_rows, routing_rows, williamson, CovarianceMatrix, SqueezingSpec,
};
use crate::linalg;
use crate::netgen::{Graph, Provider};
use crate::unitaries::local_unitary;

#[derive(Debug, Clone)]
pub struct ConstructiveRoute {
    pub u_a: DMatrix<Complex64>,
    pub u_b: DMatrix<Complex64>,
    /// The pair `(m_A, m_B)` after the transformation.
    pub routed: CovarianceMatrix,
    /// `‖ideal_rows - routing_rows‖_F` of the transformed state.
    pub residual: f64,
    /// More than one mode qualified for the pair; the lowest was used.
    pub ambiguous: bool,
}

fn swap(n: usize, i: usize, j: usize) -> DMatrix<Complex64> {
    let mut p = DMatrix::<Complex64>::identity(n, n);
    p.swap_columns(i, j);
    p
}

fn transform(
    gamma: &CovarianceMatrix,
    g: &Graph,
    u_a: &DMatrix<Complex64>,
    u_b: &DMatrix<Complex64>,
) -> Result<DMatrix<f64>> {
    let s = linalg::real_embedding(&local_unitary(u_a, u_b, g.partition())?);
    Ok(&s * gamma.matrix() * s.transpose())
}

pub fn constructive_route(g: &Graph, sq: SqueezingSpec, m_a: usize, m_b: usize) -> Result<ConstructiveRoute> {
    let n = g.n();
    let target = ideal_rows(n, m_a, m_b, sq)?;
    let gamma = build_cluster(g, sq);
    let modes = [g.modes_of(Provider::A), g.modes_of(Provider::B)];
    let side = |p: Provider| if p == Provider::A { 0 } else { 1 };

    let mut spectra = Vec::with_capacity(2);
    let mut units = Vec::with_capacity(2);
    for m in &modes {
        let w = williamson(&gamma.reduce(m)?)?;
        let bm = bloch_messiah(&w.symplectic)?;
        units.push(linalg::complex_part(bm.o1.matrix()).adjoint());
        spectra.push(w.eigenvalues);
    }
    let local = |v: usize| {
        modes[side(g.provider(v))]
            .iter()
            .position(|&x| x == v)
            .expect("vertex has a provider")
    };
    let (lambda, mu) = (sq.lambda(), sq.mu());
    let diag = transform(&gamma, g, &units[0], &units[1])?;
    let diag = &diag;
    let variances = |k: usize| {
        let gi = modes[k].clone();
        move |i: usize| (diag[(gi[i], gi[i])], diag[(gi[i] + n, gi[i] + n)])
    };

    let first = side(g.provider(m_a));
    let second = side(g.provider(m_b));
    let ambiguous;
    if first != second {
        let count = spectra[first].iter().filter(|&&v| is_lambda(v, lambda)).count();
        if count == 0 {
            return Err(Error::Precondition(format!(
                "λ = {lambda} is not a symplectic eigenvalue of the block holding mode {m_a}"
            )));
        }
        ambiguous = count > 1;
        let var = variances(first);
        let a = (0..modes[first].len())
            .min_by(|&i, &j| {
                let d = |k: usize| {
                    let (q, p) = var(k);
                    (q - lambda).abs() + (p - lambda).abs()
                };
                d(i).total_cmp(&d(j))
            })
            .expect("provider is non-empty");
        let ga = modes[first][a];
        let c: DVector<Complex64> = DVector::from_iterator(
            modes[second].len(),
            modes[second]
                .iter()
                .map(|&j| Complex64::new(diag[(ga, j)], diag[(ga, j + n)]) / mu),
        );
        let norm = c.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Decomposition(format!(
                "λ mode correlation has norm {norm}, expected 1"
            )));
        }
        let n2 = modes[second].len();
        let unit_vectors: Vec<DVector<Complex64>> = (0..n2)
            .map(|k| {
                DVector::from_fn(n2, |i, _| {
                    if i == k {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        let q = linalg::extend_orthonormal(vec![c / Complex64::new(norm, 0.0)], &unit_vectors, n2)?;
        let q = DMatrix::from_fn(n2, n2, |i, j| q[j][i]);
        let t = local(m_b);
        units[second] = swap(n2, 0, t) * q.adjoint() * Complex64::new(0.0, 1.0) * &units[second];
        units[first] = swap(modes[first].len(), a, local(m_a)) * &units[first];
    } else {
        let count = spectra[first].iter().filter(|&&v| is_one(v)).count();
        if count < 2 {
            return Err(Error::Precondition(format!(
                "the provider holding modes {m_a} and {m_b} has {count} unit symplectic eigenvalues, needs 2"
            )));
        }
        ambiguous = count > 2;
        let var = variances(first);
        let s = sq.s();
        let mut pure: Vec<usize> = (0..modes[first].len()).collect();
        pure.sort_by(|&i, &j| {
            let d = |k: usize| {
                let (q, p) = var(k);
                (q - s).abs() / s + (p - 1.0 / s).abs() * s
            };
            d(i).total_cmp(&d(j)).then(i.cmp(&j))
        });
        let (i, j) = (pure[0].min(pure[1]), pure[0].max(pure[1]));
        let nf = modes[first].len();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut bs = DMatrix::<Complex64>::identity(nf, nf);
        bs[(i, i)] = Complex64::new(h, 0.0);
        bs[(j, j)] = Complex64::new(h, 0.0);
        bs[(i, j)] = Complex64::new(0.0, h);
        bs[(j, i)] = Complex64::new(0.0, h);
        // Move i to m_A's slot, then j (possibly displaced) to m_B's slot.
        let (ta, tb) = (local(m_a), local(m_b));
        let p1 = swap(nf, i, ta);
        let j_now = if j == ta { i } else { j };
        let p2 = swap(nf, j_now, tb);
        units[first] = p2 * p1 * bs * &units[first];
    }

    let routed_full = CovarianceMatrix::new(transform(&gamma, g, &units[0], &units[1])?)?;
    let residual = linalg::frobenius(&(target - routing_rows(&routed_full, m_a, m_b)?));
    let routed = routed_full.reduce(&[m_a, m_b])?;
    let mut it = units.into_iter();
    let u_a = it.next().expect("two providers");
    let u_b = it.next().expect("two providers");
    Ok(ConstructiveRoute {
        u_a,
        u_b,
        routed,
        residual,
        ambiguous,
    })
}
