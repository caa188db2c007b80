//! The four-mode square network with one beam splitter per provider.
//!
//! Modes 0, 1 belong to A and 2, 3 to B; the square's edges are
//! 0-1, 1-3, 3-2, 2-0. The hard-coded matrix below is written in the
//! provider-interleaved ordering `(Q0, Q1, P0, P1, Q2, Q3, P2, P3)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussian::{CovarianceMatrix, SqueezingSpec};
use crate::netgen::{Graph, Provider};
use crate::unitaries::{beam_splitter_unitary, embed_local};

/// Index map from the interleaved ordering to `(Q0..Q3, P0..P3)`.
pub fn interleaved_to_qp() -> [usize; 8] {
    [0, 1, 4, 5, 2, 3, 6, 7]
}

/// The 2x2 grid (4-cycle) with A = {0, 1}.
pub fn square_graph() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).expect("valid square")
}

/// Closed-form square cluster state in the interleaved ordering.
pub fn square_interleaved_matrix(sq: SqueezingSpec) -> DMatrix<f64> {
    let s = sq.s();
    let a = 3.0 * s / 5.0 + 2.0 / (5.0 * s);
    let b = (s * s - 1.0) / (5.0 * s);
    let c = 2.0 * (s * s - 1.0) / (5.0 * s);
    let d = 2.0 * s / 5.0 + 3.0 / (5.0 * s);
    #[rustfmt::skip]
    let entries = [
        a, 0.0, 0.0, b, 0.0, -c, b, 0.0,
        0.0, a, b, 0.0, -c, 0.0, 0.0, b,
        0.0, b, d, 0.0, b, 0.0, 0.0, c,
        b, 0.0, 0.0, d, 0.0, b, c, 0.0,
        0.0, -c, b, 0.0, a, 0.0, 0.0, b,
        -c, 0.0, 0.0, b, 0.0, a, b, 0.0,
        b, 0.0, 0.0, c, 0.0, b, d, 0.0,
        0.0, b, c, 0.0, b, 0.0, 0.0, d,
    ];
    DMatrix::from_row_slice(8, 8, &entries)
}

fn closed_form_qp(sq: SqueezingSpec) -> CovarianceMatrix {
    let m = square_interleaved_matrix(sq);
    let p = interleaved_to_qp();
    let mut out = DMatrix::zeros(8, 8);
    for i in 0..8 {
        for j in 0..8 {
            out[(p[i], p[j])] = m[(i, j)];
        }
    }
    CovarianceMatrix::new(out).expect("closed form is symmetric")
}

/// Parameters of [`beam_splitter_unitary`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitter {
    pub theta: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

impl BeamSplitter {
    pub fn unitary(&self) -> DMatrix<Complex64> {
        beam_splitter_unitary(self.theta, self.phi1, self.phi2, self.phi3)
    }
}

/// The square state after one beam splitter per provider, in
/// `(Q0..Q3, P0..P3)` ordering.
pub fn square_oracle(sq: SqueezingSpec, a: &BeamSplitter, b: &BeamSplitter) -> Result<CovarianceMatrix> {
    let s = embed_local(
        &a.unitary(),
        &b.unitary(),
        &[Provider::A, Provider::A, Provider::B, Provider::B],
    )?;
    closed_form_qp(sq).transformed(&s)
}

/// Balanced beam splitters whose phases route the pair (0, 2).
pub fn hand_solution() -> (BeamSplitter, BeamSplitter) {
    use std::f64::consts::{FRAC_PI_4, PI};
    let g = ((1.0 + 5f64.sqrt()) / 2.0).atan();
    (
        BeamSplitter {
            theta: FRAC_PI_4,
            phi1: PI,
            phi2: PI + g,
            phi3: 0.0,
        },
        BeamSplitter {
            theta: FRAC_PI_4,
            phi1: PI,
            phi2: g,
            phi3: 0.0,
        },
    )
}

/// Routed pair of [`hand_solution`]:
/// `[[λ₋,0,0,μ],[0,λ₋,μ,0],[0,μ,λ₊,0],[μ,0,0,λ₊]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareClosedForm {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub mu: f64,
}

impl SquareClosedForm {
    pub fn matrix(&self) -> DMatrix<f64> {
        let (lm, lp, m) = (self.lambda_minus, self.lambda_plus, self.mu);
        DMatrix::from_row_slice(
            4,
            4,
            &[lm, 0.0, 0.0, m, 0.0, lm, m, 0.0, 0.0, m, lp, 0.0, m, 0.0, 0.0, lp],
        )
    }
}

/// `λ± = ((5 ± √5) s² + (5 ∓ √5)) / (10 s)`, `μ = (s² - 1) / (√5 s)`.
pub fn square_closed_form(sq: SqueezingSpec) -> SquareClosedForm {
    let s = sq.s();
    let r5 = 5f64.sqrt();
    SquareClosedForm {
        lambda_minus: ((5.0 - r5) * s * s + (5.0 + r5)) / (10.0 * s),
        lambda_plus: ((5.0 + r5) * s * s + (5.0 - r5)) / (10.0 * s),
        mu: (s * s - 1.0) / (r5 * s),
    }
}

/// Mixing angle solving `sin θ cos θ sin φ1 + cos 2θ = 0`, i.e.
/// `θ = ½ arccot(-sin φ1 / 2)` with `arccot` valued in `(0, π)`.
pub fn theta_condition(phi1: f64) -> f64 {
    0.5 * (std::f64::consts::FRAC_PI_2 - (-phi1.sin() / 2.0).atan())
}

/// `(Var(Q0) - λ, Cov(Q0, P0))` after A's beam splitter with the angle from
/// [`theta_condition`]. Only provider A's transformation enters.
pub fn square_phase_residuals(sq: SqueezingSpec, phi1: f64, phi2: f64) -> Result<(f64, f64)> {
    let a = BeamSplitter {
        theta: theta_condition(phi1),
        phi1,
        phi2,
        phi3: 0.0,
    };
    let id = BeamSplitter {
        theta: 0.0,
        phi1: 0.0,
        phi2: 0.0,
        phi3: 0.0,
    };
    let g = square_oracle(sq, &a, &id)?;
    Ok((g.matrix()[(0, 0)] - sq.lambda(), g.matrix()[(0, 4)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub phi1: f64,
    pub phi2: f64,
    pub var_residual: f64,
    pub cov_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// `min over the grid of max(|Var - λ|, |Cov|)`.
    pub min_max_residual: f64,
    pub argmin: ScanPoint,
    pub points: Vec<ScanPoint>,
}

/// Evaluates [`square_phase_residuals`] on a `steps x steps` grid over `[0, 2π]²`
/// (endpoints included).
pub fn square_phase_scan(sq: SqueezingSpec, steps: usize) -> Result<ScanResult> {
    let tau = std::f64::consts::TAU;
    let at = |k: usize| {
        if steps > 1 {
            tau * k as f64 / (steps - 1) as f64
        } else {
            0.0
        }
    };
    let mut points = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            let (phi1, phi2) = (at(i), at(j));
            let (var_residual, cov_residual) = square_phase_residuals(sq, phi1, phi2)?;
            points.push(ScanPoint {
                phi1,
                phi2,
                var_residual,
                cov_residual,
            });
        }
    }
    let score = |p: &ScanPoint| p.var_residual.abs().max(p.cov_residual.abs());
    let argmin = *points
        .iter()
        .min_by(|a, b| score(a).total_cmp(&score(b)))
        .ok_or_else(|| crate::Error::InvalidParameters("scan needs at least one step".into()))?;
    Ok(ScanResult {
        min_max_residual: score(&argmin),
        argmin,
        points,
    })
}
