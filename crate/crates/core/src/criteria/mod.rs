//! Spectral no-go criteria, the constructive route, ensemble statistics and
//! the square-network closed form.
//!
//! For a pure global state both provider blocks share their non-trivial
//! symplectic spectrum. Ideal routing across the providers needs the value
//! `λ = cosh 2r` in the spectrum of a block; routing inside one provider
//! needs the value 1 at least twice in that provider's block.

mod constructive;
mod histogram;
mod square;

use serde::{Deserialize, Serialize};

pub use constructive::{constructive_route, ConstructiveRoute};
pub use histogram::{spectral_histogram, HistogramBin, SpectralHistogram, ENSEMBLE_TOL};
pub use square::{
    hand_solution, interleaved_to_qp, square_closed_form, square_graph, square_interleaved_matrix, square_oracle,
    square_phase_residuals, square_phase_scan, theta_condition, BeamSplitter, ScanPoint, ScanResult, SquareClosedForm,
};

use crate::error::Result;
use crate::gaussian::{build_cluster, symplectic_eigenvalues, CovarianceMatrix, SqueezingSpec};
use crate::netgen::{Graph, Provider};

/// Relative tolerance for spectral membership on deterministic graphs.
pub const SPECTRAL_TOL: f64 = 1e-9;
/// Fraction of `λ` above which a value counts as near `λ`.
pub const NEAR_LAMBDA: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Not excluded by the spectral criterion.
    Possible,
    Impossible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub lambda: f64,
    pub eigenvalues_a: Vec<f64>,
    pub eigenvalues_b: Vec<f64>,
    /// Multiplicity of 1 in provider A's spectrum.
    pub count_one: usize,
    pub count_one_b: usize,
    pub contains_lambda: bool,
    /// Values of provider A at or above `0.99 λ`.
    pub near_lambda_count: usize,
    pub verdict_bipartite: Verdict,
    /// Verdict for a pair inside provider A.
    pub verdict_internal: Verdict,
    pub notes: Vec<String>,
}

pub(crate) fn is_one(v: f64) -> bool {
    (v - 1.0).abs() <= SPECTRAL_TOL
}

pub(crate) fn is_lambda(v: f64, lambda: f64) -> bool {
    (v - lambda).abs() <= SPECTRAL_TOL * lambda
}

/// Symplectic spectrum of one provider's block of the cluster state.
pub fn block_spectrum(gamma: &CovarianceMatrix, g: &Graph, provider: Provider) -> Result<Vec<f64>> {
    symplectic_eigenvalues(&gamma.reduce(&g.modes_of(provider))?)
}

fn report(g: &Graph, sq: SqueezingSpec) -> Result<SpectrumReport> {
    let gamma = build_cluster(g, sq);
    let a = block_spectrum(&gamma, g, Provider::A)?;
    let b = block_spectrum(&gamma, g, Provider::B)?;
    let lambda = sq.lambda();
    let count_one = a.iter().filter(|&&v| is_one(v)).count();
    let count_one_b = b.iter().filter(|&&v| is_one(v)).count();
    let contains_lambda = a.iter().any(|&v| is_lambda(v, lambda));
    let near_lambda_count = a.iter().filter(|&&v| v >= NEAR_LAMBDA * lambda).count();
    let mut notes = Vec::new();
    if count_one == 1 {
        notes.push("provider A has a single unit symplectic eigenvalue; internal routing needs two".into());
    }
    if sq.s() == 1.0 {
        notes.push("no squeezing: λ = 1, so the two criteria coincide".into());
    }
    Ok(SpectrumReport {
        lambda,
        verdict_bipartite: if contains_lambda {
            Verdict::Possible
        } else {
            Verdict::Impossible
        },
        verdict_internal: if count_one >= 2 {
            Verdict::Possible
        } else {
            Verdict::Impossible
        },
        eigenvalues_a: a,
        eigenvalues_b: b,
        count_one,
        count_one_b,
        contains_lambda,
        near_lambda_count,
        notes,
    })
}

/// Spectral report with the cross-provider verdict as the headline.
pub fn check_bipartite(g: &Graph, sq: SqueezingSpec) -> Result<SpectrumReport> {
    report(g, sq)
}

/// Spectral report with the verdict for a pair inside provider A as the
/// headline.
pub fn check_internal(g: &Graph, sq: SqueezingSpec) -> Result<SpectrumReport> {
    report(g, sq)
}
