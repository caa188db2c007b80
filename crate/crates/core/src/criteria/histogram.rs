//! Ensemble statistics of provider-A symplectic eigenvalues.

use serde::{Deserialize, Serialize};

use super::{block_spectrum, NEAR_LAMBDA};
use crate::error::{Error, Result};
use crate::gaussian::{build_cluster, SqueezingSpec};
use crate::netgen::{generate_counted, Provider, TopologySpec};

/// Absolute tolerance for "equals 1" and "equals λ" in ensembles.
pub const ENSEMBLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralHistogram {
    pub graphs: usize,
    pub n: usize,
    pub s: f64,
    pub lambda: f64,
    pub total: u64,
    pub value_one_pct: f64,
    pub value_lambda_pct: f64,
    pub ge_99_lambda_pct: f64,
    /// Regenerations needed to obtain connected graphs, summed.
    pub retries: u64,
    #[serde(skip)]
    pub bins: Vec<HistogramBin>,
}

struct Member {
    values: Vec<f64>,
    retries: u32,
}

fn member(spec: &TopologySpec, i: usize, sq: SqueezingSpec) -> Result<Member> {
    let mut spec = spec.clone();
    spec.seed = spec.seed.wrapping_add((i as u64) << 20);
    let (g, retries) = generate_counted(&spec)?;
    let values = block_spectrum(&build_cluster(&g, sq), &g, Provider::A)?;
    Ok(Member { values, retries })
}

#[cfg(feature = "parallel")]
fn members(spec: &TopologySpec, graphs: usize, sq: SqueezingSpec) -> Result<Vec<Member>> {
    use rayon::prelude::*;
    (0..graphs).into_par_iter().map(|i| member(spec, i, sq)).collect()
}

#[cfg(not(feature = "parallel"))]
fn members(spec: &TopologySpec, graphs: usize, sq: SqueezingSpec) -> Result<Vec<Member>> {
    (0..graphs).map(|i| member(spec, i, sq)).collect()
}

/// Pools provider-A spectra of `graphs` ensemble members into `bins` equal
/// bins over `[1, λ]`. Member `i` uses seed `spec.seed + (i << 20)`.
pub fn spectral_histogram(
    spec: &TopologySpec,
    graphs: usize,
    sq: SqueezingSpec,
    bins: usize,
) -> Result<SpectralHistogram> {
    if graphs == 0 || bins == 0 {
        return Err(Error::InvalidParameters("need at least one graph and one bin".into()));
    }
    let lambda = sq.lambda();
    let width = (lambda - 1.0) / bins as f64;
    let mut table: Vec<HistogramBin> = (0..bins)
        .map(|k| HistogramBin {
            bin_low: 1.0 + k as f64 * width,
            bin_high: 1.0 + (k + 1) as f64 * width,
            count: 0,
        })
        .collect();
    let (mut total, mut ones, mut lambdas, mut near, mut retries) = (0u64, 0u64, 0u64, 0u64, 0u64);
    for m in members(spec, graphs, sq)? {
        retries += u64::from(m.retries);
        for v in m.values {
            total += 1;
            ones += u64::from((v - 1.0).abs() <= ENSEMBLE_TOL);
            lambdas += u64::from((v - lambda).abs() <= ENSEMBLE_TOL);
            near += u64::from(v >= NEAR_LAMBDA * lambda);
            let k = if width > 0.0 {
                ((v - 1.0) / width).floor().clamp(0.0, (bins - 1) as f64) as usize
            } else {
                0
            };
            table[k].count += 1;
        }
    }
    let pct = |c: u64| 100.0 * c as f64 / total as f64;
    Ok(SpectralHistogram {
        graphs,
        n: spec.n,
        s: sq.s(),
        lambda,
        total,
        value_one_pct: pct(ones),
        value_lambda_pct: pct(lambdas),
        ge_99_lambda_pct: pct(near),
        retries,
        bins: table,
    })
}
