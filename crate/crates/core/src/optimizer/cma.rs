//! A `(μ/μ_w, λ)` covariance matrix adaptation evolution strategy.
//!
//! Per generation, with `B = R Λ^{1/2}` from the eigendecomposition of `C`:
//!
//! ```text
//! x_k   = m + σ B z_k,                 z_k ~ N(0, I)
//! m'    = Σ_{k≤μ} w_k x_{k:λ}
//! p_c'  = (1 - c_c) p_c + sqrt(c_c (2 - c_c) μ_eff) B ⟨z⟩
//! C'    = (1 - c_cov) C + (c_cov / μ_eff) p_c' p_c'ᵀ
//!         + c_cov (1 - 1/μ_eff) Σ w_k (B z_k)(B z_k)ᵀ
//! p_σ'  = (1 - c_σ) p_σ + sqrt(c_σ (2 - c_σ) μ_eff) R ⟨z⟩
//! σ'    = σ exp((c_σ / d_σ)(‖p_σ'‖ / χ_D - 1))
//! ```
//!
//! where `⟨z⟩ = Σ w_k z_{k:λ}` and `χ_D = √D (1 - 1/(4D) + 1/(21D²))`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CmaConfig {
    /// Offspring per generation; `round(4 + ln D)` (at least 4) when unset.
    pub lambda_off: Option<usize>,
    /// Parents; `floor(λ / 2)` when unset.
    pub mu_par: Option<usize>,
    pub max_generations: usize,
    pub f_target: f64,
    pub sigma0: f64,
    /// Stop when the best value improved by less than `stagnation_tol` over
    /// this many generations. Zero disables the rule.
    pub stagnation_window: usize,
    pub stagnation_tol: f64,
    /// Generations between eigendecompositions of `C`.
    pub eigen_interval: usize,
    pub seed: u64,
}

impl Default for CmaConfig {
    fn default() -> Self {
        Self {
            lambda_off: None,
            mu_par: None,
            max_generations: 20_000,
            f_target: 1e-8,
            sigma0: 0.5,
            stagnation_window: 2_000,
            stagnation_tol: 1e-12,
            eigen_interval: 1,
            seed: 0,
        }
    }
}

impl CmaConfig {
    /// Refreshes the eigendecomposition every `max(1, D/10)` generations.
    pub fn lazy_eigen(mut self, dim: usize) -> Self {
        self.eigen_interval = (dim / 10).max(1);
        self
    }
}

/// Learning rates and weights derived from the dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    pub dim: usize,
    pub lambda_off: usize,
    pub mu_par: usize,
    pub weights: Vec<f64>,
    pub mu_eff: f64,
    pub c_c: f64,
    pub c_cov: f64,
    pub c_sigma: f64,
    pub d_sigma: f64,
    pub chi: f64,
}

impl Strategy {
    pub fn new(dim: usize, cfg: &CmaConfig) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameters("search dimension must be positive".into()));
        }
        let d = dim as f64;
        let lambda_off = cfg
            .lambda_off
            .unwrap_or_else(|| ((4.0 + d.ln()).round() as usize).max(4));
        let mu_par = cfg.mu_par.unwrap_or(lambda_off / 2);
        if lambda_off < 2 || mu_par == 0 || mu_par > lambda_off {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= mu ({mu_par}) <= lambda ({lambda_off}), lambda >= 2"
            )));
        }
        let weights = recombination_weights(mu_par);
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let c_sigma = (mu_eff + 2.0) / (d + mu_eff + 3.0);
        Ok(Self {
            dim,
            lambda_off,
            mu_par,
            weights,
            mu_eff,
            c_c: 4.0 / (d + 4.0),
            c_cov: 2.0 / (d + std::f64::consts::SQRT_2).powi(2),
            c_sigma,
            d_sigma: 1.0 + c_sigma,
            chi: d.sqrt() * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d)),
        })
    }
}

/// `w_k = ln((μ+1)/k) / Σ_j ln((μ+1)/j)`.
pub fn recombination_weights(mu: usize) -> Vec<f64> {
    let raw: Vec<f64> = (1..=mu).map(|k| ((mu as f64 + 1.0) / k as f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Search state of one run.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub mean: DVector<f64>,
    pub sigma: f64,
    pub cov: DMatrix<f64>,
    pub p_c: DVector<f64>,
    pub p_sigma: DVector<f64>,
    /// Eigenvectors of `cov` (columns).
    pub basis: DMatrix<f64>,
    /// Eigenvalues of `cov`.
    pub scales: DVector<f64>,
    pub generation: usize,
    pub best_x: DVector<f64>,
    pub best_f: f64,
    rng: ChaCha8Rng,
}

/// Outcome of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationReport {
    pub generation: usize,
    pub best_f: f64,
    pub sigma: f64,
}

impl OptimizerState {
    pub fn new(x0: &[f64], cfg: &CmaConfig) -> Result<Self> {
        if !(cfg.sigma0.is_finite() && cfg.sigma0 > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "sigma0 must be positive, got {}",
                cfg.sigma0
            )));
        }
        if cfg.eigen_interval == 0 {
            return Err(Error::InvalidParameters("eigen_interval must be at least 1".into()));
        }
        let d = x0.len();
        Ok(Self {
            mean: DVector::from_column_slice(x0),
            sigma: cfg.sigma0,
            cov: DMatrix::identity(d, d),
            p_c: DVector::zeros(d),
            p_sigma: DVector::zeros(d),
            basis: DMatrix::identity(d, d),
            scales: DVector::from_element(d, 1.0),
            generation: 0,
            best_x: DVector::from_column_slice(x0),
            best_f: f64::INFINITY,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    /// Runs one generation. `f` may be evaluated in parallel; ranking and all
    /// updates follow offspring order, so results do not depend on threads.
    pub fn step<F>(&mut self, strategy: &Strategy, cfg: &CmaConfig, f: &F) -> Result<GenerationReport>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let d = strategy.dim;
        let bd = DMatrix::from_fn(d, d, |i, j| self.basis[(i, j)] * self.scales[j].sqrt());
        let zs: Vec<DVector<f64>> = (0..strategy.lambda_off)
            .map(|_| DVector::from_fn(d, |_, _| StandardNormal.sample(&mut self.rng)))
            .collect();
        let ys: Vec<DVector<f64>> = zs.iter().map(|z| &bd * z).collect();
        let xs: Vec<DVector<f64>> = ys.iter().map(|y| &self.mean + y * self.sigma).collect();
        if xs.iter().any(|x| x.iter().any(|v| !v.is_finite())) {
            return Err(Error::Divergence {
                generation: self.generation + 1,
                reason: "non-finite offspring".into(),
            });
        }
        let fs = evaluate(&xs, f);
        if fs.contains(&f64::NEG_INFINITY) {
            return Err(Error::Divergence {
                generation: self.generation + 1,
                reason: "objective is unbounded below".into(),
            });
        }

        let mut order: Vec<usize> = (0..strategy.lambda_off).collect();
        order.sort_by(|&a, &b| fs[a].total_cmp(&fs[b]).then(a.cmp(&b)));
        if fs[order[0]] < self.best_f {
            self.best_f = fs[order[0]];
            self.best_x = xs[order[0]].clone();
        }

        let elite = &order[..strategy.mu_par];
        let mut z_mean = DVector::zeros(d);
        let mut new_mean = DVector::zeros(d);
        for (w, &k) in strategy.weights.iter().zip(elite) {
            z_mean += &zs[k] * *w;
            new_mean += &xs[k] * *w;
        }
        self.mean = new_mean;

        let norm = strategy.mu_eff.sqrt();
        self.p_c =
            &self.p_c * (1.0 - strategy.c_c) + (&bd * &z_mean) * ((strategy.c_c * (2.0 - strategy.c_c)).sqrt() * norm);
        self.p_sigma = &self.p_sigma * (1.0 - strategy.c_sigma)
            + (&self.basis * &z_mean) * ((strategy.c_sigma * (2.0 - strategy.c_sigma)).sqrt() * norm);

        let mut rank_mu = DMatrix::zeros(d, d);
        for (w, &k) in strategy.weights.iter().zip(elite) {
            rank_mu += &ys[k] * ys[k].transpose() * *w;
        }
        let cov = &self.cov * (1.0 - strategy.c_cov)
            + &self.p_c * self.p_c.transpose() * (strategy.c_cov / strategy.mu_eff)
            + rank_mu * (strategy.c_cov * (1.0 - 1.0 / strategy.mu_eff));
        self.cov = (&cov + cov.transpose()) * 0.5;
        self.sigma *= ((strategy.c_sigma / strategy.d_sigma) * (self.p_sigma.norm() / strategy.chi - 1.0)).exp();
        self.generation += 1;

        if self.cov.iter().any(|x| !x.is_finite())
            || !self.sigma.is_finite()
            || self.mean.iter().any(|x| !x.is_finite())
        {
            return Err(Error::Divergence {
                generation: self.generation,
                reason: "non-finite search distribution".into(),
            });
        }
        if self.generation.is_multiple_of(cfg.eigen_interval) {
            self.refresh_eigen()?;
        }
        Ok(GenerationReport {
            generation: self.generation,
            best_f: self.best_f,
            sigma: self.sigma,
        })
    }

    fn refresh_eigen(&mut self) -> Result<()> {
        let (values, vectors) = linalg::sym_eigen(&self.cov);
        let top = values.last().copied().unwrap_or(1.0);
        if !(top > 0.0) {
            return Err(Error::Divergence {
                generation: self.generation,
                reason: "search covariance lost positive definiteness".into(),
            });
        }
        let floor = top * 1e-20;
        self.scales = DVector::from_iterator(values.len(), values.into_iter().map(|v| v.max(floor)));
        self.basis = vectors;
        Ok(())
    }
}

#[cfg(feature = "parallel")]
fn evaluate<F: Fn(&[f64]) -> f64 + Sync>(xs: &[DVector<f64>], f: &F) -> Vec<f64> {
    use rayon::prelude::*;
    xs.par_iter().map(|x| sanitize(f(x.as_slice()))).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<F: Fn(&[f64]) -> f64 + Sync>(xs: &[DVector<f64>], f: &F) -> Vec<f64> {
    xs.iter().map(|x| sanitize(f(x.as_slice()))).collect()
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Target,
    MaxGenerations,
    Stagnation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub generation: usize,
    pub best_f: f64,
    pub sigma_g: f64,
}

#[derive(Debug, Clone)]
pub struct Minimization {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub generations: usize,
    pub stop: StopReason,
    pub history: Vec<HistoryEntry>,
}

/// Minimizes `f` from `x0` until a stop rule fires.
pub fn minimize<F>(f: F, x0: &[f64], cfg: &CmaConfig) -> Result<Minimization>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let strategy = Strategy::new(x0.len(), cfg)?;
    let mut state = OptimizerState::new(x0, cfg)?;
    let mut history = Vec::new();
    let mut anchor = (0usize, f64::INFINITY);
    let stop = loop {
        let report = state.step(&strategy, cfg, &f)?;
        history.push(HistoryEntry {
            generation: report.generation,
            best_f: report.best_f,
            sigma_g: report.sigma,
        });
        if report.best_f <= cfg.f_target {
            break StopReason::Target;
        }
        if report.generation >= cfg.max_generations {
            break StopReason::MaxGenerations;
        }
        if anchor.1 - report.best_f > cfg.stagnation_tol || !anchor.1.is_finite() {
            anchor = (report.generation, report.best_f);
        } else if cfg.stagnation_window > 0 && report.generation - anchor.0 >= cfg.stagnation_window {
            break StopReason::Stagnation;
        }
    };
    Ok(Minimization {
        best_x: state.best_x.iter().copied().collect(),
        best_f: state.best_f,
        generations: state.generation,
        stop,
        history,
    })
}
