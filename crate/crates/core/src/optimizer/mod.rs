//! Searching provider-local unitaries that route an EPR pair.
//!
//! The objective for a pair `(m_A, m_B)` is
//!
//! ```text
//! f = ‖ideal_rows - routing_rows(S Γ Sᵀ)‖_F + (1 - γ_pair) / 2
//! ```
//!
//! with `S` the embedding of the two provider unitaries and `γ_pair` the
//! purity of the routed two-mode block.

mod cma;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use cma::{
    minimize, recombination_weights, CmaConfig, GenerationReport, HistoryEntry, Minimization, OptimizerState,
    StopReason, Strategy,
};

use crate::error::{Error, Result};
use crate::gaussian::{self, build_cluster, CovarianceMatrix, SqueezingSpec};
use crate::linalg;
use crate::netgen::{Graph, Provider};
use crate::unitaries::{local_unitary, GellMannBasis, UnitaryParams};

/// Below this objective a run counts as ideal routing.
pub const IDEAL_THRESHOLD: f64 = 1e-5;
/// At or above this pair purity a non-ideal run counts as imperfect routing.
pub const PURE_THRESHOLD: f64 = 1.0 - 1e-3;

#[derive(Debug, Clone)]
pub struct RoutingProblem {
    graph: Graph,
    sq: SqueezingSpec,
    m_a: usize,
    m_b: usize,
    gamma: CovarianceMatrix,
    ideal: DMatrix<f64>,
    basis_a: GellMannBasis,
    basis_b: GellMannBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub f_opt: f64,
    pub purity: f64,
    pub frob: f64,
}

impl RoutingProblem {
    /// Routing between `m_a` and `m_b` on the cluster state of `graph`. The
    /// pair may sit on different providers or both on the same one.
    pub fn new(graph: Graph, sq: SqueezingSpec, m_a: usize, m_b: usize) -> Result<Self> {
        let n = graph.n();
        let ideal = gaussian::ideal_rows(n, m_a, m_b, sq)?;
        let (na, nb) = (graph.modes_of(Provider::A).len(), graph.modes_of(Provider::B).len());
        if na == 0 || nb == 0 {
            return Err(Error::InvalidPartition("both providers need at least one mode".into()));
        }
        let gamma = build_cluster(&graph, sq);
        Ok(Self {
            graph,
            sq,
            m_a,
            m_b,
            gamma,
            ideal,
            basis_a: GellMannBasis::new(na),
            basis_b: GellMannBasis::new(nb),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn squeezing(&self) -> SqueezingSpec {
        self.sq
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.m_a, self.m_b)
    }

    pub fn is_internal(&self) -> bool {
        self.graph.provider(self.m_a) == self.graph.provider(self.m_b)
    }

    pub fn initial_state(&self) -> &CovarianceMatrix {
        &self.gamma
    }

    pub fn modes(&self) -> (usize, usize) {
        (self.basis_a.n(), self.basis_b.n())
    }

    /// Search-space dimension `n_A² + n_B²`.
    pub fn dim(&self) -> usize {
        self.basis_a.len() + self.basis_b.len()
    }

    fn symplectic(&self, params: &UnitaryParams) -> Result<DMatrix<f64>> {
        let (na, nb) = self.modes();
        params.validate(na, nb)?;
        let u_a = self.basis_a.to_unitary(&params.eps_a)?;
        let u_b = self.basis_b.to_unitary(&params.eps_b)?;
        Ok(linalg::real_embedding(&local_unitary(
            &u_a,
            &u_b,
            self.graph.partition(),
        )?))
    }

    /// The full transformed state `S Γ Sᵀ`.
    pub fn transformed_state(&self, params: &UnitaryParams) -> Result<CovarianceMatrix> {
        let s = self.symplectic(params)?;
        let out = &s * self.gamma.matrix() * s.transpose();
        CovarianceMatrix::new((&out + out.transpose()) * 0.5)
    }

    /// `(routing rows of S Γ Sᵀ, routed 4x4 pair block)`.
    fn rows(&self, params: &UnitaryParams) -> Result<(DMatrix<f64>, CovarianceMatrix)> {
        let s = self.symplectic(params)?;
        let n = self.graph.n();
        let idx = [self.m_a, self.m_b, self.m_a + n, self.m_b + n];
        let rows = s.select_rows(&idx) * self.gamma.matrix() * s.transpose();
        let block = rows.select_columns(&idx);
        Ok((rows, CovarianceMatrix::new((&block + block.transpose()) * 0.5)?))
    }

    /// The routed pair `(m_A, m_B)` after the local unitaries.
    pub fn routed(&self, params: &UnitaryParams) -> Result<CovarianceMatrix> {
        Ok(self.rows(params)?.1)
    }

    pub fn objective(&self, params: &UnitaryParams) -> Result<ObjectiveValue> {
        let (rows, block) = self.rows(params)?;
        let frob = linalg::frobenius(&(&self.ideal - rows));
        let purity = gaussian::purity(&block).unwrap_or(0.0);
        Ok(ObjectiveValue {
            f_opt: frob + 0.5 * (1.0 - purity),
            purity,
            frob,
        })
    }

    fn objective_flat(&self, x: &[f64]) -> f64 {
        let params = UnitaryParams::from_flat(x, self.basis_a.n());
        self.objective(&params).map(|v| v.f_opt).unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Ideal,
    Imperfect,
    Failed,
}

impl Classification {
    pub fn of(value: &ObjectiveValue) -> Self {
        if value.f_opt <= IDEAL_THRESHOLD {
            Self::Ideal
        } else if value.purity >= PURE_THRESHOLD {
            Self::Imperfect
        } else {
            Self::Failed
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoutingOutcome {
    pub params: UnitaryParams,
    pub value: ObjectiveValue,
    pub routed: CovarianceMatrix,
    pub classification: Classification,
    pub generations: usize,
    pub stop: StopReason,
    pub history: Vec<HistoryEntry>,
}

/// Runs the evolution strategy from the identity unitaries.
pub fn route(problem: &RoutingProblem, cfg: &CmaConfig) -> Result<RoutingOutcome> {
    let x0 = vec![0.0; problem.dim()];
    let run = minimize(|x: &[f64]| problem.objective_flat(x), &x0, cfg)?;
    let params = UnitaryParams::from_flat(&run.best_x, problem.basis_a.n());
    let value = problem.objective(&params)?;
    Ok(RoutingOutcome {
        routed: problem.routed(&params)?,
        classification: Classification::of(&value),
        params,
        value,
        generations: run.generations,
        stop: run.stop,
        history: run.history,
    })
}
