//! Browser bindings. Every export takes and returns JSON strings; the plain
//! `*_json` functions hold the logic so they can be tested natively.

use cvrouter_core::criteria::{check_bipartite, square_phase_scan, SpectrumReport};
use cvrouter_core::gaussian::SqueezingSpec;
use cvrouter_core::netgen::{generate, select_scenario_pair, PartitionPolicy, Scenario, TopologyKind, TopologySpec};
use cvrouter_core::optimizer::{route, Classification, CmaConfig, RoutingProblem};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Largest graph the page will route; larger searches stall the tab.
pub const MAX_ROUTE_VERTICES: usize = 12;
pub const MAX_ROUTE_GENERATIONS: usize = 5000;
pub const MAX_SCAN_STEPS: usize = 400;

#[derive(Debug, Clone, Deserialize)]
pub struct GraphRequest {
    pub topology: TopologyKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    pub s: f64,
}

impl GraphRequest {
    fn graph(&self) -> Result<cvrouter_core::netgen::Graph, String> {
        generate(&TopologySpec::new(self.topology.clone(), self.n, self.seed))
            .and_then(|g| g.bipartition(&PartitionPolicy::HalfByIndex))
            .map_err(|e| e.to_string())
    }

    fn squeezing(&self) -> Result<SqueezingSpec, String> {
        SqueezingSpec::new(self.s).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumResponse {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub partition_a: Vec<usize>,
    pub report: SpectrumReport,
}

pub fn spectrum_json(request: &str) -> Result<String, String> {
    let req: GraphRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let g = req.graph()?;
    let report = check_bipartite(&g, req.squeezing()?).map_err(|e| e.to_string())?;
    let response = SpectrumResponse {
        n: g.n(),
        edges: g.edges(),
        partition_a: g.modes_of(cvrouter_core::netgen::Provider::A),
        report,
    };
    serde_json::to_string(&response).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct ScanResponse {
    pub steps: usize,
    pub min_max_residual: f64,
    pub argmin: [f64; 2],
    /// `max(|Var - λ|, |Cov|)` row-major with `φ1` along rows.
    pub grid: Vec<f64>,
}

pub fn square_scan_json(s: f64, steps: usize) -> Result<String, String> {
    if !(2..=MAX_SCAN_STEPS).contains(&steps) {
        return Err(format!("steps must lie in 2..={MAX_SCAN_STEPS}"));
    }
    let sq = SqueezingSpec::new(s).map_err(|e| e.to_string())?;
    let scan = square_phase_scan(sq, steps).map_err(|e| e.to_string())?;
    let grid = scan
        .points
        .iter()
        .map(|p| p.var_residual.abs().max(p.cov_residual.abs()))
        .collect();
    let response = ScanResponse {
        steps,
        min_max_residual: scan.min_max_residual,
        argmin: [scan.argmin.phi1, scan.argmin.phi2],
        grid,
    };
    serde_json::to_string(&response).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Deserialize)]
pub struct RouteRequest {
    #[serde(flatten)]
    pub graph: GraphRequest,
    #[serde(default)]
    pub pair: Option<(usize, usize)>,
    #[serde(default = "default_generations")]
    pub max_generations: usize,
}

fn default_generations() -> usize {
    3000
}

#[derive(Debug, Serialize)]
pub struct RouteResponse {
    pub pair: (usize, usize),
    pub classification: Classification,
    pub f_opt: f64,
    pub purity: f64,
    pub generations: usize,
    pub routed: Vec<Vec<f64>>,
    pub history: Vec<f64>,
}

pub fn route_json(request: &str) -> Result<String, String> {
    let req: RouteRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    if req.graph.n > MAX_ROUTE_VERTICES {
        return Err(format!("the demo routes at most {MAX_ROUTE_VERTICES} vertices"));
    }
    let g = req.graph.graph()?;
    let pair = match req.pair {
        Some(p) => p,
        None => select_scenario_pair(&g, Scenario::II).map_err(|e| e.to_string())?,
    };
    let problem = RoutingProblem::new(g, req.graph.squeezing()?, pair.0, pair.1).map_err(|e| e.to_string())?;
    let cfg = CmaConfig {
        max_generations: req.max_generations.clamp(1, MAX_ROUTE_GENERATIONS),
        seed: req.graph.seed,
        ..Default::default()
    };
    let out = route(&problem, &cfg).map_err(|e| e.to_string())?;
    let response = RouteResponse {
        pair,
        classification: out.classification,
        f_opt: out.value.f_opt,
        purity: out.value.purity,
        generations: out.generations,
        routed: out
            .routed
            .matrix()
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
        history: out.history.iter().map(|h| h.best_f).collect(),
    };
    serde_json::to_string(&response).map_err(|e| e.to_string())
}

/// Provider-A spectrum and routing verdicts for a generated graph.
#[wasm_bindgen]
pub fn spectrum(request: &str) -> Result<String, JsError> {
    spectrum_json(request).map_err(|e| JsError::new(&e))
}

/// Impossibility scan over the square network's beam-splitter phases.
#[wasm_bindgen(js_name = squareScan)]
pub fn square_scan(s: f64, steps: usize) -> Result<String, JsError> {
    square_scan_json(s, steps).map_err(|e| JsError::new(&e))
}

/// Evolution-strategy routing on a small graph, with its convergence trace.
#[wasm_bindgen(js_name = routePair)]
pub fn route_pair(request: &str) -> Result<String, JsError> {
    route_json(request).map_err(|e| JsError::new(&e))
}
