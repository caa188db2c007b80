//! Network topologies shared by the two providers.
//!
//! Vertices are numbered `0..n`. Every [`Graph`] carries a provider label per
//! vertex; generated graphs start with the `half_by_index` split, which for
//! grids coincides with the left/right rail split.

mod as_graph;
mod models;

use std::collections::{BTreeSet, VecDeque};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on reseeding attempts for stochastic models.
pub const MAX_RETRIES: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provider {
    A,
    B,
}

/// Undirected, unweighted simple graph with a bipartition between providers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    partition: Vec<Provider>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self loops
    /// and out-of-range endpoints are rejected. The partition defaults to
    /// `half_by_index`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTopology("graph must have at least one vertex".into()));
        }
        let mut sets = vec![BTreeSet::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidTopology(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidTopology(format!("self loop at vertex {i}")));
            }
            sets[i].insert(j);
            sets[j].insert(i);
        }
        Ok(Self {
            neighbors: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            partition: half_by_index(n),
        })
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (i, nb) in self.neighbors.iter().enumerate() {
            for &j in nb {
                a[(i, j)] = 1.0;
            }
        }
        a
    }

    pub fn partition(&self) -> &[Provider] {
        &self.partition
    }

    pub fn provider(&self, v: usize) -> Provider {
        self.partition[v]
    }

    /// Vertices held by `p`, ascending. This is also the local mode order
    /// used for that provider's unitary.
    pub fn modes_of(&self, p: Provider) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.partition[v] == p).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(Option::is_some)
    }

    /// BFS hop distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Replaces the provider labels.
    pub fn bipartition(mut self, policy: &PartitionPolicy) -> Result<Self> {
        let n = self.n();
        self.partition = match policy {
            PartitionPolicy::HalfByIndex => half_by_index(n),
            PartitionPolicy::Explicit { a } => {
                let mut labels = vec![Provider::B; n];
                for &v in a {
                    if v >= n {
                        return Err(Error::InvalidPartition(format!("vertex {v} out of range for n = {n}")));
                    }
                    if labels[v] == Provider::A {
                        return Err(Error::InvalidPartition(format!("vertex {v} listed twice")));
                    }
                    labels[v] = Provider::A;
                }
                if n >= 2 && (a.is_empty() || a.len() == n) {
                    return Err(Error::InvalidPartition(
                        "both providers need at least one vertex".into(),
                    ));
                }
                labels
            }
        };
        Ok(self)
    }
}

fn half_by_index(n: usize) -> Vec<Provider> {
    let cut = n.div_ceil(2);
    (0..n)
        .map(|v| if v < cut { Provider::A } else { Provider::B })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum PartitionPolicy {
    /// Vertices `0..ceil(n/2)` go to provider A.
    #[default]
    HalfByIndex,
    /// The listed vertices go to provider A, the rest to B.
    Explicit { a: Vec<usize> },
}

/// Model family plus its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologyKind {
    /// Rectangular lattice without periodic boundary, numbered column-major
    /// so that `half_by_index` splits it into left and right halves. The
    /// default shape for `n = 2k` is `k` rows by 2 columns (a ladder, one
    /// rail per provider).
    Grid {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cols: Option<usize>,
    },
    Complete,
    BarabasiAlbert {
        #[serde(default = "default_ba_m")]
        m: usize,
    },
    InternetAs,
    DuplicationDivergence {
        #[serde(default = "default_dd_p")]
        p: f64,
    },
    Explicit {
        edges: Vec<(usize, usize)>,
    },
}

fn default_ba_m() -> usize {
    2
}

fn default_dd_p() -> f64 {
    0.4
}

impl TopologyKind {
    pub fn grid() -> Self {
        Self::Grid { rows: None, cols: None }
    }

    pub fn barabasi_albert() -> Self {
        Self::BarabasiAlbert { m: default_ba_m() }
    }

    pub fn duplication_divergence() -> Self {
        Self::DuplicationDivergence { p: default_dd_p() }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(
            self,
            Self::BarabasiAlbert { .. } | Self::InternetAs | Self::DuplicationDivergence { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    #[serde(flatten)]
    pub kind: TopologyKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl TopologySpec {
    pub fn new(kind: TopologyKind, n: usize, seed: u64) -> Self {
        Self { kind, n, seed }
    }
}

/// Builds the graph described by `spec`; see [`generate_counted`].
pub fn generate(spec: &TopologySpec) -> Result<Graph> {
    generate_counted(spec).map(|(g, _)| g)
}

/// Builds the graph and reports how many reseeds were needed. Stochastic
/// models are regenerated with seed `seed + attempt` until connected, at most
/// [`MAX_RETRIES`] times.
pub fn generate_counted(spec: &TopologySpec) -> Result<(Graph, u32)> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::InvalidTopology(format!("need n >= 2, got {n}")));
    }
    let edges = match &spec.kind {
        TopologyKind::Grid { rows, cols } => models::grid(n, *rows, *cols)?,
        TopologyKind::Complete => models::complete(n),
        TopologyKind::Explicit { edges } => edges.clone(),
        kind => {
            for attempt in 0..=MAX_RETRIES {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(u64::from(attempt)));
                let edges = match kind {
                    TopologyKind::BarabasiAlbert { m } => models::barabasi_albert(n, *m, &mut rng)?,
                    TopologyKind::DuplicationDivergence { p } => models::duplication_divergence(n, *p, &mut rng)?,
                    TopologyKind::InternetAs => as_graph::internet_as(n, &mut rng)?,
                    _ => unreachable!("deterministic kinds handled above"),
                };
                let g = Graph::from_edges(n, edges)?;
                if g.is_connected() {
                    return Ok((g, attempt));
                }
            }
            return Err(Error::Disconnected { retries: MAX_RETRIES });
        }
    };
    Ok((Graph::from_edges(n, edges)?, 0))
}

/// Client placement scenarios for complex topologies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Hub on A, lowest-degree vertex on B.
    I,
    /// Pair at maximum graph distance across the partition.
    II,
    /// Lowest-degree vertices on both sides.
    III,
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            "III" | "3" => Ok(Self::III),
            other => Err(Error::Parse(format!("unknown scenario {other:?}"))),
        }
    }
}

/// Picks `(m_a, m_b)` with `m_a` on provider A and `m_b` on provider B. Ties
/// go to the lowest vertex index.
pub fn select_scenario_pair(g: &Graph, scenario: Scenario) -> Result<(usize, usize)> {
    let a = g.modes_of(Provider::A);
    let b = g.modes_of(Provider::B);
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidPartition(
            "both providers need at least one vertex".into(),
        ));
    }
    // min_by_key / max_by_key keep the first / last extremum respectively.
    let min_degree = |set: &[usize]| *set.iter().min_by_key(|&&v| g.degree(v)).expect("non-empty");
    let max_degree = |set: &[usize]| *set.iter().rev().max_by_key(|&&v| g.degree(v)).expect("non-empty");
    match scenario {
        Scenario::I => Ok((max_degree(&a), min_degree(&b))),
        Scenario::III => Ok((min_degree(&a), min_degree(&b))),
        Scenario::II => {
            let mut best: Option<(usize, usize, usize)> = None;
            for &u in &a {
                let dist = g.distances_from(u);
                for &v in &b {
                    let d = dist[v]
                        .ok_or_else(|| Error::InvalidTopology("scenario II requires a connected graph".into()))?;
                    if best.is_none_or(|(bd, _, _)| d > bd) {
                        best = Some((d, u, v));
                    }
                }
            }
            let (_, u, v) = best.expect("non-empty providers");
            Ok((u, v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: TopologyKind, n: usize, seed: u64) -> TopologySpec {
        TopologySpec::new(kind, n, seed)
    }

    #[test]
    fn complete_graph_is_all_ones_off_diagonal() {
        let g = generate(&spec(TopologyKind::Complete, 4, 0)).unwrap();
        let a = g.adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn two_by_two_grid_is_the_square() {
        let g = generate(&spec(TopologyKind::grid(), 4, 0)).unwrap();
        let expected = [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]];
        let a = g.adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[(i, j)], f64::from(expected[i][j]));
            }
        }
    }

    #[test]
    fn grid_dimensions_are_validated() {
        assert!(generate(&spec(
            TopologyKind::Grid {
                rows: Some(3),
                cols: Some(3)
            },
            8,
            0
        ))
        .is_err());
        assert!(generate(&spec(TopologyKind::grid(), 7, 0)).is_err());
        let g = generate(&spec(
            TopologyKind::Grid {
                rows: Some(3),
                cols: Some(3),
            },
            9,
            0,
        ))
        .unwrap();
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn ladder_edge_count() {
        // k rungs: 2(k - 1) rail edges plus k rungs.
        for k in 1..20 {
            let g = generate(&spec(TopologyKind::grid(), 2 * k, 0)).unwrap();
            assert_eq!(g.edge_count(), 3 * k - 2);
        }
    }

    #[test]
    fn barabasi_albert_edge_count() {
        let g = generate(&spec(TopologyKind::barabasi_albert(), 50, 7)).unwrap();
        assert_eq!(g.n(), 50);
        assert_eq!(g.edge_count(), 97);
    }

    #[test]
    fn too_small_is_rejected() {
        assert!(matches!(
            generate(&spec(TopologyKind::Complete, 1, 0)),
            Err(Error::InvalidTopology(_))
        ));
    }

    #[test]
    fn half_by_index_split() {
        let g = generate(&spec(TopologyKind::Complete, 4, 0)).unwrap();
        assert_eq!(g.modes_of(Provider::A), vec![0, 1]);
        assert_eq!(g.modes_of(Provider::B), vec![2, 3]);
        let g = generate(&spec(TopologyKind::Complete, 5, 0)).unwrap();
        assert_eq!(g.modes_of(Provider::A), vec![0, 1, 2]);
        let big = Graph::from_edges(1000, []).unwrap();
        assert_eq!(big.modes_of(Provider::A).len(), 500);
        assert_eq!(big.modes_of(Provider::B).len(), 500);
    }

    #[test]
    fn explicit_partition() {
        let g = generate(&spec(TopologyKind::Complete, 4, 0))
            .unwrap()
            .bipartition(&PartitionPolicy::Explicit { a: vec![0, 2] })
            .unwrap();
        assert_eq!(g.partition(), &[Provider::A, Provider::B, Provider::A, Provider::B]);
    }

    #[test]
    fn explicit_partition_errors() {
        let g = generate(&spec(TopologyKind::Complete, 4, 0)).unwrap();
        for bad in [vec![0, 0], vec![5], vec![], vec![0, 1, 2, 3]] {
            assert!(matches!(
                g.clone().bipartition(&PartitionPolicy::Explicit { a: bad }),
                Err(Error::InvalidPartition(_))
            ));
        }
    }

    #[test]
    fn scenario_one_picks_hub_and_leaf() {
        // Star centred on 0; A = {0, 1, 2}, B = {3, 4}.
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(select_scenario_pair(&g, Scenario::I).unwrap(), (0, 3));
    }

    #[test]
    fn scenario_two_picks_diameter_pair() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(select_scenario_pair(&g, Scenario::II).unwrap(), (0, 3));
    }

    #[test]
    fn scenario_three_tie_breaks_by_index() {
        let g = generate(&spec(TopologyKind::grid(), 4, 0)).unwrap();
        assert_eq!(select_scenario_pair(&g, Scenario::III).unwrap(), (0, 2));
    }

    #[test]
    fn scenario_two_needs_connectivity() {
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        assert!(select_scenario_pair(&g, Scenario::II).is_err());
    }

    #[test]
    fn topology_spec_json_shape() {
        let s = spec(TopologyKind::barabasi_albert(), 50, 7);
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["kind"], "barabasi_albert");
        assert_eq!(json["m"], 2);
        let back: TopologySpec =
            serde_json::from_value(serde_json::json!({"kind": "duplication_divergence", "n": 30})).unwrap();
        assert_eq!(back.kind, TopologyKind::duplication_divergence());
    }
}
