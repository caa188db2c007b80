use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cvrouter_core::netgen::{PartitionPolicy, Scenario, TopologyKind, TopologySpec};
use cvrouter_core::optimizer::CmaConfig;
use cvrouter_core::seed::{sub_seed, Stream};
use serde::{Deserialize, Serialize};

/// How the routed pair is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "choice", rename_all = "snake_case")]
pub enum PairChoice {
    Scenario { scenario: Scenario },
    Explicit { m_a: usize, m_b: usize },
}

impl Default for PairChoice {
    fn default() -> Self {
        Self::Scenario { scenario: Scenario::II }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HistogramConfig {
    pub graphs: usize,
    pub bins: usize,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        Self { graphs: 100, bins: 50 }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub topology: TopologyKind,
    pub n: usize,
    pub s: f64,
    pub partition: PartitionPolicy,
    pub pair: PairChoice,
    pub optimizer: CmaConfig,
    pub histogram: HistogramConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            topology: TopologyKind::grid(),
            n: 6,
            s: 2.0,
            partition: PartitionPolicy::HalfByIndex,
            pair: PairChoice::default(),
            optimizer: CmaConfig::default(),
            histogram: HistogramConfig::default(),
            output_dir: PathBuf::from("."),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
            }
        }
    }

    /// Topology spec with the seed drawn from the topology sub-stream.
    pub fn topology_spec(&self) -> TopologySpec {
        TopologySpec::new(self.topology.clone(), self.n, sub_seed(self.seed, Stream::Topology))
    }

    /// Optimizer config with the seed drawn from the optimizer sub-stream.
    pub fn optimizer_config(&self) -> CmaConfig {
        CmaConfig {
            seed: sub_seed(self.seed, Stream::Optimizer),
            ..self.optimizer.clone()
        }
    }
}

/// Parses the `--topology` flag together with its shape parameters.
pub fn topology_from_flag(
    name: &str,
    rows: Option<usize>,
    cols: Option<usize>,
    m: Option<usize>,
    p: Option<f64>,
) -> Result<TopologyKind> {
    Ok(match name {
        "grid" => TopologyKind::Grid { rows, cols },
        "complete" | "full" => TopologyKind::Complete,
        "ba" | "barabasi-albert" => TopologyKind::BarabasiAlbert { m: m.unwrap_or(2) },
        "as" | "internet-as" => TopologyKind::InternetAs,
        "dd" | "pp" | "duplication-divergence" => TopologyKind::DuplicationDivergence { p: p.unwrap_or(0.4) },
        other => bail!("unknown topology {other:?}; expected grid, complete, ba, as or dd"),
    })
}

/// Parses `a,b` into a pair of vertex ids.
pub fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text.split_once(',').context("pair must look like A,B")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}
