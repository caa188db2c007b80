//! File formats: graph JSON, covariance CSV, parameter and outcome JSON,
//! history and histogram CSV.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::criteria::{HistogramBin, SpectralHistogram};
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::netgen::{Graph, PartitionPolicy, Provider};
use crate::optimizer::{Classification, HistoryEntry, ObjectiveValue, StopReason};
use crate::unitaries::UnitaryParams;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub partition_a: Vec<usize>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            partition_a: g.modes_of(Provider::A),
        }
    }
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges.iter().map(|e| (e[0], e[1])))?.bipartition(&PartitionPolicy::Explicit {
            a: self.partition_a.clone(),
        })
    }
}

pub fn write_graph(g: &Graph, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, &GraphFile::from(g))?;
    writeln!(w)?;
    Ok(())
}

pub fn read_graph(r: impl Read) -> Result<Graph> {
    serde_json::from_reader::<_, GraphFile>(r)?.to_graph()
}

/// Row-major CSV after a `# modes=<n> ordering=QP` header line.
pub fn write_covariance(gamma: &CovarianceMatrix, mut w: impl Write) -> Result<()> {
    writeln!(w, "# modes={} ordering=QP", gamma.n_modes())?;
    for row in gamma.matrix().row_iter() {
        let line: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_covariance(r: impl Read) -> Result<CovarianceMatrix> {
    let mut lines = BufReader::new(r).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty covariance file".into()))??;
    let modes: usize = header
        .strip_prefix("# modes=")
        .and_then(|rest| rest.strip_suffix(" ordering=QP"))
        .and_then(|m| m.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad covariance header {header:?}")))?;
    let dim = 2 * modes;
    let mut values = Vec::with_capacity(dim * dim);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
            .collect::<Result<_>>()?;
        if row.len() != dim {
            return Err(Error::Parse(format!("row has {} entries, expected {dim}", row.len())));
        }
        values.extend(row);
    }
    if values.len() != dim * dim {
        return Err(Error::Parse(format!(
            "found {} rows, expected {dim}",
            values.len() / dim.max(1)
        )));
    }
    CovarianceMatrix::new(DMatrix::from_row_slice(dim, dim, &values))
}

pub fn write_params(p: &UnitaryParams, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, p)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_params(r: impl Read) -> Result<UnitaryParams> {
    Ok(serde_json::from_reader(r)?)
}

/// Complex matrix as rows of `[re, im]` pairs.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn complex_rows(u: &DMatrix<Complex64>) -> ComplexRows {
    u.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn from_complex_rows(rows: &ComplexRows) -> Result<DMatrix<Complex64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("complex matrix must be square".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cmaes,
    Constructive,
}

/// Everything a routing run reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeFile {
    pub method: Method,
    pub m_a: usize,
    pub m_b: usize,
    pub s: f64,
    pub classification: Classification,
    pub value: ObjectiveValue,
    pub routed: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<UnitaryParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_a: Option<ComplexRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_b: Option<ComplexRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<StopReason>,
    #[serde(default)]
    pub ambiguous: bool,
}

pub fn write_outcome(o: &OutcomeFile, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, o)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_outcome(r: impl Read) -> Result<OutcomeFile> {
    Ok(serde_json::from_reader(r)?)
}

/// `generation,best_f,sigma_g`.
pub fn write_history(history: &[HistoryEntry], w: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for h in history {
        csv.serialize(h)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_history(r: impl Read) -> Result<Vec<HistoryEntry>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// `bin_low,bin_high,count`.
pub fn write_histogram_csv(bins: &[HistogramBin], w: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for b in bins {
        csv.serialize(b)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_histogram_csv(r: impl Read) -> Result<Vec<HistogramBin>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

pub fn write_histogram_summary(h: &SpectralHistogram, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, h)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_histogram_summary(r: impl Read) -> Result<SpectralHistogram> {
    Ok(serde_json::from_reader(r)?)
}

/// Any serializable value as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}
