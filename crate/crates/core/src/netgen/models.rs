//! Edge-list builders for the individual topology families.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

type Edges = Vec<(usize, usize)>;

pub(super) fn complete(n: usize) -> Edges {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub(super) fn grid(n: usize, rows: Option<usize>, cols: Option<usize>) -> Result<Edges> {
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) => (r, c),
        (Some(r), None) if r > 0 && n.is_multiple_of(r) => (r, n / r),
        (None, Some(c)) if c > 0 && n.is_multiple_of(c) => (n / c, c),
        (None, None) if n.is_multiple_of(2) => (n / 2, 2),
        _ => {
            return Err(Error::InvalidTopology(format!(
                "cannot lay out {n} vertices as a grid with rows={rows:?}, cols={cols:?}"
            )))
        }
    };
    if rows * cols != n || rows == 0 {
        return Err(Error::InvalidTopology(format!(
            "grid {rows}x{cols} does not hold {n} vertices"
        )));
    }
    let id = |row: usize, col: usize| col * rows + row;
    let mut edges = Vec::new();
    for col in 0..cols {
        for row in 0..rows {
            if row + 1 < rows {
                edges.push((id(row, col), id(row + 1, col)));
            }
            if col + 1 < cols {
                edges.push((id(row, col), id(row, col + 1)));
            }
        }
    }
    Ok(edges)
}

/// Preferential attachment: a clique on the first `m` vertices, then each
/// new vertex links to `m` distinct existing vertices drawn with probability
/// proportional to degree. Yields `m(m-1)/2 + m(n-m)` edges.
pub(super) fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Edges> {
    if m == 0 || m >= n {
        return Err(Error::InvalidTopology(format!(
            "attachment count m = {m} must satisfy 1 <= m < n = {n}"
        )));
    }
    let mut edges = complete(m);
    // Each vertex appears once per incident edge end.
    let mut endpoints: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
    for v in m..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        if endpoints.is_empty() {
            // m = 1 and the seed vertex is still isolated.
            targets.push(0);
        }
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Ok(edges)
}

/// Duplication-divergence growth from a single edge: a uniformly chosen
/// vertex is copied and each of its links is inherited with probability `p`.
/// Copies that inherit nothing are discarded.
pub(super) fn duplication_divergence(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Edges> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidTopology(format!(
            "retention probability p = {p} must lie in (0, 1]"
        )));
    }
    const MAX_REJECTIONS: usize = 100_000;
    let mut adj: Vec<Vec<usize>> = vec![vec![1], vec![0]];
    let mut rejections = 0;
    while adj.len() < n {
        let v = adj.len();
        let src = rng.random_range(0..v);
        let inherited: Vec<usize> = adj[src].iter().copied().filter(|_| rng.random::<f64>() < p).collect();
        if inherited.is_empty() {
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(Error::InvalidTopology(format!(
                    "duplication-divergence with p = {p} stalled"
                )));
            }
            continue;
        }
        for &w in &inherited {
            adj[w].push(v);
        }
        adj.push(inherited);
    }
    Ok(adj
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect())
}
