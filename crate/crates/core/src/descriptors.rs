//! Network descriptors over the capability graph.
//!
//! The hetero-functional adjacency matrix is an ordinary directed
//! adjacency matrix, so the standard descriptors apply; their meaning is
//! lifted to whole capabilities. Self-loops (storage-after-storage pairs
//! are common) count toward degree but are excluded from clustering
//! triangles.

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Edges into a node: capabilities that can precede it.
    In,
    /// Edges out of a node: capabilities that can succeed it.
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosenessVariant {
    /// Sum of reciprocal distances to every other reachable node.
    Harmonic,
    /// Reachable count divided by the sum of distances to the reachable
    /// set; 0 when nothing is reachable.
    Classic,
}

fn check_square(adjacency: &BoolMatrix, what: &str) -> Result<usize> {
    if !adjacency.is_square() {
        return Err(Error::InvalidArgument(format!(
            "{what} expects a square adjacency matrix, got {}x{}",
            adjacency.n_rows(),
            adjacency.n_cols()
        )));
    }
    Ok(adjacency.n_rows())
}

fn out_neighbors(adjacency: &BoolMatrix) -> Vec<Vec<usize>> {
    let mut nbrs = vec![Vec::new(); adjacency.n_rows()];
    for (r, c) in adjacency.iter() {
        nbrs[r].push(c);
    }
    nbrs
}

/// In- or out-degree per node; self-loops count once.
pub fn degree(adjacency: &BoolMatrix, direction: Direction) -> Result<Vec<usize>> {
    let n = check_square(adjacency, "degree")?;
    let mut counts = vec![0usize; n];
    for (r, c) in adjacency.iter() {
        match direction {
            Direction::Out => counts[r] += 1,
            Direction::In => counts[c] += 1,
        }
    }
    Ok(counts)
}

/// Closeness centrality over BFS shortest paths on the directed graph.
pub fn closeness(adjacency: &BoolMatrix, variant: ClosenessVariant) -> Result<Vec<f64>> {
    let n = check_square(adjacency, "closeness")?;
    let nbrs = out_neighbors(adjacency);
    let mut values = vec![0.0; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        dist.fill(usize::MAX);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &nbrs[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut reachable = 0usize;
        let mut dist_sum = 0usize;
        let mut harmonic = 0.0;
        for (v, &d) in dist.iter().enumerate() {
            if v != s && d != usize::MAX {
                reachable += 1;
                dist_sum += d;
                harmonic += 1.0 / d as f64;
            }
        }
        values[s] = match variant {
            ClosenessVariant::Harmonic => harmonic,
            ClosenessVariant::Classic => {
                if reachable == 0 {
                    0.0
                } else {
                    reachable as f64 / dist_sum as f64
                }
            }
        };
    }
    Ok(values)
}

fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Eigenvector centrality by power iteration on the in-edge weighting:
/// `x <- (I + A)^T x`, L2-normalized each step. The unit shift leaves the
/// dominant eigenvector unchanged and keeps the iteration from cycling on
/// periodic (e.g. bipartite) graphs. Nonnegative output.
pub fn eigenvector_centrality(
    adjacency: &BoolMatrix,
    tolerance: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = check_square(adjacency, "eigenvector centrality")?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let edges: Vec<(usize, usize)> = adjacency.iter().collect();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        next.copy_from_slice(&x);
        for &(u, v) in &edges {
            next[v] += x[u];
        }
        let norm = l2_norm(&next);
        for v in next.iter_mut() {
            *v /= norm;
        }
        residual = max_abs_diff(&x, &next);
        x.copy_from_slice(&next);
        if residual < tolerance {
            return Ok(x);
        }
    }
    Err(Error::Convergence { max_iter, residual })
}

/// Katz centrality: the fixed point of `x = alpha A^T x + beta 1`,
/// computed iteratively. Requires `alpha` in `(0, 1/spectral radius)`;
/// divergence of the iteration reports an invalid `alpha`.
pub fn katz_centrality(
    adjacency: &BoolMatrix,
    alpha: f64,
    beta: f64,
    tolerance: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = check_square(adjacency, "katz centrality")?;
    if alpha <= 0.0 || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "katz centrality requires finite beta and alpha > 0, got alpha={alpha}, beta={beta}"
        )));
    }
    let edges: Vec<(usize, usize)> = adjacency.iter().collect();
    let mut x = vec![beta; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        next.fill(beta);
        for &(u, v) in &edges {
            next[v] += alpha * x[u];
        }
        if next.iter().any(|v| v.abs() > 1e12) {
            return Err(Error::InvalidArgument(format!(
                "katz iteration diverges: alpha = {alpha} is at or above 1/spectral-radius"
            )));
        }
        let delta = max_abs_diff(&x, &next);
        x.copy_from_slice(&next);
        if delta < tolerance {
            return Ok(x);
        }
    }
    Err(Error::Convergence {
        max_iter,
        residual: f64::NAN,
    })
}

/// Per-node directed clustering coefficients over the loop-free graph,
/// following the directed-triangle taxonomy: cycle, middleman, in, out,
/// and total patterns.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Clustering {
    pub cycle: f64,
    pub middleman: f64,
    pub inward: f64,
    pub outward: f64,
    pub total: f64,
}

#[allow(clippy::needless_range_loop)]
pub fn clustering_directed(adjacency: &BoolMatrix) -> Result<Vec<Clustering>> {
    let n = check_square(adjacency, "directed clustering")?;
    // Dense loop-free copy; triangle counting needs path counts.
    let mut a = vec![vec![0u64; n]; n];
    for (r, c) in adjacency.iter() {
        if r != c {
            a[r][c] = 1;
        }
    }
    let mut d_in = vec![0u64; n];
    let mut d_out = vec![0u64; n];
    let mut d_bil = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            d_out[i] += a[i][j];
            d_in[i] += a[j][i];
            d_bil[i] += a[i][j] * a[j][i];
        }
    }
    let mut out = vec![Clustering::default(); n];
    for i in 0..n {
        let mut t_cyc = 0u64;
        let mut t_mid = 0u64;
        let mut t_in = 0u64;
        let mut t_out = 0u64;
        let mut t_tot = 0u64;
        for j in 0..n {
            for k in 0..n {
                t_cyc += a[i][j] * a[j][k] * a[k][i];
                t_mid += a[i][j] * a[k][j] * a[k][i];
                t_in += a[j][i] * a[j][k] * a[k][i];
                t_out += a[i][j] * a[i][k] * a[k][j];
                let s_ij = a[i][j] + a[j][i];
                let s_jk = a[j][k] + a[k][j];
                let s_ki = a[k][i] + a[i][k];
                t_tot += s_ij * s_jk * s_ki;
            }
        }
        let din = d_in[i] as f64;
        let dout = d_out[i] as f64;
        let dbil = d_bil[i] as f64;
        let dtot = din + dout;
        let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
        out[i] = Clustering {
            cycle: ratio(t_cyc as f64, din * dout - dbil),
            middleman: ratio(t_mid as f64, din * dout - dbil),
            inward: ratio(t_in as f64, din * (din - 1.0)),
            outward: ratio(t_out as f64, dout * (dout - 1.0)),
            total: ratio(t_tot as f64 / 2.0, dtot * (dtot - 1.0) - 2.0 * dbil),
        };
    }
    Ok(out)
}

/// A design-structure-matrix view of the adjacency under a partition:
/// nodes reordered block by block, with intra/inter edge accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct DsmReport {
    /// Number of blocks in the partition.
    pub n_blocks: usize,
    /// Nodes in DSM order (grouped by block, ascending inside a block).
    pub order: Vec<usize>,
    /// The adjacency permuted into DSM order.
    pub reordered: BoolMatrix,
    /// Edge counts per (block, block) pair.
    pub block_edges: Vec<Vec<usize>>,
    pub intra_edges: usize,
    pub inter_edges: usize,
}

fn check_partition(partition: &[usize], n: usize) -> Result<usize> {
    if partition.len() != n {
        return Err(Error::PartitionError(format!(
            "partition covers {} of {n} nodes",
            partition.len()
        )));
    }
    Ok(partition.iter().map(|&b| b + 1).max().unwrap_or(0))
}

pub fn capability_dsm(adjacency: &BoolMatrix, partition: &[usize]) -> Result<DsmReport> {
    let n = check_square(adjacency, "capability DSM")?;
    let n_blocks = check_partition(partition, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (partition[v], v));
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let reordered = BoolMatrix::from_entries(
        n,
        n,
        adjacency.iter().map(|(r, c)| (position[r], position[c])),
    )?;
    let mut block_edges = vec![vec![0usize; n_blocks]; n_blocks];
    let mut intra = 0usize;
    for (r, c) in adjacency.iter() {
        block_edges[partition[r]][partition[c]] += 1;
        if partition[r] == partition[c] {
            intra += 1;
        }
    }
    Ok(DsmReport {
        n_blocks,
        order,
        reordered,
        block_edges,
        intra_edges: intra,
        inter_edges: adjacency.count_ones() - intra,
    })
}

/// Directed Newman modularity of a given partition:
/// `Q = (1/m) sum_ij [A_ij - kout_i*kin_j/m] delta(c_i, c_j)`.
/// Evaluates the partition only; no community detection.
pub fn modularity(adjacency: &BoolMatrix, partition: &[usize]) -> Result<f64> {
    let n = check_square(adjacency, "modularity")?;
    check_partition(partition, n)?;
    let m = adjacency.count_ones() as f64;
    if m == 0.0 {
        return Ok(0.0);
    }
    let k_out = degree(adjacency, Direction::Out)?;
    let k_in = degree(adjacency, Direction::In)?;
    let mut q = 0.0;
    for (r, c) in adjacency.iter() {
        if partition[r] == partition[c] {
            q += 1.0;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if partition[i] == partition[j] {
                q -= k_out[i] as f64 * k_in[j] as f64 / m;
            }
        }
    }
    Ok(q / m)
}

/// One computed metric, ready for reporting: per-node values over the
/// capability axis and/or a scalar summary.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub metric: String,
    pub parameters: Vec<(String, f64)>,
    pub per_node: Option<Vec<f64>>,
    pub scalar: Option<f64>,
}

impl MetricReport {
    pub fn per_node(metric: impl Into<String>, values: Vec<f64>) -> Self {
        MetricReport {
            metric: metric.into(),
            parameters: Vec::new(),
            per_node: Some(values),
            scalar: None,
        }
    }

    pub fn scalar(metric: impl Into<String>, value: f64) -> Self {
        MetricReport {
            metric: metric.into(),
            parameters: Vec::new(),
            per_node: None,
            scalar: Some(value),
        }
    }

    pub fn with_parameter(mut self, name: impl Into<String>, value: f64) -> Self {
        self.parameters.push((name.into(), value));
        self
    }
}
