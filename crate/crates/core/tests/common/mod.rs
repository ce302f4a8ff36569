//! Shared generators and independent oracles for the integration suites.

#![allow(clippy::needless_range_loop)]

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use hfgt::boolmat::{BoolMatrix, BoolTensor};
use hfgt::model::{ModelSpec, Operand, ProcessDef, Resource, ResourceKind, SystemModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bool_matrix(rng: &mut ChaCha8Rng, n_rows: usize, n_cols: usize, density: f64) -> BoolMatrix {
    let mut entries = Vec::new();
    for r in 0..n_rows {
        for c in 0..n_cols {
            if rng.gen_bool(density) {
                entries.push((r, c));
            }
        }
    }
    BoolMatrix::from_entries(n_rows, n_cols, entries).unwrap()
}

pub fn random_subset_of(rng: &mut ChaCha8Rng, m: &BoolMatrix, keep: f64) -> BoolMatrix {
    let entries: Vec<(usize, usize)> = m.iter().filter(|_| rng.gen_bool(keep)).collect();
    BoolMatrix::from_entries(m.n_rows(), m.n_cols(), entries).unwrap()
}

pub fn random_bool_tensor(rng: &mut ChaCha8Rng, dims: &[usize], density: f64) -> BoolTensor {
    let total: usize = dims.iter().product();
    let mut entries = Vec::new();
    for flat in 0..total {
        if rng.gen_bool(density) {
            let mut coord = Vec::with_capacity(dims.len());
            let mut rest = flat;
            for &d in dims {
                coord.push(rest % d);
                rest /= d;
            }
            entries.push(coord);
        }
    }
    BoolTensor::from_entries(dims, entries).unwrap()
}

/// All (inputs, outputs) operand-set pairs over `n_l` operands, shuffled;
/// drawing from this list keeps process signatures distinct.
fn shuffled_signatures(rng: &mut ChaCha8Rng, n_l: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let subsets: Vec<Vec<usize>> = (0..1usize << n_l)
        .map(|mask| (0..n_l).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let mut pairs = Vec::new();
    for ins in &subsets {
        for outs in &subsets {
            // Skip fully inert processes; they model nothing.
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            pairs.push((ins.clone(), outs.clone()));
        }
    }
    pairs.shuffle(rng);
    pairs
}

/// A random model inside the desk-scale bounds: sigma(L) <= 4,
/// sigma(P_gamma) <= 3, sigma(B_S) <= 5, sigma(M) <= 3, sigma(R) <= 8,
/// sigma(P_mu) <= 4, with random sparse capabilities and constraints.
pub fn random_model(rng: &mut ChaCha8Rng) -> SystemModel {
    let n_l = rng.gen_range(1..=4);
    let n_m = rng.gen_range(0..=3);
    let min_b = usize::from(n_m == 0);
    let n_b = rng.gen_range(min_b..=(5 - n_m));
    let n_bs = n_m + n_b;
    let n_h = rng.gen_range(0..=(8 - n_bs).min(3));
    let n_r = n_bs + n_h;

    let mut signatures = shuffled_signatures(rng, n_l);
    let n_pmu = if n_m == 0 {
        0
    } else {
        rng.gen_range(0..=4.min(signatures.len()))
    };
    let transform: Vec<ProcessDef> = (0..n_pmu)
        .map(|j| {
            let (ins, outs) = signatures.pop().unwrap();
            ProcessDef::new(format!("t{j}"), ins, outs)
        })
        .collect();
    let mut signatures_h = shuffled_signatures(rng, n_l);
    let n_pg = rng.gen_range(1..=3.min(signatures_h.len()));
    let holding: Vec<ProcessDef> = (0..n_pg)
        .map(|g| {
            let (ins, outs) = signatures_h.pop().unwrap();
            ProcessDef::new(format!("g{g}"), ins, outs)
        })
        .collect();

    let machines: Vec<Resource> = (0..n_m)
        .map(|i| Resource::new(format!("m{i}"), ResourceKind::Machine))
        .collect();
    let buffers: Vec<Resource> = (0..n_b)
        .map(|i| Resource::new(format!("b{i}"), ResourceKind::IndependentBuffer))
        .collect();
    let transporters: Vec<Resource> = (0..n_h)
        .map(|i| Resource::new(format!("h{i}"), ResourceKind::Transporter))
        .collect();

    let j_m = random_bool_matrix(rng, n_pmu, n_m, 0.5);
    let j_gamma = random_bool_matrix(rng, n_pg, n_r, 0.45);
    let j_h = random_bool_matrix(rng, n_bs * n_bs, n_r, 0.15);
    let k_m = random_subset_of(rng, &j_m, 0.25);
    let j_hbar = hfgt::model::assemble_jhbar(&j_gamma, &j_h).unwrap();
    let k_hbar = random_subset_of(rng, &j_hbar, 0.2);

    SystemModel::new(ModelSpec {
        operands: (0..n_l).map(|i| Operand::new(format!("l{i}"))).collect(),
        machines,
        independent_buffers: buffers,
        transporters,
        transform,
        holding,
        j_m: Some(j_m),
        j_gamma: Some(j_gamma),
        j_h: Some(j_h),
        k_m: Some(k_m),
        k_hbar: Some(k_hbar),
        ..ModelSpec::default()
    })
    .expect("generated model is valid by construction")
}

/// A random model whose holding processes map 1-to-1 onto the operands
/// (holding g moves exactly operand g), asserting the multi-commodity
/// special case.
pub fn random_operand_distinguishing_model(rng: &mut ChaCha8Rng) -> SystemModel {
    let n_l = rng.gen_range(1..=3);
    let n_m = rng.gen_range(0..=2);
    let min_b = usize::from(n_m == 0);
    let n_b = rng.gen_range(min_b..=(4 - n_m));
    let n_bs = n_m + n_b;
    let n_h = rng.gen_range(0..=2);
    let n_r = n_bs + n_h;

    let holding: Vec<ProcessDef> = (0..n_l)
        .map(|g| ProcessDef::new(format!("hold-l{g}"), [g], [g]))
        .collect();
    let machines: Vec<Resource> = (0..n_m)
        .map(|i| Resource::new(format!("m{i}"), ResourceKind::Machine))
        .collect();
    let buffers: Vec<Resource> = (0..n_b)
        .map(|i| Resource::new(format!("b{i}"), ResourceKind::IndependentBuffer))
        .collect();
    let transporters: Vec<Resource> = (0..n_h)
        .map(|i| Resource::new(format!("h{i}"), ResourceKind::Transporter))
        .collect();

    let j_gamma = random_bool_matrix(rng, n_l, n_r, 0.6);
    let j_h = random_bool_matrix(rng, n_bs * n_bs, n_r, 0.25);

    SystemModel::new(ModelSpec {
        operands: (0..n_l).map(|i| Operand::new(format!("l{i}"))).collect(),
        machines,
        independent_buffers: buffers,
        transporters,
        transform: Vec::new(),
        holding,
        j_gamma: Some(j_gamma),
        j_h: Some(j_h),
        holding_is_operand: true,
        ..ModelSpec::default()
    })
    .expect("generated model is valid by construction")
}

/// Brute-force Boolean matrix product: triple loop over dense indices.
pub fn matmul_oracle(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    let mut entries = Vec::new();
    for i in 0..a.n_rows() {
        for k in 0..b.n_cols() {
            let mut any = false;
            for j in 0..a.n_cols() {
                if a.get(i, j) && b.get(j, k) {
                    any = true;
                    break;
                }
            }
            if any {
                entries.push((i, k));
            }
        }
    }
    BoolMatrix::from_entries(a.n_rows(), b.n_cols(), entries).unwrap()
}

/// Directed all-pairs shortest paths by Floyd-Warshall; `None` means
/// unreachable. Distances ignore edge weights (every edge costs 1).
pub fn floyd_warshall(adjacency: &BoolMatrix) -> Vec<Vec<Option<usize>>> {
    let n = adjacency.n_rows();
    let mut dist: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for v in 0..n {
        dist[v][v] = Some(0);
    }
    for (r, c) in adjacency.iter() {
        if r != c {
            dist[r][c] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if let Some(dik) = dist[i][k] {
                for j in 0..n {
                    if let Some(dkj) = dist[k][j] {
                        let candidate = dik + dkj;
                        if dist[i][j].is_none_or(|d| candidate < d) {
                            dist[i][j] = Some(candidate);
                        }
                    }
                }
            }
        }
    }
    dist
}
