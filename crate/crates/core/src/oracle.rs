// SPDX-License-Identifier: Apache-2.0

//! Exhaustive reference solvers for small instances. They share no code
//! with the heuristics they check.

use serde::Serialize;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::GateGraph;
use crate::schedule::{Schedule, WorkerPool};

pub const MAX_CUT_VERTICES: usize = 12;
pub const MAX_MODULARITY_VERTICES: usize = 8;
pub const MAX_SCHEDULE_PARTITIONS: usize = 8;
pub const MAX_SCHEDULE_WORKERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult<T, W> {
    pub optimum: T,
    pub witness: W,
    pub size: usize,
}

/// Calls `visit` with every set partition of `0..n` as a restricted growth
/// string.
pub fn for_each_set_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(labels: &mut Vec<usize>, n: usize, blocks: usize, visit: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            visit(labels);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            rec(labels, n, blocks.max(b + 1), visit);
            labels.pop();
        }
    }
    let mut labels = Vec::with_capacity(n);
    rec(&mut labels, n, 0, &mut visit);
}

/// Literal double sum `1/2m Σ_{i,j same block} (A_ij - k_i k_j / 2m)` over a
/// dense adjacency matrix.
pub fn modularity_double_sum(graph: &GateGraph, labels: &[usize]) -> f64 {
    let n = graph.num_vertices();
    let mut a = vec![vec![0f64; n]; n];
    for (i, j, w) in graph.edges() {
        a[i][j] = f64::from(w);
        a[j][i] = f64::from(w);
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Distinct qubits in each block, counted by walking the vertices' qubit
/// labels in gate order and splitting a qubit whenever a gate from another
/// block touches it in between.
pub fn block_widths(graph: &GateGraph, labels: &[usize], blocks: usize) -> Vec<u32> {
    let mut widths = vec![0u32; blocks];
    let mut last_block: std::collections::BTreeMap<usize, usize> = Default::default();
    for v in 0..graph.num_vertices() {
        for q in graph.vertex_qubits(v) {
            let b = labels[v];
            match last_block.insert(q.0, b) {
                Some(prev) if prev == b => {}
                _ => widths[b] += 1,
            }
        }
    }
    widths
}

/// Minimum `Σ block widths - active qubits` over every set partition whose
/// blocks all fit in `cap` qubits. Block widths count wire segments
/// directly from each gate's qubit labels, so the graph must come from a
/// circuit.
pub fn brute_min_cuts(graph: &GateGraph, cap: u32) -> Result<OracleResult<i64, Partition>> {
    let n = graph.num_vertices();
    if n > MAX_CUT_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices > {MAX_CUT_VERTICES}")));
    }
    let mut qubits: Vec<usize> = (0..n).flat_map(|v| graph.vertex_qubits(v)).map(|q| q.0).collect();
    qubits.sort_unstable();
    qubits.dedup();
    let active = qubits.len() as i64;

    let mut best: Option<(i64, Vec<usize>)> = None;
    for_each_set_partition(n, |labels| {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        let widths = block_widths(graph, labels, blocks);
        if widths.iter().any(|&w| w > cap) {
            return;
        }
        let cuts = widths.iter().map(|&w| i64::from(w)).sum::<i64>() - active;
        if best.as_ref().map_or(true, |(b, _)| cuts < *b) {
            best = Some((cuts, labels.to_vec()));
        }
    });
    let (optimum, labels) = best.ok_or_else(|| Error::TooLarge("no feasible partition".into()))?;
    Ok(OracleResult {
        optimum,
        witness: Partition::from_labels(labels),
        size: n,
    })
}

/// Maximum modularity over every set partition.
pub fn brute_max_modularity(graph: &GateGraph) -> Result<OracleResult<f64, Partition>> {
    let n = graph.num_vertices();
    if n > MAX_MODULARITY_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices > {MAX_MODULARITY_VERTICES}")));
    }
    let mut best = (f64::NEG_INFINITY, vec![0; n]);
    for_each_set_partition(n, |labels| {
        let q = modularity_double_sum(graph, labels);
        if q > best.0 + 1e-12 {
            best = (q, labels.to_vec());
        }
    });
    Ok(OracleResult {
        optimum: best.0,
        witness: Partition::from_labels(best.1),
        size: n,
    })
}

/// Among capacity-feasible assignments with the smallest possible maximum
/// worker load, the one with the fewest idle qubit slots. The optimum is
/// that `ru`.
pub fn brute_balanced_schedule(pool: &WorkerPool, widths: &[u32]) -> Result<OracleResult<u64, Schedule>> {
    let (p, w) = (widths.len(), pool.len());
    if p > MAX_SCHEDULE_PARTITIONS || w > MAX_SCHEDULE_WORKERS {
        return Err(Error::TooLarge(format!("{p} partitions on {w} workers")));
    }
    let mut choice = vec![0usize; p];
    let mut best: Option<((usize, u64), Vec<usize>)> = None;
    let total = w.pow(p as u32);
    for code in 0..total {
        let mut c = code;
        for slot in choice.iter_mut() {
            *slot = c % w;
            c /= w;
        }
        if choice.iter().zip(widths).any(|(&wi, &width)| width > pool.capacity(wi)) {
            continue;
        }
        let mut loads = vec![0usize; w];
        let mut ru = 0u64;
        for (&wi, &width) in choice.iter().zip(widths) {
            loads[wi] += 1;
            ru += u64::from(pool.capacity(wi) - width);
        }
        let key = (loads.into_iter().max().unwrap_or(0), ru);
        if best.as_ref().map_or(true, |(k, _)| key < *k) {
            best = Some((key, choice.clone()));
        }
    }
    let ((_, ru), choice) = best.ok_or(Error::Unschedulable {
        width: widths.iter().copied().max().unwrap_or(0),
        max_capacity: pool.max_capacity(),
    })?;
    let mut assignment = vec![Vec::new(); w];
    for (part, &wi) in choice.iter().enumerate() {
        assignment[wi].push(part);
    }
    Ok(OracleResult {
        optimum: ru,
        witness: Schedule::from_assignment(pool, assignment)?,
        size: p,
    })
}
