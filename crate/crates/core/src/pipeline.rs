// SPDX-License-Identifier: Apache-2.0

//! End-to-end cut search: gate graph, constrained detection, merge
//! optimisation, cut extraction and scheduling.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::community::{constrained_louvain, modularity, DetectParams, Partition};
use crate::cutplan::{extract_cuts, utilization_report, CutPoint, Subcircuit, UtilizationReport};
use crate::error::Result;
use crate::graph::{circuit_gate_graph, GateGraph};
use crate::optimize::{build_merged_graph, fitcut_optimize, GroupAssignment, MergedGraph};
use crate::schedule::{closest_first_schedule, objectives, ObjectivePair, Schedule, WorkerPool};

/// Final result of one cut search. Serialises to the documented plan JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutPlan {
    pub seed: u64,
    pub qubits: usize,
    pub cuts: Vec<CutPoint>,
    pub subcircuits: Vec<Subcircuit>,
    pub schedule: Schedule,
    pub objectives: ObjectivePair,
    pub utilization: UtilizationReport,
}

impl CutPlan {
    pub fn widths(&self) -> Vec<u32> {
        self.subcircuits.iter().map(|s| s.width).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serialises")
    }
}

/// Every intermediate of one seeded run, for inspection and tests.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub graph: GateGraph,
    pub partition: Partition,
    pub modularity: f64,
    pub merged: MergedGraph,
    pub grouping: GroupAssignment,
    pub optimizer_objectives: ObjectivePair,
    pub plan: CutPlan,
    /// Wall time of graph transform, detection and optimisation.
    pub search_time: Duration,
}

/// Turns a grouping of a detection partition into a scheduled plan.
pub fn materialize_plan(
    circuit: &Circuit,
    graph: &GateGraph,
    partition: &Partition,
    grouping: &GroupAssignment,
    pool: &WorkerPool,
    seed: u64,
) -> Result<CutPlan> {
    let (cuts, subcircuits) = extract_cuts(circuit, graph, partition, grouping)?;
    let widths: Vec<u32> = subcircuits.iter().map(|s| s.width).collect();
    let schedule = closest_first_schedule(pool, &widths)?;
    let objectives = objectives(&schedule, &widths, pool, circuit.num_qubits());
    let utilization = utilization_report(&schedule, &subcircuits, pool);
    Ok(CutPlan {
        seed,
        qubits: circuit.num_qubits(),
        cuts,
        subcircuits,
        schedule,
        objectives,
        utilization,
    })
}

pub fn run_pipeline(circuit: &Circuit, pool: &WorkerPool, seed: u64) -> Result<PipelineRun> {
    let start = Instant::now();
    let graph = circuit_gate_graph(circuit);
    let params = DetectParams::for_max_capacity(pool.max_capacity(), seed)?;
    let partition = constrained_louvain(&graph, &params)?;
    let merged = build_merged_graph(&graph, &partition)?;
    let opt = fitcut_optimize(&merged, pool, circuit.active_width())?;
    let search_time = start.elapsed();
    let plan = materialize_plan(circuit, &graph, &partition, &opt.grouping, pool, seed)?;
    Ok(PipelineRun {
        modularity: modularity(&graph, &partition)?,
        graph,
        partition,
        merged,
        grouping: opt.grouping,
        optimizer_objectives: opt.objectives,
        plan,
        search_time,
    })
}

/// Each detected community run as its own subcircuit, without merging.
pub fn modularity_only_plan(circuit: &Circuit, pool: &WorkerPool, seed: u64) -> Result<CutPlan> {
    let graph = circuit_gate_graph(circuit);
    let params = DetectParams::for_max_capacity(pool.max_capacity(), seed)?;
    let partition = constrained_louvain(&graph, &params)?;
    let merged = build_merged_graph(&graph, &partition)?;
    let grouping = GroupAssignment {
        group_of: (0..merged.len()).collect(),
        widths: merged.weights().to_vec(),
    };
    materialize_plan(circuit, &graph, &partition, &grouping, pool, seed)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub nc: i64,
    pub ru: u64,
    pub search_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct MultiRun {
    pub best: CutPlan,
    pub runs: Vec<RunRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NcStats {
    pub min: i64,
    pub median: f64,
    pub max: i64,
}

impl MultiRun {
    pub fn nc_stats(&self) -> NcStats {
        let mut nc: Vec<i64> = self.runs.iter().map(|r| r.nc).collect();
        nc.sort_unstable();
        let k = nc.len();
        let median = if k % 2 == 1 {
            nc[k / 2] as f64
        } else {
            (nc[k / 2 - 1] + nc[k / 2]) as f64 / 2.0
        };
        NcStats {
            min: nc[0],
            median,
            max: nc[k - 1],
        }
    }

    pub fn mean_search_seconds(&self) -> f64 {
        self.runs.iter().map(|r| r.search_seconds).sum::<f64>() / self.runs.len() as f64
    }
}

/// Runs seeds `seed..seed + runs` on up to `jobs` threads and keeps the plan
/// with the smallest `(nc, ru)`, earliest seed on ties.
pub fn run_many(circuit: &Circuit, pool: &WorkerPool, seed: u64, runs: usize, jobs: usize) -> Result<MultiRun> {
    assert!(runs >= 1, "at least one run is required");
    let seeds: Vec<u64> = (0..runs as u64).map(|i| seed.wrapping_add(i)).collect();
    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let results: Vec<Result<PipelineRun>> =
        threads.install(|| seeds.par_iter().map(|&s| run_pipeline(circuit, pool, s)).collect());

    let mut best: Option<CutPlan> = None;
    let mut records = Vec::with_capacity(runs);
    for r in results {
        let r = r?;
        records.push(RunRecord {
            seed: r.plan.seed,
            nc: r.plan.objectives.nc,
            ru: r.plan.objectives.ru,
            search_seconds: r.search_time.as_secs_f64(),
        });
        if best.as_ref().map_or(true, |b| r.plan.objectives < b.objectives) {
            best = Some(r.plan);
        }
    }
    Ok(MultiRun {
        best: best.expect("runs >= 1"),
        runs: records,
    })
}
