// SPDX-License-Identifier: Apache-2.0

//! Capacity-aware wire cutting of quantum circuits.
//!
//! A circuit is turned into a weighted graph over its two-qubit gates,
//! clustered with a qubit-capped Louvain pass, and the resulting communities
//! are merged into subcircuits that fit a heterogeneous worker pool. The
//! merge search minimises the number of wire cuts first and idle worker
//! qubits second, and every candidate is scheduled with a closest-fit,
//! count-balancing scheduler.
//!
//! ```
//! use fitcut::{gen_bv, run_pipeline, WorkerPool};
//!
//! let circuit = gen_bv(50, &[true; 49]).unwrap();
//! let pool = WorkerPool::uniform(4, 15).unwrap();
//! let run = run_pipeline(&circuit, &pool, 7).unwrap();
//! assert_eq!(run.plan.objectives.nc, 3);
//! assert_eq!(run.plan.cuts.len(), 3);
//! ```

pub mod circuit;
pub mod cli;
pub mod community;
pub mod cutplan;
pub mod dag;
pub mod error;
pub mod generators;
pub mod graph;
pub mod optimize;
pub mod oracle;
pub mod pipeline;
pub mod schedule;

pub use circuit::{parse_circuit, Circuit, CircuitBuilder, Gate, GateId, QubitId};
pub use community::{community_modularity, community_qubits, constrained_louvain, modularity, DetectParams, Partition};
pub use cutplan::{extract_cuts, utilization_report, CutPoint, Subcircuit, UtilizationReport};
pub use dag::{build_dag, CircuitDag};
pub use error::{Error, Result};
pub use generators::{gen_adder, gen_bv, gen_hwea, gen_supremacy, parse_secret};
pub use graph::{circuit_gate_graph, to_gate_graph, total_edge_weight, GateGraph};
pub use optimize::{build_merged_graph, fitcut_optimize, min_subcircuit_count, GroupAssignment, MergedGraph};
pub use pipeline::{modularity_only_plan, run_many, run_pipeline, CutPlan, MultiRun, PipelineRun};
pub use schedule::{closest_first_schedule, objectives, ObjectivePair, Schedule, Worker, WorkerPool};
