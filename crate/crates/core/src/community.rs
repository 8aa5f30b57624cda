// SPDX-License-Identifier: Apache-2.0

//! Weighted modularity and qubit-capped Louvain community detection.
//!
//! Each Louvain level runs greedy local moving over a seeded shuffle of the
//! current vertices, then agglomerates every community into one vertex.
//! After each level the qubit count of every community (`2|C| - internal
//! weight`) is compared against `qubit_cap`; the first level that breaks the
//! cap is discarded and the previous level's partition is returned.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GateGraph;

/// Smallest modularity gain treated as an improvement.
pub const GAIN_EPS: f64 = 1e-12;

/// Assignment of graph vertices (by index) to dense community ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    labels: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Relabels communities densely in order of first appearance.
    pub fn from_labels(labels: impl IntoIterator<Item = usize>) -> Self {
        let mut remap = BTreeMap::new();
        let labels: Vec<usize> = labels
            .into_iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            count: remap.len(),
            labels,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            count: n,
        }
    }

    pub fn whole(n: usize) -> Self {
        Self::from_labels(std::iter::repeat(0).take(n))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.count
    }

    pub fn community_of(&self, vertex: usize) -> usize {
        self.labels[vertex]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Vertex indices of each community, ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    fn check(&self, graph: &GateGraph) -> Result<()> {
        if self.labels.len() != graph.num_vertices() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} vertices, graph has {}",
                self.labels.len(),
                graph.num_vertices()
            )));
        }
        Ok(())
    }
}

/// Per-community `(Σ_in, Σ_tot)` with internal edges counted twice.
fn community_sums(graph: &GateGraph, partition: &Partition) -> Vec<(u64, u64)> {
    let mut sums = vec![(0u64, 0u64); partition.num_communities()];
    for v in 0..graph.num_vertices() {
        sums[partition.community_of(v)].1 += u64::from(graph.degree(v));
    }
    for (i, j, w) in graph.edges() {
        let c = partition.community_of(i);
        if c == partition.community_of(j) {
            sums[c].0 += 2 * u64::from(w);
        }
    }
    sums
}

fn community_term(sigma_in: u64, sigma_tot: u64, two_m: f64) -> f64 {
    let tot = sigma_tot as f64 / two_m;
    sigma_in as f64 / two_m - tot * tot
}

/// Weighted modularity of `partition`. A graph without edges has Q = 0.
pub fn modularity(graph: &GateGraph, partition: &Partition) -> Result<f64> {
    partition.check(graph)?;
    let two_m = 2.0 * graph.total_edge_weight() as f64;
    if two_m == 0.0 {
        return Ok(0.0);
    }
    Ok(community_sums(graph, partition)
        .into_iter()
        .map(|(sin, stot)| community_term(sin, stot, two_m))
        .sum())
}

/// Contribution `Σ_in/2m - (Σ_tot/2m)^2` of one community.
pub fn community_modularity(graph: &GateGraph, partition: &Partition, community: usize) -> Result<f64> {
    partition.check(graph)?;
    if community >= partition.num_communities() {
        return Err(Error::UnknownCommunity(community));
    }
    let two_m = 2.0 * graph.total_edge_weight() as f64;
    if two_m == 0.0 {
        return Ok(0.0);
    }
    let (mut sin, mut stot) = (0u64, 0u64);
    for v in (0..graph.num_vertices()).filter(|&v| partition.community_of(v) == community) {
        stot += u64::from(graph.degree(v));
        for &(u, w) in graph.neighbors(v) {
            if partition.community_of(u) == community {
                sin += u64::from(w);
            }
        }
    }
    Ok(community_term(sin, stot, two_m))
}

/// Qubits spanned by a community: `2|C|` minus the weight of its internal
/// edges (each unordered pair once). Hand-built graphs whose internal weight
/// exceeds `2|C|` report 0.
pub fn community_qubits(graph: &GateGraph, partition: &Partition, community: usize) -> Result<u32> {
    partition.check(graph)?;
    if community >= partition.num_communities() {
        return Err(Error::UnknownCommunity(community));
    }
    Ok(all_community_qubits(graph, partition)[community])
}

pub fn all_community_qubits(graph: &GateGraph, partition: &Partition) -> Vec<u32> {
    let mut q = vec![0u32; partition.num_communities()];
    for v in 0..graph.num_vertices() {
        q[partition.community_of(v)] += 2;
    }
    for (i, j, w) in graph.edges() {
        let c = partition.community_of(i);
        if c == partition.community_of(j) {
            q[c] = q[c].saturating_sub(w);
        }
    }
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DetectParams {
    pub qubit_cap: u32,
    pub seed: u64,
    pub max_levels: usize,
}

impl DetectParams {
    pub const DEFAULT_MAX_LEVELS: usize = 64;

    pub fn new(qubit_cap: u32, seed: u64) -> Result<Self> {
        if qubit_cap < 2 {
            return Err(Error::InvalidParams(format!(
                "qubit cap {qubit_cap} cannot hold a two-qubit gate"
            )));
        }
        Ok(DetectParams {
            qubit_cap,
            seed,
            max_levels: Self::DEFAULT_MAX_LEVELS,
        })
    }

    /// Cap of half the largest worker capacity, rounded down.
    pub fn for_max_capacity(max_capacity: u32, seed: u64) -> Result<Self> {
        Self::new(max_capacity / 2, seed)
            .map_err(|_| Error::InvalidParams(format!("largest worker capacity {max_capacity} is below 4 qubits")))
    }
}

/// One accepted local move at some level, in that level's vertex space.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveRecord {
    pub node: usize,
    pub from: usize,
    pub to: usize,
    pub delta_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelTrace {
    /// Original vertex -> vertex of this level's graph.
    pub start_membership: Vec<usize>,
    pub moves: Vec<MoveRecord>,
    /// The level's result projected onto the original vertices.
    pub partition: Partition,
    pub max_qubits: u32,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectionTrace {
    pub levels: Vec<LevelTrace>,
}

/// Aggregated graph of one Louvain level, integer weights throughout.
struct LevelGraph {
    adj: Vec<Vec<(usize, u64)>>,
    degree: Vec<u64>,
    /// Weight of gate-graph edges already inside each vertex.
    internal: Vec<u64>,
    /// Gate-graph vertices folded into each vertex.
    gates: Vec<u64>,
}

impl LevelGraph {
    fn from_gate_graph(graph: &GateGraph) -> Self {
        let n = graph.num_vertices();
        LevelGraph {
            adj: (0..n)
                .map(|v| graph.neighbors(v).iter().map(|&(u, w)| (u, u64::from(w))).collect())
                .collect(),
            degree: (0..n).map(|v| u64::from(graph.degree(v))).collect(),
            internal: vec![0; n],
            gates: vec![1; n],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Local moving until a full pass over `order` makes no move. Returns
    /// dense labels and the accepted moves.
    fn local_moving(&self, order: &[usize], two_m: u64) -> (Vec<usize>, Vec<MoveRecord>) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot: Vec<u64> = self.degree.clone();
        let mut moves = Vec::new();
        let mut link: BTreeMap<usize, u64> = BTreeMap::new();
        let m2 = (two_m as f64) * (two_m as f64) / 2.0;

        loop {
            let mut moved = false;
            for &v in order {
                let kv = self.degree[v];
                if kv == 0 {
                    continue;
                }
                link.clear();
                for &(u, w) in &self.adj[v] {
                    *link.entry(comm[u]).or_insert(0) += w;
                }
                let home = comm[v];
                tot[home] -= kv;
                // gain(c) * 2m^2 = 2m * k_{v,c} - tot_c * k_v
                let gain = |c: usize, k_in: u64| -> i128 {
                    i128::from(two_m) * i128::from(k_in) - i128::from(tot[c]) * i128::from(kv)
                };
                let home_gain = gain(home, link.get(&home).copied().unwrap_or(0));
                let mut best: Option<(usize, i128)> = None;
                for (&c, &k_in) in &link {
                    if c == home {
                        continue;
                    }
                    let g = gain(c, k_in);
                    if best.map_or(true, |(_, bg)| g > bg) {
                        best = Some((c, g));
                    }
                }
                let target = match best {
                    Some((c, g)) if g > home_gain && (g - home_gain) as f64 / m2 > GAIN_EPS => {
                        moves.push(MoveRecord {
                            node: v,
                            from: home,
                            to: c,
                            delta_q: (g - home_gain) as f64 / m2,
                        });
                        moved = true;
                        c
                    }
                    _ => home,
                };
                tot[target] += kv;
                comm[v] = target;
            }
            if !moved {
                break;
            }
        }
        (comm, moves)
    }

    fn aggregate(&self, labels: &[usize], count: usize) -> LevelGraph {
        let mut agg = LevelGraph {
            adj: vec![Vec::new(); count],
            degree: vec![0; count],
            internal: vec![0; count],
            gates: vec![0; count],
        };
        let mut cross: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for v in 0..self.len() {
            let c = labels[v];
            agg.degree[c] += self.degree[v];
            agg.internal[c] += self.internal[v];
            agg.gates[c] += self.gates[v];
            for &(u, w) in &self.adj[v] {
                if u < v {
                    continue;
                }
                let d = labels[u];
                if c == d {
                    agg.internal[c] += w;
                } else {
                    *cross.entry((c.min(d), c.max(d))).or_insert(0) += w;
                }
            }
        }
        for ((a, b), w) in cross {
            agg.adj[a].push((b, w));
            agg.adj[b].push((a, w));
        }
        agg
    }
}

/// Louvain with the qubit cap checked after every level. See the module docs.
pub fn constrained_louvain(graph: &GateGraph, params: &DetectParams) -> Result<Partition> {
    constrained_louvain_traced(graph, params).map(|(p, _)| p)
}

/// [`constrained_louvain`] that also reports every level and accepted move.
pub fn constrained_louvain_traced(graph: &GateGraph, params: &DetectParams) -> Result<(Partition, DetectionTrace)> {
    if params.qubit_cap < 2 {
        return Err(Error::InvalidParams(format!(
            "qubit cap {} cannot hold a two-qubit gate",
            params.qubit_cap
        )));
    }
    let n = graph.num_vertices();
    let mut trace = DetectionTrace::default();
    let mut best = Partition::singletons(n);
    let two_m = 2 * graph.total_edge_weight();
    if two_m == 0 {
        return Ok((best, trace));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut level_graph = LevelGraph::from_gate_graph(graph);
    let mut membership: Vec<usize> = (0..n).collect();

    for _ in 0..params.max_levels {
        let mut order: Vec<usize> = (0..level_graph.len()).collect();
        order.shuffle(&mut rng);
        let (labels, moves) = level_graph.local_moving(&order, two_m);
        if moves.is_empty() {
            break;
        }
        let level_partition = Partition::from_labels(labels.iter().copied());
        let dense = level_partition.labels();
        let count = level_partition.num_communities();
        let next = level_graph.aggregate(dense, count);
        let max_qubits = (0..count)
            .map(|c| (2 * next.gates[c]).saturating_sub(next.internal[c]) as u32)
            .max()
            .unwrap_or(0);
        let projected = Partition::from_labels(membership.iter().map(|&v| dense[v]));
        let accepted = max_qubits <= params.qubit_cap;
        trace.levels.push(LevelTrace {
            start_membership: membership.clone(),
            moves,
            partition: projected.clone(),
            max_qubits,
            accepted,
        });
        if !accepted {
            break;
        }
        // projected labels follow first appearance over original vertices,
        // which differs from the level's own dense ids
        membership = membership.iter().map(|&v| dense[v]).collect();
        best = projected;
        level_graph = next;
    }
    Ok((best, trace))
}
