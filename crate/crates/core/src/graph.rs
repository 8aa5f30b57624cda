// SPDX-License-Identifier: Apache-2.0

//! Undirected weighted graph over the two-qubit gates of a circuit.
//!
//! One-qubit gates are spliced out of every wire; two gates are joined by an
//! edge whose weight is the number of qubits on which they are then
//! wire-adjacent (1 or 2).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::{Circuit, GateId, QubitId};
use crate::dag::{build_dag, CircuitDag, DagNode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateGraph {
    vertices: Vec<GateId>,
    vertex_qubits: Vec<[QubitId; 2]>,
    edges: BTreeMap<(usize, usize), u32>,
    adjacency: Vec<Vec<(usize, u32)>>,
}

impl GateGraph {
    /// Builds a graph from vertex data and `(i, j, weight)` triples over vertex
    /// indices. Parallel entries for the same pair are summed.
    pub fn from_parts(
        vertices: Vec<GateId>,
        vertex_qubits: Vec<[QubitId; 2]>,
        edges: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Result<Self> {
        if vertices.len() != vertex_qubits.len() {
            return Err(Error::InvalidCircuit("vertex and qubit lists differ in length".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCircuit("vertex ids must be strictly increasing".into()));
        }
        let n = vertices.len();
        let mut map = BTreeMap::new();
        for (i, j, w) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidCircuit(format!("invalid edge ({i}, {j})")));
            }
            if w == 0 {
                continue;
            }
            *map.entry((i.min(j), i.max(j))).or_insert(0) += w;
        }
        let mut adjacency = vec![Vec::new(); n];
        for (&(i, j), &w) in &map {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(GateGraph {
            vertices,
            vertex_qubits,
            edges: map,
            adjacency,
        })
    }

    /// A graph with arbitrary weights and placeholder qubit labels, for
    /// modularity tests on graphs that do not come from circuits.
    pub fn from_weighted_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Self> {
        let vertices = (0..n).map(GateId).collect();
        let qubits = (0..n).map(|i| [QubitId(2 * i), QubitId(2 * i + 1)]).collect();
        Self::from_parts(vertices, qubits, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Gate ids, ascending; position in this slice is the vertex index.
    pub fn vertices(&self) -> &[GateId] {
        &self.vertices
    }

    pub fn vertex_id(&self, idx: usize) -> GateId {
        self.vertices[idx]
    }

    pub fn index_of(&self, id: GateId) -> Option<usize> {
        self.vertices.binary_search(&id).ok()
    }

    pub fn vertex_qubits(&self, idx: usize) -> [QubitId; 2] {
        self.vertex_qubits[idx]
    }

    /// Edges as `(i, j, weight)` with `i < j`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn neighbors(&self, idx: usize) -> &[(usize, u32)] {
        &self.adjacency[idx]
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Weighted degree: the sum of incident edge weights.
    pub fn degree(&self, idx: usize) -> u32 {
        self.adjacency[idx].iter().map(|&(_, w)| w).sum()
    }

    pub fn total_edge_weight(&self) -> u64 {
        total_edge_weight(self)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.iter().map(|g| g.0).collect(),
            edges: self
                .edges()
                .map(|(i, j, w)| [self.vertices[i].0, self.vertices[j].0, w as usize])
                .collect(),
        }
    }

    /// Graphviz rendering; vertex labels are gate ids, edge labels weights.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gates {\n");
        for (i, g) in self.vertices.iter().enumerate() {
            let [a, b] = self.vertex_qubits[i];
            writeln!(out, "  g{} [label=\"{} ({},{})\"];", g.0, g.0, a, b).unwrap();
        }
        for (i, j, w) in self.edges() {
            writeln!(
                out,
                "  g{} -- g{} [label=\"{}\", penwidth={}];",
                self.vertices[i].0, self.vertices[j].0, w, w
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// `{"vertices":[ids], "edges":[[i,j,w]]}`, with gate ids as endpoints.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 3]>,
}

pub fn total_edge_weight(graph: &GateGraph) -> u64 {
    graph.edges.values().map(|&w| u64::from(w)).sum()
}

/// Deletes one-qubit gates (splicing their wires), keeps two-qubit gates as
/// vertices and counts shared wire adjacencies as edge weights.
pub fn to_gate_graph(dag: &CircuitDag) -> GateGraph {
    let mut vertices = Vec::new();
    let mut vertex_qubits = Vec::new();
    for &node in dag.gate_nodes() {
        if let DagNode::Gate { id, qubits } = dag.node(node) {
            if let [a, b] = qubits.as_slice() {
                vertices.push(*id);
                vertex_qubits.push([*a, *b]);
            }
        }
    }
    let index = |id: GateId| vertices.binary_search(&id).ok();
    let mut edges = Vec::new();
    for q in 0..dag.num_qubits() {
        let along: Vec<usize> = dag.wire_gates(QubitId(q)).into_iter().filter_map(index).collect();
        for pair in along.windows(2) {
            edges.push((pair[0], pair[1], 1));
        }
    }
    GateGraph::from_parts(vertices, vertex_qubits, edges).expect("wire adjacency yields a valid simple graph")
}

/// Convenience: `to_gate_graph(build_dag(circuit))`.
pub fn circuit_gate_graph(circuit: &Circuit) -> GateGraph {
    to_gate_graph(&build_dag(circuit))
}
