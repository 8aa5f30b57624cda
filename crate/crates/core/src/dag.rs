// SPDX-License-Identifier: Apache-2.0

//! Wire-level DAG of a circuit: one input and one output node per qubit, one
//! node per gate, and a directed edge per wire segment labelled with the
//! qubit it carries.

use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;
use petgraph::Direction;

use crate::circuit::{Circuit, GateId, QubitId};

#[derive(Debug, Clone, PartialEq)]
pub enum DagNode {
    Input(QubitId),
    Output(QubitId),
    Gate { id: GateId, qubits: Vec<QubitId> },
}

#[derive(Debug, Clone)]
pub struct CircuitDag {
    graph: DiGraph<DagNode, QubitId>,
    inputs: Vec<NodeIndex>,
    outputs: Vec<NodeIndex>,
    gate_nodes: Vec<NodeIndex>,
}

impl CircuitDag {
    pub fn graph(&self) -> &DiGraph<DagNode, QubitId> {
        &self.graph
    }

    pub fn num_qubits(&self) -> usize {
        self.inputs.len()
    }

    pub fn input(&self, q: QubitId) -> NodeIndex {
        self.inputs[q.0]
    }

    pub fn output(&self, q: QubitId) -> NodeIndex {
        self.outputs[q.0]
    }

    /// Gate nodes in program order.
    pub fn gate_nodes(&self) -> &[NodeIndex] {
        &self.gate_nodes
    }

    pub fn node(&self, idx: NodeIndex) -> &DagNode {
        &self.graph[idx]
    }

    /// The outgoing edge of `node` carrying qubit `q`, if any.
    fn next_on_wire(&self, node: NodeIndex, q: QubitId) -> Option<NodeIndex> {
        self.graph
            .edges_directed(node, Direction::Outgoing)
            .find(|e| *e.weight() == q)
            .map(|e| e.target())
    }

    /// Nodes visited by qubit `q` from its input to its output, inclusive.
    pub fn wire(&self, q: QubitId) -> Vec<NodeIndex> {
        let mut path = vec![self.input(q)];
        let mut cur = self.input(q);
        while let Some(next) = self.next_on_wire(cur, q) {
            path.push(next);
            cur = next;
        }
        path
    }

    /// Gate ids along qubit `q`'s wire, in program order.
    pub fn wire_gates(&self, q: QubitId) -> Vec<GateId> {
        self.wire(q)
            .into_iter()
            .filter_map(|n| match &self.graph[n] {
                DagNode::Gate { id, .. } => Some(*id),
                _ => None,
            })
            .collect()
    }
}

/// Links consecutive operations on each qubit, bracketed by that qubit's
/// input and output nodes.
pub fn build_dag(circuit: &Circuit) -> CircuitDag {
    let n = circuit.num_qubits();
    let mut graph = DiGraph::with_capacity(2 * n + circuit.gates().len(), 0);
    let inputs: Vec<NodeIndex> = (0..n).map(|q| graph.add_node(DagNode::Input(QubitId(q)))).collect();
    let mut frontier = inputs.clone();
    let mut gate_nodes = Vec::with_capacity(circuit.gates().len());
    for g in circuit.gates() {
        let node = graph.add_node(DagNode::Gate {
            id: g.id,
            qubits: g.qubits.clone(),
        });
        for &q in &g.qubits {
            graph.add_edge(frontier[q.0], node, q);
            frontier[q.0] = node;
        }
        gate_nodes.push(node);
    }
    let outputs: Vec<NodeIndex> = (0..n)
        .map(|q| {
            let out = graph.add_node(DagNode::Output(QubitId(q)));
            graph.add_edge(frontier[q], out, QubitId(q));
            out
        })
        .collect();
    CircuitDag {
        graph,
        inputs,
        outputs,
        gate_nodes,
    }
}
