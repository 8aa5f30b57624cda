// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use std::collections::BTreeMap;

use fitcut::{Circuit, CircuitBuilder, GateGraph};
use proptest::prelude::*;
use rand::Rng;

const ONE_QUBIT: [&str; 4] = ["h", "x", "t", "sx"];

/// Gate recipe: `(a, b, two_qubit, kind)`; `b` is nudged off `a`.
pub type Recipe = Vec<(usize, usize, bool, usize)>;

pub fn build(n: usize, recipe: &Recipe) -> Circuit {
    let mut b = CircuitBuilder::new(n);
    for &(a, q, two, kind) in recipe {
        let a = a % n;
        if two && n >= 2 {
            let mut q = q % n;
            if q == a {
                q = (a + 1) % n;
            }
            b.two(if kind % 2 == 0 { "cx" } else { "cz" }, a, q);
        } else {
            b.one(ONE_QUBIT[kind % ONE_QUBIT.len()], a);
        }
    }
    b.build().expect("recipe builds a valid circuit")
}

pub fn arb_circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_qubits).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, prop::bool::weighted(0.6), 0..8usize), 0..=max_gates)
            .prop_map(move |recipe| build(n, &recipe))
    })
}

/// Random circuit with exactly `two_qubit` two-qubit gates and some
/// one-qubit gates sprinkled in.
pub fn random_circuit(rng: &mut impl Rng, n: usize, two_qubit: usize) -> Circuit {
    let mut b = CircuitBuilder::new(n);
    let mut placed = 0;
    while placed < two_qubit {
        if rng.gen_bool(0.3) {
            b.one(ONE_QUBIT[rng.gen_range(0..ONE_QUBIT.len())], rng.gen_range(0..n));
            continue;
        }
        let a = rng.gen_range(0..n);
        let mut c = rng.gen_range(0..n - 1);
        if c >= a {
            c += 1;
        }
        b.two("cx", a, c);
        placed += 1;
    }
    b.build().expect("valid circuit")
}

/// Gate-graph edges recomputed by walking each qubit's wire over the
/// two-qubit gates only: consecutive gates on a wire share one unit.
pub fn wire_walk_edges(circuit: &Circuit) -> BTreeMap<(usize, usize), u32> {
    let mut last: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
    let mut edges = BTreeMap::new();
    for (v, gate) in circuit.two_qubit_gates().enumerate() {
        for q in &gate.qubits {
            if let Some(u) = last[q.0] {
                *edges.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            }
            last[q.0] = Some(v);
        }
    }
    edges
}

pub fn edge_map(graph: &GateGraph) -> BTreeMap<(usize, usize), u32> {
    graph.edges().map(|(i, j, w)| ((i.min(j), i.max(j)), w)).collect()
}

/// Distinct wire segments of a set of gates, counted from scratch over the
/// full gate list (one-qubit gates ignored).
pub fn segment_width(circuit: &Circuit, member: impl Fn(usize) -> bool) -> u32 {
    let mut last_in: Vec<Option<bool>> = vec![None; circuit.num_qubits()];
    let mut width = 0;
    for (v, gate) in circuit.two_qubit_gates().enumerate() {
        let inside = member(v);
        for q in &gate.qubits {
            if inside && last_in[q.0] != Some(true) {
                width += 1;
            }
            last_in[q.0] = Some(inside);
        }
    }
    width
}

/// Integration tests have no lib.rs next to them for proptest to anchor a
/// regressions file on, so persistence is off.
pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
