// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeMap;

use fitcut::{gen_bv, gen_supremacy, parse_circuit, run_pipeline, Circuit, CutPlan, GateId, WorkerPool};
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use proptest::prelude::*;

use common::{arb_circuit, segment_width};

fn arb_run() -> impl Strategy<Value = (Circuit, WorkerPool, u64)> {
    (arb_circuit(12, 50), prop::collection::vec(4u32..12, 1..4), any::<u64>())
        .prop_map(|(c, caps, seed)| (c, WorkerPool::from_capacities(&caps).unwrap(), seed))
}

fn owner(plan: &CutPlan) -> BTreeMap<GateId, usize> {
    let mut owner = BTreeMap::new();
    for s in &plan.subcircuits {
        for &g in &s.gates {
            assert!(owner.insert(g, s.id).is_none(), "gate {g:?} in two subcircuits");
        }
    }
    owner
}

/// Cut points recomputed by walking every wire over its two-qubit gates.
fn wire_transitions(c: &Circuit, owner: &BTreeMap<GateId, usize>) -> Vec<(usize, GateId, GateId)> {
    let mut last: Vec<Option<GateId>> = vec![None; c.num_qubits()];
    let mut cuts = Vec::new();
    for g in c.two_qubit_gates() {
        for q in &g.qubits {
            if let Some(prev) = last[q.0] {
                if owner[&prev] != owner[&g.id] {
                    cuts.push((q.0, prev, g.id));
                }
            }
            last[q.0] = Some(g.id);
        }
    }
    cuts.sort();
    cuts
}

fn check_plan(c: &Circuit, pool: &WorkerPool, plan: &CutPlan) -> Result<(), TestCaseError> {
    let owner = owner(plan);
    let all: Vec<GateId> = c.gates().iter().map(|g| g.id).collect();
    prop_assert_eq!(owner.keys().copied().collect::<Vec<_>>(), all);

    let mut listed: Vec<(usize, GateId, GateId)> = plan
        .cuts
        .iter()
        .map(|p| (p.qubit.0, p.after_gate, p.before_gate))
        .collect();
    listed.sort();
    prop_assert_eq!(&listed, &wire_transitions(c, &owner));

    let total: i64 = plan.subcircuits.iter().map(|s| i64::from(s.width)).sum();
    prop_assert_eq!(plan.cuts.len() as i64, total - c.num_qubits() as i64);
    prop_assert_eq!(plan.cuts.len() as i64, plan.objectives.nc);

    for s in &plan.subcircuits {
        prop_assert!(s.width <= pool.capacity(plan.schedule.worker_of(s.id).unwrap()));
        prop_assert!(s.gates.windows(2).all(|w| w[0] < w[1]));
        let has_two = s.gates.iter().any(|g| c.gate(*g).unwrap().is_two_qubit());
        if has_two {
            let width = segment_width(c, |v| {
                let id = c.two_qubit_gates().nth(v).unwrap().id;
                owner[&id] == s.id
            });
            prop_assert_eq!(width, s.width);
        } else {
            prop_assert_eq!(s.width, 1);
            let qs: Vec<usize> = s.gates.iter().map(|g| c.gate(*g).unwrap().qubits[0].0).collect();
            prop_assert!(qs.windows(2).all(|w| w[0] == w[1]));
        }

        // dependency graph over the subcircuit's own wire segments: a gate
        // of another subcircuit on a qubit ends that segment
        let mut dag = DiGraph::<(), ()>::new();
        let index: BTreeMap<GateId, usize> = s.gates.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let nodes: Vec<_> = s.gates.iter().map(|_| dag.add_node(())).collect();
        let mut last_on: BTreeMap<usize, usize> = BTreeMap::new();
        let mut chain = vec![0u32; s.gates.len()];
        for g in c.gates() {
            let Some(&k) = index.get(&g.id) else {
                for q in &g.qubits {
                    last_on.remove(&q.0);
                }
                continue;
            };
            let mut d = 1;
            for q in &g.qubits {
                if let Some(&j) = last_on.get(&q.0) {
                    dag.add_edge(nodes[j], nodes[k], ());
                    d = d.max(chain[j] + 1);
                }
                last_on.insert(q.0, k);
            }
            chain[k] = d;
        }
        prop_assert!(!is_cyclic_directed(&dag));
        prop_assert_eq!(chain.iter().copied().max().unwrap_or(0), s.depth);

        let text = s.to_text(c);
        let local = parse_circuit(&text).unwrap();
        prop_assert_eq!(local.num_qubits(), s.width as usize);
        prop_assert_eq!(local.gates().len(), s.gates.len());
    }

    for w in &plan.utilization.workers {
        if let Some(u) = w.utilization {
            prop_assert!(u > 0.0 && u <= 1.0 + 1e-12);
        }
    }
    if let Some(u) = plan.utilization.system {
        prop_assert!(u > 0.0 && u <= 1.0 + 1e-12);
    }
    Ok(())
}

// one-qubit gates follow the nearest preceding two-qubit gate on their wire,
// else the nearest following one
fn check_one_qubit_attachment(c: &Circuit, plan: &CutPlan) -> Result<(), TestCaseError> {
    let owner = owner(plan);
    for q in 0..c.num_qubits() {
        let wire: Vec<&fitcut::Gate> = c.gates().iter().filter(|g| g.qubits.iter().any(|x| x.0 == q)).collect();
        let anchors: Vec<usize> = (0..wire.len()).filter(|&i| wire[i].is_two_qubit()).collect();
        for (i, g) in wire.iter().enumerate() {
            if g.is_two_qubit() {
                continue;
            }
            let anchor = anchors
                .iter()
                .rev()
                .find(|&&a| a < i)
                .or_else(|| anchors.iter().find(|&&a| a > i));
            match anchor {
                Some(&a) => prop_assert_eq!(owner[&g.id], owner[&wire[a].id]),
                None => prop_assert_eq!(owner[&g.id], owner[&wire[0].id]),
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(common::cases(300))]

    #[test]
    fn plans_are_consistent((c, pool, seed) in arb_run()) {
        let run = run_pipeline(&c, &pool, seed).unwrap();
        check_plan(&c, &pool, &run.plan)?;
        check_one_qubit_attachment(&c, &run.plan)?;
    }

    #[test]
    fn plan_json_is_reproducible((c, pool, seed) in arb_run()) {
        let a = run_pipeline(&c, &pool, seed).unwrap().plan.to_json();
        let b = run_pipeline(&c, &pool, seed).unwrap().plan.to_json();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn bv50_on_15_qubit_workers_cuts_only_the_ancilla() {
    let c = gen_bv(50, &[true; 49]).unwrap();
    let pool = WorkerPool::uniform(4, 15).unwrap();
    let run = run_pipeline(&c, &pool, 7).unwrap();
    assert!(run.plan.cuts.iter().all(|p| p.qubit.0 == 49));
    check_plan(&c, &pool, &run.plan).unwrap();
}

#[test]
fn fitting_circuit_needs_no_cut() {
    let c = gen_bv(12, &[true; 11]).unwrap();
    let pool = WorkerPool::uniform(2, 20).unwrap();
    let plan = run_pipeline(&c, &pool, 1).unwrap().plan;
    assert!(plan.cuts.is_empty());
    assert_eq!(plan.subcircuits.len(), 1);
    let u = plan.utilization.system.unwrap();
    assert!((u - 12.0 / 20.0).abs() < 1e-12);
}

#[test]
fn supremacy_plan_is_consistent() {
    let c = gen_supremacy(5, 6, 8, 3).unwrap();
    let pool = WorkerPool::from_capacities(&[20, 20, 15, 10]).unwrap();
    for seed in 0..5 {
        check_plan(&c, &pool, &run_pipeline(&c, &pool, seed).unwrap().plan).unwrap();
    }
}
