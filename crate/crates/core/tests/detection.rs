// SPDX-License-Identifier: Apache-2.0

mod common;

use fitcut::community::constrained_louvain_traced;
use fitcut::oracle::{brute_max_modularity, modularity_double_sum};
use fitcut::{
    circuit_gate_graph, community_modularity, community_qubits, constrained_louvain, gen_supremacy, modularity,
    DetectParams, GateGraph, Partition,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{arb_circuit, segment_width};

fn arb_graph(max_vertices: usize) -> impl Strategy<Value = GateGraph> {
    (1..=max_vertices).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u32..=2), 0..=2 * n).prop_map(move |raw| {
            let mut seen = std::collections::BTreeSet::new();
            let edges: Vec<_> = raw
                .into_iter()
                .filter(|&(a, b, _)| a != b && seen.insert((a.min(b), a.max(b))))
                .collect();
            GateGraph::from_weighted_edges(n, edges).unwrap()
        })
    })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> GateGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                edges.push((i, j, rng.gen_range(1..=2)));
            }
        }
    }
    GateGraph::from_weighted_edges(n, edges).unwrap()
}

#[test]
fn modularity_matches_double_sum_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, n);
        let k = rng.gen_range(1..=n);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let p = Partition::from_labels(labels.iter().copied());
        let q = modularity(&g, &p).unwrap();
        assert!((q - modularity_double_sum(&g, &labels)).abs() < 1e-9);
        let sum: f64 = (0..p.num_communities())
            .map(|c| community_modularity(&g, &p, c).unwrap())
            .sum();
        assert!((sum - q).abs() < 1e-9);
    }
}

#[test]
fn two_disjoint_edges_split_at_the_exhaustive_maximum() {
    let g = GateGraph::from_weighted_edges(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
    let p = constrained_louvain(&g, &DetectParams::new(8, 3).unwrap()).unwrap();
    assert_eq!(p, Partition::from_labels([0, 0, 1, 1]));
    let best = brute_max_modularity(&g).unwrap();
    assert!((modularity(&g, &p).unwrap() - best.optimum).abs() < 1e-12);
}

#[test]
fn supremacy_communities_respect_cap() {
    let c = gen_supremacy(7, 8, 8, 1).unwrap();
    let g = circuit_gate_graph(&c);
    for seed in 0..10 {
        let p = constrained_louvain(&g, &DetectParams::for_max_capacity(20, seed).unwrap()).unwrap();
        for comm in 0..p.num_communities() {
            assert!(community_qubits(&g, &p, comm).unwrap() <= 10);
        }
    }
}

proptest! {
    #![proptest_config(common::cases(200))]

    #[test]
    fn traced_moves_match_recomputed_modularity(g in arb_graph(10), seed in any::<u64>(), cap in 2u32..12) {
        let (_, trace) = constrained_louvain_traced(&g, &DetectParams::new(cap, seed).unwrap()).unwrap();
        for level in &trace.levels {
            let width = level.start_membership.iter().copied().max().map_or(0, |m| m + 1);
            let mut comm: Vec<usize> = (0..width).collect();
            let labels = |comm: &[usize]| -> Vec<usize> {
                level.start_membership.iter().map(|&v| comm[v]).collect()
            };
            let mut q = modularity_double_sum(&g, &labels(&comm));
            for mv in &level.moves {
                prop_assert_eq!(comm[mv.node], mv.from);
                comm[mv.node] = mv.to;
                let after = modularity_double_sum(&g, &labels(&comm));
                prop_assert!((after - q - mv.delta_q).abs() < 1e-9, "move {:?}: {} -> {}", mv, q, after);
                prop_assert!(mv.delta_q > 0.0);
                q = after;
            }
            let end = Partition::from_labels(labels(&comm));
            prop_assert_eq!(&end, &level.partition);
        }
    }

    #[test]
    fn level_modularity_never_decreases(g in arb_graph(10), seed in any::<u64>()) {
        let (_, trace) = constrained_louvain_traced(&g, &DetectParams::new(64, seed).unwrap()).unwrap();
        let mut prev = modularity(&g, &Partition::singletons(g.num_vertices())).unwrap();
        for level in &trace.levels {
            let q = modularity(&g, &level.partition).unwrap();
            prop_assert!(q >= prev - 1e-12);
            prev = q;
        }
    }

    #[test]
    fn output_respects_qubit_cap(c in arb_circuit(10, 40), seed in any::<u64>(), cap in 2u32..10) {
        let g = circuit_gate_graph(&c);
        let p = constrained_louvain(&g, &DetectParams::new(cap, seed).unwrap()).unwrap();
        prop_assert_eq!(p.len(), g.num_vertices());
        for (id, members) in p.communities().iter().enumerate() {
            prop_assert!(!members.is_empty());
            let q = community_qubits(&g, &p, id).unwrap();
            prop_assert!(q <= cap);
            prop_assert_eq!(q, segment_width(&c, |v| p.community_of(v) == id));
        }
        for v in 0..g.num_vertices() {
            if g.degree(v) == 0 {
                prop_assert_eq!(p.communities()[p.community_of(v)].len(), 1);
            }
        }
    }

    #[test]
    fn detection_is_deterministic(c in arb_circuit(8, 30), seed in any::<u64>()) {
        let g = circuit_gate_graph(&c);
        let params = DetectParams::new(5, seed).unwrap();
        prop_assert_eq!(constrained_louvain(&g, &params).unwrap(), constrained_louvain(&g, &params).unwrap());
    }

    #[test]
    fn slack_cap_output_is_a_top_level_fixed_point(g in arb_graph(8), seed in any::<u64>()) {
        let cap = 2 * g.num_vertices() as u32 + 2;
        let p = constrained_louvain(&g, &DetectParams::new(cap, seed).unwrap()).unwrap();
        let q = modularity(&g, &p).unwrap();
        let k = p.num_communities();
        for a in 0..k {
            for b in a + 1..k {
                let merged = Partition::from_labels(p.labels().iter().map(|&c| if c == b { a } else { c }));
                prop_assert!(modularity(&g, &merged).unwrap() <= q + 1e-12);
            }
        }
        let best = brute_max_modularity(&g).unwrap();
        prop_assert!((modularity(&g, &best.witness).unwrap() - best.optimum).abs() < 1e-9);
        prop_assert!(q <= best.optimum + 1e-12);
    }
}

fn louvain_q(g: &GateGraph, seed: u64) -> f64 {
    modularity(
        g,
        &constrained_louvain(g, &DetectParams::new(64, seed).unwrap()).unwrap(),
    )
    .unwrap()
}

// Louvain is a local search. On the uniform 6-path most visit orders pair
// neighbours first, and no merge of pairs helps: 0.26 against 0.30.
#[test]
fn uniform_path_stalls_below_the_exhaustive_maximum() {
    let g = GateGraph::from_weighted_edges(6, (0..5).map(|i| (i, i + 1, 2))).unwrap();
    let best = brute_max_modularity(&g).unwrap().optimum;
    assert!((best - 0.3).abs() < 1e-12);
    let qs: Vec<f64> = (0..20).map(|s| louvain_q(&g, s)).collect();
    assert!(qs.iter().all(|&q| (q - 0.26).abs() < 1e-12 || (q - best).abs() < 1e-12));
    assert!(qs.iter().filter(|&&q| (q - 0.26).abs() < 1e-12).count() > 10);
}

// cx a b; cx a b; cx a b; cx a c: whether Q reaches 0.08 or stalls at 0
// depends on the shuffled order.
#[test]
fn seed_dependent_stall() {
    let g = GateGraph::from_weighted_edges(4, [(0, 1, 2), (0, 3, 2), (1, 2, 1)]).unwrap();
    let best = brute_max_modularity(&g).unwrap().optimum;
    assert!((best - 0.08).abs() < 1e-12);
    let qs: Vec<f64> = (0..64).map(|s| louvain_q(&g, s)).collect();
    assert!(qs.iter().any(|q| (q - best).abs() < 1e-12));
    assert!(qs.iter().any(|q| q.abs() < 1e-12));
}

#[test]
fn gap_to_exhaustive_maximum_on_small_gate_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut runs, mut within) = (0, 0);
    while runs < 2000 {
        let n = rng.gen_range(2..=6);
        let gates = rng.gen_range(1..=8);
        let g = circuit_gate_graph(&common::random_circuit(&mut rng, n, gates));
        if g.num_edges() == 0 {
            continue;
        }
        let best = brute_max_modularity(&g).unwrap().optimum;
        for seed in 0..4 {
            let q = louvain_q(&g, seed);
            assert!(q <= best + 1e-12);
            runs += 1;
            if q >= 0.9 * best - 1e-12 {
                within += 1;
            }
        }
    }
    println!("louvain within 0.9 of the exhaustive maximum: {within}/{runs}");
    assert!(within < runs, "expected at least one local-optimum stall in the corpus");
}
