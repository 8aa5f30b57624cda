// SPDX-License-Identifier: Apache-2.0

//! Wire-cut extraction, subcircuit materialisation and the depth-weighted
//! utilisation report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::{Circuit, GateId, QubitId};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::GateGraph;
use crate::optimize::GroupAssignment;
use crate::schedule::{Schedule, WorkerPool};

/// A severed wire between two adjacent two-qubit gates in different groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CutPoint {
    pub qubit: QubitId,
    #[serde(rename = "after")]
    pub after_gate: GateId,
    #[serde(rename = "before")]
    pub before_gate: GateId,
}

/// One maximal run of a qubit's wire inside a subcircuit. `from_cut` marks a
/// segment that starts with an initialisation fed by a cut; `to_cut` one that
/// ends with a measurement feeding a cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WireSegment {
    pub qubit: QubitId,
    pub from_cut: bool,
    pub to_cut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subcircuit {
    pub id: usize,
    pub width: u32,
    pub depth: u32,
    /// Original gate ids in program order.
    pub gates: Vec<GateId>,
    /// Local qubit `k` of the subcircuit is `wires[k]`.
    pub wires: Vec<WireSegment>,
    /// Local qubits of each gate, parallel to `gates`.
    #[serde(skip)]
    pub local_qubits: Vec<Vec<usize>>,
}

impl Subcircuit {
    /// Renders the subcircuit in the circuit text format over its local
    /// qubits. Cut boundaries appear as `# init` / `# measure` comments.
    pub fn to_text(&self, circuit: &Circuit) -> String {
        let mut out = String::new();
        writeln!(out, "# subcircuit {}", self.id).unwrap();
        writeln!(out, "qubits {}", self.width).unwrap();
        for (k, seg) in self.wires.iter().enumerate() {
            if seg.from_cut {
                writeln!(out, "# init {k} (qubit {} from cut)", seg.qubit).unwrap();
            }
        }
        for (gid, locals) in self.gates.iter().zip(&self.local_qubits) {
            let g = circuit.gate(*gid).expect("subcircuit gates come from the circuit");
            out.push_str(&g.name);
            for q in locals {
                write!(out, " {q}").unwrap();
            }
            for p in &g.params {
                write!(out, " {p:?}").unwrap();
            }
            out.push('\n');
        }
        for (k, seg) in self.wires.iter().enumerate() {
            if seg.to_cut {
                writeln!(out, "# measure {k} (qubit {} into cut)", seg.qubit).unwrap();
            }
        }
        out
    }
}

/// Group of every two-qubit gate, keyed by gate id.
pub fn gate_groups(
    graph: &GateGraph,
    partition: &Partition,
    grouping: &GroupAssignment,
) -> Result<BTreeMap<GateId, usize>> {
    if partition.len() != graph.num_vertices() {
        return Err(Error::PartitionMismatch(format!(
            "partition covers {} vertices, graph has {}",
            partition.len(),
            graph.num_vertices()
        )));
    }
    let mut out = BTreeMap::new();
    for v in 0..graph.num_vertices() {
        let sv = partition.community_of(v);
        let group = *grouping
            .group_of
            .get(sv)
            .ok_or_else(|| Error::MissingGate(graph.vertex_id(v).0))?;
        out.insert(graph.vertex_id(v), group);
    }
    Ok(out)
}

/// Walks every qubit wire, emits a cut wherever consecutive two-qubit gates
/// sit in different groups and materialises one subcircuit per group.
///
/// One-qubit gates join the group of the nearest preceding two-qubit gate on
/// their wire, else the nearest following one. Qubits with no two-qubit gate
/// at all become width-1 subcircuits numbered after the groups.
pub fn extract_cuts(
    circuit: &Circuit,
    graph: &GateGraph,
    partition: &Partition,
    grouping: &GroupAssignment,
) -> Result<(Vec<CutPoint>, Vec<Subcircuit>)> {
    let groups = gate_groups(graph, partition, grouping)?;
    extract_cuts_by_gate(circuit, &groups, grouping.num_groups())
}

/// [`extract_cuts`] from an explicit gate-to-group map over `num_groups`
/// groups.
pub fn extract_cuts_by_gate(
    circuit: &Circuit,
    groups: &BTreeMap<GateId, usize>,
    num_groups: usize,
) -> Result<(Vec<CutPoint>, Vec<Subcircuit>)> {
    let n = circuit.num_qubits();
    let gates = circuit.gates();
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (pos, g) in gates.iter().enumerate() {
        if g.is_two_qubit() && !groups.contains_key(&g.id) {
            return Err(Error::MissingGate(g.id.0));
        }
        for q in &g.qubits {
            wires[q.0].push(pos);
        }
    }

    // group of every gate (one-qubit gates resolved per wire)
    let mut owner: Vec<Option<usize>> = gates
        .iter()
        .map(|g| groups.get(&g.id).copied().filter(|_| g.is_two_qubit()))
        .collect();
    let mut idle_qubits = Vec::new();
    for (q, wire) in wires.iter().enumerate() {
        let anchors: Vec<usize> = wire.iter().copied().filter(|&p| gates[p].is_two_qubit()).collect();
        if anchors.is_empty() {
            idle_qubits.push(q);
            continue;
        }
        let mut last = owner[anchors[0]];
        for &p in wire {
            if gates[p].is_two_qubit() {
                last = owner[p];
            } else {
                owner[p] = last;
            }
        }
    }
    let total_groups = num_groups + idle_qubits.len();
    for (k, &q) in idle_qubits.iter().enumerate() {
        for &p in &wires[q] {
            owner[p] = Some(num_groups + k);
        }
    }
    if let Some(max) = owner.iter().flatten().max() {
        if *max >= total_groups {
            return Err(Error::PartitionMismatch(format!("group {max} outside 0..{num_groups}")));
        }
    }

    // segments: (group, qubit, from_cut, to_cut), plus the local index of
    // each (gate position, qubit) pair
    let mut cuts = Vec::new();
    let mut segments: Vec<Vec<WireSegment>> = vec![Vec::new(); total_groups];
    let mut local: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (k, &q) in idle_qubits.iter().enumerate() {
        segments[num_groups + k].push(WireSegment {
            qubit: QubitId(q),
            from_cut: false,
            to_cut: false,
        });
        for &p in &wires[q] {
            local.insert((p, q), 0);
        }
    }
    for q in 0..n {
        let wire = &wires[q];
        if idle_qubits.binary_search(&q).is_ok() {
            continue;
        }
        let mut prev_anchor: Option<usize> = None;
        let mut current: Option<(usize, usize)> = None; // (group, segment index)
        for &p in wire {
            let grp = owner[p].expect("non-idle wires resolve every gate");
            if gates[p].is_two_qubit() {
                if let Some(prev) = prev_anchor {
                    if owner[prev] != owner[p] {
                        cuts.push(CutPoint {
                            qubit: QubitId(q),
                            after_gate: gates[prev].id,
                            before_gate: gates[p].id,
                        });
                    }
                }
                prev_anchor = Some(p);
            }
            let continues = matches!(current, Some((g, _)) if g == grp);
            if !continues {
                if let Some((g, s)) = current {
                    segments[g][s].to_cut = true;
                }
                segments[grp].push(WireSegment {
                    qubit: QubitId(q),
                    from_cut: current.is_some(),
                    to_cut: false,
                });
                current = Some((grp, segments[grp].len() - 1));
            }
            local.insert((p, q), current.unwrap().1);
        }
    }
    cuts.sort();

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); total_groups];
    for (pos, o) in owner.iter().enumerate() {
        if let Some(g) = o {
            members[*g].push(pos);
        }
    }

    let subcircuits = (0..total_groups)
        .map(|id| {
            let mut depth_on = vec![0u32; segments[id].len()];
            let mut depth = 0;
            let mut local_qubits = Vec::with_capacity(members[id].len());
            for &p in &members[id] {
                let locals: Vec<usize> = gates[p].qubits.iter().map(|q| local[&(p, q.0)]).collect();
                let d = 1 + locals.iter().map(|&l| depth_on[l]).max().unwrap_or(0);
                for &l in &locals {
                    depth_on[l] = d;
                }
                depth = depth.max(d);
                local_qubits.push(locals);
            }
            Subcircuit {
                id,
                width: segments[id].len() as u32,
                depth,
                gates: members[id].iter().map(|&p| gates[p].id).collect(),
                wires: segments[id].clone(),
                local_qubits,
            }
        })
        .collect();
    Ok((cuts, subcircuits))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkerUtilization {
    pub worker: String,
    pub capacity: u32,
    pub subcircuits: Vec<usize>,
    pub accumulated_depth: u64,
    /// `None` when the worker runs nothing with positive depth.
    pub utilization: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilizationReport {
    pub workers: Vec<WorkerUtilization>,
    pub system: Option<f64>,
}

/// A width-`i` subcircuit on an `m`-qubit worker uses `i/m` of it for
/// `depth` units. Each worker's figure, and the system figure, is the
/// depth-weighted mean of those ratios.
pub fn utilization_report(schedule: &Schedule, subcircuits: &[Subcircuit], pool: &WorkerPool) -> UtilizationReport {
    let mut sys_num = 0.0;
    let mut sys_den = 0u64;
    let workers = pool
        .workers()
        .iter()
        .enumerate()
        .map(|(wi, w)| {
            let ids = schedule.partitions_of(wi).to_vec();
            let mut num = 0.0;
            let mut den = 0u64;
            for &id in &ids {
                let sc = &subcircuits[id];
                let d = u64::from(sc.depth);
                num += f64::from(sc.width) / f64::from(w.capacity) * d as f64;
                den += d;
            }
            sys_num += num;
            sys_den += den;
            WorkerUtilization {
                worker: w.id.clone(),
                capacity: w.capacity,
                subcircuits: ids,
                accumulated_depth: den,
                utilization: (den > 0).then(|| num / den as f64),
            }
        })
        .collect();
    UtilizationReport {
        workers,
        system: (sys_den > 0).then(|| sys_num / sys_den as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::schedule::closest_first_schedule;

    fn groups(pairs: &[(usize, usize)]) -> BTreeMap<GateId, usize> {
        pairs.iter().map(|&(g, grp)| (GateId(g), grp)).collect()
    }

    #[test]
    fn single_group_has_no_cuts() {
        let c = parse_circuit("qubits 3\nh 0\ncx 0 1\ncx 1 2\nh 2").unwrap();
        let (cuts, subs) = extract_cuts_by_gate(&c, &groups(&[(1, 0), (2, 0)]), 1).unwrap();
        assert!(cuts.is_empty());
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].width, 3);
        assert_eq!(subs[0].gates.len(), 4);
        assert_eq!(subs[0].depth, 4);
    }

    #[test]
    fn one_cut_and_reentry() {
        // qubit 1 leaves group 0 for group 1 and comes back
        let c = parse_circuit("qubits 3\ncx 0 1\ncx 1 2\ncx 0 1").unwrap();
        let (cuts, subs) = extract_cuts_by_gate(&c, &groups(&[(0, 0), (1, 1), (2, 0)]), 2).unwrap();
        assert_eq!(cuts.len(), 2);
        assert!(cuts.iter().all(|c| c.qubit == QubitId(1)));
        assert_eq!(subs[0].width, 3);
        assert_eq!(subs[1].width, 2);
        let total: u32 = subs.iter().map(|s| s.width).sum();
        assert_eq!(total as usize - c.num_qubits(), cuts.len());
        assert_eq!(subs[0].wires.iter().filter(|w| w.from_cut).count(), 1);
        assert_eq!(subs[0].wires.iter().filter(|w| w.to_cut).count(), 1);
    }

    #[test]
    fn one_qubit_gates_attach_to_neighbours() {
        let c = parse_circuit("qubits 3\nh 1\ncx 0 1\nt 1\ncx 1 2\nh 2").unwrap();
        let (_, subs) = extract_cuts_by_gate(&c, &groups(&[(1, 0), (3, 1)]), 2).unwrap();
        assert_eq!(subs[0].gates, vec![GateId(0), GateId(1), GateId(2)]);
        assert_eq!(subs[1].gates, vec![GateId(3), GateId(4)]);
    }

    #[test]
    fn idle_qubits_get_their_own_subcircuit() {
        let c = parse_circuit("qubits 4\ncx 0 1\nh 2\nh 2").unwrap();
        let (cuts, subs) = extract_cuts_by_gate(&c, &groups(&[(0, 0)]), 1).unwrap();
        assert!(cuts.is_empty());
        assert_eq!(subs.len(), 3);
        assert_eq!((subs[1].width, subs[1].depth, subs[1].gates.len()), (1, 2, 2));
        assert_eq!((subs[2].width, subs[2].depth, subs[2].gates.len()), (1, 0, 0));
        let total: u32 = subs.iter().map(|s| s.width).sum();
        assert_eq!(total as usize, c.num_qubits());
    }

    #[test]
    fn missing_gate_is_an_error() {
        let c = parse_circuit("qubits 2\ncx 0 1\ncx 0 1").unwrap();
        assert_eq!(
            extract_cuts_by_gate(&c, &groups(&[(0, 0)]), 1),
            Err(Error::MissingGate(1))
        );
    }

    #[test]
    fn subcircuit_text_reparses() {
        let c = parse_circuit("qubits 3\ncx 0 1\nrz 1 0.5\ncx 1 2").unwrap();
        let (_, subs) = extract_cuts_by_gate(&c, &groups(&[(0, 0), (2, 1)]), 2).unwrap();
        let text = subs[1].to_text(&c);
        assert!(text.contains("# init"));
        let sub = parse_circuit(&text).unwrap();
        assert_eq!(sub.num_qubits(), 2);
        assert_eq!(sub.gates().len(), 1);
        assert!(subs[0].to_text(&c).contains("# measure"));
    }

    fn sub(id: usize, width: u32, depth: u32) -> Subcircuit {
        Subcircuit {
            id,
            width,
            depth,
            gates: vec![],
            wires: vec![],
            local_qubits: vec![],
        }
    }

    #[test]
    fn utilization_full_worker() {
        let pool = WorkerPool::uniform(1, 20).unwrap();
        let subs = [sub(0, 20, 7)];
        let s = closest_first_schedule(&pool, &[20]).unwrap();
        let r = utilization_report(&s, &subs, &pool);
        assert_eq!(r.workers[0].utilization, Some(1.0));
        assert_eq!(r.system, Some(1.0));
    }

    #[test]
    fn utilization_depth_weighted() {
        let pool = WorkerPool::uniform(1, 25).unwrap();
        let subs = [sub(0, 23, 10), sub(1, 24, 10)];
        let s = closest_first_schedule(&pool, &[23, 24]).unwrap();
        let r = utilization_report(&s, &subs, &pool);
        assert!((r.workers[0].utilization.unwrap() - 0.94).abs() < 1e-12);
        assert_eq!(r.workers[0].accumulated_depth, 20);
    }

    #[test]
    fn idle_worker_has_no_utilization() {
        let pool = WorkerPool::uniform(2, 10).unwrap();
        let subs = [sub(0, 5, 3)];
        let s = Schedule::from_assignment(&pool, vec![vec![0], vec![]]).unwrap();
        let r = utilization_report(&s, &subs, &pool);
        assert_eq!(r.workers[1].utilization, None);
        assert!((r.system.unwrap() - 0.5).abs() < 1e-12);
    }
}
