// SPDX-License-Identifier: Apache-2.0

//! Merge optimisation over the community super-vertex graph.
//!
//! Every community becomes a super vertex weighted by its qubit count, and
//! crossing gate-graph edges collapse into super edges. The optimiser starts
//! with one group per super vertex and repeatedly sweeps the super vertices
//! in ascending id, trying to relocate each into a neighbouring group. A
//! relocation is feasible when no group exceeds the largest worker; feasible
//! candidates are scheduled with [`closest_first_schedule`] and scored with
//! [`objectives`]. The best candidate of a sweep step is applied when its
//! `(nc, ru)` pair is lexicographically smaller than the current one.
//!
//! A sweep without moves is followed by two wider steps under the same
//! acceptance rule: the best union of two adjacent groups, then the best
//! pair of consecutive relocations. Either one restarts the sweeps; the
//! search stops when neither improves.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::community::{all_community_qubits, Partition};
use crate::error::Result;
use crate::graph::GateGraph;
use crate::schedule::{closest_first_schedule, objectives, ObjectivePair, Schedule, WorkerPool};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedGraph {
    weights: Vec<u32>,
    edges: BTreeMap<(usize, usize), u32>,
    adjacency: Vec<Vec<(usize, u32)>>,
    origin: Vec<Vec<usize>>,
}

impl MergedGraph {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Qubit count of each super vertex.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, sv: usize) -> u32 {
        self.weights[sv]
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> u32 {
        self.edges.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    pub fn neighbors(&self, sv: usize) -> &[(usize, u32)] {
        &self.adjacency[sv]
    }

    /// Gate-graph vertex indices folded into `sv`.
    pub fn origin(&self, sv: usize) -> &[usize] {
        &self.origin[sv]
    }

    /// `Σ wt - Σ internal super-edge weight` for an arbitrary set of super
    /// vertices.
    pub fn union_width(&self, svs: &[usize]) -> u32 {
        let mut inside = vec![false; self.len()];
        for &s in svs {
            inside[s] = true;
        }
        let total: u32 = svs.iter().map(|&s| self.weights[s]).sum();
        let internal: u32 = self
            .edges()
            .filter(|&(a, b, _)| inside[a] && inside[b])
            .map(|(_, _, w)| w)
            .sum();
        total.saturating_sub(internal)
    }
}

/// Collapses each community into a super vertex. Edges inside a community
/// are dropped; crossing edges are summed per community pair.
pub fn build_merged_graph(graph: &GateGraph, partition: &Partition) -> Result<MergedGraph> {
    let weights = all_community_qubits(graph, partition);
    let mut edges = BTreeMap::new();
    for (i, j, w) in graph.edges() {
        let (a, b) = (partition.community_of(i), partition.community_of(j));
        if a != b {
            *edges.entry((a.min(b), a.max(b))).or_insert(0) += w;
        }
    }
    let mut adjacency = vec![Vec::new(); weights.len()];
    for (&(a, b), &w) in &edges {
        adjacency[a].push((b, w));
        adjacency[b].push((a, w));
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    Ok(MergedGraph {
        weights,
        edges,
        adjacency,
        origin: partition.communities(),
    })
}

/// Group of every super vertex and the qubit width of every group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAssignment {
    pub group_of: Vec<usize>,
    pub widths: Vec<u32>,
}

impl GroupAssignment {
    pub fn num_groups(&self) -> usize {
        self.widths.len()
    }

    pub fn members(&self, group: usize) -> Vec<usize> {
        (0..self.group_of.len())
            .filter(|&s| self.group_of[s] == group)
            .collect()
    }

    /// Group of each gate-graph vertex.
    pub fn vertex_groups(&self, merged: &MergedGraph) -> Vec<usize> {
        let total: usize = (0..merged.len()).map(|s| merged.origin(s).len()).sum();
        let mut out = vec![0; total];
        for sv in 0..merged.len() {
            for &v in merged.origin(sv) {
                out[v] = self.group_of[sv];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizeResult {
    pub grouping: GroupAssignment,
    pub schedule: Schedule,
    pub objectives: ObjectivePair,
    pub sweeps: usize,
    pub moves: usize,
    /// Whole-group unions applied after sweeps that moved nothing.
    pub merges: usize,
    /// Two-step relocations applied when neither moves nor unions helped.
    pub pairs: usize,
}

/// A scored candidate handed to an optimiser observer.
#[derive(Debug)]
pub struct Candidate<'a> {
    pub group_of: &'a [usize],
    pub widths: &'a [u32],
    pub objectives: ObjectivePair,
    pub accepted: bool,
}

pub fn fitcut_optimize(merged: &MergedGraph, pool: &WorkerPool, qc_input: usize) -> Result<OptimizeResult> {
    fitcut_optimize_observed(merged, pool, qc_input, |_| {})
}

/// [`fitcut_optimize`] reporting every feasible candidate it scores; each
/// applied candidate is reported a second time with `accepted` set.
pub fn fitcut_optimize_observed(
    merged: &MergedGraph,
    pool: &WorkerPool,
    qc_input: usize,
    mut observe: impl FnMut(&Candidate<'_>),
) -> Result<OptimizeResult> {
    let n = merged.len();
    let max_cap = pool.max_capacity();
    let mut group_of: Vec<usize> = (0..n).collect();
    let mut widths: Vec<u32> = merged.weights().to_vec();
    let mut sizes: Vec<usize> = vec![1; n];

    let score = |widths: &[u32]| -> Result<ObjectivePair> {
        let s = closest_first_schedule(pool, widths)?;
        Ok(objectives(&s, widths, pool, qc_input))
    };
    let mut current = score(&widths)?;
    let mut sweeps = 0;
    let mut moves = 0;
    let mut merges = 0;
    let mut pairs = 0;
    let mut link: BTreeMap<usize, u32> = BTreeMap::new();

    loop {
        sweeps += 1;
        let mut moved = false;
        for sv in 0..n {
            let home = group_of[sv];
            link.clear();
            for &(u, w) in merged.neighbors(sv) {
                *link.entry(group_of[u]).or_insert(0) += w;
            }
            let home_link = link.get(&home).copied().unwrap_or(0);
            let wt = merged.weight(sv);
            let home_width = widths[home] + home_link - wt;
            let empties = sizes[home] == 1;

            let mut best: Option<(ObjectivePair, usize, Vec<u32>, Vec<usize>)> = None;
            for (&dest, &dest_link) in &link {
                if dest == home {
                    continue;
                }
                let dest_width = widths[dest] + wt - dest_link;
                if dest_width > max_cap || (!empties && home_width > max_cap) {
                    continue;
                }
                let (cand_widths, cand_groups) =
                    relocate(&widths, &group_of, sv, home, dest, home_width, dest_width, empties);
                let obj = score(&cand_widths)?;
                observe(&Candidate {
                    group_of: &cand_groups,
                    widths: &cand_widths,
                    objectives: obj,
                    accepted: false,
                });
                if best.as_ref().map_or(true, |(b, ..)| obj < *b) {
                    best = Some((obj, dest, cand_widths, cand_groups));
                }
            }

            if let Some((obj, dest, cand_widths, cand_groups)) = best {
                if obj < current {
                    observe(&Candidate {
                        group_of: &cand_groups,
                        widths: &cand_widths,
                        objectives: obj,
                        accepted: true,
                    });
                    sizes[dest] += 1;
                    sizes[home] -= 1;
                    if empties {
                        sizes.remove(home);
                    }
                    widths = cand_widths;
                    group_of = cand_groups;
                    current = obj;
                    moved = true;
                    moves += 1;
                }
            }
        }
        if !moved {
            if let Some((obj, keep, gone, cand_widths, cand_groups)) =
                best_merge(merged, &widths, &group_of, max_cap, &score, &mut observe)?
            {
                if obj < current {
                    observe(&Candidate {
                        group_of: &cand_groups,
                        widths: &cand_widths,
                        objectives: obj,
                        accepted: true,
                    });
                    sizes[keep] += sizes[gone];
                    sizes.remove(gone);
                    widths = cand_widths;
                    group_of = cand_groups;
                    current = obj;
                    merges += 1;
                    continue;
                }
            }
            if let Some((obj, cand_widths, cand_groups)) =
                best_pair(merged, &widths, &group_of, max_cap, &score, &mut observe)?
            {
                if obj < current {
                    observe(&Candidate {
                        group_of: &cand_groups,
                        widths: &cand_widths,
                        objectives: obj,
                        accepted: true,
                    });
                    widths = cand_widths;
                    group_of = cand_groups;
                    sizes = group_sizes(&group_of, widths.len());
                    current = obj;
                    pairs += 1;
                    continue;
                }
            }
            break;
        }
    }

    let schedule = closest_first_schedule(pool, &widths)?;
    let objectives = objectives(&schedule, &widths, pool, qc_input);
    Ok(OptimizeResult {
        grouping: GroupAssignment { group_of, widths },
        schedule,
        objectives,
        sweeps,
        moves,
        merges,
        pairs,
    })
}

type Merge = (ObjectivePair, usize, usize, Vec<u32>, Vec<usize>);

/// Best-scoring union of two adjacent groups that fits `max_cap`, as
/// `(objectives, kept id, removed id, widths, labels)`.
fn best_merge(
    merged: &MergedGraph,
    widths: &[u32],
    group_of: &[usize],
    max_cap: u32,
    score: &impl Fn(&[u32]) -> Result<ObjectivePair>,
    observe: &mut impl FnMut(&Candidate<'_>),
) -> Result<Option<Merge>> {
    let mut between: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for (a, b, w) in merged.edges() {
        let (ga, gb) = (group_of[a], group_of[b]);
        if ga != gb {
            *between.entry((ga.min(gb), ga.max(gb))).or_insert(0) += w;
        }
    }
    let mut best: Option<Merge> = None;
    for (&(keep, gone), &shared) in &between {
        let width = widths[keep] + widths[gone] - shared;
        if width > max_cap {
            continue;
        }
        let mut w = widths.to_vec();
        w[keep] = width;
        w.remove(gone);
        let g: Vec<usize> = group_of
            .iter()
            .map(|&l| match l.cmp(&gone) {
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => l - 1,
                std::cmp::Ordering::Less => l,
            })
            .collect();
        let obj = score(&w)?;
        observe(&Candidate {
            group_of: &g,
            widths: &w,
            objectives: obj,
            accepted: false,
        });
        if best.as_ref().map_or(true, |b| obj < b.0) {
            best = Some((obj, keep, gone, w, g));
        }
    }
    Ok(best)
}

type Pair = (ObjectivePair, Vec<u32>, Vec<usize>);

fn group_sizes(group_of: &[usize], groups: usize) -> Vec<usize> {
    let mut sizes = vec![0; groups];
    for &g in group_of {
        sizes[g] += 1;
    }
    sizes
}

/// `sv` moved to `dest` with both affected widths recomputed from super-edge
/// links, or `None` when either side would exceed `max_cap`.
fn relocated(
    merged: &MergedGraph,
    widths: &[u32],
    group_of: &[usize],
    sv: usize,
    dest: usize,
    max_cap: u32,
) -> Option<(Vec<u32>, Vec<usize>)> {
    let home = group_of[sv];
    if home == dest {
        return None;
    }
    let (mut home_link, mut dest_link) = (0, 0);
    for &(u, w) in merged.neighbors(sv) {
        if group_of[u] == home {
            home_link += w;
        } else if group_of[u] == dest {
            dest_link += w;
        }
    }
    let wt = merged.weight(sv);
    let empties = group_of.iter().filter(|&&g| g == home).count() == 1;
    let home_width = (widths[home] + home_link).checked_sub(wt)?;
    let dest_width = widths[dest] + wt - dest_link;
    if dest_width > max_cap || (!empties && home_width > max_cap) {
        return None;
    }
    Some(relocate(
        widths, group_of, sv, home, dest, home_width, dest_width, empties,
    ))
}

/// Best-scoring pair of consecutive relocations: `a` to a group it touches,
/// then `b` (a neighbour of `a` or a member of either group `a` touched) to a
/// group it touches afterwards. Every intermediate grouping must fit.
fn best_pair(
    merged: &MergedGraph,
    widths: &[u32],
    group_of: &[usize],
    max_cap: u32,
    score: &impl Fn(&[u32]) -> Result<ObjectivePair>,
    observe: &mut impl FnMut(&Candidate<'_>),
) -> Result<Option<Pair>> {
    let mut best: Option<Pair> = None;
    let mut dests = std::collections::BTreeSet::new();
    for a in 0..merged.len() {
        dests.clear();
        dests.extend(merged.neighbors(a).iter().map(|&(u, _)| group_of[u]));
        for &da in &dests {
            let Some((w1, g1)) = relocated(merged, widths, group_of, a, da, max_cap) else {
                continue;
            };
            let (old, new) = (group_of[a], g1[a]);
            let mut movers: Vec<usize> = merged.neighbors(a).iter().map(|&(u, _)| u).collect();
            movers.extend((0..merged.len()).filter(|&v| v != a && (group_of[v] == old || g1[v] == new)));
            movers.sort_unstable();
            movers.dedup();
            for b in movers {
                let mut second = std::collections::BTreeSet::new();
                second.extend(merged.neighbors(b).iter().map(|&(u, _)| g1[u]));
                for db in second {
                    let Some((w2, g2)) = relocated(merged, &w1, &g1, b, db, max_cap) else {
                        continue;
                    };
                    let obj = score(&w2)?;
                    observe(&Candidate {
                        group_of: &g2,
                        widths: &w2,
                        objectives: obj,
                        accepted: false,
                    });
                    if best.as_ref().map_or(true, |x| obj < x.0) {
                        best = Some((obj, w2, g2));
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Widths and group labels after moving `sv` from `home` to `dest`. An
/// emptied home group is removed and later ids shift down by one.
#[allow(clippy::too_many_arguments)]
fn relocate(
    widths: &[u32],
    group_of: &[usize],
    sv: usize,
    home: usize,
    dest: usize,
    home_width: u32,
    dest_width: u32,
    empties: bool,
) -> (Vec<u32>, Vec<usize>) {
    let mut w = widths.to_vec();
    let mut g = group_of.to_vec();
    w[dest] = dest_width;
    g[sv] = dest;
    if empties {
        w.remove(home);
        for label in &mut g {
            if *label > home {
                *label -= 1;
            }
        }
    } else {
        w[home] = home_width;
    }
    (w, g)
}

/// Smallest `N` with `capacity * N >= qc_input + N - 1`.
pub fn min_subcircuit_count(capacity: u32, qc_input: usize) -> u32 {
    assert!(capacity >= 2, "worker capacity must be at least 2");
    let extra = qc_input.saturating_sub(1) as u64;
    let per = u64::from(capacity - 1);
    extra.div_ceil(per).max(1) as u32
}
