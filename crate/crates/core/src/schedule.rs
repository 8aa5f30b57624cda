// SPDX-License-Identifier: Apache-2.0

//! Worker pools, closest-first subcircuit scheduling and the two-tier
//! objective (cut count, then idle qubit slots).

use std::cmp::Reverse;
use std::fs;
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Worker {
    pub id: String,
    pub capacity: u32,
}

/// Workers in configuration order. Ties between equal capacities always go to
/// the worker listed first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkerPool {
    workers: Vec<Worker>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PoolFile {
    List(Vec<Worker>),
    Table { workers: Vec<Worker> },
}

impl WorkerPool {
    pub fn new(workers: Vec<Worker>) -> Result<Self> {
        if workers.is_empty() {
            return Err(Error::InvalidPool("pool has no workers".into()));
        }
        for (i, w) in workers.iter().enumerate() {
            if w.capacity < 2 {
                return Err(Error::InvalidPool(format!(
                    "worker `{}` has capacity {}; at least 2 qubits are required",
                    w.id, w.capacity
                )));
            }
            if workers[..i].iter().any(|o| o.id == w.id) {
                return Err(Error::InvalidPool(format!("duplicate worker id `{}`", w.id)));
            }
        }
        Ok(WorkerPool { workers })
    }

    /// `count` workers named `W1..` sharing one capacity.
    pub fn uniform(count: usize, capacity: u32) -> Result<Self> {
        Self::from_capacities(&vec![capacity; count])
    }

    /// Workers named `W1..` with the given capacities.
    pub fn from_capacities(capacities: &[u32]) -> Result<Self> {
        Self::new(
            capacities
                .iter()
                .enumerate()
                .map(|(i, &capacity)| Worker {
                    id: format!("W{}", i + 1),
                    capacity,
                })
                .collect(),
        )
    }

    /// Accepts `[{"id":..,"capacity":..}]` or `{"workers":[..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PoolFile = serde_json::from_str(text).map_err(|e| Error::InvalidPool(e.to_string()))?;
        Self::from_file(file)
    }

    /// Accepts a `[[workers]]` array of tables.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: PoolFile = toml::from_str(text).map_err(|e| Error::InvalidPool(e.to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: PoolFile) -> Result<Self> {
        match file {
            PoolFile::List(w) | PoolFile::Table { workers: w } => Self::new(w),
        }
    }

    /// Loads a pool file, choosing TOML for `.toml` and JSON otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidPool(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn workers(&self) -> &[Worker] {
        &self.workers
    }

    pub fn len(&self) -> usize {
        self.workers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.workers.is_empty()
    }

    pub fn capacity(&self, worker: usize) -> u32 {
        self.workers[worker].capacity
    }

    pub fn max_capacity(&self) -> u32 {
        self.workers.iter().map(|w| w.capacity).max().unwrap_or(0)
    }

    /// Worker with the smallest capacity that still fits `width`; ties go to
    /// the earlier worker.
    pub fn closest_fit(&self, width: u32) -> Option<usize> {
        self.workers
            .iter()
            .enumerate()
            .filter(|(_, w)| w.capacity >= width)
            .min_by_key(|&(i, w)| (w.capacity, i))
            .map(|(i, _)| i)
    }
}

/// Partition ids assigned to each worker, indexed like the pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    workers: Vec<String>,
    assignment: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assignment
    }

    pub fn worker_ids(&self) -> &[String] {
        &self.workers
    }

    pub fn partitions_of(&self, worker: usize) -> &[usize] {
        &self.assignment[worker]
    }

    pub fn worker_of(&self, partition: usize) -> Option<usize> {
        self.assignment.iter().position(|ps| ps.contains(&partition))
    }

    pub fn loads(&self) -> Vec<usize> {
        self.assignment.iter().map(Vec::len).collect()
    }

    /// Builds a schedule from explicit per-worker lists (pool order).
    pub fn from_assignment(pool: &WorkerPool, assignment: Vec<Vec<usize>>) -> Result<Self> {
        if assignment.len() != pool.len() {
            return Err(Error::InvalidPool(format!(
                "assignment lists {} workers, pool has {}",
                assignment.len(),
                pool.len()
            )));
        }
        Ok(Schedule {
            workers: pool.workers().iter().map(|w| w.id.clone()).collect(),
            assignment,
        })
    }
}

impl Serialize for Schedule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.workers.len()))?;
        for (id, ps) in self.workers.iter().zip(&self.assignment) {
            map.serialize_entry(id, ps)?;
        }
        map.end()
    }
}

/// Cut count and idle qubit slots; compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ObjectivePair {
    pub nc: i64,
    pub ru: u64,
}

/// Closest-first placement followed by count rebalancing.
///
/// Every partition first goes to its closest-fitting worker. Workers are then
/// visited by descending capacity; for the visited worker `W`, the eligible
/// set is every worker at least as large as `W`, `max = ceil(load / |set|)`
/// and `min = max - 1`. Eligible workers are filled in ascending capacity,
/// first up to `min` and then up to `max`, by moving partitions off `W`
/// while `W` holds more than `max`. A move takes the widest partition on `W`
/// that fits the destination, lowest id on ties.
pub fn closest_first_schedule(pool: &WorkerPool, widths: &[u32]) -> Result<Schedule> {
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); pool.len()];
    for (p, &w) in widths.iter().enumerate() {
        let worker = pool.closest_fit(w).ok_or(Error::Unschedulable {
            width: w,
            max_capacity: pool.max_capacity(),
        })?;
        assignment[worker].push(p);
    }

    let mut by_capacity: Vec<usize> = (0..pool.len()).collect();
    by_capacity.sort_by_key(|&i| (Reverse(pool.capacity(i)), i));

    for &src in &by_capacity {
        let src_cap = pool.capacity(src);
        let mut eligible: Vec<usize> = (0..pool.len()).filter(|&j| pool.capacity(j) >= src_cap).collect();
        eligible.sort_by_key(|&j| (pool.capacity(j), j));
        let total: usize = eligible.iter().map(|&j| assignment[j].len()).sum();
        let max = total.div_ceil(eligible.len());
        let min = max.saturating_sub(1);
        for &dst in &eligible {
            if dst == src {
                continue;
            }
            for bound in [min, max] {
                while assignment[src].len() > max && assignment[dst].len() < bound {
                    if !move_one(&mut assignment, widths, pool, src, dst) {
                        break;
                    }
                }
            }
        }
    }
    for ps in &mut assignment {
        ps.sort_unstable();
    }
    Schedule::from_assignment(pool, assignment)
}

fn move_one(assignment: &mut [Vec<usize>], widths: &[u32], pool: &WorkerPool, src: usize, dst: usize) -> bool {
    let cap = pool.capacity(dst);
    let pick = assignment[src]
        .iter()
        .enumerate()
        .filter(|(_, &p)| widths[p] <= cap)
        .max_by_key(|&(_, &p)| (widths[p], Reverse(p)))
        .map(|(pos, _)| pos);
    match pick {
        Some(pos) => {
            let p = assignment[src].remove(pos);
            assignment[dst].push(p);
            true
        }
        None => false,
    }
}

/// `nc = Σ widths - qc_input`; `ru = Σ (capacity - width)` over every
/// scheduled partition.
pub fn objectives(schedule: &Schedule, widths: &[u32], pool: &WorkerPool, qc_input: usize) -> ObjectivePair {
    let total: i64 = widths.iter().map(|&w| i64::from(w)).sum();
    let ru = schedule
        .assignment
        .iter()
        .enumerate()
        .flat_map(|(wi, ps)| ps.iter().map(move |&p| (wi, p)))
        .map(|(wi, p)| u64::from(pool.capacity(wi).saturating_sub(widths[p])))
        .sum();
    ObjectivePair {
        nc: total - qc_input as i64,
        ru,
    }
}
