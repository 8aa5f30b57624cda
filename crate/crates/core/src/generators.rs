// SPDX-License-Identifier: Apache-2.0

//! Deterministic benchmark circuits: Bernstein-Vazirani, a ripple-carry
//! adder, a hardware-efficient ansatz and a 2-D random grid circuit.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

/// Parses a BV secret. `ones` (or `all-ones`) expands to `n - 1` set bits,
/// `zeros` to none; anything else must be a `0`/`1` string of length `n - 1`.
pub fn parse_secret(spec: &str, n: usize) -> Result<Vec<bool>> {
    let len = n.saturating_sub(1);
    match spec {
        "ones" | "all-ones" => return Ok(vec![true; len]),
        "zeros" => return Ok(vec![false; len]),
        _ => {}
    }
    spec.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Generator(format!("secret must be a bitstring, found `{other}`"))),
        })
        .collect()
}

/// Bernstein-Vazirani: H on the data qubits, X then H on the ancilla
/// `n - 1`, one `cx(i, n-1)` per set secret bit in ascending `i`, closing H
/// on the data qubits.
pub fn gen_bv(n: usize, secret: &[bool]) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Generator(format!("BV needs at least 2 qubits, got {n}")));
    }
    if secret.len() != n - 1 {
        return Err(Error::Generator(format!(
            "secret has length {}, expected {}",
            secret.len(),
            n - 1
        )));
    }
    let anc = n - 1;
    let mut b = CircuitBuilder::new(n);
    for q in 0..anc {
        b.one("h", q);
    }
    b.one("x", anc).one("h", anc);
    for (i, _) in secret.iter().enumerate().filter(|(_, &bit)| bit) {
        b.two("cx", i, anc);
    }
    for q in 0..anc {
        b.one("h", q);
    }
    b.build()
}

/// Toffoli in the standard 6-CNOT Clifford+T decomposition.
fn ccx(b: &mut CircuitBuilder, c0: usize, c1: usize, t: usize) {
    b.one("h", t);
    b.two("cx", c1, t);
    b.one("tdg", t);
    b.two("cx", c0, t);
    b.one("t", t);
    b.two("cx", c1, t);
    b.one("tdg", t);
    b.two("cx", c0, t);
    b.one("t", c1);
    b.one("t", t);
    b.one("h", t);
    b.two("cx", c0, c1);
    b.one("t", c0);
    b.one("tdg", c1);
    b.two("cx", c0, c1);
}

fn maj(b: &mut CircuitBuilder, x: usize, y: usize, z: usize) {
    b.two("cx", z, y);
    b.two("cx", z, x);
    ccx(b, x, y, z);
}

fn uma(b: &mut CircuitBuilder, x: usize, y: usize, z: usize) {
    ccx(b, x, y, z);
    b.two("cx", z, x);
    b.two("cx", x, y);
}

/// Two-qubit gate count of [`gen_adder`]: 16 per register bit plus the
/// carry-out CNOT, i.e. `8n - 15`.
pub fn adder_two_qubit_count(n: usize) -> usize {
    16 * (n / 2 - 1) + 1
}

/// Cuccaro ripple-carry adder on two `k = n/2 - 1` bit registers.
///
/// Layout: qubit 0 is the carry-in, `1 + 2i` holds `b_i`, `2 + 2i` holds
/// `a_i`, and `n - 1` is the carry-out. The sequence is
/// `MAJ(c, b0, a0)`, `MAJ(a_{i-1}, b_i, a_i)` for `i = 1..k`, `cx(a_{k-1}, z)`,
/// then the UMA blocks in reverse. `MAJ(x,y,z) = cx(z,y) cx(z,x) ccx(x,y,z)`,
/// `UMA(x,y,z) = ccx(x,y,z) cx(z,x) cx(x,y)`, with each Toffoli expanded to
/// six CNOTs.
pub fn gen_adder(n: usize) -> Result<Circuit> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::Generator(format!(
            "adder needs an even qubit count >= 4, got {n}"
        )));
    }
    let k = n / 2 - 1;
    let a = |i: usize| 2 + 2 * i;
    let bq = |i: usize| 1 + 2 * i;
    let carry_in = 0;
    let carry_out = n - 1;

    let mut b = CircuitBuilder::new(n);
    maj(&mut b, carry_in, bq(0), a(0));
    for i in 1..k {
        maj(&mut b, a(i - 1), bq(i), a(i));
    }
    b.two("cx", a(k - 1), carry_out);
    for i in (1..k).rev() {
        uma(&mut b, a(i - 1), bq(i), a(i));
    }
    uma(&mut b, carry_in, bq(0), a(0));
    b.build()
}

/// Hardware-efficient ansatz: each layer applies `ry`/`rz` rotations on every
/// qubit followed by the linear chain `cx(i, i+1)`.
pub fn gen_hwea(n: usize, layers: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Generator(format!("HWEA needs at least 2 qubits, got {n}")));
    }
    let mut b = CircuitBuilder::new(n);
    for layer in 0..layers {
        for q in 0..n {
            let theta = 0.1 * (layer * n + q + 1) as f64;
            b.push("ry", &[q], &[theta]);
            b.push("rz", &[q], &[theta / 2.0]);
        }
        for q in 0..n - 1 {
            b.two("cx", q, q + 1);
        }
    }
    b.build()
}

/// True when the grid dimensions differ by at most two.
pub fn is_near_square(rows: usize, cols: usize) -> bool {
    rows.abs_diff(cols) <= 2
}

const SUPREMACY_ONE_QUBIT: [&str; 3] = ["sx", "sy", "t"];

/// Grid edges used by entangling layer `layer`. The four colorings
/// (horizontal from even columns, vertical from even rows, horizontal from
/// odd columns, vertical from odd rows) repeat with period four.
fn supremacy_pattern(rows: usize, cols: usize, layer: usize) -> Vec<(usize, usize)> {
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    match layer % 4 {
        0 | 2 => {
            let start = if layer % 4 == 0 { 0 } else { 1 };
            for r in 0..rows {
                for c in (start..cols.saturating_sub(1)).step_by(2) {
                    edges.push((idx(r, c), idx(r, c + 1)));
                }
            }
        }
        _ => {
            let start = if layer % 4 == 1 { 0 } else { 1 };
            for r in (start..rows.saturating_sub(1)).step_by(2) {
                for c in 0..cols {
                    edges.push((idx(r, c), idx(r + 1, c)));
                }
            }
        }
    }
    edges
}

/// 2-D random circuit on a `rows x cols` grid: an initial H layer, then
/// `depth` CZ layers over the cycling edge colorings, with a random
/// single-qubit gate from {sx, sy, t} on every qubit between consecutive
/// layers (never repeating a qubit's previous choice). Fully determined by
/// `seed`.
pub fn gen_supremacy(rows: usize, cols: usize, depth: usize, seed: u64) -> Result<Circuit> {
    let n = rows * cols;
    if n < 2 {
        return Err(Error::Generator(format!(
            "supremacy grid needs at least 2 qubits, got {rows}x{cols}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CircuitBuilder::new(n);
    for q in 0..n {
        b.one("h", q);
    }
    let mut previous: Vec<Option<&str>> = vec![None; n];
    for layer in 0..depth {
        for (x, y) in supremacy_pattern(rows, cols, layer) {
            b.two("cz", x, y);
        }
        if layer + 1 == depth {
            break;
        }
        for (q, prev) in previous.iter_mut().enumerate() {
            let choices: Vec<&str> = SUPREMACY_ONE_QUBIT
                .iter()
                .copied()
                .filter(|g| Some(*g) != *prev)
                .collect();
            let g = *choices.choose(&mut rng).expect("at least two choices remain");
            b.one(g, q);
            *prev = Some(g);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::QubitId;

    fn cx_pairs(c: &Circuit) -> Vec<(usize, usize)> {
        c.two_qubit_gates().map(|g| (g.qubits[0].0, g.qubits[1].0)).collect()
    }

    #[test]
    fn bv_counts() {
        let c = gen_bv(30, &parse_secret("ones", 30).unwrap()).unwrap();
        assert_eq!(c.two_qubit_count(), 29);
        assert_eq!(gen_bv(2, &[false]).unwrap().two_qubit_count(), 0);
        let c = gen_bv(5, &parse_secret("1010", 5).unwrap()).unwrap();
        assert_eq!(cx_pairs(&c), vec![(0, 4), (2, 4)]);
    }

    #[test]
    fn bv_errors() {
        assert!(gen_bv(5, &[true, false]).is_err());
        assert!(gen_bv(1, &[]).is_err());
        assert!(parse_secret("10x", 4).is_err());
    }

    #[test]
    fn adder_shapes() {
        let c = gen_adder(4).unwrap();
        assert!(c.gates().iter().all(|g| g.qubits.len() <= 2));
        assert_eq!(c.two_qubit_count(), adder_two_qubit_count(4));
        assert_eq!(c.two_qubit_count(), 17);
        assert!(gen_adder(5).is_err());
        assert!(gen_adder(2).is_err());
        let c30 = gen_adder(30).unwrap();
        assert_eq!(c30.two_qubit_count(), 225);
        assert_eq!(adder_two_qubit_count(30), 8 * 30 - 15);
        assert_eq!(c30.active_width(), 30);
    }

    #[test]
    fn adder_deterministic() {
        assert_eq!(gen_adder(12).unwrap(), gen_adder(12).unwrap());
    }

    #[test]
    fn hwea_counts() {
        assert_eq!(gen_hwea(3, 1).unwrap().two_qubit_count(), 2);
        assert_eq!(gen_hwea(4, 2).unwrap().two_qubit_count(), 6);
        let empty = gen_hwea(2, 0).unwrap();
        assert_eq!(empty.two_qubit_count(), 0);
        assert!(gen_hwea(1, 1).is_err());
        let c = gen_hwea(3, 1).unwrap();
        assert_eq!(cx_pairs(&c), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn supremacy_shape() {
        let c = gen_supremacy(7, 8, 8, 1).unwrap();
        assert_eq!(c.num_qubits(), 56);
        assert!(is_near_square(7, 8));
        assert!(!is_near_square(2, 8));
        let tiny = gen_supremacy(1, 2, 1, 3).unwrap();
        assert!(tiny.two_qubit_count() <= 1);
        let tiny4 = gen_supremacy(1, 2, 4, 3).unwrap();
        assert!(tiny4.two_qubit_count() <= 4);
    }

    #[test]
    fn supremacy_layers_are_matchings() {
        for layer in 0..4 {
            let edges = supremacy_pattern(5, 6, layer);
            let mut used = vec![false; 30];
            for (a, b) in edges {
                assert!(!used[a] && !used[b]);
                used[a] = true;
                used[b] = true;
            }
        }
    }

    #[test]
    fn supremacy_deterministic_by_seed() {
        let a = gen_supremacy(4, 5, 6, 42).unwrap();
        let b = gen_supremacy(4, 5, 6, 42).unwrap();
        let c = gen_supremacy(4, 5, 6, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.gates().iter().all(|g| g.qubits.iter().all(|q| *q < QubitId(20))));
    }
}
