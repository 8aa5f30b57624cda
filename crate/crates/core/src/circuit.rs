// SPDX-License-Identifier: Apache-2.0

//! Circuit intermediate representation and the line-oriented text format.
//!
//! ```text
//! qubits 3
//! h 0
//! cx 0 2        # comment
//! rz 1 0.25
//! ```
//!
//! After the gate name, the first token is always a qubit. The second token
//! is read as a qubit when it is a bare unsigned integer; every later token
//! is an angle. Angles should therefore be written with a decimal point or
//! exponent (`1.0`, not `1`), which is what [`Circuit::to_text`] emits.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub usize);

/// Gate identifier. Assigned in creation order; every downstream module keys
/// on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GateId(pub usize);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub id: GateId,
    pub name: String,
    pub qubits: Vec<QubitId>,
    pub params: Vec<f64>,
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Builds a circuit from an explicit gate list, validating every invariant.
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        let mut last: Option<GateId> = None;
        for g in &gates {
            if let Some(prev) = last {
                if g.id <= prev {
                    return Err(Error::InvalidCircuit(format!(
                        "gate ids must be strictly increasing ({} after {})",
                        g.id, prev
                    )));
                }
            }
            last = Some(g.id);
            check_gate(g, num_qubits)?;
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn two_qubit_gates(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(|g| g.is_two_qubit())
    }

    pub fn two_qubit_count(&self) -> usize {
        self.two_qubit_gates().count()
    }

    /// Qubits touched by at least one two-qubit gate.
    pub fn active_width(&self) -> usize {
        let mut seen = vec![false; self.num_qubits];
        for g in self.two_qubit_gates() {
            for q in &g.qubits {
                seen[q.0] = true;
            }
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn gate(&self, id: GateId) -> Option<&Gate> {
        self.gates
            .binary_search_by_key(&id, |g| g.id)
            .ok()
            .map(|i| &self.gates[i])
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_circuit(text)
    }

    /// Renders the circuit in the text format. Reparsing the output yields an
    /// identical circuit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "qubits {}", self.num_qubits).unwrap();
        for g in &self.gates {
            out.push_str(&g.name);
            for q in &g.qubits {
                write!(out, " {}", q.0).unwrap();
            }
            for p in &g.params {
                write!(out, " {:?}", p).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn check_gate(g: &Gate, num_qubits: usize) -> Result<()> {
    match g.qubits.as_slice() {
        [a] if a.0 < num_qubits => Ok(()),
        [a, b] if a.0 < num_qubits && b.0 < num_qubits && a != b => Ok(()),
        [_, _] if g.qubits[0] == g.qubits[1] => Err(Error::InvalidCircuit(format!(
            "gate {} acts twice on qubit {}",
            g.id, g.qubits[0]
        ))),
        [_] | [_, _] => Err(Error::InvalidCircuit(format!(
            "gate {} touches a qubit outside 0..{}",
            g.id, num_qubits
        ))),
        _ => Err(Error::InvalidCircuit(format!(
            "gate {} has arity {}; only one- and two-qubit gates are supported",
            g.id,
            g.qubits.len()
        ))),
    }
}

/// Appends gates with sequential ids. Used by the parser and the generators.
#[derive(Debug)]
pub struct CircuitBuilder {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(num_qubits: usize) -> Self {
        CircuitBuilder {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn push(&mut self, name: &str, qubits: &[usize], params: &[f64]) -> &mut Self {
        let id = GateId(self.gates.len());
        self.gates.push(Gate {
            id,
            name: name.to_string(),
            qubits: qubits.iter().map(|&q| QubitId(q)).collect(),
            params: params.to_vec(),
        });
        self
    }

    pub fn one(&mut self, name: &str, q: usize) -> &mut Self {
        self.push(name, &[q], &[])
    }

    pub fn two(&mut self, name: &str, a: usize, b: usize) -> &mut Self {
        self.push(name, &[a, b], &[])
    }

    pub fn build(self) -> Result<Circuit> {
        Circuit::new(self.num_qubits, self.gates)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_uint(tok: &str) -> bool {
    !tok.is_empty() && tok.bytes().all(|b| b.is_ascii_digit())
}

fn is_gate_name(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the text format. Gate ids are assigned sequentially from 0 in file
/// order; errors carry the 1-based line number.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut builder: Option<CircuitBuilder> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = strip_comment(raw).split_whitespace();
        let Some(head) = toks.next() else { continue };

        let Some(b) = builder.as_mut() else {
            if head != "qubits" {
                return Err(Error::Syntax {
                    line,
                    msg: format!("expected `qubits <n>` header, found `{head}`"),
                });
            }
            let n = toks
                .next()
                .filter(|t| is_uint(t))
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Syntax {
                    line,
                    msg: "`qubits` needs a non-negative integer".into(),
                })?;
            if n == 0 {
                return Err(Error::Syntax {
                    line,
                    msg: "circuit needs at least one qubit".into(),
                });
            }
            if let Some(extra) = toks.next() {
                return Err(Error::Syntax {
                    line,
                    msg: format!("unexpected token `{extra}` after qubit count"),
                });
            }
            builder = Some(CircuitBuilder::new(n));
            continue;
        };

        if !is_gate_name(head) {
            return Err(Error::Syntax {
                line,
                msg: format!("invalid gate name `{head}`"),
            });
        }
        if head == "qubits" {
            return Err(Error::Syntax {
                line,
                msg: "duplicate `qubits` header".into(),
            });
        }
        let rest: Vec<&str> = toks.collect();
        let parse_qubit = |tok: &str| -> Result<usize> {
            let q = tok.parse::<usize>().map_err(|_| Error::Syntax {
                line,
                msg: format!("invalid qubit index `{tok}`"),
            })?;
            if q >= b.num_qubits() {
                return Err(Error::QubitOutOfRange {
                    line,
                    qubit: q,
                    num_qubits: b.num_qubits(),
                });
            }
            Ok(q)
        };

        let Some(first) = rest.first() else {
            return Err(Error::Syntax {
                line,
                msg: format!("gate `{head}` has no qubit operand"),
            });
        };
        if !is_uint(first) {
            return Err(Error::Syntax {
                line,
                msg: format!("invalid qubit index `{first}`"),
            });
        }
        let mut qubits = vec![parse_qubit(first)?];
        let mut param_start = 1;
        if let Some(second) = rest.get(1).filter(|t| is_uint(t)) {
            let q = parse_qubit(second)?;
            if q == qubits[0] {
                return Err(Error::RepeatedQubit {
                    line,
                    name: head.to_string(),
                    qubit: q,
                });
            }
            qubits.push(q);
            param_start = 2;
        }
        let mut params = Vec::with_capacity(rest.len() - param_start);
        for tok in &rest[param_start..] {
            let p: f64 = tok.parse().map_err(|_| Error::Syntax {
                line,
                msg: format!("invalid parameter `{tok}`"),
            })?;
            if !p.is_finite() {
                return Err(Error::Syntax {
                    line,
                    msg: format!("non-finite parameter `{tok}`"),
                });
            }
            params.push(p);
        }
        b.push(head, &qubits, &params);
    }

    match builder {
        Some(b) => b.build(),
        None => Err(Error::Syntax {
            line: 1,
            msg: "missing `qubits <n>` header".into(),
        }),
    }
}
