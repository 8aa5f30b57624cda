// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the library. The CLI wraps these with `anyhow` context.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange {
        line: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("line {line}: two-qubit gate `{name}` acts twice on qubit {qubit}")]
    RepeatedQubit { line: usize, name: String, qubit: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid generator arguments: {0}")]
    Generator(String),
    #[error("invalid worker pool: {0}")]
    InvalidPool(String),
    #[error("invalid detection parameters: {0}")]
    InvalidParams(String),
    #[error("unknown community {0}")]
    UnknownCommunity(usize),
    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),
    #[error("subcircuit of width {width} exceeds every worker capacity (max {max_capacity})")]
    Unschedulable { width: u32, max_capacity: u32 },
    #[error("grouping does not cover gate {0}")]
    MissingGate(usize),
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
