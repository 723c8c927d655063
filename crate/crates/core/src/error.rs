// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the simulator layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcsError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("qubit index {index} out of range for a {size}-qubit register")]
    QubitOutOfRange { index: usize, size: usize },

    #[error("register of {0} qubits exceeds the supported maximum of {max}", max = crate::linalg::MAX_QUBITS)]
    RegisterTooLarge(usize),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state has zero trace")]
    ZeroTrace,

    #[error("at least one measured qubit is required")]
    EmptyTargets,

    #[error("invalid protocol parameters: {0}")]
    InvalidParams(String),

    #[error("layer {layer} out of range for m = {m}")]
    LayerOutOfRange { layer: usize, m: usize },

    #[error("ancilla qubit is not in |0> (population of |1> = {0:e})")]
    AncillaNotReset(f64),

    #[error("coupling evolution needs two distinct spins, got {0} and {0}")]
    SameSpin(usize),

    #[error("no refocusing schedule: {0}")]
    InfeasibleSchedule(String),

    #[error("program contains a gradient, which has no unitary propagator")]
    GradientInPropagator,

    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),

    #[error("invalid spin system: {0}")]
    InvalidSpinSystem(String),

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("tomography plan is not informationally complete (rank {rank} of {needed})")]
    RankDeficientPlan { rank: usize, needed: usize },

    #[error("zero-purity input to fidelity ({0})")]
    ZeroPurity(&'static str),

    #[error("invalid json matrix: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, QcsError>;
