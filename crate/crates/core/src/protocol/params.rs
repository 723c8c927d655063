// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use crate::error::{QcsError, Result};
use crate::linalg::{QubitIndex, MAX_QUBITS};

/// Inputs of one clock-synchronization run: `m` working qubits, tick rate
/// `omega` and the true offset `delta`. Only the product `omega * delta`
/// enters the dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    m: usize,
    omega: f64,
    delta: f64,
}

impl ProtocolParams {
    pub fn new(m: usize, omega: f64, delta: f64) -> Result<Self> {
        if m == 0 {
            return Err(QcsError::InvalidParams("m must be at least 1".into()));
        }
        if m + 1 > MAX_QUBITS {
            return Err(QcsError::InvalidParams(format!(
                "m = {m} needs {} qubits, more than the supported {MAX_QUBITS}",
                m + 1
            )));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(QcsError::InvalidParams(format!("omega must be positive, got {omega}")));
        }
        if !delta.is_finite() {
            return Err(QcsError::InvalidParams(format!("delta must be finite, got {delta}")));
        }
        Ok(Self { m, omega, delta })
    }

    /// `omega = 1`, so `delta` is the dimensionless `omega * delta`.
    pub fn from_omega_delta(m: usize, omega_delta: f64) -> Result<Self> {
        Self::new(m, 1.0, omega_delta)
    }

    /// One of the four two-qubit experiments: `omega * delta = k / 4`,
    /// `phi_k = -k pi / 2`.
    pub fn from_phi_index(k: usize) -> Result<Self> {
        if k > 3 {
            return Err(QcsError::InvalidParams(format!("phi index must be 0..=3, got {k}")));
        }
        Self::from_omega_delta(2, k as f64 / 4.0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn omega_delta(&self) -> f64 {
        self.omega * self.delta
    }

    /// Rotation angle of the first layer: `phi = -2 pi omega delta`, so that
    /// `omega delta = k/4` gives `phi_k = -k pi / 2`.
    pub fn phi(&self) -> f64 {
        -2.0 * PI * self.omega_delta()
    }

    pub fn register_size(&self) -> usize {
        self.m + 1
    }

    pub fn working_qubits(&self) -> Vec<QubitIndex> {
        (0..self.m).map(QubitIndex).collect()
    }

    pub fn ancilla(&self) -> QubitIndex {
        QubitIndex(self.m)
    }

    /// `2^m * omega * delta`, the index the output distribution peaks at.
    pub fn scaled_phase(&self) -> f64 {
        (1u64 << self.m) as f64 * self.omega_delta()
    }
}

/// `phi_k = -k pi / 2`.
pub fn phi_k(k: usize) -> f64 {
    -(k as f64) * PI / 2.0
}
