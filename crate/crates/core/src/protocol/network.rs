// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;

use crate::error::{QcsError, Result};
use crate::linalg::{
    apply_unitary, cnot, controlled_phase, embed, hadamard, rz, swap, ComplexMatrix, DeviationDensityMatrix,
    Ket, QubitIndex, C64,
};

/// Abstract gate of the clock-synchronization network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Hadamard,
    /// First target is the control.
    Cnot,
    /// Ticking-qubit handshake on (layer qubit, ancilla):
    /// `diag(e^{-i theta}, 1, 1, e^{i theta})` with `theta = 2^layer pi omega delta`.
    TqhPhase { layer: usize, omega_delta: f64 },
    /// `diag(1, 1, 1, e^{i angle})`.
    ControlledPhase(f64),
    Swap,
    /// `R_z(angle) = exp(i angle I_z)`.
    ZRotation(f64),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Hadamard | GateKind::ZRotation(_) => 1,
            _ => 2,
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        match *self {
            GateKind::Hadamard => hadamard(),
            GateKind::Cnot => cnot(),
            GateKind::TqhPhase { layer, omega_delta } => {
                let theta = (1u64 << layer) as f64 * PI * omega_delta;
                let one = C64::new(1.0, 0.0);
                ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, -theta), one, one, C64::from_polar(1.0, theta)])
            }
            GateKind::ControlledPhase(angle) => controlled_phase(angle),
            GateKind::Swap => swap(),
            GateKind::ZRotation(angle) => rz(angle),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Hadamard => write!(f, "H"),
            GateKind::Cnot => write!(f, "CNOT"),
            GateKind::TqhPhase { layer, omega_delta } => write!(f, "TQH[l={layer}, wd={omega_delta}]"),
            GateKind::ControlledPhase(a) => write!(f, "CPHASE({a})"),
            GateKind::Swap => write!(f, "SWAP"),
            GateKind::ZRotation(a) => write!(f, "RZ({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<QubitIndex>,
}

/// Time-ordered list of gates on a fixed-size register.
#[derive(Debug, Clone, PartialEq)]
pub struct GateNetwork {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl GateNetwork {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, kind: GateKind, targets: &[usize]) -> Result<&mut Self> {
        if targets.len() != kind.arity() {
            return Err(QcsError::DimensionMismatch { expected: kind.arity(), actual: targets.len() });
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.num_qubits {
                return Err(QcsError::QubitOutOfRange { index: t, size: self.num_qubits });
            }
            if targets[..i].contains(&t) {
                return Err(QcsError::DuplicateTarget(t));
            }
        }
        self.gates.push(Gate { kind, targets: targets.iter().map(|&t| QubitIndex(t)).collect() });
        Ok(self)
    }

    pub fn append(&mut self, other: &GateNetwork) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(QcsError::DimensionMismatch { expected: self.num_qubits, actual: other.num_qubits });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Full-register unitary; later gates multiply from the left.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.num_qubits;
        let mut u = ComplexMatrix::identity(dim);
        for g in &self.gates {
            let full = embed(&g.kind.matrix(), &g.targets, self.num_qubits)?;
            u = &full * &u;
        }
        Ok(u)
    }

    pub fn apply_to_ket(&self, ket: &mut Ket) -> Result<()> {
        if ket.num_qubits() != self.num_qubits {
            return Err(QcsError::DimensionMismatch { expected: self.num_qubits, actual: ket.num_qubits() });
        }
        for g in &self.gates {
            ket.apply_local(&g.kind.matrix(), &g.targets)?;
        }
        Ok(())
    }

    pub fn apply_to_density(&self, rho: &DeviationDensityMatrix) -> Result<DeviationDensityMatrix> {
        apply_unitary(rho, &self.unitary()?)
    }
}
