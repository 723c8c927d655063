// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for registers of up to eight spin-1/2 qubits.
//!
//! Basis labels put qubit 1 in the most significant bit. Every operator is a
//! dense `2^n x 2^n` matrix; nothing here is sparse or lazily evaluated.

mod gates;
mod matrix;
mod ops;
mod state;

pub use gates::{
    cnot, controlled_phase, hadamard, kron_all, pauli, pauli_x, pauli_z, rotation, rz, spin, spin_on, swap,
    Axis,
};
pub use matrix::{global_phase, ComplexMatrix};
pub use ops::{apply_unitary, embed, matrix_exp, measure_distribution, Distribution};
pub use state::{DeviationDensityMatrix, Ket, QubitIndex};

pub type C64 = num_complex::Complex64;

/// Largest supported register.
pub const MAX_QUBITS: usize = 8;

/// Tolerance for gates built directly from closed forms.
pub const GATE_TOL: f64 = 1e-12;
/// Tolerance for matrix exponentials.
pub const EXP_TOL: f64 = 1e-10;
/// Tolerance for multi-step compiled pulse sequences.
pub const COMPILED_TOL: f64 = 1e-6;

pub fn qubits(indices: &[usize]) -> Vec<QubitIndex> {
    indices.iter().map(|&i| QubitIndex(i)).collect()
}
