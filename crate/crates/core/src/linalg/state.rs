// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::{ComplexMatrix, C64, MAX_QUBITS};
use crate::error::{QcsError, Result};

/// Zero-based qubit position in a register. Index 0 is spin 1 (C1), which is
/// the most significant bit of every basis label: `|010>` means qubit index 1
/// (spin 2) is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitIndex(pub usize);

impl QubitIndex {
    pub fn new(index: usize, register_size: usize) -> Result<Self> {
        if index >= register_size {
            return Err(QcsError::QubitOutOfRange { index, size: register_size });
        }
        Ok(Self(index))
    }

    /// Bit shift of this qubit inside a basis index of an `n`-qubit register.
    pub fn shift(self, n: usize) -> usize {
        n - 1 - self.0
    }

    /// One-based spin label as used in pulse programs (`1` = C1).
    pub fn label(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

pub(crate) fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(QcsError::RegisterTooLarge(n));
    }
    Ok(())
}

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(QcsError::DimensionMismatch {
                expected: amps.len().next_power_of_two(),
                actual: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(QcsError::InvalidParams(format!("ket norm^2 is {norm}, expected 1")));
        }
        Ok(Self { amps })
    }

    /// Computational basis state `|index>` of an `n`-qubit register.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_register(n)?;
        let dim = 1 << n;
        if index >= dim {
            return Err(QcsError::DimensionMismatch { expected: dim, actual: index });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a `2^k`-dimensional gate to the ordered `targets` in place,
    /// without forming the full-register operator.
    pub fn apply_local(&mut self, gate: &ComplexMatrix, targets: &[QubitIndex]) -> Result<()> {
        let n = self.num_qubits();
        super::ops::validate_targets(gate, targets, n)?;
        let k = targets.len();
        let sub = 1usize << k;
        let target_mask: usize = targets.iter().map(|q| 1usize << q.shift(n)).sum();
        let spread = |local: usize| -> usize {
            let mut idx = 0;
            for (pos, q) in targets.iter().enumerate() {
                if local >> (k - 1 - pos) & 1 == 1 {
                    idx |= 1 << q.shift(n);
                }
            }
            idx
        };
        let offsets: Vec<usize> = (0..sub).map(spread).collect();
        let mut buf = vec![C64::new(0.0, 0.0); sub];
        for base in 0..self.dim() {
            if base & target_mask != 0 {
                continue;
            }
            for (r, slot) in buf.iter_mut().enumerate() {
                *slot = (0..sub).map(|c| gate.get(r, c) * self.amps[base | offsets[c]]).sum();
            }
            for (r, v) in buf.iter().enumerate() {
                self.amps[base | offsets[r]] = *v;
            }
        }
        Ok(())
    }

    /// Outer product `|psi><psi|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |r, c| self.amps[r] * self.amps[c].conj())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Hermitian deviation density matrix. The trace is not constrained: NMR
/// deviation states are typically traceless.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationDensityMatrix(ComplexMatrix);

impl DeviationDensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;

    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.num_qubits().is_none() {
            return Err(QcsError::DimensionMismatch {
                expected: m.dim().next_power_of_two(),
                actual: m.dim(),
            });
        }
        let scale = m.max_abs().max(1.0);
        let err = m.hermiticity_error();
        if err > Self::HERMITIAN_TOL * scale {
            return Err(QcsError::NotHermitian(err));
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Wraps a matrix known to be Hermitian up to rounding and symmetrizes it.
    pub(crate) fn from_hermitian(m: ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_ket(ket: &Ket) -> Self {
        Self(ket.projector())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.0.num_qubits().expect("dimension checked on construction")
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0.get(r, c)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    pub fn overlap(&self, other: &Self) -> f64 {
        self.0.trace_product(&other.0).re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0).frobenius_norm()
    }

    /// Frobenius distance between the two matrices after scaling each to unit
    /// Frobenius norm. Sign-sensitive.
    pub fn normalized_distance(&self, other: &Self) -> f64 {
        let a = self.0.frobenius_norm();
        let b = other.0.frobenius_norm();
        if a == 0.0 || b == 0.0 {
            return if a == b { 0.0 } else { 1.0 };
        }
        (&self.0.scale_real(1.0 / a) - &other.0.scale_real(1.0 / b)).frobenius_norm()
    }
}
