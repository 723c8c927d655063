// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::SymmetricEigen;

use super::state::check_register;
use super::{ComplexMatrix, DeviationDensityMatrix, QubitIndex, C64};
use crate::error::{QcsError, Result};

pub(crate) fn validate_targets(gate: &ComplexMatrix, targets: &[QubitIndex], n: usize) -> Result<()> {
    check_register(n)?;
    let expected = 1usize << targets.len();
    if gate.dim() != expected {
        return Err(QcsError::DimensionMismatch { expected, actual: gate.dim() });
    }
    for (i, q) in targets.iter().enumerate() {
        if q.0 >= n {
            return Err(QcsError::QubitOutOfRange { index: q.0, size: n });
        }
        if targets[..i].contains(q) {
            return Err(QcsError::DuplicateTarget(q.0));
        }
    }
    Ok(())
}

/// Lifts a local gate on the ordered `targets` to the full `n`-qubit register.
/// The first target is the most significant bit of the gate's own basis.
pub fn embed(gate: &ComplexMatrix, targets: &[QubitIndex], n: usize) -> Result<ComplexMatrix> {
    validate_targets(gate, targets, n)?;
    let k = targets.len();
    let shifts: Vec<usize> = targets.iter().map(|q| q.shift(n)).collect();
    let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let local = |idx: usize| -> usize {
        shifts.iter().enumerate().fold(0, |acc, (pos, s)| acc | ((idx >> s) & 1) << (k - 1 - pos))
    };
    let dim = 1usize << n;
    Ok(ComplexMatrix::from_fn(dim, |r, c| {
        if r & !mask != c & !mask {
            C64::new(0.0, 0.0)
        } else {
            gate.get(local(r), local(c))
        }
    }))
}

/// `rho -> U rho U^dagger`.
pub fn apply_unitary(state: &DeviationDensityMatrix, u: &ComplexMatrix) -> Result<DeviationDensityMatrix> {
    if u.dim() != state.dim() {
        return Err(QcsError::DimensionMismatch { expected: state.dim(), actual: u.dim() });
    }
    Ok(DeviationDensityMatrix::from_hermitian(state.matrix().conjugate_by(u)))
}

/// Marginal computational-basis distribution over `targets`. Index `j` of
/// `probs` reads the targets in order with the first target as the most
/// significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub targets: Vec<QubitIndex>,
    pub probs: Vec<f64>,
}

impl Distribution {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn bitstring(&self, j: usize) -> String {
        let k = self.targets.len();
        (0..k).map(|pos| if j >> (k - 1 - pos) & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// Probability of a bitstring such as `"01"`.
    pub fn get(&self, bits: &str) -> Option<f64> {
        if bits.len() != self.targets.len() {
            return None;
        }
        usize::from_str_radix(bits, 2).ok().map(|j| self.probs[j])
    }

    /// Index of the largest probability; ties (within 1e-12) go to the smaller index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] + 1e-12 {
                best = j;
            }
        }
        best
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.probs.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn measure_distribution(state: &DeviationDensityMatrix, targets: &[QubitIndex]) -> Result<Distribution> {
    if targets.is_empty() {
        return Err(QcsError::EmptyTargets);
    }
    let n = state.num_qubits();
    for (i, q) in targets.iter().enumerate() {
        if q.0 >= n {
            return Err(QcsError::QubitOutOfRange { index: q.0, size: n });
        }
        if targets[..i].contains(q) {
            return Err(QcsError::DuplicateTarget(q.0));
        }
    }
    let trace = state.trace();
    if trace.abs() < 1e-14 {
        return Err(QcsError::ZeroTrace);
    }
    let k = targets.len();
    let mut probs = vec![0.0; 1 << k];
    for idx in 0..state.dim() {
        let j = targets
            .iter()
            .enumerate()
            .fold(0, |acc, (pos, q)| acc | ((idx >> q.shift(n)) & 1) << (k - 1 - pos));
        probs[j] += state.get(idx, idx).re;
    }
    probs.iter_mut().for_each(|p| *p /= trace);
    Ok(Distribution { targets: targets.to_vec(), probs })
}

/// `exp(-i H t)` for Hermitian `H`, via eigendecomposition (or directly when
/// `H` is diagonal).
pub fn matrix_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let err = h.hermiticity_error();
    if err > 1e-10 * h.max_abs().max(1.0) {
        return Err(QcsError::NotHermitian(err));
    }
    if h.is_diagonal() {
        let diag: Vec<C64> = h.diagonal().iter().map(|e| C64::from_polar(1.0, -e.re * t)).collect();
        return Ok(ComplexMatrix::from_diagonal(&diag));
    }
    let eig = SymmetricEigen::new(h.hermitian_part().into_inner());
    let v = ComplexMatrix::from_inner(eig.eigenvectors);
    let phases: Vec<C64> = eig.eigenvalues.iter().map(|l| C64::from_polar(1.0, -l * t)).collect();
    let d = ComplexMatrix::from_diagonal(&phases);
    Ok(&(&v * &d) * &v.dagger())
}
