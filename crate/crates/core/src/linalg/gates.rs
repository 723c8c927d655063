// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Standard one- and two-qubit operators and spin-1/2 angular momentum.
//!
//! `|0>` is spin up, so `I_z = diag(+1/2, -1/2)`.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{embed, ComplexMatrix, QubitIndex, C64};
use crate::error::Result;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Transverse or longitudinal spin axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    match axis {
        Axis::X => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        Axis::Y => ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
        Axis::Z => ComplexMatrix::from_diagonal(&[ONE, -ONE]),
    }
}

/// Spin-1/2 angular momentum `I_axis = sigma_axis / 2`.
pub fn spin(axis: Axis) -> ComplexMatrix {
    pauli(axis).scale_real(0.5)
}

/// `I_axis` on qubit `q` of an `n`-qubit register.
pub fn spin_on(axis: Axis, q: QubitIndex, n: usize) -> Result<ComplexMatrix> {
    embed(&spin(axis), &[q], n)
}

/// `exp(+i theta I_axis)`, the single-spin rotation used throughout the
/// pulse layer. The positive exponent matches `R_z(phi) = exp(i phi I_z)`.
pub fn rotation(axis: Axis, theta: f64) -> ComplexMatrix {
    let c = C64::new((theta / 2.0).cos(), 0.0);
    let s = I * (theta / 2.0).sin();
    let p = pauli(axis);
    &ComplexMatrix::identity(2).scale(c) + &p.scale(s)
}

/// `R_z(phi) = exp(i phi I_z)`.
pub fn rz(phi: f64) -> ComplexMatrix {
    rotation(Axis::Z, phi)
}

pub fn hadamard() -> ComplexMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_rows(&[vec![h, h], vec![h, -h]])
}

pub fn pauli_x() -> ComplexMatrix {
    pauli(Axis::X)
}

pub fn pauli_z() -> ComplexMatrix {
    pauli(Axis::Z)
}

/// Controlled NOT with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![ONE, ZERO, ZERO, ZERO],
        vec![ZERO, ONE, ZERO, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
        vec![ZERO, ZERO, ONE, ZERO],
    ])
}

pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![ONE, ZERO, ZERO, ZERO],
        vec![ZERO, ZERO, ONE, ZERO],
        vec![ZERO, ONE, ZERO, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
    ])
}

/// `diag(1, 1, 1, e^{i angle})`.
pub fn controlled_phase(angle: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[ONE, ONE, ONE, C64::from_polar(1.0, angle)])
}

/// Tensor product of `ops` in register order (first factor = qubit 1).
pub fn kron_all(ops: &[ComplexMatrix]) -> ComplexMatrix {
    ops.iter()
        .skip(1)
        .fold(ops[0].clone(), |acc, op| acc.kron(op))
}
