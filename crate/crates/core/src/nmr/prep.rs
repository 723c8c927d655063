// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Effective-pure-state preparation by spatial averaging.
//!
//! Starting from the thermal deviation `gamma_C (Iz1 + Iz2) + gamma_H Iz3`,
//! rf pulses, selective coupling evolutions and three gradients leave
//! `rho0 = 2 |000><000| - I/4`. The original sequence ([`printed_sequence`])
//! does not reach that state under the conventions used here: its carbon
//! block ends close to `-rho0` plus a C1-C2 zero-quantum term, and its
//! proton flip angle has the wrong sign. [`corrected_sequence`] replaces the
//! carbon block and the angle and keeps every later step verbatim.

use std::f64::consts::{FRAC_PI_4, PI};

use super::execute::{execute_program, NoiseParams};
use super::program::{Couplings, PulseAxis, PulseProgram};
use super::spin_system::SpinSystem;
use crate::error::{QcsError, Result};
use crate::linalg::{embed, spin, Axis, ComplexMatrix, DeviationDensityMatrix, QubitIndex, C64};

const C1: usize = 0;
const C2: usize = 1;
const H3: usize = 2;

/// `sum_j gamma_j Iz_j`.
pub fn equilibrium_state(sys: &SpinSystem) -> DeviationDensityMatrix {
    let n = sys.num_spins();
    let mut m = ComplexMatrix::zeros(sys.dim());
    for j in 0..n {
        let iz = embed(&spin(Axis::Z), &[QubitIndex(j)], n).expect("spin in range");
        m = &m + &iz.scale_real(sys.gamma(j));
    }
    DeviationDensityMatrix::from_hermitian(m)
}

/// Target state expanded in product operators:
/// `(Iz1 + Iz2 + Iz3)/2 + Iz1 Iz2 + Iz1 Iz3 + Iz2 Iz3 + 2 Iz1 Iz2 Iz3`.
pub fn effective_pure_target() -> DeviationDensityMatrix {
    let iz: Vec<ComplexMatrix> =
        (0..3).map(|j| embed(&spin(Axis::Z), &[QubitIndex(j)], 3).expect("spin in range")).collect();
    let mut m = (&(&iz[0] + &iz[1]) + &iz[2]).scale_real(0.5);
    m = &m + &(&iz[0] * &iz[1]);
    m = &m + &(&iz[0] * &iz[2]);
    m = &m + &(&iz[1] * &iz[2]);
    m = &m + &(&(&iz[0] * &iz[1]) * &iz[2]).scale_real(2.0);
    DeviationDensityMatrix::from_hermitian(m)
}

/// `2 |0...0><0...0| - I/4` on `n` spins.
pub fn pure_state_form(n: usize) -> DeviationDensityMatrix {
    let dim = 1usize << n;
    let mut d = vec![C64::new(-0.25, 0.0); dim];
    d[0] = C64::new(1.75, 0.0);
    DeviationDensityMatrix::from_hermitian(ComplexMatrix::from_diagonal(&d))
}

/// Proton flip angle as printed: `arccos(-sqrt(6) / (gamma_H / gamma_C))`.
pub fn alpha_printed(gamma_ratio: f64) -> Result<f64> {
    checked_acos(-(6f64).sqrt() / gamma_ratio)
}

/// Proton flip angle of the corrected sequence: `arccos(2 / (gamma_H / gamma_C))`.
pub fn alpha_corrected(gamma_ratio: f64) -> Result<f64> {
    checked_acos(2.0 / gamma_ratio)
}

fn checked_acos(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(QcsError::InvalidSpinSystem(format!(
            "gyromagnetic ratio too small for the preparation flip angle (cos = {x})"
        )));
    }
    Ok(x.acos())
}

fn gamma_ratio(sys: &SpinSystem) -> Result<f64> {
    if sys.num_spins() != 3 {
        return Err(QcsError::InvalidSpinSystem("preparation is defined for three spins".into()));
    }
    Ok(sys.gamma(H3) / sys.gamma(C1))
}

/// Shared proton part: flip by `alpha`, then two coupling-filter blocks each
/// closed by a gradient.
fn proton_block(p: &mut PulseProgram, sys: &SpinSystem, alpha: f64) {
    let (j13, j23) = (sys.coupling(C1, H3), sys.coupling(C2, H3));
    p.pulse(&[H3], PulseAxis::X, alpha);
    p.grad();
    p.pulse(&[H3], PulseAxis::Y, FRAC_PI_4);
    p.delay(9.0 / (2.0 * j23), Couplings::pair(C2, H3));
    p.delay(1.0 / (2.0 * j13), Couplings::pair(C1, H3));
    p.pulse(&[H3], PulseAxis::Y, FRAC_PI_4);
    p.grad();
    p.pulse(&[H3], PulseAxis::Y, FRAC_PI_4);
    p.delay(9.0 / (4.0 * j23), Couplings::pair(C2, H3));
    p.delay(1.0 / (4.0 * j13), Couplings::pair(C1, H3));
    p.pulse(&[H3], PulseAxis::X, FRAC_PI_4);
    p.grad();
}

/// The literature sequence, step for step.
pub fn printed_sequence(sys: &SpinSystem) -> Result<PulseProgram> {
    let alpha = alpha_printed(gamma_ratio(sys)?)?;
    let mut p = PulseProgram::new();
    p.pulse(&[C1, C2], PulseAxis::X, FRAC_PI_4);
    p.delay(1.0 / (2.0 * sys.coupling(C1, C2)), Couplings::pair(C1, C2));
    p.pulse(&[C1, C2], PulseAxis::Y, -5.0 * PI / 6.0);
    proton_block(&mut p, sys, alpha);
    Ok(p)
}

/// Minimal correction: carbon block `[pi/3]_x^2, grad, [pi/4]_x^1,
/// [1/(2 J12)]_12, [-pi/4]_y^1` and proton angle `arccos(2 gamma_C / gamma_H)`.
/// Everything from the first proton pulse on is unchanged.
pub fn corrected_sequence(sys: &SpinSystem) -> Result<PulseProgram> {
    let alpha = alpha_corrected(gamma_ratio(sys)?)?;
    let mut p = PulseProgram::new();
    p.pulse(&[C2], PulseAxis::X, PI / 3.0);
    p.grad();
    p.pulse(&[C1], PulseAxis::X, FRAC_PI_4);
    p.delay(1.0 / (2.0 * sys.coupling(C1, C2)), Couplings::pair(C1, C2));
    p.pulse(&[C1], PulseAxis::Y, -FRAC_PI_4);
    proton_block(&mut p, sys, alpha);
    Ok(p)
}

/// Distance of a prepared state from the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepResidual {
    /// Least-squares real scale `Tr(rho rho0) / Tr(rho0^2)`.
    pub scale: f64,
    /// `||rho - scale rho0||_F / ||rho||_F`.
    pub residual: f64,
    /// `||rho / ||rho|| - rho0 / ||rho0||||_F`, sign sensitive.
    pub normalized_distance: f64,
}

pub fn prep_residual(rho: &DeviationDensityMatrix, target: &DeviationDensityMatrix) -> PrepResidual {
    let scale = rho.overlap(target) / target.purity();
    let norm = rho.purity().sqrt();
    let residual = if norm == 0.0 { 1.0 } else { rho.frobenius_distance(&target.scale(scale)) / norm };
    PrepResidual { scale, residual, normalized_distance: rho.normalized_distance(target) }
}

/// Simulates `program` from the thermal state.
pub fn prepare(
    program: &PulseProgram,
    sys: &SpinSystem,
    noise: Option<&NoiseParams>,
) -> Result<DeviationDensityMatrix> {
    execute_program(program, &equilibrium_state(sys), sys, noise)
}

/// Runs the corrected sequence and returns the prepared state.
pub fn prepare_effective_pure_state(sys: &SpinSystem, noise: Option<&NoiseParams>) -> Result<DeviationDensityMatrix> {
    prepare(&corrected_sequence(sys)?, sys, noise)
}
