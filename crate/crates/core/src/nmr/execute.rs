// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::gradient::GradientModel;
use super::program::{Couplings, PulseAxis, PulseProgram, PulseStep};
use super::refocus::lower;
use super::spin_system::SpinSystem;
use crate::error::{QcsError, Result};
use crate::linalg::{apply_unitary, kron_all, rotation, ComplexMatrix, DeviationDensityMatrix, C64};

/// Parametric stand-in for hardware imperfections.
///
/// Each delay damps every element `rho_ab` by `exp(-sum_j rate_j t)` over the
/// spins `j` whose state differs between `a` and `b`. Each pulse angle is
/// scaled by `1 + pulse_angle_error + pulse_angle_jitter * N(0, 1)`, with one
/// normal draw per pulse from a generator seeded with `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseParams {
    pub dephasing_rates: Vec<f64>,
    pub pulse_angle_error: f64,
    pub pulse_angle_jitter: f64,
    pub seed: u64,
}

impl NoiseParams {
    /// The same dephasing rate on every spin.
    pub fn uniform_dephasing(n: usize, rate: f64, seed: u64) -> Self {
        Self { dephasing_rates: vec![rate; n], pulse_angle_error: 0.0, pulse_angle_jitter: 0.0, seed }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.dephasing_rates.len() != n {
            return Err(QcsError::InvalidNoise(format!(
                "{} dephasing rates for {n} spins",
                self.dephasing_rates.len()
            )));
        }
        if self.dephasing_rates.iter().any(|r| r.is_nan() || *r < 0.0) {
            return Err(QcsError::InvalidNoise("dephasing rates must be non-negative".into()));
        }
        if !(self.pulse_angle_error > -0.5 && self.pulse_angle_error < 0.5) {
            return Err(QcsError::InvalidNoise(format!(
                "pulse angle error {} outside (-0.5, 0.5)",
                self.pulse_angle_error
            )));
        }
        if !(self.pulse_angle_jitter >= 0.0 && self.pulse_angle_jitter.is_finite()) {
            return Err(QcsError::InvalidNoise("pulse angle jitter must be non-negative".into()));
        }
        Ok(())
    }

    fn damping(&self, a: usize, b: usize, n: usize, t: f64) -> f64 {
        let diff = a ^ b;
        let rate: f64 = (0..n).filter(|&j| diff >> (n - 1 - j) & 1 == 1).map(|j| self.dephasing_rates[j]).sum();
        if rate == 0.0 {
            1.0
        } else {
            (-rate * t).exp()
        }
    }
}

/// Full-register operator of a hard pulse on `targets`.
pub fn pulse_unitary(targets: &[usize], axis: PulseAxis, angle: f64, n: usize) -> ComplexMatrix {
    let (ax, sign) = axis.resolve();
    let r = rotation(ax, sign * angle);
    let ops: Vec<ComplexMatrix> =
        (0..n).map(|j| if targets.contains(&j) { r.clone() } else { ComplexMatrix::identity(2) }).collect();
    kron_all(&ops)
}

/// Noise-free propagator of a program without gradients. Selective delays
/// and z rotations are lowered first, so the result is what the hardware
/// sequence does under the full Hamiltonian.
pub fn program_propagator(program: &PulseProgram, sys: &SpinSystem) -> Result<ComplexMatrix> {
    let lowered = lower(program, sys)?;
    let n = sys.num_spins();
    let mut u = ComplexMatrix::identity(sys.dim());
    for step in lowered.steps() {
        let s = match step {
            PulseStep::Pulse { targets, axis, angle } => pulse_unitary(targets, *axis, *angle, n),
            PulseStep::Delay { duration, couplings: Couplings::All } => sys.free_evolution(*duration),
            PulseStep::Grad => return Err(QcsError::GradientInPropagator),
            PulseStep::Label(_) => continue,
            PulseStep::Delay { .. } | PulseStep::ZRot { .. } => unreachable!("lowered program"),
        };
        u = &s * &u;
    }
    Ok(u)
}

/// Runs `program` on `state`, step by step, after lowering. Deterministic for
/// a given noise seed.
pub fn execute_program(
    program: &PulseProgram,
    state: &DeviationDensityMatrix,
    sys: &SpinSystem,
    noise: Option<&NoiseParams>,
) -> Result<DeviationDensityMatrix> {
    if state.dim() != sys.dim() {
        return Err(QcsError::DimensionMismatch { expected: sys.dim(), actual: state.dim() });
    }
    let n = sys.num_spins();
    if let Some(nz) = noise {
        nz.validate(n)?;
    }
    let lowered = lower(program, sys)?;
    let gradient = GradientModel::for_system(sys);
    let mut rng = ChaCha8Rng::seed_from_u64(noise.map_or(0, |nz| nz.seed));
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut rho = state.clone();
    for step in lowered.steps() {
        rho = match step {
            PulseStep::Pulse { targets, axis, angle } => {
                let scale = match noise {
                    Some(nz) => {
                        let jitter = if nz.pulse_angle_jitter > 0.0 {
                            nz.pulse_angle_jitter * normal.sample(&mut rng)
                        } else {
                            0.0
                        };
                        1.0 + nz.pulse_angle_error + jitter
                    }
                    None => 1.0,
                };
                apply_unitary(&rho, &pulse_unitary(targets, *axis, angle * scale, n))?
            }
            PulseStep::Delay { duration, couplings: Couplings::All } => {
                let evolved = apply_unitary(&rho, &sys.free_evolution(*duration))?;
                match noise {
                    Some(nz) if nz.dephasing_rates.iter().any(|&r| r > 0.0) => {
                        let m = ComplexMatrix::from_fn(rho.dim(), |a, b| {
                            evolved.get(a, b) * C64::new(nz.damping(a, b, n, *duration), 0.0)
                        });
                        DeviationDensityMatrix::from_hermitian(m)
                    }
                    _ => evolved,
                }
            }
            PulseStep::Grad => gradient.apply(&rho),
            PulseStep::Label(_) => continue,
            PulseStep::Delay { .. } | PulseStep::ZRot { .. } => unreachable!("lowered program"),
        };
    }
    Ok(rho)
}
