// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Refocused delays and composite z rotations.
//!
//! A delay `tau` is split into `2^r` equal segments. Spins are partitioned
//! into groups that keep their mutual couplings; each group follows one
//! nonzero Walsh row `s(t) = (-1)^popcount(row & t)`, and a hard pi pulse
//! about x flips the group wherever its sign changes. Every nonzero row sums
//! to zero, which removes the chemical shifts, and the product of two distinct
//! rows is again a nonzero row, which removes couplings between groups. A
//! final flip returns every group to its starting orientation, so each spin
//! receives an even number of pi pulses.

use std::f64::consts::{FRAC_PI_2, PI};

use super::program::{Couplings, PulseAxis, PulseProgram, PulseStep};
use super::spin_system::SpinSystem;
use crate::error::{QcsError, Result};

fn walsh_sign(row: usize, t: usize) -> bool {
    (row & t).count_ones().is_multiple_of(2)
}

/// Pi pulses a Walsh row needs over `segments` segments, including the
/// closing flip.
fn flip_count(row: usize, segments: usize) -> usize {
    let changes = (1..segments).filter(|&t| walsh_sign(row, t) != walsh_sign(row, t - 1)).count();
    changes + usize::from(!walsh_sign(row, segments - 1))
}

/// Groups of spins that must share a Walsh row. Errors if keeping the
/// requested couplings would also keep an unrequested nonzero coupling.
fn coupling_groups(sys: &SpinSystem, retained: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let n = sys.num_spins();
    let mut group: Vec<usize> = (0..n).collect();
    for &(j, l) in retained {
        sys.check_spin(j)?;
        sys.check_spin(l)?;
        if j == l {
            return Err(QcsError::SameSpin(j));
        }
        let (gj, gl) = (group[j], group[l]);
        for g in group.iter_mut() {
            if *g == gl {
                *g = gj;
            }
        }
    }
    let wanted = |j: usize, l: usize| retained.iter().any(|&(a, b)| (a, b) == (j, l) || (a, b) == (l, j));
    for j in 0..n {
        for l in j + 1..n {
            if group[j] == group[l] && sys.coupling(j, l) != 0.0 && !wanted(j, l) {
                return Err(QcsError::InfeasibleSchedule(format!(
                    "keeping the requested couplings also keeps J{}{}",
                    j + 1,
                    l + 1
                )));
            }
        }
    }
    let mut ids: Vec<usize> = group.clone();
    ids.sort_unstable();
    ids.dedup();
    Ok(ids.iter().map(|&id| (0..n).filter(|&j| group[j] == id).collect()).collect())
}

/// Delay of length `tau` during which only the `retained` couplings act.
/// Chemical shifts and all other couplings are refocused; simulated under the
/// full Hamiltonian it equals the product of `[tau]_jl` over the retained
/// pairs, up to a global phase.
pub fn refocused_delay_schedule(sys: &SpinSystem, tau: f64, retained: &[(usize, usize)]) -> Result<PulseProgram> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(QcsError::InvalidParams(format!("delay must be non-negative, got {tau}")));
    }
    let groups = coupling_groups(sys, retained)?;
    let mut program = PulseProgram::new();
    if tau == 0.0 {
        return Ok(program);
    }
    let mut r = 1;
    while (1usize << r) - 1 < groups.len() {
        r += 1;
    }
    let segments = 1usize << r;
    let mut rows: Vec<usize> = (1..segments).collect();
    rows.sort_by_key(|&row| (flip_count(row, segments), row));
    let rows = &rows[..groups.len()];

    let seg = tau / segments as f64;
    let mut pending = 0.0;
    for t in 0..=segments {
        let mut flipped: Vec<usize> = Vec::new();
        for (g, &row) in groups.iter().zip(rows) {
            let flip = if t == 0 {
                false
            } else if t == segments {
                !walsh_sign(row, t - 1)
            } else {
                walsh_sign(row, t) != walsh_sign(row, t - 1)
            };
            if flip {
                flipped.extend(g);
            }
        }
        if !flipped.is_empty() {
            if pending > 0.0 {
                program.delay(pending, Couplings::All);
                pending = 0.0;
            }
            flipped.sort_unstable();
            program.pulse(&flipped, PulseAxis::X, PI);
        }
        if t < segments {
            pending += seg;
        }
    }
    if pending > 0.0 {
        program.delay(pending, Couplings::All);
    }
    Ok(program)
}

/// `R_z(angle) = exp(i angle I_z)` on `target` as `[-pi/2]_y [angle]_x [pi/2]_y`.
pub fn composite_z_rotation(target: usize, angle: f64) -> PulseProgram {
    let mut p = PulseProgram::new();
    if angle != 0.0 {
        p.pulse(&[target], PulseAxis::Y, -FRAC_PI_2);
        p.pulse(&[target], PulseAxis::X, angle);
        p.pulse(&[target], PulseAxis::Y, FRAC_PI_2);
    }
    p
}

/// Expands selective delays into refocused schedules and z rotations into
/// composite pulses. The result holds only hard pulses, full-Hamiltonian
/// delays, gradients and labels.
pub fn lower(program: &PulseProgram, sys: &SpinSystem) -> Result<PulseProgram> {
    program.validate(sys.num_spins())?;
    let mut out = PulseProgram::new();
    for step in program.steps() {
        match step {
            PulseStep::Delay { duration, couplings: Couplings::Selective(pairs) } => {
                out.extend(&refocused_delay_schedule(sys, *duration, pairs)?);
            }
            PulseStep::ZRot { target, angle } => {
                out.extend(&composite_z_rotation(*target, *angle));
            }
            other => {
                out.push(other.clone());
            }
        }
    }
    Ok(out)
}
