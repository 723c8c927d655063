// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate-to-pulse compilation for the three-spin register (C1, C2, H3).
//!
//! Compiled programs use selective delays and `ZROT` steps as macros; the
//! executor lowers them to hard pulses and full-Hamiltonian delays. Time runs
//! left to right in every sequence below.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use super::program::{Couplings, PulseAxis, PulseProgram};
use super::refocus::lower;
use super::spin_system::SpinSystem;
use crate::error::{QcsError, Result};
use crate::linalg::{cnot, embed, hadamard, rotation, rz, Axis, ComplexMatrix, QubitIndex};
use crate::protocol::{controlled_phase_gate, ProtocolParams};

const C1: usize = 0;
const C2: usize = 1;
const H3: usize = 2;

/// Gates with a pulse realization on the three-spin register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSpec {
    /// Hadamard on C1 and C2.
    H12,
    /// Hadamard on C2.
    H2,
    /// Hadamard on C1.
    H1,
    /// `diag(1, 1, 1, -i)` on C1, C2.
    Phase11,
    /// `[pi/2]` readout pulse about `axis` (x or y) on one spin.
    Readout { spin: usize, axis: Axis },
}

impl GateSpec {
    pub const ALL: [GateSpec; 10] = [
        GateSpec::H12,
        GateSpec::H2,
        GateSpec::H1,
        GateSpec::Phase11,
        GateSpec::Readout { spin: 0, axis: Axis::X },
        GateSpec::Readout { spin: 0, axis: Axis::Y },
        GateSpec::Readout { spin: 1, axis: Axis::X },
        GateSpec::Readout { spin: 1, axis: Axis::Y },
        GateSpec::Readout { spin: 2, axis: Axis::X },
        GateSpec::Readout { spin: 2, axis: Axis::Y },
    ];

    /// Target unitary on the three-spin register.
    pub fn ideal(&self) -> ComplexMatrix {
        let on = |g: &ComplexMatrix, t: &[usize]| {
            embed(g, &t.iter().map(|&q| QubitIndex(q)).collect::<Vec<_>>(), 3).expect("valid targets")
        };
        match *self {
            GateSpec::H12 => &on(&hadamard(), &[C1]) * &on(&hadamard(), &[C2]),
            GateSpec::H2 => on(&hadamard(), &[C2]),
            GateSpec::H1 => on(&hadamard(), &[C1]),
            GateSpec::Phase11 => on(&controlled_phase_gate(), &[C1, C2]),
            GateSpec::Readout { spin, axis } => on(&rotation(axis, FRAC_PI_2), &[spin]),
        }
    }

    fn program(&self, j12: f64) -> PulseProgram {
        let mut p = PulseProgram::new();
        match *self {
            GateSpec::H12 => {
                p.pulse(&[C1, C2], PulseAxis::Y, -FRAC_PI_2);
                p.pulse(&[C1, C2], PulseAxis::X, PI);
            }
            GateSpec::H2 => {
                p.pulse(&[C1, C2, H3], PulseAxis::Y, FRAC_PI_4);
                p.zrot(C2, PI);
                p.pulse(&[C1, C2, H3], PulseAxis::Y, -FRAC_PI_4);
            }
            GateSpec::H1 => {
                p.extend(&GateSpec::H2.program(j12));
                p.extend(&GateSpec::H12.program(j12));
            }
            GateSpec::Phase11 => {
                p.delay(1.0 / (4.0 * j12), Couplings::pair(C1, C2));
                p.pulse(&[C1, C2], PulseAxis::Y, -FRAC_PI_2);
                p.pulse(&[C1, C2], PulseAxis::X, FRAC_PI_4);
                p.pulse(&[C1, C2], PulseAxis::Y, FRAC_PI_2);
            }
            // C2 readouts keep C1 frozen: the pulse pair on both carbons
            // undoes itself on C1 while the z rotation acts only on C2.
            GateSpec::Readout { spin: C2, axis: Axis::X } => {
                p.pulse(&[C1, C2], PulseAxis::Y, FRAC_PI_2);
                p.zrot(C2, FRAC_PI_2);
                p.pulse(&[C1, C2], PulseAxis::Y, -FRAC_PI_2);
            }
            GateSpec::Readout { spin: C2, axis: Axis::Y } => {
                p.pulse(&[C1, C2], PulseAxis::X, -FRAC_PI_2);
                p.zrot(C2, FRAC_PI_2);
                p.pulse(&[C1, C2], PulseAxis::X, FRAC_PI_2);
            }
            GateSpec::Readout { spin, axis } => {
                let axis = if axis == Axis::X { PulseAxis::X } else { PulseAxis::Y };
                p.pulse(&[spin], axis, FRAC_PI_2);
            }
        }
        p
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSpec::H12 => write!(f, "h12"),
            GateSpec::H2 => write!(f, "h2"),
            GateSpec::H1 => write!(f, "h1"),
            GateSpec::Phase11 => write!(f, "phase11"),
            GateSpec::Readout { spin, axis } => {
                write!(f, "r{}{}", if *axis == Axis::X { 'x' } else { 'y' }, spin + 1)
            }
        }
    }
}

impl FromStr for GateSpec {
    type Err = QcsError;

    fn from_str(s: &str) -> Result<Self> {
        GateSpec::ALL.iter().copied().find(|g| g.to_string() == s).ok_or_else(|| QcsError::UnsupportedGate(s.to_string()))
    }
}

fn require_three_spins(sys: &SpinSystem) -> Result<()> {
    if sys.num_spins() != 3 {
        return Err(QcsError::UnsupportedGate(format!("pulse identities need 3 spins, system has {}", sys.num_spins())));
    }
    Ok(())
}

/// Pulse program of `gate` for `sys`. The phase gate's coupling delay is
/// `1 / (4 J12)`.
pub fn compile_gate(gate: GateSpec, sys: &SpinSystem) -> Result<PulseProgram> {
    require_three_spins(sys)?;
    let j12 = sys.coupling(C1, C2);
    if gate == GateSpec::Phase11 && j12 == 0.0 {
        return Err(QcsError::UnsupportedGate("phase11 needs a nonzero J12".into()));
    }
    Ok(gate.program(j12))
}

/// Non-negative duration of `[tau]_jl` equivalent to the formal `tau`. The
/// coupling propagator repeats every `2 / J` up to a global phase.
fn wrap_duration(tau: f64, j: f64) -> f64 {
    if tau >= 0.0 {
        return tau;
    }
    let period = 2.0 / j.abs();
    tau + period * (-tau / period).ceil()
}

/// The T operation for `m = 2` as two coupling evolutions:
/// `CNOT13 Rz3(phi) CNOT13 = [-phi / (pi J13)]_13` and
/// `CNOT23 Rz3(2 phi) CNOT23 = [-2 phi / (pi J23)]_23`.
/// Zero-length evolutions are omitted.
pub fn compile_t_phases(params: &ProtocolParams, sys: &SpinSystem) -> Result<PulseProgram> {
    require_three_spins(sys)?;
    if params.m() != 2 {
        return Err(QcsError::UnsupportedGate(format!("pulse-level T operation needs m = 2, got {}", params.m())));
    }
    let phi = params.phi();
    let mut p = PulseProgram::new();
    for (spin, factor) in [(C1, 1.0), (C2, 2.0)] {
        let j = sys.coupling(spin, H3);
        if j == 0.0 {
            return Err(QcsError::UnsupportedGate(format!("J{}3 is zero", spin + 1)));
        }
        let tau = wrap_duration(-factor * phi / (PI * j), j);
        if tau != 0.0 {
            p.delay(tau, Couplings::pair(spin, H3));
        }
    }
    Ok(p)
}

/// Gate-level counterpart of [`compile_t_phases`].
pub fn ideal_t_phases(params: &ProtocolParams) -> ComplexMatrix {
    let phi = params.phi();
    let sandwich = |control: usize, angle: f64| {
        let c = embed(&cnot(), &[QubitIndex(control), QubitIndex(H3)], 3).expect("valid targets");
        let r = embed(&rz(angle), &[QubitIndex(H3)], 3).expect("valid target");
        &(&c * &r) * &c
    };
    &sandwich(C2, 2.0 * phi) * &sandwich(C1, phi)
}

/// Whole clock-synchronization network for `m = 2`: Hadamards on C1 and C2,
/// the T phases, then the reduced inverse QFT as H2, the phase gate and H1.
pub fn compile_network(params: &ProtocolParams, sys: &SpinSystem) -> Result<PulseProgram> {
    let mut p = PulseProgram::new();
    p.label("hadamard h12");
    p.extend(&compile_gate(GateSpec::H12, sys)?);
    p.label("T phases");
    p.extend(&compile_t_phases(params, sys)?);
    p.label("inverse QFT: h2");
    p.extend(&compile_gate(GateSpec::H2, sys)?);
    p.label("inverse QFT: phase11");
    p.extend(&compile_gate(GateSpec::Phase11, sys)?);
    p.label("inverse QFT: h1");
    p.extend(&compile_gate(GateSpec::H1, sys)?);
    Ok(p)
}

/// Gate-level unitary the network program realizes. On states with H3 in
/// `|0>` it agrees with the protocol network built from TQH phases.
pub fn ideal_network(params: &ProtocolParams) -> ComplexMatrix {
    let t = ideal_t_phases(params);
    let mut u = &t * &GateSpec::H12.ideal();
    for g in [GateSpec::H2, GateSpec::Phase11, GateSpec::H1] {
        u = &g.ideal() * &u;
    }
    u
}

/// Replaces macro steps by their hardware form.
pub fn physical_form(program: &PulseProgram, sys: &SpinSystem) -> Result<PulseProgram> {
    lower(program, sys)
}
