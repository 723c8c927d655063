// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level backend for the three-spin NMR register: Hamiltonian,
//! refocused delays, gate compilation, gradient averaging and a
//! density-matrix executor with optional parametric noise.
//!
//! RF pulses are instantaneous rotations `exp(i theta sum I_axis)` on the
//! addressed spins; free evolution is `exp(-i H t)`.

mod compile;
mod execute;
mod gradient;
mod prep;
mod program;
mod refocus;
mod spin_system;

pub use compile::{
    compile_gate, compile_network, compile_t_phases, ideal_network, ideal_t_phases, physical_form, GateSpec,
};
pub use execute::{execute_program, program_propagator, pulse_unitary, NoiseParams};
pub use gradient::{gradient_pulse, GradientModel};
pub use prep::{
    alpha_corrected, alpha_printed, corrected_sequence, effective_pure_target, equilibrium_state, prep_residual,
    prepare, prepare_effective_pure_state, printed_sequence, pure_state_form, PrepResidual,
};
pub use program::{Couplings, PulseAxis, PulseProgram, PulseStep};
pub use refocus::{composite_z_rotation, lower, refocused_delay_schedule};
pub use spin_system::{SpinSystem, GAMMA_H_OVER_C, J12_HZ, J13_HZ, J23_HZ, NU1_MINUS_NU2_HZ};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        apply_unitary, embed, rz, spin_on, Axis, ComplexMatrix, DeviationDensityMatrix, Ket, QubitIndex, COMPILED_TOL,
    };
    use crate::protocol::{qcs_unitary, ProtocolParams};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sys() -> SpinSystem {
        SpinSystem::default()
    }

    #[test]
    fn refocused_delays_match_selective_evolution() {
        let s = sys();
        for (j, l) in [(0, 2), (1, 2), (0, 1)] {
            let jj = s.coupling(j, l);
            for tau in [1.0 / (2.0 * jj), 1.0 / (4.0 * jj), 9.0 / (4.0 * jj), 0.0137, 2.5 / jj] {
                let p = refocused_delay_schedule(&s, tau, &[(j, l)]).unwrap();
                assert!((p.total_delay() - tau).abs() < 1e-12);
                let u = program_propagator(&p, &s).unwrap();
                let ideal = s.coupled_evolution(j, l, tau).unwrap();
                let d = u.phase_aligned_distance(&ideal);
                assert!(d <= COMPILED_TOL, "({j},{l}) tau={tau}: {d:e}");
            }
        }
    }

    #[test]
    fn fully_refocused_delay_is_identity() {
        let s = sys();
        let p = refocused_delay_schedule(&s, 0.0421, &[]).unwrap();
        let u = program_propagator(&p, &s).unwrap();
        assert!(u.phase_aligned_distance(&ComplexMatrix::identity(8)) < 1e-9);
    }

    #[test]
    fn composite_z_rotation_examples() {
        let s = sys();
        assert!(composite_z_rotation(1, 0.0).is_empty());
        for angle in [PI, PI / 2.0, -0.7, 2.9] {
            let u = program_propagator(&composite_z_rotation(1, angle), &s).unwrap();
            let ideal = embed(&rz(angle), &[QubitIndex(1)], 3).unwrap();
            assert!(u.max_abs_diff(&ideal) < 1e-12);
        }
        // e^{i pi Iz} on C2: |x0x> -> e^{i pi/2}, |x1x> -> e^{-i pi/2}
        let u = program_propagator(&composite_z_rotation(1, PI), &s).unwrap();
        for idx in 0..8 {
            let expect = if idx & 0b010 == 0 { crate::linalg::C64::new(0.0, 1.0) } else { crate::linalg::C64::new(0.0, -1.0) };
            assert!((u.get(idx, idx) - expect).norm() < 1e-12);
        }
        let twice = {
            let mut p = composite_z_rotation(2, 0.4);
            p.extend(&composite_z_rotation(2, 0.4));
            program_propagator(&p, &s).unwrap()
        };
        let once = program_propagator(&composite_z_rotation(2, 0.8), &s).unwrap();
        assert!(twice.phase_aligned_distance(&once) < 1e-12);
    }

    #[test]
    fn compiled_gates_match_ideal() {
        let s = sys();
        for g in GateSpec::ALL {
            let u = program_propagator(&compile_gate(g, &s).unwrap(), &s).unwrap();
            let d = u.phase_aligned_distance(&g.ideal());
            assert!(d <= COMPILED_TOL, "{g}: {d:e}");
        }
        for g in [GateSpec::H12, GateSpec::H2, GateSpec::H1] {
            let u = program_propagator(&compile_gate(g, &s).unwrap(), &s).unwrap();
            assert!((&u * &u).phase_aligned_distance(&ComplexMatrix::identity(8)) < COMPILED_TOL);
        }
    }

    #[test]
    fn hadamard_pair_oracle() {
        // H x H x I written out from its matrix elements
        let h = 0.5;
        let oracle = ComplexMatrix::from_fn(8, |r, c| {
            if (r & 1) != (c & 1) {
                return crate::linalg::C64::new(0.0, 0.0);
            }
            let sign = if ((r >> 1) & (c >> 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            crate::linalg::C64::new(h * sign, 0.0)
        });
        let u = program_propagator(&compile_gate(GateSpec::H12, &sys()).unwrap(), &sys()).unwrap();
        assert!(u.phase_aligned_distance(&oracle) < 1e-12);
    }

    #[test]
    fn phase_gate_sequence_shape() {
        let p = compile_gate(GateSpec::Phase11, &sys()).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(
            p.to_string(),
            format!(
                "DELAY {:?} COUPLINGS=1,2\nPULSE 1,2 y -1.5707963267948966\nPULSE 1,2 x 0.7853981633974483\n\
                 PULSE 1,2 y 1.5707963267948966\n",
                1.0 / (4.0 * 103.1)
            )
        );
    }

    #[test]
    fn t_phase_compounds() {
        let s = sys();
        assert!(compile_t_phases(&ProtocolParams::from_phi_index(0).unwrap(), &s).unwrap().is_empty());
        let p1 = compile_t_phases(&ProtocolParams::from_phi_index(1).unwrap(), &s).unwrap();
        match &p1.steps()[0] {
            PulseStep::Delay { duration, couplings } => {
                assert!((duration - 0.0545851528384279).abs() < 1e-12);
                assert_eq!(couplings, &Couplings::pair(0, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        for k in 0..4 {
            let params = ProtocolParams::from_phi_index(k).unwrap();
            let u = program_propagator(&compile_t_phases(&params, &s).unwrap(), &s).unwrap();
            let d = u.phase_aligned_distance(&ideal_t_phases(&params));
            assert!(d <= COMPILED_TOL, "k={k}: {d:e}");
        }
        // positive phi needs the period offset
        let params = ProtocolParams::from_omega_delta(2, -0.1).unwrap();
        let p = compile_t_phases(&params, &s).unwrap();
        assert!(p.steps().iter().all(|st| matches!(st, PulseStep::Delay { duration, .. } if *duration > 0.0)));
        let u = program_propagator(&p, &s).unwrap();
        assert!(u.phase_aligned_distance(&ideal_t_phases(&params)) <= COMPILED_TOL);
        assert!(compile_t_phases(&ProtocolParams::from_omega_delta(3, 0.1).unwrap(), &s).is_err());
    }

    #[test]
    fn network_matches_protocol_on_ancilla_zero() {
        let s = sys();
        for k in 0..4 {
            let params = ProtocolParams::from_phi_index(k).unwrap();
            let u = program_propagator(&compile_network(&params, &s).unwrap(), &s).unwrap();
            assert!(u.phase_aligned_distance(&ideal_network(&params)) <= COMPILED_TOL);
            let proto = qcs_unitary(&params).unwrap();
            for idx in [0b000, 0b010, 0b100, 0b110] {
                let ket = Ket::basis(3, idx).unwrap();
                let a = DeviationDensityMatrix::from_ket(&ket);
                let x = apply_unitary(&a, &u).unwrap();
                let y = apply_unitary(&a, &proto).unwrap();
                assert!(x.frobenius_distance(&y) < 1e-6, "k={k} idx={idx}");
            }
        }
    }

    #[test]
    fn unsupported_gate_names() {
        assert!("h3".parse::<GateSpec>().is_err());
        assert_eq!("ry2".parse::<GateSpec>().unwrap(), GateSpec::Readout { spin: 1, axis: Axis::Y });
        let two = SpinSystem::new(vec![0.0, 1.0], vec![vec![0.0, 5.0], vec![5.0, 0.0]], vec![1.0, 1.0]).unwrap();
        assert!(compile_gate(GateSpec::H12, &two).is_err());
    }

    #[test]
    fn printed_y_readout_is_not_a_y_pulse() {
        // [-pi/2]_x^{1,2}, Rz2(pi/2), [pi/2]_y^{1,2} as printed
        let s = sys();
        let mut p = PulseProgram::new();
        p.pulse(&[0, 1], PulseAxis::X, -PI / 2.0).zrot(1, PI / 2.0).pulse(&[0, 1], PulseAxis::Y, PI / 2.0);
        let u = program_propagator(&p, &s).unwrap();
        let ideal = GateSpec::Readout { spin: 1, axis: Axis::Y }.ideal();
        assert!(u.phase_aligned_distance(&ideal) > 0.5);
    }

    #[test]
    fn executor_examples() {
        let s = sys();
        let rho = DeviationDensityMatrix::from_ket(&Ket::basis(3, 0).unwrap());
        assert_eq!(execute_program(&PulseProgram::new(), &rho, &s, None).unwrap(), rho);
        let h12 = compile_gate(GateSpec::H12, &s).unwrap();
        let got = execute_program(&h12, &rho, &s, None).unwrap();
        let want = apply_unitary(&rho, &GateSpec::H12.ideal()).unwrap();
        assert!(got.frobenius_distance(&want) < 1e-12);
        // very fast dephasing kills single-quantum coherences
        let ix = DeviationDensityMatrix::new(spin_on(Axis::X, QubitIndex(0), 3).unwrap()).unwrap();
        let mut p = PulseProgram::new();
        p.delay(1.0, Couplings::All);
        let noise = NoiseParams::uniform_dephasing(3, 1e4, 0);
        let out = execute_program(&p, &ix, &s, Some(&noise)).unwrap();
        assert!(out.matrix().max_abs() < 1e-12);
        let mut bad = noise.clone();
        bad.pulse_angle_error = 0.5;
        assert!(execute_program(&p, &ix, &s, Some(&bad)).is_err());
        assert!(execute_program(&p, &DeviationDensityMatrix::zeros(4), &s, None).is_err());
    }

    #[test]
    fn jitter_is_seeded() {
        let s = sys();
        let rho = equilibrium_state(&s);
        let p = compile_gate(GateSpec::H1, &s).unwrap();
        let mut noise = NoiseParams::uniform_dephasing(3, 0.0, 7);
        noise.pulse_angle_jitter = 0.05;
        let a = execute_program(&p, &rho, &s, Some(&noise)).unwrap();
        let b = execute_program(&p, &rho, &s, Some(&noise)).unwrap();
        assert_eq!(a, b);
        noise.seed = 8;
        let c = execute_program(&p, &rho, &s, Some(&noise)).unwrap();
        assert!(a.frobenius_distance(&c) > 1e-6);
    }

    #[test]
    fn gradient_inside_propagator_is_rejected() {
        let mut p = PulseProgram::new();
        p.grad();
        assert!(program_propagator(&p, &sys()).is_err());
    }

    #[test]
    fn effective_pure_target_forms_agree() {
        let a = effective_pure_target();
        let b = pure_state_form(3);
        assert!(a.frobenius_distance(&b) < 1e-15);
        assert_eq!(a.get(0, 0).re, 1.75);
        for i in 1..8 {
            assert_eq!(a.get(i, i).re, -0.25);
        }
        // rho0 transforms like |000>: U rho0 U^dagger = 2 U|000><000|U^dagger - I/4
        let u = GateSpec::H1.ideal();
        let mut ket = Ket::basis(3, 0).unwrap();
        ket.apply_local(&crate::linalg::hadamard(), &[QubitIndex(0)]).unwrap();
        let want = &DeviationDensityMatrix::from_ket(&ket).matrix().scale_real(2.0)
            - &ComplexMatrix::identity(8).scale_real(0.25);
        assert!(apply_unitary(&a, &u).unwrap().matrix().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn alpha_values() {
        let a = alpha_printed(3.9777).unwrap();
        assert!((a - (-(6f64).sqrt() / 3.9777).acos()).abs() < 1e-15);
        assert!((a - 2.234).abs() < 1e-3);
        assert!(alpha_printed(2.0).is_err());
        assert!((alpha_corrected(3.9777).unwrap() - (2.0 / 3.9777f64).acos()).abs() < 1e-15);
    }

    #[test]
    fn corrected_preparation_reaches_target() {
        let s = sys();
        let rho = prepare_effective_pure_state(&s, None).unwrap();
        let r = prep_residual(&rho, &effective_pure_target());
        assert!(r.normalized_distance < 1e-9, "{r:?}");
        assert!(r.scale > 0.0);
    }

    #[test]
    fn printed_preparation_misses_target() {
        let s = sys();
        let rho = prepare(&printed_sequence(&s).unwrap(), &s, None).unwrap();
        let target = effective_pure_target();
        let r = prep_residual(&rho, &target);
        assert!((r.normalized_distance - 1.983).abs() < 1e-3, "{r:?}");
        assert!((rho.normalized_distance(&target.scale(-1.0)) - 0.2604).abs() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn gradient_idempotent_and_trace_preserving(entries in proptest::collection::vec(-1.0f64..1.0, 128)) {
            let m = ComplexMatrix::from_fn(8, |r, c| crate::linalg::C64::new(entries[r * 8 + c], entries[64 + c * 8 + r]));
            let rho = DeviationDensityMatrix::new(m.hermitian_part()).unwrap();
            let g = GradientModel::for_system(&sys());
            let once = g.apply(&rho);
            prop_assert_eq!(g.apply(&once), once.clone());
            prop_assert!((once.trace() - rho.trace()).abs() < 1e-12);
        }

        #[test]
        fn program_text_round_trip_preserves_propagator(k in 0usize..4) {
            let s = sys();
            let p = compile_network(&ProtocolParams::from_phi_index(k).unwrap(), &s).unwrap();
            let q = PulseProgram::parse(&p.to_string()).unwrap();
            prop_assert_eq!(program_propagator(&p, &s).unwrap(), program_propagator(&q, &s).unwrap());
        }
    }
}
