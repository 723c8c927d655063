// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end NMR experiment: prepare `rho0`, run the compiled network,
//! reconstruct the output by tomography and score it against the ideal
//! gate-level result.

use crate::error::{QcsError, Result};
use crate::linalg::{apply_unitary, measure_distribution, ComplexMatrix, DeviationDensityMatrix, QubitIndex};
use crate::nmr::{
    compile_network, corrected_sequence, effective_pure_target, execute_program, prep_residual, prepare, NoiseParams,
    PrepResidual, PulseProgram, SpinSystem,
};
use crate::protocol::{outcome_from_distribution, qcs_unitary, ProtocolParams, QcsOutcome};
use crate::tomography::{fidelity, FidelityReport, TomographyPlan};

#[derive(Debug, Clone)]
pub struct NmrRun {
    pub program: PulseProgram,
    /// Noise-free prepared state, the reference input of the fidelity.
    pub rho_initial: DeviationDensityMatrix,
    /// State the network actually starts from (equal to `rho_initial`
    /// without noise).
    pub rho_prepared: DeviationDensityMatrix,
    /// Simulated state after the network.
    pub rho_final: DeviationDensityMatrix,
    /// Tomographic reconstruction of `rho_final`.
    pub rho_exp: DeviationDensityMatrix,
    /// Ideal gate-level network applied to `rho_initial`.
    pub rho_theory: DeviationDensityMatrix,
    pub prep: PrepResidual,
    pub fidelity: FidelityReport,
    /// Outcome read from the effective pure part of `rho_exp`.
    pub outcome: QcsOutcome,
}

/// `(rho / scale + I/4) / 2`: the density matrix a deviation `scale * (2P - I/4)`
/// stands for on three spins.
pub fn effective_pure_part(rho: &DeviationDensityMatrix, scale: f64) -> Result<DeviationDensityMatrix> {
    if scale == 0.0 || !scale.is_finite() {
        return Err(QcsError::ZeroTrace);
    }
    let dim = rho.dim();
    let shift = ComplexMatrix::identity(dim).scale_real(2.0 / dim as f64);
    DeviationDensityMatrix::new((&rho.matrix().scale_real(1.0 / scale) + &shift).scale_real(0.5))
}

/// Runs one clock-synchronization experiment on the NMR register.
pub fn run_nmr(params: &ProtocolParams, sys: &SpinSystem, noise: Option<&NoiseParams>) -> Result<NmrRun> {
    if params.m() != 2 {
        return Err(QcsError::InvalidParams(format!("the NMR network needs m = 2, got {}", params.m())));
    }
    // Separate seeds keep preparation and network noise independent.
    let prep_noise = noise.map(|nz| NoiseParams { seed: nz.seed.wrapping_mul(2), ..nz.clone() });
    let net_noise = noise.map(|nz| NoiseParams { seed: nz.seed.wrapping_mul(2).wrapping_add(1), ..nz.clone() });

    let prep_program = corrected_sequence(sys)?;
    let rho_initial = prepare(&prep_program, sys, None)?;
    let rho_prepared = match &prep_noise {
        Some(nz) => prepare(&prep_program, sys, Some(nz))?,
        None => rho_initial.clone(),
    };
    let prep = prep_residual(&rho_initial, &effective_pure_target());
    let program = compile_network(params, sys)?;
    let rho_final = execute_program(&program, &rho_prepared, sys, net_noise.as_ref())?;
    let plan = TomographyPlan::full(sys.num_spins())?;
    let rho_exp = plan.reconstruct_state(&rho_final)?;
    let rho_theory = apply_unitary(&rho_initial, &qcs_unitary(params)?)?;
    let fid = fidelity(&rho_theory, &rho_exp, &rho_initial)?;

    let pure = effective_pure_part(&rho_exp, prep.scale)?;
    let working: Vec<QubitIndex> = params.working_qubits();
    let dist = measure_distribution(&pure, &working)?;
    let outcome = outcome_from_distribution(dist.probs.clone(), params);
    Ok(NmrRun { program, rho_initial, rho_prepared, rho_final, rho_exp, rho_theory, prep, fidelity: fid, outcome })
}
