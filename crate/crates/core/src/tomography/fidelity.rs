// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{QcsError, Result};
use crate::linalg::DeviationDensityMatrix;

/// Fidelity of an experimental state against theory, with its two factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    /// `overlap * purity_ratio`.
    pub c: f64,
    /// `Tr(rt re) / (sqrt(Tr rt^2) sqrt(Tr re^2))`, scale invariant.
    pub overlap: f64,
    /// `sqrt(Tr re^2 / Tr ri^2)`, signal retained relative to the input.
    pub purity_ratio: f64,
}

/// `C = Tr(rt re) / (sqrt(Tr rt^2) sqrt(Tr re^2)) * sqrt(Tr re^2 / Tr ri^2)`.
pub fn fidelity(
    rho_theory: &DeviationDensityMatrix,
    rho_exp: &DeviationDensityMatrix,
    rho_initial: &DeviationDensityMatrix,
) -> Result<FidelityReport> {
    let dim = rho_theory.dim();
    for d in [rho_exp.dim(), rho_initial.dim()] {
        if d != dim {
            return Err(QcsError::DimensionMismatch { expected: dim, actual: d });
        }
    }
    let pt = rho_theory.purity();
    let pe = rho_exp.purity();
    let pi = rho_initial.purity();
    if pt <= 0.0 {
        return Err(QcsError::ZeroPurity("theory"));
    }
    if pe <= 0.0 {
        return Err(QcsError::ZeroPurity("experiment"));
    }
    if pi <= 0.0 {
        return Err(QcsError::ZeroPurity("initial"));
    }
    let overlap = rho_theory.overlap(rho_exp) / (pt.sqrt() * pe.sqrt());
    let purity_ratio = (pe / pi).sqrt();
    Ok(FidelityReport { c: overlap * purity_ratio, overlap, purity_ratio })
}
