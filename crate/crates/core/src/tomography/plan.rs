// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{QcsError, Result};
use crate::linalg::{apply_unitary, kron_all, pauli, rotation, Axis, ComplexMatrix, DeviationDensityMatrix, C64};

/// Readout pulse applied to one spin before detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReadoutPulse {
    None,
    /// `[pi/2]_x`
    X90,
    /// `[pi/2]_y`
    Y90,
}

impl ReadoutPulse {
    pub const ALL: [ReadoutPulse; 3] = [ReadoutPulse::None, ReadoutPulse::X90, ReadoutPulse::Y90];

    pub fn unitary(self) -> ComplexMatrix {
        match self {
            ReadoutPulse::None => ComplexMatrix::identity(2),
            ReadoutPulse::X90 => rotation(Axis::X, std::f64::consts::FRAC_PI_2),
            ReadoutPulse::Y90 => rotation(Axis::Y, std::f64::consts::FRAC_PI_2),
        }
    }
}

impl fmt::Display for ReadoutPulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReadoutPulse::None => "-",
            ReadoutPulse::X90 => "x",
            ReadoutPulse::Y90 => "y",
        })
    }
}

pub type ReadoutSetting = Vec<ReadoutPulse>;

/// Full-register readout operator of one setting.
pub fn setting_unitary(setting: &[ReadoutPulse]) -> ComplexMatrix {
    kron_all(&setting.iter().map(|p| p.unitary()).collect::<Vec<_>>())
}

/// Product of `Z` on the spins selected by `mask` (bit `n-1-j` for spin `j`),
/// identity elsewhere. The eigenvalue on basis state `idx` is
/// `(-1)^popcount(idx & mask)`.
fn z_string_sign(mask: usize, idx: usize) -> f64 {
    if (mask & idx).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Expectation values `Tr(Z_mask U rho U^dagger)` for every mask in
/// `0..2^n`, with ideal readout pulses.
pub fn simulate_readout(rho: &DeviationDensityMatrix, setting: &[ReadoutPulse]) -> Result<Vec<f64>> {
    if 1usize << setting.len() != rho.dim() {
        return Err(QcsError::DimensionMismatch { expected: rho.num_qubits(), actual: setting.len() });
    }
    let rotated = apply_unitary(rho, &setting_unitary(setting))?;
    Ok(z_expectations(&rotated))
}

/// `Tr(Z_mask rho)` for every mask; only the diagonal matters.
pub fn z_expectations(rho: &DeviationDensityMatrix) -> Vec<f64> {
    let dim = rho.dim();
    let diag: Vec<f64> = (0..dim).map(|i| rho.get(i, i).re).collect();
    (0..dim).map(|mask| diag.iter().enumerate().map(|(i, d)| z_string_sign(mask, i) * d).sum()).collect()
}

/// Pauli string for index `p`, base-4 digits per spin with spin 1 most
/// significant; digit 0, 1, 2, 3 is I, X, Y, Z.
pub fn pauli_string(p: usize, n: usize) -> ComplexMatrix {
    let ops: Vec<ComplexMatrix> = (0..n)
        .map(|j| match (p >> (2 * (n - 1 - j))) & 3 {
            0 => ComplexMatrix::identity(2),
            1 => pauli(Axis::X),
            2 => pauli(Axis::Y),
            _ => pauli(Axis::Z),
        })
        .collect();
    kron_all(&ops)
}

/// Readout settings and the linear map from Pauli coefficients of a state
/// to the expectation values they expose.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyPlan {
    n: usize,
    settings: Vec<ReadoutSetting>,
}

impl TomographyPlan {
    pub fn new(n: usize, settings: Vec<ReadoutSetting>) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(QcsError::InvalidParams(format!("tomography supports 1 to 4 spins, got {n}")));
        }
        if settings.iter().any(|s| s.len() != n) {
            return Err(QcsError::InvalidParams("readout setting size differs from spin count".into()));
        }
        Ok(Self { n, settings })
    }

    /// Every combination of {none, x, y} readout on each spin: `3^n` settings.
    pub fn full(n: usize) -> Result<Self> {
        let mut settings: Vec<ReadoutSetting> = vec![Vec::new()];
        for _ in 0..n {
            settings = settings
                .into_iter()
                .flat_map(|s| {
                    ReadoutPulse::ALL.iter().map(move |p| {
                        let mut t = s.clone();
                        t.push(*p);
                        t
                    })
                })
                .collect();
        }
        Self::new(n, settings)
    }

    pub fn num_spins(&self) -> usize {
        self.n
    }

    pub fn settings(&self) -> &[ReadoutSetting] {
        &self.settings
    }

    /// Real parameters of a Hermitian `2^n` matrix.
    pub fn unknowns(&self) -> usize {
        1 << (2 * self.n)
    }

    /// Rows: (setting, Z string); columns: Pauli coefficients `c_P` with
    /// `rho = sum_P c_P P / 2^n`.
    pub fn design_matrix(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n;
        let paulis: Vec<ComplexMatrix> = (0..self.unknowns()).map(|p| pauli_string(p, self.n)).collect();
        let rows = self.settings.len() * dim;
        let mut a = DMatrix::<f64>::zeros(rows, self.unknowns());
        for (s, setting) in self.settings.iter().enumerate() {
            let u = setting_unitary(setting);
            for (p, pm) in paulis.iter().enumerate() {
                let rotated = pm.conjugate_by(&u).scale_real(1.0 / dim as f64);
                let diag: Vec<f64> = (0..dim).map(|i| rotated.get(i, i).re).collect();
                for mask in 0..dim {
                    a[(s * dim + mask, p)] = diag.iter().enumerate().map(|(i, d)| z_string_sign(mask, i) * d).sum();
                }
            }
        }
        a
    }

    pub fn rank(&self) -> usize {
        let svd = self.design_matrix().svd(false, false);
        let max = svd.singular_values.max();
        svd.singular_values.iter().filter(|&&s| s > 1e-10 * max.max(1e-300)).count()
    }

    pub fn is_complete(&self) -> bool {
        self.rank() == self.unknowns()
    }

    /// Least-squares state from the expectation values `oracle` reports for
    /// each setting (one value per Z string, mask order).
    pub fn reconstruct<F>(&self, mut oracle: F) -> Result<DeviationDensityMatrix>
    where
        F: FnMut(&[ReadoutPulse]) -> Result<Vec<f64>>,
    {
        let dim = 1usize << self.n;
        let a = self.design_matrix();
        let svd = a.clone().svd(true, true);
        let max = svd.singular_values.max();
        let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * max.max(1e-300)).count();
        if rank < self.unknowns() {
            return Err(QcsError::RankDeficientPlan { rank, needed: self.unknowns() });
        }
        let mut b = DVector::<f64>::zeros(a.nrows());
        for (s, setting) in self.settings.iter().enumerate() {
            let values = oracle(setting)?;
            if values.len() != dim {
                return Err(QcsError::DimensionMismatch { expected: dim, actual: values.len() });
            }
            for (mask, v) in values.into_iter().enumerate() {
                b[s * dim + mask] = v;
            }
        }
        let coeffs = svd.solve(&b, 1e-12).map_err(|e| QcsError::InvalidParams(e.to_string()))?;
        let mut m = ComplexMatrix::zeros(dim);
        for (p, c) in coeffs.iter().enumerate() {
            if *c != 0.0 {
                m = &m + &pauli_string(p, self.n).scale(C64::new(c / dim as f64, 0.0));
            }
        }
        Ok(DeviationDensityMatrix::from_hermitian(m))
    }

    /// Reconstruction with ideal readouts of a known state.
    pub fn reconstruct_state(&self, rho: &DeviationDensityMatrix) -> Result<DeviationDensityMatrix> {
        self.reconstruct(|setting| simulate_readout(rho, setting))
    }
}
