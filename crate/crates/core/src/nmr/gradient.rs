// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use super::spin_system::SpinSystem;
use crate::linalg::{ComplexMatrix, DeviationDensityMatrix, C64};

/// Spatial averaging after a z gradient: an element `rho_ab` survives only if
/// its gamma-weighted coherence order `sum_j w_j (m_j(a) - m_j(b))` is zero.
///
/// Homonuclear zero-quantum terms survive; heteronuclear ones do not as long
/// as the gyromagnetic ratios are incommensurate.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientModel {
    weights: Vec<f64>,
    tol: f64,
}

impl GradientModel {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(weights: Vec<f64>, tol: f64) -> Self {
        Self { weights, tol }
    }

    pub fn for_system(sys: &SpinSystem) -> Self {
        Self::new(sys.gammas().to_vec(), Self::DEFAULT_TOL)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted coherence order of element `(a, b)`.
    pub fn coherence_order(&self, a: usize, b: usize) -> f64 {
        let n = self.weights.len();
        (0..n)
            .map(|j| {
                let bit = |x: usize| (x >> (n - 1 - j) & 1) as f64;
                // m = 1/2 - bit, so m(a) - m(b) = bit(b) - bit(a)
                self.weights[j] * (bit(b) - bit(a))
            })
            .sum()
    }

    pub fn survives(&self, a: usize, b: usize) -> bool {
        self.coherence_order(a, b).abs() <= self.tol
    }

    pub fn apply(&self, rho: &DeviationDensityMatrix) -> DeviationDensityMatrix {
        let zero = C64::new(0.0, 0.0);
        let m = ComplexMatrix::from_fn(rho.dim(), |a, b| if self.survives(a, b) { rho.get(a, b) } else { zero });
        DeviationDensityMatrix::from_hermitian(m)
    }
}

/// Applies the gradient model of `sys` to `state`.
pub fn gradient_pulse(state: &DeviationDensityMatrix, model: &GradientModel) -> DeviationDensityMatrix {
    model.apply(state)
}
