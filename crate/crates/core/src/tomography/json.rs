// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{QcsError, Result};
use crate::linalg::{ComplexMatrix, DeviationDensityMatrix, C64};

/// Matrix dump: `{"dim": d, "re": [[...]], "im": [[...]]}`, row-major, where
/// `d` is the matrix dimension (8 for three spins).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        Self {
            dim: d,
            re: (0..d).map(|r| (0..d).map(|c| m.get(r, c).re).collect()).collect(),
            im: (0..d).map(|r| (0..d).map(|c| m.get(r, c).im).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let d = self.dim;
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if d == 0 || !rows_ok(&self.re) || !rows_ok(&self.im) {
            return Err(QcsError::Json(format!("expected {d}x{d} re and im arrays")));
        }
        Ok(ComplexMatrix::from_fn(d, |r, c| C64::new(self.re[r][c], self.im[r][c])))
    }

    pub fn to_density(&self) -> Result<DeviationDensityMatrix> {
        DeviationDensityMatrix::new(self.to_matrix()?)
    }
}

impl From<&DeviationDensityMatrix> for MatrixJson {
    fn from(rho: &DeviationDensityMatrix) -> Self {
        Self::from_matrix(rho.matrix())
    }
}

pub fn density_to_json(rho: &DeviationDensityMatrix) -> String {
    serde_json::to_string_pretty(&MatrixJson::from(rho)).expect("matrix serializes")
}

pub fn density_from_json(text: &str) -> Result<DeviationDensityMatrix> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| QcsError::Json(e.to_string()))?;
    j.to_density()
}
