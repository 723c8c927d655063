// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! State tomography from readout experiments, the fidelity score and the
//! JSON matrix format.
//!
//! Reconstruction is linear least squares over the Pauli basis. No
//! positivity projection is applied: deviation matrices are not positive.

mod fidelity;
mod json;
mod plan;

pub use fidelity::{fidelity, FidelityReport};
pub use json::{density_from_json, density_to_json, MatrixJson};
pub use plan::{
    pauli_string, setting_unitary, simulate_readout, z_expectations, ReadoutPulse, ReadoutSetting, TomographyPlan,
};

/// Largest off-diagonal-to-dominant magnitude ratio: returns the dominant
/// element's magnitude, its position, and the largest other magnitude.
pub fn dominance(rho: &crate::linalg::DeviationDensityMatrix) -> (f64, (usize, usize), f64) {
    let d = rho.dim();
    let mut best = (0.0, (0, 0));
    for r in 0..d {
        for c in 0..d {
            let v = rho.get(r, c).norm();
            if v > best.0 {
                best = (v, (r, c));
            }
        }
    }
    let mut spurious: f64 = 0.0;
    for r in 0..d {
        for c in 0..d {
            if (r, c) != best.1 {
                spurious = spurious.max(rho.get(r, c).norm());
            }
        }
    }
    (best.0, best.1, spurious)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply_unitary, matrix_exp, ComplexMatrix, DeviationDensityMatrix, Ket, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut impl Rng, dim: usize) -> DeviationDensityMatrix {
        let m = ComplexMatrix::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        DeviationDensityMatrix::new(m.hermitian_part()).unwrap()
    }

    #[test]
    fn full_plan_is_complete() {
        for n in 1..=3 {
            let plan = TomographyPlan::full(n).unwrap();
            assert_eq!(plan.settings().len(), 3usize.pow(n as u32));
            assert!(plan.is_complete());
        }
    }

    #[test]
    fn partial_plan_is_rejected() {
        let plan = TomographyPlan::new(3, vec![vec![ReadoutPulse::None; 3]]).unwrap();
        assert!(!plan.is_complete());
        let rho = DeviationDensityMatrix::zeros(8);
        assert!(matches!(
            plan.reconstruct_state(&rho),
            Err(crate::QcsError::RankDeficientPlan { rank: 8, needed: 64 })
        ));
    }

    #[test]
    fn round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let plan = TomographyPlan::full(3).unwrap();
        for _ in 0..50 {
            let rho = random_density(&mut rng, 8);
            let rec = plan.reconstruct_state(&rho).unwrap();
            assert!(rec.frobenius_distance(&rho) <= 1e-8);
            assert_eq!(rec.matrix().hermiticity_error(), 0.0);
        }
    }

    #[test]
    fn pure_ground_state_is_one_element() {
        let plan = TomographyPlan::full(3).unwrap();
        let rho = DeviationDensityMatrix::from_ket(&Ket::basis(3, 0).unwrap());
        let rec = plan.reconstruct_state(&rho).unwrap();
        let (top, pos, spurious) = dominance(&rec);
        assert_eq!(pos, (0, 0));
        assert!((top - 1.0).abs() < 1e-10);
        assert!(spurious <= 1e-8 * top);
    }

    #[test]
    fn z_expectations_by_hand() {
        // |01><01| on two spins: <Z1> = 1, <Z2> = -1, <Z1 Z2> = -1
        let rho = DeviationDensityMatrix::from_ket(&Ket::basis(2, 1).unwrap());
        assert_eq!(z_expectations(&rho), vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(&mut rng, 8);
        assert!((fidelity(&rho, &rho, &rho).unwrap().c - 1.0).abs() < 1e-10);

        // traceless and orthogonal: Iz1 vs Iz2
        let iz = |j| DeviationDensityMatrix::new(crate::linalg::spin_on(crate::linalg::Axis::Z, crate::linalg::QubitIndex(j), 3).unwrap()).unwrap();
        let f = fidelity(&iz(0), &iz(1), &rho).unwrap();
        assert_eq!(f.c, 0.0);

        let (t, e, i) = (random_density(&mut rng, 8), random_density(&mut rng, 8), random_density(&mut rng, 8));
        let base = fidelity(&t, &e, &i).unwrap().c;
        for s in [0.5, 2.0] {
            let scaled = fidelity(&t, &e.scale(s), &i).unwrap().c;
            assert!((scaled - s * base).abs() < 1e-10);
        }
        let zero = DeviationDensityMatrix::zeros(8);
        assert!(fidelity(&zero, &e, &i).is_err());
        assert!(fidelity(&t, &zero, &i).is_err());
        assert!(fidelity(&t, &e, &zero).is_err());
        assert!(fidelity(&t, &e, &DeviationDensityMatrix::zeros(4)).is_err());
    }

    #[test]
    fn fidelity_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let (t, e, i) = (random_density(&mut rng, 8), random_density(&mut rng, 8), random_density(&mut rng, 8));
            let u = matrix_exp(random_density(&mut rng, 8).matrix(), 0.8).unwrap();
            let a = fidelity(&t, &e, &i).unwrap().c;
            let conj = |r: &DeviationDensityMatrix| apply_unitary(r, &u).unwrap();
            let b = fidelity(&conj(&t), &conj(&e), &conj(&i)).unwrap().c;
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(&mut rng, 8);
        let text = density_to_json(&rho);
        let back = density_from_json(&text).unwrap();
        assert_eq!(back, rho);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 8);
        assert_eq!(v["re"].as_array().unwrap().len(), 8);
        assert!(density_from_json(r#"{"dim": 2, "re": [[1.0]], "im": [[0.0]]}"#).is_err());
        assert!(density_from_json(r#"{"dim": 2, "re": [[0,1],[0,0]], "im": [[0,0],[0,0]]}"#).is_err());
        assert!(density_from_json("not json").is_err());
    }
}
