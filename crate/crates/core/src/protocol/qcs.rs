// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::network::{GateKind, GateNetwork};
use super::params::ProtocolParams;
use crate::error::{QcsError, Result};
use crate::linalg::{embed, ComplexMatrix, Ket, QubitIndex, C64};

/// Result of one ideal run.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct QcsOutcome {
    /// Probability of each `j` in `[0, 2^m)`, qubit 1 read as the most
    /// significant bit.
    pub distribution: Vec<f64>,
    pub j_peak: usize,
    pub delta_estimate: f64,
    /// `2^m omega delta` is an integer (within 1e-9).
    pub exact: bool,
}

impl QcsOutcome {
    pub fn peak_probability(&self) -> f64 {
        self.distribution[self.j_peak]
    }

    /// Bit label of the peak on the full register, ancilla last (`"010"`).
    pub fn peak_label(&self, m: usize) -> String {
        let mut s: String = (0..m).map(|p| if self.j_peak >> (m - 1 - p) & 1 == 1 { '1' } else { '0' }).collect();
        s.push('0');
        s
    }
}

/// Hadamards on the working qubits of an `m + 1` qubit register.
pub fn hadamard_layer(m: usize) -> Result<GateNetwork> {
    let mut net = GateNetwork::new(m + 1);
    for q in 0..m {
        net.push(GateKind::Hadamard, &[q])?;
    }
    Ok(net)
}

/// `H^{(x)m}` on the working qubits, identity on the ancilla.
pub fn hadamard_all(m: usize) -> Result<ComplexMatrix> {
    hadamard_layer(m)?.unitary()
}

/// Two-qubit handshake phase for layer `l` acting on (layer qubit, ancilla).
pub fn tqh_phase(layer: usize, params: &ProtocolParams) -> Result<ComplexMatrix> {
    if layer >= params.m() {
        return Err(QcsError::LayerOutOfRange { layer, m: params.m() });
    }
    Ok(GateKind::TqhPhase { layer, omega_delta: params.omega_delta() }.matrix())
}

/// CNOT, handshake, CNOT for every layer. Qubit `l` carries bit `k_l` of
/// weight `2^l`.
pub fn t_network(params: &ProtocolParams) -> Result<GateNetwork> {
    let anc = params.ancilla().0;
    let mut net = GateNetwork::new(params.register_size());
    for l in 0..params.m() {
        net.push(GateKind::Cnot, &[l, anc])?;
        net.push(GateKind::TqhPhase { layer: l, omega_delta: params.omega_delta() }, &[l, anc])?;
        net.push(GateKind::Cnot, &[l, anc])?;
    }
    Ok(net)
}

pub fn t_operation(params: &ProtocolParams) -> Result<ComplexMatrix> {
    t_network(params)?.unitary()
}

/// Applies the T operation to a pure state whose ancilla must start in `|0>`.
pub fn apply_t_operation(ket: &mut Ket, params: &ProtocolParams) -> Result<()> {
    let n = params.register_size();
    if ket.num_qubits() != n {
        return Err(QcsError::DimensionMismatch { expected: n, actual: ket.num_qubits() });
    }
    let pop = ancilla_excited_population(ket, params.ancilla());
    if pop > 1e-12 {
        return Err(QcsError::AncillaNotReset(pop));
    }
    t_network(params)?.apply_to_ket(ket)
}

pub fn ancilla_excited_population(ket: &Ket, ancilla: QubitIndex) -> f64 {
    let shift = ancilla.shift(ket.num_qubits());
    ket.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| (i >> shift) & 1 == 1)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Gate network of the inverse QFT with the output SWAP absorbed, on qubits
/// `0..m` of an `n`-qubit register. It is the inverse of the swap-free
/// textbook QFT network; for `m = 2` it is `H` on qubit 2, the controlled
/// `-pi/2` phase, then `H` on qubit 1.
pub fn inverse_qft_network(m: usize, n: usize) -> Result<GateNetwork> {
    let mut net = GateNetwork::new(n);
    for i in (0..m).rev() {
        for j in (i + 1..m).rev() {
            let angle = -2.0 * PI / (1u64 << (j - i + 1)) as f64;
            net.push(GateKind::ControlledPhase(angle), &[i, j])?;
        }
        net.push(GateKind::Hadamard, &[i])?;
    }
    Ok(net)
}

/// The `2^m x 2^m` reduced inverse QFT built from its gate network.
pub fn inverse_qft_reduced(m: usize) -> Result<ComplexMatrix> {
    inverse_qft_network(m, m)?.unitary()
}

/// `diag(1, 1, 1, -i)`.
pub fn controlled_phase_gate() -> ComplexMatrix {
    let one = C64::new(1.0, 0.0);
    ComplexMatrix::from_diagonal(&[one, one, one, C64::new(0.0, -1.0)])
}

/// Hadamards, T and the reduced inverse QFT on `m + 1` qubits.
pub fn qcs_network(params: &ProtocolParams) -> Result<GateNetwork> {
    let mut net = hadamard_layer(params.m())?;
    net.append(&t_network(params)?)?;
    net.append(&inverse_qft_network(params.m(), params.register_size())?)?;
    Ok(net)
}

pub fn qcs_unitary(params: &ProtocolParams) -> Result<ComplexMatrix> {
    qcs_network(params)?.unitary()
}

pub fn run_qcs(params: &ProtocolParams) -> Result<QcsOutcome> {
    let n = params.register_size();
    let mut ket = Ket::basis(n, 0)?;
    hadamard_layer(params.m())?.apply_to_ket(&mut ket)?;
    apply_t_operation(&mut ket, params)?;
    inverse_qft_network(params.m(), n)?.apply_to_ket(&mut ket)?;

    // Ancilla is the least significant bit, so j = index >> 1.
    let mut distribution = vec![0.0; 1 << params.m()];
    for (idx, p) in ket.probabilities().into_iter().enumerate() {
        distribution[idx >> 1] += p;
    }
    Ok(outcome_from_distribution(distribution, params))
}

/// Peak (ties toward smaller `j`) and estimate for a distribution over `j`.
pub fn outcome_from_distribution(distribution: Vec<f64>, params: &ProtocolParams) -> QcsOutcome {
    let mut j_peak = 0;
    for (j, p) in distribution.iter().enumerate() {
        if *p > distribution[j_peak] + 1e-12 {
            j_peak = j;
        }
    }
    let s = params.scaled_phase();
    QcsOutcome {
        delta_estimate: estimate_delta(j_peak, params),
        exact: (s - s.round()).abs() < 1e-9,
        distribution,
        j_peak,
    }
}

/// `|c_j|^2` by direct summation over `k`.
pub fn outcome_distribution_closed_form(params: &ProtocolParams) -> Vec<f64> {
    let n = 1usize << params.m();
    let wd = params.omega_delta();
    (0..n)
        .map(|j| {
            let x = wd - j as f64 / n as f64;
            let c: C64 = (0..n).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 * x)).sum();
            (c / n as f64).norm_sqr()
        })
        .collect()
}

/// Geometric-series form `|sin(pi N x) / (N sin(pi x))|^2` of the same
/// distribution, with `N = 2^m` and `x = omega delta - j / N`.
pub fn outcome_distribution_geometric(params: &ProtocolParams) -> Vec<f64> {
    let n = 1usize << params.m();
    let nf = n as f64;
    let wd = params.omega_delta();
    (0..n)
        .map(|j| {
            let x = wd - j as f64 / nf;
            let den = (PI * x).sin();
            if den.abs() < 1e-12 {
                1.0
            } else {
                let r = (PI * nf * x).sin() / (nf * den);
                r * r
            }
        })
        .collect()
}

/// `j / (2^m omega)`.
pub fn estimate_delta(j: usize, params: &ProtocolParams) -> f64 {
    j as f64 / ((1u64 << params.m()) as f64 * params.omega())
}

/// Full-register embedding of the reduced inverse QFT on the working qubits.
pub fn inverse_qft_on_register(params: &ProtocolParams) -> Result<ComplexMatrix> {
    embed(&inverse_qft_reduced(params.m())?, &params.working_qubits(), params.register_size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Direct diagonal of the T operation on the ancilla-|0> block:
    /// `|k'>|0> -> exp(2 pi i wd sum_l 2^l k_l) |k'>|0>`, qubit `l` holding `k_l`.
    fn t_oracle(m: usize, wd: f64) -> Vec<C64> {
        (0..1usize << m)
            .map(|idx| {
                let k: usize = (0..m).map(|l| ((idx >> (m - 1 - l)) & 1) << l).sum();
                C64::from_polar(1.0, 2.0 * PI * wd * k as f64)
            })
            .collect()
    }

    fn t_on_ancilla_zero_block(u: &ComplexMatrix, m: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(1 << m, |r, cc| u.get(r << 1, cc << 1))
    }

    fn eq8() -> ComplexMatrix {
        let h = c(0.5, 0.0);
        let rows = [
            [c(1., 0.), c(1., 0.), c(1., 0.), c(1., 0.)],
            [c(1., 0.), c(-1., 0.), c(0., -1.), c(0., 1.)],
            [c(1., 0.), c(1., 0.), c(-1., 0.), c(-1., 0.)],
            [c(1., 0.), c(-1., 0.), c(0., 1.), c(0., -1.)],
        ];
        ComplexMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|z| z * h).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn hadamard_all_examples() {
        let h1 = hadamard_all(1).unwrap();
        let mut k = Ket::basis(2, 0).unwrap();
        k.apply_local(&crate::linalg::hadamard(), &[QubitIndex(0)]).unwrap();
        // |0>|0> -> (|00> + |10>)/sqrt2
        assert!((h1.get(0, 0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((h1.get(2, 0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((k.amplitudes()[2] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let h2 = hadamard_all(2).unwrap();
        for idx in [0b000, 0b010, 0b100, 0b110] {
            assert!((h2.get(idx, 0) - c(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((&h2 * &h2).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn tqh_phase_examples() {
        let zero = ProtocolParams::from_omega_delta(2, 0.0).unwrap();
        assert!(tqh_phase(0, &zero).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);

        let quarter = ProtocolParams::from_omega_delta(2, 0.25).unwrap();
        let t0 = tqh_phase(0, &quarter).unwrap();
        assert!((t0.get(0, 0) - C64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
        assert!((t0.get(3, 3) - C64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
        assert_eq!(t0.get(1, 1), c(1.0, 0.0));
        let t1 = tqh_phase(1, &quarter).unwrap();
        for i in 0..4 {
            assert!((t1.get(i, i) - t0.get(i, i) * t0.get(i, i)).norm() < 1e-15);
        }
        assert!(matches!(tqh_phase(2, &quarter), Err(QcsError::LayerOutOfRange { .. })));
    }

    #[test]
    fn tqh_on_bell_subspace_is_ancilla_z_rotation() {
        // on span{|00>, |11>} the handshake equals R_z(2^l phi) on the ancilla
        let p = ProtocolParams::from_omega_delta(3, 0.37).unwrap();
        for l in 0..3 {
            let t = tqh_phase(l, &p).unwrap();
            let rot = ComplexMatrix::identity(2).kron(&crate::linalg::rz((1u64 << l) as f64 * p.phi()));
            for idx in [0, 3] {
                assert!((t.get(idx, idx) - rot.get(idx, idx)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn t_operation_four_phase_pattern() {
        let p = ProtocolParams::from_omega_delta(2, 0.25).unwrap();
        let block = t_on_ancilla_zero_block(&t_operation(&p).unwrap(), 2);
        // |k'> in register order 00, 01, 10, 11 has k = k0 + 2 k1 = 0, 2, 1, 3
        let g = block.get(0, 0).conj();
        let expect = [0.0, 2.0, 1.0, 3.0];
        for (i, k) in expect.iter().enumerate() {
            let rel = block.get(i, i) * g;
            assert!((rel - C64::from_polar(1.0, PI / 2.0 * k)).norm() < 1e-12, "k = {k}");
        }
        let zero = ProtocolParams::from_omega_delta(2, 0.0).unwrap();
        assert!(t_operation(&zero).unwrap().phase_aligned_distance(&ComplexMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn t_operation_matches_diagonal_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for m in 1..=4 {
            for _ in 0..20 {
                let wd: f64 = rng.random_range(0.0..1.0);
                let p = ProtocolParams::from_omega_delta(m, wd).unwrap();
                let u = t_operation(&p).unwrap();
                // ancilla never flips
                for r in 0..u.dim() {
                    for cc in 0..u.dim() {
                        if (r ^ cc) & 1 == 1 {
                            assert_eq!(u.get(r, cc).norm(), 0.0);
                        }
                    }
                }
                let block = t_on_ancilla_zero_block(&u, m);
                let oracle = ComplexMatrix::from_diagonal(&t_oracle(m, wd));
                assert!(block.phase_aligned_distance(&oracle) <= 1e-10);
            }
        }
    }

    #[test]
    fn ancilla_returns_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in 1..=5 {
            let p = ProtocolParams::from_omega_delta(m, rng.random()).unwrap();
            let mut ket = Ket::basis(m + 1, 0).unwrap();
            hadamard_layer(m).unwrap().apply_to_ket(&mut ket).unwrap();
            apply_t_operation(&mut ket, &p).unwrap();
            assert!(ancilla_excited_population(&ket, p.ancilla()) <= 1e-12);
        }
    }

    #[test]
    fn t_operation_rejects_excited_ancilla() {
        let p = ProtocolParams::from_omega_delta(2, 0.1).unwrap();
        let mut ket = Ket::basis(3, 0b001).unwrap();
        assert!(matches!(apply_t_operation(&mut ket, &p), Err(QcsError::AncillaNotReset(_))));
    }

    #[test]
    fn inverse_qft_reduced_matches_printed_matrix() {
        let f = inverse_qft_reduced(2).unwrap();
        assert!(f.max_abs_diff(&eq8()) <= 1e-12);
        let row2: Vec<C64> = (0..4).map(|cc| f.get(1, cc) * 2.0).collect();
        let expect = [c(1., 0.), c(-1., 0.), c(0., -1.), c(0., 1.)];
        for (a, b) in row2.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(f.unitarity_error() < 1e-12);
        let uniform = vec![c(0.5, 0.0); 4];
        let out: Vec<C64> = (0..4).map(|r| (0..4).map(|cc| f.get(r, cc) * uniform[cc]).sum()).collect();
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(out[1..].iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn inverse_qft_reduced_is_dft_inverse_times_bit_reversal() {
        for m in 1..=5 {
            let n = 1usize << m;
            let rev = |x: usize| (0..m).fold(0, |acc, b| acc | ((x >> b) & 1) << (m - 1 - b));
            let oracle = ComplexMatrix::from_fn(n, |j, k| {
                C64::from_polar(1.0 / (n as f64).sqrt(), -2.0 * PI * (j * rev(k)) as f64 / n as f64)
            });
            assert!(inverse_qft_reduced(m).unwrap().max_abs_diff(&oracle) < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn controlled_phase_gate_examples() {
        let g = controlled_phase_gate();
        assert_eq!(g.get(3, 3), c(0.0, -1.0));
        assert!(g.max_abs_diff(&ComplexMatrix::from_diagonal(&[c(1., 0.), c(1., 0.), c(1., 0.), c(0., -1.)])) < 1e-16);
        assert!(g.pow(4).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        let d = ComplexMatrix::from_diagonal(&[c(0.3, 0.1), c(-1.0, 2.0), c(0.0, 1.0), c(5.0, 0.0)]);
        assert!((&g * &d).max_abs_diff(&(&d * &g)) < 1e-15);
    }

    #[test]
    fn four_experiments_peak_at_expected_states() {
        let labels = ["000", "010", "100", "110"];
        for (k, label) in labels.iter().enumerate() {
            let p = ProtocolParams::from_phi_index(k).unwrap();
            let out = run_qcs(&p).unwrap();
            assert_eq!(out.j_peak, k);
            assert_eq!(&out.peak_label(2), label);
            assert!((out.peak_probability() - 1.0).abs() <= 1e-9);
            assert!(out.exact);
        }
    }

    #[test]
    fn closed_form_examples() {
        let p = ProtocolParams::from_omega_delta(3, 5.0 / 8.0).unwrap();
        let d = outcome_distribution_closed_form(&p);
        for (j, q) in d.iter().enumerate() {
            let expect = if j == 5 { 1.0 } else { 0.0 };
            assert!((q - expect).abs() < 1e-12);
        }
        // m = 2, wd = 0.3, direct sums over k = 0..3 written out by hand
        let p = ProtocolParams::from_omega_delta(2, 0.3).unwrap();
        let d = outcome_distribution_closed_form(&p);
        for j in 0..4 {
            let x = 0.3 - j as f64 / 4.0;
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..4 {
                re += (2.0 * PI * k as f64 * x).cos();
                im += (2.0 * PI * k as f64 * x).sin();
            }
            assert!((d[j] - (re * re + im * im) / 16.0).abs() < 1e-14);
        }
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_form_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let m = rng.random_range(1..=6);
            let p = ProtocolParams::from_omega_delta(m, rng.random_range(-2.0..2.0)).unwrap();
            let a = outcome_distribution_closed_form(&p);
            let b = outcome_distribution_geometric(&p);
            let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-12);
        }
    }

    #[test]
    fn run_qcs_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for m in 1..=5 {
            for _ in 0..10 {
                let p = ProtocolParams::from_omega_delta(m, rng.random()).unwrap();
                let out = run_qcs(&p).unwrap();
                let d = outcome_distribution_closed_form(&p);
                let worst = out.distribution.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                assert!(worst <= 1e-10);
            }
        }
    }

    #[test]
    fn run_qcs_ideal_density_matches_ket_path() {
        let p = ProtocolParams::from_omega_delta(2, 0.3).unwrap();
        let rho = crate::linalg::DeviationDensityMatrix::from_ket(&Ket::basis(3, 0).unwrap());
        let out = qcs_network(&p).unwrap().apply_to_density(&rho).unwrap();
        let d = crate::linalg::measure_distribution(&out, &p.working_qubits()).unwrap();
        assert!(d.max_abs_diff(&run_qcs(&p).unwrap().distribution) < 1e-12);
    }

    #[test]
    fn estimate_delta_examples() {
        let p = ProtocolParams::new(2, 2.0, 0.0).unwrap();
        assert_eq!(estimate_delta(0, &p), 0.0);
        assert_eq!(estimate_delta(1, &p), 1.0 / (4.0 * 2.0));
        assert_eq!(estimate_delta(2, &p), 1.0 / (2.0 * 2.0));
    }

    #[test]
    fn ties_break_toward_smaller_j() {
        // wd exactly halfway between j = 1 and j = 2 for m = 2
        let p = ProtocolParams::from_omega_delta(2, 0.375).unwrap();
        let out = run_qcs(&p).unwrap();
        assert!((out.distribution[1] - out.distribution[2]).abs() < 1e-12);
        assert_eq!(out.j_peak, 1);
        assert!(!out.exact);
    }
}
