// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::error::{QcsError, Result};
use crate::linalg::{embed, matrix_exp, spin, Axis, ComplexMatrix, QubitIndex, C64, MAX_QUBITS};

/// Default C1-C2 frequency difference in Hz.
pub const NU1_MINUS_NU2_HZ: f64 = 904.4;
pub const J12_HZ: f64 = 103.1;
pub const J23_HZ: f64 = 203.8;
pub const J13_HZ: f64 = 9.16;
/// Proton to carbon-13 gyromagnetic ratio.
pub const GAMMA_H_OVER_C: f64 = 3.9777;

/// Weakly coupled spin-1/2 system in the multiple rotating frame.
///
/// Frequencies are offsets from the transmitter of each nucleus, in Hz.
/// The default puts the carbon transmitter halfway between C1 and C2 and the
/// proton transmitter on resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    freqs: Vec<f64>,
    couplings: Vec<Vec<f64>>,
    gammas: Vec<f64>,
}

impl SpinSystem {
    pub fn new(freqs: Vec<f64>, couplings: Vec<Vec<f64>>, gammas: Vec<f64>) -> Result<Self> {
        let n = freqs.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(QcsError::InvalidSpinSystem(format!("{n} spins not supported")));
        }
        if gammas.len() != n || couplings.len() != n || couplings.iter().any(|row| row.len() != n) {
            return Err(QcsError::InvalidSpinSystem("frequency, coupling and gamma sizes differ".into()));
        }
        for j in 0..n {
            if couplings[j][j] != 0.0 {
                return Err(QcsError::InvalidSpinSystem(format!("J{}{} must be zero", j + 1, j + 1)));
            }
            for l in 0..j {
                if couplings[j][l] != couplings[l][j] {
                    return Err(QcsError::InvalidSpinSystem(format!("J{}{} is not symmetric", l + 1, j + 1)));
                }
            }
        }
        let all_finite = freqs.iter().chain(gammas.iter()).chain(couplings.iter().flatten()).all(|x| x.is_finite());
        if !all_finite {
            return Err(QcsError::InvalidSpinSystem("non-finite parameter".into()));
        }
        if gammas.iter().any(|&g| g <= 0.0) {
            return Err(QcsError::InvalidSpinSystem("gyromagnetic ratios must be positive".into()));
        }
        Ok(Self { freqs, couplings, gammas })
    }

    /// Three-spin system from the two carbon offsets, the proton offset, the
    /// three couplings and the H/C gyromagnetic ratio.
    pub fn three_spin(nu: [f64; 3], j12: f64, j23: f64, j13: f64, gamma_ratio: f64) -> Result<Self> {
        let couplings = vec![vec![0.0, j12, j13], vec![j12, 0.0, j23], vec![j13, j23, 0.0]];
        Self::new(nu.to_vec(), couplings, vec![1.0, 1.0, gamma_ratio])
    }

    /// Loads `key=value` lines. Unknown keys are rejected; missing keys keep
    /// their defaults. `#` starts a comment.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut cfg = SpinConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| QcsError::Parse { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            let value: f64 = value.trim().parse().map_err(|_| err(format!("bad number '{}'", value.trim())))?;
            let slot = match key.trim() {
                "nu1_minus_nu2_hz" => &mut cfg.nu1_minus_nu2,
                "nu2_hz" => &mut cfg.nu2,
                "nu3_hz" => &mut cfg.nu3,
                "J12_hz" => &mut cfg.j12,
                "J23_hz" => &mut cfg.j23,
                "J13_hz" => &mut cfg.j13,
                "gamma_ratio_H_over_C" => &mut cfg.gamma_ratio,
                other => return Err(err(format!("unknown key '{other}'"))),
            };
            *slot = value;
        }
        cfg.build()
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| QcsError::InvalidSpinSystem(format!("cannot read {}: {e}", path.display())))?;
        Self::from_config_str(&text)
    }

    pub fn num_spins(&self) -> usize {
        self.freqs.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.num_spins()
    }

    pub fn freq(&self, j: usize) -> f64 {
        self.freqs[j]
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn coupling(&self, j: usize, l: usize) -> f64 {
        self.couplings[j][l]
    }

    pub fn gamma(&self, j: usize) -> f64 {
        self.gammas[j]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn check_spin(&self, j: usize) -> Result<QubitIndex> {
        QubitIndex::new(j, self.num_spins())
    }

    /// Coupled pairs `(j, l)` with `j < l` and nonzero `J`.
    pub fn coupled_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_spins();
        (0..n).flat_map(|j| (j + 1..n).map(move |l| (j, l))).filter(|&(j, l)| self.couplings[j][l] != 0.0).collect()
    }

    /// Diagonal of the Hamiltonian in rad/s:
    /// `-2 pi sum nu_j m_j + 2 pi sum_{j<l} J_jl m_j m_l` with `m = +-1/2`.
    pub fn hamiltonian_diagonal(&self) -> Vec<f64> {
        let n = self.num_spins();
        (0..self.dim())
            .map(|idx| {
                let m: Vec<f64> = (0..n).map(|j| if idx >> (n - 1 - j) & 1 == 0 { 0.5 } else { -0.5 }).collect();
                let mut e = 0.0;
                for j in 0..n {
                    e -= 2.0 * PI * self.freqs[j] * m[j];
                    for l in j + 1..n {
                        e += 2.0 * PI * self.couplings[j][l] * m[j] * m[l];
                    }
                }
                e
            })
            .collect()
    }

    /// Full weak-coupling Hamiltonian, built from spin operators.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        let n = self.num_spins();
        let iz: Vec<ComplexMatrix> = (0..n)
            .map(|j| embed(&spin(Axis::Z), &[QubitIndex(j)], n).expect("spin index in range"))
            .collect();
        let mut h = ComplexMatrix::zeros(self.dim());
        for j in 0..n {
            h = &h - &iz[j].scale_real(2.0 * PI * self.freqs[j]);
            for l in j + 1..n {
                h = &h + &(&iz[j] * &iz[l]).scale_real(2.0 * PI * self.couplings[j][l]);
            }
        }
        h
    }

    /// `exp(-i H t)` of the full Hamiltonian.
    pub fn free_evolution(&self, t: f64) -> ComplexMatrix {
        let d: Vec<C64> = self.hamiltonian_diagonal().iter().map(|e| C64::from_polar(1.0, -e * t)).collect();
        ComplexMatrix::from_diagonal(&d)
    }

    /// `[tau]_jl = exp(-i 2 pi J_jl tau I_z^j I_z^l)`, identity on other spins.
    pub fn coupled_evolution(&self, j: usize, l: usize, tau: f64) -> Result<ComplexMatrix> {
        let (qj, ql) = (self.check_spin(j)?, self.check_spin(l)?);
        if j == l {
            return Err(QcsError::SameSpin(j));
        }
        let izz = spin(Axis::Z).kron(&spin(Axis::Z)).scale_real(2.0 * PI * self.couplings[j][l]);
        embed(&matrix_exp(&izz, tau)?, &[qj, ql], self.num_spins())
    }

    /// Config text that reloads to this system (three-spin systems only).
    pub fn to_config_string(&self) -> Option<String> {
        if self.num_spins() != 3 || self.gammas[0] != 1.0 || self.gammas[1] != 1.0 {
            return None;
        }
        Some(format!(
            "nu1_minus_nu2_hz={}\nnu2_hz={}\nnu3_hz={}\nJ12_hz={}\nJ23_hz={}\nJ13_hz={}\ngamma_ratio_H_over_C={}\n",
            self.freqs[0] - self.freqs[1],
            self.freqs[1],
            self.freqs[2],
            self.couplings[0][1],
            self.couplings[1][2],
            self.couplings[0][2],
            self.gammas[2]
        ))
    }
}

impl Default for SpinSystem {
    fn default() -> Self {
        SpinConfig::default().build().expect("default spin system is valid")
    }
}

impl fmt::Display for SpinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_spins();
        for j in 0..n {
            write!(f, "spin {}: nu = {} Hz, gamma = {}", j + 1, self.freqs[j], self.gammas[j])?;
            writeln!(f)?;
        }
        for (j, l) in self.coupled_pairs() {
            writeln!(f, "J{}{} = {} Hz", j + 1, l + 1, self.couplings[j][l])?;
        }
        Ok(())
    }
}

struct SpinConfig {
    nu1_minus_nu2: f64,
    nu2: f64,
    nu3: f64,
    j12: f64,
    j23: f64,
    j13: f64,
    gamma_ratio: f64,
}

impl Default for SpinConfig {
    fn default() -> Self {
        Self {
            nu1_minus_nu2: NU1_MINUS_NU2_HZ,
            nu2: -NU1_MINUS_NU2_HZ / 2.0,
            nu3: 0.0,
            j12: J12_HZ,
            j23: J23_HZ,
            j13: J13_HZ,
            gamma_ratio: GAMMA_H_OVER_C,
        }
    }
}

impl SpinConfig {
    fn build(&self) -> Result<SpinSystem> {
        let nu = [self.nu2 + self.nu1_minus_nu2, self.nu2, self.nu3];
        SpinSystem::three_spin(nu, self.j12, self.j23, self.j13, self.gamma_ratio)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_values() {
        let s = SpinSystem::default();
        assert_eq!(s.num_spins(), 3);
        assert!((s.freq(0) - s.freq(1) - 904.4).abs() < 1e-12);
        assert_eq!(s.coupling(0, 1), 103.1);
        assert_eq!(s.coupling(2, 1), 203.8);
        assert_eq!(s.coupling(0, 2), 9.16);
        assert_eq!(s.gamma(2), 3.9777);
    }

    #[test]
    fn zero_system_has_zero_hamiltonian() {
        let s = SpinSystem::three_spin([0.0; 3], 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(s.hamiltonian().max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_diagonal_by_hand() {
        let s = SpinSystem::default();
        let h = s.hamiltonian();
        assert!(h.is_diagonal());
        let (nu1, nu2, nu3) = (s.freq(0), s.freq(1), s.freq(2));
        let (j12, j23, j13) = (103.1, 203.8, 9.16);
        let tp = 2.0 * PI;
        let e000 = -tp * (nu1 + nu2 + nu3) / 2.0 + tp * (j12 + j23 + j13) / 4.0;
        assert!((h.get(0, 0).re - e000).abs() < 1e-9);
        // |011>: m = (+, -, -)
        let e011 = -tp * (nu1 - nu2 - nu3) / 2.0 + tp * (-j12 + j23 - j13) / 4.0;
        assert!((h.get(3, 3).re - e011).abs() < 1e-9);
        for (i, e) in s.hamiltonian_diagonal().iter().enumerate() {
            assert!((h.get(i, i).re - e).abs() < 1e-9);
        }
        assert!((nu1 - nu2 - 904.4).abs() < 1e-12);
    }

    #[test]
    fn coupled_evolution_closed_form() {
        let s = SpinSystem::default();
        let tau = 1.0 / (2.0 * 103.1);
        let u = s.coupled_evolution(0, 1, tau).unwrap();
        let (a, b) = (C64::from_polar(1.0, -PI / 4.0), C64::from_polar(1.0, PI / 4.0));
        for idx in 0..8 {
            let same = (idx >> 2 & 1) == (idx >> 1 & 1);
            let expect = if same { a } else { b };
            assert!((u.get(idx, idx) - expect).norm() < 1e-12);
        }
        assert!(s.coupled_evolution(0, 1, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
        let u2 = s.coupled_evolution(1, 2, 0.004).unwrap();
        assert!((&u2 * &u2).max_abs_diff(&s.coupled_evolution(1, 2, 0.008).unwrap()) < 1e-12);
        assert_eq!(s.coupled_evolution(1, 1, 0.1), Err(QcsError::SameSpin(1)));
    }

    #[test]
    fn free_evolution_matches_matrix_exp() {
        let s = SpinSystem::default();
        let u = s.free_evolution(0.0123);
        let v = matrix_exp(&s.hamiltonian(), 0.0123).unwrap();
        assert!(u.max_abs_diff(&v) < 1e-12);
    }

    #[test]
    fn config_parsing() {
        let s = SpinSystem::from_config_str(
            "# TCE\nnu1_minus_nu2_hz=900\nJ12_hz = 100\nJ23_hz=200\nJ13_hz=10\ngamma_ratio_H_over_C=4\n",
        )
        .unwrap();
        assert_eq!(s.freq(0) - s.freq(1), 900.0);
        assert_eq!(s.coupling(0, 1), 100.0);
        assert_eq!(s.gamma(2), 4.0);
        assert_eq!(SpinSystem::from_config_str("").unwrap(), SpinSystem::default());
        assert!(matches!(SpinSystem::from_config_str("J14_hz=3"), Err(QcsError::Parse { line: 1, .. })));
        assert!(matches!(SpinSystem::from_config_str("\nJ12_hz"), Err(QcsError::Parse { line: 2, .. })));
        assert!(SpinSystem::from_config_str("gamma_ratio_H_over_C=-1").is_err());
        let d = SpinSystem::default();
        assert_eq!(SpinSystem::from_config_str(&d.to_config_string().unwrap()).unwrap(), d);
    }

    #[test]
    fn validation() {
        assert!(SpinSystem::new(vec![0.0, 0.0], vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![1.0, 1.0]).is_err());
        assert!(SpinSystem::new(vec![0.0], vec![vec![1.0]], vec![1.0]).is_err());
        assert!(SpinSystem::new(vec![], vec![], vec![]).is_err());
    }
}
