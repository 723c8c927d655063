// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate-level clock synchronization: Hadamards, the ticking-qubit T
//! operation and the reduced inverse QFT, with `m` working qubits plus one
//! ancilla as the last (least significant) qubit.

mod network;
mod params;
mod qcs;

pub use network::{Gate, GateKind, GateNetwork};
pub use params::{phi_k, ProtocolParams};
pub use qcs::{
    ancilla_excited_population, apply_t_operation, controlled_phase_gate, estimate_delta, hadamard_all,
    hadamard_layer, inverse_qft_network, inverse_qft_on_register, inverse_qft_reduced, outcome_distribution_closed_form,
    outcome_distribution_geometric, outcome_from_distribution, qcs_network, qcs_unitary, run_qcs, t_network, t_operation, tqh_phase, QcsOutcome,
};
