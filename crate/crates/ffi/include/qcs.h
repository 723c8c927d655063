/* Copyright 2026 The qcs-nmr Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef QCS_H
#define QCS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum QcsStatus {
  QCS_STATUS_OK = 0,
  QCS_STATUS_NULL_POINTER = 1,
  QCS_STATUS_INVALID_ARGUMENT = 2,
  QCS_STATUS_PARSE_ERROR = 3,
  QCS_STATUS_DIMENSION_MISMATCH = 4,
  QCS_STATUS_INFEASIBLE_SCHEDULE = 5,
  QCS_STATUS_BUFFER_TOO_SMALL = 6,
  QCS_STATUS_PANIC = 7,
} QcsStatus;

typedef struct QcsDensityMatrix QcsDensityMatrix;

typedef struct QcsPulseProgram QcsPulseProgram;

typedef struct QcsSpinSystem QcsSpinSystem;

/*
 Noise settings for [`qcs_run_nmr`]. The dephasing rate applies to every spin.
 */
typedef struct QcsNoise {
  double dephasing_rate;
  double pulse_angle_error;
  double pulse_angle_jitter;
  uint64_t seed;
} QcsNoise;

/*
 Summary of one NMR run.
 */
typedef struct QcsNmrResult {
  double fidelity;
  double overlap;
  double purity_ratio;
  double prep_residual;
  size_t j_peak;
  double probabilities[4];
} QcsNmrResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version, a static NUL-terminated string.
 */
const char *qcs_version(void);

/*
 Message of the last failed call on this thread, or "" after a success.
 Valid until the next library call on the same thread.
 */
const char *qcs_last_error_message(void);

/*
 # Safety
 `s` must be null or a string returned by this library, freed once.
 */
void qcs_string_free(char *s);

/*
 The default three-spin register.
 */
struct QcsSpinSystem *qcs_spin_system_new_default(void);

/*
 Parses a `key = value` spin-system config.

 # Safety
 `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum QcsStatus qcs_spin_system_from_config(const char *text, struct QcsSpinSystem **out);

/*
 Number of spins, or 0 for a null handle.

 # Safety
 `sys` must be null or a live handle.
 */
size_t qcs_spin_system_num_spins(const struct QcsSpinSystem *sys);

/*
 # Safety
 `sys` must be null or a handle from this library, freed once.
 */
void qcs_spin_system_free(struct QcsSpinSystem *sys);

/*
 Compiles a named gate (`h12`, `h2`, `h1`, `phase11`, `rx1` ... `ry3`).
 With `physical` set, selective delays and z rotations are expanded into
 hard pulses.

 # Safety
 `sys` must be a live handle, `name` a NUL-terminated string and `out` writable.
 */
enum QcsStatus qcs_compile_gate(const struct QcsSpinSystem *sys,
                                const char *name,
                                bool physical,
                                struct QcsPulseProgram **out);

/*
 Compiles the two-working-qubit synchronization network for `omega_delta`.

 # Safety
 `sys` must be a live handle and `out` writable.
 */
enum QcsStatus qcs_compile_network(const struct QcsSpinSystem *sys,
                                   double omega_delta,
                                   bool physical,
                                   struct QcsPulseProgram **out);

/*
 Parses a program in the text format.

 # Safety
 `text` must be a NUL-terminated string and `out` writable.
 */
enum QcsStatus qcs_program_parse(const char *text, struct QcsPulseProgram **out);

/*
 Text form of a program; release with `qcs_string_free`.

 # Safety
 `prog` must be a live handle and `out` writable.
 */
enum QcsStatus qcs_program_to_text(const struct QcsPulseProgram *prog, char **out);

/*
 Number of pulses in a program, or 0 for a null handle.

 # Safety
 `prog` must be null or a live handle.
 */
size_t qcs_program_pulse_count(const struct QcsPulseProgram *prog);

/*
 Phase-aligned max deviation of the program's propagator from a named
 ideal gate.

 # Safety
 Handles must be live, `gate` NUL-terminated and `deviation` writable.
 */
enum QcsStatus qcs_program_gate_deviation(const struct QcsPulseProgram *prog,
                                          const struct QcsSpinSystem *sys,
                                          const char *gate,
                                          double *deviation);

/*
 # Safety
 `prog` must be null or a handle from this library, freed once.
 */
void qcs_program_free(struct QcsPulseProgram *prog);

/*
 Gate-level protocol on `m` working qubits. Writes the `2^m` outcome
 probabilities to `probs` (capacity `len`) and the most likely outcome to
 `j_peak`.

 # Safety
 `probs` must point to `len` writable doubles and `j_peak` be writable.
 */
enum QcsStatus qcs_run_ideal(size_t m,
                             double omega_delta,
                             double *probs,
                             size_t len,
                             size_t *j_peak);

/*
 Simulated NMR experiment for `omega_delta` on a three-spin register.
 `noise` may be null. `final_state` may be null; otherwise it receives the
 tomographically reconstructed output state.

 # Safety
 `sys` must be a live handle, `noise` null or valid, `result` writable and
 `final_state` null or writable.
 */
enum QcsStatus qcs_run_nmr(const struct QcsSpinSystem *sys,
                           double omega_delta,
                           const struct QcsNoise *noise,
                           struct QcsNmrResult *result,
                           struct QcsDensityMatrix **final_state);

/*
 Matrix dimension, or 0 for a null handle.

 # Safety
 `rho` must be null or a live handle.
 */
size_t qcs_density_dim(const struct QcsDensityMatrix *rho);

/*
 Reads element `(row, col)`.

 # Safety
 `rho` must be a live handle; `re` and `im` writable.
 */
enum QcsStatus qcs_density_get(const struct QcsDensityMatrix *rho,
                               size_t row,
                               size_t col,
                               double *re,
                               double *im);

/*
 JSON dump `{"dim", "re", "im"}`; release with `qcs_string_free`.

 # Safety
 `rho` must be a live handle and `out` writable.
 */
enum QcsStatus qcs_density_to_json(const struct QcsDensityMatrix *rho, char **out);

/*
 # Safety
 `rho` must be null or a handle from this library, freed once.
 */
void qcs_density_free(struct QcsDensityMatrix *rho);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCS_H */
